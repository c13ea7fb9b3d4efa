//! Flag parsing, config-file merging and the resolved run configuration.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ion_cnot::SearchConfig;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "ion-cnot",
    version,
    about = "Single-ion CNOT synthesis beyond the Lamb-Dicke limit"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal carrier durations and amplitudes over a range of eta.
    Table,
    /// Carrier pulse + controlled-Z for one eta, compared with the CNOT.
    Synthesize,
    /// Compare the closed-form dynamics with the matrix-exponential oracle.
    Validate(ValidateArgs),
    /// Amplitude drop under a carrier duration error of --dt-us.
    Sensitivity,
    /// Exact solutions with eta in the requested interval.
    Magic,
    /// Effective Rabi frequencies Omega_(m,k).
    Rabi(RabiArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Fixed Fock truncation M (default: doubling until converged).
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Restrict to one sideband order (default: 0, 1 and 2).
    #[arg(long)]
    pub k: Option<usize>,
    /// Measure the rotating-wave error against the full Hamiltonian instead.
    #[arg(long)]
    pub rwa: bool,
    /// Drive-to-trap frequency ratio for --rwa.
    #[arg(long, default_value_t = 0.01)]
    pub omega_over_nu: f64,
}

#[derive(Debug, Args)]
pub struct RabiArgs {
    #[arg(long, default_value_t = 5)]
    pub m_max: usize,
    #[arg(long, default_value_t = 2)]
    pub k_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// Single Lamb-Dicke parameter.
    #[arg(long, global = true)]
    pub eta: Option<f64>,
    /// Lamb-Dicke range START:END[:STEP] (step defaults to 0.02).
    #[arg(long, global = true, value_name = "START:END[:STEP]")]
    pub eta_range: Option<String>,
    /// Carrier Rabi frequency Omega / 2 pi in Hz [default: 500000].
    #[arg(long, global = true)]
    pub omega_hz: Option<f64>,
    /// Duration budget as a pulse area Omega t [default: 360].
    #[arg(long, global = true)]
    pub budget_omega_t: Option<f64>,
    /// Duration budget in ms, converted with --omega-hz.
    #[arg(long, global = true)]
    pub budget_time_ms: Option<f64>,
    /// Coarse scan step in Omega t [default: 0.01].
    #[arg(long, global = true)]
    pub grid_step: Option<f64>,
    /// Refinement tolerance in Omega t [default: 1e-9].
    #[arg(long, global = true)]
    pub refine_tol: Option<f64>,
    /// Carrier phase of the synthesized gate [default: pi/2].
    #[arg(long, global = true)]
    pub theta1_rad: Option<f64>,
    /// Duration error in microseconds [default: 0.1].
    #[arg(long, global = true)]
    pub dt_us: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Fail (exit 4, or 3 for domain errors) if any row has no solution.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Flat key=value file with the same keys as the long flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.trim()
        .parse()
        .map_err(|_| CliError::usage(format!("invalid value {raw:?} for {key}")))
}

fn parse_bool(key: &str, raw: &str) -> Result<bool, CliError> {
    match raw.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(CliError::usage(format!(
            "invalid value {other:?} for {key}"
        ))),
    }
}

impl CommonArgs {
    /// Fills every flag left unset on the command line from `--config`.
    pub fn merge_config_file(&mut self) -> Result<(), CliError> {
        let Some(path) = &self.config else {
            return Ok(());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    lineno + 1
                ))
            })?;
            entries.insert(key.trim().replace('_', "-"), value.trim().to_string());
        }
        for (key, raw) in &entries {
            let key = key.as_str();
            match key {
                "eta" => fill(&mut self.eta, key, raw)?,
                "eta-range" => {
                    if self.eta_range.is_none() {
                        self.eta_range = Some(raw.clone());
                    }
                }
                "omega-hz" => fill(&mut self.omega_hz, key, raw)?,
                "budget-omega-t" => fill(&mut self.budget_omega_t, key, raw)?,
                "budget-time-ms" => fill(&mut self.budget_time_ms, key, raw)?,
                "grid-step" => fill(&mut self.grid_step, key, raw)?,
                "refine-tol" => fill(&mut self.refine_tol, key, raw)?,
                "theta1-rad" => fill(&mut self.theta1_rad, key, raw)?,
                "dt-us" => fill(&mut self.dt_us, key, raw)?,
                "format" => fill(&mut self.format, key, raw)?,
                "out" => {
                    if self.out.is_none() {
                        self.out = Some(PathBuf::from(raw));
                    }
                }
                "strict" => self.strict |= parse_bool(key, raw)?,
                other => return Err(CliError::usage(format!("unknown config key {other:?}"))),
            }
        }
        // a single eta on either side replaces a range from the file, and vice versa
        if self.eta.is_some() && self.eta_range.is_some() {
            let from_file_eta = entries.contains_key("eta");
            let from_file_range = entries.contains_key("eta-range");
            if from_file_eta && !from_file_range {
                self.eta = None;
            } else if from_file_range && !from_file_eta {
                self.eta_range = None;
            }
        }
        Ok(())
    }
}

fn fill<T: FromStr>(slot: &mut Option<T>, key: &str, raw: &str) -> Result<(), CliError> {
    if slot.is_none() {
        *slot = Some(parse_value(key, raw)?);
    }
    Ok(())
}

/// `START:END[:STEP]` as written; ordering is checked per command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl EtaRange {
    pub const DEFAULT_STEP: f64 = 0.02;

    pub fn parse(raw: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = raw.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(CliError::usage(format!(
                "--eta-range expects START:END[:STEP], got {raw:?}"
            )));
        }
        let start: f64 = parse_value("--eta-range", parts[0])?;
        let end: f64 = parse_value("--eta-range", parts[1])?;
        let step = match parts.get(2) {
            Some(s) => parse_value("--eta-range", s)?,
            None => Self::DEFAULT_STEP,
        };
        if !(start.is_finite() && end.is_finite() && step.is_finite()) || step <= 0.0 {
            return Err(CliError::usage(format!("invalid --eta-range {raw:?}")));
        }
        Ok(Self { start, end, step })
    }

    pub fn single(eta: f64) -> Self {
        Self {
            start: eta,
            end: eta,
            step: Self::DEFAULT_STEP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaSelection {
    None,
    Single(f64),
    Range(EtaRange),
}

/// Fully resolved parameters shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub eta: EtaSelection,
    pub omega_hz: f64,
    pub budget_omega_t: f64,
    pub grid_step: f64,
    pub refine_tol: f64,
    pub theta1: f64,
    pub dt_us: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub strict: bool,
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let eta = match (args.eta, &args.eta_range) {
            (Some(_), Some(_)) => {
                return Err(CliError::usage(
                    "give either --eta or --eta-range, not both",
                ))
            }
            (Some(e), None) => EtaSelection::Single(e),
            (None, Some(r)) => EtaSelection::Range(EtaRange::parse(r)?),
            (None, None) => EtaSelection::None,
        };
        let omega_hz = args.omega_hz.unwrap_or(500e3);
        if !(omega_hz.is_finite() && omega_hz > 0.0) {
            return Err(CliError::usage(format!(
                "--omega-hz must be positive, got {omega_hz}"
            )));
        }
        let budget_omega_t = match (args.budget_omega_t, args.budget_time_ms) {
            (Some(_), Some(_)) => {
                return Err(CliError::usage(
                    "give either --budget-omega-t or --budget-time-ms, not both",
                ))
            }
            (Some(b), None) => b,
            (None, Some(ms)) => TAU * omega_hz * ms * 1e-3,
            (None, None) => SearchConfig::DEFAULT_BUDGET,
        };
        if !(budget_omega_t.is_finite() && budget_omega_t > 0.0) {
            return Err(CliError::usage(format!(
                "duration budget must be positive, got {budget_omega_t}"
            )));
        }
        let defaults = SearchConfig::default();
        let dt_us = args.dt_us.unwrap_or(0.1);
        if !(dt_us.is_finite() && dt_us >= 0.0) {
            return Err(CliError::usage(format!(
                "--dt-us must be non-negative, got {dt_us}"
            )));
        }
        Ok(Self {
            eta,
            omega_hz,
            budget_omega_t,
            grid_step: args.grid_step.unwrap_or(defaults.grid_step),
            refine_tol: args.refine_tol.unwrap_or(defaults.refine_tol),
            theta1: args.theta1_rad.unwrap_or(FRAC_PI_2),
            dt_us,
            format: args.format.unwrap_or(Format::Text),
            out: args.out.clone(),
            strict: args.strict,
        })
    }

    /// Angular Rabi frequency in rad/s.
    pub fn omega(&self) -> f64 {
        TAU * self.omega_hz
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            omega_t_max: self.budget_omega_t,
            grid_step: self.grid_step,
            refine_tol: self.refine_tol,
            ..SearchConfig::default()
        }
    }

    pub fn require_single_eta(&self, command: &str) -> Result<f64, CliError> {
        match self.eta {
            EtaSelection::Single(e) => Ok(e),
            EtaSelection::Range(_) => Err(CliError::usage(format!(
                "{command} takes a single --eta, not --eta-range"
            ))),
            EtaSelection::None => Err(CliError::usage(format!("{command} requires --eta"))),
        }
    }

    pub fn require_eta(&self, command: &str) -> Result<EtaRange, CliError> {
        match self.eta {
            EtaSelection::Single(e) => Ok(EtaRange::single(e)),
            EtaSelection::Range(r) => Ok(r),
            EtaSelection::None => Err(CliError::usage(format!(
                "{command} requires --eta or --eta-range"
            ))),
        }
    }

    pub fn to_json(&self, command: &str) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("command".into(), command.into());
        match self.eta {
            EtaSelection::Single(e) => {
                map.insert("eta".into(), e.into());
            }
            EtaSelection::Range(r) => {
                map.insert(
                    "eta_range".into(),
                    serde_json::json!({ "start": r.start, "end": r.end, "step": r.step }),
                );
            }
            EtaSelection::None => {}
        }
        map.insert("omega_hz".into(), self.omega_hz.into());
        map.insert("budget_omega_t".into(), self.budget_omega_t.into());
        map.insert("grid_step".into(), self.grid_step.into());
        map.insert("refine_tol".into(), self.refine_tol.into());
        map.insert("theta1_rad".into(), self.theta1.into());
        map.insert("dt_us".into(), self.dt_us.into());
        map.insert("strict".into(), self.strict.into());
        serde_json::Value::Object(map)
    }
}
