//! Carrier-pulse duration search.
//!
//! A single carrier pulse of area `x = Omega t1` realizes the target
//! two-qubit operation when `C11 = cos(Omega_00 t1)` and
//! `C34 = sin(Omega_10 t1)` are both 1. The search maximizes
//! `min(C11, C34)` over `x` in `(0, omega_t_max]` with a uniform scan
//! followed by golden-section refinement of every promising bracket.
//!
//! Exact solutions exist on the family
//! `eta^2 = 1 - (m - 3/4)/n`, `Omega t1 = 4 n pi e^{eta^2/2}`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::dynamics::carrier_amplitudes;
use crate::error::{Error, Result};
use crate::rabi::LDParameter;

/// `|1 - eta^2|` below which the search is rejected.
pub const DEGENERATE_ETA_TOLERANCE: f64 = 1e-9;

/// Objective slack within which a shorter pulse wins.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Upper bound on `Omega t1` (the decoherence budget).
    pub omega_t_max: f64,
    /// Step of the coarse scan in `Omega t1`.
    pub grid_step: f64,
    /// Convergence tolerance of the refinement in `Omega t1`.
    pub refine_tol: f64,
    /// Searches whose best objective falls below this fail with `NoSolution`.
    pub objective_floor: f64,
}

impl SearchConfig {
    /// About 0.1 ms at `Omega / 2 pi = 500 kHz`, loosened to admit every
    /// reference row.
    pub const DEFAULT_BUDGET: f64 = 360.0;
    /// About 1 ms at `Omega / 2 pi = 500 kHz`.
    pub const RELAXED_BUDGET: f64 = 3600.0;

    pub fn with_budget(omega_t_max: f64) -> Self {
        Self {
            omega_t_max,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega_t_max,
            self.grid_step,
            self.refine_tol,
            self.objective_floor,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("search configuration must be finite"));
        }
        if self.omega_t_max <= 0.0 {
            return Err(Error::domain(format!(
                "duration budget must be positive, got {}",
                self.omega_t_max
            )));
        }
        if self.grid_step <= 0.0 || self.grid_step > 0.01 * self.omega_t_max {
            return Err(Error::domain(format!(
                "grid step {} must lie in (0, omega_t_max / 100]",
                self.grid_step
            )));
        }
        if self.refine_tol <= 0.0 || self.refine_tol >= self.grid_step {
            return Err(Error::domain(format!(
                "refine tolerance {} must lie in (0, grid_step)",
                self.refine_tol
            )));
        }
        if !(-1.0..=1.0).contains(&self.objective_floor) {
            return Err(Error::domain("objective floor must lie in [-1, 1]"));
        }
        Ok(())
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            omega_t_max: Self::DEFAULT_BUDGET,
            grid_step: 0.01,
            refine_tol: 1e-9,
            objective_floor: 0.9,
        }
    }
}

/// Best carrier pulse found for one Lamb-Dicke parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationResult {
    pub eta: f64,
    pub omega_t1: f64,
    pub c11: f64,
    pub c12: f64,
    pub c33: f64,
    pub c34: f64,
    /// `min(c11, c34)`.
    pub objective: f64,
}

impl OptimizationResult {
    pub fn at(omega_t1: f64, eta: LDParameter) -> Self {
        let a = carrier_amplitudes(omega_t1, eta);
        Self {
            eta: eta.value(),
            omega_t1,
            c11: a.c11,
            c12: a.c12,
            c33: a.c33,
            c34: a.c34,
            objective: a.c11.min(a.c34),
        }
    }
}

/// `min(C11, C34)` at pulse area `omega_t1`; equals 1 exactly when both the
/// `|0>` block returns to identity and the `|1>` block completes its swap.
pub fn objective(omega_t1: f64, eta: LDParameter) -> f64 {
    let a = carrier_amplitudes(omega_t1, eta);
    a.c11.min(a.c34)
}

fn check_degenerate(eta: LDParameter) -> Result<()> {
    if (1.0 - eta.squared()).abs() < DEGENERATE_ETA_TOLERANCE {
        return Err(Error::DegenerateEta { eta: eta.value() });
    }
    Ok(())
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    // the bracket ends are candidates too: the maximum may sit on a budget edge
    [(x1, f1), (x2, f2), (lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .fold(
            (x1, f1),
            |best, cand| if cand.1 > best.1 { cand } else { best },
        )
}

/// Best pulse area in `(0, omega_t_max]` for condition `C11 = C34 = 1`.
///
/// Ties within [`TIE_TOLERANCE`] go to the shorter pulse.
pub fn search_duration(eta: LDParameter, config: &SearchConfig) -> Result<OptimizationResult> {
    config.validate()?;
    check_degenerate(eta)?;

    let f = |x: f64| objective(x, eta);
    let step = config.grid_step;
    let budget = config.omega_t_max;
    let steps = (budget / step).floor() as usize;
    let mut grid: Vec<f64> = (1..=steps).map(|i| i as f64 * step).collect();
    if grid.last().is_none_or(|&x| budget - x > 1e-12 * budget) {
        grid.push(budget);
    }
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let grid_best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // Neither cos(a x) nor sin(b x) moves faster than max(a, b) per unit x,
    // so a bracket whose grid peak trails the best by more than one step of
    // that slope cannot hold the global maximum.
    let a = 0.5 * eta.debye_waller();
    let slope = a.max(a * (1.0 - eta.squared()).abs());
    let slack = slope * step;

    let n = grid.len();
    let mut candidates = Vec::new();
    for i in 0..n {
        let v = values[i];
        let left = if i == 0 { f(0.0) } else { values[i - 1] };
        let right = if i + 1 == n {
            f64::NEG_INFINITY
        } else {
            values[i + 1]
        };
        if v < left || v < right || v < grid_best - slack {
            continue;
        }
        let lo = if i == 0 { 0.0 } else { grid[i - 1] };
        let hi = if i + 1 == n { grid[i] } else { grid[i + 1] };
        let cand = golden_section_max(f, lo, hi, config.refine_tol);
        candidates.push(if cand.0 <= 0.0 { (grid[i], v) } else { cand });
    }
    let top = candidates
        .iter()
        .map(|c| c.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let (x, value) = candidates
        .into_iter()
        .filter(|c| c.1 >= top - TIE_TOLERANCE)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((grid[0], values[0]));
    if value < config.objective_floor {
        return Err(Error::NoSolution {
            eta: eta.value(),
            best: value,
            omega_t1: x,
            floor: config.objective_floor,
        });
    }
    Ok(OptimizationResult::at(x, eta))
}

/// An exact solution of `C11 = C34 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagicPoint {
    pub n: u32,
    pub m: u32,
    pub eta: LDParameter,
    pub omega_t1: f64,
}

/// `eta = sqrt(1 - (m - 3/4)/n)` and `Omega t1 = 4 n pi e^{eta^2/2}`.
pub fn magic_parameters(n: u32, m: u32) -> Result<(LDParameter, f64)> {
    if n == 0 || m == 0 {
        return Err(Error::domain("magic indices must be positive integers"));
    }
    let eta_sq = 1.0 - (m as f64 - 0.75) / n as f64;
    if !(eta_sq > 0.0 && eta_sq < 1.0) {
        return Err(Error::domain(format!(
            "(n = {n}, m = {m}) gives eta^2 = {eta_sq}, outside (0, 1)"
        )));
    }
    let eta = LDParameter::new(eta_sq.sqrt())?;
    Ok((eta, 4.0 * n as f64 * PI * (0.5 * eta_sq).exp()))
}

/// All magic points with `eta` in `[eta_lo, eta_hi]` and `Omega t1 <= budget`,
/// ordered by `n` then `m`.
// negated comparisons also reject NaN
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn enumerate_magic(eta_lo: f64, eta_hi: f64, budget: f64) -> Vec<MagicPoint> {
    if !(eta_lo <= eta_hi) || !(budget > 0.0) {
        return Vec::new();
    }
    // Omega t1 >= 4 n pi, so n is bounded by the budget.
    let n_max = (budget / (4.0 * PI)).floor() as u32;
    let mut out = Vec::new();
    for n in 1..=n_max {
        for m in 1..=n {
            if let Ok((eta, omega_t1)) = magic_parameters(n, m) {
                if eta.value() >= eta_lo && eta.value() <= eta_hi && omega_t1 <= budget {
                    out.push(MagicPoint {
                        n,
                        m,
                        eta,
                        omega_t1,
                    });
                }
            }
        }
    }
    out
}

/// Lamb-Dicke parameters `start, start + step, ...` up to `end` inclusive
/// (with a small tolerance so that `0.18:0.98:0.02` has 41 points).
// negated comparisons also reject NaN
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn eta_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    if !(start <= end) {
        return Vec::new();
    }
    if !(step > 0.0) || start == end {
        return vec![start];
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| start + i as f64 * step).collect()
}

/// One row of a table sweep; failures are kept in place.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub eta: f64,
    pub outcome: Result<OptimizationResult>,
}

/// Runs [`search_duration`] for every `eta` on the grid. Rows are evaluated
/// in parallel and returned in grid order.
pub fn reproduce_table(start: f64, end: f64, step: f64, config: &SearchConfig) -> Vec<TableRow> {
    eta_grid(start, end, step)
        .into_par_iter()
        .map(|eta| TableRow {
            eta,
            outcome: LDParameter::new(eta).and_then(|e| search_duration(e, config)),
        })
        .collect()
}
