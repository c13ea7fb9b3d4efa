//! Gate algebra on the computational subspace `(|0g>, |0e>, |1g>, |1e>)`.
//!
//! A carrier pulse satisfying `C11 = C34 = 1` leaves the `|0>` block alone
//! and swaps the `|1>` block up to the phases `e^{-i(theta1 + pi/2)}` and
//! `e^{i(theta1 - pi/2)}`. At `theta1 = pi/2`, following a controlled-Z
//! (a `2 pi` round trip `|1e> -> |0a> -> |1e>`) removes them and leaves the
//! standard CNOT with the motional qubit as control.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::dynamics::{carrier_amplitudes, carrier_matrix, SubspaceUnitary};
use crate::error::{Error, Result};
use crate::optimizer::{search_duration, OptimizationResult, SearchConfig};
use crate::rabi::{effective_rabi, LDParameter};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Ideal residual operation of a perfect carrier pulse with phase `theta1`.
pub fn c1_gate(theta1: f64) -> SubspaceUnitary {
    let upper = Complex64::from_polar(1.0, -(theta1 + FRAC_PI_2));
    let lower = Complex64::from_polar(1.0, theta1 - FRAC_PI_2);
    SubspaceUnitary::from_matrix_unchecked(Matrix4::new(
        ONE, ZERO, ZERO, ZERO, //
        ZERO, ONE, ZERO, ZERO, //
        ZERO, ZERO, ZERO, upper, //
        ZERO, ZERO, lower, ZERO,
    ))
}

/// `diag(1, 1, 1, -1)`.
pub fn cz_gate() -> SubspaceUnitary {
    SubspaceUnitary::from_matrix_unchecked(Matrix4::from_diagonal(&nalgebra::Vector4::new(
        ONE, ONE, ONE, -ONE,
    )))
}

/// CNOT with the motional qubit as control: identity on `|0>`, bit flip on `|1>`.
pub fn cnot_target() -> SubspaceUnitary {
    SubspaceUnitary::from_matrix_unchecked(Matrix4::new(
        ONE, ZERO, ZERO, ZERO, //
        ZERO, ONE, ZERO, ZERO, //
        ZERO, ZERO, ZERO, ONE, //
        ZERO, ZERO, ONE, ZERO,
    ))
}

/// A realized gate together with its overlap with a target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateReport {
    pub gate: SubspaceUnitary,
    pub target: SubspaceUnitary,
    /// `|Tr(target^dag gate)| / 4`, insensitive to a global phase.
    pub fidelity_trace: f64,
    /// Smallest `|<target column | gate column>|^2` over the four basis inputs.
    pub fidelity_worst_element: f64,
}

impl GateReport {
    pub fn evaluate(gate: SubspaceUnitary, target: SubspaceUnitary) -> Self {
        let overlap = target.matrix().adjoint() * gate.matrix();
        let fidelity_trace = overlap.trace().norm() / 4.0;
        let fidelity_worst_element = (0..4)
            .map(|c| overlap[(c, c)].norm_sqr())
            .fold(f64::INFINITY, f64::min);
        Self {
            gate,
            target,
            fidelity_trace,
            fidelity_worst_element,
        }
    }
}

/// Report for `c1 * c2` (so `c2` acts first) against [`cnot_target`].
pub fn compose_cnot(c1: &SubspaceUnitary, c2: &SubspaceUnitary) -> Result<GateReport> {
    for u in [c1, c2] {
        let defect = u.unitarity_defect();
        if defect > SubspaceUnitary::UNITARITY_TOLERANCE {
            return Err(Error::NonUnitary { defect });
        }
    }
    Ok(GateReport::evaluate(*c1 * *c2, cnot_target()))
}

/// Result of the two-pulse pipeline for one Lamb-Dicke parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Synthesis {
    pub optimization: OptimizationResult,
    pub theta1: f64,
    pub report: GateReport,
    /// Controlled-Z pulse duration in seconds.
    pub cz_duration: f64,
}

/// Carrier pulse at the optimized duration with `theta1 = pi/2`, followed
/// by an ideal controlled-Z, compared with the CNOT.
pub fn synthesize(eta: LDParameter, omega: f64, config: &SearchConfig) -> Result<Synthesis> {
    synthesize_with_phase(eta, omega, config, FRAC_PI_2)
}

pub fn synthesize_with_phase(
    eta: LDParameter,
    omega: f64,
    config: &SearchConfig,
    theta1: f64,
) -> Result<Synthesis> {
    let cz_time = cz_duration(eta, omega)?;
    let optimization = search_duration(eta, config)?;
    let carrier = carrier_matrix(optimization.omega_t1, eta, theta1)?;
    let report = compose_cnot(&carrier, &cz_gate())?;
    Ok(Synthesis {
        optimization,
        theta1,
        report,
        cz_duration: cz_time,
    })
}

/// Amplitude loss of `C11` and `C34` when the carrier duration is off by `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityReport {
    pub eta: f64,
    pub omega_t1: f64,
    /// Shift of the pulse area, `Omega dt`.
    pub area_shift: f64,
    pub nominal_c11: f64,
    pub nominal_c34: f64,
    /// Worse of the two perturbed values `C11(Omega t1 +/- Omega dt)`.
    pub perturbed_c11: f64,
    pub perturbed_c34: f64,
    pub drop_c11: f64,
    pub drop_c34: f64,
}

impl SensitivityReport {
    pub fn worst_drop(&self) -> f64 {
        self.drop_c11.max(self.drop_c34)
    }

    pub fn worst_perturbed(&self) -> f64 {
        self.perturbed_c11.min(self.perturbed_c34)
    }
}

/// Evaluates `C11` and `C34` at `Omega t1 +/- Omega dt` (with `omega` in rad/s
/// and `dt` in seconds) and reports the worst drop from the nominal values.
pub fn sensitivity(
    eta: LDParameter,
    omega_t1: f64,
    omega: f64,
    dt: f64,
) -> Result<SensitivityReport> {
    if !dt.is_finite() || dt < 0.0 {
        return Err(Error::domain(format!(
            "duration error must be non-negative, got {dt}"
        )));
    }
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::domain(format!(
            "Rabi frequency must be positive, got {omega}"
        )));
    }
    let shift = omega * dt;
    let nominal = carrier_amplitudes(omega_t1, eta);
    let plus = carrier_amplitudes(omega_t1 + shift, eta);
    let minus = carrier_amplitudes(omega_t1 - shift, eta);
    let perturbed_c11 = plus.c11.min(minus.c11);
    let perturbed_c34 = plus.c34.min(minus.c34);
    Ok(SensitivityReport {
        eta: eta.value(),
        omega_t1,
        area_shift: shift,
        nominal_c11: nominal.c11,
        nominal_c34: nominal.c34,
        perturbed_c11,
        perturbed_c34,
        drop_c11: nominal.c11 - perturbed_c11,
        drop_c34: nominal.c34 - perturbed_c34,
    })
}

/// Duration of the controlled-Z pulse, `t2 = pi / Omega_{0,1}`, in seconds.
pub fn cz_duration(eta: LDParameter, omega: f64) -> Result<f64> {
    Ok(PI / effective_rabi(omega, eta, 0, 1)?.value())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn c1_at_quarter_turn() {
        let u = c1_gate(FRAC_PI_2);
        assert!((u.entry(2, 3) - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((u.entry(3, 2) - c(1.0, 0.0)).norm() < 1e-15);
        let v = c1_gate(-FRAC_PI_2);
        assert!((v.entry(2, 3) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((v.entry(3, 2) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn c1_squares_to_minus_one_on_upper_block() {
        let want = SubspaceUnitary::from_matrix_unchecked(Matrix4::from_diagonal(
            &nalgebra::Vector4::new(ONE, ONE, -ONE, -ONE),
        ));
        for &theta in &[0.0, 0.4, 2.0, -1.3] {
            let u = c1_gate(theta);
            assert!(u.unitarity_defect() < 1e-15);
            assert!((u * u).max_abs_diff(&want) < 1e-15);
        }
    }

    #[test]
    fn cz_and_cnot_are_involutions() {
        let id = SubspaceUnitary::identity();
        assert_eq!(cz_gate() * cz_gate(), id);
        assert_eq!(cnot_target() * cnot_target(), id);
        assert_eq!(cz_gate().entry(3, 3), c(-1.0, 0.0));
        for r in 0..4 {
            for col in 0..4 {
                let z = cz_gate().entry(r, col);
                assert_eq!(z.im, 0.0);
                if r != col {
                    assert_eq!(z, ZERO);
                }
            }
        }
        let flipped = cnot_target().apply([ZERO, ZERO, ONE, ZERO]);
        assert_eq!(flipped, [ZERO, ZERO, ZERO, ONE]);
        let kept = cnot_target().apply([ZERO, ONE, ZERO, ZERO]);
        assert_eq!(kept, [ZERO, ONE, ZERO, ZERO]);
    }

    #[test]
    fn composition_gives_cnot() {
        let r = compose_cnot(&c1_gate(FRAC_PI_2), &cz_gate()).unwrap();
        assert!(r.gate.max_abs_diff(&cnot_target()) < 1e-15);
        assert!((r.fidelity_trace - 1.0).abs() < 1e-15);
        assert!((r.fidelity_worst_element - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wrong_phase_loses_trace_fidelity() {
        let r = compose_cnot(&c1_gate(0.0), &cz_gate()).unwrap();
        // product upper block [[0, -i], [-i, 0]] . diag(1, -1) = [[0, i], [-i, 0]]
        let overlap = 2.0 + (c(0.0, 1.0) + c(0.0, -1.0)).re;
        assert!((r.fidelity_trace - overlap.abs() / 4.0).abs() < 1e-15);
        assert!(r.fidelity_trace < 1.0);
    }

    #[test]
    fn identity_against_cnot() {
        let id = SubspaceUnitary::identity();
        let r = compose_cnot(&id, &id).unwrap();
        assert!((r.fidelity_trace - 0.5).abs() < 1e-15);
        assert_eq!(r.fidelity_worst_element, 0.0);
    }

    #[test]
    fn compose_rejects_non_unitary() {
        let mut m = Matrix4::<Complex64>::identity();
        m[(0, 0)] = c(2.0, 0.0);
        let bad = SubspaceUnitary::from_matrix_unchecked(m);
        assert!(matches!(
            compose_cnot(&bad, &cz_gate()),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn synthesis_at_exact_row() {
        let omega = TAU * 500e3;
        let s = synthesize(
            LDParameter::new(0.24).unwrap(),
            omega,
            &SearchConfig::default(),
        )
        .unwrap();
        assert!(s.report.fidelity_worst_element >= 0.9999);
        assert!(s.optimization.omega_t1 <= 360.0);
    }

    #[test]
    fn sensitivity_without_error_is_zero() {
        let r = sensitivity(LDParameter::new(0.5).unwrap(), 42.72, TAU * 5e5, 0.0).unwrap();
        assert_eq!(r.worst_drop(), 0.0);
        assert!(sensitivity(LDParameter::new(0.5).unwrap(), 42.72, TAU * 5e5, -1.0).is_err());
    }

    #[test]
    fn sensitivity_on_exact_row_follows_the_slow_carrier() {
        let eta = LDParameter::new(0.5).unwrap();
        let (_, x) = crate::optimizer::magic_parameters(3, 3).unwrap();
        let omega = TAU * 5e5;
        let dt = 1e-7;
        let r = sensitivity(eta, x, omega, dt).unwrap();
        // at an exact point both amplitudes sit on a maximum, so the drop is
        // 1 - cos of the phase each branch accumulates in dt
        let a = 0.5 * eta.debye_waller() * omega * dt;
        assert!((r.drop_c11 - (1.0 - a.cos())).abs() < 1e-12);
        assert!((r.drop_c34 - (1.0 - (a * (1.0 - 0.25)).cos())).abs() < 1e-12);
    }

    #[test]
    fn cz_duration_round_trip() {
        let omega = TAU * 500e3;
        for &e in &[0.18, 0.5, 0.98] {
            let eta = LDParameter::new(e).unwrap();
            let t2 = cz_duration(eta, omega).unwrap();
            let w = effective_rabi(omega, eta, 0, 1).unwrap().value();
            assert!((t2 * w - PI).abs() < 1e-12);
        }
    }
}
