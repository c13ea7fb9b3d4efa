//! Closed-form single-pulse dynamics.
//!
//! A square pulse tuned to the `k`-th blue sideband couples the pairs
//! `|m, lower> <-> |m+k, upper>` independently, each pair rotating at
//! `Omega_{m,k}`:
//!
//! ```text
//! |m,g>   -> cos(W t)|m,g>   + i^{k-1} e^{-i theta} sin(W t)|m+k,e>
//! |m+k,e> -> cos(W t)|m+k,e> - (-i)^{k-1} e^{i theta} sin(W t)|m,g>
//! ```
//!
//! with `W = Omega_{m,k}`; upper-level states with fewer than `k` quanta
//! are untouched. The carrier (`k = 0`) restricted to the computational
//! subspace gives [`carrier_matrix`].

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::ops::Mul;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rabi::{effective_rabi, i_pow, rabi_ratio, LDParameter};

/// Population allowed in Fock levels that a raising map would push out of
/// the truncation window.
pub const LEAKAGE_TOLERANCE: f64 = 1e-12;

const NORM_TOLERANCE: f64 = 1e-10;

/// Internal atomic level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Ground,
    Excited,
    Auxiliary,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Ground, Level::Excited, Level::Auxiliary];

    #[inline]
    pub(crate) fn slot(self) -> usize {
        match self {
            Level::Ground => 0,
            Level::Excited => 1,
            Level::Auxiliary => 2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Level::Ground => 'g',
            Level::Excited => 'e',
            Level::Auxiliary => 'a',
        }
    }
}

/// One square laser pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    k: usize,
    omega: f64,
    theta: f64,
    duration: f64,
}

impl PulseSpec {
    /// `k` is the sideband order (0 = carrier), `omega` the bare Rabi
    /// frequency in rad/s, `theta` the laser phase, `duration` in seconds.
    pub fn new(k: usize, omega: f64, theta: f64, duration: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::domain(format!(
                "pulse Rabi frequency must be positive, got {omega}"
            )));
        }
        if !duration.is_finite() || duration < 0.0 {
            return Err(Error::domain(format!(
                "pulse duration must be non-negative, got {duration}"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::domain("pulse phase must be finite"));
        }
        Ok(Self {
            k,
            omega,
            theta: theta.rem_euclid(TAU),
            duration,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Phase reduced to `[0, 2 pi)`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

/// Normalized state over `|m> (x) {g, e, a}` with `m` in `0..=truncation`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    truncation: usize,
    amplitudes: Vec<Complex64>,
}

impl JointState {
    /// Basis state `|m, level>`.
    pub fn basis(truncation: usize, m: usize, level: Level) -> Result<Self> {
        Self::check_truncation(truncation)?;
        if m > truncation {
            return Err(Error::domain(format!(
                "Fock index {m} outside truncation {truncation}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); (truncation + 1) * 3];
        amplitudes[m * 3 + level.slot()] = Complex64::new(1.0, 0.0);
        Ok(Self {
            truncation,
            amplitudes,
        })
    }

    /// Builds a state from amplitudes laid out as `m * 3 + level`.
    pub fn from_amplitudes(truncation: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_truncation(truncation)?;
        let expected = (truncation + 1) * 3;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: amplitudes.len(),
            });
        }
        let state = Self {
            truncation,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::domain(format!(
                "state is not normalized (|psi|^2 = {norm})"
            )));
        }
        Ok(state)
    }

    /// Embeds amplitudes on the computational subspace
    /// `(|0g>, |0e>, |1g>, |1e>)`.
    pub fn from_subspace(truncation: usize, gamma: [Complex64; 4]) -> Result<Self> {
        Self::check_truncation(truncation)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); (truncation + 1) * 3];
        for (idx, amp) in gamma.into_iter().enumerate() {
            let (m, level) = gamma_label(idx);
            amplitudes[m * 3 + level.slot()] = amp;
        }
        Self::from_amplitudes(truncation, amplitudes)
    }

    fn check_truncation(truncation: usize) -> Result<()> {
        if truncation < 1 {
            return Err(Error::domain("Fock truncation must be at least 1"));
        }
        Ok(())
    }

    pub(crate) fn from_raw(truncation: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), (truncation + 1) * 3);
        Self {
            truncation,
            amplitudes,
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, m: usize, level: Level) -> Complex64 {
        if m > self.truncation {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes[m * 3 + level.slot()]
    }

    pub(crate) fn amplitude_mut(&mut self, m: usize, level: Level) -> &mut Complex64 {
        &mut self.amplitudes[m * 3 + level.slot()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Total population in the top `levels` Fock levels (all internal levels).
    pub fn top_population(&self, levels: usize) -> f64 {
        let first = (self.truncation + 1).saturating_sub(levels);
        self.amplitudes[first * 3..]
            .iter()
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Amplitudes on `(|0g>, |0e>, |1g>, |1e>)`.
    pub fn subspace(&self) -> [Complex64; 4] {
        std::array::from_fn(|idx| {
            let (m, level) = gamma_label(idx);
            self.amplitude(m, level)
        })
    }

    /// Euclidean distance between two states on the same truncation.
    pub fn distance(&self, other: &JointState) -> Result<f64> {
        if self.truncation != other.truncation {
            return Err(Error::DimensionMismatch {
                expected: self.truncation,
                found: other.truncation,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest entrywise amplitude difference.
    pub fn max_deviation(&self, other: &JointState) -> Result<f64> {
        if self.truncation != other.truncation {
            return Err(Error::DimensionMismatch {
                expected: self.truncation,
                found: other.truncation,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `(m, level)` of the computational basis index `0..4`.
pub fn gamma_label(idx: usize) -> (usize, Level) {
    match idx {
        0 => (0, Level::Ground),
        1 => (0, Level::Excited),
        2 => (1, Level::Ground),
        3 => (1, Level::Excited),
        _ => panic!("computational subspace index {idx} out of range"),
    }
}

/// 4x4 unitary on `(|0g>, |0e>, |1g>, |1e>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceUnitary(Matrix4<Complex64>);

impl SubspaceUnitary {
    /// Tolerance used by [`SubspaceUnitary::new`].
    pub const UNITARITY_TOLERANCE: f64 = 1e-10;

    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        let candidate = Self(matrix);
        let defect = candidate.unitarity_defect();
        if defect > Self::UNITARITY_TOLERANCE || !defect.is_finite() {
            return Err(Error::NonUnitary { defect });
        }
        Ok(candidate)
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix4<Complex64>) -> Self {
        Self(matrix)
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Row-major construction; fails unless unitary.
    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Result<Self> {
        Self::new(Matrix4::from_fn(|r, c| rows[r][c]))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn rows(&self) -> [[Complex64; 4]; 4] {
        std::array::from_fn(|r| std::array::from_fn(|c| self.0[(r, c)]))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `max |U^dag U - I|` over entries.
    pub fn unitarity_defect(&self) -> f64 {
        (self.0.adjoint() * self.0 - Matrix4::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &SubspaceUnitary) -> f64 {
        (self.0 - other.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: [Complex64; 4]) -> [Complex64; 4] {
        std::array::from_fn(|r| (0..4).map(|c| self.0[(r, c)] * v[c]).sum())
    }
}

impl Mul for SubspaceUnitary {
    type Output = SubspaceUnitary;

    fn mul(self, rhs: SubspaceUnitary) -> SubspaceUnitary {
        SubspaceUnitary(self.0 * rhs.0)
    }
}

impl fmt::Display for SubspaceUnitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..4 {
            for c in 0..4 {
                let z = self.0[(r, c)];
                if c > 0 {
                    f.write_str("  ")?;
                }
                write!(f, "{:+.5}{:+.5}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The four real carrier amplitudes on the computational subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierAmplitudes {
    pub c11: f64,
    pub c12: f64,
    pub c33: f64,
    pub c34: f64,
}

/// `cos` and `sin` of an angle reduced modulo `2 pi` first.
#[inline]
pub(crate) fn reduced_sin_cos(angle: f64) -> (f64, f64) {
    angle.rem_euclid(TAU).sin_cos()
}

/// `C11 = cos(Omega_00 t1)`, `C12 = sin(Omega_00 t1)`,
/// `C33 = cos(Omega_10 t1)`, `C34 = sin(Omega_10 t1)` for `omega_t1 = Omega t1`.
pub fn carrier_amplitudes(omega_t1: f64, eta: LDParameter) -> CarrierAmplitudes {
    let (s0, c0) = reduced_sin_cos(rabi_ratio(eta, 0, 0) * omega_t1);
    let (s1, c1) = reduced_sin_cos(rabi_ratio(eta, 1, 0) * omega_t1);
    CarrierAmplitudes {
        c11: c0,
        c12: s0,
        c33: c1,
        c34: s1,
    }
}

/// Carrier evolution `C(t1, theta1)` on the computational subspace.
///
/// The upper off-diagonal entries carry `e^{-i(theta1 + pi/2)}` and the lower
/// ones `e^{i(theta1 - pi/2)}`. This equals [`evolve_closed_form`] for a
/// carrier pulse of laser phase `-theta1`.
pub fn carrier_matrix(omega_t1: f64, eta: LDParameter, theta1: f64) -> Result<SubspaceUnitary> {
    if !omega_t1.is_finite() || omega_t1 < 0.0 {
        return Err(Error::domain(format!(
            "carrier pulse area must be non-negative, got {omega_t1}"
        )));
    }
    let amps = carrier_amplitudes(omega_t1, eta);
    let upper = Complex64::from_polar(1.0, -(theta1 + FRAC_PI_2));
    let lower = Complex64::from_polar(1.0, theta1 - FRAC_PI_2);
    let re = |x: f64| Complex64::new(x, 0.0);
    let zero = re(0.0);
    Ok(SubspaceUnitary::from_matrix_unchecked(Matrix4::new(
        re(amps.c11),
        upper * amps.c12,
        zero,
        zero,
        lower * amps.c12,
        re(amps.c11),
        zero,
        zero,
        zero,
        zero,
        re(amps.c33),
        upper * amps.c34,
        zero,
        zero,
        lower * amps.c34,
        re(amps.c33),
    )))
}

/// Applies a `k`-th sideband pulse on the g <-> e transition.
pub fn evolve_closed_form(
    state: &JointState,
    pulse: &PulseSpec,
    eta: LDParameter,
) -> Result<JointState> {
    evolve_transition(state, pulse, eta, Level::Ground, Level::Excited)
}

/// Applies a `k`-th sideband pulse on the e <-> a transition, with `|a>`
/// in the role of the lower level. `|g>` amplitudes are untouched.
pub fn evolve_aux_sideband(
    state: &JointState,
    pulse: &PulseSpec,
    eta: LDParameter,
) -> Result<JointState> {
    evolve_transition(state, pulse, eta, Level::Auxiliary, Level::Excited)
}

fn evolve_transition(
    state: &JointState,
    pulse: &PulseSpec,
    eta: LDParameter,
    lower: Level,
    upper: Level,
) -> Result<JointState> {
    let k = pulse.k();
    let top = state.truncation();
    let lower_leak: f64 = ((top + 1).saturating_sub(k)..=top)
        .filter(|_| k > 0)
        .map(|m| state.amplitude(m, lower).norm_sqr())
        .sum();
    if lower_leak >= LEAKAGE_TOLERANCE {
        return Err(Error::TruncationLeakage {
            population: lower_leak,
            levels: k,
        });
    }

    let forward = i_pow((k + 3) % 4) * Complex64::from_polar(1.0, -pulse.theta());
    let backward = -forward.conj();

    let mut out = state.clone();
    for m in 0..(top + 1).saturating_sub(k) {
        let rabi = effective_rabi(pulse.omega(), eta, m, k)?;
        let (s, c) = reduced_sin_cos(rabi.angle(pulse.duration()));
        let lo = state.amplitude(m, lower);
        let hi = state.amplitude(m + k, upper);
        *out.amplitude_mut(m, lower) = lo * c + backward * s * hi;
        *out.amplitude_mut(m + k, upper) = forward * s * lo + hi * c;
    }
    Ok(out)
}

/// First blue-sideband pulse on e <-> a restricted to `(|1e>, |0a>)`:
///
/// ```text
/// |1e> -> cos(W t2)|1e> - e^{i theta2} sin(W t2)|0a>
/// |0a> -> e^{-i theta2} sin(W t2)|1e> + cos(W t2)|0a>
/// ```
///
/// with `W = Omega_{0,1}`. `|0g>`, `|1g>` and `|0e>` are fixed points.
pub fn sideband_aux_map(
    eta: LDParameter,
    omega: f64,
    t2: f64,
    theta2: f64,
) -> Result<Matrix2<Complex64>> {
    if !t2.is_finite() || t2 < 0.0 {
        return Err(Error::domain(format!(
            "pulse duration must be non-negative, got {t2}"
        )));
    }
    let rabi = effective_rabi(omega, eta, 0, 1)?;
    let (s, c) = reduced_sin_cos(rabi.angle(t2));
    let phase = Complex64::from_polar(1.0, theta2);
    let c = Complex64::new(c, 0.0);
    Ok(Matrix2::new(c, phase.conj() * s, -phase * s, c))
}
