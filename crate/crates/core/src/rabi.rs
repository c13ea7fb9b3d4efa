//! Effective Rabi frequencies and matrix elements of the displacement-type
//! operator `exp[i eta (a + a^dag)]` in the Fock basis.
//!
//! Both quantities reduce to generalized Laguerre polynomials:
//!
//! ```text
//! <m+k| exp[i eta (a + a^dag)] |m> = e^{-eta^2/2} (i eta)^k sqrt(m!/(m+k)!) L_m^k(eta^2)
//! Omega_{m,k} = (Omega/2) e^{-eta^2/2} eta^k sqrt(m!/(m+k)!) L_m^k(eta^2)
//! ```
//!
//! Laguerre values come from the upward three-term recurrence in `m`, and
//! the factorial ratio is accumulated in log space so that large Fock
//! indices never overflow.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest Fock index accepted by the public evaluators.
pub const MAX_FOCK: usize = 200;

/// Dimensionless Lamb-Dicke parameter, strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LDParameter(f64);

impl LDParameter {
    pub fn new(eta: f64) -> Result<Self> {
        if !eta.is_finite() || eta <= 0.0 {
            return Err(Error::domain(format!(
                "Lamb-Dicke parameter must be positive and finite, got {eta}"
            )));
        }
        Ok(Self(eta))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `eta^2`, the Laguerre argument.
    #[inline]
    pub fn squared(self) -> f64 {
        self.0 * self.0
    }

    /// Debye-Waller factor `e^{-eta^2/2}`.
    #[inline]
    pub fn debye_waller(self) -> f64 {
        (-0.5 * self.squared()).exp()
    }
}

impl fmt::Display for LDParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Signed effective Rabi frequency in rad/s.
///
/// The sign follows the Laguerre factor, which changes sign past its roots.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RabiFrequency(f64);

impl RabiFrequency {
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Rotation angle accumulated after `duration` seconds.
    #[inline]
    pub fn angle(self, duration: f64) -> f64 {
        self.0 * duration
    }
}

/// Generalized Laguerre polynomial `L_m^k(x)` by upward recurrence:
///
/// ```text
/// L_0^k = 1,  L_1^k = 1 + k - x,
/// (n+1) L_{n+1}^k = (2n + 1 + k - x) L_n^k - (n + k) L_{n-1}^k
/// ```
pub fn laguerre_assoc(m: usize, k: usize, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!(
            "Laguerre argument must be finite and non-negative, got {x}"
        )));
    }
    if m > MAX_FOCK || k > MAX_FOCK {
        return Err(Error::domain(format!(
            "Laguerre indices (m = {m}, k = {k}) exceed {MAX_FOCK}"
        )));
    }
    Ok(laguerre_recurrence(m, k, x))
}

pub(crate) fn laguerre_recurrence(m: usize, k: usize, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut curr = 1.0 + k - x;
    for n in 1..m {
        let n = n as f64;
        let next = ((2.0 * n + 1.0 + k - x) * curr - (n + k) * prev) / (n + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// `ln(m! / (m+k)!)`, i.e. `ln Gamma(m+1) - ln Gamma(m+k+1)`, telescoped
/// into a sum of `k` logarithms so no cancellation between large values occurs.
pub(crate) fn ln_factorial_ratio(m: usize, k: usize) -> f64 {
    -((m + 1)..=(m + k)).map(|i| (i as f64).ln()).sum::<f64>()
}

/// Real amplitude shared by both evaluators:
/// `e^{-eta^2/2} eta^k sqrt(m!/(m+k)!) L_m^k(eta^2)`.
fn reduced_coupling(eta: LDParameter, m: usize, k: usize) -> f64 {
    let x = eta.squared();
    let log_scale = -0.5 * x + k as f64 * eta.value().ln() + 0.5 * ln_factorial_ratio(m, k);
    log_scale.exp() * laguerre_recurrence(m, k, x)
}

/// Effective Rabi frequency `Omega_{m,k}` of the `|m,g> <-> |m+k,e>` pair.
pub fn effective_rabi(omega: f64, eta: LDParameter, m: usize, k: usize) -> Result<RabiFrequency> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::domain(format!(
            "Rabi frequency must be positive and finite, got {omega}"
        )));
    }
    if m + k > MAX_FOCK {
        return Err(Error::domain(format!(
            "Fock index m + k = {} exceeds {MAX_FOCK}",
            m + k
        )));
    }
    Ok(RabiFrequency(0.5 * omega * reduced_coupling(eta, m, k)))
}

/// `Omega_{m,k} / Omega` for a unit drive. Callers working in the
/// dimensionless time `Omega t` use this directly.
pub(crate) fn rabi_ratio(eta: LDParameter, m: usize, k: usize) -> f64 {
    0.5 * reduced_coupling(eta, m, k)
}

/// `<row| exp[i eta (a + a^dag)] |col>`.
///
/// The operator is the exponential of `i eta` times a real symmetric matrix,
/// so it is itself symmetric: elements below the diagonal are obtained from
/// the `row >= col` formula with the indices exchanged.
pub fn displacement_element(eta: LDParameter, row: usize, col: usize) -> Result<Complex64> {
    if row > MAX_FOCK || col > MAX_FOCK {
        return Err(Error::domain(format!(
            "Fock indices ({row}, {col}) exceed {MAX_FOCK}"
        )));
    }
    let (low, k) = if row >= col {
        (col, row - col)
    } else {
        (row, col - row)
    };
    Ok(i_pow(k) * reduced_coupling(eta, low, k))
}

/// `i^k`.
pub(crate) fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}
