//! Truncated-Fock-space oracle.
//!
//! Builds the sideband Hamiltonian (rotating-wave form, any order `k`) and
//! the full rotating-frame Hamiltonian as explicit matrices and propagates
//! states through `exp(-i H t)` obtained from a Hermitian
//! eigendecomposition. Nothing here goes through the Laguerre closed form
//! for the sideband couplings: they are assembled from the operator series
//! `sum_j (i eta)^{2j} / (j! (j+k)!) (a^dag)^{j+k} a^j` applied to number states.
//!
//! All Hamiltonians are stored divided by hbar (rad/s).

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::dynamics::{evolve_closed_form, JointState, Level, PulseSpec};
use crate::error::{Error, Result};
use crate::rabi::{displacement_element, i_pow, LDParameter};

/// Top-two-level population allowed by the truncation policy.
pub const TRUNCATION_TOLERANCE: f64 = 1e-12;

/// Largest truncation the doubling policy will try.
pub const MAX_TRUNCATION: usize = 128;

/// Hermitian matrix on `|m> (x) levels`, `m` in `0..=truncation`.
#[derive(Debug, Clone)]
pub struct TruncatedHamiltonian {
    matrix: DMatrix<Complex64>,
    truncation: usize,
    levels: Vec<Level>,
}

impl TruncatedHamiltonian {
    fn zeros(truncation: usize, levels: Vec<Level>) -> Self {
        let dim = (truncation + 1) * levels.len();
        Self {
            matrix: DMatrix::zeros(dim, dim),
            truncation,
            levels,
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Basis index of `|m, level>`, if the level is part of this Hamiltonian.
    pub fn index(&self, m: usize, level: Level) -> Option<usize> {
        if m > self.truncation {
            return None;
        }
        let pos = self.levels.iter().position(|&l| l == level)?;
        Some(m * self.levels.len() + pos)
    }

    /// Inverse of [`TruncatedHamiltonian::index`].
    pub fn label(&self, index: usize) -> (usize, Level) {
        let l = self.levels.len();
        (index / l, self.levels[index % l])
    }

    pub fn element(&self, row: (usize, Level), col: (usize, Level)) -> Complex64 {
        match (self.index(row.0, row.1), self.index(col.0, col.1)) {
            (Some(r), Some(c)) => self.matrix[(r, c)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `max |H - H^dag|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    fn set_coupling(&mut self, upper: (usize, Level), lower: (usize, Level), value: Complex64) {
        let r = self.index(upper.0, upper.1).expect("upper label in basis");
        let c = self.index(lower.0, lower.1).expect("lower label in basis");
        self.matrix[(r, c)] = value;
        self.matrix[(c, r)] = value.conj();
    }
}

/// `<m - lower + raise| (a^dag)^raise a^lower |m>`, zero when `lower > m`.
fn ladder_element(m: usize, raise: usize, lower: usize) -> f64 {
    if lower > m {
        return 0.0;
    }
    let annihilate: f64 = (0..lower).map(|i| ((m - i) as f64).sqrt()).product();
    let create: f64 = (1..=raise)
        .map(|i| ((m - lower + i) as f64).sqrt())
        .product();
    annihilate * create
}

/// `sum_j (i eta)^{2j} / (j! (j+k)!) <m+k| (a^dag)^{j+k} a^j |m>`; the series
/// terminates at `j = m` because `a^j |m> = 0` beyond it.
fn sideband_series(eta: LDParameter, m: usize, k: usize) -> f64 {
    let x = eta.squared();
    let mut coeff = 1.0 / (1..=k).map(|i| i as f64).product::<f64>();
    let mut total = 0.0;
    for j in 0..=m {
        if j > 0 {
            coeff *= -x / (j as f64 * (j + k) as f64);
        }
        total += coeff * ladder_element(m, j + k, j);
    }
    total
}

fn check_drive(omega: f64, theta: f64) -> Result<()> {
    if !omega.is_finite() || omega < 0.0 {
        return Err(Error::domain(format!(
            "Rabi frequency must be non-negative and finite, got {omega}"
        )));
    }
    if !theta.is_finite() {
        return Err(Error::domain("laser phase must be finite"));
    }
    Ok(())
}

fn build_sideband(
    eta: LDParameter,
    omega: f64,
    theta: f64,
    k: usize,
    truncation: usize,
    lower: Level,
    upper: Level,
) -> Result<TruncatedHamiltonian> {
    check_drive(omega, theta)?;
    if truncation < k + 2 {
        return Err(Error::Truncation {
            truncation,
            k,
            required: k + 2,
        });
    }
    let mut h = TruncatedHamiltonian::zeros(truncation, vec![lower, upper]);
    let prefactor = 0.5
        * omega
        * eta.debye_waller()
        * eta.value().powi(k as i32)
        * i_pow(k)
        * Complex64::from_polar(1.0, -theta);
    for m in 0..=(truncation - k) {
        let value = prefactor * sideband_series(eta, m, k);
        h.set_coupling((m + k, upper), (m, lower), value);
    }
    Ok(h)
}

/// Rotating-wave Hamiltonian of a `k`-th blue-sideband drive on g <-> e,
/// without the Lamb-Dicke approximation.
pub fn build_interaction_hamiltonian(
    eta: LDParameter,
    omega: f64,
    theta: f64,
    k: usize,
    truncation: usize,
) -> Result<TruncatedHamiltonian> {
    build_sideband(
        eta,
        omega,
        theta,
        k,
        truncation,
        Level::Ground,
        Level::Excited,
    )
}

/// Same drive on the e <-> a transition, `|a>` taking the lower role.
pub fn build_aux_sideband_hamiltonian(
    eta: LDParameter,
    omega: f64,
    theta: f64,
    k: usize,
    truncation: usize,
) -> Result<TruncatedHamiltonian> {
    build_sideband(
        eta,
        omega,
        theta,
        k,
        truncation,
        Level::Auxiliary,
        Level::Excited,
    )
}

/// Full rotating-frame Hamiltonian
/// `nu (a^dag a + 1/2) + delta/2 sigma_z + Omega/2 [sigma_+ e^{i eta (a + a^dag)} e^{-i theta} + h.c.]`.
pub fn build_full_hamiltonian(
    eta: LDParameter,
    omega: f64,
    theta: f64,
    delta: f64,
    nu: f64,
    truncation: usize,
) -> Result<TruncatedHamiltonian> {
    check_drive(omega, theta)?;
    if !delta.is_finite() || !nu.is_finite() {
        return Err(Error::domain("detuning and trap frequency must be finite"));
    }
    if truncation < 2 {
        return Err(Error::Truncation {
            truncation,
            k: 0,
            required: 2,
        });
    }
    let mut h = TruncatedHamiltonian::zeros(truncation, vec![Level::Ground, Level::Excited]);
    for m in 0..=truncation {
        let (g, e) = frame_energies(m, delta, nu);
        let gi = h.index(m, Level::Ground).unwrap();
        let ei = h.index(m, Level::Excited).unwrap();
        h.matrix[(gi, gi)] = Complex64::new(g, 0.0);
        h.matrix[(ei, ei)] = Complex64::new(e, 0.0);
    }
    let drive = 0.5 * omega * Complex64::from_polar(1.0, -theta);
    for upper in 0..=truncation {
        for lower in 0..=truncation {
            let value = drive * displacement_element(eta, upper, lower)?;
            h.set_coupling((upper, Level::Excited), (lower, Level::Ground), value);
        }
    }
    Ok(h)
}

/// Diagonal energies `(g, e)` of `nu (m + 1/2) -/+ delta/2`.
fn frame_energies(m: usize, delta: f64, nu: f64) -> (f64, f64) {
    let osc = nu * (m as f64 + 0.5);
    (osc - 0.5 * delta, osc + 0.5 * delta)
}

/// Diagonalized Hamiltonian, reusable across evolution times.
#[derive(Debug, Clone)]
pub struct Propagator {
    hamiltonian: TruncatedHamiltonian,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl Propagator {
    pub fn new(hamiltonian: &TruncatedHamiltonian) -> Self {
        let eigen = SymmetricEigen::new(hamiltonian.matrix.clone());
        Self {
            hamiltonian: hamiltonian.clone(),
            eigenvalues: eigen.eigenvalues,
            eigenvectors: eigen.eigenvectors,
        }
    }

    pub fn hamiltonian(&self) -> &TruncatedHamiltonian {
        &self.hamiltonian
    }

    /// `exp(-i H t) |state>`. Levels absent from the Hamiltonian are left
    /// untouched.
    pub fn evolve(&self, t: f64, state: &JointState) -> Result<JointState> {
        let h = &self.hamiltonian;
        if state.truncation() != h.truncation {
            return Err(Error::DimensionMismatch {
                expected: h.truncation,
                found: state.truncation(),
            });
        }
        if !t.is_finite() {
            return Err(Error::domain("evolution time must be finite"));
        }
        let psi = DVector::from_fn(h.dim(), |i, _| {
            let (m, level) = h.label(i);
            state.amplitude(m, level)
        });
        let mut coeffs = self.eigenvectors.adjoint() * psi;
        for (c, &lambda) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= Complex64::from_polar(1.0, -(lambda * t).rem_euclid(TAU));
        }
        let evolved = &self.eigenvectors * coeffs;

        let mut amplitudes = state.amplitudes().to_vec();
        for (i, amp) in evolved.iter().enumerate() {
            let (m, level) = h.label(i);
            amplitudes[m * 3 + level.slot()] = *amp;
        }
        Ok(JointState::from_raw(state.truncation(), amplitudes))
    }
}

/// One-shot `exp(-i H t) |state>`.
pub fn propagate(h: &TruncatedHamiltonian, t: f64, state: &JointState) -> Result<JointState> {
    Propagator::new(h).evolve(t, state)
}

/// Initial truncation of the doubling policy for sideband order `k`.
pub fn initial_truncation(k: usize) -> usize {
    (k + 4).max(8)
}

/// Runs `attempt` at `M = start, 2 start, ...` until the largest top-two
/// Fock population it reports drops below [`TRUNCATION_TOLERANCE`].
pub fn with_converged_truncation<T>(
    start: usize,
    mut attempt: impl FnMut(usize) -> Result<(T, f64)>,
) -> Result<(usize, T)> {
    let mut truncation = start.max(1);
    loop {
        let (value, leak) = attempt(truncation)?;
        if leak < TRUNCATION_TOLERANCE {
            return Ok((truncation, value));
        }
        if truncation * 2 > MAX_TRUNCATION {
            return Err(Error::TruncationNotConverged {
                truncation,
                population: leak,
                tolerance: TRUNCATION_TOLERANCE,
            });
        }
        truncation *= 2;
    }
}

/// Drive parameters for [`rwa_deviation`]. `delta = -k nu` selects the
/// resonant `k`-th blue sideband.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandDrive {
    pub eta: LDParameter,
    pub omega: f64,
    pub theta: f64,
    pub delta: f64,
    pub nu: f64,
    pub k: usize,
}

impl SidebandDrive {
    /// Resonant drive with `delta = -k nu`.
    pub fn resonant(eta: LDParameter, omega: f64, theta: f64, nu: f64, k: usize) -> Self {
        Self {
            eta,
            omega,
            theta,
            delta: -(k as f64) * nu,
            nu,
            k,
        }
    }
}

/// Distance between the full-Hamiltonian evolution (moved back to the
/// interaction picture) and the rotating-wave evolution of the same state.
///
/// The interaction frame is diagonal, so it is removed by multiplying each
/// amplitude by `e^{+i t E(m, level)}`.
pub fn rwa_deviation(drive: &SidebandDrive, t: f64, state: &JointState) -> Result<f64> {
    let resonance = drive.delta + drive.k as f64 * drive.nu;
    if resonance.abs() > 1e-9 * drive.nu.abs().max(1.0) {
        return Err(Error::domain(format!(
            "drive is not on the k = {} blue sideband (delta + k nu = {resonance})",
            drive.k
        )));
    }
    let truncation = state.truncation();
    let full = build_full_hamiltonian(
        drive.eta,
        drive.omega,
        drive.theta,
        drive.delta,
        drive.nu,
        truncation,
    )?;
    let rwa =
        build_interaction_hamiltonian(drive.eta, drive.omega, drive.theta, drive.k, truncation)?;

    let lab = propagate(&full, t, state)?;
    let mut frame = lab;
    for m in 0..=truncation {
        let (eg, ee) = frame_energies(m, drive.delta, drive.nu);
        for (level, energy) in [(Level::Ground, eg), (Level::Excited, ee)] {
            let amp = frame.amplitude_mut(m, level);
            *amp *= Complex64::from_polar(1.0, (energy * t).rem_euclid(TAU));
        }
    }
    let approx = propagate(&rwa, t, state)?;
    frame.distance(&approx)
}

/// Grid over which the closed-form dynamics are compared with the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleGrid {
    pub orders: Vec<usize>,
    pub max_initial_fock: usize,
    pub etas: Vec<f64>,
    /// Pulse areas `Omega t` (the drive is unit strength).
    pub pulse_areas: Vec<f64>,
    /// Fixed truncation; `None` applies the doubling policy.
    pub truncation: Option<usize>,
}

impl Default for OracleGrid {
    fn default() -> Self {
        let points = 50;
        Self {
            orders: vec![0, 1, 2],
            max_initial_fock: 5,
            etas: vec![0.1, 0.5, 0.9],
            pulse_areas: (0..points)
                .map(|i| 2.0 * TAU * i as f64 / (points - 1) as f64)
                .collect(),
            truncation: None,
        }
    }
}

/// Outcome of one `(k, eta)` cell of the oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCell {
    pub k: usize,
    pub eta: f64,
    pub truncation: usize,
    pub max_deviation: f64,
}

/// Evolves every `|m, g>` and `|m, e>` with `m <= max_initial_fock` both in
/// closed form and through the matrix exponential and records the largest
/// amplitude difference per `(k, eta)`.
pub fn compare_with_oracle(grid: &OracleGrid) -> Result<Vec<OracleCell>> {
    let mut cells = Vec::new();
    for &k in &grid.orders {
        for &eta_value in &grid.etas {
            let eta = LDParameter::new(eta_value)?;
            let run = |truncation: usize| -> Result<(f64, f64)> {
                let h = build_interaction_hamiltonian(eta, 1.0, 0.0, k, truncation)?;
                let propagator = Propagator::new(&h);
                let mut worst = 0.0_f64;
                let mut leak = 0.0_f64;
                for m in 0..=grid.max_initial_fock {
                    for level in [Level::Ground, Level::Excited] {
                        let start = JointState::basis(truncation, m, level)?;
                        for &area in &grid.pulse_areas {
                            let exact = propagator.evolve(area, &start)?;
                            leak = leak.max(exact.top_population(2));
                            let pulse = PulseSpec::new(k, 1.0, 0.0, area)?;
                            let closed = evolve_closed_form(&start, &pulse, eta)?;
                            worst = worst.max(closed.max_deviation(&exact)?);
                        }
                    }
                }
                Ok((worst, leak))
            };
            let (truncation, max_deviation) = match grid.truncation {
                Some(m) => (m, run(m)?.0),
                None => with_converged_truncation(
                    initial_truncation(k).max(grid.max_initial_fock + k + 2),
                    run,
                )?,
            };
            cells.push(OracleCell {
                k,
                eta: eta_value,
                truncation,
                max_deviation,
            });
        }
    }
    Ok(cells)
}
