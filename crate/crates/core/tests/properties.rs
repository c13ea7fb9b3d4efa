mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use ion_cnot::dynamics::gamma_label;
use ion_cnot::*;
use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use proptest::prelude::*;

use common::{displacement_by_diagonalization, laguerre_exact, REFERENCE_TABLE};

fn eta(v: f64) -> LDParameter {
    LDParameter::new(v).unwrap()
}

#[test]
fn laguerre_recurrence_agrees_with_exact_sum() {
    for m in 0..=20u64 {
        for k in 0..=5u64 {
            for step in 0..=16 {
                let x = 0.25 * step as f64;
                let got = laguerre_assoc(m as usize, k as usize, x).unwrap();
                let want = laguerre_exact(m, k, x);
                assert!(
                    (got - want).abs() <= 1e-10 * want.abs().max(1.0),
                    "m={m} k={k} x={x}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn displacement_matches_diagonalized_operator() {
    for &e in &[0.1, 0.5, 0.9, 1.5, 2.0] {
        let oracle = displacement_by_diagonalization(e, 12, 150);
        for r in 0..12 {
            for c in 0..12 {
                let got = displacement_element(eta(e), r, c).unwrap();
                assert!(
                    (got - oracle[(r, c)]).norm() < 1e-10,
                    "eta={e} ({r},{c}): {got} vs {}",
                    oracle[(r, c)]
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn laguerre_random_arguments(m in 0u64..=20, k in 0u64..=5, x in 0.0f64..=4.0) {
        let got = laguerre_assoc(m as usize, k as usize, x).unwrap();
        let want = laguerre_exact(m, k, x);
        prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
    }

    #[test]
    fn rabi_and_displacement_agree(e in 1e-3f64..=2.0, m in 0usize..=50, k in 0usize..=20) {
        let omega = 3.0;
        let rabi = effective_rabi(omega, eta(e), m, k).unwrap().value();
        let d = displacement_element(eta(e), m + k, m).unwrap();
        prop_assert!(((2.0 * rabi / omega).abs() - d.norm()).abs() < 1e-12);
        // coarse bound from the finite sum
        let bound = 0.5 * omega * e.powi(k as i32)
            * (((m + 1)..=(m + k)).map(|i| i as f64).product::<f64>()).sqrt();
        prop_assert!(rabi.abs() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn displacement_columns_are_normalized(e in 1e-3f64..=2.0, m in 0usize..=50) {
        let rows = (m + 100).min(200);
        let total: f64 = (0..=rows)
            .map(|r| displacement_element(eta(e), r, m).unwrap().norm_sqr())
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-10, "sum = {}", total);
    }

    #[test]
    fn carrier_structure(x in 0.0f64..=400.0, e in 0.05f64..=1.5, theta in -10.0f64..10.0) {
        let u = carrier_matrix(x, eta(e), theta).unwrap();
        prop_assert!(u.unitarity_defect() < 1e-12);
        let a = carrier_amplitudes(x, eta(e));
        prop_assert!((a.c11 * a.c11 + a.c12 * a.c12 - 1.0).abs() < 1e-12);
        prop_assert!((a.c33 * a.c33 + a.c34 * a.c34 - 1.0).abs() < 1e-12);
        let flipped = carrier_matrix(x, eta(e), theta + PI).unwrap();
        prop_assert!(flipped.max_abs_diff(&u.adjoint()) < 1e-12);
    }

    #[test]
    fn carrier_group_law(a in 0.0f64..=200.0, b in 0.0f64..=200.0, e in 0.05f64..=1.5, theta in 0.0f64..TAU) {
        let ab = carrier_matrix(a + b, eta(e), theta).unwrap();
        let composed = carrier_matrix(b, eta(e), theta).unwrap() * carrier_matrix(a, eta(e), theta).unwrap();
        prop_assert!(ab.max_abs_diff(&composed) < 1e-10);
    }

    #[test]
    fn closed_form_preserves_norm(
        k in 0usize..=3,
        e in 0.05f64..=1.5,
        theta in 0.0f64..TAU,
        t in 0.0f64..50.0,
        seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 30),
    ) {
        // 10 Fock levels x 3 internal levels; empty the top k levels of |g>
        let truncation = 9;
        let mut amps: Vec<Complex64> = seed.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        for m in (truncation + 1 - k)..=truncation {
            amps[m * 3] = Complex64::new(0.0, 0.0);
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let amps = amps.into_iter().map(|a| a / norm).collect();
        let state = JointState::from_amplitudes(truncation, amps).unwrap();
        let pulse = PulseSpec::new(k, 1.0, theta, t).unwrap();
        let out = evolve_closed_form(&state, &pulse, eta(e)).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let aux = evolve_aux_sideband(&state, &pulse, eta(e));
        if let Ok(aux) = aux {
            prop_assert!((aux.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn carrier_closed_form_restricts_to_matrix(x in 0.0f64..=400.0, e in 0.05f64..=1.5, theta1 in 0.0f64..TAU) {
        let u = carrier_matrix(x, eta(e), theta1).unwrap();
        let pulse = PulseSpec::new(0, 1.0, -theta1, x).unwrap();
        for col in 0..4 {
            let (m, level) = gamma_label(col);
            let start = JointState::basis(2, m, level).unwrap();
            let out = evolve_closed_form(&start, &pulse, eta(e)).unwrap().subspace();
            for (row, amp) in out.iter().enumerate() {
                prop_assert!((amp - u.entry(row, col)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn aux_map_structure(e in 0.05f64..=1.5, omega in 0.1f64..10.0, t in 0.0f64..20.0, theta in 0.0f64..TAU) {
        let u = sideband_aux_map(eta(e), omega, t, theta).unwrap();
        prop_assert!((u.adjoint() * u - Matrix2::identity()).norm() < 1e-12);
        let w = effective_rabi(omega, eta(e), 0, 1).unwrap().value();
        let pi_pulse = sideband_aux_map(eta(e), omega, PI / w, theta).unwrap();
        prop_assert!((pi_pulse + Matrix2::identity()).norm() < 1e-12);
    }

    #[test]
    fn propagation_preserves_norm(
        k in 0usize..=2,
        e in 0.05f64..=1.2,
        theta in 0.0f64..TAU,
        t in 0.0f64..30.0,
        m in 0usize..=4,
    ) {
        let h = build_interaction_hamiltonian(eta(e), 1.0, theta, k, 10).unwrap();
        let start = JointState::basis(10, m, Level::Ground).unwrap();
        let out = propagate(&h, t, &start).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);

        let full = build_full_hamiltonian(eta(e), 1.0, theta, 0.0, 20.0, 10).unwrap();
        prop_assert!(full.hermiticity_defect() < 1e-14);
        let out = propagate(&full, t, &start).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn objective_is_bounded(x in 0.0f64..4000.0, e in 0.01f64..=1.99) {
        let v = objective(x, eta(e));
        prop_assert!((-1.0..=1.0).contains(&v));
    }

    #[test]
    fn fidelity_detects_any_perturbation(
        phase in 0.0f64..TAU,
        eps in 1e-3f64..0.5,
        h in proptest::collection::vec(-1.0f64..1.0, 16),
    ) {
        // random Hermitian generator, unit max-norm
        let mut gen = Matrix4::<Complex64>::zeros();
        for r in 0..4 {
            for c in r..4 {
                let z = Complex64::new(h[r * 4 + c], if r == c { 0.0 } else { h[c * 4 + r] });
                gen[(r, c)] = z;
                gen[(c, r)] = z.conj();
            }
        }
        let scale = gen.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assume!(scale > 1e-2);
        gen /= Complex64::new(scale, 0.0);
        let eig = gen.symmetric_eigen();
        let kick = |s: f64| {
            let d = Matrix4::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, s * l)));
            eig.eigenvectors * d * eig.eigenvectors.adjoint()
        };
        let target = cnot_target();
        let global = Complex64::from_polar(1.0, phase);

        let exact = SubspaceUnitary::new(target.matrix() * global).unwrap();
        let r = GateReport::evaluate(exact, target);
        prop_assert!((r.fidelity_trace - 1.0).abs() < 1e-12);

        let kicked = SubspaceUnitary::new(target.matrix() * kick(eps) * global).unwrap();
        let r = GateReport::evaluate(kicked, target);
        // spectrum of the generator is not all equal unless it is a multiple
        // of the identity, which would be a global phase
        let spread = eig.eigenvalues.max() - eig.eigenvalues.min();
        if spread * eps > 1e-3 {
            prop_assert!(r.fidelity_trace < 1.0 - 1e-9);
        }
        prop_assert!(r.fidelity_trace <= 1.0 + 1e-12);
    }
}

#[test]
fn search_is_grid_adequate_and_budget_monotone() {
    for &e in &[0.2, 0.37, 0.5, 0.66, 0.9] {
        let base = SearchConfig::default();
        let coarse = search_duration(eta(e), &base).unwrap();
        let fine = search_duration(
            eta(e),
            &SearchConfig {
                grid_step: base.grid_step / 10.0,
                refine_tol: base.refine_tol / 10.0,
                ..base
            },
        )
        .unwrap();
        assert!(fine.objective <= coarse.objective + 1e-6, "eta={e}");
        assert!(coarse.omega_t1 <= base.omega_t_max);

        let mut previous = f64::NEG_INFINITY;
        for budget in [60.0, 120.0, 240.0, 360.0, 720.0] {
            let r = search_duration(eta(e), &SearchConfig::with_budget(budget));
            let value = match r {
                Ok(r) => {
                    assert!(r.omega_t1 <= budget);
                    r.objective
                }
                Err(Error::NoSolution { best, .. }) => best,
                Err(other) => panic!("{other}"),
            };
            assert!(value >= previous - 1e-12, "eta={e} budget={budget}");
            previous = value;
        }
    }
}

#[test]
fn search_is_at_least_as_good_as_reference_rows() {
    for &(e, x, ..) in &REFERENCE_TABLE {
        let reference = objective(x, eta(e));
        let found = search_duration(eta(e), &SearchConfig::default()).unwrap();
        assert!(found.objective >= reference - 1e-6, "eta={e}");
    }
}

#[test]
fn synthesis_fidelity_grows_with_budget() {
    let omega = TAU * 500e3;
    for &(e, ..) in &REFERENCE_TABLE {
        let short = synthesize(eta(e), omega, &SearchConfig::with_budget(360.0)).unwrap();
        let long = synthesize(eta(e), omega, &SearchConfig::with_budget(720.0)).unwrap();
        assert!(
            long.report.fidelity_worst_element >= short.report.fidelity_worst_element - 1e-12,
            "eta={e}"
        );
        assert!(short.report.gate.unitarity_defect() < 1e-12);
    }
}

#[test]
fn synthesis_targets() {
    let omega = TAU * 500e3;
    let r = synthesize(eta(0.24), omega, &SearchConfig::default()).unwrap();
    assert!(r.report.fidelity_worst_element >= 0.9999);
    let r = synthesize(eta(0.90), omega, &SearchConfig::default()).unwrap();
    assert!(r.report.fidelity_worst_element >= 0.90);
    let r = synthesize(eta(0.90), omega, &SearchConfig::with_budget(3600.0)).unwrap();
    assert!(r.report.fidelity_worst_element >= 0.99);
    assert_eq!(r.theta1, FRAC_PI_2);
}

#[test]
fn sensitivity_drop_is_the_amplitude_difference() {
    let omega = TAU * 500e3;
    for &(e, x, ..) in &REFERENCE_TABLE {
        let r = sensitivity(eta(e), x, omega, 1e-7).unwrap();
        let nominal = carrier_amplitudes(x, eta(e));
        let plus = carrier_amplitudes(x + omega * 1e-7, eta(e));
        let minus = carrier_amplitudes(x - omega * 1e-7, eta(e));
        assert_eq!(r.drop_c11, nominal.c11 - plus.c11.min(minus.c11));
        assert_eq!(r.drop_c34, nominal.c34 - plus.c34.min(minus.c34));
    }
}

#[test]
fn rwa_error_shrinks_with_trap_frequency() {
    let e = eta(0.5);
    for k in [0usize, 1] {
        let start = JointState::basis(16, 0, Level::Ground).unwrap();
        let mut previous = f64::INFINITY;
        for ratio in [0.1, 0.05, 0.01] {
            let drive = SidebandDrive::resonant(e, 1.0, 0.0, 1.0 / ratio, k);
            let dev = rwa_deviation(&drive, PI, &start).unwrap();
            assert!(dev <= previous, "k={k} ratio={ratio}: {dev} > {previous}");
            previous = dev;
        }
    }
}

#[test]
fn rwa_error_bound_for_carrier() {
    let drive = SidebandDrive::resonant(eta(0.5), 1.0, 0.0, 100.0, 0);
    let start = JointState::basis(16, 0, Level::Ground).unwrap();
    let dev = rwa_deviation(&drive, PI, &start).unwrap();
    // measured 4.45e-3; the deviation scales as roughly 0.45 * Omega / nu
    assert!(dev < 5e-3, "{dev}");
}
