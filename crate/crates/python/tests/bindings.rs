use trapped_ion_cnot::{
    carrier_amplitudes, carrier_matrix, cnot_target, cz_duration, enumerate_magic,
    magic_parameters, reproduce_table, synthesize,
};

#[test]
fn exact_row_through_bindings() {
    let (eta, x) = magic_parameters(3, 3).unwrap();
    assert_eq!(eta, 0.5);
    let (c11, _, _, c34) = carrier_amplitudes(x, eta).unwrap();
    assert!((c11 - 1.0).abs() < 1e-12 && (c34 - 1.0).abs() < 1e-12);
    assert!(enumerate_magic(0.49, 0.51, 360.0)
        .iter()
        .any(|p| (p.0, p.1) == (3, 3)));
}

#[test]
fn matrices_are_nested_rows() {
    let u = carrier_matrix(42.0, 0.5, std::f64::consts::FRAC_PI_2).unwrap();
    assert_eq!(u.len(), 4);
    assert!(u.iter().all(|r| r.len() == 4));
    assert_eq!(cnot_target()[2][3].re, 1.0);
}

#[test]
fn synthesis_and_table() {
    let s = synthesize(0.5, 500e3, None, std::f64::consts::FRAC_PI_2).unwrap();
    assert!(s.fidelity_worst_element > 0.9999);
    assert!((s.cz_duration - cz_duration(0.5, 500e3).unwrap()).abs() < 1e-18);
    let rows = reproduce_table(0.5, 0.52, 0.02, None);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.1.is_some() != r.2.is_some()));
}
