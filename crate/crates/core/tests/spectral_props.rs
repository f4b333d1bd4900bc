use gbspec::spectral::{eigenvalues_dense, eigenvalues_general, eigenvalues_symmetric, inverse_iteration};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn symmetric_residuals(seed in prop::collection::vec(-1.0f64..1.0, 50 * 50)) {
        let b = DMatrix::from_vec(50, 50, seed);
        let a = &b + b.transpose();
        let norm = a.norm();
        let eigs = eigenvalues_symmetric(&a).unwrap();
        for &lambda in eigs.iter().step_by(5) {
            let v: DVector<f64> = inverse_iteration(&a, lambda).unwrap();
            prop_assert!((&a * &v - &v * lambda).norm() <= 1e-8 * norm);
        }
    }

    #[test]
    fn general_eigenvalues_preserve_trace_invariants(seed in prop::collection::vec(-1.0f64..1.0, 12 * 12)) {
        let a = DMatrix::from_vec(12, 12, seed);
        let eigs = eigenvalues_general(&a).unwrap();
        let sum: f64 = eigs.iter().map(|z| z.re).sum();
        let imag: f64 = eigs.iter().map(|z| z.im).sum();
        let sq: f64 = eigs.iter().map(|z| (z * z).re).sum();
        prop_assert!((sum - a.trace()).abs() <= 1e-9);
        prop_assert!(imag.abs() <= 1e-9);
        prop_assert!((sq - (&a * &a).trace()).abs() <= 1e-8);
    }
}

#[test]
fn dense_routes_symmetric_input() {
    let a = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
    let mut eigs: Vec<f64> = eigenvalues_dense(&a, 1e-12).unwrap().iter().map(|z| z.re).collect();
    eigs.sort_by(f64::total_cmp);
    let s = 2f64.sqrt();
    for (e, want) in eigs.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
        assert!((e - want).abs() < 1e-10);
    }
}
