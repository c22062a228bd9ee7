use bosesemi_core::{quantum, ModelParams};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Dense Hamiltonian assembled from the ladder-operator action on |n1, n2>.
fn dense(p: &ModelParams, symmetrized: bool) -> DMatrix<f64> {
    let n = p.particles;
    let shift = if symmetrized { p.g * (n as f64 + 0.5) } else { 0.0 };
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for n1 in 0..=n {
        let (a, b) = (n1 as f64, (n - n1) as f64);
        m[(n1, n1)] = p.epsilon * (a - b) + p.g * (a * a + b * b) + shift;
        if n1 < n {
            let t = p.v * ((a + 1.0) * b).sqrt();
            m[(n1 + 1, n1)] = t;
            m[(n1, n1 + 1)] = t;
        }
    }
    m
}

fn params() -> impl Strategy<Value = (ModelParams, bool)> {
    (1usize..=8, -2.0..2.0f64, 0.05..2.0f64, -1.0..1.0f64, any::<bool>())
        .prop_map(|(n, eps, v, g, sym)| (ModelParams::new(n, eps, v, g), sym))
}

proptest! {
    #[test]
    fn eigenvalues_match_dense_solver((p, sym) in params()) {
        let spec = quantum::exact_spectrum(&p, sym, false).unwrap();
        let mut reference: Vec<f64> = dense(&p, sym).symmetric_eigen().eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        let tol = 1e-10 * p.energy_scale().max(1.0);
        for (a, b) in spec.energies.iter().zip(&reference) {
            prop_assert!((a - b).abs() < tol, "{a} vs {b}");
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal_eigenpairs((p, sym) in params()) {
        let spec = quantum::exact_spectrum(&p, sym, true).unwrap();
        let h = dense(&p, sym);
        let vecs = spec.eigenvectors.as_ref().unwrap();
        let tol = 1e-10 * p.energy_scale().max(1.0);
        for (j, v) in vecs.iter().enumerate() {
            let x = nalgebra::DVector::from_column_slice(v);
            let r = &h * &x - &x * spec.energies[j];
            prop_assert!(r.norm() < tol);
            for (k, w) in vecs.iter().enumerate() {
                let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                let expected = if j == k { 1.0 } else { 0.0 };
                prop_assert!((dot - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn tridiagonal_form_equals_dense_assembly() {
    let p = ModelParams::new(6, 0.3, 0.8, -0.25);
    for sym in [false, true] {
        let h = quantum::build_hamiltonian(&p, sym).unwrap().to_dense();
        let d = dense(&p, sym);
        for i in 0..7 {
            for j in 0..7 {
                assert!((h[i][j] - d[(i, j)]).abs() < 1e-14);
            }
        }
    }
}
