use nalgebra::DMatrix;
use nlosc::oracle::{
    build_hamiltonian_matrix, converged_levels, eigenvalues_symmetric, parity_leakage, OracleError, RESIDUAL_FACTOR,
};
use nlosc::quartic::groundstate_pert;
use nlosc::{OscillatorSpec, Potential};

#[test]
fn eigenvalues_agree_with_nalgebra() {
    for k in [0.01, 0.1, 1.0] {
        let m = build_hamiltonian_matrix(&OscillatorSpec::quartic(k), 60).unwrap();
        let ours = eigenvalues_symmetric(&m, 60).unwrap();
        let reference = DMatrix::from_row_slice(60, 60, m.values()).symmetric_eigen();
        let mut theirs: Vec<f64> = reference.eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        let scale = m.frobenius_norm();
        for (a, b) in ours.values.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-12 * scale, "kappa = {k}: {a} vs {b}");
        }
        assert!(ours.residuals.iter().all(|r| *r <= RESIDUAL_FACTOR * scale));
    }
}

#[test]
fn sextic_matrix_is_banded() {
    let spec = OscillatorSpec::new(1.0, Potential::Monomial { degree: 6, kappa: 0.1 }).unwrap();
    let m = build_hamiltonian_matrix(&spec, 20).unwrap();
    for i in 0..20usize {
        for j in 0..20usize {
            if i.abs_diff(j) % 2 == 1 || i.abs_diff(j) > 6 {
                assert_eq!(m.get(i, j), 0.0);
            }
        }
    }
    let eig = eigenvalues_symmetric(&m, 4).unwrap();
    assert!(eig.vectors.iter().all(|v| parity_leakage(v) < 1e-10));
}

#[test]
fn levels_decrease_with_basis_size() {
    let spec = OscillatorSpec::quartic(0.1);
    let mut prev: Option<Vec<f64>> = None;
    for dim in [16, 32, 64, 128] {
        let eig = eigenvalues_symmetric(&build_hamiltonian_matrix(&spec, dim).unwrap(), 6).unwrap();
        if let Some(p) = &prev {
            for (a, b) in eig.values.iter().zip(p) {
                assert!(*a <= *b + 1e-12, "dim {dim}: {a} > {b}");
            }
        }
        prev = Some(eig.values);
    }
}

#[test]
fn small_coupling_levels_are_stable_under_doubling() {
    let spec = OscillatorSpec::quartic(0.01);
    let a = eigenvalues_symmetric(&build_hamiltonian_matrix(&spec, 256).unwrap(), 6).unwrap();
    let b = eigenvalues_symmetric(&build_hamiltonian_matrix(&spec, 512).unwrap(), 6).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn ground_level_close_to_second_order() {
    let c = converged_levels(&OscillatorSpec::quartic(0.01), 6, 1e-10).unwrap();
    let gap = c.levels[0] - groundstate_pert(0.01);
    // the remainder is third order in κ
    assert!(gap.abs() < 5e-5 && gap.abs() > 1e-6, "gap {gap}");
    assert!(c.levels.windows(2).all(|w| w[1] > w[0]));
    let strong = converged_levels(&OscillatorSpec::quartic(0.1), 3, 1e-10).unwrap();
    assert!((strong.levels[0] - groundstate_pert(0.1)).abs() > 1e-3);
}

#[test]
fn non_polynomial_potential_has_no_matrix() {
    let spec = OscillatorSpec::new(1.0, Potential::Exponential { alpha_sq: 1.0, kappa: 0.1 }).unwrap();
    assert!(matches!(build_hamiltonian_matrix(&spec, 8), Err(OracleError::NotPolynomial)));
    assert!(matches!(
        build_hamiltonian_matrix(&OscillatorSpec::sho(), 1),
        Err(OracleError::BadDimension(1))
    ));
}
