use nlosc::opalg::{
    fock_matrix_element, fock_matrix_element_exact, rational, solve_tilde_a, CouplingPoly, OperatorPoly, Rational,
};
use nlosc::quartic::{energy_pert_exact, lambda_pert_series};
use nlosc::OscillatorSpec;
use proptest::prelude::*;

const MO: usize = 1;

fn poly_strategy() -> impl Strategy<Value = OperatorPoly> {
    prop::collection::vec((0u32..3, 0u32..3, -6i64..6, 1i64..4, -6i64..6), 0..4).prop_map(|terms| {
        terms.into_iter().fold(OperatorPoly::zero(MO), |acc, (r, s, p0, q, p1)| {
            let c = CouplingPoly::from_coeffs(MO, &[rational(p0, q), rational(p1, q)]);
            &acc + &OperatorPoly::monomial_poly(MO, r, s, c)
        })
    })
}

/// Dense matrix of `(a†)^r a^s` on Fock states `0..dim`, built from the
/// ladder action `a|n⟩ = √n |n−1⟩`, `a†|n⟩ = √(n+1) |n+1⟩`.
#[allow(clippy::needless_range_loop)]
fn ladder_matrix(r: u32, s: u32, dim: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; dim]; dim];
    for n in 0..dim {
        let mut state = n as i64;
        let mut amp = 1.0;
        for _ in 0..s {
            if state == 0 {
                amp = 0.0;
                break;
            }
            amp *= (state as f64).sqrt();
            state -= 1;
        }
        for _ in 0..r {
            state += 1;
            amp *= (state as f64).sqrt();
        }
        if amp != 0.0 && (state as usize) < dim {
            m[state as usize][n] += amp;
        }
    }
    m
}

fn brute_force_element(p: &OperatorPoly, m: usize, n: usize, kappa: f64) -> f64 {
    let dim = m.max(n) + 8;
    p.terms()
        .map(|(&(r, s), c)| c.eval(kappa) * ladder_matrix(r, s, dim)[m][n])
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn product_distributes(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn dagger_reverses_products(a in poly_strategy(), b in poly_strategy()) {
        prop_assert_eq!((&a * &b).dagger(), &b.dagger() * &a.dagger());
        prop_assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn commutator_is_antisymmetric(a in poly_strategy(), b in poly_strategy()) {
        prop_assert_eq!(a.commutator(&b), -&b.commutator(&a));
    }

    #[test]
    fn fock_elements_match_ladder_action(p in poly_strategy(), m in 0u32..7, n in 0u32..7, kappa in -1.0f64..1.0) {
        let want = brute_force_element(&p, m as usize, n as usize, kappa);
        let got = fock_matrix_element(&p, m, n, kappa);
        let exact = fock_matrix_element_exact(&p, m, n).eval(kappa);
        let scale = want.abs().max(1.0);
        prop_assert!((got - want).abs() <= 1e-12 * scale);
        prop_assert!((exact - want).abs() <= 1e-12 * scale);
    }
}

#[test]
fn canonical_commutator() {
    let a = OperatorPoly::annihilation(0);
    let ad = OperatorPoly::creation(0);
    assert_eq!(a.commutator(&ad), OperatorPoly::identity(0));
}

#[test]
fn quartic_fock_elements_by_brute_force() {
    let x4 = OperatorPoly::position_sum(0).pow(4);
    for n in 0..12 {
        let diag = fock_matrix_element(&x4, n, n, 0.0);
        let nf = n as f64;
        assert!((diag - 3.0 * (2.0 * nf * nf + 2.0 * nf + 1.0)).abs() < 1e-10);
        for m in 0..12 {
            let want = brute_force_element(&x4, m as usize, n as usize, 0.0);
            assert!((fock_matrix_element(&x4, m, n, 0.0) - want).abs() < 1e-10 * want.abs().max(1.0));
        }
    }
}

#[test]
fn eigenoperator_shifts_functions_of_h() {
    // ã H² = (H + λ)² ã through κ²
    let spec = OscillatorSpec::quartic(0.0);
    let sol = solve_tilde_a(2, &spec).unwrap();
    let h = spec.hamiltonian_poly(2).unwrap();
    let lam = sol.lambda_operator(&h);
    let a = &sol.tilde_a;
    let shifted = &h + &lam;
    let lhs = a.commutator(&(&h * &h));
    let rhs = &(&(&shifted * &shifted) - &(&h * &h)) * a;
    assert!((&lhs - &rhs).vanishes_through(2));
}

#[test]
fn level_formula_climbs_with_operator_spacing() {
    // e(n+1) − e(n) = λ(e(n)) through κ², all exact
    for n in 0..8u64 {
        let step = &energy_pert_exact(n + 1) - &energy_pert_exact(n);
        let lam = lambda_pert_series(&energy_pert_exact(n));
        assert_eq!(step, lam, "n = {n}");
    }
}

#[test]
fn solved_spacing_matches_float_form() {
    let sol = solve_tilde_a(2, &OscillatorSpec::quartic(0.0)).unwrap();
    for &(e, k) in &[(0.5, 0.01), (3.0, 0.02), (10.0, 0.001)] {
        let want = nlosc::quartic::lambda_pert(e, k);
        assert!((sol.lambda_at(e, k) - want).abs() < 1e-14 * want.abs());
    }
    assert_eq!(sol.constant("f1"), Some(&Rational::from_integer(3.into())));
}
