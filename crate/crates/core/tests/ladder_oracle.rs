use nlosc::ladder::{build_spectrum, classify_lambda, number_on_ladder, LadderError, LambdaFunction, SpacingClass};
use nlosc::opalg::{rational, rational_to_f64, Rational};
use nlosc::quartic::{e_max_negative, lambda_pert};
use nlosc::semiclassical::{number_sc, EnergySurface, QuadratureConfig};

const KAPPA_NUM: i64 = 1;
const KAPPA_DEN: i64 = 100;

/// Second-order spacing with exact rational arithmetic.
fn lambda_exact(e: &Rational) -> Rational {
    let k = rational(KAPPA_NUM, KAPPA_DEN);
    let h = e + rational(1, 2);
    rational(1, 1) + rational(3, 1) * &k * &h
        - &k * &k * (rational(69, 4) * &h * &h - rational(9, 2) * &h + rational(15, 2))
}

/// `T(e) = λ(e) + e`.
fn step(e: &Rational) -> Rational {
    lambda_exact(e) + e
}

/// `T^k(e)`.
fn compose(k: usize, e: &Rational) -> Rational {
    (0..k).fold(e.clone(), |x, _| step(&x))
}

#[test]
fn normalization_products_match_nested_form() {
    let e_g = rational(1, 2) + rational(3, 4) * rational(KAPPA_NUM, KAPPA_DEN)
        - rational(21, 8) * rational(KAPPA_NUM * KAPPA_NUM, KAPPA_DEN * KAPPA_DEN);
    // factor k of A_n: λ(e_g) + λ(T e_g) + … + λ(T^{k−1} e_g)
    let factor = |k: usize| (0..k).fold(rational(0, 1), |acc, j| acc + lambda_exact(&compose(j, &e_g)));
    let kappa = KAPPA_NUM as f64 / KAPPA_DEN as f64;
    let lf = LambdaFunction::perturbative(kappa).unwrap();
    let s = build_spectrum(&lf, rational_to_f64(&e_g), 4).unwrap();
    let mut a_nested = rational(1, 1);
    for n in 1..=4 {
        let f = factor(n);
        // the factors telescope to e_n − e_g
        assert_eq!(f, compose(n, &e_g) - &e_g);
        a_nested *= f;
        let a_float = rational_to_f64(&a_nested);
        assert!((s.a_products()[n] - a_float).abs() < 1e-13 * a_float, "n = {n}");
        assert!((s.a_log()[n] - a_float.ln()).abs() < 1e-13);
        let e_n = rational_to_f64(&compose(n, &e_g));
        assert!((s.levels()[n] - e_n).abs() < 1e-14 * e_n);
    }
}

#[test]
fn long_ladder_matches_plain_recursion() {
    let k = 0.01;
    let lf = LambdaFunction::quartic_closed(k).unwrap();
    let s = build_spectrum(&lf, 0.5, 300).unwrap();
    let mut e = 0.5;
    for n in 0..=300 {
        assert!((s.levels()[n] - e).abs() < 1e-11 * e, "n = {n}");
        e += if e > 0.5 { nlosc::quartic::lambda_sc_quartic(e, k).unwrap() } else { 1.0 };
    }
    let nf = number_on_ladder(&s);
    assert!(nf.step_residuals().iter().all(|r| *r == 0.0));
}

#[test]
fn perturbative_ladder_spacing() {
    let k = 0.02;
    let lf = LambdaFunction::perturbative(k).unwrap();
    let s = build_spectrum(&lf, 0.5, 5).unwrap();
    for n in 0..5 {
        let gap = s.levels()[n + 1] - s.levels()[n];
        assert!((gap - lambda_pert(s.levels()[n], k)).abs() < 1e-14);
    }
}

#[test]
fn negative_coupling_stops_below_the_bound() {
    for k in [-0.01, -0.03] {
        let e_max = e_max_negative(k).unwrap();
        let lf = LambdaFunction::quartic(k).unwrap();
        match build_spectrum(&lf, 0.5, 10_000) {
            Err(LadderError::DomainExhausted { spectrum, .. }) => {
                assert!(spectrum.is_terminated());
                assert!(spectrum.levels().iter().all(|&e| e < e_max));
                let gaps: Vec<f64> = spectrum.levels().windows(2).map(|w| w[1] - w[0]).collect();
                assert!(gaps.windows(2).all(|g| g[1] < g[0]));
            }
            other => panic!("expected a terminated ladder, got {other:?}"),
        }
    }
}

#[test]
fn smooth_number_function_counts_levels() {
    let k = 0.01;
    let lf = LambdaFunction::quartic_closed(k).unwrap();
    let s = build_spectrum(&lf, 0.5, 60).unwrap();
    let cfg = QuadratureConfig::default();
    let nf = number_on_ladder(&s).with_semiclassical(EnergySurface::quartic(k), cfg);
    for n in [10, 30, 60] {
        let smooth = nf.smooth_value(s.levels()[n]).unwrap().unwrap();
        assert!((smooth - n as f64).abs() < 1.0, "n = {n}: {smooth}");
    }
    let direct = number_sc(&EnergySurface::quartic(k), s.levels()[30], &cfg).unwrap();
    assert!((direct - nf.smooth_value(s.levels()[30]).unwrap().unwrap()).abs() < 1e-12);
}

#[test]
fn classification_of_known_families() {
    let c = classify_lambda(&LambdaFunction::quartic(0.05).unwrap(), (1.0, 100.0), 16);
    assert_eq!(c.class, SpacingClass::Widening);
    let c = classify_lambda(&LambdaFunction::constant(0.7).unwrap(), (0.0, 10.0), 16);
    assert_eq!(c.class, SpacingClass::AsymptoticallyEqualSpaced);
    let c = classify_lambda(&LambdaFunction::quartic(-0.05).unwrap(), (0.6, 1.7), 16);
    assert_eq!(c.class, SpacingClass::BoundedSpectrum);
}
