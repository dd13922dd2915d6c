use approx::assert_relative_eq;
use nlosc::fdlie::{
    kernel_residual, lie_apply, lie_commutator, linearity_residual, product_rule_residual, shift_mismatch, RealFunction,
};
use nlosc::ladder::LambdaFunction;
use nlosc::quartic::lambda_pert;
use proptest::prelude::*;

fn poly(c: [f64; 4]) -> RealFunction {
    RealFunction::everywhere("cubic", move |x| c[0] + x * (c[1] + x * (c[2] + x * c[3])))
}

fn trig(a: f64, w: f64) -> RealFunction {
    RealFunction::everywhere("trig", move |x| a * (w * x).sin() + (0.5 * w * x).cos())
}

/// Positive spacing `λ(x) = p + q·x²`.
fn spacing(p: f64, q: f64) -> RealFunction {
    RealFunction::everywhere("spacing", move |x| p + q * x * x)
}

fn coeffs() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-2.0f64..2.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn linear(c in coeffs(), a in -3.0f64..3.0, b in -3.0f64..3.0, w in 0.1f64..4.0,
              p in 0.01f64..2.0, q in 0.0f64..0.5, x in -2.0f64..2.0) {
        let (f, g, l) = (poly(c), trig(1.3, w), spacing(p, q));
        let r = linearity_residual(&l, a, &f, b, &g, x).unwrap();
        let scale = 1.0 + (a * lie_apply(&l, &f, x).unwrap()).abs() + (b * lie_apply(&l, &g, x).unwrap()).abs()
            + (a * f.eval(x).unwrap()).abs() + (b * g.eval(x).unwrap()).abs();
        prop_assert!(r.abs() <= 1e-12 * scale * 10.0, "{r} vs {scale}");
    }

    #[test]
    fn product_rule(c in coeffs(), w in 0.1f64..4.0, p in 0.01f64..2.0, q in 0.0f64..0.5, x in -2.0f64..2.0) {
        let (f, g, l) = (poly(c), trig(0.7, w), spacing(p, q));
        let r = product_rule_residual(&l, &f, &g, x).unwrap();
        let y = x + l.eval(x).unwrap();
        let scale = 1.0 + (f.eval(y).unwrap() * g.eval(y).unwrap()).abs() + (f.eval(x).unwrap() * g.eval(x).unwrap()).abs();
        prop_assert!(r.abs() <= 1e-12 * scale * 10.0, "{r} vs {scale}");
    }

    #[test]
    fn commuting_constant_shifts(c1 in 0.0f64..3.0, c2 in 0.0f64..3.0, w in 0.1f64..4.0, x in -5.0f64..5.0) {
        let (l, xi, f) = (RealFunction::constant(c1), RealFunction::constant(c2), trig(1.0, w));
        prop_assert_eq!(shift_mismatch(&l, &xi, x).unwrap(), 0.0);
        prop_assert!(lie_commutator(&l, &xi, &f, x).unwrap().abs() <= 1e-12 * 3.0);
    }

    #[test]
    fn self_commutator_vanishes(p in 0.01f64..2.0, q in 0.0f64..0.5, c in coeffs(), x in -2.0f64..2.0) {
        let l = spacing(p, q);
        prop_assert_eq!(lie_commutator(&l, &l, &poly(c), x).unwrap(), 0.0);
    }

    #[test]
    fn constant_spacing_is_in_kernel(c in -5.0f64..5.0, x in -10.0f64..10.0) {
        prop_assert_eq!(kernel_residual(&RealFunction::constant(c), x).unwrap(), 0.0);
    }
}

#[test]
fn commutator_tracks_shift_mismatch() {
    // λ(x) = x, ξ ≡ 1: shifts land on 2x + 1 and 2x + 2
    let (l, xi, id) = (RealFunction::identity(), RealFunction::constant(1.0), RealFunction::identity());
    for x in [-1.0, 0.0, 2.5] {
        assert_eq!(lie_commutator(&l, &xi, &id, x).unwrap(), -1.0);
        assert_eq!(shift_mismatch(&l, &xi, x).unwrap(), -1.0);
    }
}

#[test]
fn small_spacing_gives_the_derivative() {
    let f = RealFunction::everywhere("exp", f64::exp);
    let x = 0.3;
    let mut prev = f64::INFINITY;
    for eps in [1e-2, 1e-3, 1e-4] {
        let l = RealFunction::constant(eps);
        let slope = lie_apply(&l, &f, x).unwrap() / eps;
        let err = (slope - x.exp()).abs();
        assert!(err < eps * x.exp());
        assert!(err < prev);
        prev = err;
    }
}

#[test]
fn perturbative_spacing_is_not_in_its_kernel() {
    let k = 0.01;
    let l = RealFunction::everywhere("lambda_pert", move |e| lambda_pert(e, k));
    let r = kernel_residual(&l, 1.0).unwrap();
    // leading term 3κλ(1), second-order remainder with coefficient below 100
    assert!(r > 0.0);
    assert!((r - 3.0 * k * lambda_pert(1.0, k)).abs() < 100.0 * k * k);
    let lf = LambdaFunction::perturbative(k).unwrap();
    let via_ladder = lf.eval(1.0 + lf.eval(1.0).unwrap()).unwrap() - lf.eval(1.0).unwrap();
    assert_relative_eq!(r, via_ladder, max_relative = 1e-14);
}

#[test]
fn doubling_map_residual() {
    let l = RealFunction::identity();
    for x in [0.5, 1.0, 7.0] {
        assert_eq!(kernel_residual(&l, x).unwrap(), x);
    }
}
