//! Truncated small-κ expressions, in floating point and as exact κ-polynomials.

use num::Zero;

use crate::opalg::{rational, CouplingPoly, Rational};

const ORDER: usize = 2;

/// Coefficients `[κ^j][n^i]` of the second-order level formula.
pub fn pert_coefficients_in_n() -> [[Rational; 4]; 3] {
    [
        [rational(1, 2), rational(1, 1), Rational::zero(), Rational::zero()],
        [rational(3, 4), rational(3, 2), rational(3, 2), Rational::zero()],
        [rational(-21, 8), rational(-59, 8), rational(-51, 8), rational(-17, 4)],
    ]
}

/// Coefficients `[κ^j][n^i]` of the semiclassical level series.
pub fn sc_coefficients_in_n() -> [[Rational; 4]; 3] {
    [
        [rational(1, 2), rational(1, 1), Rational::zero(), Rational::zero()],
        [Rational::zero(), rational(-3, 2), rational(3, 2), Rational::zero()],
        [Rational::zero(), rational(1, 8), rational(33, 8), rational(-17, 4)],
    ]
}

fn eval_n(table: &[[Rational; 4]; 3], n: u64) -> CouplingPoly {
    let nr = Rational::from_integer(n.into());
    let coeffs: Vec<Rational> = table
        .iter()
        .map(|row| row.iter().rev().fold(Rational::zero(), |acc, c| acc * &nr + c))
        .collect();
    CouplingPoly::from_coeffs(ORDER, &coeffs)
}

/// `1/2 + (3/4)κ − (21/8)κ²`.
pub fn groundstate_pert(kappa: f64) -> f64 {
    0.5 + 0.75 * kappa - 2.625 * kappa * kappa
}

pub fn groundstate_pert_poly() -> CouplingPoly {
    CouplingPoly::from_coeffs(ORDER, &[rational(1, 2), rational(3, 4), rational(-21, 8)])
}

/// `1 + 3κh − κ²((69/4)h² − (9/2)h + 15/2)` with `h = e + 1/2`.
pub fn lambda_pert(e: f64, kappa: f64) -> f64 {
    let h = e + 0.5;
    1.0 + 3.0 * kappa * h - kappa * kappa * (17.25 * h * h - 4.5 * h + 7.5)
}

/// [`lambda_pert`] with `e` itself a κ-series; the result is truncated at κ².
pub fn lambda_pert_series(e: &CouplingPoly) -> CouplingPoly {
    let h = e + &CouplingPoly::constant(ORDER, rational(1, 2));
    let k = CouplingPoly::kappa_power(ORDER, 1);
    let k2 = CouplingPoly::kappa_power(ORDER, 2);
    let inner = &(&(&h * &h).scale(&rational(69, 4)) - &h.scale(&rational(9, 2))) + &CouplingPoly::constant(ORDER, rational(15, 2));
    &(&CouplingPoly::one(ORDER) + &(&k * &h).scale(&rational(3, 1))) - &(&k2 * &inner)
}

/// `1 + 3κ(e − 1/2) − (69/4)κ²(e − 1/2)²`.
pub fn lambda_sc_series(e: f64, kappa: f64) -> f64 {
    let d = e - 0.5;
    1.0 + 3.0 * kappa * d - 17.25 * kappa * kappa * d * d
}

pub fn lambda_sc_series_poly(e: &CouplingPoly) -> CouplingPoly {
    let d = e - &CouplingPoly::constant(ORDER, rational(1, 2));
    let k = CouplingPoly::kappa_power(ORDER, 1);
    let k2 = CouplingPoly::kappa_power(ORDER, 2);
    &(&CouplingPoly::one(ORDER) + &(&k * &d).scale(&rational(3, 1))) - &(&k2 * &(&d * &d)).scale(&rational(69, 4))
}

/// `n + 1/2 + (3/4)κ(2n² + 2n + 1) − κ²((17/4)n³ + (51/8)n² + (59/8)n + 21/8)`.
pub fn energy_pert(n: u64, kappa: f64) -> f64 {
    let x = n as f64;
    x + 0.5 + 0.75 * kappa * (2.0 * x * x + 2.0 * x + 1.0)
        - kappa * kappa * (4.25 * x * x * x + 6.375 * x * x + 7.375 * x + 2.625)
}

pub fn energy_pert_exact(n: u64) -> CouplingPoly {
    eval_n(&pert_coefficients_in_n(), n)
}

/// `n + 1/2 + (3/2)κ(n² − n) − κ²((17/4)n³ − (33/8)n² − (1/8)n)`.
pub fn energy_sc_series(n: u64, kappa: f64) -> f64 {
    let x = n as f64;
    x + 0.5 + 1.5 * kappa * (x * x - x) - kappa * kappa * (4.25 * x * x * x - 4.125 * x * x - 0.125 * x)
}

pub fn energy_sc_series_exact(n: u64) -> CouplingPoly {
    eval_n(&sc_coefficients_in_n(), n)
}
