use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One};

use super::coeff::{CouplingPoly, Rational};
use super::poly::{factorial, OperatorPoly};

/// Exact Fock matrix element `coefficient · √radicand` with a square-free
/// radicand. The coefficient keeps the coupling symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockElement {
    pub coefficient: CouplingPoly,
    pub radicand: BigInt,
}

impl FockElement {
    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn eval(&self, kappa: f64) -> f64 {
        let root = num::ToPrimitive::to_f64(&self.radicand).unwrap_or(f64::NAN).sqrt();
        self.coefficient.eval(kappa) * root
    }
}

impl fmt::Display for FockElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() || self.is_zero() {
            write!(f, "{}", self.coefficient)
        } else {
            write!(f, "({}) * sqrt({})", self.coefficient, self.radicand)
        }
    }
}

/// `⟨m|p|n⟩` exactly. A term `(a†)^r a^s` contributes `√(m! n!)/k!` with
/// `k = m − r = n − s ≥ 0`.
pub fn fock_matrix_element_exact(p: &OperatorPoly, m: u32, n: u32) -> FockElement {
    let mut sum = CouplingPoly::zero(p.max_order());
    for (&(r, s), c) in p.terms() {
        if r > m || s > n || m - r != n - s {
            continue;
        }
        let k = n - s;
        let w = Rational::new(BigInt::one(), factorial(k));
        sum = &sum + &c.scale(&w);
    }
    let (square, radicand) = split_factorial_product(m, n);
    FockElement {
        coefficient: sum.scale(&Rational::from_integer(square)),
        radicand,
    }
}

/// `⟨m|p|n⟩` with the coupling substituted.
pub fn fock_matrix_element(p: &OperatorPoly, m: u32, n: u32, kappa: f64) -> f64 {
    let mut acc = 0.0;
    for (&(r, s), c) in p.terms() {
        if r > m || s > n || m - r != n - s {
            continue;
        }
        let k = n - s;
        let (lo, hi) = (m.min(n), m.max(n));
        acc += c.eval(kappa) * falling(lo, k) * falling(hi, lo).sqrt();
    }
    acc
}

/// `top!/bottom!`
fn falling(top: u32, bottom: u32) -> f64 {
    ((bottom + 1)..=top).map(f64::from).product()
}

/// Writes `m! n!` as `square² · radicand` with `radicand` square free.
fn split_factorial_product(m: u32, n: u32) -> (BigInt, BigInt) {
    let mut exps: BTreeMap<u32, u32> = BTreeMap::new();
    for top in [m, n] {
        for i in 2..=top {
            let mut v = i;
            let mut p = 2;
            while p * p <= v {
                while v % p == 0 {
                    *exps.entry(p).or_default() += 1;
                    v /= p;
                }
                p += 1;
            }
            if v > 1 {
                *exps.entry(v).or_default() += 1;
            }
        }
    }
    let mut square = BigInt::one();
    let mut radicand = BigInt::one();
    for (p, e) in exps {
        let bp = BigInt::from(p);
        square *= num::pow(bp.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            radicand *= bp;
        }
    }
    (square, radicand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::coeff::rational;

    #[test]
    fn number_operator_diagonal() {
        let n_op = OperatorPoly::number(0);
        for n in 0..6 {
            assert_eq!(fock_matrix_element(&n_op, n, n, 0.0), n as f64);
            let ex = fock_matrix_element_exact(&n_op, n, n);
            assert_eq!(ex.coefficient.coeff(0), rational(n as i64, 1));
            assert_eq!(ex.radicand, BigInt::one());
        }
    }

    #[test]
    fn quartic_elements() {
        let x4 = OperatorPoly::position_sum(0).pow(4);
        let e00 = fock_matrix_element_exact(&x4, 0, 0);
        assert_eq!(e00.coefficient.coeff(0), rational(3, 1));
        let e20 = fock_matrix_element_exact(&x4, 2, 0);
        assert_eq!(e20.coefficient.coeff(0), rational(6, 1));
        assert_eq!(e20.radicand, BigInt::from(2));
        assert!((fock_matrix_element(&x4, 2, 0, 0.0) - 6.0 * 2f64.sqrt()).abs() < 1e-13);
        for n in 0..10u32 {
            let d = fock_matrix_element(&x4, n, n, 0.0);
            let nn = n as f64;
            assert!((d - 3.0 * (2.0 * nn * nn + 2.0 * nn + 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_and_float_agree() {
        let x4 = OperatorPoly::position_sum(0).pow(4);
        for m in 0..12 {
            for n in 0..12 {
                let ex = fock_matrix_element_exact(&x4, m, n).eval(0.0);
                let fl = fock_matrix_element(&x4, m, n, 0.0);
                assert!((ex - fl).abs() <= 1e-12 * (1.0 + fl.abs()), "{m} {n}");
            }
        }
    }
}
