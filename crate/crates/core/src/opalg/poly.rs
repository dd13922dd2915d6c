use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Zero};

use super::coeff::{rational, CouplingPoly, Rational};

/// Normal-ordered polynomial in the ladder operators,
/// `Σ c_rs(κ) (a†)^r a^s`, with κ-graded exact coefficients.
///
/// Terms are kept in canonical form: one entry per `(r, s)` and no zero
/// coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorPoly {
    max_order: usize,
    terms: BTreeMap<(u32, u32), CouplingPoly>,
}

impl OperatorPoly {
    pub fn zero(max_order: usize) -> Self {
        Self {
            max_order,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(max_order: usize) -> Self {
        Self::monomial(max_order, 0, 0, Rational::one())
    }

    pub fn constant(max_order: usize, c: CouplingPoly) -> Self {
        Self::monomial_poly(max_order, 0, 0, c)
    }

    pub fn constant_rational(max_order: usize, p: i64, q: i64) -> Self {
        Self::monomial(max_order, 0, 0, rational(p, q))
    }

    /// `a`
    pub fn annihilation(max_order: usize) -> Self {
        Self::monomial(max_order, 0, 1, Rational::one())
    }

    /// `a†`
    pub fn creation(max_order: usize) -> Self {
        Self::monomial(max_order, 1, 0, Rational::one())
    }

    /// `a†a`
    pub fn number(max_order: usize) -> Self {
        Self::monomial(max_order, 1, 1, Rational::one())
    }

    /// `a + a†`
    pub fn position_sum(max_order: usize) -> Self {
        Self::annihilation(max_order) + Self::creation(max_order)
    }

    /// `c (a†)^r a^s` with a κ-independent coefficient.
    pub fn monomial(max_order: usize, r: u32, s: u32, c: Rational) -> Self {
        Self::monomial_poly(max_order, r, s, CouplingPoly::constant(max_order, c))
    }

    pub fn monomial_poly(max_order: usize, r: u32, s: u32, c: CouplingPoly) -> Self {
        let mut p = Self::zero(max_order);
        p.insert_add((r, s), c.with_max_order(max_order));
        p
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, r: u32, s: u32) -> CouplingPoly {
        self.terms
            .get(&(r, s))
            .cloned()
            .unwrap_or_else(|| CouplingPoly::zero(self.max_order))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &CouplingPoly)> {
        self.terms.iter()
    }

    /// Largest `r + s` present.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(r, s)| r + s).max()
    }

    /// Coefficients of κ^j only, as a map `(r, s) -> rational`.
    pub fn order_slice(&self, j: usize) -> BTreeMap<(u32, u32), Rational> {
        self.terms
            .iter()
            .filter_map(|(k, c)| {
                let v = c.coeff(j);
                (!v.is_zero()).then_some((*k, v))
            })
            .collect()
    }

    /// True if every coefficient of κ^j for `j <= order` vanishes.
    pub fn vanishes_through(&self, order: usize) -> bool {
        (0..=order.min(self.max_order)).all(|j| self.order_slice(j).is_empty())
    }

    pub fn with_max_order(&self, max_order: usize) -> Self {
        let mut out = Self::zero(max_order);
        for (k, c) in &self.terms {
            out.insert_add(*k, c.with_max_order(max_order));
        }
        out
    }

    fn insert_add(&mut self, key: (u32, u32), c: CouplingPoly) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&key) {
            Some(prev) => &prev + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.max_order);
        for (k, v) in &self.terms {
            out.insert_add(*k, v.scale(c));
        }
        out
    }

    pub fn scale_poly(&self, c: &CouplingPoly) -> Self {
        let c = c.with_max_order(self.max_order);
        let mut out = Self::zero(self.max_order);
        for (k, v) in &self.terms {
            out.insert_add(*k, v * &c);
        }
        out
    }

    /// Normal-ordered product `self · rhs`, using
    /// `(a†)^r a^s (a†)^t a^u = Σ_j C(s,j) C(t,j) j! (a†)^{r+t-j} a^{s+u-j}`.
    pub fn normal_order_product(&self, rhs: &OperatorPoly) -> OperatorPoly {
        let max_order = self.max_order.max(rhs.max_order);
        let mut out = Self::zero(max_order);
        for (&(r, s), c) in &self.terms {
            for (&(t, u), d) in &rhs.terms {
                let cd = c * d;
                if cd.is_zero() {
                    continue;
                }
                for j in 0..=s.min(t) {
                    let w = contraction_weight(s, t, j);
                    out.insert_add((r + t - j, s + u - j), cd.scale(&w));
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> OperatorPoly {
        let mut acc = Self::identity(self.max_order);
        for _ in 0..n {
            acc = acc.normal_order_product(self);
        }
        acc
    }

    /// `[self, rhs]`, normal ordered.
    pub fn commutator(&self, rhs: &OperatorPoly) -> OperatorPoly {
        &self.normal_order_product(rhs) - &rhs.normal_order_product(self)
    }

    /// Hermitian conjugate. The conjugate of a normal-ordered monomial
    /// `(a†)^r a^s` is `(a†)^s a^r`, which is again normal ordered; real
    /// rational coefficients are unchanged.
    pub fn dagger(&self) -> OperatorPoly {
        let mut out = Self::zero(self.max_order);
        for (&(r, s), c) in &self.terms {
            out.insert_add((s, r), c.clone());
        }
        out
    }

    /// Substitutes a numeric coupling, returning `(r, s, value)` triples.
    pub fn eval_at(&self, kappa: f64) -> Vec<(u32, u32, f64)> {
        self.terms
            .iter()
            .map(|(&(r, s), c)| (r, s, c.eval(kappa)))
            .filter(|t| t.2 != 0.0)
            .collect()
    }

    /// Textual form: `k^j * c * ad^r a^s` terms ordered by κ-order, then `r`,
    /// then `s`, joined by ` + `.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for j in 0..=self.max_order {
            for ((r, s), c) in self.order_slice(j) {
                parts.push(format!("k^{j} * {c} * ad^{r} a^{s}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

fn contraction_weight(s: u32, t: u32, j: u32) -> Rational {
    let w = binomial(s, j) * binomial(t, j) * factorial(j);
    Rational::from_integer(w)
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &OperatorPoly {
    type Output = OperatorPoly;
    fn add(self, rhs: &OperatorPoly) -> OperatorPoly {
        let mut out = self.with_max_order(self.max_order.max(rhs.max_order));
        for (k, c) in &rhs.terms {
            out.insert_add(*k, c.clone());
        }
        out
    }
}

impl Add for OperatorPoly {
    type Output = OperatorPoly;
    fn add(self, rhs: OperatorPoly) -> OperatorPoly {
        &self + &rhs
    }
}

impl Sub for &OperatorPoly {
    type Output = OperatorPoly;
    fn sub(self, rhs: &OperatorPoly) -> OperatorPoly {
        self + &(-rhs)
    }
}

impl Sub for OperatorPoly {
    type Output = OperatorPoly;
    fn sub(self, rhs: OperatorPoly) -> OperatorPoly {
        &self - &rhs
    }
}

impl Neg for &OperatorPoly {
    type Output = OperatorPoly;
    fn neg(self) -> OperatorPoly {
        OperatorPoly {
            max_order: self.max_order,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: &OperatorPoly) -> OperatorPoly {
        self.normal_order_product(rhs)
    }
}

impl Mul for OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: OperatorPoly) -> OperatorPoly {
        self.normal_order_product(&rhs)
    }
}
