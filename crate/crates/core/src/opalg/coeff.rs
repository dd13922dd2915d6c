use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Polynomial in the dimensionless coupling κ with exact rational
/// coefficients, truncated above `max_order`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CouplingPoly {
    coeffs: Vec<Rational>,
}

impl CouplingPoly {
    pub fn zero(max_order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); max_order + 1],
        }
    }

    pub fn constant(max_order: usize, c: Rational) -> Self {
        let mut p = Self::zero(max_order);
        p.coeffs[0] = c;
        p
    }

    pub fn one(max_order: usize) -> Self {
        Self::constant(max_order, Rational::one())
    }

    /// κ^j (zero if `j > max_order`).
    pub fn kappa_power(max_order: usize, j: usize) -> Self {
        let mut p = Self::zero(max_order);
        if j <= max_order {
            p.coeffs[j] = Rational::one();
        }
        p
    }

    pub fn from_coeffs(max_order: usize, coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(max_order);
        for (j, c) in coeffs.iter().enumerate().take(max_order + 1) {
            p.coeffs[j] = c.clone();
        }
        p
    }

    pub fn max_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of κ^j (zero beyond the truncation order).
    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn with_max_order(&self, max_order: usize) -> Self {
        Self::from_coeffs(max_order, &self.coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_rational(&self, p: i64, q: i64) -> Self {
        self.scale(&rational(p, q))
    }

    pub fn eval(&self, kappa: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * kappa + rational_to_f64(c))
    }

    pub fn eval_exact(&self, kappa: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * kappa + c)
    }
}

impl fmt::Display for CouplingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{mag}")?;
            match j {
                0 => {}
                1 => write!(f, " k")?,
                _ => write!(f, " k^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CouplingPoly {
    type Output = CouplingPoly;
    fn add(self, rhs: &CouplingPoly) -> CouplingPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CouplingPoly {
            coeffs: (0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect(),
        }
    }
}

impl Sub for &CouplingPoly {
    type Output = CouplingPoly;
    fn sub(self, rhs: &CouplingPoly) -> CouplingPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CouplingPoly {
            coeffs: (0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect(),
        }
    }
}

impl Neg for &CouplingPoly {
    type Output = CouplingPoly;
    fn neg(self) -> CouplingPoly {
        CouplingPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CouplingPoly {
    type Output = CouplingPoly;
    fn mul(self, rhs: &CouplingPoly) -> CouplingPoly {
        let max_order = self.max_order().max(rhs.max_order());
        let mut out = CouplingPoly::zero(max_order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > max_order {
                    break;
                }
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}
