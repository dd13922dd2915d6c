//! Finite-difference Lie operator `ℒ_λ f(x) = f(x + λ(x)) − f(x)` on real
//! functions, with its algebraic identity residuals.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
#[error("{name} evaluated at x = {x}, outside [{lo}, {hi}]")]
pub struct DomainError {
    pub name: String,
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
}

type Map = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Real map `x ↦ f(x)` on a closed interval.
#[derive(Clone)]
pub struct RealFunction {
    name: String,
    lo: f64,
    hi: f64,
    f: Map,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealFunction({} on [{}, {}])", self.name, self.lo, self.hi)
    }
}

impl RealFunction {
    pub fn new<F>(name: impl Into<String>, lo: f64, hi: f64, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            lo,
            hi,
            f: Arc::new(f),
        }
    }

    /// Defined on the whole real line.
    pub fn everywhere<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, f64::NEG_INFINITY, f64::INFINITY, f)
    }

    pub fn constant(c: f64) -> Self {
        Self::everywhere(format!("{c}"), move |_| c)
    }

    pub fn identity() -> Self {
        Self::everywhere("x", |x| x)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, x: f64) -> Result<f64, DomainError> {
        if x >= self.lo && x <= self.hi {
            Ok((self.f)(x))
        } else {
            Err(DomainError {
                name: self.name.clone(),
                x,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    /// `a·f + b·g` on the intersection of the domains.
    pub fn linear_combination(a: f64, f: &RealFunction, b: f64, g: &RealFunction) -> RealFunction {
        let (ff, gf) = (f.f.clone(), g.f.clone());
        RealFunction::new(
            format!("{a}*{} + {b}*{}", f.name, g.name),
            f.lo.max(g.lo),
            f.hi.min(g.hi),
            move |x| a * ff(x) + b * gf(x),
        )
    }

    /// Pointwise product `f·g` on the intersection of the domains.
    pub fn product(f: &RealFunction, g: &RealFunction) -> RealFunction {
        let (ff, gf) = (f.f.clone(), g.f.clone());
        RealFunction::new(
            format!("({})*({})", f.name, g.name),
            f.lo.max(g.lo),
            f.hi.min(g.hi),
            move |x| ff(x) * gf(x),
        )
    }
}

/// `x + λ(x)`.
fn shifted(lambda: &RealFunction, x: f64) -> Result<f64, DomainError> {
    Ok(x + lambda.eval(x)?)
}

/// `ℒ_λ f(x) = f(λ(x) + x) − f(x)`.
pub fn lie_apply(lambda: &RealFunction, f: &RealFunction, x: f64) -> Result<f64, DomainError> {
    Ok(f.eval(shifted(lambda, x)?)? - f.eval(x)?)
}

/// `ℒ(fg) − [f ℒg + g ℒf + ℒf ℒg]` at `x`.
pub fn product_rule_residual(
    lambda: &RealFunction,
    f: &RealFunction,
    g: &RealFunction,
    x: f64,
) -> Result<f64, DomainError> {
    let y = shifted(lambda, x)?;
    let (fx, gx, fy, gy) = (f.eval(x)?, g.eval(x)?, f.eval(y)?, g.eval(y)?);
    let lfg = fy * gy - fx * gx;
    let lf = fy - fx;
    let lg = gy - gx;
    Ok(lfg - (fx * lg + gx * lf + lf * lg))
}

/// `ℒ(af + bg) − (aℒf + bℒg)` at `x`.
pub fn linearity_residual(
    lambda: &RealFunction,
    a: f64,
    f: &RealFunction,
    b: f64,
    g: &RealFunction,
    x: f64,
) -> Result<f64, DomainError> {
    let combined = RealFunction::linear_combination(a, f, b, g);
    Ok(lie_apply(lambda, &combined, x)? - (a * lie_apply(lambda, f, x)? + b * lie_apply(lambda, g, x)?))
}

/// `[ℒ_λ, ℒ_ξ] f(x) = f(x + λ(x) + ξ(x + λ(x))) − f(x + ξ(x) + λ(x + ξ(x)))`.
pub fn lie_commutator(
    lambda: &RealFunction,
    xi: &RealFunction,
    f: &RealFunction,
    x: f64,
) -> Result<f64, DomainError> {
    let left = shifted(xi, shifted(lambda, x)?)?;
    let right = shifted(lambda, shifted(xi, x)?)?;
    Ok(f.eval(left)? - f.eval(right)?)
}

/// `ℒ_λ ξ(x) − ℒ_ξ λ(x)`: the difference of the two composed shifts, whose
/// vanishing makes the commutator vanish for every `f`.
pub fn shift_mismatch(lambda: &RealFunction, xi: &RealFunction, x: f64) -> Result<f64, DomainError> {
    Ok(lie_apply(lambda, xi, x)? - lie_apply(xi, lambda, x)?)
}

/// `ℒ_λ λ(x) = λ(λ(x) + x) − λ(x)`; identically zero only for equal spacing.
pub fn kernel_residual(lambda: &RealFunction, x: f64) -> Result<f64, DomainError> {
    lie_apply(lambda, lambda, x)
}
