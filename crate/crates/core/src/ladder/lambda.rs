use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::quartic;
use crate::semiclassical::{lambda_sc, EnergySurface, QuadratureConfig};

const POSITIVITY_SAMPLES: usize = 16;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LambdaError {
    #[error("e = {e} outside the domain [{lo}, {hi})")]
    OutOfDomain { e: f64, lo: f64, hi: f64 },
    #[error("lambda({e}) = {value} is not positive")]
    NonPositive { e: f64, value: f64 },
    #[error("evaluation failed at e = {e}: {message}")]
    Evaluation { e: f64, message: String },
    #[error("tabulated lambda needs at least two increasing abscissae")]
    BadTable,
}

/// Where a spacing function comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaSource {
    Constant(f64),
    QuarticClosed { kappa: f64 },
    QuarticNegative { kappa: f64 },
    Perturbative { kappa: f64 },
    Quadrature { surface: String },
    Tabulated { points: usize },
    Custom(String),
}

impl fmt::Display for LambdaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSource::Constant(c) => write!(f, "constant({c})"),
            LambdaSource::QuarticClosed { kappa } => write!(f, "quartic-closed(kappa={kappa})"),
            LambdaSource::QuarticNegative { kappa } => write!(f, "quartic-negative(kappa={kappa})"),
            LambdaSource::Perturbative { kappa } => write!(f, "perturbative(kappa={kappa})"),
            LambdaSource::Quadrature { surface } => write!(f, "quadrature({surface})"),
            LambdaSource::Tabulated { points } => write!(f, "tabulated({points} points)"),
            LambdaSource::Custom(s) => write!(f, "custom({s})"),
        }
    }
}

type Eval = Arc<dyn Fn(f64) -> Result<f64, LambdaError> + Send + Sync>;

/// Evaluable spacing function `e ↦ λ(e)` on a domain `[lo, hi)`.
#[derive(Clone)]
pub struct LambdaFunction {
    source: LambdaSource,
    lo: f64,
    hi: f64,
    eval: Eval,
}

impl fmt::Debug for LambdaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LambdaFunction")
            .field("source", &self.source)
            .field("domain", &(self.lo, self.hi))
            .finish()
    }
}

impl LambdaFunction {
    /// Builds a spacing function and checks `λ > 0` on sampled points of the
    /// domain.
    pub fn new<F>(source: LambdaSource, lo: f64, hi: f64, f: F) -> Result<Self, LambdaError>
    where
        F: Fn(f64) -> Result<f64, LambdaError> + Send + Sync + 'static,
    {
        let lf = Self {
            source,
            lo,
            hi,
            eval: Arc::new(f),
        };
        lf.check_positive()?;
        Ok(lf)
    }

    pub fn constant(c: f64) -> Result<Self, LambdaError> {
        Self::new(LambdaSource::Constant(c), f64::NEG_INFINITY, f64::INFINITY, move |_| Ok(c))
    }

    /// Closed-form semiclassical quartic spacing, `κ > 0`. At `e = 1/2` the
    /// harmonic limit 1 is returned.
    pub fn quartic_closed(kappa: f64) -> Result<Self, LambdaError> {
        Self::new(LambdaSource::QuarticClosed { kappa }, 0.5, f64::INFINITY, move |e| {
            if e <= 0.5 {
                return Ok(1.0);
            }
            quartic::lambda_sc_quartic(e, kappa).map_err(|err| LambdaError::Evaluation {
                e,
                message: err.to_string(),
            })
        })
    }

    /// Negative-coupling closed form on `[1/2, e_max)`.
    pub fn quartic_negative(kappa: f64) -> Result<Self, LambdaError> {
        let e_max = quartic::e_max_negative(kappa).map_err(|err| LambdaError::Evaluation {
            e: f64::NAN,
            message: err.to_string(),
        })?;
        Self::new(LambdaSource::QuarticNegative { kappa }, 0.5, e_max, move |e| {
            if e <= 0.5 {
                return Ok(1.0);
            }
            quartic::lambda_sc_quartic_negative(e, kappa).map_err(|err| LambdaError::Evaluation {
                e,
                message: err.to_string(),
            })
        })
    }

    /// Closed form for either sign of κ (constant 1 at κ = 0).
    pub fn quartic(kappa: f64) -> Result<Self, LambdaError> {
        if kappa > 0.0 {
            Self::quartic_closed(kappa)
        } else if kappa < 0.0 {
            Self::quartic_negative(kappa)
        } else {
            Self::constant(1.0)
        }
    }

    /// Second-order operator result on `e ≥ −1/2`, cut where it stops being
    /// positive.
    pub fn perturbative(kappa: f64) -> Result<Self, LambdaError> {
        let hi = perturbative_upper_edge(kappa);
        Self::new(LambdaSource::Perturbative { kappa }, -0.5, hi, move |e| {
            Ok(quartic::lambda_pert(e, kappa))
        })
    }

    /// Generic semiclassical quadrature on a surface. Energies at or below the
    /// surface minimum are nudged just above it.
    pub fn quadrature(surface: EnergySurface, cfg: QuadratureConfig) -> Result<Self, LambdaError> {
        Self::quadrature_below(surface, cfg, f64::INFINITY)
    }

    /// As [`LambdaFunction::quadrature`] with the domain cut at `hi`.
    pub fn quadrature_below(surface: EnergySurface, cfg: QuadratureConfig, hi: f64) -> Result<Self, LambdaError> {
        let lo = surface.minimum();
        let name = surface.describe();
        Self::new(LambdaSource::Quadrature { surface: name }, lo, hi, move |e| {
            let e = e.max(lo + 1e-12 * lo.abs().max(1.0));
            lambda_sc(&surface, e, &cfg).map_err(|err| LambdaError::Evaluation {
                e,
                message: err.to_string(),
            })
        })
    }

    /// Piecewise-linear interpolation through `(e, λ)` samples.
    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self, LambdaError> {
        if points.len() < 2 || points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(LambdaError::BadTable);
        }
        let lo = points[0].0;
        let hi = points[points.len() - 1].0;
        let n = points.len();
        Self::new(LambdaSource::Tabulated { points: n }, lo, hi, move |e| {
            let i = points.partition_point(|p| p.0 <= e).clamp(1, n - 1);
            let (x0, y0) = points[i - 1];
            let (x1, y1) = points[i];
            Ok(y0 + (y1 - y0) * (e - x0) / (x1 - x0))
        })
    }

    pub fn source(&self) -> &LambdaSource {
        &self.source
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn in_domain(&self, e: f64) -> bool {
        e >= self.lo && e < self.hi
    }

    /// `λ(e)`, failing outside the declared domain.
    pub fn eval(&self, e: f64) -> Result<f64, LambdaError> {
        if !self.in_domain(e) {
            return Err(LambdaError::OutOfDomain {
                e,
                lo: self.lo,
                hi: self.hi,
            });
        }
        (self.eval)(e)
    }

    fn sample_points(&self) -> Vec<f64> {
        let lo = if self.lo.is_finite() { self.lo } else { -0.5 };
        let hi_f = if self.hi.is_finite() { self.hi } else { lo.abs().max(1.0) * 1e4 };
        let lo = if self.lo.is_finite() { lo } else { lo.min(hi_f - 1.0) };
        let span = hi_f - lo;
        (0..POSITIVITY_SAMPLES)
            .map(|i| {
                let t = i as f64 / POSITIVITY_SAMPLES as f64;
                if self.hi.is_finite() {
                    lo + span * t
                } else {
                    // geometric spacing reaches far above the bottom
                    lo + (span.ln() * t).exp() - 1.0 + t
                }
            })
            .filter(|&e| self.in_domain(e))
            .collect()
    }

    fn check_positive(&self) -> Result<(), LambdaError> {
        for e in self.sample_points() {
            let v = (self.eval)(e)?;
            if !(v > 0.0) {
                return Err(LambdaError::NonPositive { e, value: v });
            }
        }
        Ok(())
    }
}

/// Largest `e` where the second-order `λ` is positive (`+∞` if never zero).
fn perturbative_upper_edge(kappa: f64) -> f64 {
    if kappa == 0.0 {
        return f64::INFINITY;
    }
    // 1 + 3κh − κ²(69/4 h² − 9/2 h + 15/2) = 0 in h = e + 1/2
    let a = -17.25 * kappa * kappa;
    let b = 3.0 * kappa + 4.5 * kappa * kappa;
    let c = 1.0 - 7.5 * kappa * kappa;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return f64::INFINITY;
    }
    let r = disc.sqrt();
    let roots = [(-b + r) / (2.0 * a), (-b - r) / (2.0 * a)];
    let h = roots.into_iter().filter(|h| *h > 0.0).fold(f64::INFINITY, f64::min);
    h - 0.5
}
