use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::oscillator::{OscillatorSpec, Potential};

/// Angular symmetry of a surface: `e(u, θ + period) = e(u, θ)` and, when
/// `reflective`, `e(u, −θ) = e(u, θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symmetry {
    pub period: f64,
    pub reflective: bool,
}

impl Symmetry {
    pub const NONE: Symmetry = Symmetry {
        period: 2.0 * PI,
        reflective: false,
    };
    pub const EVEN: Symmetry = Symmetry {
        period: PI,
        reflective: true,
    };
}

type SurfaceFn = Arc<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Harmonic,
    /// `1/2 + u + c·u·cos 2θ`
    Degree2 { c: f64 },
    /// `1/2 + u + (κ/l) 2^l u^{l/2} cos^l θ`
    Monomial { degree: u32, kappa: f64 },
    /// `1/2 + u + κ exp(4α² u cos²θ)`
    Exponential { alpha_sq: f64, kappa: f64 },
    /// Returns `(e, ∂e/∂u)` at `(u, θ)`.
    Custom { f: SurfaceFn, floor: f64 },
}

/// Semiclassical energy `e(u, θ)` over the phase plane, `u = |z|²`.
#[derive(Clone)]
pub struct EnergySurface {
    kind: Kind,
    symmetry: Symmetry,
}

impl fmt::Debug for EnergySurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EnergySurface")
            .field("kind", &self.describe())
            .field("symmetry", &self.symmetry)
            .finish()
    }
}

impl EnergySurface {
    pub fn harmonic() -> Self {
        Self {
            kind: Kind::Harmonic,
            symmetry: Symmetry::EVEN,
        }
    }

    /// `1/2 + u + 4κu² cos⁴θ`
    pub fn quartic(kappa: f64) -> Self {
        Self::monomial(4, kappa)
    }

    pub fn monomial(degree: u32, kappa: f64) -> Self {
        Self {
            kind: Kind::Monomial { degree, kappa },
            symmetry: if degree.is_multiple_of(2) { Symmetry::EVEN } else { Symmetry::NONE },
        }
    }

    pub fn exponential(alpha_sq: f64, kappa: f64) -> Self {
        Self {
            kind: Kind::Exponential { alpha_sq, kappa },
            symmetry: Symmetry::EVEN,
        }
    }

    /// Quadratic but anisotropic surface `1/2 + u + c·u·cos 2θ`, `|c| < 1`.
    pub fn degree2(c: f64) -> Self {
        Self {
            kind: Kind::Degree2 { c },
            symmetry: Symmetry::EVEN,
        }
    }

    /// User surface returning `(e, ∂e/∂u)`, with `e(0, θ) = floor`.
    pub fn custom<F>(f: F, floor: f64, symmetry: Symmetry) -> Self
    where
        F: Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Self {
            kind: Kind::Custom {
                f: Arc::new(f),
                floor,
            },
            symmetry,
        }
    }

    pub fn from_spec(spec: &OscillatorSpec) -> Self {
        match spec.potential() {
            Potential::None => Self::harmonic(),
            Potential::Quartic { kappa } => Self::quartic(kappa),
            Potential::Monomial { degree, kappa } => Self::monomial(degree, kappa),
            Potential::Exponential { alpha_sq, kappa } => Self::exponential(alpha_sq, kappa),
        }
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::Harmonic => "harmonic".into(),
            Kind::Degree2 { c } => format!("degree2(c={c})"),
            Kind::Monomial { degree, kappa } => format!("monomial(l={degree}, kappa={kappa})"),
            Kind::Exponential { alpha_sq, kappa } => format!("exponential(alpha^2={alpha_sq}, kappa={kappa})"),
            Kind::Custom { .. } => "custom".into(),
        }
    }

    /// True if the interaction raises the energy everywhere (`e ≥ floor + u`).
    pub fn is_binding_positive(&self) -> bool {
        match &self.kind {
            Kind::Harmonic => true,
            Kind::Degree2 { c } => c.abs() < 1.0,
            Kind::Monomial { kappa, .. } | Kind::Exponential { kappa, .. } => *kappa >= 0.0,
            Kind::Custom { .. } => false,
        }
    }

    /// `(e(u, θ), ∂e/∂u)`.
    pub fn eval(&self, u: f64, theta: f64) -> (f64, f64) {
        match &self.kind {
            Kind::Harmonic => (0.5 + u, 1.0),
            Kind::Degree2 { c } => {
                let s = c * (2.0 * theta).cos();
                (0.5 + u + s * u, 1.0 + s)
            }
            Kind::Monomial { degree, kappa } => {
                let l = *degree as f64;
                let cl = theta.cos().powi(*degree as i32);
                let pref = kappa / l * 2f64.powi(*degree as i32) * cl;
                let half = 0.5 * l;
                let v = pref * u.powf(half);
                let dv = if u > 0.0 { pref * half * u.powf(half - 1.0) } else { 0.0 };
                (0.5 + u + v, 1.0 + dv)
            }
            Kind::Exponential { alpha_sq, kappa } => {
                let g = 4.0 * alpha_sq * theta.cos().powi(2);
                let ex = kappa * (g * u).exp();
                (0.5 + u + ex, 1.0 + g * ex)
            }
            Kind::Custom { f, .. } => f(u, theta),
        }
    }

    pub fn value(&self, u: f64, theta: f64) -> f64 {
        self.eval(u, theta).0
    }

    pub fn du(&self, u: f64, theta: f64) -> f64 {
        self.eval(u, theta).1
    }

    /// `e(0, θ)`.
    pub fn floor(&self, _theta: f64) -> f64 {
        match &self.kind {
            Kind::Exponential { kappa, .. } => 0.5 + kappa,
            Kind::Custom { floor, .. } => *floor,
            _ => 0.5,
        }
    }

    /// Minimum of `e(0, θ)` over θ.
    pub fn minimum(&self) -> f64 {
        self.floor(0.0)
    }
}
