//! Semiclassical spacing function from the periodicity of the phase function:
//! `λ^(sc)(e) = 2π / ∮ (∂e/∂u)⁻¹ dθ`, evaluated on the level curve
//! `e(u, θ) = e`, and the Bohr–Sommerfeld number function built from it.

mod surface;

use std::f64::consts::PI;

use num::complex::Complex64;
use thiserror::Error;

use crate::numeric::roots::{bisect, newton_bisect};
use crate::numeric::{integrate, AdaptiveOptions, QuadratureFailure};

pub use surface::{EnergySurface, Symmetry};

const ROOT_MAX_ITER: usize = 200;
const BRACKET_MAX_DOUBLINGS: usize = 200;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SemiclassicalError {
    #[error("no radial root: e = {e} is not above the surface floor {floor} at theta = {theta}")]
    NoRoot { e: f64, floor: f64, theta: f64 },
    #[error("surface is not monotone in u at theta = {theta}: level e = {e} exceeds the ridge {ridge}")]
    NonMonotone { e: f64, theta: f64, ridge: f64 },
    #[error("invalid quadrature configuration: {0}")]
    BadConfig(&'static str),
    #[error(transparent)]
    Quadrature(#[from] QuadratureFailure),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_depth: u32,
    pub root_rel_tol: f64,
    /// Integrate over the reduced angular range implied by the surface symmetry.
    pub use_symmetry: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_depth: 40,
            root_rel_tol: 1e-12,
            use_symmetry: true,
        }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, max_depth: u32, root_rel_tol: f64) -> Result<Self, SemiclassicalError> {
        let cfg = Self {
            abs_tol,
            max_depth,
            root_rel_tol,
            use_symmetry: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SemiclassicalError> {
        if !(self.abs_tol > 0.0) {
            return Err(SemiclassicalError::BadConfig("abs_tol must be positive"));
        }
        if !(self.root_rel_tol > 0.0) {
            return Err(SemiclassicalError::BadConfig("root_rel_tol must be positive"));
        }
        Ok(())
    }

    pub fn full_range(mut self) -> Self {
        self.use_symmetry = false;
        self
    }

    fn options(&self) -> AdaptiveOptions {
        AdaptiveOptions {
            abs_tol: self.abs_tol,
            rel_tol: 1e-14,
            max_depth: self.max_depth,
        }
    }
}

/// The `u ≥ 0` with `e(u, θ) = e`.
pub fn radial_solve(surface: &EnergySurface, e: f64, theta: f64, cfg: &QuadratureConfig) -> Result<f64, SemiclassicalError> {
    let floor = surface.floor(theta);
    if !(e > floor) {
        return Err(SemiclassicalError::NoRoot { e, floor, theta });
    }
    let mut lo = 0.0;
    let mut hi = e - floor;
    let mut bracketed = false;
    for _ in 0..BRACKET_MAX_DOUBLINGS {
        let (v, d) = surface.eval(hi, theta);
        if !(d > 0.0) {
            let ridge_u = bisect(|u| -surface.du(u, theta), lo, hi, 0.0, 200);
            let ridge = surface.value(ridge_u, theta);
            if ridge < e {
                return Err(SemiclassicalError::NonMonotone { e, theta, ridge });
            }
            hi = ridge_u;
            bracketed = true;
            break;
        }
        if v >= e {
            bracketed = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if !bracketed {
        return Err(SemiclassicalError::NoRoot { e, floor, theta });
    }
    let u = newton_bisect(
        |u| {
            let (v, d) = surface.eval(u, theta);
            (v - e, d)
        },
        0.0,
        hi,
        cfg.root_rel_tol,
        ROOT_MAX_ITER,
    );
    Ok(u)
}

/// `(∂e/∂u)⁻¹` on the level curve at angle θ.
fn inverse_slope(surface: &EnergySurface, e: f64, theta: f64, cfg: &QuadratureConfig) -> Result<f64, SemiclassicalError> {
    let u = radial_solve(surface, e, theta, cfg)?;
    Ok(1.0 / surface.du(u, theta))
}

/// `∮ (∂e/∂u)⁻¹ dθ` over a full turn.
pub fn loop_integral(surface: &EnergySurface, e: f64, cfg: &QuadratureConfig) -> Result<f64, SemiclassicalError> {
    cfg.validate()?;
    let sym = surface.symmetry();
    let opts = cfg.options();
    let f = |t: f64| inverse_slope(surface, e, t, cfg);
    if !cfg.use_symmetry {
        return integrate(f, 0.0, 2.0 * PI, &opts);
    }
    let copies = 2.0 * PI / sym.period;
    if sym.reflective {
        Ok(2.0 * copies * integrate(f, 0.0, 0.5 * sym.period, &opts)?)
    } else {
        Ok(copies * integrate(f, 0.0, sym.period, &opts)?)
    }
}

/// `λ^(sc)(e) = 2π / ∮ (∂e/∂u)⁻¹ dθ`.
pub fn lambda_sc(surface: &EnergySurface, e: f64, cfg: &QuadratureConfig) -> Result<f64, SemiclassicalError> {
    Ok(2.0 * PI / loop_integral(surface, e, cfg)?)
}

/// `√(e − 1/2) · exp{i λ^(sc)(e) ∫₀^θ (∂e/∂u)⁻¹ dφ}`.
pub fn phase_function(surface: &EnergySurface, e: f64, theta: f64, cfg: &QuadratureConfig) -> Result<Complex64, SemiclassicalError> {
    let lam = lambda_sc(surface, e, cfg)?;
    let partial = integrate(|t| inverse_slope(surface, e, t, cfg), 0.0, theta, &cfg.options())?;
    Ok(Complex64::from_polar((e - 0.5).max(0.0).sqrt(), lam * partial))
}

/// Bohr–Sommerfeld action `∫_{e_min}^{e} de′/λ^(sc)(e′)`, measured from the
/// surface minimum.
pub fn action_area(surface: &EnergySurface, e: f64, cfg: &QuadratureConfig) -> Result<f64, SemiclassicalError> {
    let bottom = surface.minimum();
    if !(e > bottom) {
        return Ok(0.0);
    }
    let opts = cfg.options();
    integrate(|x| Ok::<f64, SemiclassicalError>(1.0 / lambda_sc(surface, x, cfg)?), bottom, e, &opts)
}

/// Semiclassical number function; the integration constant is dropped, so it
/// coincides with [`action_area`].
pub fn number_sc(surface: &EnergySurface, e: f64, cfg: &QuadratureConfig) -> Result<f64, SemiclassicalError> {
    action_area(surface, e, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn harmonic_radial_and_lambda() {
        let s = EnergySurface::harmonic();
        for th in [0.0, 1.0, 2.5] {
            assert!((radial_solve(&s, 2.5, th, &cfg()).unwrap() - 2.0).abs() < 1e-12);
        }
        assert!((lambda_sc(&s, 3.0, &cfg()).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn quartic_radial_at_right_angle() {
        let s = EnergySurface::quartic(0.01);
        let u = radial_solve(&s, 2.5, PI / 2.0, &cfg()).unwrap();
        assert!((u - 2.0).abs() < 1e-12);
    }

    #[test]
    fn below_floor_has_no_root() {
        let s = EnergySurface::quartic(0.01);
        assert!(matches!(radial_solve(&s, 0.5, 0.0, &cfg()), Err(SemiclassicalError::NoRoot { .. })));
    }

    #[test]
    fn negative_coupling_past_ridge() {
        let s = EnergySurface::quartic(-0.05);
        // ridge at θ = 0 sits at e = 1/2 + 1/(16·0.05) = 1.75
        assert!(radial_solve(&s, 1.7, 0.0, &cfg()).is_ok());
        assert!(matches!(radial_solve(&s, 1.8, 0.0, &cfg()), Err(SemiclassicalError::NonMonotone { .. })));
    }

    #[test]
    fn degree_two_surface_gives_constant_lambda() {
        let c: f64 = 0.6;
        let s = EnergySurface::degree2(c);
        for e in [0.7, 3.0, 40.0] {
            let lam = lambda_sc(&s, e, &cfg()).unwrap();
            assert!((lam - (1.0 - c * c).sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn harmonic_phase_and_action() {
        let s = EnergySurface::harmonic();
        let f = phase_function(&s, 1.5, PI, &cfg()).unwrap();
        assert!((f - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((action_area(&s, 4.0, &cfg()).unwrap() - 3.5).abs() < 1e-10);
    }

    #[test]
    fn bad_config_rejected() {
        assert!(QuadratureConfig::new(0.0, 10, 1e-12).is_err());
        assert!(QuadratureConfig::new(1e-10, 10, -1.0).is_err());
    }
}
