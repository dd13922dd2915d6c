//! Closed-form and perturbative results for `H = a†a + 1/2 + (κ/4)(a + a†)⁴`.
//!
//! With `ξ = 16(e − 1/2)κ` the level curve satisfies `∂e/∂u = √(1 + ξ cos⁴θ)`,
//! and the loop integral reduces to complete elliptic integrals.

mod elliptic;
mod series;

use std::f64::consts::PI;

use thiserror::Error;

pub use elliptic::{elliptic_f, elliptic_k};
pub use series::{
    energy_pert, energy_pert_exact, energy_sc_series, energy_sc_series_exact, groundstate_pert, groundstate_pert_poly,
    lambda_pert, lambda_pert_series, lambda_sc_series, lambda_sc_series_poly, pert_coefficients_in_n, sc_coefficients_in_n,
};

/// Γ(1/4), frozen from the series evaluation in the tests of this module.
pub const GAMMA_QUARTER: f64 = 3.625_609_908_221_908;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuarticError {
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("energy {e} lies beyond the negative-coupling bound e_max = {e_max}")]
    BeyondBound { e: f64, e_max: f64 },
}

/// `16 (e − 1/2) κ`.
pub fn xi(e: f64, kappa: f64) -> f64 {
    16.0 * (e - 0.5) * kappa
}

/// Elliptic parameters of a level `(e, κ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParams {
    pub xi: f64,
    /// Parameter of the positive branch, `(√(1+ξ) − 1)/(2√(1+ξ))`.
    pub q: Option<f64>,
    /// Parameter of the negative branch, `2√|ξ|/(1 + √|ξ|)`.
    pub q_neg: Option<f64>,
}

impl EllipticParams {
    pub fn new(e: f64, kappa: f64) -> Result<Self, QuarticError> {
        if !(e > 0.5) {
            return Err(QuarticError::Domain(format!("need e > 1/2, got {e}")));
        }
        let x = xi(e, kappa);
        if kappa >= 0.0 {
            let s = (1.0 + x).sqrt();
            // √(1+ξ) − 1 written without cancellation
            let q = x / (s + 1.0) / (2.0 * s);
            Ok(Self {
                xi: x,
                q: Some(q),
                q_neg: None,
            })
        } else {
            let a = x.abs();
            if a > 1.0 {
                return Err(QuarticError::BeyondBound {
                    e,
                    e_max: e_max_negative(kappa)?,
                });
            }
            let r = a.sqrt();
            Ok(Self {
                xi: x,
                q: None,
                q_neg: Some(2.0 * r / (1.0 + r)),
            })
        }
    }

    /// Amplitude `α(θ)` of the positive branch for `θ ∈ [0, π/2]`.
    pub fn alpha(&self, theta: f64) -> Option<f64> {
        self.q?;
        let s = (1.0 + self.xi).sqrt();
        let t2 = theta.tan().powi(2);
        if !t2.is_finite() {
            return Some(PI);
        }
        Some(((s - t2) / (s + t2)).clamp(-1.0, 1.0).acos())
    }

    /// Amplitude `α′(θ)` of the negative branch for `θ ∈ [0, π/2]`.
    pub fn alpha_neg(&self, theta: f64) -> Option<f64> {
        self.q_neg?;
        let w = (1.0 + self.xi.abs().sqrt()).sqrt();
        if theta >= 0.5 * PI {
            return Some(0.5 * PI);
        }
        Some((theta.tan() / w).atan())
    }

    /// `I(θ) = ∫₀^θ dφ/√(1 + ξ cos⁴φ)` for any θ, via the elliptic reduction on
    /// `[0, π/2]` and the symmetries of `cos⁴`.
    pub fn phase_integral(&self, theta: f64) -> Result<f64, QuarticError> {
        let quarter = self.reduced_integral(0.5 * PI)?;
        let turns = (theta / PI).floor();
        let rem = theta - turns * PI;
        let within = if rem <= 0.5 * PI {
            self.reduced_integral(rem)?
        } else {
            2.0 * quarter - self.reduced_integral(PI - rem)?
        };
        Ok(2.0 * quarter * turns + within)
    }

    fn reduced_integral(&self, theta: f64) -> Result<f64, QuarticError> {
        if let Some(q) = self.q {
            let alpha = self.alpha(theta).expect("positive branch");
            Ok(elliptic_f(alpha, q)? / (2.0 * (1.0 + self.xi).powf(0.25)))
        } else {
            let qn = self.q_neg.expect("negative branch");
            let alpha = self.alpha_neg(theta).expect("negative branch");
            Ok(elliptic_f(alpha, qn)? / (1.0 + self.xi.abs().sqrt()).sqrt())
        }
    }
}

/// `(π/2)(1+ξ)^{1/4} / K(√q)` for `κ > 0`.
pub fn lambda_sc_quartic(e: f64, kappa: f64) -> Result<f64, QuarticError> {
    if !(kappa > 0.0) {
        return Err(QuarticError::Domain(format!("need kappa > 0, got {kappa}")));
    }
    let p = EllipticParams::new(e, kappa)?;
    let q = p.q.expect("positive branch");
    Ok(0.5 * PI * (1.0 + p.xi).powf(0.25) / elliptic_k(q.sqrt())?)
}

/// `(π/2)√(1 + √|ξ|) / K(√q′)` for `κ < 0`, zero at `|ξ| = 1`.
pub fn lambda_sc_quartic_negative(e: f64, kappa: f64) -> Result<f64, QuarticError> {
    if !(kappa < 0.0) {
        return Err(QuarticError::Domain(format!("need kappa < 0, got {kappa}")));
    }
    let p = EllipticParams::new(e, kappa)?;
    let qn = p.q_neg.expect("negative branch");
    if qn >= 1.0 {
        return Ok(0.0);
    }
    Ok(0.5 * PI * (1.0 + p.xi.abs().sqrt()).sqrt() / elliptic_k(qn.sqrt())?)
}

/// Dispatches on the sign of κ; `κ = 0` gives the harmonic value 1.
pub fn lambda_sc_quartic_signed(e: f64, kappa: f64) -> Result<f64, QuarticError> {
    if kappa > 0.0 {
        lambda_sc_quartic(e, kappa)
    } else if kappa < 0.0 {
        lambda_sc_quartic_negative(e, kappa)
    } else if e > 0.5 {
        Ok(1.0)
    } else {
        Err(QuarticError::Domain(format!("need e > 1/2, got {e}")))
    }
}

/// Upper edge of the spectrum for negative coupling, `1/2 + 1/(16|κ|)`.
pub fn e_max_negative(kappa: f64) -> Result<f64, QuarticError> {
    if !(kappa < 0.0) {
        return Err(QuarticError::Domain(format!("need kappa < 0, got {kappa}")));
    }
    Ok(0.5 + 1.0 / (16.0 * kappa.abs()))
}

/// `3^{4/3} π² Γ(1/4)^{−8/3}`.
pub fn wkb_energy_prefactor() -> f64 {
    3f64.powf(4.0 / 3.0) * PI * PI * GAMMA_QUARTER.powf(-8.0 / 3.0)
}

/// Large-`n` level `3^{4/3} π² Γ(1/4)^{−8/3} κ^{1/3} n^{4/3}`.
pub fn wkb_energy(n: f64, kappa: f64) -> f64 {
    wkb_energy_prefactor() * kappa.cbrt() * n.powf(4.0 / 3.0)
}

/// Large-`e` spacing `4π^{3/2} Γ(1/4)^{−2} (eκ)^{1/4}`.
pub fn wkb_spacing(e: f64, kappa: f64) -> f64 {
    4.0 * PI.powf(1.5) / (GAMMA_QUARTER * GAMMA_QUARTER) * (e * kappa).powf(0.25)
}

/// Regime in which a method's output is meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    /// Truncated series: small κ and small n.
    Perturbative,
    /// Asymptotic formula: large n.
    Wkb,
    /// No restriction beyond the method's domain.
    Unrestricted,
}

impl Validity {
    pub fn label(self) -> &'static str {
        match self {
            Validity::Perturbative => "small kappa, small n",
            Validity::Wkb => "large n",
            Validity::Unrestricted => "any n",
        }
    }

    /// Warning text when `(κ, n_max)` leaves the regime, otherwise `None`.
    pub fn warning(self, kappa: f64, n_max: usize) -> Option<String> {
        match self {
            Validity::Perturbative => {
                let g = 3.0 * kappa.abs() * n_max.max(1) as f64;
                (g > 0.1).then(|| {
                    format!(
                        "perturbative columns outside small kappa, small n regime (3|kappa| n_max = {g:.3} > 0.1)"
                    )
                })
            }
            Validity::Wkb => (n_max < 10).then(|| format!("WKB columns need large n (n_max = {n_max} < 10)")),
            Validity::Unrestricted => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ln Γ(x) for large x from the Stirling series.
    fn ln_gamma_stirling(x: f64) -> f64 {
        let b = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0];
        let mut s = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln();
        let mut xp = x;
        for c in b {
            s += c / xp;
            xp *= x * x;
        }
        s
    }

    #[test]
    fn gamma_quarter_from_series() {
        // Γ(1/4) = Γ(1/4 + N) / Π_{k<N} (1/4 + k)
        let n = 30;
        let mut ln = ln_gamma_stirling(0.25 + n as f64);
        for k in 0..n {
            ln -= (0.25 + k as f64).ln();
        }
        assert!((ln.exp() - GAMMA_QUARTER).abs() < 1e-13 * GAMMA_QUARTER);
    }

    #[test]
    fn negative_bound() {
        assert_eq!(e_max_negative(-1.0 / 16.0).unwrap(), 1.5);
        assert!((e_max_negative(-0.01).unwrap() - 6.75).abs() < 1e-15);
        assert!(e_max_negative(0.0).is_err());
        let k = -0.01;
        assert!((xi(e_max_negative(k).unwrap(), k).abs() - 1.0).abs() < 1e-15);
        assert_eq!(lambda_sc_quartic_negative(e_max_negative(k).unwrap(), k).unwrap(), 0.0);
        assert!(matches!(
            lambda_sc_quartic_negative(7.0, k),
            Err(QuarticError::BeyondBound { .. })
        ));
    }

    #[test]
    fn harmonic_limits() {
        assert!((lambda_sc_quartic(0.5 + 1e-12, 0.01).unwrap() - 1.0).abs() < 1e-12);
        assert!((lambda_sc_quartic_negative(0.5 + 1e-12, -0.01).unwrap() - 1.0).abs() < 1e-6);
        assert!(lambda_sc_quartic(1.0, 0.0).is_err());
        assert_eq!(lambda_sc_quartic_signed(1.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn spacing_identity() {
        let k = elliptic_k(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        for (e, kap) in [(10.0, 0.01), (1e4, 1.0)] {
            let lhs = wkb_spacing(e, kap);
            let rhs = PI * (e * kap).powf(0.25) / k;
            assert!((lhs - rhs).abs() < 1e-12 * rhs);
        }
    }

    #[test]
    fn validity_warnings() {
        assert!(Validity::Perturbative.warning(0.01, 2).is_none());
        assert!(Validity::Perturbative.warning(0.1, 10).is_some());
        assert!(Validity::Wkb.warning(0.1, 3).is_some());
    }
}
