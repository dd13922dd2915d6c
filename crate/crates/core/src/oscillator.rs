//! Oscillator definitions.
//!
//! All internal energies are dimensionless, `e = E / epsilon0`, with ħ = 1.
//! The harmonic part is `a†a + 1/2`; the potential is one of the families
//! below, each controlled by the dimensionless coupling `kappa = ε₁/ε₀`.

use thiserror::Error;

use crate::opalg::{CouplingPoly, OperatorPoly};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecError {
    #[error("energy scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("monomial degree must be even and at least 4, got {0}")]
    BadDegree(u32),
    #[error("exponential potential needs alpha^2 > 0, got {0}")]
    BadAlpha(f64),
    #[error("coupling must be finite, got {0}")]
    BadCoupling(f64),
}

/// Interaction potential added to `a†a + 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    /// Pure harmonic oscillator.
    None,
    /// `(kappa/4)(a + a†)^4`.
    Quartic { kappa: f64 },
    /// `(kappa/l)(a + a†)^l`, `l` even and `>= 4`.
    Monomial { degree: u32, kappa: f64 },
    /// `kappa * exp(alpha_sq (a + a†)^2)`.
    Exponential { alpha_sq: f64, kappa: f64 },
}

/// Fixed unit convention: ħ = 1, energies in units of `epsilon0`, and phase-space
/// coordinates `z = x' + i p'` with `|z|^2` the harmonic action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Dimensionless,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSpec {
    epsilon0: f64,
    potential: Potential,
    units: Units,
}

impl OscillatorSpec {
    pub fn new(epsilon0: f64, potential: Potential) -> Result<Self, SpecError> {
        if !(epsilon0 > 0.0 && epsilon0.is_finite()) {
            return Err(SpecError::NonPositiveScale(epsilon0));
        }
        match potential {
            Potential::None => {}
            Potential::Quartic { kappa } => check_kappa(kappa)?,
            Potential::Monomial { degree, kappa } => {
                if degree < 4 || degree % 2 != 0 {
                    return Err(SpecError::BadDegree(degree));
                }
                check_kappa(kappa)?;
            }
            Potential::Exponential { alpha_sq, kappa } => {
                if !(alpha_sq > 0.0 && alpha_sq.is_finite()) {
                    return Err(SpecError::BadAlpha(alpha_sq));
                }
                check_kappa(kappa)?;
            }
        }
        Ok(Self {
            epsilon0,
            potential,
            units: Units::Dimensionless,
        })
    }

    pub fn sho() -> Self {
        Self {
            epsilon0: 1.0,
            potential: Potential::None,
            units: Units::Dimensionless,
        }
    }

    /// Quartic oscillator with unit energy scale.
    pub fn quartic(kappa: f64) -> Self {
        Self::new(1.0, Potential::Quartic { kappa }).expect("finite coupling")
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    pub fn potential(&self) -> Potential {
        self.potential
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn kappa(&self) -> f64 {
        match self.potential {
            Potential::None => 0.0,
            Potential::Quartic { kappa }
            | Potential::Monomial { kappa, .. }
            | Potential::Exponential { kappa, .. } => kappa,
        }
    }

    pub fn is_quartic(&self) -> bool {
        matches!(
            self.potential,
            Potential::Quartic { .. } | Potential::Monomial { degree: 4, .. }
        )
    }

    /// Degree of the potential when it is a polynomial in `a + a†`.
    pub fn polynomial_degree(&self) -> Option<u32> {
        match self.potential {
            Potential::None => Some(2),
            Potential::Quartic { .. } => Some(4),
            Potential::Monomial { degree, .. } => Some(degree),
            Potential::Exponential { .. } => None,
        }
    }

    /// `H/ε₀` as a normal-ordered polynomial with the coupling kept symbolic
    /// (the interaction sits at first order in κ). `None` for non-polynomial
    /// potentials.
    pub fn hamiltonian_poly(&self, max_order: usize) -> Option<OperatorPoly> {
        let max_order = max_order.max(1);
        let harmonic = OperatorPoly::number(max_order) + OperatorPoly::constant_rational(max_order, 1, 2);
        let degree = match self.potential {
            Potential::None => return Some(harmonic),
            Potential::Quartic { .. } => 4,
            Potential::Monomial { degree, .. } => degree,
            Potential::Exponential { .. } => return None,
        };
        let x = OperatorPoly::position_sum(max_order);
        let interaction = x.pow(degree);
        let coupling = CouplingPoly::kappa_power(max_order, 1).scale_rational(1, degree as i64);
        Some(harmonic + interaction.scale_poly(&coupling))
    }
}

fn check_kappa(kappa: f64) -> Result<(), SpecError> {
    if kappa.is_finite() {
        Ok(())
    } else {
        Err(SpecError::BadCoupling(kappa))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        assert!(OscillatorSpec::new(0.0, Potential::None).is_err());
        assert!(OscillatorSpec::new(1.0, Potential::Monomial { degree: 5, kappa: 1.0 }).is_err());
        assert!(OscillatorSpec::new(1.0, Potential::Monomial { degree: 2, kappa: 1.0 }).is_err());
        assert!(OscillatorSpec::new(
            1.0,
            Potential::Exponential {
                alpha_sq: -1.0,
                kappa: 1.0
            }
        )
        .is_err());
        assert!(OscillatorSpec::new(2.0, Potential::Quartic { kappa: -0.1 }).is_ok());
    }

    #[test]
    fn quartic_hamiltonian_constant_term() {
        // <0|H|0> = 1/2 + (κ/4)·3
        let h = OscillatorSpec::quartic(0.0).hamiltonian_poly(1).unwrap();
        let c = h.coefficient(0, 0);
        assert_eq!(c.to_string(), "1/2 + 3/4 k");
    }
}
