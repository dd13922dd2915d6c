//! Boltzmann-weighted traces over a ladder: partition function, mean energy
//! and number, the thermal identities tying them to `λ(H)`, and the classical
//! phase-space partition function.
//!
//! `β` is measured in units of `1/ε₀`, so every exponent reads `β e`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::ladder::{LambdaError, LambdaFunction, Spectrum};
use crate::numeric::{integrate, AdaptiveOptions, CompensatedSum, QuadratureFailure};
use crate::oscillator::OscillatorSpec;
use crate::semiclassical::{radial_solve, EnergySurface, QuadratureConfig, SemiclassicalError};

/// Tail tolerance used by the identity checks.
pub const VERIFY_TAIL_TOL: f64 = 1e-10;

/// Step of the finite-difference cross-check of `∂β⟨e^{−βλ}⟩`.
pub const FD_STEP: f64 = 1e-5;

/// Cut of the classical radial integral at `β(e − e_floor)` equal to this.
const CLASSICAL_EXPONENT_CUT: f64 = 50.0;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ThermalError {
    #[error("inverse temperature must be positive and finite, got {0}")]
    BadBeta(f64),
    #[error("tail bound {bound:e} exceeds {tol:e} of Z at beta = {beta} with {levels} levels; extend the ladder")]
    TailNotBounded { beta: f64, bound: f64, tol: f64, levels: usize },
    #[error("spacing evaluation failed: {0}")]
    Lambda(#[from] LambdaError),
    #[error("classical integral failed: {0}")]
    Semiclassical(#[from] SemiclassicalError),
    #[error("potential is not binding: {0}")]
    NotBinding(String),
}

impl From<QuadratureFailure> for ThermalError {
    fn from(f: QuadratureFailure) -> Self {
        ThermalError::Semiclassical(f.into())
    }
}

/// Thermal averages at one inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    pub beta: f64,
    pub z: f64,
    /// `⟨H⟩/ε₀`.
    pub avg_energy: f64,
    /// `⟨N⟩` with `N(e_n) = n`.
    pub avg_number: f64,
    /// Bound on the neglected tail of the level sum, relative to `Z`.
    pub truncation_bound: f64,
}

/// Per-level data `g_n = e_n − e_g`, `λ_n`, relative weights
/// `w_n = e^{−β g_n}` and `ρ_n = e^{−βλ_n}`.
///
/// On a terminated ladder `ρ_N = 0`: there is no level above the top.
struct Levels {
    g: Vec<f64>,
    lambda: Vec<f64>,
    w: Vec<f64>,
    rho: Vec<f64>,
    /// `Σ w_n`.
    norm: f64,
}

impl Levels {
    fn new(s: &Spectrum, lambdas: &[f64], beta: f64) -> Self {
        let e_g = s.ground_level();
        let g: Vec<f64> = s.levels().iter().map(|e| e - e_g).collect();
        let w: Vec<f64> = g.iter().map(|g| (-beta * g).exp()).collect();
        let mut rho: Vec<f64> = lambdas.iter().map(|l| (-beta * l).exp()).collect();
        if s.is_terminated() {
            *rho.last_mut().expect("non-empty") = 0.0;
        }
        let norm = sum(w.iter().copied());
        Self {
            g,
            lambda: lambdas.to_vec(),
            w,
            rho,
            norm,
        }
    }

    /// `⟨f(n)⟩ = Σ w_n f(n) / Σ w_n`.
    fn avg<F: Fn(usize) -> f64>(&self, f: F) -> f64 {
        sum((0..self.w.len()).map(|n| self.w[n] * f(n))) / self.norm
    }
}

fn sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::new(0.0);
    for v in values {
        acc.add(v);
    }
    acc.value()
}

fn check_beta(beta: f64) -> Result<(), ThermalError> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(ThermalError::BadBeta(beta))
    }
}

fn relative(lhs: f64, rhs: f64) -> f64 {
    let d = (lhs - rhs).abs();
    if lhs != 0.0 {
        d / lhs.abs()
    } else {
        d
    }
}

/// Geometric bound on `Σ_{m>N} w_m / Σ w_n`, zero for a terminated ladder.
///
/// Requires the spacing not to shrink at the top of the ladder; past that
/// point `w_{m+1}/w_m ≤ e^{−βλ_N}`.
fn tail_bound(s: &Spectrum, lv: &Levels, beta: f64) -> f64 {
    if s.is_terminated() {
        return 0.0;
    }
    let n = lv.w.len() - 1;
    if n >= 1 && lv.lambda[n] < lv.lambda[n - 1] {
        return f64::INFINITY;
    }
    let rho = (-beta * lv.lambda[n]).exp();
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    lv.w[n] * rho / (1.0 - rho) / lv.norm
}

/// `Z = Σ e^{−β e_n}` with `⟨H⟩` and `⟨N⟩`, failing if the neglected tail is
/// not certified below `tol·Z`.
pub fn partition_function(s: &Spectrum, beta: f64, tol: f64) -> Result<ThermalState, ThermalError> {
    check_beta(beta)?;
    let lv = Levels::new(s, s.lambdas(), beta);
    let bound = tail_bound(s, &lv, beta);
    if !(bound <= tol) {
        return Err(ThermalError::TailNotBounded {
            beta,
            bound,
            tol,
            levels: s.len(),
        });
    }
    let e_g = s.ground_level();
    Ok(ThermalState {
        beta,
        z: (-beta * e_g).exp() * lv.norm,
        avg_energy: e_g + lv.avg(|n| lv.g[n]),
        avg_number: lv.avg(|n| n as f64),
        truncation_bound: bound,
    })
}

fn levels_for(s: &Spectrum, lambda: &LambdaFunction, beta: f64) -> Result<(ThermalState, Levels), ThermalError> {
    let state = partition_function(s, beta, VERIFY_TAIL_TOL)?;
    let lambdas = s.levels().iter().map(|&e| lambda.eval(e)).collect::<Result<Vec<_>, _>>()?;
    Ok((state, Levels::new(s, &lambdas, beta)))
}

/// Both readings of the `λ`-weighted thermal identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmsResidual {
    /// `|⟨λe^{−βλ}⟩ − ⟨(H − e_g)(1 − e^{−βλ})⟩| / |⟨λe^{−βλ}⟩|`, exact on
    /// any ladder up to the tail.
    pub residual: f64,
    /// `|⟨λ⟩ − ⟨(H − e_g)(1 − e^{−βλ})⟩| / |⟨λ⟩|`, which does not vanish even
    /// for the harmonic ladder.
    pub literal: f64,
}

/// Compares `⟨λ(H)e^{−βλ(H)}⟩` with `⟨(H − e_g)(1 − e^{−βλ(H)})⟩`, and reports
/// the form without the Boltzmann factor on the left as a diagnostic.
pub fn verify_kms_identity(s: &Spectrum, lambda: &LambdaFunction, beta: f64) -> Result<KmsResidual, ThermalError> {
    let (_, lv) = levels_for(s, lambda, beta)?;
    let rhs = lv.avg(|n| lv.g[n] * (1.0 - lv.rho[n]));
    let weighted = lv.avg(|n| lv.lambda[n] * lv.rho[n]);
    let plain = lv.avg(|n| lv.lambda[n]);
    Ok(KmsResidual {
        residual: relative(weighted, rhs),
        literal: relative(plain, rhs),
    })
}

/// Residuals of the mean-energy and partition-function identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyIdentityResidual {
    /// Larger of `energy` and `partition`.
    pub residual: f64,
    /// `⟨H⟩` direct vs `e_g − ∂β⟨e^{−βλ}⟩ / (1 − ⟨e^{−βλ}⟩)`.
    pub energy: f64,
    /// `Z` direct vs `e^{−βe_g} / (1 − ⟨e^{−βλ}⟩)`.
    pub partition: f64,
    /// Analytic vs central-difference `∂β⟨e^{−βλ}⟩`.
    pub finite_difference: f64,
}

/// `⟨e^{−βλ}⟩` at inverse temperature `b` on fixed levels.
fn occupancy_at(s: &Spectrum, lambdas: &[f64], b: f64) -> f64 {
    let lv = Levels::new(s, lambdas, b);
    lv.avg(|n| lv.rho[n])
}

/// Checks the mean-energy identity with the β-derivative of the trace ratio
/// `X = ⟨e^{−βλ}⟩` taken analytically,
/// `∂βX = −⟨λe^{−βλ}⟩ − ⟨e^{−βλ}H⟩ + ⟨e^{−βλ}⟩⟨H⟩`,
/// and the closed form of `Z`.
pub fn verify_avg_energy_identity(
    s: &Spectrum,
    lambda: &LambdaFunction,
    beta: f64,
) -> Result<EnergyIdentityResidual, ThermalError> {
    let (state, lv) = levels_for(s, lambda, beta)?;
    let x = lv.avg(|n| lv.rho[n]);
    let mean_g = lv.avg(|n| lv.g[n]);
    let dx = -lv.avg(|n| lv.lambda[n] * lv.rho[n]) - lv.avg(|n| lv.rho[n] * lv.g[n]) + x * mean_g;
    let e_g = s.ground_level();
    let energy = relative(state.avg_energy, e_g - dx / (1.0 - x));
    let partition = relative(state.z, (-beta * e_g).exp() / (1.0 - x));
    let h = FD_STEP;
    let fd = (occupancy_at(s, &lv.lambda, beta + h) - occupancy_at(s, &lv.lambda, beta - h)) / (2.0 * h);
    Ok(EnergyIdentityResidual {
        residual: energy.max(partition),
        energy,
        partition,
        finite_difference: relative(dx, fd),
    })
}

/// Compares `⟨e^{−βλ}⟩` with `⟨N(1 − e^{−βλ})⟩`, `N(e_n) = n`.
pub fn verify_number_identity(s: &Spectrum, lambda: &LambdaFunction, beta: f64) -> Result<f64, ThermalError> {
    let (_, lv) = levels_for(s, lambda, beta)?;
    let lhs = lv.avg(|n| lv.rho[n]);
    let rhs = lv.avg(|n| n as f64 * (1.0 - lv.rho[n]));
    Ok(relative(lhs, rhs))
}

/// Classical `Z_cl = (1/2π) ∬ e^{−β(e(u,θ) − e_floor)} du dθ` for the surface
/// of `spec`.
pub fn classical_partition(spec: &OscillatorSpec, beta: f64, cfg: &QuadratureConfig) -> Result<f64, ThermalError> {
    classical_partition_surface(&EnergySurface::from_spec(spec), beta, cfg)
}

/// [`classical_partition`] on an explicit surface. Energies are measured from
/// the floor `e(0, θ)`, so the harmonic surface gives `1/β`.
pub fn classical_partition_surface(
    surface: &EnergySurface,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, ThermalError> {
    check_beta(beta)?;
    cfg.validate()?;
    if !surface.is_binding_positive() {
        return Err(ThermalError::NotBinding(surface.describe()));
    }
    let opts = AdaptiveOptions {
        abs_tol: cfg.abs_tol,
        rel_tol: 1e-12,
        max_depth: cfg.max_depth,
    };
    let radial = |theta: f64| -> Result<f64, ThermalError> {
        let floor = surface.floor(theta);
        let u_max = radial_solve(surface, floor + CLASSICAL_EXPONENT_CUT / beta, theta, cfg)?;
        integrate(
            |u| Ok::<f64, ThermalError>((-beta * (surface.value(u, theta) - floor)).exp()),
            0.0,
            u_max,
            &opts,
        )
    };
    let sym = surface.symmetry();
    let total = if cfg.use_symmetry {
        let copies = 2.0 * PI / sym.period;
        if sym.reflective {
            2.0 * copies * integrate(radial, 0.0, 0.5 * sym.period, &opts)?
        } else {
            copies * integrate(radial, 0.0, sym.period, &opts)?
        }
    } else {
        integrate(radial, 0.0, 2.0 * PI, &opts)?
    };
    Ok(total / (2.0 * PI))
}
