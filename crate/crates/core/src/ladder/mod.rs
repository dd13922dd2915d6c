//! Energy ladders `e_n = e_{n−1} + λ(e_{n−1})` from a spacing function and a
//! ground level, with normalization products, the number function and the
//! spacing classification.

mod lambda;

use std::f64::consts::PI;

use thiserror::Error;

use crate::numeric::CompensatedSum;
use crate::semiclassical::{number_sc, EnergySurface, QuadratureConfig, SemiclassicalError};

pub use lambda::{LambdaError, LambdaFunction, LambdaSource};

/// Ladder of levels `e₀ = e_g < e₁ < … < e_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    e_g: f64,
    levels: Vec<f64>,
    /// `λ(e_n)` for every stored level.
    lambdas: Vec<f64>,
    /// `ln A_n`, with `A_0 = 1`.
    a_log: Vec<f64>,
    /// `A_n` itself; overflows to `+∞` for long ladders.
    a: Vec<f64>,
    source: LambdaSource,
    /// The next level would leave the domain of `λ`: the ladder is complete.
    terminated: bool,
}

impl Spectrum {
    pub fn ground_level(&self) -> f64 {
        self.e_g
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Option<f64> {
        self.levels.get(n).copied()
    }

    /// Highest index `N`.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn lambda_at_level(&self, n: usize) -> Option<f64> {
        self.lambdas.get(n).copied()
    }

    pub fn a_log(&self) -> &[f64] {
        &self.a_log
    }

    pub fn a_products(&self) -> &[f64] {
        &self.a
    }

    pub fn source(&self) -> &LambdaSource {
        &self.source
    }

    /// True when the spectrum is bounded and every level has been built.
    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// Ladder through given increasing levels, such as diagonalized
    /// eigenvalues. Spacings are the level differences; the top spacing
    /// repeats the one below it.
    pub fn from_levels(levels: Vec<f64>, source: LambdaSource) -> Result<Self, LadderError> {
        let Some(&e_g) = levels.first() else {
            return Err(LadderError::BadGround { e_g: f64::NAN });
        };
        let mut lambdas: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
        lambdas.push(lambdas.last().copied().unwrap_or(f64::NAN));
        let mut log_a = CompensatedSum::new(0.0);
        let mut a_log = vec![0.0];
        let mut a = vec![1.0];
        for &e in &levels[1..] {
            log_a.add((e - e_g).ln());
            a_log.push(log_a.value());
            a.push(a.last().expect("non-empty") * (e - e_g));
        }
        let s = Spectrum {
            e_g,
            levels,
            lambdas,
            a_log,
            a,
            source,
            terminated: false,
        };
        if let Some(n) = s.lambdas.iter().position(|l| !(*l > 0.0)) {
            if s.len() > 1 {
                return Err(LadderError::NonPositiveLambda {
                    e: s.levels[n],
                    lambda: s.lambdas[n],
                    spectrum: Box::new(s),
                });
            }
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LadderError {
    #[error("spacing function domain exhausted after level {}: {reason}", .spectrum.top())]
    DomainExhausted { spectrum: Box<Spectrum>, reason: String },
    #[error("non-positive spacing {lambda} at e = {e}")]
    NonPositiveLambda { e: f64, lambda: f64, spectrum: Box<Spectrum> },
    #[error("ground level {e_g} is outside the spacing function domain")]
    BadGround { e_g: f64 },
}

impl LadderError {
    /// The levels built before the ladder stopped.
    pub fn partial(&self) -> Option<&Spectrum> {
        match self {
            LadderError::DomainExhausted { spectrum, .. } | LadderError::NonPositiveLambda { spectrum, .. } => {
                Some(spectrum)
            }
            LadderError::BadGround { .. } => None,
        }
    }
}

/// Climbs the ladder from `e_g` for up to `n_max` steps.
///
/// A new level is kept only if it lies in the domain of `λ` and `λ` there is
/// positive; otherwise the ladder stops with the levels built so far.
pub fn build_spectrum(lambda: &LambdaFunction, e_g: f64, n_max: usize) -> Result<Spectrum, LadderError> {
    let l0 = match lambda.eval(e_g) {
        Ok(v) => v,
        Err(_) => return Err(LadderError::BadGround { e_g }),
    };
    let mut s = Spectrum {
        e_g,
        levels: vec![e_g],
        lambdas: vec![l0],
        a_log: vec![0.0],
        a: vec![1.0],
        source: lambda.source().clone(),
        terminated: false,
    };
    if !(l0 > 0.0) {
        return Err(LadderError::NonPositiveLambda {
            e: e_g,
            lambda: l0,
            spectrum: Box::new(s),
        });
    }
    let mut level = CompensatedSum::new(e_g);
    let mut log_a = CompensatedSum::new(0.0);
    let mut a = 1.0;
    for _ in 0..n_max {
        let step = *s.lambdas.last().expect("non-empty");
        level.add(step);
        let e = level.value();
        if !lambda.in_domain(e) {
            s.terminated = true;
            return Err(LadderError::DomainExhausted {
                reason: format!("next level {e} leaves the domain {:?}", lambda.domain()),
                spectrum: Box::new(s),
            });
        }
        let l = match lambda.eval(e) {
            Ok(v) => v,
            Err(err) => {
                s.terminated = true;
                return Err(LadderError::DomainExhausted {
                    reason: err.to_string(),
                    spectrum: Box::new(s),
                })
            }
        };
        if !(l > 0.0) {
            return Err(LadderError::NonPositiveLambda {
                e,
                lambda: l,
                spectrum: Box::new(s),
            });
        }
        let g = e - e_g;
        log_a.add(g.ln());
        a *= g;
        s.levels.push(e);
        s.lambdas.push(l);
        s.a_log.push(log_a.value());
        s.a.push(a);
    }
    Ok(s)
}

/// Occupation number on ladder points, `N(e_n) = n`, with an optional smooth
/// semiclassical extension.
#[derive(Debug, Clone)]
pub struct NumberFunction {
    levels: Vec<f64>,
    lambdas: Vec<f64>,
    smooth: Option<(EnergySurface, QuadratureConfig)>,
}

impl NumberFunction {
    /// `N(e_n) = n`.
    pub fn at_level(&self, n: usize) -> Option<f64> {
        (n < self.levels.len()).then_some(n as f64)
    }

    /// Index of the ladder point within `tol` of `e`.
    pub fn lookup(&self, e: f64, tol: f64) -> Option<usize> {
        self.levels.iter().position(|&x| (x - e).abs() <= tol)
    }

    /// `N(e_n + λ(e_n)) − N(e_n) − 1` for consecutive points, with the shift
    /// located on the ladder by value.
    pub fn step_residuals(&self) -> Vec<f64> {
        (0..self.levels.len().saturating_sub(1))
            .map(|n| {
                let shifted = self.levels[n] + self.lambdas[n];
                let tol = 1e-12 * shifted.abs().max(1.0) * (n + 1) as f64;
                match self.lookup(shifted, tol) {
                    Some(m) => m as f64 - n as f64 - 1.0,
                    None => f64::NAN,
                }
            })
            .collect()
    }

    pub fn with_semiclassical(mut self, surface: EnergySurface, cfg: QuadratureConfig) -> Self {
        self.smooth = Some((surface, cfg));
        self
    }

    /// Bohr–Sommerfeld extension `N(e)` off the ladder, if attached.
    pub fn smooth_value(&self, e: f64) -> Option<Result<f64, SemiclassicalError>> {
        self.smooth.as_ref().map(|(s, cfg)| number_sc(s, e, cfg))
    }
}

pub fn number_on_ladder(s: &Spectrum) -> NumberFunction {
    NumberFunction {
        levels: s.levels.clone(),
        lambdas: s.lambdas.clone(),
        smooth: None,
    }
}

/// Homogeneous number-function term for the harmonic ladder,
/// `sin(2π(e − e_g))`: it vanishes on every ladder point and is unchanged by a
/// unit shift, so it cannot be fixed by `N(e_g) = 0`.
pub fn harmonic_homogeneous_number(e: f64, e_g: f64) -> f64 {
    (2.0 * PI * (e - e_g)).sin()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingClass {
    Widening,
    AsymptoticallyEqualSpaced,
    BoundedSpectrum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub class: SpacingClass,
    /// `(e, λ(λ(e) + e) − λ(e))` on the sample grid.
    pub residuals: Vec<(f64, f64)>,
}

/// Relative residual below which spacing counts as constant.
const EQUAL_SPACING_TOL: f64 = 1e-9;

/// Classifies `λ` on `[lo, hi]` from the fixed-point residual
/// `λ(λ(e) + e) − λ(e)` sampled at `samples` points.
///
/// A finite domain edge inside or just above the range, or a shrinking
/// spacing at the top of the range, marks a bounded spectrum; a vanishing
/// residual at the top marks equal spacing; a growing one marks widening.
pub fn classify_lambda(lambda: &LambdaFunction, range: (f64, f64), samples: usize) -> Classification {
    let (lo, hi) = range;
    let samples = samples.max(2);
    let mut residuals = Vec::with_capacity(samples);
    let mut exhausted = lambda.domain().1.is_finite();
    for i in 0..samples {
        let e = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let Ok(l) = lambda.eval(e) else {
            exhausted = true;
            continue;
        };
        match lambda.eval(e + l) {
            Ok(l2) => residuals.push((e, l2 - l)),
            Err(_) => exhausted = true,
        }
    }
    let class = if exhausted {
        SpacingClass::BoundedSpectrum
    } else {
        let tail = &residuals[residuals.len() * 3 / 4..];
        let scale = tail
            .iter()
            .filter_map(|(e, _)| lambda.eval(*e).ok())
            .fold(0.0f64, f64::max);
        if tail.iter().all(|(_, r)| r.abs() <= EQUAL_SPACING_TOL * scale) {
            SpacingClass::AsymptoticallyEqualSpaced
        } else if tail.iter().all(|(_, r)| *r > 0.0) {
            SpacingClass::Widening
        } else {
            SpacingClass::BoundedSpectrum
        }
    };
    Classification { class, residuals }
}

/// `ε₀ λ(e)` (ħ = 1).
pub fn oscillation_frequency(lambda: &LambdaFunction, e: f64, epsilon0: f64) -> Result<f64, LambdaError> {
    Ok(epsilon0 * lambda.eval(e)?)
}
