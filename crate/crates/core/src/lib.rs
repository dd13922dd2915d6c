//! Spectra of one-dimensional nonlinear oscillators through the eigenoperator
//! relation `[ã, H] = ε₀ λ(H) ã`.
//!
//! Energies are dimensionless (`e = E/ε₀`, ħ = 1) throughout.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod fdlie;
pub mod ladder;
pub mod numeric;
pub mod opalg;
pub mod oracle;
pub mod oscillator;
pub mod quartic;
pub mod semiclassical;
pub mod thermal;

pub use oscillator::{OscillatorSpec, Potential, SpecError, Units};
