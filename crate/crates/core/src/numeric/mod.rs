//! Shared numerical building blocks: quadrature, root polishing and
//! compensated summation.

pub mod quadrature;
pub mod roots;
pub mod summation;

pub use quadrature::{integrate, integrate_infallible, AdaptiveOptions, QuadratureFailure};
pub use summation::{compensated_sum, CompensatedSum};
