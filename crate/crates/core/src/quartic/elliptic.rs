use std::f64::consts::PI;

use super::QuarticError;
use crate::numeric::{integrate_infallible, AdaptiveOptions};

/// Complete elliptic integral of the first kind `K(k)` (modulus convention),
/// `π / (2 AGM(1, √(1 − k²)))`.
pub fn elliptic_k(k: f64) -> Result<f64, QuarticError> {
    if !(0.0..1.0).contains(&k) {
        return Err(QuarticError::Domain(format!("elliptic K needs 0 <= k < 1, got {k}")));
    }
    let mut a = 1.0;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(PI / (a + b))
}

/// Incomplete elliptic integral `F(α|q) = ∫₀^α dt / √(1 − q sin²t)`
/// (parameter convention, `q = k²`), by adaptive quadrature.
pub fn elliptic_f(alpha: f64, q: f64) -> Result<f64, QuarticError> {
    if !(0.0..1.0).contains(&q) {
        return Err(QuarticError::Domain(format!("elliptic F needs 0 <= q < 1, got {q}")));
    }
    if !(0.0..=PI).contains(&alpha) {
        return Err(QuarticError::Domain(format!("elliptic F needs 0 <= alpha <= pi, got {alpha}")));
    }
    let opts = AdaptiveOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-15,
        max_depth: 48,
    };
    integrate_infallible(|t| 1.0 / (1.0 - q * t.sin().powi(2)).sqrt(), 0.0, alpha, &opts)
        .map_err(|e| QuarticError::Domain(e.to_string()))
}
