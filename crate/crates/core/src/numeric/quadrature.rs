//! Adaptive composite Gauss–Legendre quadrature.
//!
//! Every panel is integrated with a fixed 15-point rule and compared with the
//! sum over its two halves; panels that disagree are bisected. Panels are
//! visited depth-first, left before right, and accumulated with compensated
//! summation, so a given integrand and interval always produce the same bits.

use std::sync::OnceLock;

use thiserror::Error;

use super::summation::CompensatedSum;

const ORDER: usize = 15;

/// Raised when a panel cannot meet its tolerance before the depth cap.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("quadrature did not converge on [{a}, {b}] at depth {depth} (panel estimate {estimate})")]
pub struct QuadratureFailure {
    pub a: f64,
    pub b: f64,
    pub depth: u32,
    pub estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-14,
            max_depth: 48,
        }
    }
}

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let (nodes, weights) = gauss_legendre_nodes(ORDER);
        let mut rule = Rule {
            nodes: [0.0; ORDER],
            weights: [0.0; ORDER],
        };
        rule.nodes.copy_from_slice(&nodes);
        rule.weights.copy_from_slice(&weights);
        rule
    })
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1],
/// found by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

struct Panel {
    value: f64,
    magnitude: f64,
}

fn panel<F, E>(f: &mut F, a: f64, b: f64) -> Result<Panel, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let rule = rule();
    let half = 0.5 * (b - a);
    let centre = 0.5 * (a + b);
    let mut value = CompensatedSum::new(0.0);
    let mut magnitude = 0.0;
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let fx = f(centre + half * x)?;
        value.add(w * fx);
        magnitude += (w * fx).abs();
    }
    Ok(Panel {
        value: half * value.value(),
        magnitude: half.abs() * magnitude,
    })
}

/// Integrates `f` over `[a, b]` to within `opts.abs_tol` (or `opts.rel_tol`
/// relative to each panel).
pub fn integrate<F, E>(mut f: F, a: f64, b: f64, opts: &AdaptiveOptions) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureFailure>,
{
    if a == b {
        return Ok(0.0);
    }
    let whole = panel(&mut f, a, b)?;
    let mut acc = CompensatedSum::new(0.0);
    refine(&mut f, a, b, whole, opts.abs_tol, 0, opts, &mut acc)?;
    Ok(acc.value())
}

/// Convenience wrapper for integrands that cannot fail.
pub fn integrate_infallible<F>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &AdaptiveOptions,
) -> Result<f64, QuadratureFailure>
where
    F: FnMut(f64) -> f64,
{
    integrate(|x| Ok::<f64, QuadratureFailure>(f(x)), a, b, opts)
}

#[allow(clippy::too_many_arguments)]
fn refine<F, E>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: Panel,
    tol: f64,
    depth: u32,
    opts: &AdaptiveOptions,
    acc: &mut CompensatedSum,
) -> Result<(), E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureFailure>,
{
    let mid = 0.5 * (a + b);
    let left = panel(f, a, mid)?;
    let right = panel(f, mid, b)?;
    let refined = left.value + right.value;
    let diff = (refined - whole.value).abs();
    let roundoff = 64.0 * f64::EPSILON * (left.magnitude + right.magnitude);
    if diff <= tol.max(opts.rel_tol * refined.abs()).max(roundoff) {
        acc.add(left.value);
        acc.add(right.value);
        return Ok(());
    }
    if depth >= opts.max_depth || mid <= a || mid >= b {
        return Err(QuadratureFailure {
            a,
            b,
            depth,
            estimate: refined,
        }
        .into());
    }
    refine(f, a, mid, left, 0.5 * tol, depth + 1, opts, acc)?;
    refine(f, mid, b, right, 0.5 * tol, depth + 1, opts, acc)
}
