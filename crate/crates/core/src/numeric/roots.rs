/// Safeguarded Newton iteration on a bracket `[lo, hi]` with `f(lo) < 0 < f(hi)`.
///
/// Newton steps are taken while they stay inside the bracket and shrink it fast
/// enough; otherwise the step falls back to bisection. Returns the final
/// estimate after at most `max_iter` iterations, or when the step falls below
/// `rel_tol * max(|x|, tiny)`.
pub fn newton_bisect<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64, max_iter: usize) -> f64
where
    F: FnMut(f64) -> (f64, f64),
{
    let mut x = 0.5 * (lo + hi);
    let mut dx_old = hi - lo;
    let mut dx = dx_old;
    let (mut fx, mut dfx) = f(x);
    for _ in 0..max_iter {
        if fx == 0.0 || fx.is_nan() {
            return x;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton_ok = dfx.is_finite()
            && dfx != 0.0
            && ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) <= 0.0
            && (2.0 * fx).abs() <= (dx_old * dfx).abs();
        dx_old = dx;
        if newton_ok {
            dx = fx / dfx;
            x -= dx;
        } else {
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        }
        if dx.abs() <= rel_tol * x.abs().max(f64::MIN_POSITIVE) || hi - lo <= f64::EPSILON * hi.abs() {
            return x;
        }
        let (v, d) = f(x);
        fx = v;
        dfx = d;
    }
    x
}

/// Plain bisection on `[lo, hi]` for a sign change of `f` (negative at `lo`).
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, abs_tol: f64, max_iter: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= abs_tol || mid <= lo || mid >= hi {
            return mid;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
