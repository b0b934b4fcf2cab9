//! Bracketed scalar root finding: bisection refined by safeguarded secant
//! (false-position) steps.

use crate::error::{Result, Sl2Error};

pub const MAX_ITERATIONS: usize = 200;

/// Default relative bracket width at which iteration stops.
pub const DEFAULT_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// `f(x)` at the returned abscissa.
    pub residual: f64,
    /// Final bracket.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Finds a root of `f` in `[lo, hi]`, which must carry a sign change.
///
/// Each iteration takes the secant point of the current bracket; if the
/// previous step failed to halve the bracket, a bisection is taken instead.
/// Stops when the bracket is narrower than `rel_tol·max(1, |x|)`, when an
/// exact zero is hit, or after [`MAX_ITERATIONS`].
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(Root { x: a, residual: 0.0, bracket: (a, a), iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, residual: 0.0, bracket: (b, b), iterations: 0 });
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Sl2Error::NoSignChange { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }

    let mut force_bisect = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let width = b - a;
        if width <= rel_tol * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        iterations += 1;
        let mut x = a - fa * width / (fb - fa);
        if force_bisect || !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(Root { x, residual: 0.0, bracket: (x, x), iterations });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        force_bisect = (b - a) > 0.5 * width;
        if (b - a) == width {
            // No representable progress.
            break;
        }
    }
    let (x, residual) = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
    Ok(Root { x, residual, bracket: (a, b), iterations })
}

/// Golden-section search for a minimizer of `f` on `[lo, hi]`.
/// Returns `(x, f(x))`.
pub fn minimize_golden<F>(mut f: F, lo: f64, hi: f64, abs_tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_ITERATIONS {
        if b - a <= abs_tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
