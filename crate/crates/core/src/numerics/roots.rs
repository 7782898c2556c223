//! Bracketed scalar root finding.

use super::{Bracket, Tolerance};
use crate::error::{Error, Result};

/// Dekker-style hybrid: secant steps when they stay inside the bracket and
/// shrink it fast enough, bisection otherwise.
///
/// Returns `r` with `|f(r)| <= abs_tol` or a bracket narrower than
/// `rel_tol * |r|`. If the bracket collapses to adjacent floats first the
/// better endpoint is returned.
pub fn find_root<F>(mut f: F, bracket: Bracket, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::InvalidInput("objective is NaN at a bracket end".into()));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo: a, hi: b });
    }
    // b is the best estimate, a the contrapoint, c the previous b
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut width_two_ago = f64::INFINITY;
    let mut width_prev = (b - a).abs();

    for _ in 0..tol.max_iter {
        let width = (b - a).abs();
        if fb.abs() <= tol.abs_tol || width <= tol.rel_tol * b.abs() {
            return Ok(b);
        }
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            return Ok(b);
        }
        let mut s = mid;
        if fb != fc {
            let secant = b - fb * (b - c) / (fb - fc);
            let between = (secant - b) * (secant - mid) < 0.0;
            // force bisection when the bracket has not halved over two steps
            let stalled = width > 0.5 * width_two_ago;
            if between && !stalled && secant.is_finite() {
                s = secant;
            }
        }
        let fs = f(s);
        if fs.is_nan() {
            return Err(Error::InvalidInput(format!("objective is NaN at {s}")));
        }
        if fs == 0.0 {
            return Ok(s);
        }
        c = b;
        fc = fb;
        if fs.signum() == fa.signum() {
            a = b;
            fa = fb;
        }
        b = s;
        fb = fs;
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
        width_two_ago = width_prev;
        width_prev = width;
    }
    Err(Error::MaxIterations {
        what: "find_root",
        iterations: tol.max_iter,
    })
}

/// Splits `[lo, hi]` into `cells` equal pieces and returns every sub-bracket
/// whose ends differ in sign (exact zeros at grid nodes give a degenerate
/// bracket around the node).
pub fn scan_sign_changes<F>(mut f: F, lo: f64, hi: f64, cells: usize) -> Vec<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut out = Vec::new();
    let h = (hi - lo) / cells as f64;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=cells {
        let x1 = if i == cells { hi } else { lo + h * i as f64 };
        let f1 = f(x1);
        if f0 == 0.0 {
            out.push((x0, x0));
        } else if f1 != 0.0 && f0.signum() != f1.signum() && f0.is_finite() && f1.is_finite() {
            out.push((x0, x1));
        }
        if i == cells && f1 == 0.0 {
            out.push((x1, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(lo: f64, hi: f64) -> Bracket {
        Bracket::new(lo, hi).unwrap()
    }

    #[test]
    fn simple_roots() {
        let tol = Tolerance::default();
        assert!((find_root(|s| s - 1.0, br(0.0, 2.0), tol).unwrap() - 1.0).abs() < 1e-10);
        let r = find_root(|s| s * s - 2.0, br(1.0, 2.0), tol).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-9);
        let r = find_root(f64::cos, br(1.0, 2.0), tol).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn no_sign_change() {
        let e = find_root(|s| s * s + 1.0, br(-1.0, 1.0), Tolerance::default());
        assert!(matches!(e, Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn max_iterations() {
        let tol = Tolerance::new(1e-300, 1e-300, 3).unwrap();
        let e = find_root(|s| s.powi(3) - 0.3, br(0.0, 1.0), tol);
        assert!(matches!(e, Err(Error::MaxIterations { .. })));
    }

    #[test]
    fn steep_function_hits_float_resolution() {
        let tol = Tolerance::new(1e-300, 1e-300, 400).unwrap();
        let r = find_root(|s| (1e8 * (s - 0.3)).tanh(), br(0.0, 1.0), tol).unwrap();
        assert!((r - 0.3).abs() < 1e-15);
    }
}
