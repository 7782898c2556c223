//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping controls for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub intervals: usize,
}

struct Piece<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Piece<N> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<const N: usize> Eq for Piece<N> {}
impl<const N: usize> PartialOrd for Piece<N> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<const N: usize> Ord for Piece<N> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn kronrod<const N: usize, F: FnMut(f64) -> [f64; N]>(f: &mut F, a: f64, b: f64) -> Piece<N> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut gk = [0.0; N];
    let mut g = [0.0; N];
    let fc = f(c);
    for k in 0..N {
        gk[k] = WGK[7] * fc[k];
        g[k] = WG[3] * fc[k];
    }
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        for k in 0..N {
            gk[k] += w * (f1[k] + f2[k]);
            if j % 2 == 1 {
                g[k] += WG[j / 2] * (f1[k] + f2[k]);
            }
        }
    }
    let mut err: f64 = 0.0;
    let mut value = [0.0; N];
    for k in 0..N {
        value[k] = gk[k] * h;
        err = err.max(((gk[k] - g[k]) * h).abs());
    }
    Piece {
        a,
        b,
        value,
        error: err,
    }
}

/// Integrates a vector-valued integrand over the finite interval `[a, b]`.
/// The error estimate is the max over components.
pub fn integrate_vec<const N: usize, F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Quadrature<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    if a == b {
        return Ok(Quadrature {
            value: [0.0; N],
            error: 0.0,
            intervals: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(kronrod(&mut f, a, b));
    loop {
        let mut total = [0.0; N];
        let mut err = 0.0;
        for p in heap.iter() {
            for (t, v) in total.iter_mut().zip(&p.value) {
                *t += v;
            }
            err += p.error;
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let target = opts.abs_tol.max(opts.rel_tol * scale);
        if !err.is_finite() || total.iter().any(|v| !v.is_finite()) {
            return Err(Error::QuadratureNonConvergence {
                estimate: err,
                target,
            });
        }
        if err <= target {
            return Ok(Quadrature {
                value: total,
                error: err,
                intervals: heap.len(),
            });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureNonConvergence {
                estimate: err,
                target,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            return Err(Error::QuadratureNonConvergence {
                estimate: err,
                target,
            });
        }
        heap.push(kronrod(&mut f, worst.a, mid));
        heap.push(kronrod(&mut f, mid, worst.b));
    }
}

/// Scalar integral over `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let q = integrate_vec(|x| [f(x)], a, b, opts)?;
    Ok((q.value[0], q.error))
}

/// Integral over the whole real line through `x = s / (1 - s^2)`.
pub fn integrate_real_line<F>(mut f: F, opts: QuadOptions) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    integrate(
        |s| {
            let d = 1.0 - s * s;
            let x = s / d;
            let jac = (1.0 + s * s) / (d * d);
            let v = f(x) * jac;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        -1.0,
        1.0,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let (v, _) = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, QuadOptions::default()).unwrap();
        assert!((v - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_over_line() {
        let (v, _) = integrate_real_line(|x| (-x * x).exp(), QuadOptions::default()).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let (v, _) = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, QuadOptions::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_interval_changes_sign() {
        let o = QuadOptions::default();
        let (a, _) = integrate(f64::sin, 0.0, 1.0, o).unwrap();
        let (b, _) = integrate(f64::sin, 1.0, 0.0, o).unwrap();
        assert!((a + b).abs() < 1e-15);
    }

    #[test]
    fn nonintegrable_reports_failure() {
        let o = QuadOptions {
            max_intervals: 50,
            ..QuadOptions::default()
        };
        assert!(integrate(|x| 1.0 / x, 0.0, 1.0, o).is_err());
    }
}
