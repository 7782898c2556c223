//! Hodograph variables `tau = n t`, `chi = x - v t` as functions of `(n, v)`.

use crate::error::{Error, Result};
use crate::group::SolutionSampler;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Half-width of the `(n, v)` patch used for hodograph derivatives.
pub const PATCH_STEP: f64 = 1e-4;

/// A hodograph point mirrored from the physical plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HodographPoint {
    pub tau: f64,
    pub chi: f64,
    pub n: f64,
    pub v: f64,
}

impl HodographPoint {
    pub fn from_physical(t: f64, x: f64, n: f64, v: f64) -> Self {
        Self {
            tau: n * t,
            chi: x - v * t,
            n,
            v,
        }
    }
}

type Physical = Arc<dyn Fn(f64, f64) -> Result<(f64, f64)> + Send + Sync>;

/// Inverts `(t, x) -> (n, v)` by Newton iteration from `anchor`.
fn invert_physical(sol: &Physical, anchor: (f64, f64), n: f64, v: f64) -> Option<(f64, f64)> {
    let (mut t, mut x) = anchor;
    let scale = n.abs().max(v.abs()).max(1.0);
    let mut prev = f64::INFINITY;
    for _ in 0..60 {
        let (n0, v0) = sol(t, x).ok()?;
        let (rn, rv) = (n0 - n, v0 - v);
        let r = rn.abs().max(rv.abs());
        if r <= 4.0 * f64::EPSILON * scale || (r < 1e-11 * scale && r > 0.5 * prev) {
            return Some((t, x));
        }
        prev = r;
        let ht = 1e-6 * t.abs().max(1e-3);
        let hx = 1e-6 * x.abs().max(1e-3);
        let (a1, b1) = sol(t + ht, x).ok()?;
        let (a0, b0) = sol(t - ht, x).ok()?;
        let (c1, d1) = sol(t, x + hx).ok()?;
        let (c0, d0) = sol(t, x - hx).ok()?;
        let (nt, vt) = ((a1 - a0) / (2.0 * ht), (b1 - b0) / (2.0 * ht));
        let (nx, vx) = ((c1 - c0) / (2.0 * hx), (d1 - d0) / (2.0 * hx));
        let det = nt * vx - nx * vt;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dt = (rn * vx - rv * nx) / det;
        let dx = (nt * rv - vt * rn) / det;
        // backtrack until the residual drops or the map is defined
        let mut lambda = 1.0;
        loop {
            let (tn, xn) = (t - lambda * dt, x - lambda * dx);
            if let Ok((a, b)) = sol(tn, xn) {
                if (a - n).abs().max((b - v).abs()) < r || lambda < 1e-3 {
                    t = tn;
                    x = xn;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                return None;
            }
        }
    }
    None
}

/// Sampler of `(tau, chi)` over `(n, v)` near the physical point `anchor`,
/// obtained by inverting the physical solution map.
pub fn physical_hodograph_sampler<F>(solution: F, anchor: (f64, f64)) -> Result<SolutionSampler>
where
    F: Fn(f64, f64) -> Result<(f64, f64)> + Send + Sync + 'static,
{
    let sol: Physical = Arc::new(solution);
    sol(anchor.0, anchor.1)?;
    SolutionSampler::new(&["n", "v"], &["tau", "chi"], move |p| {
        let (t, x) = invert_physical(&sol, anchor, p[0], p[1])?;
        Some(vec![p[0] * t, x - p[1] * t])
    })
    .with_step("n", PATCH_STEP)?
    .with_step("v", PATCH_STEP)
}

/// Sum of `c e^{a s} s^{b/2}` over keys `(a, b)`.
#[derive(Debug, Clone, Default)]
struct LogSeries(BTreeMap<(i32, i32), f64>);

impl LogSeries {
    fn add(&mut self, key: (i32, i32), c: f64) {
        if c != 0.0 {
            *self.0.entry(key).or_insert(0.0) += c;
        }
    }

    /// `d/dn (n d/dn)`, which is `e^s d^2/ds^2` in `s = -ln n`.
    fn radial(&self) -> Self {
        let mut out = Self::default();
        for (&(a, b2), &c) in &self.0 {
            let (af, b) = (a as f64, b2 as f64 / 2.0);
            out.add((a + 1, b2), c * af * af);
            out.add((a + 1, b2 - 2), c * 2.0 * af * b);
            out.add((a + 1, b2 - 4), c * b * (b - 1.0));
        }
        out
    }

    /// `d/dn`, which is `-e^s d/ds`.
    fn d_n(&self) -> Self {
        let mut out = Self::default();
        for (&(a, b2), &c) in &self.0 {
            let (af, b) = (a as f64, b2 as f64 / 2.0);
            out.add((a + 1, b2), -c * af);
            out.add((a + 1, b2 - 2), -c * b);
        }
        out
    }

    fn eval(&self, s: f64) -> f64 {
        self.0
            .iter()
            .map(|(&(a, b2), &c)| c * (a as f64 * s).exp() * s.powf(b2 as f64 / 2.0))
            .sum()
    }
}

/// Power series in `alpha w^2` for the Gaussian beam `n(0, x) = exp(-x^2)`,
/// `v(0, x) = 0`, with cubic nonlinearity, in hodograph form with `w = v/alpha`.
#[derive(Debug, Clone)]
pub struct GaussianHodograph {
    chi_terms: Vec<LogSeries>,
    tau_terms: Vec<LogSeries>,
}

impl GaussianHodograph {
    pub fn new(order: usize) -> Self {
        let mut chi_terms = Vec::with_capacity(order + 1);
        let mut p = LogSeries::default();
        p.add((0, 1), 1.0);
        for _ in 0..=order {
            let next = p.radial();
            chi_terms.push(p);
            p = next;
        }
        let tau_terms = chi_terms.iter().map(LogSeries::d_n).collect();
        Self { chi_terms, tau_terms }
    }

    pub fn order(&self) -> usize {
        self.chi_terms.len() - 1
    }

    /// `(tau, chi)` at `(n, w, alpha)`, `0 < n < 1`.
    pub fn eval(&self, n: f64, w: f64, alpha: f64) -> Option<(f64, f64)> {
        if !(n > 0.0 && n < 1.0) {
            return None;
        }
        let s = -n.ln();
        let z = -alpha * w * w;
        let (mut chi, mut tau) = (0.0, 0.0);
        let mut zk = 1.0;
        let mut fact_even = 1.0;
        for k in 0..self.chi_terms.len() {
            let fact_odd = fact_even * (2 * k + 1) as f64;
            chi += zk * self.chi_terms[k].eval(s) / fact_even;
            tau += zk * w * n * self.tau_terms[k].eval(s) / fact_odd;
            zk *= z;
            fact_even = fact_odd * (2 * k + 2) as f64;
        }
        Some((tau, chi))
    }

    /// Sampler of `(tau, chi)` over `(n, w, alpha)`.
    pub fn sampler(self) -> SolutionSampler {
        let series = Arc::new(self);
        SolutionSampler::new(&["n", "w", "alpha"], &["tau", "chi"], move |p| {
            let (tau, chi) = series.eval(p[0], p[1], p[2])?;
            Some(vec![tau, chi])
        })
    }
}

impl Default for GaussianHodograph {
    fn default() -> Self {
        Self::new(8)
    }
}

/// Hodograph derivatives of a sampled solution at one point.
#[derive(Debug, Clone, Copy, Default)]
pub struct HodographJet {
    pub tau: f64,
    pub chi: f64,
    pub tau_n: f64,
    pub chi_n: f64,
    pub tau_nn: f64,
    pub chi_nn: f64,
    pub tau_alpha: f64,
    pub chi_alpha: f64,
}

impl HodographJet {
    /// Samples the jet at sampler coordinates `p`; `n` is coordinate 0 and an
    /// `alpha` coordinate is differentiated when present.
    pub fn sample(sampler: &SolutionSampler, p: &[f64]) -> Result<Self> {
        if sampler.dependent() != ["tau", "chi"] || sampler.independent().first().map(String::as_str) != Some("n") {
            return Err(Error::InvalidInput("sampler must map (n, ...) to (tau, chi)".into()));
        }
        let v = sampler.value(p)?;
        let d1 = sampler.d1(p, 0)?;
        let d2 = sampler.d2(p, 0, 0)?;
        let mut jet = Self {
            tau: v[0],
            chi: v[1],
            tau_n: d1[0],
            chi_n: d1[1],
            tau_nn: d2[0],
            chi_nn: d2[1],
            ..Self::default()
        };
        if let Some(ia) = sampler.independent().iter().position(|s| s == "alpha") {
            let da = sampler.d1(p, ia)?;
            jet.tau_alpha = da[0];
            jet.chi_alpha = da[1];
        }
        Ok(jet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_series_boundary() {
        let g = GaussianHodograph::default();
        let (tau, chi) = g.eval(0.6, 0.0, 0.1).unwrap();
        assert_eq!(tau, 0.0);
        assert!((chi - (-(0.6f64).ln()).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gaussian_series_solves_hodograph_system() {
        // tau_w = n chi_n and chi_w + alpha tau_n = 0
        let s = GaussianHodograph::default().sampler().with_step("n", 1e-5).unwrap();
        let s = s.with_step("w", 1e-5).unwrap();
        let p = [0.6, -0.3, 0.2];
        let dn = s.d1(&p, 0).unwrap();
        let dw = s.d1(&p, 1).unwrap();
        assert!((dw[0] - p[0] * dn[1]).abs() < 1e-8);
        assert!((dw[1] + p[2] * dn[0]).abs() < 1e-8);
    }
}
