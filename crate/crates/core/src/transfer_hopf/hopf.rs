//! The Hopf boundary value problem `u_t + eps u u_x = 0`, `u(0, x) = U(x)`.

use super::profile::HopfProfile;
use crate::error::{Error, Result};
use crate::group::{Generator, VariableSpace};
use crate::numerics::{find_root, scan_sign_changes, Bracket, Tolerance};
use crate::oracles::Axis;

const SCAN_CELLS: usize = 512;

#[derive(Debug, Clone)]
pub struct HopfConfig {
    pub profile: HopfProfile,
    pub eps: f64,
    pub t_axis: Axis,
    pub x_axis: Axis,
}

impl HopfConfig {
    pub fn new(profile: HopfProfile, eps: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
        }
        let t_sing = singularity_time(&profile, eps);
        let t_max = if t_sing.is_finite() { 0.8 * t_sing } else { 2.0 };
        let x_axis = match &profile {
            HopfProfile::Tabulated(t) => {
                let (a, b) = t.x_range();
                let pad = 0.05 * (b - a);
                Axis::new(a + pad, b - pad, 64)?
            }
            _ => Axis::new(-3.0, 3.0, 64)?,
        };
        Ok(Self {
            profile,
            eps,
            t_axis: Axis::new(0.0, t_max, 64)?,
            x_axis,
        })
    }

    pub fn with_grid(mut self, t_axis: Axis, x_axis: Axis) -> Self {
        self.t_axis = t_axis;
        self.x_axis = x_axis;
        self
    }
}

fn root_tol() -> Tolerance {
    Tolerance::tight()
}

/// The implicit solution `x - eps t u = H(u)`, solved by a sign-change scan
/// over every inverse branch that can reach `x`.
pub fn hopf_solve(cfg: &HopfConfig, t: f64, x: f64) -> Result<f64> {
    let p = &cfg.profile;
    if t == 0.0 {
        let (a, b) = p.x_domain();
        if x < a || x > b {
            return Err(Error::RootNotFound(format!("x = {x} outside the tabulated domain")));
        }
        return Ok(p.value(x));
    }
    let et = cfg.eps * t;
    let u_scale = match p {
        HopfProfile::Linear => x.abs() + 1.0,
        HopfProfile::Sine => 2.0,
        HopfProfile::Tabulated(tab) => {
            let (lo, hi) = tab.u_range();
            lo.abs().max(hi.abs()) + 1.0
        }
    };
    let mut roots: Vec<(f64, f64)> = Vec::new();
    for branch in p.inverse_branches(x, et * u_scale) {
        let (ulo, uhi) = branch.u_range(u_scale);
        let f = |u: f64| x - et * u - branch.eval(u);
        for (a, b) in scan_sign_changes(f, ulo, uhi, SCAN_CELLS) {
            let u = if a == b {
                a
            } else {
                find_root(f, Bracket::new(a, b)?, root_tol())?
            };
            let x0 = branch.eval(u);
            if !roots.iter().any(|&(_, y0)| (y0 - x0).abs() < 1e-9) {
                roots.push((u, x0));
            }
        }
    }
    match roots.len() {
        0 => Err(Error::RootNotFound(format!("no root of the implicit relation at t = {t}, x = {x}"))),
        1 => Ok(roots[0].0),
        n => Err(Error::MultivaluedRegion { t, x, roots: n }),
    }
}

/// First-order expansion `U - eps t U U'`.
pub fn hopf_pt(cfg: &HopfConfig, t: f64, x: f64) -> f64 {
    let u = cfg.profile.value(x);
    u - cfg.eps * t * u * cfg.profile.slope(x)
}

fn singularity_time(p: &HopfProfile, eps: f64) -> f64 {
    let m = p.min_slope();
    if m < 0.0 {
        -1.0 / (eps * m)
    } else {
        f64::INFINITY
    }
}

/// Gradient-catastrophe time `-1/(eps min U')`, infinite for nondecreasing U.
pub fn hopf_singularity_time(cfg: &HopfConfig) -> f64 {
    singularity_time(&cfg.profile, cfg.eps)
}

/// `u_x(t, 0) = 1/(1 + eps t)` for `U(x) = x`.
pub fn hopf_axis_slope(eps: f64, t: f64) -> f64 {
    1.0 / (1.0 + eps * t)
}

/// `J = eps t - 1/u_x(t, 0)`, constant along the axis flow.
pub fn hopf_axis_invariant(eps: f64, t: f64, u0x: f64) -> f64 {
    eps * t - 1.0 / u0x
}

/// Straight characteristics `x = x0 + eps t U(x0)`, inverted per target.
pub fn hopf_characteristics_oracle(cfg: &HopfConfig, t: f64, x_targets: &[f64]) -> Result<Vec<f64>> {
    let p = &cfg.profile;
    let et = cfg.eps * t;
    if et * p.min_slope() <= -1.0 {
        return Err(Error::CharacteristicCrossing { t });
    }
    let (dlo, dhi) = p.x_domain();
    let map = |x0: f64| x0 + et * p.value(x0);
    x_targets
        .iter()
        .map(|&x| {
            if t == 0.0 {
                if x < dlo || x > dhi {
                    return Err(Error::RootNotFound(format!("x = {x} outside the tabulated domain")));
                }
                return Ok(p.value(x));
            }
            let mut reach = (et * p.value(x.clamp(dlo, dhi)).abs()).max(1e-3);
            let mut found = None;
            for _ in 0..64 {
                let lo = (x - reach).max(dlo);
                let hi = (x + reach).min(dhi);
                if lo < hi && (map(lo) - x) * (map(hi) - x) <= 0.0 {
                    found = Some((lo, hi));
                    break;
                }
                if lo == dlo && hi == dhi {
                    break;
                }
                reach *= 2.0;
            }
            let (lo, hi) = found.ok_or_else(|| Error::RootNotFound(format!("no characteristic reaches x = {x}")))?;
            let x0 = find_root(|s| map(s) - x, Bracket::new(lo, hi)?, root_tol())?;
            Ok(p.value(x0))
        })
        .collect()
}

/// `R = t u d/dx + d/deps` on `{t, x, eps, u}`.
pub fn hopf_generator() -> Generator {
    Generator::zero(VariableSpace::new(["t", "x", "eps", "u"]).expect("distinct names"))
        .with("x", |p| p[0] * p[3])
        .and_then(|g| g.with("eps", |_| 1.0))
        .expect("names exist")
}

/// `R = d/deps - t u0x^2 d/du0x` on `{t, eps, u0x}` for the axis slope.
pub fn hopf_axis_generator() -> Generator {
    Generator::zero(VariableSpace::new(["t", "eps", "u0x"]).expect("distinct names"))
        .with("eps", |_| 1.0)
        .and_then(|g| g.with("u0x", |p| -p[0] * p[2] * p[2]))
        .expect("names exist")
}

/// Largest `|u_x(t, .)|` over `[x_lo, x_hi]` by central differences with
/// successive zooming around the steepest cell. Multivalued points count as
/// infinite slope.
pub fn hopf_max_slope(cfg: &HopfConfig, t: f64, x_lo: f64, x_hi: f64) -> Result<f64> {
    let mut lo = x_lo;
    let mut hi = x_hi;
    let mut best: f64 = 0.0;
    for _ in 0..8 {
        let n = 200;
        let h = (hi - lo) / n as f64;
        let mut arg = lo;
        let mut prev = match hopf_solve(cfg, t, lo) {
            Ok(u) => u,
            Err(Error::MultivaluedRegion { .. }) => return Ok(f64::INFINITY),
            Err(e) => return Err(e),
        };
        let mut level_best: f64 = 0.0;
        for i in 1..=n {
            let x = lo + h * i as f64;
            let u = match hopf_solve(cfg, t, x) {
                Ok(u) => u,
                Err(Error::MultivaluedRegion { .. }) => return Ok(f64::INFINITY),
                Err(e) => return Err(e),
            };
            let s = ((u - prev) / h).abs();
            if s > level_best {
                level_best = s;
                arg = x - 0.5 * h;
            }
            prev = u;
        }
        best = best.max(level_best);
        let w = 4.0 * h;
        lo = (arg - w).max(x_lo);
        hi = (arg + w).min(x_hi);
        if h < 1e-9 {
            break;
        }
    }
    Ok(best)
}

/// First time the steepest gradient exceeds `threshold`, by bisection in `t`
/// over `[0, t_hi]`. `None` when it never does.
pub fn hopf_gradient_blowup(cfg: &HopfConfig, threshold: f64, t_hi: f64, x_lo: f64, x_hi: f64) -> Result<Option<f64>> {
    let over = |t: f64| -> Result<bool> { Ok(hopf_max_slope(cfg, t, x_lo, x_hi)? > threshold) };
    if !over(t_hi)? {
        return Ok(None);
    }
    let (mut a, mut b) = (0.0, t_hi);
    while b - a > 1e-7 * t_hi {
        let m = 0.5 * (a + b);
        if over(m)? {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(Some(b))
}
