//! Nonlinear fields near the plasma resonance: the exact two-field solution,
//! its secondary fields and harmonic content. Units with `a = Delta = 1`.

use crate::error::{Error, Result};
use crate::group::{Generator, SolutionSampler, VariableSpace};
use crate::numerics::{
    cold_structure_derivatives, cold_structure_functions, find_root, hot_structure_derivatives,
    hot_structure_functions, Bracket, Tolerance,
};
use crate::oracles::{convergence_order, pde_residual, Axis, Equation, FieldSample, ResidualReport};
use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// The hot structure functions are tabulated only on `|eta| <= HOT_ETA_MAX`.
pub const HOT_ETA_MAX: f64 = 10.0;

/// Typical size of `sqrt(f1^2 + f2^2)`; the inversion bracket starts here.
const STRUCTURE_BOUND: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResonanceModel {
    Cold,
    Hot,
}

impl ResonanceModel {
    pub fn structure(self, eta: f64) -> Result<(f64, f64)> {
        match self {
            Self::Cold => Ok(cold_structure_functions(eta)),
            Self::Hot => {
                check_hot(eta)?;
                hot_structure_functions(eta)
            }
        }
    }

    pub fn structure_slope(self, eta: f64) -> Result<(f64, f64)> {
        match self {
            Self::Cold => Ok(cold_structure_derivatives(eta)),
            Self::Hot => {
                check_hot(eta)?;
                hot_structure_derivatives(eta)
            }
        }
    }
}

fn check_hot(eta: f64) -> Result<()> {
    if eta.abs() > HOT_ETA_MAX {
        return Err(Error::OutOfRange {
            what: "hot-model eta",
            value: eta,
            lo: -HOT_ETA_MAX,
            hi: HOT_ETA_MAX,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceConfig {
    /// Field amplitude, `0 <= eps <= 1`.
    pub eps: f64,
    pub model: ResonanceModel,
    pub omega: f64,
    /// Incidence angle in radians.
    pub theta: f64,
    /// Light speed in the scaled units.
    pub light_speed: f64,
    /// Samples per period in `tau`.
    pub tau_samples: usize,
    pub eta_axis: Axis,
}

impl ResonanceConfig {
    pub fn new(eps: f64, model: ResonanceModel) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::OutOfRange {
                what: "eps",
                value: eps,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let span = match model {
            ResonanceModel::Cold => 20.0,
            ResonanceModel::Hot => HOT_ETA_MAX,
        };
        Ok(Self {
            eps,
            model,
            omega: 1.0,
            theta: 0.3,
            light_speed: 10.0,
            tau_samples: 256,
            eta_axis: Axis::new(-span, span, 401)?,
        })
    }

    pub fn cold(eps: f64) -> Result<Self> {
        Self::new(eps, ResonanceModel::Cold)
    }

    pub fn hot(eps: f64) -> Result<Self> {
        Self::new(eps, ResonanceModel::Hot)
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.eps, self.model)?;
        if !(self.omega > 0.0) || !(self.light_speed > 0.0) || !self.theta.is_finite() {
            return Err(Error::InvalidInput("omega and light speed must be positive".into()));
        }
        if self.tau_samples < 4 {
            return Err(Error::InvalidInput("need at least 4 tau samples".into()));
        }
        if self.model == ResonanceModel::Hot && self.eta_axis.lo.abs().max(self.eta_axis.hi.abs()) > HOT_ETA_MAX {
            return Err(Error::InvalidInput(format!("hot-model eta grid must lie in [-{HOT_ETA_MAX}, {HOT_ETA_MAX}]")));
        }
        Ok(())
    }

    pub fn equation(&self) -> Equation {
        Equation::TwoEq {
            a: 1.0,
            omega: self.omega,
            omega_l: self.omega,
        }
    }
}

/// One point of the solution: Lagrangian label `eta`, phase `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceState {
    pub p: f64,
    pub v: f64,
    pub x: f64,
    pub eta: f64,
    pub tau: f64,
}

/// Phase combinations `F = f1 sin + f2 cos` and `G = f1 cos - f2 sin`.
fn phase_mix((f1, f2): (f64, f64), tau: f64) -> (f64, f64) {
    let (s, c) = tau.sin_cos();
    (f1 * s + f2 * c, f1 * c - f2 * s)
}

pub fn resonance_fields(config: &ResonanceConfig, tau: f64, eta: f64) -> Result<ResonanceState> {
    let (f, g) = phase_mix(config.model.structure(eta)?, tau);
    let (w, e) = (config.omega, config.eps);
    Ok(ResonanceState {
        p: -e * w * w * f,
        v: e * w * g,
        x: eta + e * f,
        eta,
        tau,
    })
}

/// `dx/deta` at fixed `tau`.
pub fn eta_jacobian(config: &ResonanceConfig, tau: f64, eta: f64) -> Result<f64> {
    let (fe, _) = phase_mix(config.model.structure_slope(eta)?, tau);
    Ok(1.0 + config.eps * fe)
}

/// The state whose trajectory sits at `x` at phase `tau`.
pub fn resonance_at_position(config: &ResonanceConfig, tau: f64, x: f64) -> Result<ResonanceState> {
    if config.eps == 0.0 {
        return resonance_fields(config, tau, x);
    }
    let gap = |eta: f64| match resonance_fields(config, tau, eta) {
        Ok(s) => s.x - x,
        Err(_) => f64::NAN,
    };
    let (edge_lo, edge_hi) = match config.model {
        ResonanceModel::Cold => (f64::NEG_INFINITY, f64::INFINITY),
        ResonanceModel::Hot => (-HOT_ETA_MAX, HOT_ETA_MAX),
    };
    let mut reach = config.eps * STRUCTURE_BOUND + 1e-9;
    let bracket = loop {
        let (lo, hi) = ((x - reach).max(edge_lo), (x + reach).min(edge_hi));
        if lo < hi && gap(lo) * gap(hi) <= 0.0 {
            break Bracket::new(lo, hi)?;
        }
        if (lo == edge_lo && hi == edge_hi) || reach > 64.0 {
            return Err(Error::RootNotFound(format!("no trajectory reaches x = {x} at tau = {tau}")));
        }
        reach *= 2.0;
    };
    let eta = find_root(gap, bracket, Tolerance::tight())?;
    let jac = eta_jacobian(config, tau, eta)?;
    if jac <= 0.0 {
        return Err(Error::Wavebreaking { eta, tau, jacobian: jac });
    }
    resonance_fields(config, tau, eta)
}

/// `(v, p)` sampled on a `(tau, x)` grid, rows in parallel.
pub fn resonance_field_sample(config: &ResonanceConfig, tau: Axis, x: Axis) -> Result<FieldSample> {
    let rows: Vec<Vec<(f64, f64)>> = (0..tau.n)
        .into_par_iter()
        .map(|i| {
            let t = tau.at(i);
            (0..x.n)
                .map(|j| resonance_at_position(config, t, x.at(j)).map(|s| (s.v, s.p)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut v = Array2::zeros((tau.n, x.n));
    let mut p = Array2::zeros((tau.n, x.n));
    for (i, row) in rows.iter().enumerate() {
        for (j, &(a, b)) in row.iter().enumerate() {
            v[[i, j]] = a;
            p[[i, j]] = b;
        }
    }
    Ok(FieldSample {
        t: tau,
        x,
        fields: vec![("v".into(), v), ("p".into(), p)],
    })
}

/// Residual of the two-field system on the grid `tau x x`.
pub fn resonance_pde_residual(config: &ResonanceConfig, tau: Axis, x: Axis) -> Result<ResidualReport> {
    let field = resonance_field_sample(config, tau, x)?;
    pde_residual(&config.equation(), &field)
}

/// Residuals over the square centred on `centre` that holds `interior` points
/// at the first step, resampled at each step in `steps` (decreasing). The
/// report carries the finest grid,
/// the fitted order, and every `(h, R)` pair in its notes.
pub fn resonance_convergence(
    config: &ResonanceConfig,
    centre: (f64, f64),
    steps: &[f64],
    interior: usize,
) -> Result<(ResidualReport, Vec<(f64, f64)>)> {
    if steps.is_empty() {
        return Err(Error::InvalidInput("no steps given".into()));
    }
    let mut pairs = Vec::with_capacity(steps.len());
    let mut last = None;
    let tau0 = Axis::centred(centre.0, steps[0], interior)?;
    let x0 = Axis::centred(centre.1, steps[0], interior)?;
    // the domain is fixed by the first step; finer steps add points
    let refine = |a: Axis, h: f64| Axis::new(a.lo, a.hi, ((a.hi - a.lo) / h).round() as usize + 1);
    for &h in steps {
        let rep = resonance_pde_residual(config, refine(tau0, h)?, refine(x0, h)?)?;
        pairs.push((h, rep.max_residual));
        last = Some(rep);
    }
    let mut rep = last.expect("steps non-empty");
    if pairs.len() >= 2 && pairs.iter().all(|&(_, r)| r > 0.0) {
        rep.convergence_order = Some(convergence_order(&pairs)?);
    }
    rep.notes = format!(
        "{:?} model, eps = {}; (h, R) = {:?}",
        config.model, config.eps, pairs
    );
    Ok((rep, pairs))
}

/// Secondary fields on the `(tau, eta)` grid, indexed `[i_tau, i_eta]`.
#[derive(Debug, Clone)]
pub struct SecondaryFields {
    pub tau: Vec<f64>,
    pub eta: Vec<f64>,
    pub e_y: Array2<f64>,
    pub v_y: Array2<f64>,
    pub b_z: Array2<f64>,
    pub density: Array2<f64>,
    pub jacobian: Array2<f64>,
}

impl SecondaryFields {
    pub fn min_jacobian(&self) -> f64 {
        self.jacobian.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn tau_grid(samples: usize) -> Vec<f64> {
    (0..samples).map(|j| 2.0 * PI * j as f64 / samples as f64).collect()
}

/// Cumulative trapezoid of `y` on nodes `x`, zero at index `anchor`.
fn cumulative_trapezoid(x: &[f64], y: &[f64], anchor: usize) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for k in anchor + 1..x.len() {
        out[k] = out[k - 1] + 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
    }
    for k in (0..anchor).rev() {
        out[k] = out[k + 1] - 0.5 * (x[k + 1] - x[k]) * (y[k + 1] + y[k]);
    }
    out
}

pub fn secondary_fields(config: &ResonanceConfig) -> Result<SecondaryFields> {
    config.validate()?;
    let taus = tau_grid(config.tau_samples);
    let etas = config.eta_axis.points();
    let (w, e, c) = (config.omega, config.eps, config.light_speed);
    let coupling = w * config.theta.sin() / c;

    // structure values once per eta line
    let structure: Vec<((f64, f64), (f64, f64))> = etas
        .par_iter()
        .map(|&eta| Ok((config.model.structure(eta)?, config.model.structure_slope(eta)?)))
        .collect::<Result<_>>()?;

    let anchor = if etas[etas.len() - 1].abs() >= etas[0].abs() { etas.len() - 1 } else { 0 };
    let (nt, ne) = (taus.len(), etas.len());
    let mut e_y = Array2::zeros((nt, ne));
    let mut b_z = Array2::zeros((nt, ne));
    let mut density = Array2::zeros((nt, ne));
    let mut jacobian = Array2::zeros((nt, ne));
    let mut vx = Array2::zeros((nt, ne));
    let mut dex = Array2::zeros((nt, ne));

    for (i, &tau) in taus.iter().enumerate() {
        let mut dey = vec![0.0; ne];
        for (k, &(f, fd)) in structure.iter().enumerate() {
            let (_, g) = phase_mix(f, tau);
            let (f_eta, _) = phase_mix(fd, tau);
            let jac = 1.0 + e * f_eta;
            if jac <= 0.0 {
                return Err(Error::Wavebreaking { eta: etas[k], tau, jacobian: jac });
            }
            jacobian[[i, k]] = jac;
            density[[i, k]] = w * w / jac;
            // d(E_x)/d(tau) = -w^2 e G
            dey[k] = coupling * w * w * e * g;
            vx[[i, k]] = e * w * g;
            dex[[i, k]] = -e * w * w * f_eta;
        }
        let ey = cumulative_trapezoid(&etas, &dey, anchor);
        for k in 0..ne {
            e_y[[i, k]] = ey[k];
        }
    }

    // V_y = (1/w) int E_y dtau over the periodic grid, zero mean
    let mut v_y = Array2::zeros((nt, ne));
    let h = 2.0 * PI / nt as f64;
    for k in 0..ne {
        let mut acc = 0.0;
        let mut col = vec![0.0; nt];
        for i in 1..nt {
            acc += 0.5 * h * (e_y[[i - 1, k]] + e_y[[i, k]]);
            col[i] = acc / w;
        }
        let mean = col.iter().sum::<f64>() / nt as f64;
        for i in 0..nt {
            v_y[[i, k]] = col[i] - mean;
        }
    }

    for i in 0..nt {
        let tau = taus[i];
        let src: Vec<f64> = (0..ne)
            .map(|k| {
                let (_, g) = phase_mix(structure[k].0, tau);
                let dey = coupling * w * w * e * g;
                (vx[[i, k]] * dey - v_y[[i, k]] * dex[[i, k]]) / c
            })
            .collect();
        let bz = cumulative_trapezoid(&etas, &src, anchor);
        for k in 0..ne {
            b_z[[i, k]] = bz[k];
        }
    }

    Ok(SecondaryFields {
        tau: taus,
        eta: etas,
        e_y,
        v_y,
        b_z,
        density,
        jacobian,
    })
}

/// Density over one period at fixed `eta`.
pub fn density_period(config: &ResonanceConfig, eta: f64, samples: usize) -> Result<Vec<f64>> {
    let fd = config.model.structure_slope(eta)?;
    let w2 = config.omega * config.omega;
    tau_grid(samples)
        .into_iter()
        .map(|tau| {
            let jac = 1.0 + config.eps * phase_mix(fd, tau).0;
            if jac <= 0.0 {
                Err(Error::Wavebreaking { eta, tau, jacobian: jac })
            } else {
                Ok(w2 / jac)
            }
        })
        .collect()
}

/// Amplitudes of harmonics `1..=n_harmonics` of the density at `eta`, from
/// a DFT over `config.tau_samples` points.
pub fn harmonic_spectrum(config: &ResonanceConfig, eta: f64, n_harmonics: usize) -> Result<Vec<f64>> {
    let samples = config.tau_samples;
    if n_harmonics >= samples / 2 {
        return Err(Error::InvalidInput(format!(
            "{n_harmonics} harmonics need more than {samples} samples"
        )));
    }
    let n = density_period(config, eta, samples)?;
    let taus = tau_grid(samples);
    Ok((1..=n_harmonics)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (&y, &t) in n.iter().zip(&taus) {
                let (s, c) = (k as f64 * t).sin_cos();
                re += y * c;
                im -= y * s;
            }
            2.0 * re.hypot(im) / samples as f64
        })
        .collect())
}

/// `R = -(p/omega^2) d/dx + d/da` on `{tau, x, a, v, p}`, where `(v, p)` are
/// the amplitude-free field profiles.
pub fn resonance_generator(omega: f64) -> Generator {
    let w2 = omega * omega;
    Generator::zero(VariableSpace::new(["tau", "x", "a", "v", "p"]).expect("distinct names"))
        .with("x", move |q| -q[4] / w2)
        .and_then(|g| g.with("a", |_| 1.0))
        .expect("names exist")
}

/// Finite transformation of [`resonance_generator`].
pub fn resonance_group_map(omega: f64) -> impl Fn(&[f64], f64) -> Vec<f64> {
    let w2 = omega * omega;
    move |q, b| vec![q[0], q[1] - q[4] / w2 * b, q[2] + b, q[3], q[4]]
}

/// Point of the solution family at label `eta`, phase `tau`, amplitude `a`.
pub fn resonance_family_point(config: &ResonanceConfig, tau: f64, eta: f64, a: f64) -> Result<Vec<f64>> {
    let (f, g) = phase_mix(config.model.structure(eta)?, tau);
    let w = config.omega;
    Ok(vec![tau, eta + a * f, a, w * g, -w * w * f])
}

/// `(v, p)` profiles of the family over `(tau, x, a)`.
pub fn resonance_sampler(config: &ResonanceConfig) -> SolutionSampler {
    let base = *config;
    SolutionSampler::new(&["tau", "x", "a"], &["v", "p"], move |q| {
        let mut c = base;
        c.eps = q[2];
        if !(0.0..=1.0).contains(&c.eps) {
            return None;
        }
        let s = resonance_at_position(&c, q[0], q[1]).ok()?;
        let (w, e) = (c.omega, c.eps);
        if e == 0.0 {
            let (f, g) = phase_mix(c.model.structure(q[1]).ok()?, q[0]);
            return Some(vec![w * g, -w * w * f]);
        }
        Some(vec![s.v / e, s.p / e])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn cold_quarter_period() {
        let c = ResonanceConfig::cold(0.4).unwrap();
        let s = resonance_fields(&c, FRAC_PI_2, 0.0).unwrap();
        assert!((s.p + 0.4).abs() < 1e-15);
        assert!((s.x - 0.4).abs() < 1e-15);
        let back = resonance_at_position(&c, FRAC_PI_2, s.x).unwrap();
        assert!(back.eta.abs() < 1e-13);
    }

    #[test]
    fn zero_amplitude_is_identity() {
        let c = ResonanceConfig::cold(0.0).unwrap();
        let s = resonance_fields(&c, 1.1, 0.7).unwrap();
        assert_eq!((s.p, s.v, s.x), (0.0, 0.0, 0.7));
    }

    #[test]
    fn trapezoid_anchor() {
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, 1.0, 1.0];
        assert_eq!(cumulative_trapezoid(&x, &y, 2), vec![-2.0, -1.0, 0.0]);
        assert_eq!(cumulative_trapezoid(&x, &y, 0), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn wavebreaking_detected() {
        let mut c = ResonanceConfig::cold(1.0).unwrap();
        c.eta_axis = Axis::new(-1.0, 1.0, 21).unwrap();
        assert!(matches!(secondary_fields(&c), Err(Error::Wavebreaking { .. })));
    }
}
