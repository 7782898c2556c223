//! Self-focusing of a collimated wave beam: the refraction-diffraction profile
//! `S`, orbits of the point symmetry, blow-up and caustic detection.

use crate::error::{Error, Result};
use crate::group::{integrate_lie_with, Generator, OrbitTrace, VariableSpace};
use crate::numerics::{find_root, Bracket, OdeOptions, Tolerance};
use crate::oracles::{Equation, Phi};
use rayon::prelude::*;

/// Axis density ratio counted as blow-up.
pub const BLOWUP_RATIO: f64 = 1e6;

/// Boundary intensity profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamProfile {
    /// `N(x) = exp(-x^2)`
    Gaussian,
    /// `S = s0 + s2 chi^2 / 2` with uniform intensity `n0`.
    Binomial { s0: f64, s2: f64, n0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamConfig {
    pub alpha: f64,
    pub beta: f64,
    /// 0 planar, 1 axially symmetric.
    pub nu_geom: u8,
    pub profile: BeamProfile,
}

impl BeamConfig {
    pub fn new(alpha: f64, beta: f64, nu_geom: u8, profile: BeamProfile) -> Result<Self> {
        if alpha < 0.0 || beta < 0.0 || (alpha == 0.0 && beta == 0.0) {
            return Err(Error::InvalidInput("need alpha, beta >= 0, not both zero".into()));
        }
        if nu_geom > 1 {
            return Err(Error::InvalidInput(format!("nu must be 0 or 1, got {nu_geom}")));
        }
        if let BeamProfile::Binomial { n0, .. } = profile {
            if !(n0 > 0.0) {
                return Err(Error::InvalidInput(format!("intensity must be positive, got {n0}")));
            }
        }
        Ok(Self {
            alpha,
            beta,
            nu_geom,
            profile,
        })
    }

    pub fn gaussian(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, 1, BeamProfile::Gaussian)
    }

    /// Boundary intensity `N(x)`.
    pub fn intensity(&self, x: f64) -> f64 {
        match self.profile {
            BeamProfile::Gaussian => (-x * x).exp(),
            BeamProfile::Binomial { n0, .. } => n0,
        }
    }

    pub fn equation(&self) -> Equation {
        Equation::Basic {
            alpha: self.alpha,
            beta: self.beta,
            nu: self.nu_geom as f64,
            phi: Phi::Unity,
        }
    }

    /// `1/sqrt(2(alpha - beta))` for the Gaussian beam.
    pub fn predicted_singularity(&self) -> Result<f64> {
        match self.profile {
            BeamProfile::Gaussian if self.alpha > self.beta => Ok(1.0 / (2.0 * (self.alpha - self.beta)).sqrt()),
            BeamProfile::Gaussian => Err(Error::NoSingularity(format!(
                "alpha = {} does not exceed beta = {}",
                self.alpha, self.beta
            ))),
            BeamProfile::Binomial { .. } => Err(Error::NoSingularity("binomial profiles do not collapse".into())),
        }
    }
}

/// `S(chi)` with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SProfile {
    Gaussian { alpha: f64, beta: f64 },
    Binomial { s0: f64, s2: f64 },
}

impl SProfile {
    pub fn s(&self, c: f64) -> f64 {
        match *self {
            SProfile::Gaussian { alpha, beta } => alpha * (-c * c).exp() + beta * (c * c - 2.0),
            SProfile::Binomial { s0, s2 } => s0 + 0.5 * s2 * c * c,
        }
    }

    pub fn s1(&self, c: f64) -> f64 {
        match *self {
            SProfile::Gaussian { alpha, beta } => -2.0 * alpha * c * (-c * c).exp() + 2.0 * beta * c,
            SProfile::Binomial { s2, .. } => s2 * c,
        }
    }

    pub fn s2(&self, c: f64) -> f64 {
        match *self {
            SProfile::Gaussian { alpha, beta } => -2.0 * alpha * (1.0 - 2.0 * c * c) * (-c * c).exp() + 2.0 * beta,
            SProfile::Binomial { s2, .. } => s2,
        }
    }

    /// `S''(0)`, also the limit of `S'(chi)/chi`.
    pub fn axis_curvature(&self) -> f64 {
        self.s2(0.0)
    }
}

pub fn build_s_profile(config: &BeamConfig) -> Result<SProfile> {
    match config.profile {
        BeamProfile::Gaussian => Ok(SProfile::Gaussian {
            alpha: config.alpha,
            beta: config.beta,
        }),
        BeamProfile::Binomial { s0, s2, n0 } => {
            if !(n0 > 0.0) {
                return Err(Error::InvalidInput(format!("intensity must be positive, got {n0}")));
            }
            Ok(SProfile::Binomial { s0, s2 })
        }
    }
}

/// Below this `|x|` the `1/x` terms take their axis limits.
const AXIS_EPS: f64 = 1e-12;

/// The `d/dn` coordinate over `-n t`: `(1 + v t/x) S'' + S'/x`.
fn density_rate(s: &SProfile, t: f64, x: f64, v: f64) -> f64 {
    let c = x - v * t;
    if x.abs() < AXIS_EPS {
        2.0 * s.s2(c)
    } else {
        (1.0 + v * t / x) * s.s2(c) + s.s1(c) / x
    }
}

/// Point symmetry on `{t, x, v, n}`.
pub fn beam_generator(s: SProfile) -> Generator {
    let space = VariableSpace::new(["t", "x", "v", "n"]).expect("distinct names");
    Generator::zero(space)
        .with("t", move |p| 1.0 + p[0] * p[0] * s.s2(p[1] - p[2] * p[0]))
        .and_then(|g| {
            g.with("x", move |p| {
                let (t, v) = (p[0], p[2]);
                let c = p[1] - v * t;
                t * s.s1(c) + v * t * t * s.s2(c)
            })
        })
        .and_then(|g| g.with("v", move |p| s.s1(p[1] - p[2] * p[0])))
        .and_then(|g| g.with("n", move |p| -p[3] * p[0] * density_rate(&s, p[0], p[1], p[2])))
        .expect("names exist")
}

/// Terminal condition for an orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitStop {
    None,
    /// Stop when `t` reaches the value.
    Time(f64),
    /// Stop when `n` reaches the value.
    Density(f64),
}

fn orbit_options(tol: &Tolerance) -> OdeOptions {
    OdeOptions {
        max_steps: 1_000_000,
        ..OdeOptions::from_tolerance(tol)
    }
}

/// Orbit from the boundary point `(0, chi0, 0, N(chi0))` up to `a_max`,
/// stopping at the first blow-up of `n` past `BLOWUP_RATIO N(0)`.
pub fn integrate_beam_orbit(config: &BeamConfig, chi0: f64, a_max: f64, tol: &Tolerance) -> Result<OrbitTrace> {
    integrate_beam_orbit_until(
        config,
        chi0,
        a_max,
        tol,
        OrbitStop::Density(BLOWUP_RATIO * config.intensity(0.0)),
    )
}

pub fn integrate_beam_orbit_until(
    config: &BeamConfig,
    chi0: f64,
    a_max: f64,
    tol: &Tolerance,
    stop: OrbitStop,
) -> Result<OrbitTrace> {
    let gen = beam_generator(build_s_profile(config)?);
    let start = [0.0, chi0, 0.0, config.intensity(chi0)];
    let opts = orbit_options(tol);
    match stop {
        OrbitStop::None => integrate_lie_with(&gen, &start, a_max, &opts, None::<fn(f64, &[f64]) -> f64>),
        OrbitStop::Time(t) => integrate_lie_with(&gen, &start, a_max, &opts, Some(move |_: f64, y: &[f64]| y[0] - t)),
        OrbitStop::Density(n) => {
            integrate_lie_with(&gen, &start, a_max, &opts, Some(move |_: f64, y: &[f64]| y[3] - n))
        }
    }
}

/// Axis density `N(0)/(1 + S''(0) t^2)` implied by the axis orbit.
pub fn beam_axis_density(config: &BeamConfig, t: f64) -> Result<f64> {
    let s = build_s_profile(config)?;
    Ok(config.intensity(0.0) / (1.0 + s.axis_curvature() * t * t))
}

/// First `t` at which the axis intensity exceeds `BLOWUP_RATIO N(0)`.
pub fn beam_singularity_time(config: &BeamConfig, tol: &Tolerance) -> Result<f64> {
    beam_singularity_time_at(config, BLOWUP_RATIO, tol)
}

/// As [`beam_singularity_time`] with an explicit blow-up ratio.
pub fn beam_singularity_time_at(config: &BeamConfig, ratio: f64, tol: &Tolerance) -> Result<f64> {
    let predicted = config.predicted_singularity()?;
    // dt/da = 1 + S'' t^2 vanishes at the collapse, so the group parameter
    // needed grows like ln(ratio) * t_sing
    let a_max = predicted * (20.0 + 2.0 * ratio.ln());
    let orbit = integrate_beam_orbit_until(
        config,
        0.0,
        a_max,
        tol,
        OrbitStop::Density(ratio * config.intensity(0.0)),
    )?;
    orbit
        .terminal_event
        .as_ref()
        .map(|e| e.state[0])
        .ok_or_else(|| Error::NoSingularity(format!("axis intensity stayed below {ratio} N(0)")))
}

/// State `(x, v, n)` of the orbit from `chi0` when it reaches time `t`.
fn orbit_at_time(config: &BeamConfig, chi0: f64, t: f64, tol: &Tolerance) -> Result<[f64; 3]> {
    if t == 0.0 {
        return Ok([chi0, 0.0, config.intensity(chi0)]);
    }
    let a_max = 1e3 * (1.0 + t);
    let gen = beam_generator(build_s_profile(config)?);
    let start = [0.0, chi0, 0.0, config.intensity(chi0)];
    let n_cap = BLOWUP_RATIO * config.intensity(0.0).max(config.intensity(chi0));
    let orbit = integrate_lie_with(
        &gen,
        &start,
        a_max,
        &orbit_options(tol),
        Some(move |_: f64, y: &[f64]| if y[3] > n_cap { -1.0 } else { t - y[0] }),
    )
    .map_err(|e| match e {
        Error::StepUnderflow { .. } => Error::CausticCrossed { t },
        other => other,
    })?;
    match &orbit.terminal_event {
        Some(hit) if (hit.state[0] - t).abs() <= 1e-9 * t.max(1.0) => Ok([hit.state[1], hit.state[2], hit.state[3]]),
        _ => Err(Error::CausticCrossed { t }),
    }
}

/// A fan of orbits from `chi0 in [0, chi_max]` evaluated at one time.
#[derive(Debug, Clone)]
pub struct BeamFan {
    pub t: f64,
    pub chi0: Vec<f64>,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub n: Vec<f64>,
}

impl BeamFan {
    /// Smallest finite-difference `dx/dchi0` over the fan.
    pub fn min_jacobian(&self) -> f64 {
        self.chi0
            .windows(2)
            .zip(self.x.windows(2))
            .map(|(c, x)| (x[1] - x[0]) / (c[1] - c[0]))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn beam_fan(config: &BeamConfig, t: f64, chi_max: f64, count: usize, tol: &Tolerance) -> Result<BeamFan> {
    if count < 2 || !(chi_max > 0.0) {
        return Err(Error::InvalidInput("fan needs two or more orbits over a positive range".into()));
    }
    let chi0: Vec<f64> = (0..count).map(|i| chi_max * i as f64 / (count - 1) as f64).collect();
    let states = chi0
        .par_iter()
        .map(|&c| orbit_at_time(config, c, t, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(BeamFan {
        t,
        chi0,
        x: states.iter().map(|s| s[0]).collect(),
        v: states.iter().map(|s| s[1]).collect(),
        n: states.iter().map(|s| s[2]).collect(),
    })
}

/// Intensity and eikonal derivative at one time.
#[derive(Debug, Clone)]
pub struct BeamField {
    pub t: f64,
    pub x: Vec<f64>,
    pub n: Vec<f64>,
    pub v: Vec<f64>,
    pub min_jacobian: f64,
}

const FAN_SIZE: usize = 65;

/// Field at time `t` on `x_targets`: a fan fixes brackets and checks that
/// `chi0 -> x` stays monotone, then each target's launch point is solved for.
pub fn beam_field(config: &BeamConfig, t: f64, x_targets: &[f64], tol: &Tolerance) -> Result<BeamField> {
    if t == 0.0 {
        return Ok(BeamField {
            t,
            x: x_targets.to_vec(),
            n: x_targets.iter().map(|&x| config.intensity(x)).collect(),
            v: vec![0.0; x_targets.len()],
            min_jacobian: 1.0,
        });
    }
    if let Ok(ts) = config.predicted_singularity() {
        if t >= ts {
            return Err(Error::CausticCrossed { t });
        }
    }
    let reach = x_targets.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut chi_max = reach + 1.0;
    let fan = loop {
        let fan = beam_fan(config, t, chi_max, FAN_SIZE, tol)?;
        if *fan.x.last().unwrap() > reach || chi_max > 1e3 {
            break fan;
        }
        chi_max *= 2.0;
    };
    let min_jacobian = fan.min_jacobian();
    if !(min_jacobian > 0.0) {
        return Err(Error::CausticCrossed { t });
    }
    let mut n = Vec::with_capacity(x_targets.len());
    let mut v = Vec::with_capacity(x_targets.len());
    for &xt in x_targets {
        let ax = xt.abs();
        let k = fan.x.partition_point(|&x| x < ax);
        let [_, vv, nn] = if ax == 0.0 {
            orbit_at_time(config, 0.0, t, tol)?
        } else if k < fan.x.len() && fan.x[k] == ax {
            [fan.x[k], fan.v[k], fan.n[k]]
        } else {
            if k == 0 || k == fan.x.len() {
                return Err(Error::RootNotFound(format!("x = {xt} outside the fan at t = {t}")));
            }
            let c = find_root(
                |c| orbit_at_time(config, c, t, tol).map(|s| s[0] - ax).unwrap_or(f64::NAN),
                Bracket::new(fan.chi0[k - 1], fan.chi0[k])?,
                Tolerance::tight(),
            )?;
            orbit_at_time(config, c, t, tol)?
        };
        n.push(nn);
        v.push(if xt < 0.0 { -vv } else { vv });
    }
    Ok(BeamField {
        t,
        x: x_targets.to_vec(),
        n,
        v,
        min_jacobian,
    })
}

/// Earliest time at which the fan over `[0, chi_max]` loses monotonicity or
/// fails to reach, by bisection on `[0, t_hi]`.
pub fn beam_caustic_time(config: &BeamConfig, chi_max: f64, t_hi: f64, tol: &Tolerance) -> Result<f64> {
    let crossed = |t: f64| -> Result<bool> {
        match beam_fan(config, t, chi_max, FAN_SIZE, tol) {
            Ok(f) => Ok(!(f.min_jacobian() > 0.0)),
            Err(Error::CausticCrossed { .. }) => Ok(true),
            Err(e) => Err(e),
        }
    };
    if !crossed(t_hi)? {
        return Err(Error::NoSingularity(format!("fan stays monotone up to t = {t_hi}")));
    }
    let (mut a, mut b) = (0.0, t_hi);
    while b - a > 1e-5 * t_hi {
        let m = 0.5 * (a + b);
        if crossed(m)? {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(b)
}

/// Canonical coordinates `(f, g)` of the collimated axisymmetric beam
/// symmetry at `(t, x)`, by central differences of step `h` in `x`:
/// `f = D_x{S - (alpha n + (beta/(x sqrt n)) D_x(x D_x sqrt n))}`,
/// `g = (1/x) D_x{x n (v - t S'(chi))}`.
pub fn canonical_coordinates(config: &BeamConfig, t: f64, x: f64, h: f64, tol: &Tolerance) -> Result<(f64, f64)> {
    if x.abs() < 2.0 * h {
        return Err(Error::StencilOutOfDomain { at: vec![t, x] });
    }
    let s = build_s_profile(config)?;
    let xs: Vec<f64> = (-2..=2).map(|k| x + h * k as f64).collect();
    let field = beam_field(config, t, &xs, tol)?;
    let q: Vec<f64> = field.n.iter().map(|n| n.sqrt()).collect();
    // S(chi) - alpha n - beta/(x q) (x q_x)_x at stencil node i, with the
    // conservative three-point form of (x q_x)_x
    let inner = |i: usize| {
        let flux = |j: usize, k: usize| 0.5 * (xs[j] + xs[k]) * (q[k] - q[j]) / h;
        let div = (flux(i, i + 1) - flux(i - 1, i)) / h;
        let chi = xs[i] - field.v[i] * t;
        s.s(chi) - config.alpha * field.n[i] - config.beta * div / (xs[i] * q[i])
    };
    let f = (inner(3) - inner(1)) / (2.0 * h);
    let flux = |i: usize| {
        let chi = xs[i] - field.v[i] * t;
        xs[i] * field.n[i] * (field.v[i] - t * s.s1(chi))
    };
    let g = (flux(3) - flux(1)) / (2.0 * h * x);
    Ok((f, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_profile_values() {
        let c = BeamConfig::gaussian(1.0, 0.5).unwrap();
        let s = build_s_profile(&c).unwrap();
        assert_eq!(s.s(0.0), 0.0);
        assert_eq!(s.axis_curvature(), -1.0);
        let b = BeamConfig::new(1.0, 0.0, 1, BeamProfile::Binomial { s0: 1.0, s2: 0.0, n0: 1.0 }).unwrap();
        let s = build_s_profile(&b).unwrap();
        assert_eq!((s.s(0.7), s.s1(0.7)), (1.0, 0.0));
    }

    #[test]
    fn no_singularity_when_diffraction_wins() {
        let c = BeamConfig::gaussian(0.5, 0.5).unwrap();
        assert!(matches!(
            beam_singularity_time(&c, &Tolerance::default()),
            Err(Error::NoSingularity(_))
        ));
    }

    #[test]
    fn zero_parameter_orbit() {
        let c = BeamConfig::gaussian(1.0, 0.5).unwrap();
        let o = integrate_beam_orbit(&c, 0.4, 0.0, &Tolerance::default()).unwrap();
        assert_eq!(o.end(), &[0.0, 0.4, 0.0, (-0.16f64).exp()]);
    }
}
