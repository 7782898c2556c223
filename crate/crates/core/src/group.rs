//! Vector fields on named variable spaces and their finite flows.

use crate::error::{Error, Result};
use crate::numerics::{integrate_ode_with_event, stencil_step, EventHit, OdeOptions, Tolerance, Trajectory};
use std::fmt;
use std::sync::Arc;

/// Ordered, duplicate-free list of variable names. Points are plain slices
/// in this order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpace {
    names: Vec<String>,
}

impl VariableSpace {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidInput(format!("duplicate variable '{n}'")));
            }
        }
        Ok(Self { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable '{name}'")))
    }

    /// Builds a point from `(name, value)` pairs; every name must be given.
    pub fn point(&self, values: &[(&str, f64)]) -> Result<Vec<f64>> {
        let mut p = vec![f64::NAN; self.len()];
        for (name, v) in values {
            p[self.require(name)?] = *v;
        }
        if let Some(i) = p.iter().position(|v| v.is_nan()) {
            return Err(Error::InvalidInput(format!("no value for '{}'", self.names[i])));
        }
        Ok(p)
    }
}

pub type CoordFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// `X = sum_i coord_i(p) d/d var_i`; missing coordinates are zero.
#[derive(Clone)]
pub struct Generator {
    space: VariableSpace,
    coords: Vec<Option<CoordFn>>,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let active: Vec<&str> = self
            .space
            .names
            .iter()
            .zip(&self.coords)
            .filter(|(_, c)| c.is_some())
            .map(|(n, _)| n.as_str())
            .collect();
        f.debug_struct("Generator")
            .field("space", &self.space.names)
            .field("active", &active)
            .finish()
    }
}

impl Generator {
    /// The zero field on `space`.
    pub fn zero(space: VariableSpace) -> Self {
        let coords = vec![None; space.len()];
        Self { space, coords }
    }

    /// Sets the coordinate along `name`.
    pub fn with<F>(mut self, name: &str, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        let i = self.space.require(name)?;
        self.coords[i] = Some(Arc::new(f));
        Ok(self)
    }

    pub fn space(&self) -> &VariableSpace {
        &self.space
    }

    pub fn coord(&self, i: usize, p: &[f64]) -> f64 {
        self.coords[i].as_ref().map_or(0.0, |c| c(p))
    }

    pub fn eval(&self, p: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.coord(i, p);
        }
    }

    /// `c * X`.
    pub fn scaled(&self, c: f64) -> Self {
        let coords = self
            .coords
            .iter()
            .map(|f| {
                f.as_ref().map(|f| {
                    let f = Arc::clone(f);
                    Arc::new(move |p: &[f64]| c * f(p)) as CoordFn
                })
            })
            .collect();
        Self {
            space: self.space.clone(),
            coords,
        }
    }

    /// `X + Y` for fields on the same space.
    pub fn sum(&self, other: &Generator) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::InvalidInput("generators live on different spaces".into()));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| match (a, b) {
                (None, None) => None,
                (Some(a), None) | (None, Some(a)) => Some(Arc::clone(a)),
                (Some(a), Some(b)) => {
                    let (a, b) = (Arc::clone(a), Arc::clone(b));
                    Some(Arc::new(move |p: &[f64]| a(p) + b(p)) as CoordFn)
                }
            })
            .collect();
        Ok(Self {
            space: self.space.clone(),
            coords,
        })
    }
}

/// Solution of the Lie equations from one start point.
#[derive(Debug, Clone)]
pub struct OrbitTrace {
    pub space: VariableSpace,
    pub param_samples: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub terminal_event: Option<EventHit>,
    trajectory: Trajectory,
}

impl OrbitTrace {
    pub fn end(&self) -> &[f64] {
        self.states.last().expect("orbit holds its start point")
    }

    /// State at group parameter `a` from the continuous output.
    pub fn at(&self, a: f64) -> Option<Vec<f64>> {
        self.trajectory.eval(a)
    }

    pub fn value(&self, name: &str, k: usize) -> Option<f64> {
        Some(self.states.get(k)?[self.space.index_of(name)?])
    }
}

/// Flow of `gen` from `start` over `[0, a_max]`.
pub fn integrate_lie(gen: &Generator, start: &[f64], a_max: f64, tol: &Tolerance) -> Result<OrbitTrace> {
    integrate_lie_with(gen, start, a_max, &OdeOptions::from_tolerance(tol), None::<fn(f64, &[f64]) -> f64>)
}

/// Flow of `gen` with explicit integrator options and an optional terminal
/// event `g(a, state)`.
pub fn integrate_lie_with<G>(
    gen: &Generator,
    start: &[f64],
    a_max: f64,
    opts: &OdeOptions,
    event: Option<G>,
) -> Result<OrbitTrace>
where
    G: FnMut(f64, &[f64]) -> f64,
{
    if start.len() != gen.space.len() {
        return Err(Error::InvalidInput(format!(
            "start has {} values, space has {}",
            start.len(),
            gen.space.len()
        )));
    }
    let trajectory = integrate_ode_with_event(|_, y, dy| gen.eval(y, dy), event, start, (0.0, a_max), opts)?;
    Ok(OrbitTrace {
        space: gen.space.clone(),
        param_samples: trajectory.params.clone(),
        states: trajectory.states.clone(),
        terminal_event: trajectory.event.clone(),
        trajectory,
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Max-norm gap between `flow(b, flow(a, P))` and `flow(a + b, P)`.
pub fn check_group_law(gen: &Generator, start: &[f64], a: f64, b: f64, tol: &Tolerance) -> Result<f64> {
    let first = integrate_lie(gen, start, a, tol)?;
    let composed = integrate_lie(gen, first.end(), b, tol)?;
    let direct = integrate_lie(gen, start, a + b, tol)?;
    Ok(max_abs_diff(composed.end(), direct.end()))
}

/// The same defect for a closed-form finite transformation `map(P, a)`.
pub fn group_law_defect<M>(map: M, start: &[f64], a: f64, b: f64) -> f64
where
    M: Fn(&[f64], f64) -> Vec<f64>,
{
    let composed = map(&map(start, a), b);
    let direct = map(start, a + b);
    max_abs_diff(&composed, &direct)
}

/// `max_p |X J|(p)` with central differences.
pub fn invariant_defect<J>(gen: &Generator, j: J, points: &[Vec<f64>]) -> Result<f64>
where
    J: Fn(&[f64]) -> f64,
{
    let mut worst: f64 = 0.0;
    let mut q = Vec::new();
    for p in points {
        let mut xj = 0.0;
        for i in 0..gen.space.len() {
            let c = gen.coord(i, p);
            if !c.is_finite() {
                return Err(Error::StencilOutOfDomain { at: p.clone() });
            }
            if c == 0.0 {
                continue;
            }
            let h = stencil_step(p[i]);
            q.clear();
            q.extend_from_slice(p);
            q[i] = p[i] + h;
            let fp = j(&q);
            q[i] = p[i] - h;
            let fm = j(&q);
            let d = (fp - fm) / (2.0 * h);
            if !d.is_finite() {
                return Err(Error::StencilOutOfDomain { at: p.clone() });
            }
            xj += c * d;
        }
        worst = worst.max(xj.abs());
    }
    Ok(worst)
}

pub type SampleFn = Arc<dyn Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync>;

/// A candidate solution `dependent = W(independent)` with a difference
/// stencil for its derivatives.
#[derive(Clone)]
pub struct SolutionSampler {
    independent: Vec<String>,
    dependent: Vec<String>,
    eval: SampleFn,
    steps: Vec<Option<f64>>,
}

impl fmt::Debug for SolutionSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionSampler")
            .field("independent", &self.independent)
            .field("dependent", &self.dependent)
            .field("steps", &self.steps)
            .finish()
    }
}

impl SolutionSampler {
    pub fn new<F>(independent: &[&str], dependent: &[&str], eval: F) -> Self
    where
        F: Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync + 'static,
    {
        Self {
            independent: independent.iter().map(|s| s.to_string()).collect(),
            dependent: dependent.iter().map(|s| s.to_string()).collect(),
            eval: Arc::new(eval),
            steps: vec![None; independent.len()],
        }
    }

    /// Fixes the stencil half-width along one independent variable.
    pub fn with_step(mut self, name: &str, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidInput(format!("stencil step must be positive, got {h}")));
        }
        let i = self
            .independent
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown independent variable '{name}'")))?;
        self.steps[i] = Some(h);
        Ok(self)
    }

    pub fn independent(&self) -> &[String] {
        &self.independent
    }

    pub fn dependent(&self) -> &[String] {
        &self.dependent
    }

    pub fn step(&self, i: usize, at: f64) -> f64 {
        self.steps[i].unwrap_or_else(|| stencil_step(at))
    }

    pub fn value(&self, p: &[f64]) -> Result<Vec<f64>> {
        (self.eval)(p)
            .filter(|v| v.iter().all(|x| x.is_finite()))
            .ok_or_else(|| Error::StencilOutOfDomain { at: p.to_vec() })
    }

    fn shifted(&self, p: &[f64], shifts: &[(usize, f64)]) -> Result<Vec<f64>> {
        let mut q = p.to_vec();
        for &(i, d) in shifts {
            q[i] += d;
        }
        self.value(&q)
    }

    /// First derivative of every dependent variable along independent `i`.
    pub fn d1(&self, p: &[f64], i: usize) -> Result<Vec<f64>> {
        let h = self.step(i, p[i]);
        let fp = self.shifted(p, &[(i, h)])?;
        let fm = self.shifted(p, &[(i, -h)])?;
        Ok(fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
    }

    /// Second derivative along independent variables `i`, `j`.
    pub fn d2(&self, p: &[f64], i: usize, j: usize) -> Result<Vec<f64>> {
        let hi = self.step(i, p[i]);
        if i == j {
            let fp = self.shifted(p, &[(i, hi)])?;
            let f0 = self.value(p)?;
            let fm = self.shifted(p, &[(i, -hi)])?;
            return Ok((0..f0.len()).map(|k| (fp[k] - 2.0 * f0[k] + fm[k]) / (hi * hi)).collect());
        }
        let hj = self.step(j, p[j]);
        let pp = self.shifted(p, &[(i, hi), (j, hj)])?;
        let pm = self.shifted(p, &[(i, hi), (j, -hj)])?;
        let mp = self.shifted(p, &[(i, -hi), (j, hj)])?;
        let mm = self.shifted(p, &[(i, -hi), (j, -hj)])?;
        Ok((0..pp.len())
            .map(|k| (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * hi * hj))
            .collect())
    }
}

/// `max_k |eta_k - sum_i xi_i dW_k/dx_i|` at an independent-variable point:
/// the action of `gen` on `u - W(x)` restricted to the sampled surface.
pub fn invariance_residual(gen: &Generator, sampler: &SolutionSampler, point: &[f64]) -> Result<f64> {
    let space = gen.space();
    let ind_idx: Vec<usize> = sampler
        .independent
        .iter()
        .map(|n| space.require(n))
        .collect::<Result<_>>()?;
    let dep_idx: Vec<usize> = sampler
        .dependent
        .iter()
        .map(|n| space.require(n))
        .collect::<Result<_>>()?;
    if point.len() != ind_idx.len() {
        return Err(Error::InvalidInput("point must list every independent variable".into()));
    }
    let w = sampler.value(point)?;
    let mut full = vec![0.0; space.len()];
    for (k, &i) in ind_idx.iter().enumerate() {
        full[i] = point[k];
    }
    for (k, &i) in dep_idx.iter().enumerate() {
        full[i] = w[k];
    }
    let xi: Vec<f64> = ind_idx.iter().map(|&i| gen.coord(i, &full)).collect();
    let eta: Vec<f64> = dep_idx.iter().map(|&i| gen.coord(i, &full)).collect();
    if xi.iter().chain(&eta).any(|c| !c.is_finite()) {
        return Err(Error::StencilOutOfDomain { at: full });
    }
    let mut action = eta;
    for (k, &c) in xi.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let d = sampler.d1(point, k)?;
        for (a, dk) in action.iter_mut().zip(d) {
            *a -= c * dk;
        }
    }
    Ok(action.iter().fold(0.0, |m, v| m.max(v.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay() -> Generator {
        let s = VariableSpace::new(["x", "alpha"]).unwrap();
        Generator::zero(s)
            .with("x", |_| 1.0)
            .unwrap()
            .with("alpha", |p| -p[1])
            .unwrap()
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(VariableSpace::new(["t", "t"]).is_err());
    }

    #[test]
    fn linear_absorption_orbit() {
        let o = integrate_lie(&decay(), &[0.0, 1.0], 2f64.ln(), &Tolerance::default()).unwrap();
        assert!((o.end()[0] - 2f64.ln()).abs() < 1e-12);
        assert!((o.end()[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn zero_generator_is_constant() {
        let g = Generator::zero(VariableSpace::new(["a", "b"]).unwrap());
        let o = integrate_lie(&g, &[0.3, -2.0], 5.0, &Tolerance::default()).unwrap();
        assert_eq!(o.end(), &[0.3, -2.0]);
    }

    #[test]
    fn empty_span_returns_start() {
        let o = integrate_lie(&decay(), &[0.1, 0.7], 0.0, &Tolerance::default()).unwrap();
        assert_eq!(o.end(), &[0.1, 0.7]);
        assert_eq!(o.param_samples, vec![0.0]);
    }

    #[test]
    fn group_law_of_decay() {
        let d = check_group_law(&decay(), &[0.0, 1.0], 0.5, 0.5, &Tolerance::default()).unwrap();
        assert!(d <= 1e-8);
        let d0 = check_group_law(&decay(), &[0.0, 1.0], 0.0, 0.5, &Tolerance::default()).unwrap();
        assert!(d0 <= 1e-12);
    }

    #[test]
    fn transfer_map_composes() {
        let m = |p: &[f64], l: f64| vec![p[0] / (1.0 + p[0] * l)];
        assert!(group_law_defect(m, &[0.8], 0.3, 1.7) <= 1e-12);
    }

    #[test]
    fn non_solution_residual_is_u_coordinate() {
        let s = VariableSpace::new(["t", "x", "u"]).unwrap();
        let g = Generator::zero(s).with("x", |_| 2.0).unwrap().with("u", |p| 0.5 + p[0]).unwrap();
        let w = SolutionSampler::new(&["t", "x"], &["u"], |_| Some(vec![3.0]));
        let r = invariance_residual(&g, &w, &[0.25, 1.0]).unwrap();
        assert!((r - 0.75).abs() < 1e-15);
    }

    #[test]
    fn sampler_derivatives() {
        let w = SolutionSampler::new(&["a", "b"], &["f"], |p| Some(vec![p[0] * p[0] * p[1]]));
        let p = [1.5, 2.0];
        assert!((w.d1(&p, 0).unwrap()[0] - 6.0).abs() < 1e-8);
        assert!((w.d2(&p, 0, 0).unwrap()[0] - 4.0).abs() < 1e-4);
        assert!((w.d2(&p, 0, 1).unwrap()[0] - 3.0).abs() < 1e-5);
        let bad = SolutionSampler::new(&["a"], &["f"], |p| (p[0] > 0.0).then(|| vec![p[0].ln()]));
        assert!(matches!(bad.d1(&[0.0], 0), Err(Error::StencilOutOfDomain { .. })));
    }
}
