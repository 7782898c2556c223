//! PDE residuals of sampled fields and convergence-order fits.

use crate::error::{Error, Result};
use crate::numerics::fit_slope;
use ndarray::Array2;
use serde::Serialize;

/// Ghost layers each stencil consumes on every side.
pub const GHOST: usize = 2;

/// Uniform axis with `n` points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput(format!("bad axis [{lo}, {hi}] with {n} points")));
        }
        Ok(Self { lo, hi, n })
    }

    /// Axis centred on `mid` with spacing `h` and `GHOST` extra points per side
    /// around `interior` points.
    pub fn centred(mid: f64, h: f64, interior: usize) -> Result<Self> {
        let n = interior + 2 * GHOST;
        let half = 0.5 * h * (n - 1) as f64;
        Self::new(mid - half, mid + half, n)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn at(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + self.step() * i as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.at(i)).collect()
    }

    pub fn shifted(&self, by: f64) -> Self {
        Self {
            lo: self.lo + by,
            hi: self.hi + by,
            n: self.n,
        }
    }
}

/// Dependent fields sampled on a `(t, x)` grid, indexed `[it, ix]`.
#[derive(Debug, Clone)]
pub struct FieldSample {
    pub t: Axis,
    pub x: Axis,
    pub fields: Vec<(String, Array2<f64>)>,
}

impl FieldSample {
    pub fn from_fn<F>(t: Axis, x: Axis, names: &[&str], mut f: F) -> Result<Self>
    where
        F: FnMut(f64, f64) -> Result<Vec<f64>>,
    {
        let mut arrays: Vec<Array2<f64>> = names.iter().map(|_| Array2::zeros((t.n, x.n))).collect();
        for i in 0..t.n {
            let tv = t.at(i);
            for j in 0..x.n {
                let vals = f(tv, x.at(j))?;
                if vals.len() != names.len() {
                    return Err(Error::InvalidInput("sample function returned the wrong arity".into()));
                }
                for (a, v) in arrays.iter_mut().zip(vals) {
                    a[[i, j]] = v;
                }
            }
        }
        Ok(Self {
            t,
            x,
            fields: names.iter().map(|s| s.to_string()).zip(arrays).collect(),
        })
    }

    pub fn field(&self, name: &str) -> Option<&Array2<f64>> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    fn require(&self, name: &str) -> Result<&Array2<f64>> {
        self.field(name)
            .ok_or_else(|| Error::InvalidInput(format!("field sample lacks `{name}`")))
    }

    /// Same values on an x axis translated by `by`.
    pub fn shifted_x(&self, by: f64) -> Self {
        Self {
            t: self.t,
            x: self.x.shifted(by),
            fields: self.fields.clone(),
        }
    }
}

/// Nonlinearity `phi(n)` in the pressure-like term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phi {
    Unity,
    Inverse,
}

impl Phi {
    pub fn eval(self, n: f64) -> f64 {
        match self {
            Phi::Unity => 1.0,
            Phi::Inverse => 1.0 / n,
        }
    }
}

/// Equation systems with residual stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equation {
    /// `u_t + eps u u_x = 0`, field `u`.
    Hopf { eps: f64 },
    /// `v_t + v v_x - alpha phi(n) n_x = 0`, `n_t + (n v)_x = 0`, fields `v, n`.
    Kcs { alpha: f64, phi: Phi },
    /// `omega v_tau + a v v_x - p = 0`, `omega p_tau + a v p_x + omega_l^2 v = 0`
    /// over `(tau, x)`, fields `v, p`.
    TwoEq { a: f64, omega: f64, omega_l: f64 },
    /// Beam equations with refraction `alpha`, diffraction `beta` and
    /// geometry `nu` (0 planar, 1 axial), fields `v, n`.
    Basic { alpha: f64, beta: f64, nu: f64, phi: Phi },
}

impl Equation {
    pub fn id(&self) -> &'static str {
        match self {
            Equation::Hopf { .. } => "hopf",
            Equation::Kcs { .. } => "kcs",
            Equation::TwoEq { .. } => "twoeq",
            Equation::Basic { .. } => "basic",
        }
    }

    pub fn fields(&self) -> &'static [&'static str] {
        match self {
            Equation::Hopf { .. } => &["u"],
            Equation::Kcs { .. } | Equation::Basic { .. } => &["v", "n"],
            Equation::TwoEq { .. } => &["v", "p"],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridSpec {
    pub t_axis: Axis,
    pub x_axis: Axis,
    pub h_t: f64,
    pub h_x: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub equation_id: String,
    pub grid: GridSpec,
    pub max_residual: f64,
    pub l2_residual: f64,
    pub convergence_order: Option<f64>,
    pub notes: String,
}

struct Stencil<'a> {
    a: &'a Array2<f64>,
    ht: f64,
    hx: f64,
}

impl Stencil<'_> {
    fn v(&self, i: usize, j: usize) -> f64 {
        self.a[[i, j]]
    }
    fn dt(&self, i: usize, j: usize) -> f64 {
        (self.a[[i + 1, j]] - self.a[[i - 1, j]]) / (2.0 * self.ht)
    }
    fn dx(&self, i: usize, j: usize) -> f64 {
        (self.a[[i, j + 1]] - self.a[[i, j - 1]]) / (2.0 * self.hx)
    }
}

/// Third-order-accurate pieces of `sqrt(n)` needed by the diffraction term.
fn sqrt_derivs(n: &Array2<f64>, i: usize, j: usize, h: f64) -> [f64; 4] {
    let q = |k: isize| n[[i, (j as isize + k) as usize]].sqrt();
    let (m2, m1, c, p1, p2) = (q(-2), q(-1), q(0), q(1), q(2));
    [
        c,
        (p1 - m1) / (2.0 * h),
        (p1 - 2.0 * c + m1) / (h * h),
        (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h),
    ]
}

fn point_residuals(eq: &Equation, f: &[Stencil<'_>], t_x: f64, i: usize, j: usize) -> Result<Vec<f64>> {
    Ok(match *eq {
        Equation::Hopf { eps } => {
            let u = &f[0];
            vec![u.dt(i, j) + eps * u.v(i, j) * u.dx(i, j)]
        }
        Equation::Kcs { alpha, phi } => {
            let (v, n) = (&f[0], &f[1]);
            let (vv, nv) = (v.v(i, j), n.v(i, j));
            vec![
                v.dt(i, j) + vv * v.dx(i, j) - alpha * phi.eval(nv) * n.dx(i, j),
                n.dt(i, j) + nv * v.dx(i, j) + vv * n.dx(i, j),
            ]
        }
        Equation::TwoEq { a, omega, omega_l } => {
            let (v, p) = (&f[0], &f[1]);
            let vv = v.v(i, j);
            vec![
                omega * v.dt(i, j) + a * vv * v.dx(i, j) - p.v(i, j),
                omega * p.dt(i, j) + a * vv * p.dx(i, j) + omega_l * omega_l * vv,
            ]
        }
        Equation::Basic { alpha, beta, nu, phi } => {
            let (v, n) = (&f[0], &f[1]);
            let x = t_x;
            if nu != 0.0 && x == 0.0 {
                return Err(Error::StencilOutOfDomain { at: vec![x] });
            }
            let (vv, nv) = (v.v(i, j), n.v(i, j));
            let [q, q1, q2, q3] = sqrt_derivs(n.a, i, j, n.hx);
            let w = (q2 + nu * q1 / x) / q;
            let w_x = (q3 + nu * (q2 / x - q1 / (x * x))) / q - w * q1 / q;
            vec![
                v.dt(i, j) + vv * v.dx(i, j) - alpha * phi.eval(nv) * n.dx(i, j) - beta * w_x,
                n.dt(i, j) + nv * v.dx(i, j) + vv * n.dx(i, j) + nu * nv * vv / x,
            ]
        }
    })
}

/// Central-difference residual of `eq` at every interior point of `field`.
/// Returns the residual rows as `(t, x, [residuals])`.
pub fn residual_points(eq: &Equation, field: &FieldSample) -> Result<Vec<(f64, f64, Vec<f64>)>> {
    let (nt, nx) = (field.t.n, field.x.n);
    if nt < 2 * GHOST + 1 || nx < 2 * GHOST + 1 {
        return Err(Error::GridTooSmall(format!(
            "{nt}x{nx} grid leaves no interior with {GHOST} ghost layers"
        )));
    }
    let (ht, hx) = (field.t.step(), field.x.step());
    let stencils = eq
        .fields()
        .iter()
        .map(|name| Ok(Stencil { a: field.require(name)?, ht, hx }))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity((nt - 2 * GHOST) * (nx - 2 * GHOST));
    for i in GHOST..nt - GHOST {
        for j in GHOST..nx - GHOST {
            let x = field.x.at(j);
            out.push((field.t.at(i), x, point_residuals(eq, &stencils, x, i, j)?));
        }
    }
    Ok(out)
}

pub fn pde_residual(eq: &Equation, field: &FieldSample) -> Result<ResidualReport> {
    let rows = residual_points(eq, field)?;
    let mut max: f64 = 0.0;
    let mut sq = 0.0;
    let mut count = 0usize;
    for (_, _, r) in &rows {
        for &e in r {
            if !e.is_finite() {
                max = f64::INFINITY;
            }
            max = max.max(e.abs());
            sq += e * e;
            count += 1;
        }
    }
    Ok(ResidualReport {
        equation_id: eq.id().to_string(),
        grid: GridSpec {
            t_axis: field.t,
            x_axis: field.x,
            h_t: field.t.step(),
            h_x: field.x.step(),
        },
        max_residual: max,
        l2_residual: (sq / count as f64).sqrt(),
        convergence_order: None,
        notes: String::new(),
    })
}

/// Residual of `eq` at a single point `(t, x)`, from a 5x5 patch of samples
/// with spacings `h_t`, `h_x`. Returns the largest component magnitude.
pub fn local_residual<F>(eq: &Equation, mut eval: F, t: f64, x: f64, h_t: f64, h_x: f64) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<Vec<f64>>,
{
    let field = FieldSample::from_fn(
        Axis::centred(t, h_t, 1)?,
        Axis::centred(x, h_x, 1)?,
        eq.fields(),
        &mut eval,
    )?;
    Ok(pde_residual(eq, &field)?.max_residual)
}

/// Least-squares slope of `log R` against `log h`.
pub fn convergence_order(residuals: &[(f64, f64)]) -> Result<f64> {
    if residuals.len() < 2 {
        return Err(Error::InvalidInput("convergence fit needs at least two resolutions".into()));
    }
    if residuals.windows(2).any(|w| !(w[1].0 < w[0].0)) {
        return Err(Error::InvalidInput("step sizes must be strictly decreasing".into()));
    }
    if residuals.iter().any(|&(h, r)| !(h > 0.0) || !(r > 0.0)) {
        return Err(Error::InvalidInput("steps and residuals must be positive".into()));
    }
    let lh: Vec<f64> = residuals.iter().map(|p| p.0.ln()).collect();
    let lr: Vec<f64> = residuals.iter().map(|p| p.1.ln()).collect();
    Ok(fit_slope(&lh, &lr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_orders() {
        let sq: Vec<(f64, f64)> = [0.1, 0.05, 0.025].iter().map(|&h| (h, h * h)).collect();
        assert!((convergence_order(&sq).unwrap() - 2.0).abs() < 1e-12);
        let lin: Vec<(f64, f64)> = [0.1, 0.05].iter().map(|&h| (h, h)).collect();
        assert!((convergence_order(&lin).unwrap() - 1.0).abs() < 1e-12);
        assert!(convergence_order(&[(0.1, 1.0)]).is_err());
        assert!(convergence_order(&[(0.1, 1.0), (0.2, 1.0)]).is_err());
    }

    #[test]
    fn constants_solve_kcs() {
        let f = FieldSample::from_fn(
            Axis::new(0.0, 1.0, 9).unwrap(),
            Axis::new(-1.0, 1.0, 9).unwrap(),
            &["v", "n"],
            |_, _| Ok(vec![0.0, 0.7]),
        )
        .unwrap();
        let r = pde_residual(&Equation::Kcs { alpha: 1.0, phi: Phi::Unity }, &f).unwrap();
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn too_small() {
        let f = FieldSample::from_fn(
            Axis::new(0.0, 1.0, 4).unwrap(),
            Axis::new(0.0, 1.0, 9).unwrap(),
            &["u"],
            |_, _| Ok(vec![0.0]),
        )
        .unwrap();
        assert!(matches!(
            pde_residual(&Equation::Hopf { eps: 1.0 }, &f),
            Err(Error::GridTooSmall(_))
        ));
    }

    #[test]
    fn hopf_linear_exact_second_order() {
        let u = |t: f64, x: f64| Ok(vec![x / (1.0 + t)]);
        let r = |h: f64| {
            let f = FieldSample::from_fn(Axis::centred(0.5, h, 5).unwrap(), Axis::centred(0.3, h, 5).unwrap(), &["u"], u)
                .unwrap();
            pde_residual(&Equation::Hopf { eps: 1.0 }, &f).unwrap().max_residual
        };
        let ratio = r(0.01) / r(0.02);
        assert!((0.2..=0.3).contains(&ratio), "{ratio}");
    }

    #[test]
    fn diffraction_term_matches_closed_form() {
        // Gaussian n = exp(-x^2), nu = 1: the diffraction bracket is x^2 - 2.
        let n = |_: f64, x: f64| Ok(vec![0.0, (-x * x).exp()]);
        let eq = Equation::Basic { alpha: 0.0, beta: 1.0, nu: 1.0, phi: Phi::Unity };
        let x = 0.7;
        let f = FieldSample::from_fn(Axis::centred(0.0, 1e-3, 1).unwrap(), Axis::centred(x, 1e-3, 1).unwrap(), &["v", "n"], n)
            .unwrap();
        let rows = residual_points(&eq, &f).unwrap();
        assert!((rows[0].2[0] + 2.0 * x).abs() < 1e-5);
    }
}
