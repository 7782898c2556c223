//! Boundary profiles `U(x)` for the Hopf problem.

use crate::error::{Error, Result};
use crate::numerics::Pchip;
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;
use std::sync::Arc;

/// Strictly monotone profile sampled on a table, with its inverse.
#[derive(Debug, Clone)]
pub struct TabulatedProfile {
    forward: Pchip,
    inverse: Pchip,
    x_range: (f64, f64),
    u_range: (f64, f64),
}

impl TabulatedProfile {
    pub fn from_points(xs: Vec<f64>, us: Vec<f64>) -> Result<Self> {
        if xs.len() < 3 {
            return Err(Error::InvalidInput("tabulated profile needs at least 3 rows".into()));
        }
        let increasing = us[1] > us[0];
        let monotone = us
            .windows(2)
            .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] });
        if !monotone {
            return Err(Error::InvalidInput("tabulated U must be strictly monotone".into()));
        }
        let forward = Pchip::new(xs.clone(), us.clone())?;
        let (mut iu, mut ix) = (us.clone(), xs.clone());
        if !increasing {
            iu.reverse();
            ix.reverse();
        }
        let inverse = Pchip::new(iu.clone(), ix)?;
        let x_range = (xs[0], *xs.last().unwrap());
        let u_range = (iu[0], *iu.last().unwrap());
        Ok(Self {
            forward,
            inverse,
            x_range,
            u_range,
        })
    }

    /// Two whitespace-separated columns `x U(x)`; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut us = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(Error::InvalidInput(format!("line {}: expected two columns", no + 1)));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("line {}: {e}", no + 1)))
            };
            xs.push(parse(cols[0])?);
            us.push(parse(cols[1])?);
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("tabulated x must be strictly increasing".into()));
        }
        Self::from_points(xs, us)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn x_range(&self) -> (f64, f64) {
        self.x_range
    }

    pub fn u_range(&self) -> (f64, f64) {
        self.u_range
    }
}

#[derive(Debug, Clone)]
pub enum HopfProfile {
    /// `U(x) = x`
    Linear,
    /// `U(x) = -sin x`
    Sine,
    Tabulated(Arc<TabulatedProfile>),
}

impl HopfProfile {
    pub fn name(&self) -> &'static str {
        match self {
            HopfProfile::Linear => "linear",
            HopfProfile::Sine => "sine",
            HopfProfile::Tabulated(_) => "tabulated",
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            HopfProfile::Linear => x,
            HopfProfile::Sine => -x.sin(),
            HopfProfile::Tabulated(t) => t.forward.eval(x),
        }
    }

    pub fn slope(&self, x: f64) -> f64 {
        match self {
            HopfProfile::Linear => 1.0,
            HopfProfile::Sine => -x.cos(),
            HopfProfile::Tabulated(t) => t.forward.eval_with_slope(x).1,
        }
    }

    /// Domain of `x` on which the profile is defined.
    pub fn x_domain(&self) -> (f64, f64) {
        match self {
            HopfProfile::Tabulated(t) => t.x_range,
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `min_x U'(x)`, brute force on a fine grid for tables.
    pub fn min_slope(&self) -> f64 {
        match self {
            HopfProfile::Linear => 1.0,
            HopfProfile::Sine => -1.0,
            HopfProfile::Tabulated(t) => {
                let (a, b) = t.x_range;
                let n = 20_000;
                (0..=n)
                    .map(|i| t.forward.eval_with_slope(a + (b - a) * i as f64 / n as f64).1)
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Monotone pieces of the inverse `H = U^{-1}` whose images meet
    /// `[x_near - reach, x_near + reach]`.
    pub(crate) fn inverse_branches(&self, x_near: f64, reach: f64) -> Vec<InverseBranch> {
        match self {
            HopfProfile::Linear => vec![InverseBranch::Linear],
            HopfProfile::Tabulated(t) => vec![InverseBranch::Table(Arc::clone(t))],
            HopfProfile::Sine => {
                let lo = ((x_near - reach - FRAC_PI_2) / PI).floor() as i64;
                let hi = ((x_near + reach + FRAC_PI_2) / PI).ceil() as i64;
                (lo..=hi).map(InverseBranch::Sine).collect()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum InverseBranch {
    Linear,
    /// `x in [k pi - pi/2, k pi + pi/2]`
    Sine(i64),
    Table(Arc<TabulatedProfile>),
}

impl InverseBranch {
    pub(crate) fn u_range(&self, scan_half_width: f64) -> (f64, f64) {
        match self {
            InverseBranch::Linear => (-scan_half_width, scan_half_width),
            InverseBranch::Sine(_) => (-1.0, 1.0),
            InverseBranch::Table(t) => t.u_range,
        }
    }

    pub(crate) fn eval(&self, u: f64) -> f64 {
        match self {
            InverseBranch::Linear => u,
            InverseBranch::Sine(k) => {
                let s = u.clamp(-1.0, 1.0).asin();
                let sign = if k.rem_euclid(2) == 0 { -1.0 } else { 1.0 };
                *k as f64 * PI + sign * s
            }
            InverseBranch::Table(t) => t.inverse.eval(u),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_branches_invert() {
        let p = HopfProfile::Sine;
        for &x in &[-4.0, -1.2, 0.0, 0.3, 2.0, 5.5] {
            let u = p.value(x);
            let hits: Vec<f64> = p
                .inverse_branches(x, 0.1)
                .iter()
                .map(|b| b.eval(u))
                .filter(|x0| (x0 - x).abs() < 1e-9)
                .collect();
            assert!(!hits.is_empty(), "x = {x}");
        }
    }

    #[test]
    fn table_parse_and_inverse() {
        let text = "# x U\n0 0\n0.5 0.25\n1 1\n\n2 4\n";
        let t = TabulatedProfile::parse(text).unwrap();
        let p = HopfProfile::Tabulated(Arc::new(t));
        assert!((p.value(1.0) - 1.0).abs() < 1e-15);
        let b = &p.inverse_branches(0.0, 1.0)[0];
        assert!((b.eval(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn table_rejects_nonmonotone() {
        assert!(TabulatedProfile::parse("0 0\n1 1\n2 0.5\n").is_err());
        assert!(TabulatedProfile::parse("0 0\n0 1\n2 3\n").is_err());
    }
}
