//! Canonical Lie-Backlund coordinates `(f, g)` in hodograph variables.

use super::hodograph::{HodographJet, HodographPoint};
use crate::error::{Error, Result};
use crate::group::SolutionSampler;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LieBacklundCase {
    /// Exact second-order symmetry of the soliton beam.
    Soliton,
    /// Exact second-order symmetry of the expanding slab.
    Slab,
    /// Zeroth plus first order terms in `alpha`, with `w = v/alpha`; the
    /// series terminates so this is exact.
    Binomial { alpha: f64 },
    /// Approximate symmetry of the Gaussian beam, first order in `alpha`.
    Gauss1 { alpha: f64 },
    /// Approximate symmetry of the Gaussian beam acting on `alpha` too.
    Gauss2 { alpha: f64 },
}

impl LieBacklundCase {
    pub fn name(&self) -> &'static str {
        match self {
            LieBacklundCase::Soliton => "soliton",
            LieBacklundCase::Slab => "slab",
            LieBacklundCase::Binomial { .. } => "binomial",
            LieBacklundCase::Gauss1 { .. } => "gauss1",
            LieBacklundCase::Gauss2 { .. } => "gauss2",
        }
    }

    fn alpha(&self) -> Option<f64> {
        match *self {
            LieBacklundCase::Soliton | LieBacklundCase::Slab => None,
            LieBacklundCase::Binomial { alpha }
            | LieBacklundCase::Gauss1 { alpha }
            | LieBacklundCase::Gauss2 { alpha } => Some(alpha),
        }
    }
}

/// `(f, g)` at density `n`, velocity `v` from a hodograph jet.
pub fn liebacklund_coords(case: LieBacklundCase, n: f64, v: f64, d: &HodographJet) -> (f64, f64) {
    let HodographJet {
        tau,
        chi,
        tau_n,
        chi_n,
        tau_nn,
        chi_nn,
        tau_alpha,
        chi_alpha,
    } = *d;
    match case {
        LieBacklundCase::Soliton => (
            2.0 * n * (1.0 - n) * tau_nn - n * tau_n - 2.0 * n * v * (chi_n + n * chi_nn) + n * v * v * tau_nn / 2.0,
            2.0 * n * (1.0 - n) * chi_nn
                + (2.0 - 3.0 * n) * chi_n
                + v * (2.0 * n * tau_nn + tau_n)
                + (v * v / 2.0) * (n * chi_nn + chi_n),
        ),
        LieBacklundCase::Slab => {
            let l = n.ln();
            (
                -n * n * l * tau_nn - (n / 2.0) * tau_n + tau / 2.0 + v * (n.powi(3) * chi_nn + 1.5 * n * n * chi_n),
                -n * n * l * chi_nn - (n / 2.0) * (1.0 + 4.0 * l) * chi_n + chi / 2.0 + v * (n * tau_nn + tau_n / 2.0),
            )
        }
        LieBacklundCase::Binomial { alpha } => {
            let w = v / alpha;
            let f0 = 2.0 * n * (1.0 - n) * tau_nn - n * tau_n - 2.0 * n * w * (chi_n + n * chi_nn);
            let g0 = 2.0 * n * (1.0 - n) * chi_nn + (2.0 - 3.0 * n) * chi_n;
            let f1 = n * w * w * tau_nn / 2.0;
            let g1 = w * (2.0 * n * tau_nn + tau_n) + (w * w / 2.0) * (n * chi_nn + chi_n);
            (f0 + alpha * f1, g0 + alpha * g1)
        }
        LieBacklundCase::Gauss1 { alpha } => (
            1.0 + 2.0 * n * chi * chi_n + alpha * (-2.0 * tau * tau_n + tau * tau / n),
            -2.0 * alpha * (tau * chi_n + chi * tau_n),
        ),
        LieBacklundCase::Gauss2 { alpha } => (
            2.0 * n * (tau * chi_n + tau_n * chi) + 2.0 * alpha * chi * tau_alpha,
            1.0 + 2.0 * n * chi * chi_n + 2.0 * alpha * (chi * chi_alpha - tau * tau_n),
        ),
    }
}

/// Sampler coordinates of a hodograph point: `(n, v)`, or `(n, w, alpha)`
/// for samplers that carry `alpha`.
fn sampler_coords(case: LieBacklundCase, point: &HodographPoint, sampler: &SolutionSampler) -> Result<Vec<f64>> {
    match sampler.independent().len() {
        2 => Ok(vec![point.n, point.v]),
        3 => {
            let alpha = case
                .alpha()
                .ok_or_else(|| Error::InvalidInput(format!("case {} carries no alpha", case.name())))?;
            Ok(vec![point.n, point.v / alpha, alpha])
        }
        k => Err(Error::InvalidInput(format!("hodograph sampler with {k} independent variables"))),
    }
}

/// `(|f|, |g|)` of the case's coordinates on the sampled solution at `point`.
pub fn liebacklund_residual(
    case: LieBacklundCase,
    point: &HodographPoint,
    solution: &SolutionSampler,
) -> Result<(f64, f64)> {
    let p = sampler_coords(case, point, solution)?;
    let jet = HodographJet::sample(solution, &p)?;
    let scale = 1.0 + point.tau.abs().max(point.chi.abs());
    if (jet.tau - point.tau).abs() > 1e-6 * scale || (jet.chi - point.chi).abs() > 1e-6 * scale {
        return Err(Error::InvalidInput(format!(
            "point (tau {}, chi {}) is off the sampled solution (tau {}, chi {})",
            point.tau, point.chi, jet.tau, jet.chi
        )));
    }
    let (f, g) = liebacklund_coords(case, point.n, point.v, &jet);
    Ok((f.abs(), g.abs()))
}
