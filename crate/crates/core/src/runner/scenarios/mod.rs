//! One module per scenario. Each `run` returns its checks, tables and plots;
//! an `Err` means the parameters themselves are unusable.

pub mod beam;
pub mod bunch;
pub mod chaplygin;
pub mod group;
pub mod hopf;
pub mod resonance;
pub mod transfer;

use crate::error::Result;
use crate::numerics::Tolerance;
use crate::oracles::{local_residual, Axis, Equation, GridSpec, ResidualReport};
use rayon::prelude::*;

/// Integrator tolerance for Lie flows inside the runner.
pub fn flow_tol() -> Tolerance {
    Tolerance {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        max_iter: 400,
    }
}

/// Pointwise residual with a fixed small stencil at every node of `t` x `x`.
pub(crate) fn local_residual_scan<F>(eq: &Equation, eval: F, t: Axis, x: Axis, h: f64, notes: &str) -> Result<ResidualReport>
where
    F: Fn(f64, f64) -> Result<Vec<f64>> + Sync,
{
    let rows: Vec<Result<Vec<f64>>> = (0..t.n)
        .into_par_iter()
        .map(|i| (0..x.n).map(|j| local_residual(eq, &eval, t.at(i), x.at(j), h, h)).collect())
        .collect();
    let mut max: f64 = 0.0;
    let mut sq = 0.0;
    let mut count = 0usize;
    for row in rows {
        for r in row? {
            max = max.max(r);
            sq += r * r;
            count += 1;
        }
    }
    Ok(ResidualReport {
        equation_id: eq.id().to_string(),
        grid: GridSpec {
            t_axis: t,
            x_axis: x,
            h_t: h,
            h_x: h,
        },
        max_residual: max,
        l2_residual: (sq / count as f64).sqrt(),
        convergence_order: None,
        notes: notes.to_string(),
    })
}
