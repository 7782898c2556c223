//! Special functions, root finding, quadrature and ODE integration.

mod interp;
mod ode;
mod quad;
mod roots;
mod special;
mod tolerance;

pub use interp::Pchip;
pub use ode::{integrate_ode, integrate_ode_with_event, DenseSegment, EventHit, OdeOptions, Trajectory};
pub use quad::{integrate, integrate_real_line, integrate_vec, QuadOptions, Quadrature};
pub use roots::{find_root, scan_sign_changes};
pub use special::{
    cold_structure_derivatives, cold_structure_functions, dawson, erfi, hot_structure_derivatives,
    hot_structure_functions, hot_structure_functions_with, HotControls, ERFI_MAX_ARG, HOT_F1_AT_ZERO,
};
pub use tolerance::{Bracket, Tolerance};

/// Central-difference step used throughout: `max(1e-5, 1e-5 |v|)`.
pub fn stencil_step(v: f64) -> f64 {
    1e-5_f64.max(1e-5 * v.abs())
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
