//! Closed and implicit solutions: soliton beam, expanding slab, axis density.

use crate::error::{Error, Result};
use crate::numerics::{erfi, find_root, integrate_ode, Bracket, OdeOptions, Tolerance, ERFI_MAX_ARG};
use std::f64::consts::{PI, SQRT_2};

/// Collapse time of the soliton beam.
pub const SOLITON_T_SING: f64 = 0.5;

/// Largest slab parameter `q` accepted by the time inversion.
pub const SLAB_Q_MAX: f64 = 5.0;

/// Physical branch of `t^2 n^2 - n c + 1 = 0`, the root that tends to `1/c`.
fn small_root(t: f64, c: f64) -> f64 {
    2.0 / (c + (c * c - 4.0 * t * t).max(0.0).sqrt())
}

fn soliton_density(t: f64, chi: f64) -> f64 {
    let c = chi.cosh().powi(2);
    small_root(t, c)
}

/// Soliton beam `n(0, x) = sech^2 x`, `v(0, x) = 0` in the focusing medium.
///
/// With `chi = x - v t` the pair reduces to one scalar equation
/// `x - chi + 2 t^2 n(chi) tanh(chi) = 0`; `|2 t^2 n tanh| <= 4 t^2` brackets it.
pub fn soliton_solution(t: f64, x: f64, tol: Tolerance) -> Result<(f64, f64)> {
    if !(0.0..=SOLITON_T_SING).contains(&t) || !x.is_finite() {
        return Err(Error::BranchLoss { t, x });
    }
    if t == 0.0 {
        return Ok((x.cosh().powi(-2), 0.0));
    }
    let reach = 4.0 * t * t;
    let pad = 1e-3 + 1e-12 * x.abs();
    let f = |chi: f64| x - chi + 2.0 * t * t * soliton_density(t, chi) * chi.tanh();
    let chi = find_root(f, Bracket::new(x - reach - pad, x + reach + pad)?, tol)?;
    let n = soliton_density(t, chi);
    let v = -2.0 * n * t * chi.tanh();
    Ok((n, v))
}

/// Soliton solution by damped fixed-point iteration continued in `t` from
/// the boundary data with step `dt`.
pub fn soliton_by_continuation(t: f64, x: f64, dt: f64) -> Result<(f64, f64)> {
    if !(0.0..=SOLITON_T_SING).contains(&t) || !(dt > 0.0) {
        return Err(Error::BranchLoss { t, x });
    }
    const RELAX: f64 = 0.5;
    let mut n = x.cosh().powi(-2);
    let mut v = 0.0;
    let steps = (t / dt).ceil().max(1.0) as usize;
    for k in 1..=steps {
        let tk = if k == steps { t } else { dt * k as f64 };
        let mut converged = false;
        for _ in 0..100_000 {
            let chi = x - v * tk;
            let n_new = small_root(tk, chi.cosh().powi(2));
            let v_new = -2.0 * n_new * tk * chi.tanh();
            let dv = v_new - v;
            let dn = n_new - n;
            v += RELAX * dv;
            n += RELAX * dn;
            if dv.abs() < 1e-15 && dn.abs() < 1e-15 * n {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::BranchLoss { t: tk, x });
        }
    }
    Ok((n, v))
}

/// `t(q) = (sqrt(pi)/2) erfi(q / sqrt 2)`.
pub fn slab_time(q: f64) -> Result<f64> {
    Ok(0.5 * PI.sqrt() * erfi(q / SQRT_2)?)
}

/// Inverse of [`slab_time`] on `q in [0, 5]`.
pub fn slab_parameter(t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::OutOfRange {
            what: "slab time",
            value: t,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    const { assert!(SLAB_Q_MAX / SQRT_2 <= ERFI_MAX_ARG) };
    let t_max = slab_time(SLAB_Q_MAX)?;
    if t > t_max {
        return Err(Error::DomainOverflow {
            arg: "t",
            value: t,
            limit: "slab time capped at q = 5",
        });
    }
    find_root(
        |q| slab_time(q).map(|s| s - t).unwrap_or(f64::NAN),
        Bracket::new(0.0, SLAB_Q_MAX)?,
        Tolerance::tight(),
    )
}

/// Expanding slab from `n(0, x) = exp(-x^2)` in the defocusing medium.
pub fn slab_solution(t: f64, x: f64, _tol: Tolerance) -> Result<(f64, f64)> {
    let q = slab_parameter(t)?;
    Ok(slab_from_parameter(q, x))
}

pub fn slab_from_parameter(q: f64, x: f64) -> (f64, f64) {
    let decay = (-0.5 * q * q).exp();
    let v = x * SQRT_2 * q * decay;
    let n = decay * (-x * x * (-q * q).exp()).exp();
    (n, v)
}

/// Axis density of the soliton beam: the root of `t = sqrt(n - 1)/n` on the
/// branch from `n(0) = 1`.
pub fn onaxis_density(t: f64) -> Result<f64> {
    if !(0.0..=SOLITON_T_SING).contains(&t) {
        return Err(Error::OutOfRange {
            what: "axis time",
            value: t,
            lo: 0.0,
            hi: SOLITON_T_SING,
        });
    }
    find_root(|n| (n - 1.0).max(0.0).sqrt() - t * n, Bracket::new(1.0, 2.0)?, Tolerance::tight())
}

/// Axis density by integrating the second-order equation obtained from the
/// axis symmetry, in the regular variable `m = sqrt(n - 1)`:
/// `m'' = m'^2 (4m + 2t m')/(1 + m^2)`, `m(0) = 0`, `m'(0) = 1`.
/// Returns `n` at each requested time (ascending, below the collapse).
pub fn onaxis_density_ode(times: &[f64], tol: Tolerance) -> Result<Vec<f64>> {
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("times must be ascending".into()));
    }
    let Some(&t_end) = times.last() else {
        return Ok(Vec::new());
    };
    if !(0.0..SOLITON_T_SING).contains(&t_end) || times[0] < 0.0 {
        return Err(Error::OutOfRange {
            what: "axis time",
            value: t_end,
            lo: 0.0,
            hi: SOLITON_T_SING,
        });
    }
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let (m, mp) = (y[0], y[1]);
        dy[0] = mp;
        dy[1] = mp * mp * (4.0 * m + 2.0 * t * mp) / (1.0 + m * m);
    };
    let traj = integrate_ode(rhs, &[0.0, 1.0], (0.0, t_end), &OdeOptions::from_tolerance(&tol))?;
    times
        .iter()
        .map(|&t| {
            let m = traj.eval(t).ok_or_else(|| Error::RootNotFound(format!("no dense output at t = {t}")))?[0];
            Ok(1.0 + m * m)
        })
        .collect()
}

/// Axis-reduced symmetry coordinate `4 - 5n - t n_t + 2(n-1) n n_tt / n_t^2`.
pub fn onaxis_symmetry_coordinate(t: f64, n: f64, n_t: f64, n_tt: f64) -> f64 {
    4.0 - 5.0 * n - t * n_t + 2.0 * (n - 1.0) * n * n_tt / (n_t * n_t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soliton_values() {
        let tol = Tolerance::tight();
        assert_eq!(soliton_solution(0.0, 0.0, tol).unwrap(), (1.0, 0.0));
        let (n, v) = soliton_solution(0.5, 0.0, tol).unwrap();
        assert!((n - 2.0).abs() < 1e-12 && v == 0.0);
        let (n, _) = soliton_solution(0.3, 0.0, tol).unwrap();
        assert!((n - 10.0 / 9.0).abs() < 1e-13);
        assert!(soliton_solution(0.6, 0.0, tol).is_err());
    }

    #[test]
    fn slab_values() {
        let (n, v) = slab_solution(0.0, 0.7, Tolerance::default()).unwrap();
        assert_eq!(v, 0.0);
        assert!((n - (-0.49f64).exp()).abs() < 1e-15);
        let t1 = slab_time(1.0).unwrap();
        let (n, _) = slab_solution(t1, 0.0, Tolerance::default()).unwrap();
        assert!((n - (-0.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn axis_values() {
        assert_eq!(onaxis_density(0.0).unwrap(), 1.0);
        assert!((onaxis_density(0.5).unwrap() - 2.0).abs() < 1e-12);
        assert!((onaxis_density(0.4).unwrap() - 1.25).abs() < 1e-12);
        assert!(onaxis_density(0.51).is_err());
    }
}
