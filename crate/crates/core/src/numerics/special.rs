//! Imaginary error function and the plasma-resonance structure functions.

use super::quad::{integrate_vec, QuadOptions};
use crate::error::{Error, Result};
use std::f64::consts::{FRAC_2_SQRT_PI, FRAC_PI_6, PI};

const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Largest |x| accepted by [`erfi`].
pub const ERFI_MAX_ARG: f64 = 6.0;

/// `erfi(x) = (2/sqrt(pi)) * int_0^x exp(s^2) ds` for `|x| <= 6`.
pub fn erfi(x: f64) -> Result<f64> {
    if !(x.abs() <= ERFI_MAX_ARG) {
        return Err(Error::DomainOverflow {
            arg: "x",
            value: x,
            limit: "|x| <= 6",
        });
    }
    if x.abs() <= 3.0 {
        Ok(erfi_series(x))
    } else {
        Ok(FRAC_2_SQRT_PI * (x * x).exp() * dawson(x))
    }
}

fn erfi_series(x: f64) -> f64 {
    let x2 = x * x;
    // term_k = x^(2k+1) / k!
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= x2 / k;
        let add = term / (2.0 * k + 1.0);
        sum += add;
        if add.abs() <= f64::EPSILON * sum.abs() * 0.5 {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Dawson's integral `F(x) = exp(-x^2) int_0^x exp(s^2) ds`, Rybicki's
/// sampling-theorem series with spacing 0.2.
pub fn dawson(x: f64) -> f64 {
    const H: f64 = 0.2;
    const TERMS: usize = 20;
    let ax = x.abs();
    if ax < 0.05 {
        let x2 = x * x;
        // Maclaurin: x - 2x^3/3 + 4x^5/15 - 8x^7/105 + 16x^9/945
        return x * (1.0 - x2 * (2.0 / 3.0 - x2 * (4.0 / 15.0 - x2 * (8.0 / 105.0 - x2 * 16.0 / 945.0))));
    }
    let n0 = 2.0 * (0.5 * ax / H).round();
    let xp = ax - n0 * H;
    let mut e1 = (2.0 * xp * H).exp();
    let e2 = e1 * e1;
    let mut d1 = n0 + 1.0;
    let mut d2 = d1 - 2.0;
    let mut sum = 0.0;
    for i in 1..=TERMS {
        let c = (-((2.0 * i as f64 - 1.0) * H).powi(2)).exp();
        sum += c * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    INV_SQRT_PI * x.signum() * (-xp * xp).exp() * sum
}

/// Cold linear-profile structure functions `(1/(1+eta^2), eta/(1+eta^2))`.
pub fn cold_structure_functions(eta: f64) -> (f64, f64) {
    let d = 1.0 + eta * eta;
    (1.0 / d, eta / d)
}

/// Derivatives of [`cold_structure_functions`] with respect to `eta`.
pub fn cold_structure_derivatives(eta: f64) -> (f64, f64) {
    let d = 1.0 + eta * eta;
    (-2.0 * eta / (d * d), (1.0 - eta * eta) / (d * d))
}

/// Controls for the ray quadrature behind the hot structure functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HotControls {
    pub quad: QuadOptions,
    /// The ray is cut where the integrand modulus falls below `exp(-cutoff)`.
    pub cutoff: f64,
}

impl Default for HotControls {
    fn default() -> Self {
        Self {
            quad: QuadOptions {
                abs_tol: 1e-13,
                rel_tol: 1e-12,
                max_intervals: 4000,
            },
            cutoff: 40.0,
        }
    }
}

/// `f1 = int_0^inf cos(eta s + s^3/3) ds`, `f2 = int_0^inf sin(eta s + s^3/3) ds`.
pub fn hot_structure_functions(eta: f64) -> Result<(f64, f64)> {
    hot_structure_functions_with(eta, &HotControls::default())
}

pub fn hot_structure_functions_with(eta: f64, ctl: &HotControls) -> Result<(f64, f64)> {
    let [re, im] = ray_integral(eta, ctl, false)?;
    Ok((re, im))
}

/// `eta`-derivatives of [`hot_structure_functions`].
pub fn hot_structure_derivatives(eta: f64) -> Result<(f64, f64)> {
    let [re, im] = ray_integral(eta, &HotControls::default(), true)?;
    Ok((re, im))
}

/// Integrates `exp(i(eta s + s^3/3))` (times `i s` when `derivative`) along the
/// ray `s = r e^{i theta}` where the cubic phase turns into decay.
fn ray_integral(eta: f64, ctl: &HotControls, derivative: bool) -> Result<[f64; 2]> {
    if !eta.is_finite() {
        return Err(Error::InvalidInput(format!("eta must be finite, got {eta}")));
    }
    // For large negative eta a shallower ray keeps exp(|eta| r sin(theta)) growth bounded.
    let theta = if eta < 0.0 {
        FRAC_PI_6.min(7.8 / (-eta).powf(1.5))
    } else {
        FRAC_PI_6
    };
    let (st, ct) = theta.sin_cos();
    let (s3, c3) = (3.0 * theta).sin_cos();
    let log_mod = |r: f64| -eta * r * st - r * r * r * s3 / 3.0;
    let mut r_max = (3.0 * ctl.cutoff / s3).cbrt();
    while log_mod(r_max) > -ctl.cutoff || log_mod(1.1 * r_max) > log_mod(r_max) {
        r_max *= 1.2;
    }
    let integrand = |r: f64| -> [f64; 2] {
        let m = log_mod(r).exp();
        let phase = eta * r * ct + r * r * r * c3 / 3.0;
        let (ps, pc) = phase.sin_cos();
        // value * e^{i theta}
        let (mut re, mut im) = (m * (pc * ct - ps * st), m * (pc * st + ps * ct));
        if derivative {
            // times i r e^{i theta}
            let (a, b) = (-r * st, r * ct);
            let nre = re * a - im * b;
            let nim = re * b + im * a;
            re = nre;
            im = nim;
        }
        [re, im]
    };
    let q = integrate_vec(integrand, 0.0, r_max, ctl.quad)?;
    Ok(q.value)
}

/// `pi * Ai(0)`, the value of the hot `f1` at the origin.
pub const HOT_F1_AT_ZERO: f64 = PI * 0.355_028_053_887_817_2;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfi_values() {
        assert_eq!(erfi(0.0).unwrap(), 0.0);
        assert!((erfi(1.0).unwrap() - 1.650_425_758_797_542_8).abs() < 1e-14);
        assert_eq!(erfi(-0.7).unwrap(), -erfi(0.7).unwrap());
        assert!(matches!(erfi(6.5), Err(Error::DomainOverflow { .. })));
    }

    #[test]
    fn dawson_continuous_at_switch() {
        let gap = (dawson(0.05 - 1e-13) - dawson(0.05 + 1e-13)).abs();
        assert!((gap - 2e-13).abs() < 1e-14, "{gap}");
        // F'(x) = 1 - 2 x F(x)
        for &x in &[0.1, 0.7, 1.3, 2.9, 4.4] {
            let h = 1e-5;
            let d = (dawson(x + h) - dawson(x - h)) / (2.0 * h);
            assert!((d - (1.0 - 2.0 * x * dawson(x))).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn erfi_branches_agree_at_three() {
        let a = erfi_series(3.0);
        let b = FRAC_2_SQRT_PI * 9f64.exp() * dawson(3.0);
        assert!((a - b).abs() / a < 1e-13);
    }

    #[test]
    fn cold_values() {
        assert_eq!(cold_structure_functions(0.0), (1.0, 0.0));
        assert_eq!(cold_structure_functions(1.0), (0.5, 0.5));
        assert_eq!(cold_structure_functions(-1.0), (0.5, -0.5));
    }

    #[test]
    fn hot_at_origin() {
        let (f1, f2) = hot_structure_functions(0.0).unwrap();
        assert!((f1 - HOT_F1_AT_ZERO).abs() < 1e-11);
        // pi * Gi(0) = pi * Bi(0) / 3
        assert!((f2 - PI * 0.614_926_627_446_000_7 / 3.0).abs() < 1e-11);
    }
}
