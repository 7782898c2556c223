use rgsym::numerics::{
    cold_structure_functions, erfi, find_root, hot_structure_functions, integrate_ode, Bracket, OdeOptions, Tolerance,
};
use rgsym::Error;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, LN_2, PI};

/// Maclaurin series of erfi summed until the terms stop mattering.
fn erfi_series(x: f64) -> f64 {
    let (mut sum, mut power, mut fact) = (0.0, x, 1.0);
    for k in 0..200 {
        let term = power / (fact * (2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        power *= x * x;
        fact *= (k + 1) as f64;
    }
    2.0 / PI.sqrt() * sum
}

/// Composite Simpson of `(2/sqrt(pi)) exp(s^2)` on `[0, x]`.
fn erfi_simpson(x: f64) -> f64 {
    let m = 200_000;
    let h = x / m as f64;
    let mut acc = 0.0;
    for k in 0..=m {
        let w = if k == 0 || k == m { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * (h * k as f64).powi(2).exp();
    }
    2.0 / PI.sqrt() * acc * h / 3.0
}

#[test]
fn erfi_matches_series_and_quadrature() {
    assert_eq!(erfi(0.0).unwrap(), 0.0);
    assert!((erfi(1.0).unwrap() - 1.650_425_758_8).abs() < 1e-10);
    for x in [0.1, 0.5, 1.0, 2.0, 2.9] {
        let r = erfi_series(x);
        assert!((erfi(x).unwrap() - r).abs() <= 1e-13 * r.abs(), "x = {x}");
    }
    for x in [3.2, 4.0, 5.0, 5.9] {
        let r = erfi_simpson(x);
        assert!((erfi(x).unwrap() / r - 1.0).abs() < 1e-10, "x = {x}");
    }
    assert_eq!(erfi(-0.7).unwrap(), -erfi(0.7).unwrap());
    assert!(matches!(erfi(6.5), Err(Error::DomainOverflow { .. })));
}

#[test]
fn structure_functions_at_origin() {
    // f1(0) + i f2(0) = 3^(1/3) Gamma(4/3) exp(i pi/6)
    let gamma_4_3 = 0.892_979_511_569_249_2;
    let r = 3f64.cbrt() * gamma_4_3;
    let (f1, f2) = hot_structure_functions(0.0).unwrap();
    assert!((f1 - r * FRAC_PI_6.cos()).abs() < 1e-10);
    assert!((f2 - r * FRAC_PI_6.sin()).abs() < 1e-10);
    // pi Ai(0)
    assert!((1.1153..=1.1154).contains(&f1));
    assert!((f1 - PI * 0.355_028_053_887_817_2).abs() < 1e-10);
    assert!(f2 > 0.0);
    assert!(hot_structure_functions(20.0).unwrap().0.abs() < 1e-3);
}

#[test]
fn cold_structure_values() {
    assert_eq!(cold_structure_functions(0.0), (1.0, 0.0));
    assert_eq!(cold_structure_functions(1.0), (0.5, 0.5));
    assert_eq!(cold_structure_functions(-1.0), (0.5, -0.5));
}

#[test]
fn root_examples() {
    let tol = Tolerance::tight();
    let r = find_root(|s| s - 1.0, Bracket::new(0.0, 2.0).unwrap(), tol).unwrap();
    assert!((r - 1.0).abs() < 1e-14);
    let r = find_root(|s| s * s - 2.0, Bracket::new(1.0, 2.0).unwrap(), tol).unwrap();
    assert!((r - 2f64.sqrt()).abs() < 1e-14);
    let r = find_root(f64::cos, Bracket::new(1.0, 2.0).unwrap(), tol).unwrap();
    assert!((r - FRAC_PI_2).abs() < 1e-14);
    assert!(matches!(
        find_root(|s| s * s + 1.0, Bracket::new(-1.0, 1.0).unwrap(), tol),
        Err(Error::NoSignChange { .. })
    ));
}

#[test]
fn ode_examples() {
    let tol = Tolerance::default();
    let opts = OdeOptions::from_tolerance(&tol);
    let e = integrate_ode(|_, y, d| d[0] = y[0], &[1.0], (0.0, 1.0), &opts).unwrap();
    assert!((e.last_state()[0] - 1f64.exp()).abs() < 10.0 * tol.abs_tol * 1f64.exp());
    let half = integrate_ode(|_, y, d| d[0] = -y[0], &[1.0], (0.0, LN_2), &opts).unwrap();
    assert!((half.last_state()[0] - 0.5).abs() < 1e-8);
    let quarter = integrate_ode(|_, y, d| d[0] = -y[0] * y[0], &[1.0], (0.0, 3.0), &opts).unwrap();
    assert!((quarter.last_state()[0] - 0.25).abs() < 1e-8);
}

/// `int_0^inf exp(i(eta s + s^3/3)) ds` on the real axis: composite Simpson up
/// to `L = 12`, then two integration-by-parts terms for the tail.
fn hot_real_axis(eta: f64) -> (f64, f64) {
    let l = 12.0;
    let n = 600_000;
    let h = l / n as f64;
    let phase = |s: f64| eta * s + s * s * s / 3.0;
    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..=n {
        let w = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        let p = phase(k as f64 * h);
        re += w * p.cos();
        im += w * p.sin();
    }
    re *= h / 3.0;
    im *= h / 3.0;
    // tail = e^{i phi(L)} (i / phi' + phi'' / phi'^3)
    let (d1, d2) = (eta + l * l, 2.0 * l);
    let (c, s) = (phase(l).cos(), phase(l).sin());
    let (a, b) = (d2 / d1.powi(3), 1.0 / d1);
    (re + c * a - s * b, im + s * a + c * b)
}

#[test]
fn hot_structure_against_real_axis() {
    for eta in [-8.0, -3.0, 0.0, 2.0, 7.0] {
        let (f1, f2) = hot_structure_functions(eta).unwrap();
        let (g1, g2) = hot_real_axis(eta);
        assert!((f1 - g1).abs() < 1e-6 && (f2 - g2).abs() < 1e-6, "eta {eta}: ({f1}, {f2}) vs ({g1}, {g2})");
    }
}
