use rgsym::transfer_hopf::{
    hopf_axis_invariant, hopf_axis_slope, hopf_characteristics_oracle, hopf_pt, hopf_singularity_time, hopf_solve,
    transfer_pt, transfer_rg, HopfConfig, HopfProfile, TabulatedProfile, TransferConfig,
};
use rgsym::Error;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::sync::Arc;

#[test]
fn transfer_values() {
    let lin = TransferConfig::linear(1.0, 1.0).unwrap();
    let nl = TransferConfig::nonlinear(1.0, 1.0).unwrap();
    let lin2 = TransferConfig::linear(2.0, 0.5).unwrap();
    assert_eq!(transfer_rg(&lin, 0.0), 1.0);
    assert_eq!(transfer_rg(&nl, 3.0), 0.25);
    assert!((transfer_rg(&lin2, 4f64.ln()) - 1.0).abs() < 1e-15);
    assert!((transfer_pt(&lin, 0.01) - 0.99).abs() < 1e-15);
    assert_eq!(transfer_pt(&nl, 0.0), 1.0);
    assert_eq!(transfer_pt(&nl, 2.0), -1.0);
    assert!((transfer_rg(&lin, LN_2) - 0.5).abs() < 1e-15);
    assert!(TransferConfig::new(1.0, 1.0, 1.0, 5.0).is_err());
}

/// Bisection on `x0 + eps t U(x0) = x` over a monotone bracket, then `U(x0)`.
fn characteristic_value(u: impl Fn(f64) -> f64, eps: f64, t: f64, x: f64, lo: f64, hi: f64) -> f64 {
    let g = |x0: f64| x0 + eps * t * u(x0) - x;
    let (mut a, mut b) = (lo, hi);
    assert!(g(a) * g(b) <= 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if g(a) * g(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    u(0.5 * (a + b))
}

#[test]
fn hopf_spot_values() {
    let lin = HopfConfig::new(HopfProfile::Linear, 1.0).unwrap();
    let sine = HopfConfig::new(HopfProfile::Sine, 1.0).unwrap();
    assert!((hopf_solve(&lin, 1.0, 2.0).unwrap() - 1.0).abs() < 1e-12);
    assert!((hopf_solve(&sine, 0.0, FRAC_PI_2).unwrap() + 1.0).abs() < 1e-14);
    assert!(hopf_solve(&sine, 0.5, 0.0).unwrap().abs() < 1e-14);
    assert!((hopf_pt(&lin, 0.1, 1.0) - 0.9).abs() < 1e-15);
    assert!((hopf_pt(&sine, 0.1, FRAC_PI_2) + 1.0).abs() < 1e-15);
    assert_eq!(hopf_pt(&sine, 0.0, 0.3), -(0.3f64.sin()));
    assert_eq!(hopf_singularity_time(&sine), 1.0);
    assert_eq!(hopf_singularity_time(&HopfConfig::new(HopfProfile::Sine, 2.0).unwrap()), 0.5);
    assert!(hopf_singularity_time(&lin).is_infinite());
    let o = hopf_characteristics_oracle(&lin, 1.0, &[2.0]).unwrap();
    assert!((o[0] - 1.0).abs() < 1e-8);
}

#[test]
fn hopf_sine_against_bisection() {
    let eps = 1.0;
    let sine = HopfConfig::new(HopfProfile::Sine, eps).unwrap();
    for t in [0.3, 0.7, 0.9] {
        let xs: Vec<f64> = (0..=40).map(|k| -3.0 + 0.15 * k as f64).collect();
        let oracle = hopf_characteristics_oracle(&sine, t, &xs).unwrap();
        for (x, o) in xs.iter().zip(oracle) {
            // the map x0 -> x0 - t sin x0 is monotone on [-pi, pi] for t < 1
            let r = characteristic_value(|s| -s.sin(), eps, t, *x, -PI, PI);
            let u = hopf_solve(&sine, t, *x).unwrap();
            assert!((u - r).abs() < 1e-10, "t {t} x {x}: {u} vs {r}");
            assert!((o - r).abs() < 1e-10);
        }
    }
}

#[test]
fn hopf_multivalued_after_breaking() {
    let sine = HopfConfig::new(HopfProfile::Sine, 1.0).unwrap();
    assert!(matches!(hopf_solve(&sine, 2.0, 0.3), Err(Error::MultivaluedRegion { .. })));
}

#[test]
fn tabulated_singularity_time() {
    let xs: Vec<f64> = (0..=400).map(|k| -4.0 + 0.02 * k as f64).collect();
    // x - 3 tanh x turns around, so it cannot be tabulated
    let bent: Vec<f64> = xs.iter().map(|x| x - 3.0 * x.tanh()).collect();
    assert!(TabulatedProfile::from_points(xs.clone(), bent).is_err());

    let us: Vec<f64> = xs.iter().map(|x| -2.0 * x.tanh()).collect();
    let min_slope = xs
        .windows(2)
        .zip(us.windows(2))
        .map(|(x, u)| (u[1] - u[0]) / (x[1] - x[0]))
        .fold(f64::INFINITY, f64::min);
    assert!((min_slope + 2.0).abs() < 1e-3);
    let table = TabulatedProfile::from_points(xs, us).unwrap();
    let cfg = HopfConfig::new(HopfProfile::Tabulated(Arc::new(table)), 0.5).unwrap();
    let t = hopf_singularity_time(&cfg);
    assert!((t - (-1.0 / (0.5 * min_slope))).abs() < 1e-3, "{t}");
    assert!((t - 1.0).abs() < 1e-3);
}

#[test]
fn axis_slope_and_invariant() {
    assert_eq!(hopf_axis_slope(0.7, 0.0), 1.0);
    assert_eq!(hopf_axis_slope(1.0, 1.0), 0.5);
    assert!((hopf_axis_invariant(0.3, 2.0, hopf_axis_slope(0.3, 2.0)) + 1.0).abs() < 1e-15);
    let lin = HopfConfig::new(HopfProfile::Linear, 0.4).unwrap();
    let h = 1e-4;
    for t in [0.0, 0.5, 3.0] {
        let d = (hopf_solve(&lin, t, h).unwrap() - hopf_solve(&lin, t, -h).unwrap()) / (2.0 * h);
        assert!((d - hopf_axis_slope(0.4, t)).abs() < 1e-6);
    }
}
