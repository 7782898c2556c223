use rgsym::numerics::{erfi, Tolerance};
use rgsym::oracles::{local_residual, Equation, Phi};
use rgsym::quasi_chaplygin::{
    liebacklund_coords, liebacklund_residual, onaxis_density, onaxis_density_ode, physical_hodograph_sampler,
    slab_parameter, slab_solution, soliton_solution, ChaplyginConfig, HodographJet, HodographPoint, LieBacklundCase,
};
use std::f64::consts::PI;

fn tol() -> Tolerance {
    Tolerance::tight()
}

#[test]
fn soliton_values() {
    assert_eq!(soliton_solution(0.0, 0.0, tol()).unwrap(), (1.0, 0.0));
    let (n, v) = soliton_solution(0.5, 0.0, tol()).unwrap();
    assert!((n - 2.0).abs() < 1e-6 && v.abs() < 1e-12);
    // smaller root of 0.09 n^2 - n + 1 = 0
    let small = (1.0 - (1.0f64 - 0.36).sqrt()) / 0.18;
    assert!((soliton_solution(0.3, 0.0, tol()).unwrap().0 - small).abs() < 1e-12);
    for x in [-1.5, 0.0, 0.4, 2.0] {
        let (n, v) = soliton_solution(0.0, x, tol()).unwrap();
        assert!((n - x.cosh().powi(-2)).abs() < 1e-10 && v == 0.0);
    }
    assert!(soliton_solution(0.6, 0.0, tol()).is_err());
}

/// Bisection of `t = sqrt(n - 1)/n` on `[1, 2]`, where the right side increases.
fn axis_root(t: f64) -> f64 {
    let (mut a, mut b) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (m - 1.0).sqrt() / m < t {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn axis_functional() {
    assert_eq!(onaxis_density(0.0).unwrap(), 1.0);
    assert!((onaxis_density(0.5).unwrap() - 2.0).abs() < 1e-12);
    assert!((onaxis_density(0.4).unwrap() - 1.25).abs() < 1e-12);
    let times = [0.1, 0.2, 0.3, 0.4, 0.45];
    let ode = onaxis_density_ode(&times, tol()).unwrap();
    for (t, n) in times.iter().zip(ode) {
        let r = axis_root(*t);
        assert!((onaxis_density(*t).unwrap() - r).abs() < 1e-12);
        assert!((soliton_solution(*t, 0.0, tol()).unwrap().0 - r).abs() < 1e-8);
        assert!((n - r).abs() < 1e-6);
    }
    assert!(onaxis_density(0.55).is_err());
}

#[test]
fn slab_values() {
    assert_eq!(slab_solution(0.0, 0.0, tol()).unwrap(), (1.0, 0.0));
    for x in [0.3, 1.0] {
        let (n, v) = slab_solution(0.0, x, tol()).unwrap();
        assert!((n - (-x * x).exp()).abs() < 1e-15 && v == 0.0);
    }
    let t1 = PI.sqrt() / 2.0 * erfi(1.0 / 2f64.sqrt()).unwrap();
    assert!((slab_parameter(t1).unwrap() - 1.0).abs() < 1e-12);
    assert!((slab_solution(t1, 0.0, tol()).unwrap().0 - (-0.5f64).exp()).abs() < 1e-12);
}

#[test]
fn pde_residuals_on_coarse_grid() {
    // 40 x 40 nodes, pointwise stencil at each
    let soliton = ChaplyginConfig::soliton();
    let slab = ChaplyginConfig::slab();
    for (cfg, t_max) in [(soliton, 0.45), (slab, 2.0)] {
        let eq = cfg.equation();
        let mut worst: f64 = 0.0;
        for i in 0..40 {
            for j in 0..40 {
                let t = 0.01 + (t_max - 0.01) * i as f64 / 39.0;
                let x = -2.0 + 4.0 * j as f64 / 39.0;
                let r = local_residual(&eq, |t, x| cfg.solve(t, x, tol()).map(|(n, v)| vec![v, n]), t, x, 1e-4, 1e-4)
                    .unwrap();
                worst = worst.max(r);
            }
        }
        assert!(worst <= 1e-4, "{cfg:?}: {worst}");
    }
    assert!(matches!(slab.equation(), Equation::Kcs { phi: Phi::Inverse, .. }));
}

#[test]
fn parity() {
    for t in [0.1, 0.3, 0.45] {
        for x in [0.2, 0.9, 1.7] {
            let (n1, v1) = soliton_solution(t, x, tol()).unwrap();
            let (n2, v2) = soliton_solution(t, -x, tol()).unwrap();
            assert!((n1 - n2).abs() < 1e-10 && (v1 + v2).abs() < 1e-10);
            let (n1, v1) = slab_solution(4.0 * t, x, tol()).unwrap();
            let (n2, v2) = slab_solution(4.0 * t, -x, tol()).unwrap();
            assert!((n1 - n2).abs() < 1e-10 && (v1 + v2).abs() < 1e-10);
        }
    }
}

#[test]
fn liebacklund_on_exact_solutions() {
    let soliton = |t: f64, x: f64| soliton_solution(t, x, Tolerance::tight());
    for t in [0.1, 0.2, 0.3] {
        for x in [0.2, 0.5] {
            let (n, v) = soliton(t, x).unwrap();
            let s = physical_hodograph_sampler(soliton, (t, x)).unwrap();
            let (f, g) = liebacklund_residual(LieBacklundCase::Soliton, &HodographPoint::from_physical(t, x, n, v), &s)
                .unwrap();
            assert!(f.max(g) <= 1e-4, "t {t} x {x}: {f} {g}");
            let jet = HodographJet::sample(&s, &[n, v]).unwrap();
            let a = liebacklund_coords(LieBacklundCase::Soliton, n, v, &jet);
            let b = liebacklund_coords(LieBacklundCase::Binomial { alpha: 1.0 }, n, v, &jet);
            assert!((a.0 - b.0).abs() <= 1e-12 && (a.1 - b.1).abs() <= 1e-12);
        }
    }
    let slab = |t: f64, x: f64| slab_solution(t, x, Tolerance::tight());
    for t in [0.3, 1.0] {
        for x in [0.5, 0.8] {
            let (n, v) = slab(t, x).unwrap();
            let s = physical_hodograph_sampler(slab, (t, x)).unwrap();
            let (f, g) =
                liebacklund_residual(LieBacklundCase::Slab, &HodographPoint::from_physical(t, x, n, v), &s).unwrap();
            assert!(f.max(g) <= 1e-4, "slab t {t} x {x}: {f} {g}");
        }
    }
}

#[test]
fn axis_velocity_gradient_diverges() {
    let slope = |t: f64| {
        let h = 1e-6;
        let (_, a) = soliton_solution(t, h, tol()).unwrap();
        let (_, b) = soliton_solution(t, -h, tol()).unwrap();
        (a - b) / (2.0 * h)
    };
    let near = slope(0.4999999);
    assert!(near.abs() > 1e3, "{near}");
    assert!(slope(0.3).abs() < near.abs());
    assert!((soliton_solution(0.4999999, 0.0, tol()).unwrap().0 - 2.0).abs() < 1e-2);
}
