use rgsym::oracles::{convergence_order, pde_residual, Axis, Equation, FieldSample, Phi};
use rgsym::transfer_hopf::{hopf_solve, HopfConfig, HopfProfile};
use rgsym::Error;

#[test]
fn constants_solve_kcs() {
    for phi in [Phi::Unity, Phi::Inverse] {
        let f = FieldSample::from_fn(Axis::new(0.0, 1.0, 12).unwrap(), Axis::new(-2.0, 2.0, 12).unwrap(), &["v", "n"], |_, _| {
            Ok(vec![0.0, 1.3])
        })
        .unwrap();
        let r = pde_residual(&Equation::Kcs { alpha: 1.0, phi }, &f).unwrap();
        assert_eq!((r.max_residual, r.l2_residual), (0.0, 0.0));
        assert_eq!(r.equation_id, "kcs");
    }
}

#[test]
fn small_grid_rejected() {
    let f = FieldSample::from_fn(Axis::new(0.0, 1.0, 4).unwrap(), Axis::new(0.0, 1.0, 9).unwrap(), &["u"], |_, _| Ok(vec![0.0]))
        .unwrap();
    assert!(matches!(pde_residual(&Equation::Hopf { eps: 1.0 }, &f), Err(Error::GridTooSmall(_))));
    let wrong = FieldSample::from_fn(Axis::new(0.0, 1.0, 9).unwrap(), Axis::new(0.0, 1.0, 9).unwrap(), &["w"], |_, _| Ok(vec![0.0]))
        .unwrap();
    assert!(pde_residual(&Equation::Hopf { eps: 1.0 }, &wrong).is_err());
}

/// Same interior span at every step, so only the stencil error changes.
fn sine_residual(h: f64) -> f64 {
    let interior = (0.32 / h).round() as usize;
    let cfg = HopfConfig::new(HopfProfile::Sine, 1.0).unwrap();
    let f = FieldSample::from_fn(Axis::centred(0.4, h, interior).unwrap(), Axis::centred(0.7, h, interior).unwrap(), &["u"], |t, x| {
        Ok(vec![hopf_solve(&cfg, t, x)?])
    })
    .unwrap();
    pde_residual(&Equation::Hopf { eps: 1.0 }, &f).unwrap().max_residual
}

#[test]
fn hopf_residual_second_order() {
    let pairs: Vec<(f64, f64)> = [0.02, 0.01, 0.005].iter().map(|&h| (h, sine_residual(h))).collect();
    for w in pairs.windows(2) {
        let ratio = w[1].1 / w[0].1;
        assert!((0.2..=0.3).contains(&ratio), "{ratio} {pairs:?}");
    }
    let order = convergence_order(&pairs).unwrap();
    assert!((1.9..=2.1).contains(&order), "{order}");
}

#[test]
fn synthetic_orders() {
    let hs = [0.2, 0.1, 0.05, 0.025];
    let quad: Vec<_> = hs.iter().map(|&h| (h, 3.0 * h * h)).collect();
    let lin: Vec<_> = hs.iter().map(|&h| (h, h)).collect();
    assert!((convergence_order(&quad).unwrap() - 2.0).abs() < 1e-12);
    assert!((convergence_order(&lin).unwrap() - 1.0).abs() < 1e-12);
    assert!(convergence_order(&[(0.1, 0.1)]).is_err());
    assert!(convergence_order(&[(0.1, 0.1), (0.1, 0.05)]).is_err());
}

#[test]
fn translation_invariant() {
    let f = FieldSample::from_fn(Axis::new(0.0, 0.5, 20).unwrap(), Axis::new(-1.0, 1.0, 20).unwrap(), &["v", "n"], |t, x| {
        Ok(vec![(t + x).sin(), 1.0 + 0.5 * (x * x - t).cos()])
    })
    .unwrap();
    let eq = Equation::Basic { alpha: 1.0, beta: 0.5, nu: 0.0, phi: Phi::Unity };
    let a = pde_residual(&eq, &f).unwrap();
    let b = pde_residual(&eq, &f.shifted_x(123.25)).unwrap();
    assert_eq!(a.max_residual, b.max_residual);
    assert_eq!(a.l2_residual, b.l2_residual);
}
