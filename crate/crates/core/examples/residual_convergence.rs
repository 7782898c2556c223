//! Central-difference residuals of sampled fields and the observed order of
//! convergence, here on the exact Hopf solution.

use rgsym::oracles::{convergence_order, pde_residual, Axis, Equation, FieldSample};
use rgsym::transfer_hopf::{hopf_solve, HopfConfig, HopfProfile};

fn main() -> rgsym::Result<()> {
    let cfg = HopfConfig::new(HopfProfile::Sine, 1.0)?;
    let eq = Equation::Hopf { eps: cfg.eps };
    let mut pairs = Vec::new();
    for n in [9usize, 17, 33, 65] {
        let h_t = 0.4 / (n - 1) as f64;
        let h_x = 2.0 / (n - 1) as f64;
        let field = FieldSample::from_fn(Axis::centred(0.3, h_t, n)?, Axis::centred(0.0, h_x, n)?, &["u"], |t, x| {
            Ok(vec![hopf_solve(&cfg, t, x)?])
        })?;
        let r = pde_residual(&eq, &field)?;
        println!("h_x = {h_x:.5}: max residual {:.3e}, rms {:.3e}", r.max_residual, r.l2_residual);
        pairs.push((h_x, r.max_residual));
    }
    println!("fitted order: {:.3}", convergence_order(&pairs)?);
    Ok(())
}
