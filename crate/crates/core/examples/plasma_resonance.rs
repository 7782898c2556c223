//! Plasma resonance: the exact two-field solution for cold and hot electrons,
//! its residual convergence, secondary fields and harmonic content.

use rgsym::plasma_resonance::{
    harmonic_spectrum, resonance_convergence, resonance_fields, secondary_fields, ResonanceConfig, ResonanceModel,
};
use std::f64::consts::FRAC_PI_2;

fn main() -> rgsym::Result<()> {
    for model in [ResonanceModel::Cold, ResonanceModel::Hot] {
        let cfg = ResonanceConfig::new(0.3, model)?;
        let s = resonance_fields(&cfg, FRAC_PI_2, 0.0)?;
        println!("{model:?}: at tau = pi/2, eta = 0: p = {:.6}, v = {:.6}, x = {:.6}", s.p, s.v, s.x);

        let (report, pairs) = resonance_convergence(&cfg, (1.0, 0.3), &[0.05, 0.025], 8)?;
        println!("  residual on halving: {pairs:?}, order {:.3?}", report.convergence_order);

        let spec = harmonic_spectrum(&cfg, 0.0, 6)?;
        let line: Vec<String> = spec.iter().map(|a| format!("{a:.3e}")).collect();
        println!("  harmonics at eta = 0: {}", line.join(" "));

        let sec = secondary_fields(&cfg)?;
        println!("  smallest eta-Jacobian over the grid: {:.4}", sec.min_jacobian());
    }
    Ok(())
}
