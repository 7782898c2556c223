//! Expansion of a quasineutral plasma bunch: the self-similar density law
//! checked against particles pushed along exact characteristics.

use rgsym::plasma_bunch::{
    bunch_invariant, characteristics_oracle, charge_density, density_evolution, energy_spectrum, BunchConfig,
    OracleOptions,
};

fn main() -> rgsym::Result<()> {
    let pair = BunchConfig::default_pair();
    println!("omega = {:.6}", pair.omega);
    println!("net charge at (t, x) = (2, 1): {:.2e}", charge_density(&pair, 2.0, 1.0)?);
    println!("invariant of an electron at rest at the centre: {}", bunch_invariant(&pair, 0, 0.0, 0.0, 0.0)?);

    println!("\nelectron density on the axis:");
    for t in [0.0, 1.0, 3.0, 10.0] {
        println!("  t = {t:>4}: n = {:.6}", density_evolution(&pair, 0, t, 0.0)?);
    }

    let opts = OracleOptions {
        particles: 40_000,
        tracked: 500,
        ..OracleOptions::default()
    };
    let r = characteristics_oracle(&pair, 1, &opts)?;
    println!(
        "\nion oracle, {} particles to t = {}: density deviation {:.3}, number ratio {:.5}, invariant drift {:.1e}",
        r.particles, r.t_max, r.max_relative_deviation, r.number_ratio, r.max_invariant_drift
    );

    let s = energy_spectrum(&pair, 1, &[0.0005, 0.001, 0.002, 0.004])?;
    for (e, w) in s.energy.iter().zip(&s.weighted) {
        println!("  ion dN/dE at E = {e}: {w:.4}");
    }
    Ok(())
}
