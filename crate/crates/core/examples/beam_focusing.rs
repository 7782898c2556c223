//! Self-focusing of a Gaussian beam: orbit fans of the point symmetry,
//! axis blow-up, and the caustic where neighbouring orbits cross.

use rgsym::beam_focusing::{beam_caustic_time, beam_fan, beam_field, beam_singularity_time, BeamConfig};
use rgsym::numerics::Tolerance;

fn main() -> rgsym::Result<()> {
    let tol = Tolerance::new(1e-12, 1e-11, 200)?;
    for (a, b) in [(1.0, 0.5), (2.0, 0.0), (1.0, 0.25)] {
        let cfg = BeamConfig::gaussian(a, b)?;
        let predicted = cfg.predicted_singularity()?;
        let axis = beam_singularity_time(&cfg, &tol)?;
        let caustic = beam_caustic_time(&cfg, 3.0, 1.2 * predicted, &tol)?;
        println!("alpha {a}, beta {b}: predicted {predicted:.6}, axis blow-up {axis:.6}, caustic {caustic:.6}");
    }

    let cfg = BeamConfig::gaussian(1.0, 0.5)?;
    println!("\nfan at t = 0.9 (min dx/dchi0 = {:.4}):", beam_fan(&cfg, 0.9, 3.0, 33, &tol)?.min_jacobian());
    let xs = [0.0, 0.1, 0.2, 0.4, 0.8];
    for t in [0.0, 0.5, 0.9] {
        let f = beam_field(&cfg, t, &xs, &tol)?;
        let n: Vec<String> = f.n.iter().map(|v| format!("{v:8.4}")).collect();
        println!("  t = {t}: n = {}", n.join(" "));
    }

    match beam_singularity_time(&BeamConfig::gaussian(0.5, 0.5)?, &tol) {
        Err(e) => println!("\nbalanced beam: {e}"),
        Ok(t) => println!("\nbalanced beam collapsed at {t}"),
    }
    Ok(())
}
