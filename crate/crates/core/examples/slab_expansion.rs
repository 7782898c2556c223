//! An expanding slab in a defocusing medium: time is an imaginary error
//! function of the similarity parameter, inverted by bracketed root finding.

use rgsym::numerics::{erfi, Tolerance};
use rgsym::quasi_chaplygin::{slab_parameter, slab_solution, slab_time};

fn main() -> rgsym::Result<()> {
    println!("erfi(1) = {:.13}", erfi(1.0)?);
    println!("\n{:>6} {:>14} {:>12} {:>10}", "q", "t(q)", "q(t(q))", "n(t,0)");
    for k in 0..=8 {
        let q = 0.5 * k as f64;
        let t = slab_time(q)?;
        let (n, _) = slab_solution(t, 0.0, Tolerance::default())?;
        println!("{q:>6.2} {t:>14.6e} {:>12.9} {n:>10.6}", slab_parameter(t)?);
    }

    let t = 1.0;
    println!("\nprofile at t = {t}:");
    for k in 0..=5 {
        let x = 0.5 * k as f64;
        let (n, v) = slab_solution(t, x, Tolerance::default())?;
        println!("  x = {x:.1}: n = {n:.6}, v = {v:.6}");
    }
    Ok(())
}
