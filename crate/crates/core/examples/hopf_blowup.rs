//! Hopf boundary value problem: implicit solution, its characteristics
//! oracle, and the gradient catastrophe of the sine profile.

use rgsym::transfer_hopf::{
    hopf_characteristics_oracle, hopf_gradient_blowup, hopf_max_slope, hopf_pt, hopf_singularity_time, hopf_solve,
    HopfConfig, HopfProfile,
};
use std::f64::consts::PI;

fn main() -> rgsym::Result<()> {
    let eps = 1.0;
    let sine = HopfConfig::new(HopfProfile::Sine, eps)?;
    let t_sing = hopf_singularity_time(&sine);
    println!("sine profile, eps = {eps}: t_sing = {t_sing}");

    let t = 0.6;
    let xs: Vec<f64> = (0..=8).map(|k| -PI + PI * k as f64 / 4.0).collect();
    let oracle = hopf_characteristics_oracle(&sine, t, &xs)?;
    println!("\n{:>8} {:>12} {:>12} {:>12}", "x", "implicit", "oracle", "first order");
    for (x, o) in xs.iter().zip(&oracle) {
        println!("{x:>8.4} {:>12.8} {o:>12.8} {:>12.8}", hopf_solve(&sine, t, *x)?, hopf_pt(&sine, t, *x));
    }

    println!("\nsteepest slope as t approaches t_sing:");
    for frac in [0.5, 0.9, 0.99, 0.999] {
        println!("  t = {:.3}: max |u_x| = {:.3e}", frac * t_sing, hopf_max_slope(&sine, frac * t_sing, -PI, PI)?);
    }
    if let Some(t_hit) = hopf_gradient_blowup(&sine, 1e3, 1.5 * t_sing, -PI, PI)? {
        println!("slope passes 1e3 at t = {t_hit:.6}");
    }

    let linear = HopfConfig::new(HopfProfile::Linear, eps)?;
    println!(
        "\nlinear profile never breaks: t_sing = {}, u(1, 2) = {}",
        hopf_singularity_time(&linear),
        hopf_solve(&linear, 1.0, 2.0)?
    );
    Ok(())
}
