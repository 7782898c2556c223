//! Collapse of a soliton-profile beam in a focusing medium: the exact
//! solution, its axis reduction, and the higher symmetry it carries.

use rgsym::numerics::Tolerance;
use rgsym::quasi_chaplygin::{
    liebacklund_residual, onaxis_density, onaxis_density_ode, physical_hodograph_sampler, soliton_solution,
    HodographPoint, LieBacklundCase, SOLITON_T_SING,
};

fn main() -> rgsym::Result<()> {
    let tol = Tolerance::tight();
    println!("collapse at t = {SOLITON_T_SING}");
    println!("{:>6} {:>12} {:>12} {:>12}", "t", "n(t,0)", "axis root", "axis ODE");
    let times = [0.1, 0.2, 0.3, 0.4, 0.45];
    let ode = onaxis_density_ode(&times, tol)?;
    for (t, n_ode) in times.iter().zip(ode) {
        let (n, _) = soliton_solution(*t, 0.0, tol)?;
        println!("{t:>6.2} {n:>12.9} {:>12.9} {n_ode:>12.9}", onaxis_density(*t)?);
    }
    println!("n at collapse: {}", soliton_solution(SOLITON_T_SING, 0.0, tol)?.0);

    println!("\nprofile at t = 0.3:");
    for k in 0..=6 {
        let x = 0.5 * k as f64;
        let (n, v) = soliton_solution(0.3, x, tol)?;
        println!("  x = {x:.1}: n = {n:.6}, v = {v:+.6}");
    }

    let solution = move |t: f64, x: f64| soliton_solution(t, x, Tolerance::tight());
    let (t, x) = (0.2, 0.5);
    let (n, v) = solution(t, x)?;
    let sampler = physical_hodograph_sampler(solution, (t, x))?;
    let (f, g) = liebacklund_residual(LieBacklundCase::Soliton, &HodographPoint::from_physical(t, x, n, v), &sampler)?;
    println!("\nsecond-order symmetry on the solution at (t, x) = ({t}, {x}): |f| = {f:.2e}, |g| = {g:.2e}");
    Ok(())
}
