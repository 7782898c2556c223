//! Generators on named variable spaces: finite transformations from the Lie
//! equations, invariants, and the invariance test of a candidate solution.

use rgsym::group::{
    check_group_law, integrate_lie, invariance_residual, invariant_defect, Generator, SolutionSampler, VariableSpace,
};
use rgsym::numerics::Tolerance;
use rgsym::transfer_hopf::{hopf_axis_generator, hopf_axis_invariant, hopf_generator};

fn main() -> rgsym::Result<()> {
    let tol = Tolerance::tight();

    // R = t u d/dx + d/deps moves x and eps, leaves t and u alone
    let hopf = hopf_generator();
    let orbit = integrate_lie(&hopf, &[1.0, 0.0, 0.0, 0.3], 0.5, &tol)?;
    println!("Hopf flow from (t, x, eps, u) = (1, 0, 0, 0.3) by a = 0.5: {:?}", orbit.end());

    // a generator of our own: rotation in the (x, y) plane
    let rotation = Generator::zero(VariableSpace::new(["x", "y"])?)
        .with("x", |p| -p[1])?
        .with("y", |p| p[0])?;
    let quarter = integrate_lie(&rotation, &[1.0, 0.0], std::f64::consts::FRAC_PI_2, &tol)?;
    println!("quarter turn of (1, 0): {:?}", quarter.end());
    println!(
        "group law defect: {:.2e}",
        check_group_law(&rotation, &[0.3, -0.8], 0.4, 1.1, &tol)?
    );
    let circle: Vec<Vec<f64>> = (0..12).map(|k| vec![(k as f64).cos(), (k as f64).sin() * 2.0]).collect();
    println!(
        "radius is invariant: |X r^2| <= {:.2e}",
        invariant_defect(&rotation, |p: &[f64]| p[0] * p[0] + p[1] * p[1], &circle)?
    );

    // J = eps t - 1/u0x is constant along the axis generator
    let pts: Vec<Vec<f64>> = vec![vec![0.5, 0.3, 0.8], vec![2.0, 1.0, 0.2]];
    let d = invariant_defect(&hopf_axis_generator(), |p: &[f64]| hopf_axis_invariant(p[1], p[0], p[2]), &pts)?;
    println!("axis invariant defect: {d:.2e}");

    // u = eps x / (1 + eps t) ... in the u = v/eps normalization, x/(1 + eps t)
    let exact = SolutionSampler::new(&["t", "x", "eps"], &["u"], |q| Some(vec![q[1] / (1.0 + q[2] * q[0])]));
    let wrong = SolutionSampler::new(&["t", "x", "eps"], &["u"], |q| Some(vec![q[1]]));
    let at = [0.5, 1.0, 0.5];
    println!(
        "invariance residual: solution {:.2e}, non-solution {:.2e}",
        invariance_residual(&hopf, &exact, &at)?,
        invariance_residual(&hopf, &wrong, &at)?
    );
    Ok(())
}
