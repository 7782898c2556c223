//! Particle transfer through an absorbing layer: the improved solution next to
//! the first-order expansion it is built from, for both absorption laws.

use rgsym::group::{check_group_law, integrate_lie};
use rgsym::numerics::Tolerance;
use rgsym::transfer_hopf::{transfer_generator, transfer_pt, transfer_rg, TransferConfig};

fn main() -> rgsym::Result<()> {
    let linear = TransferConfig::linear(1.0, 1.0)?;
    let nonlinear = TransferConfig::nonlinear(1.0, 1.0)?;

    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "depth", "lin RG", "lin PT", "nl RG", "nl PT");
    for k in 0..=8 {
        let lambda = 0.25 * k as f64;
        println!(
            "{lambda:>6.2} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            transfer_rg(&linear, lambda),
            transfer_pt(&linear, lambda),
            transfer_rg(&nonlinear, lambda),
            transfer_pt(&nonlinear, lambda),
        );
    }

    // the closed form is the flow of the generator started at the boundary
    let tol = Tolerance::tight();
    let orbit = integrate_lie(&transfer_generator(&nonlinear), &[0.0, 1.0], 3.0, &tol)?;
    println!("\nflow to depth 3: alpha = {:.12} (closed form 0.25)", orbit.end()[1]);

    let defect = check_group_law(&transfer_generator(&linear), &[0.0, 2.0], 0.4, 0.7, &tol)?;
    println!("group law defect, linear absorption: {defect:.2e}");
    Ok(())
}
