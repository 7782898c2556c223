//! Driving a scenario from code: layered configuration, execution and the
//! report written to disk.

use rgsym::runner::{config, execute};

fn main() -> rgsym::Result<()> {
    let out = std::env::temp_dir().join("rgsym-example");
    let inputs = config::Inputs {
        scenario: Some("hopf".into()),
        output: Some(out.display().to_string()),
        fast: true,
        overrides: vec!["--profile=sine".into(), "--eps".into(), "0.5".into()],
        ..config::Inputs::default()
    };
    let cfg = config::build(&inputs)?;
    let report = execute(&cfg)?;
    for c in &report.checks {
        println!("{:<40} {:<5} defect {:.2e} (tolerance {:.1e})", c.name, if c.pass { "pass" } else { "FAIL" }, c.defect, c.tolerance);
    }
    for s in &report.singularities {
        println!("{}: predicted {:.6}, detected {:.6}", s.name, s.predicted, s.detected);
    }
    println!("artifacts in {}", out.display());
    Ok(())
}
