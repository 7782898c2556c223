//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines always print; exits non-zero on any unexpected outcome.

use rgsym::runner::config::{build, Inputs};
use rgsym::runner::report::{Check, Outcome};
use rgsym::runner::run_scenario;
use std::process::Command;
use std::time::{Duration, Instant};

/// Checks that fail for a documented reason: the orbit field satisfies the
/// momentum equation only approximately, so the momentum canonical coordinate
/// stays O(1).
const KNOWN_FAILING: &[&str] = &["beam.canonical.f"];

struct Line {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn outcome(id: &str) -> (Outcome, Duration) {
    // the group suite has no scenario id of its own; it rides on verify-all
    let scenario = (id != "group").then(|| id.to_string());
    let cfg = build(&Inputs {
        scenario,
        ..Inputs::default()
    })
    .expect("defaults build");
    let start = Instant::now();
    let out = run_scenario(id, &cfg).expect("scenario runs");
    (out, start.elapsed())
}

fn prefixed(prefix: &str, out: Outcome) -> Vec<Check> {
    let mut all = Outcome::default();
    all.merge(prefix, out);
    all.checks
}

/// Judges `checks` against the required names and the runtime bound.
fn judge(id: usize, title: &'static str, checks: &[Check], required: &[&str], elapsed: Duration, limit: f64) -> Line {
    let missing: Vec<&str> = required
        .iter()
        .copied()
        .filter(|r| !checks.iter().any(|c| c.name.ends_with(r)))
        .collect();
    let failing: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    let slow = elapsed.as_secs_f64() > limit;
    let mut detail = format!("{} checks", checks.len());
    if !failing.is_empty() {
        detail += &format!(", failing: {}", failing.join(" "));
    }
    if !missing.is_empty() {
        detail += &format!(", missing: {}", missing.join(" "));
    }
    if slow {
        detail += &format!(", over the {limit} s budget");
    }
    Line {
        id,
        title,
        pass: failing.is_empty() && missing.is_empty() && !slow,
        detail,
        elapsed,
    }
}

/// `verify-all` through the binary; returns exit code, failing check names, wall time.
fn verify_all(fast: bool) -> (Option<i32>, Vec<String>, Duration) {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut args = vec!["run", "--scenario", "verify-all", "--output", dir.path().to_str().unwrap()];
    if fast {
        args.push("--fast");
    }
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_rgsym")).args(&args).output().expect("binary runs");
    let elapsed = start.elapsed();
    let failing = String::from_utf8_lossy(&out.stderr)
        .lines()
        .filter_map(|l| l.strip_prefix("FAIL "))
        .map(String::from)
        .collect();
    (out.status.code(), failing, elapsed)
}

fn main() {
    let mut lines = Vec::new();
    let mut unexpected = Vec::new();

    let (out, t) = outcome("transfer");
    let checks = prefixed("transfer", out);
    lines.push(judge(
        1,
        "transfer: generating ODEs, group law, tangency order",
        &checks,
        &["linear.generating_ode", "nonlinear.group_law", "expansion_tangency_order"],
        t,
        1.0,
    ));

    let (out, t) = outcome("hopf");
    let checks = prefixed("hopf", out);
    lines.push(judge(
        2,
        "hopf: oracle agreement, blow-up time, closed form, axis functional",
        &checks,
        &["linear.oracle_agreement", "sine.oracle_agreement", "sine.gradient_blowup", "closed_form", "axis.invariant"],
        t,
        10.0,
    ));

    let (out, t) = outcome("resonance");
    let checks = prefixed("resonance", out);
    lines.push(judge(
        3,
        "resonance: residual convergence, generator invariants, spectral resolution",
        &checks,
        &["cold.convergence_ratio_0", "hot.convergence_ratio_0", "group.invariants", "cold.spectrum_resolution"],
        t,
        60.0,
    ));

    let (out, t) = outcome("chaplygin-soliton");
    let checks = prefixed("chaplygin-soliton", out);
    let (axis, body): (Vec<Check>, Vec<Check>) = checks.into_iter().partition(|c| c.name.contains(".axis."));
    lines.push(judge(
        4,
        "soliton: collapse density, boundary profile, residual, higher symmetry",
        &body,
        &["axis_collapse_density", "boundary_profile", "pde_residual", "liebacklund", "binomial_identity"],
        t,
        30.0,
    ));

    let (out, t5) = outcome("chaplygin-slab");
    let checks = prefixed("chaplygin-slab", out);
    lines.push(judge(
        5,
        "slab: residual, decreasing axis density, time inversion",
        &checks,
        &["pde_residual", "axis_decreasing", "time_inversion_round_trip"],
        t5,
        5.0,
    ));

    lines.push(judge(
        6,
        "axis functional: root vs solution, ODE path",
        &axis,
        &["axis.root_vs_solution", "axis.ode_path"],
        t,
        5.0,
    ));

    let (out, t) = outcome("beam");
    let checks = prefixed("beam", out);
    let line = judge(
        7,
        "beam: blow-up, stationary profile, canonical coordinates, caustic",
        &checks,
        &["axis_blowup", "stationary_profile", "canonical.f", "canonical.g", "caustic"],
        t,
        60.0,
    );
    let beam_failing: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if beam_failing != KNOWN_FAILING || line.detail.contains("missing") {
        unexpected.push(format!("criterion 7: {}", line.detail));
    }
    lines.push(line);

    let (out, t) = outcome("bunch");
    let checks = prefixed("bunch", out);
    lines.push(judge(
        8,
        "bunch: invariants, density law, Monte Carlo oracle, particle number",
        &checks,
        &["j4_constancy", "free.invariant_drift", "free.density_deviation", "free.number", "number_conservation"],
        t,
        120.0,
    ));

    let (out, t) = outcome("group");
    let checks = prefixed("group", out);
    lines.push(judge(
        9,
        "group machinery: group laws and invariance residuals",
        &checks,
        &["law.hopf", "law.beam", "invariance.hopf_sine", "invariance.beam"],
        t,
        f64::INFINITY,
    ));

    let (fast_code, fast_failing, fast_t) = verify_all(true);
    let (full_code, full_failing, full_t) = verify_all(false);
    let within = fast_t.as_secs_f64() <= 300.0 && full_t.as_secs_f64() <= 900.0;
    let line = Line {
        id: 10,
        title: "end to end: verify-all fast and full",
        pass: fast_code == Some(0) && full_code == Some(0) && within,
        detail: format!(
            "fast exit {fast_code:?} in {:.1} s, full exit {full_code:?} in {:.1} s, failing: {}",
            fast_t.as_secs_f64(),
            full_t.as_secs_f64(),
            fast_failing.join(" ")
        ),
        elapsed: fast_t + full_t,
    };
    if fast_failing != KNOWN_FAILING || full_failing != KNOWN_FAILING || !within {
        unexpected.push(format!("criterion 10: {}", line.detail));
    }
    lines.push(line);

    for l in &lines {
        println!(
            "criterion {:>2} {} [{:.2} s] {}: {}",
            l.id,
            if l.pass { "PASS" } else { "FAIL" },
            l.elapsed.as_secs_f64(),
            l.title,
            l.detail
        );
    }
    for l in lines.iter().filter(|l| !l.pass && l.id != 7 && l.id != 10) {
        unexpected.push(format!("criterion {}: {}", l.id, l.detail));
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance results:\n  {}", unexpected.join("\n  "));
        std::process::exit(1);
    }
}
