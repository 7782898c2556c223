use super::flow_tol;
use crate::error::{Error, Result};
use crate::group::{group_law_defect, integrate_lie};
use crate::numerics::{fit_slope, stencil_step};
use crate::runner::config::TransferParams;
use crate::runner::report::{Check, Outcome, Plot, Table};
use crate::transfer_hopf::{transfer_generator, transfer_map, transfer_pt, transfer_rg, TransferConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run(p: &TransferParams, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let branches = [
        ("linear", TransferConfig::new(p.alpha0, p.nu, 0.0, p.depth_max)),
        ("nonlinear", TransferConfig::new(p.alpha0, 0.0, p.beta, p.depth_max)),
    ];
    let mut table = Table::new("transfer_profiles", &["lambda", "rg_linear", "pt_linear", "rg_nonlinear", "pt_nonlinear"]);
    let mut configs = Vec::new();
    for (name, cfg) in branches {
        match cfg {
            Ok(cfg) => {
                branch(&mut out, name, &cfg, p.samples, seed);
                configs.push(cfg);
            }
            Err(e) => return Err(Error::Config(format!("transfer: {e}"))),
        }
    }
    if configs.len() == 2 {
        for k in 0..=100 {
            let l = p.depth_max * k as f64 / 100.0;
            table.push(vec![
                l,
                transfer_rg(&configs[0], l),
                transfer_pt(&configs[0], l),
                transfer_rg(&configs[1], l),
                transfer_pt(&configs[1], l),
            ]);
        }
        out.tables.push(table);
        out.plots.push(
            Plot::new("transfer_profiles", "Particle number against depth", "lambda", "A")
                .series("transfer_profiles", 1, 2, "improved, linear")
                .series("transfer_profiles", 1, 3, "expansion, linear")
                .series("transfer_profiles", 1, 4, "improved, nonlinear")
                .series("transfer_profiles", 1, 5, "expansion, nonlinear"),
        );
    }

    // fixed values
    let spot = |a: f64, nu: f64, beta: f64| TransferConfig::new(a, nu, beta, 10.0);
    out.check_with("spot.nonlinear_depth3", || {
        Ok(Check::compare("spot.nonlinear_depth3", transfer_rg(&spot(1.0, 0.0, 1.0)?, 3.0), 0.25, 1e-15))
    });
    out.check_with("spot.linear_ln4", || {
        Ok(Check::compare("spot.linear_ln4", transfer_rg(&spot(2.0, 0.5, 0.0)?, 4f64.ln()), 1.0, 1e-14))
    });
    out.check_with("spot.expansion_breakdown", || {
        Ok(Check::compare("spot.expansion_breakdown", transfer_pt(&spot(1.0, 0.0, 1.0)?, 2.0), -1.0, 1e-15))
    });
    Ok(out)
}

fn branch(out: &mut Outcome, name: &str, cfg: &TransferConfig, samples: usize, seed: u64) {
    // generating ODE by central differences
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let l = 0.05 + (cfg.depth_max - 0.1) * k as f64 / (samples.max(2) - 1) as f64;
        let h = stencil_step(l);
        let d = (transfer_rg(cfg, l + h) - transfer_rg(cfg, l - h)) / (2.0 * h);
        worst = worst.max((d - cfg.rate(transfer_rg(cfg, l))).abs());
    }
    out.check(Check::new(format!("{name}.generating_ode"), worst, 1e-8));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut law: f64 = 0.0;
    for _ in 0..samples {
        let alpha = rng.gen_range(0.1..3.0);
        let (l1, l2) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let d = group_law_defect(|q, l| vec![transfer_map(cfg, q[0], l)], &[alpha], l1, l2);
        law = law.max(d);
    }
    out.check(Check::new(format!("{name}.group_law"), law, 1e-10));

    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 0..9 {
        let l = 10f64.powf(-4.0 + 2.0 * k as f64 / 8.0);
        xs.push(l.ln());
        ys.push((transfer_rg(cfg, l) - transfer_pt(cfg, l)).abs().ln());
    }
    out.check(Check::window(format!("{name}.expansion_tangency_order"), fit_slope(&xs, &ys), 1.9, 2.1));

    let depth = cfg.depth_max.min(2.0);
    out.check_with(&format!("{name}.lie_flow"), || -> Result<Check> {
        let orbit = integrate_lie(&transfer_generator(cfg), &[0.0, cfg.alpha0], depth, &flow_tol())?;
        Ok(Check::compare(format!("{name}.lie_flow"), orbit.end()[1], transfer_rg(cfg, depth), 1e-8)
            .with_pt(transfer_pt(cfg, depth)))
    });
}
