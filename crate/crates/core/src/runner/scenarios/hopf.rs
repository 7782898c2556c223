use crate::error::{Error, Result};
use crate::oracles::{local_residual, pde_residual, Axis, Equation, FieldSample};
use crate::runner::config::HopfParams;
use crate::runner::report::{Check, Outcome, Plot, SingularityRecord, Table};
use crate::transfer_hopf::{
    hopf_axis_invariant, hopf_axis_slope, hopf_characteristics_oracle, hopf_gradient_blowup, hopf_max_slope,
    hopf_pt, hopf_singularity_time, hopf_solve, HopfConfig, HopfProfile, TabulatedProfile,
};
use rayon::prelude::*;
use std::path::Path;
use std::sync::Arc;

fn profiles(p: &HopfParams) -> Result<Vec<HopfProfile>> {
    Ok(match p.profile.as_str() {
        "linear" => vec![HopfProfile::Linear],
        "sine" => vec![HopfProfile::Sine],
        "both" => vec![HopfProfile::Linear, HopfProfile::Sine],
        "tabulated" => {
            if p.table.is_empty() {
                return Err(Error::Config("hopf.profile = tabulated needs hopf.table".into()));
            }
            let t = TabulatedProfile::load(Path::new(&p.table)).map_err(|e| Error::Config(format!("{}: {e}", p.table)))?;
            vec![HopfProfile::Tabulated(Arc::new(t))]
        }
        other => return Err(Error::Config(format!("unknown hopf profile `{other}`"))),
    })
}

pub fn run(p: &HopfParams) -> Result<Outcome> {
    if !(p.eps > 0.0) || p.grid < 8 {
        return Err(Error::Config("hopf needs eps > 0 and grid >= 8".into()));
    }
    let mut out = Outcome::default();
    for profile in profiles(p)? {
        let name = profile.name();
        let base = HopfConfig::new(profile, p.eps).map_err(|e| Error::Config(e.to_string()))?;
        let cfg = base.clone().with_grid(
            Axis::new(base.t_axis.lo, base.t_axis.hi, p.grid)?,
            Axis::new(base.x_axis.lo, base.x_axis.hi, p.grid)?,
        );
        let mut sub = Outcome::default();
        profile_checks(&mut sub, &cfg, p);
        out.merge(name, sub);
    }
    if p.profile == "linear" || p.profile == "both" {
        axis_checks(&mut out, p.eps);
    }
    Ok(out)
}

fn profile_checks(out: &mut Outcome, cfg: &HopfConfig, p: &HopfParams) {
    let name = cfg.profile.name();
    let (ta, xa) = (cfg.t_axis, cfg.x_axis);
    let xs = xa.points();

    out.check_with("oracle_agreement", || {
        let rows: Vec<Result<f64>> = (0..ta.n)
            .into_par_iter()
            .map(|i| {
                let t = ta.at(i);
                let oracle = hopf_characteristics_oracle(cfg, t, &xs)?;
                let mut worst: f64 = 0.0;
                for (x, o) in xs.iter().zip(oracle) {
                    worst = worst.max((hopf_solve(cfg, t, *x)? - o).abs());
                }
                Ok(worst)
            })
            .collect();
        let worst = rows.into_iter().try_fold(0f64, |m, r| r.map(|w| m.max(w)))?;
        Ok(Check::new("oracle_agreement", worst, 1e-6).with_note(format!("{}x{} grid", ta.n, xa.n)))
    });

    let eq = Equation::Hopf { eps: cfg.eps };
    let h = p.residual_step;
    out.check_with("local_pde_residual", || {
        let mut worst: f64 = 0.0;
        for i in (1..ta.n - 1).step_by((ta.n / 8).max(1)) {
            for j in (1..xa.n - 1).step_by((xa.n / 8).max(1)) {
                let r = local_residual(&eq, |t, x| Ok(vec![hopf_solve(cfg, t, x)?]), ta.at(i), xa.at(j), h, h)?;
                worst = worst.max(r);
            }
        }
        Ok(Check::new("local_pde_residual", worst, 1e-5).with_note(format!("step {h}")))
    });

    let mut residual = None;
    out.check_with("residual_convergence_ratio", || {
        let (t0, t1) = (0.1 * ta.hi, 0.5 * ta.hi);
        let (x0, x1) = (-1.0f64.max(xa.lo), 1.0f64.min(xa.hi));
        let mut reports = Vec::new();
        // same interior on both grids, ghost layers outside it
        for n in [17usize, 33] {
            let (ht, hx) = ((t1 - t0) / (n - 1) as f64, (x1 - x0) / (n - 1) as f64);
            let ta = Axis::centred(0.5 * (t0 + t1), ht, n)?;
            let xa = Axis::centred(0.5 * (x0 + x1), hx, n)?;
            let f = FieldSample::from_fn(ta, xa, &["u"], |t, x| {
                Ok(vec![hopf_solve(cfg, t, x)?])
            })?;
            reports.push(pde_residual(&eq, &f)?);
        }
        let ratio = reports[1].max_residual / reports[0].max_residual;
        let mut fine = reports.pop().expect("two reports");
        fine.notes = format!("{name} profile; max residual ratio on halving {ratio:.4}");
        fine.convergence_order = Some(ratio.log2().abs());
        residual = Some(fine);
        Ok(Check::window("residual_convergence_ratio", ratio, 0.2, 0.3))
    });
    out.residuals.extend(residual);

    let t_sing = hopf_singularity_time(cfg);
    if t_sing.is_finite() {
        let (lo, hi) = match cfg.profile.x_domain() {
            (a, b) if a.is_finite() => (a, b),
            _ => (-std::f64::consts::PI, std::f64::consts::PI),
        };
        let mut record = None;
        out.check_with("gradient_blowup", || {
            let detected = hopf_gradient_blowup(cfg, p.blowup_threshold, 1.5 * t_sing, lo, hi)?
                .ok_or_else(|| Error::NoSingularity("slope stayed below the threshold".into()))?;
            let rec = SingularityRecord::new("gradient_blowup", t_sing, detected);
            let rel = rec.relative_error.abs();
            record = Some(rec);
            Ok(Check::new("gradient_blowup", rel, 0.01).with_note(format!("threshold {}", p.blowup_threshold)))
        });
        out.singularities.extend(record);

        let mut slope = Table::new(&format!("hopf_{name}_max_slope"), &["t", "max_abs_ux"]);
        for k in 0..=40 {
            let t = 0.99 * t_sing * k as f64 / 40.0;
            if let Ok(s) = hopf_max_slope(cfg, t, lo, hi) {
                slope.push(vec![t, s]);
            }
        }
        out.plots.push(
            Plot::new(&slope.name, "Steepest gradient against t", "t", "max |u_x|")
                .series(&slope.name, 1, 2, name)
                .marker(t_sing, "t_sing")
                .log_y(),
        );
        out.tables.push(slope);
    } else {
        out.check_with("closed_form", || {
            let mut worst: f64 = 0.0;
            for i in 0..ta.n {
                for &x in &xs {
                    let t = ta.at(i);
                    worst = worst.max((hopf_solve(cfg, t, x)? - x / (1.0 + cfg.eps * t)).abs());
                }
            }
            Ok(Check::new("closed_form", worst, 1e-12))
        });
    }

    // one spot value with its expansion
    let (ts, xspot) = (0.1 * ta.hi, 0.5);
    out.check_with("spot_vs_oracle", || {
        let rg = hopf_solve(cfg, ts, xspot)?;
        let o = hopf_characteristics_oracle(cfg, ts, &[xspot])?[0];
        Ok(Check::compare("spot_vs_oracle", rg, o, 1e-8).with_pt(hopf_pt(cfg, ts, xspot)))
    });

    let fractions = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut cols = vec!["x".to_string()];
    cols.extend(fractions.iter().map(|f| format!("u_t{:.3}", f * ta.hi)));
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut field = Table::new(&format!("hopf_{name}_fields"), &col_refs);
    for &x in &xs {
        let mut row = vec![x];
        for f in fractions {
            row.push(hopf_solve(cfg, f * ta.hi, x).unwrap_or(f64::NAN));
        }
        field.push(row);
    }
    let mut plot = Plot::new(&field.name, &format!("u against x, {name} profile"), "x", "u");
    for (k, c) in cols.iter().enumerate().skip(1) {
        plot = plot.series(&field.name, 1, k + 1, c);
    }
    out.plots.push(plot);
    out.tables.push(field);
}

fn axis_checks(out: &mut Outcome, eps: f64) {
    let cfg = match HopfConfig::new(HopfProfile::Linear, eps) {
        Ok(c) => c,
        Err(e) => return out.check(Check::failed("axis", e.to_string())),
    };
    out.check_with("axis.slope_vs_difference", || {
        let mut worst: f64 = 0.0;
        for k in 0..=20 {
            let t = 2.0 * k as f64 / 20.0;
            let h = 1e-4;
            let d = (hopf_solve(&cfg, t, h)? - hopf_solve(&cfg, t, -h)?) / (2.0 * h);
            worst = worst.max((d - hopf_axis_slope(eps, t)).abs());
        }
        Ok(Check::new("axis.slope_vs_difference", worst, 1e-6))
    });
    let worst = (0..=50)
        .map(|k| {
            let t = 5.0 * k as f64 / 50.0;
            (hopf_axis_invariant(eps, t, hopf_axis_slope(eps, t)) + 1.0).abs()
        })
        .fold(0.0, f64::max);
    out.check(Check::new("axis.invariant", worst, 1e-10));
    let mut table = Table::new("hopf_axis_slope", &["t", "u0x", "invariant"]);
    for k in 0..=50 {
        let t = 5.0 * k as f64 / 50.0;
        let s = hopf_axis_slope(eps, t);
        table.push(vec![t, s, hopf_axis_invariant(eps, t, s)]);
    }
    out.plots.push(Plot::new("hopf_axis_slope", "Axis slope", "t", "u_x(t,0)").series("hopf_axis_slope", 1, 2, "u0x"));
    out.tables.push(table);
}
