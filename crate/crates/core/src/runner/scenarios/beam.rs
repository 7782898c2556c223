use crate::beam_focusing::{
    beam_axis_density, beam_caustic_time, beam_fan, beam_field, beam_singularity_time, canonical_coordinates,
    integrate_beam_orbit_until, BeamConfig, BeamProfile, OrbitStop,
};
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::oracles::{pde_residual, Axis, FieldSample};
use crate::runner::config::BeamParams;
use crate::runner::report::{Check, Outcome, Plot, SingularityRecord, Table};
use ndarray::Array2;
use rayon::prelude::*;

const FAN_REACH: f64 = 3.0;

fn tol() -> Tolerance {
    Tolerance {
        abs_tol: 1e-12,
        rel_tol: 1e-11,
        max_iter: 200,
    }
}

pub fn run(p: &BeamParams) -> Result<Outcome> {
    if p.cases.is_empty() || p.residual_grid < 5 || !(p.canonical_step > 0.0) {
        return Err(Error::Config("beam needs cases, residual_grid >= 5 and canonical_step > 0".into()));
    }
    let configs = p
        .cases
        .iter()
        .map(|&[a, b]| BeamConfig::gaussian(a, b).map_err(|e| Error::Config(format!("beam case ({a}, {b}): {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Outcome::default();
    let tol = tol();

    for cfg in &configs {
        let label = format!("case_{}_{}", cfg.alpha, cfg.beta);
        let predicted = match cfg.predicted_singularity() {
            Ok(t) => t,
            Err(e) => {
                out.check(Check::failed(format!("{label}.singularity"), e.to_string()));
                continue;
            }
        };
        let mut records = Vec::new();
        out.check_with(&format!("{label}.axis_blowup"), || {
            let t = beam_singularity_time(cfg, &tol)?;
            let rec = SingularityRecord::new(format!("{label}.axis_blowup"), predicted, t);
            let c = Check::new(format!("{label}.axis_blowup"), rec.relative_error.abs(), 0.02);
            records.push(rec);
            Ok(c)
        });
        out.check_with(&format!("{label}.caustic"), || {
            let t = beam_caustic_time(cfg, FAN_REACH, 1.2 * predicted, &tol)?;
            let rec = SingularityRecord::new(format!("{label}.caustic"), predicted, t);
            let c = Check::new(format!("{label}.caustic"), rec.relative_error.abs(), 0.05);
            records.push(rec);
            Ok(c)
        });
        out.singularities.extend(records);
        out.check_with(&format!("{label}.jacobian_before_collapse"), || {
            let fan = beam_fan(cfg, 0.95 * predicted, FAN_REACH, 65, &tol)?;
            Ok(Check::at_least(format!("{label}.jacobian_before_collapse"), fan.min_jacobian(), 1e-12)
                .with_note("fan at 0.95 t_sing"))
        });
        out.check_with(&format!("{label}.scale_identity"), || {
            let doubled = BeamConfig::gaussian(2.0 * cfg.alpha, 2.0 * cfg.beta)?;
            let ratio = beam_singularity_time(&doubled, &tol)? / beam_singularity_time(cfg, &tol)?;
            let expected = 0.5f64.sqrt();
            Ok(Check::new(format!("{label}.scale_identity"), (ratio / expected - 1.0).abs(), 0.01).with_note(format!("ratio {ratio:.6}")))
        });
    }

    out.check_with("stationary_profile", || {
        let cfg = BeamConfig::new(1.0, 0.0, 1, BeamProfile::Binomial { s0: 1.0, s2: 0.0, n0: 1.0 })?;
        let mut worst: f64 = 0.0;
        for chi0 in [0.0, 0.4, 1.3] {
            let o = integrate_beam_orbit_until(&cfg, chi0, 2.0, &tol, OrbitStop::None)?;
            let e = o.end();
            worst = worst.max((e[1] - chi0).abs()).max((e[3] - 1.0).abs());
        }
        Ok(Check::new("stationary_profile", worst, 1e-10))
    });

    let main = configs[0];
    let t_sing = main.predicted_singularity().unwrap_or(1.0);
    out.check_with("axis_orbit", || {
        let mut worst: f64 = 0.0;
        for k in 1..=8 {
            let t = 0.1 * k as f64 * t_sing;
            let o = integrate_beam_orbit_until(&main, 0.0, 100.0 * t_sing, &tol, OrbitStop::Time(t))?;
            let hit = o.terminal_event.as_ref().ok_or_else(|| Error::NoSingularity("axis orbit stopped early".into()))?;
            worst = worst.max((hit.state[3] - beam_axis_density(&main, t)?).abs());
        }
        Ok(Check::new("axis_orbit", worst, 1e-6))
    });
    out.check_with("axis_value_half_time", || {
        let f = beam_field(&main, 0.5 * t_sing, &[0.0], &tol)?;
        Ok(Check::compare("axis_value_half_time", f.n[0], 4.0 / 3.0, 1e-6))
    });
    out.check_with("parity", || {
        let xs = [-1.2, -0.6, -0.2, 0.2, 0.6, 1.2];
        let f = beam_field(&main, 0.5 * t_sing, &xs, &tol)?;
        let mut worst: f64 = 0.0;
        for k in 0..3 {
            worst = worst.max((f.n[k] - f.n[5 - k]).abs()).max((f.v[k] + f.v[5 - k]).abs());
        }
        Ok(Check::new("parity", worst, 1e-10))
    });

    canonical(&mut out, &main, t_sing, p);
    residual(&mut out, &main, t_sing, p);

    let mut axis = Table::new("beam_axis", &["t", "n_axis"]);
    for k in 0..=60 {
        let t = 0.98 * t_sing * k as f64 / 60.0;
        axis.push(vec![t, beam_axis_density(&main, t).unwrap_or(f64::NAN)]);
    }
    out.plots.push(
        Plot::new("beam_axis", "Axis intensity", "t", "n(t,0)")
            .series("beam_axis", 1, 2, "orbit")
            .marker(t_sing, "t_sing")
            .log_y(),
    );
    out.tables.push(axis);

    let xs: Vec<f64> = (0..=40).map(|k| -2.0 + 0.1 * k as f64).collect();
    let times = [0.0, 0.3, 0.5, 0.7];
    let mut cols = vec!["x".to_string()];
    cols.extend(times.iter().map(|f| format!("n_t{:.3}", f * t_sing)));
    let refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut fields = Table::new("beam_fields", &refs);
    let columns: Vec<Vec<f64>> = times
        .iter()
        .map(|f| beam_field(&main, f * t_sing, &xs, &tol).map(|b| b.n).unwrap_or_else(|_| vec![f64::NAN; xs.len()]))
        .collect();
    for (k, &x) in xs.iter().enumerate() {
        let mut row = vec![x];
        row.extend(columns.iter().map(|c| c[k]));
        fields.push(row);
    }
    let mut plot = Plot::new("beam_fields", "Beam intensity", "x", "n");
    for (k, c) in cols.iter().enumerate().skip(1) {
        plot = plot.series("beam_fields", 1, k + 1, c);
    }
    out.plots.push(plot);
    out.tables.push(fields);
    Ok(out)
}

/// Canonical coordinates of the collimated-beam symmetry on the computed field.
fn canonical(out: &mut Outcome, cfg: &BeamConfig, t_sing: f64, p: &BeamParams) {
    let mut f_worst: f64 = 0.0;
    let mut g_worst: f64 = 0.0;
    for &frac in &p.canonical_fractions {
        for &x in &p.canonical_x {
            match canonical_coordinates(cfg, frac * t_sing, x, p.canonical_step, &tol()) {
                Ok((f, g)) => {
                    f_worst = f_worst.max(f.abs());
                    g_worst = g_worst.max(g.abs());
                }
                Err(e) => return out.check(Check::failed("canonical", e.to_string())),
            }
        }
    }
    let note = format!("step {}, |x| >= 0.05", p.canonical_step);
    out.check(Check::new("canonical.f", f_worst, 1e-4).with_note(note.clone()));
    out.check(Check::new("canonical.g", g_worst, 1e-4).with_note(note));
}

/// Residual of the beam equations on the orbit field; recorded, not asserted.
fn residual(out: &mut Outcome, cfg: &BeamConfig, t_sing: f64, p: &BeamParams) {
    let n = p.residual_grid;
    let r = (|| -> Result<_> {
        let ta = Axis::new(0.0, 0.3 * t_sing, n)?;
        let xa = Axis::new(0.1, 1.5, n)?;
        let xs = xa.points();
        let rows = (0..n)
            .into_par_iter()
            .map(|i| beam_field(cfg, ta.at(i), &xs, &tol()))
            .collect::<Result<Vec<_>>>()?;
        let mut v = Array2::zeros((n, n));
        let mut dens = Array2::zeros((n, n));
        for (i, row) in rows.iter().enumerate() {
            for j in 0..n {
                v[[i, j]] = row.v[j];
                dens[[i, j]] = row.n[j];
            }
        }
        let field = FieldSample {
            t: ta,
            x: xa,
            fields: vec![("v".into(), v), ("n".into(), dens)],
        };
        let mut rep = pde_residual(&cfg.equation(), &field)?;
        rep.notes = "beam equations on the orbit field up to 0.3 t_sing; approximate symmetry, recorded only".into();
        Ok(rep)
    })();
    match r {
        Ok(rep) => out.residuals.push(rep),
        Err(e) => out.check(Check::failed("beam_residual", e.to_string())),
    }
}
