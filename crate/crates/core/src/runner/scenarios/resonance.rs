use crate::error::{Error, Result};
use crate::group::{group_law_defect, invariance_residual, invariant_defect};
use crate::oracles::{Axis, ResidualReport};
use crate::plasma_resonance::{
    harmonic_spectrum, resonance_at_position, resonance_convergence, resonance_family_point, resonance_fields,
    resonance_generator, resonance_group_map, resonance_pde_residual, resonance_sampler, secondary_fields,
    ResonanceConfig, ResonanceModel,
};
use crate::runner::config::ResonanceParams;
use crate::runner::report::{Check, Outcome, Plot, Table};
use std::f64::consts::{FRAC_PI_2, PI};

/// Scaled units used throughout; carried into every report.
pub const CONVENTION: &str =
    "resonance: scaled units a = Delta = 1, field amplitude eps is the single amplitude, omega_L = omega";

const CENTRE: (f64, f64) = (1.0, 0.3);

fn config(p: &ResonanceParams, model: ResonanceModel) -> Result<ResonanceConfig> {
    let mut c = ResonanceConfig::new(p.eps, model).map_err(|e| Error::Config(format!("resonance: {e}")))?;
    c.theta = p.theta;
    c.light_speed = p.light_speed;
    c.tau_samples = p.tau_samples;
    c.validate().map_err(|e| Error::Config(format!("resonance: {e}")))?;
    Ok(c)
}

fn model(name: &str) -> Result<ResonanceModel> {
    match name {
        "cold" => Ok(ResonanceModel::Cold),
        "hot" => Ok(ResonanceModel::Hot),
        other => Err(Error::Config(format!("unknown resonance model `{other}`"))),
    }
}

pub fn run(p: &ResonanceParams) -> Result<Outcome> {
    if p.refinements < 2 || !(p.step > 0.0) || p.interior < 5 {
        return Err(Error::Config("resonance needs refinements >= 2, step > 0, interior >= 5".into()));
    }
    let mut out = Outcome::default();
    out.conventions.push(CONVENTION.into());
    let mut spectra = Vec::new();
    for name in &p.models {
        let cfg = config(p, model(name)?)?;
        let mut sub = Outcome::default();
        spectra.push((name.clone(), model_checks(&mut sub, &cfg, p)));
        out.merge(name, sub);
    }

    let mut cols = vec!["k".to_string()];
    cols.extend(spectra.iter().map(|(n, _)| format!("amp_{n}")));
    let refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut table = Table::new("resonance_spectrum", &refs);
    for k in 0..p.harmonics {
        let mut row = vec![(k + 1) as f64];
        row.extend(spectra.iter().map(|(_, s)| s.get(k).copied().unwrap_or(f64::NAN)));
        table.push(row);
    }
    let mut plot = Plot::new("resonance_spectrum", "Density harmonics at eta = 0", "harmonic", "amplitude").log_y();
    for (i, (n, _)) in spectra.iter().enumerate() {
        plot = plot.series("resonance_spectrum", 1, i + 2, n);
    }
    out.plots.push(plot);
    out.tables.push(table);

    group_checks(&mut out, p);
    Ok(out)
}

/// Checks for one structure model; returns the harmonic amplitudes at eta = 0.
fn model_checks(out: &mut Outcome, cfg: &ResonanceConfig, p: &ResonanceParams) -> Vec<f64> {
    let name = match cfg.model {
        ResonanceModel::Cold => "cold",
        ResonanceModel::Hot => "hot",
    };
    let steps: Vec<f64> = (0..p.refinements).map(|k| p.step / 2f64.powi(k as i32)).collect();
    let mut report: Option<ResidualReport> = None;
    match resonance_convergence(cfg, CENTRE, &steps, p.interior) {
        Ok((rep, pairs)) => {
            for (k, w) in pairs.windows(2).enumerate() {
                out.check(Check::window(format!("convergence_ratio_{k}"), w[1].1 / w[0].1, 0.2, 0.3));
            }
            report = Some(rep);
        }
        Err(e) => out.check(Check::failed("convergence_ratio", e.to_string())),
    }
    out.residuals.extend(report);

    out.check_with("zero_amplitude_residual", || {
        let mut c = *cfg;
        c.eps = 0.0;
        let r = resonance_pde_residual(&c, Axis::centred(CENTRE.0, p.step, 8)?, Axis::centred(CENTRE.1, p.step, 8)?)?;
        Ok(Check::new("zero_amplitude_residual", r.max_residual, 1e-12))
    });

    let mut amps = Vec::new();
    out.check_with("spectrum_resolution", || {
        let mut fine = *cfg;
        fine.tau_samples = 2 * cfg.tau_samples;
        let a = harmonic_spectrum(cfg, 0.0, p.harmonics)?;
        let b = harmonic_spectrum(&fine, 0.0, p.harmonics)?;
        let d = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        amps = a;
        Ok(Check::new("spectrum_resolution", d, 1e-10)
            .with_note(format!("{} vs {} samples per period", cfg.tau_samples, fine.tau_samples)))
    });
    if cfg.model == ResonanceModel::Cold && amps.len() >= 6 {
        let worst = amps[..6].windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        out.check(Check::new("spectrum_decay", worst.max(0.0), 0.0).with_note(format!("largest step {worst:.3e}")));
    }

    out.check_with("periodicity", || {
        let mut worst: f64 = 0.0;
        for k in 0..16 {
            let (tau, eta) = (0.4 * k as f64, -2.0 + 0.25 * k as f64);
            let a = resonance_fields(cfg, tau, eta)?;
            let b = resonance_fields(cfg, tau + 2.0 * PI, eta)?;
            worst = worst.max((a.p - b.p).abs()).max((a.v - b.v).abs()).max((a.x - b.x).abs());
        }
        Ok(Check::new("periodicity", worst, 1e-12))
    });

    out.check_with("quarter_period_value", || {
        let s = resonance_fields(cfg, FRAC_PI_2, 0.0)?;
        let (f1, _) = cfg.model.structure(0.0)?;
        Ok(Check::compare("quarter_period_value", s.p, -cfg.eps * f1, 1e-14))
    });

    out.check_with("no_incidence_angle", || {
        let mut c = *cfg;
        c.theta = 0.0;
        c.eta_axis = Axis::new(-2.0, 2.0, 41)?;
        c.tau_samples = 32;
        let s = secondary_fields(&c)?;
        let m = s.e_y.iter().chain(s.v_y.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Check::new("no_incidence_angle", m, 0.0))
    });

    let mut slice = Table::new(&format!("resonance_{name}_secondary"), &["eta", "E_y", "V_y", "B_z", "n"]);
    match secondary_fields(cfg) {
        Ok(s) => {
            for (k, &eta) in s.eta.iter().enumerate() {
                slice.push(vec![eta, s.e_y[[0, k]], s.v_y[[0, k]], s.b_z[[0, k]], s.density[[0, k]]]);
            }
            out.check(Check::new("secondary_jacobian_positive", (-s.min_jacobian()).max(0.0), 0.0));
        }
        Err(e) => out.check(Check::failed("secondary_jacobian_positive", e.to_string())),
    }
    out.plots.push(
        Plot::new(&slice.name, &format!("Secondary fields at tau = 0, {name} model"), "eta", "field")
            .series(&slice.name, 1, 2, "E_y")
            .series(&slice.name, 1, 3, "V_y")
            .series(&slice.name, 1, 4, "B_z"),
    );
    out.tables.push(slice);

    let mut fields = Table::new(&format!("resonance_{name}_fields"), &["x", "v_tau0", "p_tau0", "v_tau1.571", "p_tau1.571"]);
    for k in 0..=120 {
        let x = -3.0 + 6.0 * k as f64 / 120.0;
        let mut row = vec![x];
        for tau in [0.0, FRAC_PI_2] {
            match resonance_at_position(cfg, tau, x) {
                Ok(s) => row.extend([s.v, s.p]),
                Err(_) => row.extend([f64::NAN, f64::NAN]),
            }
        }
        fields.push(row);
    }
    out.plots.push(
        Plot::new(&fields.name, &format!("Resonance fields, {name} model"), "x", "field")
            .series(&fields.name, 1, 2, "v, tau = 0")
            .series(&fields.name, 1, 3, "p, tau = 0")
            .series(&fields.name, 1, 4, "v, tau = pi/2")
            .series(&fields.name, 1, 5, "p, tau = pi/2"),
    );
    out.tables.push(fields);
    amps
}

fn group_checks(out: &mut Outcome, p: &ResonanceParams) {
    let cfg = match config(p, ResonanceModel::Cold) {
        Ok(c) => c,
        Err(e) => return out.check(Check::failed("group", e.to_string())),
    };
    let gen = resonance_generator(cfg.omega);
    out.check_with("group.invariants", || {
        let mut pts = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                pts.push(resonance_family_point(&cfg, 0.9 * i as f64, -2.0 + 0.8 * j as f64, 0.1 + 0.1 * i as f64)?);
            }
        }
        let w2 = cfg.omega * cfg.omega;
        let mut worst: f64 = 0.0;
        for k in [0usize, 3, 4] {
            worst = worst.max(invariant_defect(&gen, |q: &[f64]| q[k], &pts)?);
        }
        // label recovered from position: x + p a / omega^2
        worst = worst.max(invariant_defect(&gen, |q: &[f64]| q[1] + q[4] * q[2] / w2, &pts)?);
        Ok(Check::new("group.invariants", worst, 1e-8))
    });
    let map = resonance_group_map(cfg.omega);
    out.check_with("group.law", || {
        let mut worst: f64 = 0.0;
        for k in 0..10 {
            let start = resonance_family_point(&cfg, 0.6 * k as f64, 0.5 - 0.1 * k as f64, 0.2)?;
            worst = worst.max(group_law_defect(&map, &start, 0.05 * k as f64, 0.3 - 0.02 * k as f64));
        }
        Ok(Check::new("group.law", worst, 1e-10))
    });
    out.check_with("group.sampler_invariance", || {
        let (tau, eta, a) = (0.3, 0.2, 0.4);
        let q = resonance_family_point(&cfg, tau, eta, a)?;
        let r = invariance_residual(&gen, &resonance_sampler(&cfg), &[tau, q[1], a])?;
        Ok(Check::new("group.sampler_invariance", r, 1e-6))
    });
    out.check_with("cold_wavebreaking_margin", || {
        let mut c = ResonanceConfig::cold(0.9)?;
        c.eta_axis = Axis::new(-1.0, 1.0, 201)?;
        let s = secondary_fields(&c)?;
        let mut analytic = f64::INFINITY;
        for &eta in &s.eta {
            let (d1, d2) = c.model.structure_slope(eta)?;
            analytic = analytic.min(1.0 - c.eps * d1.hypot(d2));
        }
        Ok(Check::compare("cold_wavebreaking_margin", s.min_jacobian(), analytic, 1e-3))
    });
}
