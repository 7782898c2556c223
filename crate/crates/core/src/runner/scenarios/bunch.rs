use crate::error::{Error, Result};
use crate::group::invariant_defect;
use crate::plasma_bunch::{
    bunch_generator, bunch_invariant, characteristics_oracle, charge_density, density_evolution, density_generator,
    energy_spectrum, initial_column, rg_n_invariants, total_number, BunchConfig, Distribution, OracleOptions,
    OracleResult, Potential, Species,
};
use crate::runner::config::BunchParams;
use crate::runner::report::{Check, Outcome, Plot, Table};
use std::f64::consts::PI;

const HALF_WIDTH: f64 = 12.0;

/// Unit-temperature Maxwellian test species with `e/m = 1`.
fn probe(omega: f64, potential: Potential) -> Result<BunchConfig> {
    let f0 = Distribution::Maxwellian {
        amplitude: 1.0 / (2.0 * PI).sqrt(),
        temperature: 1.0,
    };
    BunchConfig::new(vec![Species::new("probe", 1.0, 1.0, f0)?], omega, potential)
}

pub fn run(p: &BunchParams, seed: u64) -> Result<Outcome> {
    let pair = BunchConfig::isothermal_pair(p.theta_e, p.theta_i, p.ion_charge, p.ion_mass)
        .map_err(|e| Error::Config(format!("bunch species: {e}")))?;
    if p.particles == 0 || p.ion_particles == 0 || p.bins == 0 || !(p.t_max > 0.0) {
        return Err(Error::Config("bunch needs particles, bins and t_max > 0".into()));
    }
    let mut out = Outcome::default();
    let species: Vec<usize> = (0..pair.species.len()).collect();

    out.check_with("quasineutrality", || {
        let mut worst: f64 = 0.0;
        for t in [0.0, 0.5, 1.0, 5.0, 30.0] {
            for k in -8..=8 {
                worst = worst.max(charge_density(&pair, t, 0.5 * k as f64)?.abs());
            }
        }
        Ok(Check::new("quasineutrality", worst, 1e-8))
    });

    out.check_with("j4_constancy", || {
        let mut worst: f64 = 0.0;
        for &s in &species {
            for j3 in [-1.5, -0.4, 0.0, 0.7, 2.0] {
                let n0 = initial_column(&pair, s, j3)?;
                for t in [0.0, 1.0, 2.0] {
                    let x = j3 * pair.stretch(t);
                    let (_, j4) = rg_n_invariants(&pair, t, x, density_evolution(&pair, s, t, x)?);
                    worst = worst.max((j4 - n0).abs());
                }
            }
        }
        Ok(Check::new("j4_constancy", worst, 1e-10))
    });

    out.check_with("half_density_at_root3", || {
        let unit = BunchConfig::new(pair.species.clone(), 1.0, pair.potential)?;
        let n = density_evolution(&unit, 0, 3f64.sqrt(), 0.0)?;
        Ok(Check::compare("half_density_at_root3", n, 0.5 * initial_column(&unit, 0, 0.0)?, 1e-12))
    });

    out.check_with("number_conservation", || {
        let mut worst: f64 = 0.0;
        for &s in &species {
            let n0 = total_number(&pair, s, 0.0, HALF_WIDTH, 2001)?;
            for t in [1.0, 3.0] {
                worst = worst.max((total_number(&pair, s, t, HALF_WIDTH, 2001)? / n0 - 1.0).abs());
            }
        }
        Ok(Check::new("number_conservation", worst, 1e-8))
    });

    out.check_with("self_similarity", || {
        let mut worst: f64 = 0.0;
        for &s in &species {
            for t in [0.5, 1.0, 2.0, 4.0] {
                let st = pair.stretch(t);
                for k in -20..=20 {
                    let xp = 0.15 * k as f64;
                    let scaled = density_evolution(&pair, s, t, xp * st)? * st;
                    worst = worst.max((scaled - initial_column(&pair, s, xp)?).abs());
                }
            }
        }
        Ok(Check::new("self_similarity", worst, 1e-10))
    });

    let opts = |particles: usize, t_max: f64| OracleOptions {
        particles,
        tracked: p.tracked,
        t_max,
        bins: p.bins,
        seed,
        ..OracleOptions::default()
    };

    let free = probe(1.0, Potential::Zero)?;
    let runs = [
        ("free", &free, 0, "bunch_free_density", "Free expansion", p.particles),
        ("ion", &pair, 1, "bunch_ion_density", "Ion expansion", p.ion_particles),
    ];
    for (label, cfg, s, table, title, particles) in runs {
        match characteristics_oracle(cfg, s, &opts(particles, p.t_max)) {
            Ok(r) => {
                oracle_checks(&mut out, label, &r);
                out.tables.push(density_table(table, &r));
                out.plots.push(density_plot(table, title));
            }
            Err(e) => out.check(Check::failed(format!("{label}.oracle"), e.to_string())),
        }
    }

    out.check_with("well.invariant_drift", || {
        let well = probe(1.0, Potential::Well { depth: 1.0, width: 1.0 })?;
        let tracked = p.tracked.max(1);
        let o = OracleOptions {
            particles: tracked,
            tracked,
            t_max: 5.0,
            bins: 16,
            seed,
            ..OracleOptions::default()
        };
        let r = characteristics_oracle(&well, 0, &o)?;
        Ok(Check::new("well.invariant_drift", r.max_invariant_drift, 1e-6).with_note(format!("{} trajectories to t = 5", r.particles)))
    });

    generator_checks(&mut out, &pair);
    spectrum(&mut out, &pair)?;
    Ok(out)
}

fn oracle_checks(out: &mut Outcome, label: &str, r: &OracleResult) {
    let note = format!("{} particles, {} bins, t = {}", r.particles, r.empirical.len(), r.t_max);
    out.check(Check::new(format!("{label}.density_deviation"), r.max_relative_deviation, 0.03).with_note(note));
    out.check(Check::compare(format!("{label}.number"), r.number_ratio, 1.0, 0.01));
    out.check(Check::new(format!("{label}.invariant_drift"), r.max_invariant_drift, 1e-6));
    out.check(Check::new(format!("{label}.self_similarity"), r.self_similarity_deviation, 0.03));
}

fn density_table(name: &str, r: &OracleResult) -> Table {
    let mut t = Table::new(name, &["x", "empirical", "predicted"]);
    for (k, e) in r.bin_edges.windows(2).enumerate() {
        t.push(vec![0.5 * (e[0] + e[1]), r.empirical[k], r.predicted[k]]);
    }
    t
}

fn density_plot(name: &str, title: &str) -> Plot {
    Plot::new(name, title, "x", "n")
        .series(name, 1, 2, "particles")
        .series(name, 1, 3, "self-similar law")
}

fn generator_checks(out: &mut Outcome, pair: &BunchConfig) {
    let w = pair.omega;
    let mut kinetic = Vec::new();
    let mut density = Vec::new();
    for i in 0..10 {
        for j in 0..10 {
            let t = 0.3 * i as f64;
            let x = -1.8 + 0.4 * j as f64;
            let v = 0.5 - 0.1 * j as f64;
            kinetic.push(vec![t, x, v]);
            let n = density_evolution(pair, 0, t, x).unwrap_or(1.0);
            density.push(vec![t, x, n]);
        }
    }
    let gen = bunch_generator(w);
    let stretch = move |t: f64| (1.0 + w * w * t * t).sqrt();
    out.check_with("generator.distribution", || {
        let sp = &pair.species[0];
        let d = invariant_defect(
            &gen,
            |q: &[f64]| sp.f0.eval(bunch_invariant(pair, 0, q[0], q[1], q[2]).unwrap_or(f64::NAN)),
            &kinetic,
        )?;
        Ok(Check::new("generator.distribution", d, 1e-6))
    });
    out.check_with("generator.j3", || {
        let d = invariant_defect(&gen, |q: &[f64]| q[1] / stretch(q[0]), &kinetic)?;
        Ok(Check::new("generator.j3", d, 1e-8))
    });
    out.check_with("generator.j4", || {
        let d = invariant_defect(&density_generator(w), |q: &[f64]| q[2] * stretch(q[0]), &density)?;
        Ok(Check::new("generator.j4", d, 1e-8))
    });
    out.check_with("generator.time_moves", || {
        let d = invariant_defect(&gen, |q: &[f64]| q[0], &kinetic)?;
        Ok(Check::at_least("generator.time_moves", d, 1.0))
    });
}

fn spectrum(out: &mut Outcome, pair: &BunchConfig) -> Result<()> {
    let energies: Vec<f64> = (1..=60).map(|k| 0.05 * k as f64).collect();
    let mut table = Table::new("bunch_spectrum", &["energy", "electrons_raw", "electrons_dNdE", "ions_raw", "ions_dNdE"]);
    let mut cols = Vec::new();
    for s in 0..pair.species.len().min(2) {
        match energy_spectrum(pair, s, &energies) {
            Ok(sp) => cols.push(sp),
            Err(e) => {
                out.check(Check::failed("spectrum", e.to_string()));
                return Ok(());
            }
        }
    }
    let rises = cols
        .iter()
        .flat_map(|c| c.raw.windows(2).filter(|w| w[1] > w[0]))
        .count();
    out.check(Check::new("spectrum.monotone", rises as f64, 0.0));
    out.check_with("spectrum.jacobian", || {
        let unit = probe(1.0, Potential::Zero)?;
        let sp = energy_spectrum(&unit, 0, &energies)?;
        let mut worst: f64 = 0.0;
        for (k, &e) in energies.iter().enumerate() {
            let xp = (2.0 * e).sqrt();
            let gauss = (-0.5 * xp * xp).exp();
            worst = worst.max((sp.raw[k] - gauss).abs()).max((sp.weighted[k] - 2.0 * gauss / xp).abs());
        }
        Ok(Check::new("spectrum.jacobian", worst, 1e-12))
    });
    for (k, &e) in energies.iter().enumerate() {
        let mut row = vec![e];
        for c in &cols {
            row.push(c.raw[k]);
            row.push(c.weighted[k]);
        }
        row.resize(5, f64::NAN);
        table.push(row);
    }
    out.tables.push(table);
    out.plots.push(
        Plot::new("bunch_spectrum", "Late-time energy spectrum", "E", "dN/dE")
            .series("bunch_spectrum", 1, 3, "electrons")
            .series("bunch_spectrum", 1, 5, "ions")
            .log_y(),
    );
    Ok(())
}
