use rgsym::group::invariant_defect;
use rgsym::plasma_bunch::{
    bunch_generator, bunch_invariant, characteristics_oracle, charge_density, density_evolution, density_generator,
    energy_spectrum, initial_column, particle_options, rg_n_invariants, total_number, trace_particle, BunchConfig,
    Distribution, OracleOptions, Potential, Species,
};
use std::f64::consts::PI;

/// Unit charge-to-mass species with a unit Maxwellian in `I`, no potential.
fn free_probe() -> BunchConfig {
    let f0 = Distribution::Maxwellian {
        amplitude: 1.0 / (2.0 * PI).sqrt(),
        temperature: 1.0,
    };
    BunchConfig::new(vec![Species::new("probe", 1.0, 1.0, f0).unwrap()], 1.0, Potential::Zero).unwrap()
}

#[test]
fn invariant_values() {
    let c = free_probe();
    for (x, v) in [(2.0, 1.0), (-0.5, 3.0)] {
        assert_eq!(bunch_invariant(&c, 0, 0.0, x, v).unwrap(), 0.5 * (v * v + x * x));
    }
    let d = BunchConfig::default_pair();
    for t in [0.0, 2.0, 40.0] {
        let i = bunch_invariant(&d, 1, t, 0.0, 0.0).unwrap();
        assert_eq!(i, d.species[1].charge_to_mass() * d.potential.value(0.0));
    }
    assert!(bunch_invariant(&d, 5, 0.0, 0.0, 0.0).is_err());
}

#[test]
fn density_law() {
    let c = free_probe();
    for x in [0.0, 0.7, -2.0] {
        // N(x) = exp(-x^2/2) for the unit probe
        assert!((density_evolution(&c, 0, 0.0, x).unwrap() - (-0.5 * x * x).exp()).abs() < 1e-15);
    }
    let n0 = initial_column(&c, 0, 0.0).unwrap();
    assert!((density_evolution(&c, 0, 3f64.sqrt(), 0.0).unwrap() - n0 / 2.0).abs() < 1e-15);

    let d = BunchConfig::default_pair();
    for k in 0..2 {
        let base = total_number(&d, k, 0.0, 12.0, 2001).unwrap();
        for t in [1.0, 3.0] {
            let n = total_number(&d, k, t, 12.0, 2001).unwrap();
            assert!((n / base - 1.0).abs() < 1e-8);
        }
    }
    for (t, x) in [(0.0, 0.3), (1.0, -2.0), (5.0, 7.0)] {
        assert!(charge_density(&d, t, x).unwrap().abs() < 1e-8);
    }
}

#[test]
fn density_invariants() {
    let d = BunchConfig::default_pair();
    assert_eq!(rg_n_invariants(&d, 0.0, 1.5, 0.4), (1.5, 0.4));
    for j3 in [0.0, 0.8, -1.6] {
        let base = initial_column(&d, 1, j3).unwrap();
        for t in [0.0, 1.0, 2.0] {
            let x = j3 * d.stretch(t);
            let (a, b) = rg_n_invariants(&d, t, x, density_evolution(&d, 1, t, x).unwrap());
            assert!((a - j3).abs() < 1e-14 && (b - base).abs() < 1e-10);
        }
    }
    let grid: Vec<Vec<f64>> = (0..8)
        .flat_map(|i| (0..8).map(move |j| vec![0.4 * i as f64, -2.0 + 0.5 * j as f64, 0.5 + 0.1 * j as f64]))
        .collect();
    let w = d.omega;
    let g = density_generator(w);
    let j4 = invariant_defect(&g, |p: &[f64]| p[2] * (1.0 + w * w * p[0] * p[0]).sqrt(), &grid).unwrap();
    assert!(j4 <= 1e-8);
    let i = invariant_defect(
        &bunch_generator(w),
        |p: &[f64]| bunch_invariant(&d, 1, p[0], p[1], p[2]).unwrap(),
        &grid,
    )
    .unwrap();
    assert!(i <= 1e-6);
}

#[test]
fn particle_paths() {
    let d = BunchConfig::default_pair();
    let rest = trace_particle(&d, 1, 0.0, 0.0, 10.0, &particle_options()).unwrap();
    assert_eq!(rest.last_state(), &[0.0, 0.0]);

    let well = BunchConfig::new(free_probe().species, 1.0, Potential::Well { depth: 1.0, width: 1.0 }).unwrap();
    for (x0, v0) in [(0.3, 0.0), (-1.0, 0.5), (2.0, -1.0)] {
        let tr = trace_particle(&well, 0, x0, v0, 5.0, &particle_options()).unwrap();
        let i0 = bunch_invariant(&well, 0, 0.0, x0, v0).unwrap();
        for (t, s) in tr.params.iter().zip(&tr.states) {
            assert!((bunch_invariant(&well, 0, *t, s[0], s[1]).unwrap() - i0).abs() <= 1e-6);
        }
    }
}

#[test]
fn free_streaming_oracle() {
    let opts = OracleOptions {
        particles: 100_000,
        tracked: 1_000,
        ..OracleOptions::default()
    };
    let r = characteristics_oracle(&free_probe(), 0, &opts).unwrap();
    assert!(r.max_relative_deviation <= 0.03, "{}", r.max_relative_deviation);
    assert!((r.number_ratio - 1.0).abs() <= 0.01);
    assert!(r.max_invariant_drift <= 1e-6);
    assert!(r.self_similarity_deviation <= 0.03);

    let again = characteristics_oracle(&free_probe(), 0, &opts).unwrap();
    assert_eq!(r.empirical, again.empirical);
}

#[test]
fn spectrum_change_of_variables() {
    let energies = [0.1, 0.5, 1.0, 2.0, 4.0];
    let s = energy_spectrum(&free_probe(), 0, &energies).unwrap();
    for (k, &e) in energies.iter().enumerate() {
        // N(sqrt(2E)) = exp(-E); both branches over |dE/dx'| = sqrt(2E)
        assert!((s.raw[k] - (-e).exp()).abs() < 1e-14);
        assert!((s.weighted[k] - 2.0 * (-e).exp() / (2.0 * e).sqrt()).abs() < 1e-13);
    }
    assert!(s.raw.windows(2).all(|w| w[1] < w[0]));
    assert!(energy_spectrum(&free_probe(), 0, &[0.0]).is_err());
}
