//! Group-law and invariance sweeps over every generator shipped by the crate.

use crate::beam_focusing::{beam_field, beam_generator, build_s_profile, BeamConfig};
use crate::error::{Error, Result};
use crate::group::{check_group_law, invariance_residual, Generator, SolutionSampler};
use crate::numerics::Tolerance;
use crate::plasma_bunch::{bunch_generator, density_evolution, density_generator, BunchConfig};
use crate::plasma_resonance::{resonance_generator, resonance_sampler, ResonanceConfig, ResonanceModel};
use crate::runner::config::GroupParams;
use crate::runner::report::{Check, Outcome};
use crate::transfer_hopf::{
    hopf_axis_generator, hopf_axis_slope, hopf_generator, hopf_solve, transfer_generator, transfer_rg, HopfConfig,
    HopfProfile, TransferConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const LAW_TOL: Tolerance = Tolerance {
    abs_tol: 1e-10,
    rel_tol: 1e-10,
    max_iter: 200,
};

/// Generator plus the box its random start points are drawn from.
struct Case {
    name: &'static str,
    gen: Generator,
    bounds: Vec<(f64, f64)>,
}

fn cases() -> Result<Vec<Case>> {
    let lin = TransferConfig::linear(1.0, 1.0)?;
    let nl = TransferConfig::nonlinear(1.0, 1.0)?;
    let beam = BeamConfig::gaussian(0.6, 0.5)?;
    let omega = BunchConfig::default_pair().omega;
    Ok(vec![
        Case {
            name: "transfer_linear",
            gen: transfer_generator(&lin),
            bounds: vec![(0.0, 1.0), (0.1, 3.0)],
        },
        Case {
            name: "transfer_nonlinear",
            gen: transfer_generator(&nl),
            bounds: vec![(0.0, 1.0), (0.1, 3.0)],
        },
        Case {
            name: "hopf",
            gen: hopf_generator(),
            bounds: vec![(0.0, 1.0), (-1.0, 1.0), (0.1, 1.0), (-1.0, 1.0)],
        },
        Case {
            name: "hopf_axis",
            gen: hopf_axis_generator(),
            bounds: vec![(0.0, 1.0), (0.1, 1.0), (0.2, 1.0)],
        },
        Case {
            name: "beam",
            gen: beam_generator(build_s_profile(&beam)?),
            bounds: vec![(0.0, 0.5), (-1.0, 1.0), (-0.2, 0.2), (0.5, 1.5)],
        },
        Case {
            name: "resonance",
            gen: resonance_generator(1.0),
            bounds: vec![(0.0, 6.0), (-1.0, 1.0), (0.0, 0.5), (-1.0, 1.0), (-1.0, 1.0)],
        },
        Case {
            name: "bunch_kinetic",
            gen: bunch_generator(omega),
            bounds: vec![(0.0, 1.0), (-2.0, 2.0), (-1.0, 1.0)],
        },
        Case {
            name: "bunch_density",
            gen: density_generator(omega),
            bounds: vec![(0.0, 1.0), (-2.0, 2.0), (0.1, 1.0)],
        },
    ])
}

pub fn run(p: &GroupParams, seed: u64) -> Result<Outcome> {
    if p.samples == 0 {
        return Err(Error::Config("group.samples must be positive".into()));
    }
    let mut out = Outcome::default();
    let cases = cases()?;
    for (k, case) in cases.iter().enumerate() {
        let name = format!("law.{}", case.name);
        out.check_with(&name, || {
            let worst = (0..p.samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream((k * p.samples + i) as u64);
                    let start: Vec<f64> = case.bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
                    let (a, b) = (rng.gen_range(0.0..=0.5), rng.gen_range(0.0..=0.5));
                    let scale = start.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                    Ok(check_group_law(&case.gen, &start, a, b, &LAW_TOL)? / scale)
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let bound = 10.0 * (LAW_TOL.abs_tol + LAW_TOL.rel_tol);
            Ok(Check::new(&name, worst, bound).with_note(format!("{} samples, a, b in [0, 0.5], relative to the start scale", p.samples)))
        });
    }

    for pair in invariance_pairs()? {
        let name = format!("invariance.{}", pair.name);
        out.check_with(&name, || {
            let mut worst: f64 = 0.0;
            for pt in &pair.points {
                worst = worst.max(invariance_residual(&pair.gen, &pair.sampler, pt)?);
            }
            let bound = 1e-6f64.max(pair.c * pair.h * pair.h);
            Ok(Check::new(&name, worst, bound).with_note(format!("C = {}, h = {}", pair.c, pair.h)))
        });
    }

    out.check_with("linearity", || {
        // W = x^2 + eps t is not a solution, so the residual is O(1)
        let sampler = SolutionSampler::new(&["t", "x", "eps"], &["u"], |q| Some(vec![q[1] * q[1] + q[2] * q[0]]));
        let gen = hopf_generator();
        let mut worst: f64 = 0.0;
        for pt in [[0.5, 1.0, 0.5], [0.2, -0.7, 0.9], [1.3, 0.4, 0.1]] {
            let base = invariance_residual(&gen, &sampler, &pt)?;
            for c in [-2.0, 0.5, 3.0] {
                let scaled = invariance_residual(&gen.scaled(c), &sampler, &pt)?;
                worst = worst.max((scaled - c.abs() * base).abs() / base.max(f64::MIN_POSITIVE));
            }
        }
        Ok(Check::new("linearity", worst, 1e-10))
    });
    Ok(out)
}

/// A closed-form or orbit-built solution with its generator.
struct Pair {
    name: &'static str,
    gen: Generator,
    sampler: SolutionSampler,
    points: Vec<Vec<f64>>,
    /// `C` and `h` of the `C h^2` stencil allowance.
    c: f64,
    h: f64,
}

fn invariance_pairs() -> Result<Vec<Pair>> {
    let mut pairs = Vec::new();
    let lin = TransferConfig::linear(1.0, 1.0)?;
    let nl = TransferConfig::nonlinear(1.0, 1.0)?;
    for (name, cfg) in [("transfer_linear", lin), ("transfer_nonlinear", nl)] {
        pairs.push(Pair {
            name,
            gen: transfer_generator(&cfg),
            sampler: SolutionSampler::new(&["x"], &["alpha"], move |q| Some(vec![transfer_rg(&cfg, q[0])])),
            points: vec![vec![0.2], vec![0.7], vec![1.5]],
            c: 1.0,
            h: 1e-5,
        });
    }
    for (name, profile) in [("hopf_linear", HopfProfile::Linear), ("hopf_sine", HopfProfile::Sine)] {
        let prof = profile.clone();
        pairs.push(Pair {
            name,
            gen: hopf_generator(),
            sampler: SolutionSampler::new(&["t", "x", "eps"], &["u"], move |q| {
                let cfg = HopfConfig::new(prof.clone(), q[2]).ok()?;
                hopf_solve(&cfg, q[0], q[1]).ok().map(|u| vec![u])
            }),
            points: vec![vec![0.5, 1.0, 0.5], vec![0.3, -0.4, 0.8], vec![0.1, 2.0, 1.0]],
            c: 10.0,
            h: 1e-5,
        });
    }
    pairs.push(Pair {
        name: "hopf_axis",
        gen: hopf_axis_generator(),
        sampler: SolutionSampler::new(&["t", "eps"], &["u0x"], |q| Some(vec![hopf_axis_slope(q[1], q[0])])),
        points: vec![vec![0.5, 0.5], vec![1.0, 2.0], vec![3.0, 0.1]],
        c: 1.0,
        h: 1e-5,
    });
    for model in [ResonanceModel::Cold, ResonanceModel::Hot] {
        let cfg = ResonanceConfig::new(0.4, model)?;
        pairs.push(Pair {
            name: if matches!(model, ResonanceModel::Cold) { "resonance_cold" } else { "resonance_hot" },
            gen: resonance_generator(cfg.omega),
            sampler: resonance_sampler(&cfg),
            points: vec![vec![0.3, 0.2, 0.4], vec![1.1, -0.3, 0.2]],
            c: 10.0,
            h: 1e-5,
        });
    }
    let bunch = BunchConfig::default_pair();
    let bc = bunch.clone();
    pairs.push(Pair {
        name: "bunch_density",
        gen: density_generator(bunch.omega),
        sampler: SolutionSampler::new(&["t", "x"], &["n"], move |q| density_evolution(&bc, 0, q[0], q[1]).ok().map(|n| vec![n])),
        points: vec![vec![0.5, 0.3], vec![2.0, -1.0], vec![4.0, 2.5]],
        c: 1.0,
        h: 1e-5,
    });
    let beam = BeamConfig::gaussian(0.6, 0.5)?;
    let h = 1e-3;
    let tol = Tolerance {
        abs_tol: 1e-12,
        rel_tol: 1e-11,
        max_iter: 200,
    };
    pairs.push(Pair {
        name: "beam",
        gen: beam_generator(build_s_profile(&beam)?),
        sampler: SolutionSampler::new(&["t", "x"], &["v", "n"], move |q| {
            beam_field(&beam, q[0], &[q[1]], &tol).ok().map(|f| vec![f.v[0], f.n[0]])
        })
        .with_step("t", h)?
        .with_step("x", h)?,
        points: vec![vec![0.3, 0.4], vec![0.8, 1.0], vec![1.2, -0.6]],
        c: 10.0,
        h,
    });
    Ok(pairs)
}
