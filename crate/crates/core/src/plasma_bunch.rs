//! Quasineutral expansion of a plasma bunch: kinetic invariants, the
//! self-similar density law, and a particle oracle for both.

use crate::error::{Error, Result};
use crate::group::{Generator, VariableSpace};
use crate::numerics::{integrate_ode, integrate_real_line, OdeOptions, QuadOptions, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Initial distribution as a function of the invariant `I`.
#[derive(Clone)]
pub enum Distribution {
    /// `amplitude * exp(-I / temperature)`
    Maxwellian { amplitude: f64, temperature: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Maxwellian { amplitude, temperature } => f
                .debug_struct("Maxwellian")
                .field("amplitude", amplitude)
                .field("temperature", temperature)
                .finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Distribution {
    pub fn eval(&self, i: f64) -> f64 {
        match self {
            Self::Maxwellian { amplitude, temperature } => amplitude * (-i / temperature).exp(),
            Self::Custom(g) => g(i),
        }
    }

    /// `int dv F(v^2/2 + u)`.
    fn velocity_integral(&self, u: f64) -> Result<f64> {
        match self {
            Self::Maxwellian { amplitude, temperature } => {
                Ok(amplitude * (2.0 * PI * temperature).sqrt() * (-u / temperature).exp())
            }
            Self::Custom(g) => {
                let opts = QuadOptions {
                    abs_tol: 1e-14,
                    rel_tol: 1e-11,
                    max_intervals: 4000,
                };
                Ok(integrate_real_line(|v| g(0.5 * v * v + u), opts)?.0)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Species {
    pub label: String,
    pub charge: f64,
    pub mass: f64,
    pub f0: Distribution,
}

impl Species {
    pub fn new(label: &str, charge: f64, mass: f64, f0: Distribution) -> Result<Self> {
        if !(mass > 0.0) || !charge.is_finite() {
            return Err(Error::InvalidInput(format!("species {label}: need mass > 0 and finite charge")));
        }
        if let Distribution::Maxwellian { amplitude, temperature } = f0 {
            if !(amplitude >= 0.0) || !(temperature > 0.0) {
                return Err(Error::InvalidInput(format!("species {label}: bad Maxwellian")));
            }
        }
        Ok(Self {
            label: label.to_string(),
            charge,
            mass,
            f0,
        })
    }

    pub fn charge_to_mass(&self) -> f64 {
        self.charge / self.mass
    }
}

/// The initial potential `Phi0(x')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Potential {
    Zero,
    /// `-kappa x^2 / 2`
    Harmonic { kappa: f64 },
    /// `-depth exp(-(x/width)^2)`
    Well { depth: f64, width: f64 },
}

impl Potential {
    pub fn value(self, x: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Harmonic { kappa } => -0.5 * kappa * x * x,
            Self::Well { depth, width } => -depth * (-(x / width).powi(2)).exp(),
        }
    }

    pub fn slope(self, x: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Harmonic { kappa } => -kappa * x,
            Self::Well { depth, width } => 2.0 * depth * x / (width * width) * (-(x / width).powi(2)).exp(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BunchConfig {
    pub species: Vec<Species>,
    pub omega: f64,
    pub potential: Potential,
}

impl BunchConfig {
    pub fn new(species: Vec<Species>, omega: f64, potential: Potential) -> Result<Self> {
        if species.is_empty() {
            return Err(Error::InvalidInput("no species".into()));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
        }
        Ok(Self {
            species,
            omega,
            potential,
        })
    }

    /// Boltzmann electrons (charge -1, mass 1) and one ion species, both
    /// Maxwellian in `I`, with the harmonic potential and `omega` that keep the
    /// pair neutral. Densities at the centre are 1 (electrons) and `1/z` (ions).
    pub fn isothermal_pair(theta_e: f64, theta_i: f64, z: f64, ion_mass: f64) -> Result<Self> {
        if !(theta_e > theta_i) || !(theta_i > 0.0) || !(z > 0.0) || !(ion_mass > 0.0) {
            return Err(Error::InvalidInput("need theta_e > theta_i > 0 and positive ion charge and mass".into()));
        }
        let zm = z / ion_mass;
        let kappa = (theta_e - theta_i) / (1.0 + zm);
        let omega = (theta_i + zm * kappa).sqrt();
        let electrons = Species::new(
            "electrons",
            -1.0,
            1.0,
            Distribution::Maxwellian {
                amplitude: 1.0 / (2.0 * PI * theta_e).sqrt(),
                temperature: theta_e,
            },
        )?;
        let ions = Species::new(
            "ions",
            z,
            ion_mass,
            Distribution::Maxwellian {
                amplitude: 1.0 / (z * (2.0 * PI * theta_i).sqrt()),
                temperature: theta_i,
            },
        )?;
        Self::new(vec![electrons, ions], omega, Potential::Harmonic { kappa })
    }

    /// The shipped pair: `theta_e = 1`, `theta_i = 0.001`, `z = 1`, ion mass 100.
    pub fn default_pair() -> Self {
        Self::isothermal_pair(1.0, 1e-3, 1.0, 100.0).expect("valid defaults")
    }

    fn get(&self, index: usize) -> Result<&Species> {
        self.species
            .get(index)
            .ok_or_else(|| Error::InvalidInput(format!("no species {index}")))
    }

    /// `sqrt(1 + omega^2 t^2)`
    pub fn stretch(&self, t: f64) -> f64 {
        (1.0 + (self.omega * t).powi(2)).sqrt()
    }

    /// Self-similar field `E = -Phi0'(x') / s^3`, which keeps `I` constant
    /// along every particle path.
    pub fn field(&self, t: f64, x: f64) -> f64 {
        let s = self.stretch(t);
        -self.potential.slope(x / s) / (s * s * s)
    }

    /// Potential energy per unit mass at `x'` for species `index`, including
    /// the confining `omega^2 x'^2 / 2`.
    fn potential_energy(&self, sp: &Species, xp: f64) -> f64 {
        0.5 * (self.omega * xp).powi(2) + sp.charge_to_mass() * self.potential.value(xp)
    }
}

/// `I = (v^2 + omega^2 (x - v t)^2)/2 + (e/m) Phi0(x')`.
pub fn bunch_invariant(config: &BunchConfig, species: usize, t: f64, x: f64, v: f64) -> Result<f64> {
    let sp = config.get(species)?;
    let xp = x / config.stretch(t);
    Ok(0.5 * (v * v + (config.omega * (x - v * t)).powi(2)) + sp.charge_to_mass() * config.potential.value(xp))
}

/// `N(x') = int dv f0(I)` at `t = 0`.
pub fn initial_column(config: &BunchConfig, species: usize, xp: f64) -> Result<f64> {
    let sp = config.get(species)?;
    sp.f0.velocity_integral(config.potential_energy(sp, xp))
}

/// `n(t, x) = N(x/s)/s` with `s = sqrt(1 + omega^2 t^2)`.
pub fn density_evolution(config: &BunchConfig, species: usize, t: f64, x: f64) -> Result<f64> {
    let s = config.stretch(t);
    Ok(initial_column(config, species, x / s)? / s)
}

/// `(J3, J4) = (x/s, n s)`.
pub fn rg_n_invariants(config: &BunchConfig, t: f64, x: f64, n: f64) -> (f64, f64) {
    let s = config.stretch(t);
    (x / s, n * s)
}

/// Net charge density `sum_a e_a n_a(t, x)`.
pub fn charge_density(config: &BunchConfig, t: f64, x: f64) -> Result<f64> {
    (0..config.species.len())
        .map(|k| Ok(config.species[k].charge * density_evolution(config, k, t, x)?))
        .sum()
}

/// Trapezoid of `n(t, .)` over `[-half_width s, half_width s]`.
pub fn total_number(config: &BunchConfig, species: usize, t: f64, half_width: f64, points: usize) -> Result<f64> {
    if points < 2 {
        return Err(Error::GridTooSmall("need two points".into()));
    }
    let l = half_width * config.stretch(t);
    let h = 2.0 * l / (points - 1) as f64;
    let mut sum = 0.0;
    for k in 0..points {
        let w = if k == 0 || k + 1 == points { 0.5 } else { 1.0 };
        sum += w * density_evolution(config, species, t, -l + h * k as f64)?;
    }
    Ok(sum * h)
}

/// `(1 + W^2 t^2) d/dt + W^2 t x d/dx + W^2 (x - v t) d/dv` on `{t, x, v}`.
pub fn bunch_generator(omega: f64) -> Generator {
    let w2 = omega * omega;
    Generator::zero(VariableSpace::new(["t", "x", "v"]).expect("distinct names"))
        .with("t", move |p| 1.0 + w2 * p[0] * p[0])
        .and_then(|g| g.with("x", move |p| w2 * p[0] * p[1]))
        .and_then(|g| g.with("v", move |p| w2 * (p[1] - p[2] * p[0])))
        .expect("names exist")
}

/// `(1 + W^2 t^2) d/dt + W^2 t x d/dx - W^2 t n d/dn` on `{t, x, n}`.
pub fn density_generator(omega: f64) -> Generator {
    let w2 = omega * omega;
    Generator::zero(VariableSpace::new(["t", "x", "n"]).expect("distinct names"))
        .with("t", move |p| 1.0 + w2 * p[0] * p[0])
        .and_then(|g| g.with("x", move |p| w2 * p[0] * p[1]))
        .and_then(|g| g.with("n", move |p| -w2 * p[0] * p[2]))
        .expect("names exist")
}

pub fn particle_options() -> OdeOptions {
    OdeOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        ..OdeOptions::default()
    }
}

/// Path of one particle of species `index` in the self-similar field.
pub fn trace_particle(config: &BunchConfig, species: usize, x0: f64, v0: f64, t_max: f64, opts: &OdeOptions) -> Result<Trajectory> {
    let qm = config.get(species)?.charge_to_mass();
    integrate_ode(
        |t, y, dy| {
            dy[0] = y[1];
            dy[1] = qm * config.field(t, y[0]);
        },
        &[x0, v0],
        (0.0, t_max),
        opts,
    )
}

/// Piecewise-linear inverse of a tabulated cumulative distribution.
struct InverseCdf {
    x: Vec<f64>,
    cdf: Vec<f64>,
    total: f64,
}

impl InverseCdf {
    fn tabulate<F: FnMut(f64) -> Result<f64>>(mut density: F, half_width: f64, points: usize) -> Result<Self> {
        let h = 2.0 * half_width / (points - 1) as f64;
        let x: Vec<f64> = (0..points).map(|k| -half_width + h * k as f64).collect();
        let y = x.iter().map(|&s| density(s)).collect::<Result<Vec<_>>>()?;
        let mut cdf = vec![0.0; points];
        for k in 1..points {
            cdf[k] = cdf[k - 1] + 0.5 * h * (y[k] + y[k - 1]);
        }
        let total = cdf[points - 1];
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidInput("distribution has no mass".into()));
        }
        cdf.iter_mut().for_each(|c| *c /= total);
        Ok(Self { x, cdf, total })
    }

    fn sample(&self, u: f64) -> f64 {
        let k = self.cdf.partition_point(|&c| c < u).clamp(1, self.x.len() - 1);
        let (c0, c1) = (self.cdf[k - 1], self.cdf[k]);
        let w = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.x[k - 1] + w * (self.x[k] - self.x[k - 1])
    }

    fn quantile_range(&self, tail: f64) -> (f64, f64) {
        (self.sample(tail), self.sample(1.0 - tail))
    }
}

/// Half-width where `g` drops below `1e-13 g(0)`.
fn support_width<F: FnMut(f64) -> Result<f64>>(mut g: F) -> Result<f64> {
    let peak = g(0.0)?;
    if !(peak > 0.0) {
        return Err(Error::InvalidInput("distribution vanishes at the centre".into()));
    }
    let mut l = 1.0;
    while g(l)?.max(g(-l)?) > 1e-13 * peak {
        l *= 1.5;
        if l > 1e3 {
            return Err(Error::InvalidInput("distribution tails too heavy for sampling".into()));
        }
    }
    Ok(l)
}

const TABLE_POINTS: usize = 4001;

#[derive(Debug, Clone)]
pub struct OracleOptions {
    pub particles: usize,
    /// Particles whose invariant is tracked along the whole path.
    pub tracked: usize,
    pub t_max: f64,
    pub bins: usize,
    pub seed: u64,
    pub ode: OdeOptions,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            particles: 100_000,
            tracked: 1_000,
            t_max: 3.0,
            bins: 64,
            seed: 1,
            ode: particle_options(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub particles: usize,
    pub t_max: f64,
    pub bin_edges: Vec<f64>,
    pub empirical: Vec<f64>,
    pub predicted: Vec<f64>,
    /// `max |empirical - predicted| / max predicted`, per-bin densities.
    pub max_relative_deviation: f64,
    /// Particles in the binned range over the predicted count there.
    pub number_ratio: f64,
    pub max_invariant_drift: f64,
    /// Largest `|n s - N(x')|/max N` over bin centres, empirical.
    pub self_similarity_deviation: f64,
}

/// Stratified particle sample of species `index` pushed along exact
/// characteristics to `t_max`, binned and compared with the density law.
pub fn characteristics_oracle(config: &BunchConfig, species: usize, opts: &OracleOptions) -> Result<OracleResult> {
    let sp = config.get(species)?;
    if opts.particles == 0 || opts.bins == 0 || !(opts.t_max > 0.0) {
        return Err(Error::InvalidInput("need particles, bins and t_max > 0".into()));
    }
    let column = |xp: f64| initial_column(config, species, xp);
    let x_table = InverseCdf::tabulate(column, support_width(column)?, TABLE_POINTS)?;

    let separable = matches!(sp.f0, Distribution::Maxwellian { .. });
    let velocity_table = |x0: f64| -> Result<InverseCdf> {
        let u = config.potential_energy(sp, x0);
        let g = |v: f64| Ok(sp.f0.eval(0.5 * v * v + u));
        InverseCdf::tabulate(g, support_width(g)?, 1025)
    };
    let shared_v = if separable { Some(velocity_table(0.0)?) } else { None };

    let side = (opts.particles as f64).sqrt().ceil() as usize;
    let count = side * side;
    let results: Vec<(f64, f64)> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(k as u64);
            let (i, j) = (k / side, k % side);
            let u1 = (i as f64 + rng.gen::<f64>()) / side as f64;
            let u2 = (j as f64 + rng.gen::<f64>()) / side as f64;
            let x0 = x_table.sample(u1);
            let v0 = match &shared_v {
                Some(tab) => tab.sample(u2),
                None => velocity_table(x0)?.sample(u2),
            };
            let traj = trace_particle(config, species, x0, v0, opts.t_max, &opts.ode)?;
            let mut drift: f64 = 0.0;
            if k < opts.tracked {
                let i0 = bunch_invariant(config, species, 0.0, x0, v0)?;
                for m in 1..=50 {
                    let t = opts.t_max * m as f64 / 50.0;
                    let y = traj.eval(t).ok_or_else(|| Error::InvalidInput("no dense output".into()))?;
                    drift = drift.max((bunch_invariant(config, species, t, y[0], y[1])? - i0).abs());
                }
            }
            Ok((traj.last_state()[0], drift))
        })
        .collect::<Result<_>>()?;

    let s = config.stretch(opts.t_max);
    let (lo, hi) = x_table.quantile_range(0.005);
    let (lo, hi) = (lo * s, hi * s);
    let width = (hi - lo) / opts.bins as f64;
    let edges: Vec<f64> = (0..=opts.bins).map(|k| lo + width * k as f64).collect();
    let mut counts = vec![0usize; opts.bins];
    for &(x, _) in &results {
        if x >= lo && x < hi {
            counts[(((x - lo) / width) as usize).min(opts.bins - 1)] += 1;
        }
    }
    let total = x_table.total;
    let empirical: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / count as f64 * total / width)
        .collect();
    // bin averages of the closed form by Simpson
    let predicted = edges
        .windows(2)
        .map(|e| {
            let m = 16;
            let h = (e[1] - e[0]) / m as f64;
            let mut acc = 0.0;
            for q in 0..=m {
                let w = if q == 0 || q == m { 1.0 } else if q % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * density_evolution(config, species, opts.t_max, e[0] + h * q as f64)?;
            }
            Ok(acc * h / 3.0 / (e[1] - e[0]))
        })
        .collect::<Result<Vec<f64>>>()?;
    let peak = predicted.iter().copied().fold(0.0, f64::max);
    let max_relative_deviation = empirical
        .iter()
        .zip(&predicted)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / peak;
    let number_ratio = empirical.iter().sum::<f64>() / predicted.iter().sum::<f64>();
    let n_peak = initial_column(config, species, 0.0)?;
    let self_similarity_deviation = empirical
        .iter()
        .zip(edges.windows(2))
        .map(|(&n, e)| {
            let xc = 0.5 * (e[0] + e[1]);
            let (j3, j4) = rg_n_invariants(config, opts.t_max, xc, n);
            Ok((j4 - initial_column(config, species, j3)?).abs() / n_peak)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(OracleResult {
        particles: count,
        t_max: opts.t_max,
        bin_edges: edges,
        empirical,
        predicted,
        max_relative_deviation,
        number_ratio,
        max_invariant_drift: results.iter().map(|r| r.1).fold(0.0, f64::max),
        self_similarity_deviation,
    })
}

/// `N` read over the late-time energy `E = omega^2 x'^2 / 2`.
#[derive(Debug, Clone, Serialize)]
pub struct EnergySpectrum {
    pub energy: Vec<f64>,
    /// `N(x'(E))` on the positive branch.
    pub raw: Vec<f64>,
    /// `dN/dE` over both branches, `(N(x') + N(-x')) / (omega^2 x')`.
    pub weighted: Vec<f64>,
}

pub fn energy_spectrum(config: &BunchConfig, species: usize, energies: &[f64]) -> Result<EnergySpectrum> {
    let w = config.omega;
    let mut raw = Vec::with_capacity(energies.len());
    let mut weighted = Vec::with_capacity(energies.len());
    for &e in energies {
        if !(e > 0.0) {
            return Err(Error::InvalidInput(format!("energies must be positive, got {e}")));
        }
        let xp = (2.0 * e).sqrt() / w;
        let (a, b) = (initial_column(config, species, xp)?, initial_column(config, species, -xp)?);
        raw.push(a);
        weighted.push((a + b) / (w * w * xp));
    }
    Ok(EnergySpectrum {
        energy: energies.to_vec(),
        raw,
        weighted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_pair_is_neutral() {
        let c = BunchConfig::default_pair();
        for &(t, x) in &[(0.0, 0.0), (1.0, 0.5), (30.0, -4.0)] {
            let q = charge_density(&c, t, x).unwrap();
            assert!(q.abs() < 1e-12, "{q}");
        }
        assert!((initial_column(&c, 0, 0.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn invariant_trivial_values() {
        let c = BunchConfig::new(BunchConfig::default_pair().species, 1.0, Potential::Zero).unwrap();
        assert_eq!(bunch_invariant(&c, 0, 0.0, 2.0, 1.0).unwrap(), 2.5);
        let d = BunchConfig::default_pair();
        let phi = d.potential.value(0.0);
        assert_eq!(bunch_invariant(&d, 1, 7.0, 0.0, 0.0).unwrap(), 0.01 * phi);
    }

    #[test]
    fn custom_matches_maxwellian() {
        let mut c = BunchConfig::default_pair();
        let a = 1.0 / (2.0 * PI).sqrt();
        c.species[0].f0 = Distribution::Custom(Arc::new(move |i| a * (-i).exp()));
        let n = initial_column(&c, 0, 0.7).unwrap();
        let d = BunchConfig::default_pair();
        assert!((n - initial_column(&d, 0, 0.7).unwrap()).abs() < 1e-10);
    }
}
