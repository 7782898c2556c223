//! Layered run configuration: embedded defaults, resolution table, user file,
//! then command-line overrides. Unknown keys are rejected at every layer.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;
use toml::{Table, Value};

pub const DEFAULTS: &str = include_str!("defaults.toml");

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub scenario: String,
    pub output: String,
    pub seed: u64,
    pub fast: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferParams {
    pub alpha0: f64,
    pub nu: f64,
    pub beta: f64,
    pub depth_max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfParams {
    /// `linear`, `sine`, `both` or `tabulated`.
    pub profile: String,
    /// Two-column table for the tabulated profile.
    pub table: String,
    pub eps: f64,
    pub grid: usize,
    pub blowup_threshold: f64,
    pub residual_step: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonParams {
    pub grid: usize,
    pub t_max: f64,
    pub residual_step: f64,
    pub axis_times: Vec<f64>,
    pub lb_times: Vec<f64>,
    pub lb_x: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlabParams {
    pub grid: usize,
    pub t_max: f64,
    pub residual_step: f64,
    pub q_samples: usize,
    pub lb_times: Vec<f64>,
    pub lb_x: Vec<f64>,
    pub gauss_alphas: Vec<f64>,
    pub gauss_point: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceParams {
    pub eps: f64,
    pub theta: f64,
    pub light_speed: f64,
    pub models: Vec<String>,
    pub step: f64,
    pub interior: usize,
    pub refinements: usize,
    pub harmonics: usize,
    pub tau_samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamParams {
    pub cases: Vec<[f64; 2]>,
    pub canonical_step: f64,
    pub canonical_x: Vec<f64>,
    pub canonical_fractions: Vec<f64>,
    pub residual_grid: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BunchParams {
    pub theta_e: f64,
    pub theta_i: f64,
    pub ion_charge: f64,
    pub ion_mass: f64,
    pub particles: usize,
    pub ion_particles: usize,
    pub tracked: usize,
    pub t_max: f64,
    pub bins: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupParams {
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub run: RunSection,
    pub transfer: TransferParams,
    pub hopf: HopfParams,
    #[serde(rename = "chaplygin-soliton")]
    pub soliton: SolitonParams,
    #[serde(rename = "chaplygin-slab")]
    pub slab: SlabParams,
    pub resonance: ResonanceParams,
    pub beam: BeamParams,
    pub bunch: BunchParams,
    pub group: GroupParams,
}

impl RunConfig {
    pub fn resolution(&self) -> &'static str {
        if self.run.fast {
            "fast"
        } else {
            "full"
        }
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Command-line inputs that feed the layering.
#[derive(Debug, Clone, Default)]
pub struct Inputs {
    pub scenario: Option<String>,
    pub config_text: Option<String>,
    pub output: Option<String>,
    pub seed: Option<u64>,
    pub fast: bool,
    /// Raw `--section.key=value`, `--key=value` or `--key value` tokens.
    pub overrides: Vec<String>,
}

impl Inputs {
    pub fn with_config_file(mut self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        self.config_text = Some(text);
        Ok(self)
    }
}

fn parse_table(text: &str, what: &str) -> Result<Table> {
    text.parse::<Table>().map_err(|e| Error::Config(format!("{what}: {e}")))
}

fn merge(into: &mut Table, from: Table) {
    for (k, v) in from {
        match (into.get_mut(&k), v) {
            (Some(Value::Table(a)), Value::Table(b)) => merge(a, b),
            (_, v) => {
                into.insert(k, v);
            }
        }
    }
}

/// Parses a literal the way TOML would, falling back to a bare string.
fn parse_value(raw: &str) -> Value {
    match format!("v = {raw}").parse::<Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => Value::String(raw.to_string()),
    }
}

/// Turns override tokens into `(section, key, value)` triples. Bare keys go
/// to `default_section`.
pub fn parse_overrides(tokens: &[String], default_section: Option<&str>) -> Result<Vec<(String, String, Value)>> {
    let mut out = Vec::new();
    let mut it = tokens.iter().peekable();
    while let Some(tok) = it.next() {
        let body = tok
            .strip_prefix("--")
            .ok_or_else(|| Error::Config(format!("unexpected argument `{tok}`")))?;
        let (path, raw) = match body.split_once('=') {
            Some((p, v)) => (p.to_string(), v.to_string()),
            None => {
                let v = it
                    .next_if(|n| !n.starts_with("--"))
                    .ok_or_else(|| Error::Config(format!("`{tok}` needs a value")))?;
                (body.to_string(), v.clone())
            }
        };
        let (section, key) = match path.split_once('.') {
            Some((s, k)) => (s.to_string(), k.to_string()),
            None => {
                let s = default_section
                    .ok_or_else(|| Error::Config(format!("`--{path}` needs a section, as in --hopf.{path}")))?;
                (s.to_string(), path)
            }
        };
        if section.is_empty() || key.is_empty() {
            return Err(Error::Config(format!("malformed override `{tok}`")));
        }
        out.push((section, key, parse_value(&raw)));
    }
    Ok(out)
}

fn section_for(scenario: &str) -> Option<&str> {
    match scenario {
        "verify-all" => None,
        s => Some(s),
    }
}

pub fn build(inputs: &Inputs) -> Result<RunConfig> {
    let mut base = parse_table(DEFAULTS, "built-in defaults")?;
    let mut user = match &inputs.config_text {
        Some(t) => parse_table(t, "config file")?,
        None => Table::new(),
    };

    let user_run = user.get("run").and_then(Value::as_table);
    let scenario = inputs
        .scenario
        .clone()
        .or_else(|| user_run.and_then(|r| r.get("scenario")).and_then(Value::as_str).map(String::from))
        .unwrap_or_else(|| "verify-all".into());
    let overrides = parse_overrides(&inputs.overrides, section_for(&scenario))?;
    let fast_override = overrides
        .iter()
        .find(|(s, k, _)| s == "run" && k == "fast")
        .and_then(|(_, _, v)| v.as_bool());
    let fast = inputs.fast
        || fast_override.unwrap_or(false)
        || user_run.and_then(|r| r.get("fast")).and_then(Value::as_bool).unwrap_or(false);

    for level in ["fast", "full"] {
        if let Some(Value::Table(extra)) = user.remove(level) {
            if let Some(Value::Table(b)) = base.get_mut(level) {
                merge(b, extra);
            } else {
                base.insert(level.into(), Value::Table(extra));
            }
        }
    }
    let chosen = base.remove(if fast { "fast" } else { "full" });
    base.remove(if fast { "full" } else { "fast" });
    if let Some(Value::Table(t)) = chosen {
        merge(&mut base, t);
    }
    merge(&mut base, user);

    for (section, key, value) in overrides {
        match base.get_mut(&section) {
            Some(Value::Table(t)) => {
                t.insert(key, value);
            }
            _ => return Err(Error::Config(format!("unknown section `{section}`"))),
        }
    }
    let run = base
        .get_mut("run")
        .and_then(Value::as_table_mut)
        .ok_or_else(|| Error::Config("missing [run]".into()))?;
    run.insert("scenario".into(), Value::String(scenario));
    run.insert("fast".into(), Value::Boolean(fast));
    if let Some(o) = &inputs.output {
        run.insert("output".into(), Value::String(o.clone()));
    }
    if let Some(s) = inputs.seed {
        let s = i64::try_from(s).map_err(|_| Error::Config("seed too large".into()))?;
        run.insert("seed".into(), Value::Integer(s));
    }

    let cfg: RunConfig = Value::Table(base)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    if !super::catalog::is_known(&cfg.run.scenario) {
        return Err(Error::Config(format!(
            "unknown scenario `{}`; see list-scenarios",
            cfg.run.scenario
        )));
    }
    Ok(cfg)
}
