//! Run reports, numeric tables and plot scripts.

use crate::error::Result;
use crate::oracles::ResidualReport;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// One asserted comparison. `pass` is `defect <= tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pt: Option<f64>,
    pub rg: Option<f64>,
    pub oracle: Option<f64>,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            pt: None,
            rg: None,
            oracle: None,
            pass: defect <= tolerance,
            defect,
            tolerance,
            note: None,
        }
    }

    /// `|rg - oracle| <= tolerance`.
    pub fn compare(name: impl Into<String>, rg: f64, oracle: f64, tolerance: f64) -> Self {
        let mut c = Self::new(name, (rg - oracle).abs(), tolerance);
        c.rg = Some(rg);
        c.oracle = Some(oracle);
        c
    }

    /// `value` inside `[lo, hi]`; the defect is the distance from the centre.
    pub fn window(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        let mid = 0.5 * (lo + hi);
        let mut c = Self::new(name, (value - mid).abs(), 0.5 * (hi - lo));
        c.rg = Some(value);
        c.note = Some(format!("window [{lo}, {hi}]"));
        c
    }

    /// `value >= floor`; the defect is the shortfall.
    pub fn at_least(name: impl Into<String>, value: f64, floor: f64) -> Self {
        let mut c = Self::new(name, (floor - value).max(0.0), 0.0);
        c.rg = Some(value);
        c.note = Some(format!("at least {floor}"));
        c
    }

    pub fn failed(name: impl Into<String>, why: impl Into<String>) -> Self {
        let mut c = Self::new(name, f64::INFINITY, 0.0);
        c.note = Some(why.into());
        c
    }

    pub fn with_pt(mut self, pt: f64) -> Self {
        self.pt = Some(pt);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularityRecord {
    pub name: String,
    pub predicted: f64,
    pub detected: f64,
    pub relative_error: f64,
}

impl SingularityRecord {
    pub fn new(name: impl Into<String>, predicted: f64, detected: f64) -> Self {
        Self {
            name: name.into(),
            predicted,
            detected,
            relative_error: (detected - predicted) / predicted,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub toolkit: String,
    pub version: String,
    pub config_hash: String,
    pub resolution: String,
    pub seed: u64,
    pub conventions: Vec<String>,
    pub timestamp: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: String,
    pub parameters: serde_json::Value,
    pub checks: Vec<Check>,
    pub residuals: Vec<ResidualReport>,
    pub singularities: Vec<SingularityRecord>,
    pub provenance: Provenance,
    pub failing: Vec<String>,
    pub passed: bool,
}

/// Named columns of numbers, written with a `#` header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}", self.name);
        let _ = writeln!(s, "# {}", self.columns.join(" "));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
            let _ = writeln!(s, "{}", cells.join(" "));
        }
        s
    }

    pub fn file_name(&self) -> String {
        format!("{}.dat", self.name)
    }
}

/// A gnuplot script over one or more tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub name: String,
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    /// `(table, x column, y column, legend)`, columns 1-based.
    pub series: Vec<(String, usize, usize, String)>,
    pub vertical_marker: Option<(f64, String)>,
    pub log_y: bool,
}

impl Plot {
    pub fn new(name: &str, title: &str, xlabel: &str, ylabel: &str) -> Self {
        Self {
            name: name.into(),
            title: title.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            series: Vec::new(),
            vertical_marker: None,
            log_y: false,
        }
    }

    pub fn series(mut self, table: &str, x: usize, y: usize, legend: &str) -> Self {
        self.series.push((table.into(), x, y, legend.into()));
        self
    }

    pub fn marker(mut self, at: f64, label: &str) -> Self {
        self.vertical_marker = Some((at, label.into()));
        self
    }

    pub fn log_y(mut self) -> Self {
        self.log_y = true;
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set terminal pngcairo size 900,600");
        let _ = writeln!(s, "set output '{}.png'", self.name);
        let _ = writeln!(s, "set title '{}'", self.title);
        let _ = writeln!(s, "set xlabel '{}'", self.xlabel);
        let _ = writeln!(s, "set ylabel '{}'", self.ylabel);
        if self.log_y {
            let _ = writeln!(s, "set logscale y");
        }
        if let Some((at, label)) = &self.vertical_marker {
            let _ = writeln!(s, "set arrow from {at},graph 0 to {at},graph 1 nohead dashtype 2");
            let _ = writeln!(s, "set label '{label}' at {at},graph 0.95 offset 1,0");
        }
        let parts: Vec<String> = self
            .series
            .iter()
            .map(|(t, x, y, l)| format!("'{t}.dat' using {x}:{y} with linespoints title '{l}'"))
            .collect();
        let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
        s
    }
}

/// Everything a scenario produces.
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub residuals: Vec<ResidualReport>,
    pub singularities: Vec<SingularityRecord>,
    pub tables: Vec<Table>,
    pub plots: Vec<Plot>,
    pub conventions: Vec<String>,
}

impl Outcome {
    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Records `result` as a check, or a failed check carrying the error.
    pub fn check_with<F>(&mut self, name: &str, f: F)
    where
        F: FnOnce() -> Result<Check>,
    {
        match f() {
            Ok(c) => self.checks.push(c),
            Err(e) => self.checks.push(Check::failed(name, e.to_string())),
        }
    }

    pub fn merge(&mut self, prefix: &str, other: Outcome) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
        self.residuals.extend(other.residuals);
        for mut s in other.singularities {
            s.name = format!("{prefix}.{}", s.name);
            self.singularities.push(s);
        }
        self.tables.extend(other.tables);
        self.plots.extend(other.plots);
        for c in other.conventions {
            if !self.conventions.contains(&c) {
                self.conventions.push(c);
            }
        }
    }
}

pub fn write_artifacts(dir: &Path, report: &Report, outcome: &Outcome) -> Result<()> {
    fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(report).map_err(|e| crate::Error::Io(e.to_string()))?;
    fs::write(dir.join("report.json"), json + "\n")?;
    for t in &outcome.tables {
        fs::write(dir.join(t.file_name()), t.render())?;
    }
    for p in &outcome.plots {
        fs::write(dir.join(format!("{}.gp", p.name)), p.render())?;
    }
    Ok(())
}
