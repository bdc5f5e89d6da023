//! Command-line front end. Every subcommand produces one [`OutputRecord`],
//! rendered as CSV (with `#` metadata lines) or JSON.
//!
//! Settings are layered: built-in defaults, then a flat `key = value` config
//! file (`--config`), then command-line flags.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{Map, Number, Value};
use thiserror::Error;

use crate::bound::{
    bound_energy_series, bound_wavefunction, kempf_bound_energy, solve_bound_state, PotentialSpec,
};
use crate::deformation::{make_deformation, DeformationKind, DeformationSpec};
use crate::error::Error;
use crate::flux::{flux_conservation_check, plane_wave_flux};
use crate::numerics::ordered_map;
use crate::scattering::{
    asymptotic_wave_check_with, find_resonance, g_principal, resonance_curve, transmission_curve,
    transmission_reflection,
};

pub const SCHEMA_VERSION: &str = "1";
/// Environment variable holding the worker-thread count (default 1).
pub const WORKERS_ENV: &str = "MLDELTA_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("expected csv or json, got `{other}`")),
        }
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub deformation: DeformationKind,
    pub beta: Option<f64>,
    pub b: Option<f64>,
    pub v0: f64,
    pub hbar: f64,
    pub mass: f64,
    pub tol: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub k: Option<f64>,
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub v0_min: Option<f64>,
    pub v0_max: Option<f64>,
    pub samples: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            deformation: DeformationKind::Undeformed,
            beta: None,
            b: None,
            v0: 1.0,
            hbar: 1.0,
            mass: 1.0,
            tol: 1e-10,
            format: Format::Csv,
            output: None,
            k: None,
            k_min: None,
            k_max: None,
            e_min: None,
            e_max: None,
            x_min: None,
            x_max: None,
            v0_min: None,
            v0_max: None,
            samples: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {reason}")]
    Io { path: String, reason: String },
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse `{value}` for key `{key}`"))
}

impl RunConfig {
    /// Sets one field from its textual form; `key` may use `-` or `_`.
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        match key.as_str() {
            "deformation" => {
                self.deformation = v.parse().map_err(|e: Error| e.to_string())?;
            }
            "beta" => self.beta = Some(parse_value(&key, v)?),
            "b" => self.b = Some(parse_value(&key, v)?),
            "v0" => self.v0 = parse_value(&key, v)?,
            "hbar" => self.hbar = parse_value(&key, v)?,
            "mass" | "m" => self.mass = parse_value(&key, v)?,
            "tol" => self.tol = parse_value(&key, v)?,
            "format" => self.format = v.parse()?,
            "output" => self.output = Some(PathBuf::from(v)),
            "k" => self.k = Some(parse_value(&key, v)?),
            "k_min" => self.k_min = Some(parse_value(&key, v)?),
            "k_max" => self.k_max = Some(parse_value(&key, v)?),
            "e_min" => self.e_min = Some(parse_value(&key, v)?),
            "e_max" => self.e_max = Some(parse_value(&key, v)?),
            "x_min" => self.x_min = Some(parse_value(&key, v)?),
            "x_max" => self.x_max = Some(parse_value(&key, v)?),
            "v0_min" => self.v0_min = Some(parse_value(&key, v)?),
            "v0_max" => self.v0_max = Some(parse_value(&key, v)?),
            "samples" => self.samples = Some(parse_value(&key, v)?),
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Parse {
                    line: i + 1,
                    message: format!("expected `key = value`, got `{line}`"),
                });
            };
            self.set(key, value).map_err(|message| ConfigError::Parse {
                line: i + 1,
                message,
            })?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |key: &'static str, reason: String| Err(ConfigError::Invalid { key, reason });
        let positive = [
            ("v0", Some(self.v0)),
            ("hbar", Some(self.hbar)),
            ("mass", Some(self.mass)),
            ("tol", Some(self.tol)),
            ("beta", self.beta),
            ("b", self.b),
            ("k", self.k),
            ("k_min", self.k_min),
            ("k_max", self.k_max),
            ("e_min", self.e_min),
            ("e_max", self.e_max),
            ("v0_min", self.v0_min),
            ("v0_max", self.v0_max),
        ];
        for (key, value) in positive {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return invalid(key, format!("must be finite and > 0, got {v}"));
                }
            }
        }
        for (key, value) in [("x_min", self.x_min), ("x_max", self.x_max)] {
            if let Some(v) = value {
                if !v.is_finite() {
                    return invalid(key, format!("must be finite, got {v}"));
                }
            }
        }
        if let Some(n) = self.samples {
            if n < 2 {
                return invalid("samples", format!("need at least 2, got {n}"));
            }
        }
        let pairs = [
            ("k_max", self.k_min, self.k_max),
            ("e_max", self.e_min, self.e_max),
            ("x_max", self.x_min, self.x_max),
            ("v0_max", self.v0_min, self.v0_max),
        ];
        for (key, lo, hi) in pairs {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if !(lo < hi) {
                    return invalid(key, format!("range must be increasing, got [{lo}, {hi}]"));
                }
            }
        }
        if (self.e_min.is_some() || self.e_max.is_some())
            && (self.k_min.is_some() || self.k_max.is_some())
        {
            return invalid("e_min", "an energy range excludes a k range".into());
        }
        match self.deformation {
            DeformationKind::Kempf | DeformationKind::MaxMomentum if self.beta.is_none() => {
                invalid(
                    "beta",
                    format!("required for the {} deformation", self.deformation),
                )
            }
            DeformationKind::Cutoff if self.b.is_none() => {
                invalid("b", "required for the cutoff deformation".into())
            }
            DeformationKind::Custom => invalid(
                "deformation",
                "custom deformations are only available through the library".into(),
            ),
            _ => Ok(()),
        }
    }

    pub fn deformation_spec(&self) -> crate::Result<DeformationSpec> {
        make_deformation(
            self.deformation,
            self.beta.unwrap_or(f64::NAN),
            self.b.unwrap_or(f64::NAN),
        )
    }

    pub fn potential(&self) -> crate::Result<PotentialSpec> {
        PotentialSpec::new(self.v0, self.hbar, self.mass)
    }
}

/// Reads and validates a config file on top of the defaults.
pub fn load_config(path: &str) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.to_string(),
        reason: e.to_string(),
    })?;
    let mut cfg = RunConfig::default();
    cfg.apply_text(&text)?;
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Parser)]
#[command(
    name = "minlen-delta",
    version,
    about = "Delta-well bound states and scattering with a minimal length"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Bound-state decay momentum, energy and normalization.
    Bound,
    /// Normalized bound-state wavefunction on an x grid.
    Wavefunction,
    /// G, T, R and the amplitude over a k (or energy) grid.
    Scatter,
    /// Perfect-reflection momenta over a range of couplings.
    Resonance,
    /// Incident, transmitted and reflected flux over a k grid.
    Flux,
    /// Far-field form of the scattering kernel at large |x|.
    AsymptoticCheck,
    /// Closed forms versus numerics, one line per check.
    Selfcheck,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::Wavefunction => "wavefunction",
            Command::Scatter => "scatter",
            Command::Resonance => "resonance",
            Command::Flux => "flux",
            Command::AsymptoticCheck => "asymptotic-check",
            Command::Selfcheck => "selfcheck",
        }
    }
}

#[derive(Debug, Default, Args)]
struct Flags {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// undeformed | cutoff | kempf | maxmomentum
    #[arg(long, global = true, value_name = "KIND")]
    deformation: Option<String>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Momentum cutoff of the cutoff deformation.
    #[arg(long, global = true)]
    b: Option<f64>,
    /// Well strength V0; the reduced coupling mV0/(πħ) is derived.
    #[arg(long, global = true)]
    v0: Option<f64>,
    #[arg(long, global = true)]
    hbar: Option<f64>,
    #[arg(long, global = true)]
    mass: Option<f64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Incident momentum for asymptotic-check.
    #[arg(long, global = true)]
    k: Option<f64>,
    #[arg(long, global = true)]
    k_min: Option<f64>,
    #[arg(long, global = true)]
    k_max: Option<f64>,
    /// Energy range, converted to k = √(2mE).
    #[arg(long, global = true)]
    e_min: Option<f64>,
    #[arg(long, global = true)]
    e_max: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long, global = true)]
    v0_min: Option<f64>,
    #[arg(long, global = true)]
    v0_max: Option<f64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| ConfigError::Io {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
            cfg.apply_text(&text)?;
        }
        if let Some(kind) = &self.deformation {
            cfg.deformation = kind.parse().map_err(|e: Error| ConfigError::Invalid {
                key: "deformation",
                reason: e.to_string(),
            })?;
        }
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field { cfg.$field = Some(v); }
            )*};
        }
        take!(beta, b, k, k_min, k_max, e_min, e_max, x_min, x_max, v0_min, v0_max, samples);
        for (dst, src) in [
            (&mut cfg.v0, self.v0),
            (&mut cfg.hbar, self.hbar),
            (&mut cfg.mass, self.mass),
            (&mut cfg.tol, self.tol),
        ] {
            if let Some(v) = src {
                *dst = v;
            }
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if let Some(o) = &self.output {
            cfg.output = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One table cell or metadata value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => format_number(*v)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or_else(|| Value::String(format_number(*v)), Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

/// 15 significant digits with trailing zeros dropped; plain notation for
/// decimal exponents in `[-5, 15)`, `d.ddde±x` otherwise.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.14e}", v.abs());
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let mut digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    while digits.len() > 1 && digits.ends_with('0') {
        digits.pop();
    }
    let sign = if v < 0.0 { "-" } else { "" };
    let body = if (-5..15).contains(&exponent) {
        if exponent >= 0 {
            let int_len = exponent as usize + 1;
            if digits.len() <= int_len {
                format!("{digits}{}", "0".repeat(int_len - digits.len()))
            } else {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("0.{}{digits}", "0".repeat((-exponent - 1) as usize))
        }
    } else if digits.len() == 1 {
        format!("{digits}e{exponent}")
    } else {
        format!("{}.{}e{exponent}", &digits[..1], &digits[1..])
    };
    format!("{sign}{body}")
}

/// Everything a subcommand emits.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Vec<(String, Cell)>,
    /// Free-form remarks, e.g. couplings without a resonance.
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Number of failed checks (selfcheck only).
    pub failures: usize,
}

impl OutputRecord {
    fn new(command: Command, columns: &[&str]) -> Self {
        Self {
            command: command.name().into(),
            parameters: Vec::new(),
            notes: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            failures: 0,
        }
    }

    fn param(&mut self, key: &str, value: Cell) {
        self.parameters.push((key.into(), value));
    }

    fn push(&mut self, row: Vec<f64>) {
        self.rows.push(row.into_iter().map(Cell::Num).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# schema_version={SCHEMA_VERSION}\n# command={}\n",
            self.command
        );
        for (k, v) in &self.parameters {
            s.push_str(&format!("# {k}={}\n", v.csv()));
        }
        for n in &self.notes {
            s.push_str(&format!("# {n}\n"));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert(
            "schema_version".into(),
            Value::String(SCHEMA_VERSION.into()),
        );
        root.insert("command".into(), Value::String(self.command.clone()));
        let params: Map<String, Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), v.json()))
            .collect();
        root.insert("parameters".into(), Value::Object(params));
        root.insert(
            "notes".into(),
            Value::Array(self.notes.iter().cloned().map(Value::String).collect()),
        );
        root.insert(
            "columns".into(),
            Value::Array(self.columns.iter().cloned().map(Value::String).collect()),
        );
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json))
                        .collect(),
                )
            })
            .collect();
        root.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
        s.push('\n');
        s
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn echo_common(rec: &mut OutputRecord, cfg: &RunConfig, d: &DeformationSpec, pot: &PotentialSpec) {
    echo_deformation(rec, cfg, d, pot);
    rec.param("v0", Cell::Num(pot.v0()));
    rec.param("vtilde", Cell::Num(pot.vtilde()));
    echo_units(rec, cfg, pot);
}

fn echo_deformation(
    rec: &mut OutputRecord,
    cfg: &RunConfig,
    d: &DeformationSpec,
    pot: &PotentialSpec,
) {
    rec.param("deformation", Cell::text(cfg.deformation.name()));
    if let Some(beta) = d.beta() {
        rec.param("beta", Cell::Num(beta));
    }
    rec.param("b", Cell::Num(d.b()));
    rec.param("a", Cell::Num(d.a()));
    rec.param("min_length", Cell::Num(d.min_length(pot.hbar())));
}

fn echo_units(rec: &mut OutputRecord, cfg: &RunConfig, pot: &PotentialSpec) {
    rec.param("hbar", Cell::Num(pot.hbar()));
    rec.param("mass", Cell::Num(pot.mass()));
    rec.param("tol", Cell::Num(cfg.tol));
}

/// The `k` grid of scatter and flux, with the energies that go with it.
fn momentum_grid(cfg: &RunConfig, d: &DeformationSpec, rec: &mut OutputRecord) -> Vec<f64> {
    let n = cfg.samples.unwrap_or(100);
    rec.param("samples", Cell::Num(n as f64));
    if let (Some(e_lo), Some(e_hi)) = (cfg.e_min, cfg.e_max) {
        rec.param("e_min", Cell::Num(e_lo));
        rec.param("e_max", Cell::Num(e_hi));
        return linspace(e_lo, e_hi, n)
            .into_iter()
            .map(|e| (2.0 * cfg.mass * e).sqrt())
            .collect();
    }
    let lo = cfg.k_min.unwrap_or(0.1);
    let hi = cfg.k_max.unwrap_or_else(|| 5.0f64.min(0.99 * d.a()));
    rec.param("k_min", Cell::Num(lo));
    rec.param("k_max", Cell::Num(hi));
    linspace(lo, hi, n)
}

fn check_range(key: &'static str, lo: f64, hi: f64) -> Result<(), Failure> {
    if lo < hi {
        Ok(())
    } else {
        Err(Failure::Usage(ConfigError::Invalid {
            key,
            reason: format!("range must be increasing, got [{lo}, {hi}]"),
        }))
    }
}

#[derive(Debug)]
enum Failure {
    Usage(ConfigError),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn execute(command: Command, cfg: &RunConfig, workers: usize) -> Result<OutputRecord, Failure> {
    let d = cfg.deformation_spec()?;
    let pot = cfg.potential()?;
    let energy = |k: f64| k * k / (2.0 * cfg.mass);
    let rec = match command {
        Command::Bound => {
            let mut rec = OutputRecord::new(command, &["q", "energy", "i2", "norm_const"]);
            echo_common(&mut rec, cfg, &d, &pot);
            let s = solve_bound_state(&d, &pot)?;
            rec.push(vec![s.q, s.energy, s.i2, s.norm_const]);
            rec
        }
        Command::Wavefunction => {
            let mut rec = OutputRecord::new(command, &["x", "psi"]);
            echo_common(&mut rec, cfg, &d, &pot);
            let s = solve_bound_state(&d, &pot)?;
            let (lo, hi) = (cfg.x_min.unwrap_or(-5.0), cfg.x_max.unwrap_or(5.0));
            check_range("x_max", lo, hi)?;
            let n = cfg.samples.unwrap_or(101);
            for (key, v) in [
                ("x_min", lo),
                ("x_max", hi),
                ("samples", n as f64),
                ("q", s.q),
                ("energy", s.energy),
                ("norm_const", s.norm_const),
            ] {
                rec.param(key, Cell::Num(v));
            }
            let xs = linspace(lo, hi, n);
            let psi = ordered_map(&xs, workers, |&x| bound_wavefunction(&d, &s, &pot, x));
            for (x, p) in xs.iter().zip(psi) {
                rec.push(vec![*x, p?]);
            }
            rec
        }
        Command::Scatter => {
            let mut rec = OutputRecord::new(
                command,
                &["k", "energy", "p0", "G", "T", "R", "A_re", "A_im"],
            );
            echo_common(&mut rec, cfg, &d, &pot);
            let ks = momentum_grid(cfg, &d, &mut rec);
            for p in transmission_curve(&d, &pot, &ks, workers)? {
                rec.push(vec![
                    p.k,
                    energy(p.k),
                    p.p0,
                    p.g_pv,
                    p.transmission,
                    p.reflection,
                    p.amplitude.re,
                    p.amplitude.im,
                ]);
            }
            rec
        }
        Command::Flux => {
            let mut rec = OutputRecord::new(
                command,
                &[
                    "k",
                    "energy",
                    "j_incident",
                    "j_transmitted",
                    "j_reflected",
                    "conservation_defect",
                ],
            );
            echo_common(&mut rec, cfg, &d, &pot);
            let ks = momentum_grid(cfg, &d, &mut rec);
            for (k, r) in ks.iter().zip(ordered_map(&ks, workers, |&k| {
                flux_conservation_check(&d, &pot, k)
            })) {
                let r = r?;
                rec.push(vec![
                    *k,
                    energy(*k),
                    r.j_incident,
                    r.j_transmitted,
                    r.j_reflected,
                    r.conservation_defect,
                ]);
            }
            rec
        }
        Command::Resonance => resonance_record(cfg, &d, &pot, workers)?,
        Command::AsymptoticCheck => {
            let mut rec = OutputRecord::new(
                command,
                &[
                    "x",
                    "integral_re",
                    "integral_im",
                    "expected_re",
                    "expected_im",
                    "deviation",
                ],
            );
            echo_common(&mut rec, cfg, &d, &pot);
            let k = cfg.k.unwrap_or(1.0);
            let (lo, hi) = (cfg.x_min.unwrap_or(20.0), cfg.x_max.unwrap_or(200.0));
            check_range("x_max", lo, hi)?;
            let n = cfg.samples.unwrap_or(4);
            let xs = linspace(lo, hi, n);
            let report = asymptotic_wave_check_with(&d, k, &xs, cfg.hbar, cfg.tol)?;
            for (key, v) in [
                ("k", k),
                ("p0", report.p0),
                ("x_min", lo),
                ("x_max", hi),
                ("samples", n as f64),
            ] {
                rec.param(key, Cell::Num(v));
            }
            rec.param(
                "decreasing_overall",
                Cell::text(report.decreasing_overall.to_string()),
            );
            for s in report.samples {
                rec.push(vec![
                    s.x,
                    s.integral.re,
                    s.integral.im,
                    s.expected.re,
                    s.expected.im,
                    s.deviation,
                ]);
            }
            rec
        }
        Command::Selfcheck => selfcheck_record(cfg),
    };
    Ok(rec)
}

fn resonance_record(
    cfg: &RunConfig,
    d: &DeformationSpec,
    pot: &PotentialSpec,
    workers: usize,
) -> Result<OutputRecord, Failure> {
    let finite_band = d.b().is_finite();
    let mut columns = vec!["v0", "vtilde", "k_star", "energy"];
    if finite_band {
        columns.push("edge_gap");
    }
    columns.push("residual");
    let mut rec = OutputRecord::new(Command::Resonance, &columns);
    echo_deformation(&mut rec, cfg, d, pot);
    echo_units(&mut rec, cfg, pot);
    let (lo, hi) = (cfg.v0_min.unwrap_or(0.5), cfg.v0_max.unwrap_or(5.0));
    check_range("v0_max", lo, hi)?;
    let n = cfg.samples.unwrap_or(10);
    let k_max = cfg
        .k_max
        .unwrap_or(if d.a().is_finite() { d.a() } else { 20.0 });
    for (key, v) in [
        ("v0_min", lo),
        ("v0_max", hi),
        ("samples", n as f64),
        ("k_max", k_max),
    ] {
        rec.param(key, Cell::Num(v));
    }
    let v0s = linspace(lo, hi, n);
    let scale = cfg.mass / (PI * cfg.hbar);
    let vtildes: Vec<f64> = v0s.iter().map(|v| v * scale).collect();
    let curve = resonance_curve(d, &vtildes, k_max, workers)?;
    for (v0, vt) in v0s.iter().zip(&vtildes) {
        let hits: Vec<_> = curve.points.iter().filter(|p| p.vtilde == *vt).collect();
        if hits.is_empty() {
            let none = Cell::text("none");
            let mut row = vec![Cell::Num(*v0), Cell::Num(*vt), none.clone(), none.clone()];
            if finite_band {
                row.push(none.clone());
            }
            row.push(none);
            rec.notes.push(format!(
                "no resonance below k_max for v0={}",
                format_number(*v0)
            ));
            if cfg.format == Format::Json {
                rec.rows.push(row);
            }
            continue;
        }
        for p in hits {
            let mut row = vec![*v0, *vt, p.k_star, p.k_star * p.k_star / (2.0 * cfg.mass)];
            if finite_band {
                row.push(p.edge_gap);
            }
            row.push(p.residual);
            rec.push(row);
        }
    }
    Ok(rec)
}

struct Check {
    name: &'static str,
    value: f64,
    expected: f64,
    tolerance: f64,
}

fn selfcheck_record(cfg: &RunConfig) -> OutputRecord {
    let mut rec = OutputRecord::new(
        Command::Selfcheck,
        &["check", "value", "expected", "tolerance", "status"],
    );
    rec.param("tol", Cell::Num(cfg.tol));
    let unit = |v0: f64| PotentialSpec::new(v0, 1.0, 1.0);
    let reduced = |vt: f64| PotentialSpec::from_reduced(vt, 1.0, 1.0);
    let kempf = |beta: f64| DeformationSpec::kempf(beta);

    type Probe = Box<dyn Fn() -> crate::Result<Check>>;
    let probes: Vec<Probe> = vec![
        Box::new(move || {
            let s = solve_bound_state(&DeformationSpec::undeformed(), &unit(1.0)?)?;
            Ok(Check {
                name: "undeformed_bound_energy",
                value: s.energy,
                expected: -0.5,
                tolerance: 1e-10,
            })
        }),
        Box::new(move || {
            let pot = unit(1.0)?;
            let numeric = solve_bound_state(&kempf(0.01)?, &pot)?.energy;
            Ok(Check {
                name: "kempf_bound_energy_beta_0.01",
                value: numeric,
                expected: kempf_bound_energy(0.01, &pot)?,
                tolerance: 1e-8,
            })
        }),
        Box::new(move || {
            let pot = unit(1.0)?;
            let defect = |beta: f64| -> crate::Result<f64> {
                Ok((bound_energy_series(beta, &pot) - kempf_bound_energy(beta, &pot)?).abs())
            };
            Ok(Check {
                name: "series_defect_ratio",
                value: defect(1e-4)? / defect(1e-6)?,
                expected: 1000.0,
                tolerance: 700.0,
            })
        }),
        Box::new(move || {
            Ok(Check {
                name: "cutoff_principal_value",
                value: g_principal(&DeformationSpec::cutoff(10.0)?, 1.0)?,
                expected: (9.0f64 / 11.0).ln(),
                tolerance: 1e-8,
            })
        }),
        Box::new(move || {
            Ok(Check {
                name: "kempf_principal_value",
                value: g_principal(&kempf(1.0)?, 1.0)?,
                expected: -PI / 2.0,
                tolerance: 1e-8,
            })
        }),
        Box::new(move || {
            Ok(Check {
                name: "max_momentum_principal_value",
                value: g_principal(&DeformationSpec::max_momentum(1.0)?, 0.5)?,
                expected: 0.0,
                tolerance: 1e-8,
            })
        }),
        Box::new(move || {
            let (t, _) =
                transmission_reflection(&DeformationSpec::undeformed(), &reduced(0.5)?, PI * 0.5)?;
            Ok(Check {
                name: "undeformed_half_transmission",
                value: t,
                expected: 0.5,
                tolerance: 1e-12,
            })
        }),
        Box::new(move || {
            Ok(Check {
                name: "kempf_resonance",
                value: find_resonance(&kempf(1.0)?, &reduced(1.0)?, 0.5, 3.0)?,
                expected: (PI - 1.0).sqrt(),
                tolerance: 1e-8,
            })
        }),
        Box::new(move || {
            Ok(Check {
                name: "cutoff_resonance",
                value: find_resonance(&DeformationSpec::cutoff(10.0)?, &reduced(4.0)?, 6.0, 8.0)?,
                expected: 7.104117834878704,
                tolerance: 1e-8,
            })
        }),
        Box::new(move || {
            let missing = matches!(
                find_resonance(&kempf(1.0)?, &reduced(0.1)?, 0.1, 50.0),
                Err(Error::NoSignChange { .. })
            );
            Ok(Check {
                name: "weak_kempf_has_no_resonance",
                value: if missing { 1.0 } else { 0.0 },
                expected: 1.0,
                tolerance: 0.0,
            })
        }),
        Box::new(move || {
            Ok(Check {
                name: "kempf_plane_wave_flux",
                value: plane_wave_flux(
                    &kempf(1.0)?,
                    &unit(1.0)?,
                    PI / 4.0,
                    Complex64::new(1.0, 0.0),
                )?,
                expected: 2.0,
                tolerance: 1e-12,
            })
        }),
        Box::new(move || {
            let r = asymptotic_wave_check_with(&kempf(1.0)?, 1.0, &[100.0], 1.0, 1e-10)?;
            Ok(Check {
                name: "kempf_far_field_deviation",
                value: r.samples[0].deviation,
                expected: 0.0,
                tolerance: 0.02,
            })
        }),
    ];

    for probe in probes {
        match probe() {
            Ok(c) => {
                let pass = (c.value - c.expected).abs() <= c.tolerance;
                rec.failures += usize::from(!pass);
                rec.rows.push(vec![
                    Cell::text(c.name),
                    Cell::Num(c.value),
                    Cell::Num(c.expected),
                    Cell::Num(c.tolerance),
                    Cell::text(if pass { "pass" } else { "fail" }),
                ]);
            }
            Err(e) => {
                rec.failures += 1;
                rec.notes.push(format!("check failed with error: {e}"));
            }
        }
    }
    rec
}

fn workers_from_env() -> Result<usize, String> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(1),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!(
                "{WORKERS_ENV} must be a positive integer, got `{s}`"
            )),
        },
    }
}

/// Parses `argv` (program name first), runs the subcommand and writes its
/// output. Returns the process exit code: 0 on success, 1 for computation
/// errors and failed self-checks, 2 for usage errors.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 2;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    let cfg = match cli.flags.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let workers = match workers_from_env() {
        Ok(n) => n,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let record = match execute(cli.command, &cfg, workers) {
        Ok(r) => r,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let text = match cfg.format {
        Format::Csv => record.to_csv(),
        Format::Json => record.to_json(),
    };
    let written = match &cfg.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    if record.failures > 0 {
        let _ = writeln!(err, "error: {} self-check(s) failed", record.failures);
        return 1;
    }
    0
}
