//! Run configuration assembled from flags, an optional config file and defaults.
//!
//! Both sources are first reduced to `key -> text` settings so that every
//! value goes through the same parser; flags override the file.
//!
//! Config file format:
//!
//! ```text
//! # comment
//! [model]
//! theta = -0.5pi, 0, 0.3pi
//! length = 12
//! [probe]
//! kpd-grid = pi/64:pi:64
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use faraday::{Boundary, ModelParams, SolverOptions, MAX_LENGTH};
use serde::{Serialize, Serializer};

use crate::error::CliError;
use crate::grid::{parse_grid, parse_value};

pub type Settings = BTreeMap<String, String>;

/// Keys accepted in each config-file section.
const SECTIONS: [(&str, &[&str]); 5] = [
    ("model", &["theta", "length", "boundary"]),
    (
        "probe",
        &["kpd-grid", "alpha-grid", "kappa", "sigma", "site-origin", "input-variance"],
    ),
    ("hubbard", &["u0", "u2", "t-hop"]),
    ("solver", &["max-iterations", "tolerance"]),
    ("run", &["output", "format", "seed", "threads", "product-state"]),
];

fn known_key(key: &str) -> Option<&'static str> {
    SECTIONS
        .iter()
        .find(|(_, keys)| keys.contains(&key))
        .map(|(section, _)| *section)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Ground,
    ScanTheta,
    ProbeMap,
    WitnessScan,
    HubbardMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub theta: Vec<f64>,
    pub length: usize,
    #[serde(serialize_with = "display")]
    pub boundary: Boundary,
    pub kpd_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub kappa: f64,
    pub sigma: f64,
    pub site_origin: f64,
    pub input_variance: f64,
    pub u0: Vec<f64>,
    pub u2: Vec<f64>,
    pub t_hop: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    /// 0 lets the worker pool pick one thread per core.
    pub threads: usize,
    pub product_state: bool,
}

fn display<S: Serializer, T: std::fmt::Display>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Parse config-file text into settings.
pub fn parse_config_file(text: &str) -> Result<Settings, CliError> {
    let mut out = Settings::new();
    let mut section: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Config(format!("config line {}: {msg}", lineno + 1));
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_ascii_lowercase();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(err(format!("unknown section [{name}]")));
            }
            section = Some(name);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim().to_ascii_lowercase().replace('_', "-");
        let home = known_key(&key).ok_or_else(|| err(format!("unknown key `{key}`")))?;
        if let Some(s) = &section {
            if s != home {
                return Err(err(format!("key `{key}` belongs in [{home}], found in [{s}]")));
            }
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

struct Lookup<'a> {
    flags: &'a Settings,
    file: &'a Settings,
}

impl Lookup<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.flags
            .get(key)
            .or_else(|| self.file.get(key))
            .map(String::as_str)
    }

    fn field<T>(
        &self,
        key: &str,
        default: &str,
        parse: impl Fn(&str) -> Result<T, CliError>,
    ) -> Result<T, CliError> {
        let text = self.raw(key).unwrap_or(default);
        parse(text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("--{key}: {msg}")),
            other => other,
        })
    }
}

fn integer<T: std::str::FromStr>(text: &str) -> Result<T, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("`{text}` is not a valid non-negative integer")))
}

fn boolean(text: &str) -> Result<bool, CliError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(CliError::Config(format!("`{other}` is not a boolean"))),
    }
}

fn check(ok: bool, key: &str, msg: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("--{key}: {msg}")))
    }
}

impl RunConfig {
    pub fn resolve(command: Command, flags: &Settings, file: &Settings) -> Result<Self, CliError> {
        for key in flags.keys().chain(file.keys()) {
            if known_key(key).is_none() {
                return Err(CliError::Config(format!("unknown setting `{key}`")));
            }
        }
        let get = Lookup { flags, file };
        let theta_default = match command {
            Command::ScanTheta => "-0.7pi:0.5pi:13",
            Command::ProbeMap => "-0.5pi,0,0.3pi",
            Command::WitnessScan => "-0.5pi,0.102pi,0.3pi",
            Command::Ground | Command::HubbardMap => "0",
        };
        let kpd_default = match command {
            Command::WitnessScan => "pi/64:pi/2:32",
            _ => "pi/64:pi:64",
        };
        let defaults = SolverOptions::default();
        let cfg = RunConfig {
            command,
            theta: get.field("theta", theta_default, parse_grid)?,
            length: get.field("length", "12", integer)?,
            boundary: get.field("boundary", "open", |s| {
                s.trim()
                    .parse::<Boundary>()
                    .map_err(|e| CliError::Config(e.to_string()))
            })?,
            kpd_grid: get.field("kpd-grid", kpd_default, parse_grid)?,
            alpha_grid: get.field("alpha-grid", "0", parse_grid)?,
            kappa: get.field("kappa", "1", parse_value)?,
            sigma: get.field("sigma", "0", parse_value)?,
            site_origin: get.field("site-origin", "1", parse_value)?,
            input_variance: get.field("input-variance", "0.5", parse_value)?,
            u0: get.field("u0", "1", parse_grid)?,
            u2: get.field("u2", "-0.45:0.45:19", parse_grid)?,
            t_hop: get.field("t-hop", "1", parse_value)?,
            max_iterations: get.field(
                "max-iterations",
                &defaults.max_iterations.to_string(),
                integer,
            )?,
            tolerance: get.field("tolerance", &defaults.tolerance.to_string(), parse_value)?,
            output: get.raw("output").map(|s| PathBuf::from(s.trim())),
            format: get.field("format", "csv", |s| match s.trim() {
                "csv" => Ok(Format::Csv),
                "json" => Ok(Format::Json),
                other => Err(CliError::Config(format!("unknown format `{other}`"))),
            })?,
            seed: get.field("seed", &defaults.seed.to_string(), integer)?,
            threads: get.field("threads", "0", integer)?,
            product_state: get.field("product-state", "false", boolean)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        check(
            (2..=MAX_LENGTH).contains(&self.length),
            "length",
            &format!("must lie in [2, {MAX_LENGTH}], got {}", self.length),
        )?;
        for &theta in &self.theta {
            let p = ModelParams {
                theta,
                j_scale: 1.0,
                length: self.length,
                boundary: self.boundary,
            };
            p.validate()
                .map_err(|e| CliError::Config(format!("--theta: {e}")))?;
        }
        if self.command != Command::HubbardMap {
            // Emits the incommensurate-length warning once.
            ModelParams::with_options(self.theta[0], 1.0, self.length, self.boundary)?;
        }
        let modulated = matches!(self.command, Command::ProbeMap | Command::ScanTheta);
        for &k in &self.kpd_grid {
            let ok = if modulated { k > 0.0 } else { k >= 0.0 };
            check(ok, "kpd-grid", &format!("wavevector {k} out of range"))?;
        }
        check(self.kappa > 0.0, "kappa", "must be > 0")?;
        check(self.sigma >= 0.0, "sigma", "must be >= 0")?;
        check(self.input_variance > 0.0, "input-variance", "must be > 0")?;
        check(self.t_hop >= 0.0, "t-hop", "must be >= 0")?;
        check(self.max_iterations > 0, "max-iterations", "must be > 0")?;
        check(self.tolerance > 0.0, "tolerance", "must be > 0")?;
        if self.product_state {
            check(
                self.command == Command::WitnessScan,
                "product-state",
                "only applies to witness-scan",
            )?;
            check(
                self.length <= faraday::witness::PRODUCT_STATE_MAX_LENGTH,
                "product-state",
                "needs --length <= 10",
            )?;
        }
        Ok(())
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            seed: self.seed,
            ..SolverOptions::default()
        }
    }

    pub fn probe_template(&self) -> faraday::ProbeConfig {
        faraday::ProbeConfig {
            kpd: self.kpd_grid[0],
            alpha: self.alpha_grid[0],
            kappa: self.kappa,
            wannier_width: self.sigma,
            input_variance: self.input_variance,
            site_origin: self.site_origin,
        }
    }
}
