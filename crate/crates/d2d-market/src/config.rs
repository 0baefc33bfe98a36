//! Experiment configuration: a flat `key = value` file with a schema
//! version, strict unknown-key rejection, and defaults for every field.
//!
//! Lines are `key = value` pairs; blank lines and lines starting with `#`
//! are ignored. Every key is optional (an empty file is the default
//! experiment) but unknown or duplicate keys are errors, as are values that
//! violate a field's invariant. The cache model is either the `cache_hit`
//! probability key or the catalog triple `catalog_size` / `zipf_exponent` /
//! `device_capacity`; mixing the two styles is an error.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::auction::AuctionConfig;
use crate::caching::ZipfCatalog;
use crate::error::{Error, Result};
use crate::scenario::{CacheModel, ScenarioConfig};

pub const SCHEMA_VERSION: u64 = 1;

/// Which solver families an experiment runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Stackelberg,
    Auction,
    Both,
}

impl Mode {
    pub fn runs_stackelberg(&self) -> bool {
        matches!(self, Mode::Stackelberg | Mode::Both)
    }

    pub fn runs_auction(&self) -> bool {
        matches!(self, Mode::Auction | Mode::Both)
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stackelberg" => Ok(Mode::Stackelberg),
            "auction" => Ok(Mode::Auction),
            "both" => Ok(Mode::Both),
            other => Err(Error::Config {
                line: None,
                message: format!(
                    "mode: expected one of stackelberg|auction|both, got {other:?}"
                ),
            }),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Stackelberg => "stackelberg",
            Mode::Auction => "auction",
            Mode::Both => "both",
        })
    }
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config {
                line: None,
                message: format!("output_format: expected csv|json, got {other:?}"),
            }),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// A fully validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub mode: Mode,
    pub config: ScenarioConfig,
    pub output_path: PathBuf,
    pub output_format: OutputFormat,
    pub emit_trace: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            mode: Mode::Both,
            config: ScenarioConfig::default(),
            output_path: PathBuf::from("summary.csv"),
            output_format: OutputFormat::Csv,
            emit_trace: false,
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "schema_version",
    "mode",
    "output_path",
    "output_format",
    "emit_trace",
    "cell_radius_m",
    "cluster_radius_m",
    "n_counterparties",
    "n_clusters",
    "noise_density_dbm_hz",
    "bandwidth_hz",
    "gain",
    "max_power_mw",
    "xi_r",
    "xi_d",
    "beta_ms",
    "cost_low",
    "cost_high",
    "cache_hit",
    "catalog_size",
    "zipf_exponent",
    "device_capacity",
    "backhaul_cost",
    "background_users",
    "max_users",
    "seed",
    "runs",
    "auction_supply_mw",
    "auction_initial_price",
    "auction_step",
    "auction_max_clocks",
];

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line: Some(line),
        message: message.into(),
    }
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| {
        config_err(
            line,
            format!(
                "{key}: cannot parse {raw:?} as {}",
                std::any::type_name::<T>()
            ),
        )
    })
}

/// Parse a config document into a spec, applying defaults for missing keys
/// and validating everything.
pub fn parse_config(text: &str) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::default();
    let mut seen: HashSet<String> = HashSet::new();
    let mut cache_hit: Option<f64> = None;
    let mut catalog_size: Option<u64> = None;
    let mut zipf_exponent: Option<f64> = None;
    let mut device_capacity: Option<u64> = None;
    let mut auction = spec
        .config
        .auction
        .expect("default config has an auction section");
    let (mut supply, mut initial_price, mut step, mut max_clocks) = (
        auction.supply_mw(),
        auction.initial_price(),
        auction.step(),
        auction.max_clocks(),
    );

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            config_err(line_no, format!("expected `key = value`, got {line:?}"))
        })?;
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(config_err(line_no, format!("unknown key {key:?}")));
        }
        if !seen.insert(key.to_string()) {
            return Err(config_err(line_no, format!("duplicate key {key:?}")));
        }
        if value.is_empty() {
            return Err(config_err(line_no, format!("{key}: empty value")));
        }

        match key {
            "schema_version" => {
                let v: u64 = parse_value(line_no, key, value)?;
                if v != SCHEMA_VERSION {
                    return Err(config_err(
                        line_no,
                        format!("schema_version: expected {SCHEMA_VERSION}, got {v}"),
                    ));
                }
            }
            "mode" => {
                spec.mode = value.parse().map_err(|e| match e {
                    Error::Config { message, .. } => config_err(line_no, message),
                    other => other,
                })?
            }
            "output_path" => spec.output_path = PathBuf::from(value),
            "output_format" => {
                spec.output_format = value.parse().map_err(|e| match e {
                    Error::Config { message, .. } => config_err(line_no, message),
                    other => other,
                })?
            }
            "emit_trace" => spec.emit_trace = parse_value(line_no, key, value)?,
            "cell_radius_m" => spec.config.cell_radius_m = parse_value(line_no, key, value)?,
            "cluster_radius_m" => {
                spec.config.cluster_radius_m = parse_value(line_no, key, value)?
            }
            "n_counterparties" => {
                spec.config.n_counterparties = parse_value(line_no, key, value)?
            }
            "n_clusters" => spec.config.n_clusters = parse_value(line_no, key, value)?,
            "noise_density_dbm_hz" => {
                spec.config.noise_density_dbm_hz = parse_value(line_no, key, value)?
            }
            "bandwidth_hz" => spec.config.bandwidth_hz = parse_value(line_no, key, value)?,
            "gain" => spec.config.gain = parse_value(line_no, key, value)?,
            "max_power_mw" => spec.config.max_power_mw = parse_value(line_no, key, value)?,
            "xi_r" => spec.config.xi_r = parse_value(line_no, key, value)?,
            "xi_d" => spec.config.xi_d = parse_value(line_no, key, value)?,
            "beta_ms" => spec.config.beta_ms = parse_value(line_no, key, value)?,
            "cost_low" => spec.config.cost_low = parse_value(line_no, key, value)?,
            "cost_high" => spec.config.cost_high = parse_value(line_no, key, value)?,
            "cache_hit" => cache_hit = Some(parse_value(line_no, key, value)?),
            "catalog_size" => catalog_size = Some(parse_value(line_no, key, value)?),
            "zipf_exponent" => zipf_exponent = Some(parse_value(line_no, key, value)?),
            "device_capacity" => device_capacity = Some(parse_value(line_no, key, value)?),
            "backhaul_cost" => spec.config.backhaul_cost = parse_value(line_no, key, value)?,
            "background_users" => {
                spec.config.background_users = parse_value(line_no, key, value)?
            }
            "max_users" => spec.config.max_users = parse_value(line_no, key, value)?,
            "seed" => spec.config.seed = parse_value(line_no, key, value)?,
            "runs" => spec.config.runs = parse_value(line_no, key, value)?,
            "auction_supply_mw" => supply = parse_value(line_no, key, value)?,
            "auction_initial_price" => initial_price = parse_value(line_no, key, value)?,
            "auction_step" => step = parse_value(line_no, key, value)?,
            "auction_max_clocks" => max_clocks = parse_value(line_no, key, value)?,
            _ => unreachable!("key membership checked above"),
        }
    }

    let catalog_keys = [
        catalog_size.is_some(),
        zipf_exponent.is_some(),
        device_capacity.is_some(),
    ];
    if catalog_keys.iter().any(|p| *p) {
        if cache_hit.is_some() {
            return Err(Error::Config {
                line: None,
                message: "cache_hit cannot be combined with the catalog keys".into(),
            });
        }
        if !catalog_keys.iter().all(|p| *p) {
            return Err(Error::Config {
                line: None,
                message:
                    "catalog_size, zipf_exponent and device_capacity must be given together"
                        .into(),
            });
        }
        let catalog = ZipfCatalog::new(
            catalog_size.unwrap(),
            zipf_exponent.unwrap(),
            device_capacity.unwrap(),
        )
        .map_err(|e| Error::Config {
            line: None,
            message: e.to_string(),
        })?;
        spec.config.cache = CacheModel::Catalog(catalog);
    } else if let Some(p) = cache_hit {
        spec.config.cache = CacheModel::Probability(p);
    }

    auction = AuctionConfig::new(supply, initial_price, step, max_clocks).map_err(|e| {
        Error::Config {
            line: None,
            message: e.to_string(),
        }
    })?;
    spec.config.auction = Some(auction);

    spec.config.validate().map_err(|e| Error::Config {
        line: None,
        message: e.to_string(),
    })?;
    Ok(spec)
}

/// Read and parse a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_config(&text)
}

/// Serialize a spec back to the config format; `parse_config` of the result
/// reproduces the spec exactly.
pub fn dump_config(spec: &ExperimentSpec) -> String {
    let c = &spec.config;
    let mut out = String::new();
    let mut push = |key: &str, value: String| {
        out.push_str(key);
        out.push_str(" = ");
        out.push_str(&value);
        out.push('\n');
    };
    push("schema_version", SCHEMA_VERSION.to_string());
    push("mode", spec.mode.to_string());
    push("output_path", spec.output_path.display().to_string());
    push("output_format", spec.output_format.to_string());
    push("emit_trace", spec.emit_trace.to_string());
    push("cell_radius_m", c.cell_radius_m.to_string());
    push("cluster_radius_m", c.cluster_radius_m.to_string());
    push("n_counterparties", c.n_counterparties.to_string());
    push("n_clusters", c.n_clusters.to_string());
    push("noise_density_dbm_hz", c.noise_density_dbm_hz.to_string());
    push("bandwidth_hz", c.bandwidth_hz.to_string());
    push("gain", c.gain.to_string());
    push("max_power_mw", c.max_power_mw.to_string());
    push("xi_r", c.xi_r.to_string());
    push("xi_d", c.xi_d.to_string());
    push("beta_ms", c.beta_ms.to_string());
    push("cost_low", c.cost_low.to_string());
    push("cost_high", c.cost_high.to_string());
    match &c.cache {
        CacheModel::Probability(p) => push("cache_hit", p.to_string()),
        CacheModel::Catalog(cat) => {
            push("catalog_size", cat.catalog_size().to_string());
            push("zipf_exponent", cat.exponent().to_string());
            push("device_capacity", cat.device_capacity().to_string());
        }
    }
    push("backhaul_cost", c.backhaul_cost.to_string());
    push("background_users", c.background_users.to_string());
    push("max_users", c.max_users.to_string());
    push("seed", c.seed.to_string());
    push("runs", c.runs.to_string());
    if let Some(a) = &c.auction {
        push("auction_supply_mw", a.supply_mw().to_string());
        push("auction_initial_price", a.initial_price().to_string());
        push("auction_step", a.step().to_string());
        push("auction_max_clocks", a.max_clocks().to_string());
    }
    out
}
