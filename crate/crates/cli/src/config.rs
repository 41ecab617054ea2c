//! Run configurations: a TOML file merged with command-line overrides.
//!
//! Keys set on the command line replace the file's values. A `[run]` table,
//! as written into manifests, is ignored on load so a manifest can be fed
//! back as a configuration.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tricritical::criticality::Side;
use tricritical::params::RawParams;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Z,
    F,
    Gap,
    Entropy,
    Gamma,
    Phase,
}

impl Quantity {
    pub const ALL: [Quantity; 6] =
        [Quantity::Z, Quantity::F, Quantity::Gap, Quantity::Entropy, Quantity::Gamma, Quantity::Phase];
}

/// `count` evenly spaced values from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.max } else { self.min + (self.max - self.min) * i as f64 / last })
            .collect()
    }

    fn check(&self, name: &str) -> CliResult<()> {
        if self.count < 1 {
            return Err(CliError::Usage(format!("{name}.count must be at least 1")));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            return Err(CliError::Usage(format!("{name}: need finite min <= max (got {} .. {})", self.min, self.max)));
        }
        Ok(())
    }
}

fn default_lambdas() -> Vec<f64> {
    vec![1.0]
}

fn default_quantities() -> Vec<Quantity> {
    Quantity::ALL.to_vec()
}

fn csv_format() -> Format {
    Format::Csv
}

fn json_format() -> Format {
    Format::Json
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "csv_format")]
    pub format: Format,
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default = "default_quantities")]
    pub quantities: Vec<Quantity>,
    pub x: Range,
    pub y: Range,
}

impl SweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.x.check("x")?;
        self.y.check("y")?;
        if !(self.x.min >= 0.0 && self.x.max < 1.0) {
            return Err(CliError::Usage(format!("x: range must lie in [0, 1) (got {} .. {})", self.x.min, self.x.max)));
        }
        if self.y.min < 0.0 {
            return Err(CliError::Usage(format!("y: range must be non-negative (got min {})", self.y.min)));
        }
        if self.lambdas.is_empty() || self.lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(CliError::Usage("lambdas: need at least one finite positive value".into()));
        }
        if self.quantities.is_empty() {
            return Err(CliError::Usage("quantities: request at least one quantity".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    #[serde(default = "json_format")]
    pub format: Format,
    #[serde(default)]
    pub x_min: f64,
    #[serde(default = "default_boundary_x_max")]
    pub x_max: f64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_boundary_x_max() -> f64 {
    0.9
}

fn default_resolution() -> usize {
    50
}

impl BoundaryConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.resolution < 2 {
            return Err(CliError::Usage(format!("resolution must be at least 2 (got {})", self.resolution)));
        }
        if !(self.x_min >= 0.0 && self.x_min < self.x_max && self.x_max < 1.0) {
            return Err(CliError::Usage(format!(
                "x_min, x_max: need 0 <= x_min < x_max < 1 (got {} .. {})",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }
}

/// Either a point of the second-order line, by its `x`, or `"qtp"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    X(f64),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    #[serde(default = "json_format")]
    pub format: Format,
    pub target: Target,
    #[serde(default = "default_side")]
    pub side: Side,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_n_min")]
    pub n_min: f64,
    #[serde(default = "default_n_max")]
    pub n_max: f64,
    #[serde(default = "default_n_count")]
    pub n_count: usize,
    /// Distance at which the gap-entropy relation is reported.
    #[serde(default = "default_relation_n")]
    pub relation_n: f64,
}

fn default_side() -> Side {
    Side::Superradiant
}

fn default_lambda() -> f64 {
    1.0
}

fn default_n_min() -> f64 {
    1e-9
}

fn default_n_max() -> f64 {
    1e-5
}

fn default_n_count() -> usize {
    41
}

fn default_relation_n() -> f64 {
    1e-8
}

impl ScalingConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.format != Format::Json {
            return Err(CliError::Usage("format: scaling reports are written as JSON only".into()));
        }
        match &self.target {
            Target::Named(name) if name != "qtp" => {
                return Err(CliError::Usage(format!("target: expected a number or \"qtp\" (got {name:?})")))
            }
            _ => {}
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(CliError::Usage(format!("lambda must be positive (got {})", self.lambda)));
        }
        if !(self.n_min > 0.0 && self.n_min < self.n_max && self.n_max.is_finite()) {
            return Err(CliError::Usage(format!(
                "n_min, n_max: need 0 < n_min < n_max (got {} .. {})",
                self.n_min, self.n_max
            )));
        }
        if self.n_count < 2 {
            return Err(CliError::Usage(format!("n_count must be at least 2 (got {})", self.n_count)));
        }
        if !(self.relation_n > 0.0 && self.relation_n.is_finite()) {
            return Err(CliError::Usage(format!("relation_n must be positive (got {})", self.relation_n)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdRunConfig {
    #[serde(default = "json_format")]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Energy scale; ignored when `raw` is given.
    #[serde(default = "default_omega0")]
    pub omega0: f64,
    pub atoms: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    #[serde(default = "default_max_escalations")]
    pub max_escalations: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Hamiltonian parameters in absolute units instead of `x, y, lambda`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<RawParams>,
}

fn default_omega0() -> f64 {
    1.0
}

fn default_tolerance() -> f64 {
    1e-10
}

fn default_max_dim() -> usize {
    2_000_000
}

fn default_max_escalations() -> usize {
    12
}

fn default_seed() -> u64 {
    0x5eed
}

impl EdRunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.atoms.is_empty() {
            return Err(CliError::Usage("atoms: list at least one atom number".into()));
        }
        if let Some(&n) = self.atoms.iter().find(|&&n| n == 0 || n % 2 != 0) {
            return Err(CliError::Usage(format!("atoms: {n} is not a positive even integer")));
        }
        let dimensionless = [self.x, self.y, self.lambda];
        match (&self.raw, dimensionless.iter().filter(|v| v.is_some()).count()) {
            (Some(_), 0) | (None, 3) => Ok(()),
            (Some(_), _) => Err(CliError::Usage("raw: give either raw parameters or x, y, lambda, not both".into())),
            (None, _) => Err(CliError::Usage("x, y, lambda: all three are required without raw parameters".into())),
        }
    }
}

/// Parse a TOML file into a table, dropping a manifest's `[run]` section.
pub fn load_table(path: &Path) -> CliResult<toml::Table> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut table: toml::Table =
        text.parse().map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    table.remove("run");
    Ok(table)
}

/// Set a dotted key, creating intermediate tables.
pub fn set_key(table: &mut toml::Table, key: &str, value: toml::Value) {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("non-empty key");
    let mut cur = table;
    for part in parts {
        let entry = cur.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        if !entry.is_table() {
            *entry = toml::Value::Table(toml::Table::new());
        }
        cur = entry.as_table_mut().expect("just made a table");
    }
    cur.insert(last.to_string(), value);
}

pub fn resolve<T: DeserializeOwned>(table: toml::Table) -> CliResult<T> {
    toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| CliError::Usage(e.message().trim().to_string()))
}

pub fn to_toml<T: Serialize>(config: &T) -> CliResult<toml::Table> {
    match toml::Value::try_from(config) {
        Ok(toml::Value::Table(t)) => Ok(t),
        Ok(_) => Err(CliError::Usage("configuration is not a table".into())),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}
