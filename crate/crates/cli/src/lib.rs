//! Command-line front end for the tricritical Dicke model library.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{load_table, resolve, set_key, to_toml, Format};
use crate::error::{CliError, CliResult};
use crate::output::{manifest_path, manifest_toml, write_file, Report};

#[derive(Debug, Parser)]
#[command(name = "tricritical", version, about = "Phase diagram, gap and entanglement of the tricritical Dicke model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate z, f, gap, entropy and phase on an (x, y, lambda) grid.
    Sweep(SweepArgs),
    /// Trace the phase boundary over a range of x.
    Boundary(BoundaryArgs),
    /// Fit scaling exponents along an approach to the critical line.
    Scaling(ScalingArgs),
    /// Exact diagonalization at finite atom numbers.
    Ed(EdArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML configuration; a previous run's manifest works too.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    pub format: Option<String>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Start-vector seed for iterative eigensolvers.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub x_count: Option<i64>,
    #[arg(long)]
    pub y_min: Option<f64>,
    #[arg(long)]
    pub y_max: Option<f64>,
    #[arg(long)]
    pub y_count: Option<i64>,
    /// Comma-separated lambda values.
    #[arg(long = "lambda", value_delimiter = ',')]
    pub lambdas: Vec<f64>,
    /// Comma-separated subset of z,f,gap,entropy,gamma,phase.
    #[arg(long, value_delimiter = ',')]
    pub quantities: Vec<String>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub resolution: Option<i64>,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Line point x_c, or "qtp".
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, value_parser = ["superradiant", "normal"])]
    pub side: Option<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub n_min: Option<f64>,
    #[arg(long)]
    pub n_max: Option<f64>,
    #[arg(long)]
    pub n_count: Option<i64>,
    #[arg(long)]
    pub relation_n: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EdArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Comma-separated even atom numbers.
    #[arg(long, value_delimiter = ',')]
    pub atoms: Vec<i64>,
    #[arg(long)]
    pub n_max: Option<i64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub max_dim: Option<i64>,
    #[arg(long)]
    pub max_escalations: Option<i64>,
    /// Raw cavity frequency (use with --delta, --g, --epsilon).
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

/// Collects flag overrides as dotted TOML keys.
struct Overrides(Vec<(&'static str, toml::Value)>);

impl Overrides {
    fn new(common: &CommonArgs) -> Self {
        let mut o = Overrides(Vec::new());
        o.set("format", common.format.clone());
        o
    }

    fn set<V: Into<toml::Value>>(&mut self, key: &'static str, value: Option<V>) {
        if let Some(v) = value {
            self.0.push((key, v.into()));
        }
    }

    fn list<V: Into<toml::Value> + Clone>(&mut self, key: &'static str, values: &[V]) {
        if !values.is_empty() {
            self.0.push((key, toml::Value::Array(values.iter().cloned().map(Into::into).collect())));
        }
    }

    fn apply(self, common: &CommonArgs) -> CliResult<toml::Table> {
        let mut table = match &common.config {
            Some(path) => load_table(path)?,
            None => toml::Table::new(),
        };
        for (key, value) in self.0 {
            set_key(&mut table, key, value);
        }
        Ok(table)
    }
}

fn u64_to_toml(v: u64) -> CliResult<toml::Value> {
    i64::try_from(v).map(toml::Value::Integer).map_err(|_| CliError::Usage(format!("seed {v} exceeds 2^63 - 1")))
}

fn thread_pool(threads: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| CliError::Usage(e.to_string()))
}

fn emit<C: serde::Serialize>(common: &CommonArgs, config: &C, format: Format, started: String, report: Report) -> CliResult<()> {
    let bytes = report.render(format)?;
    match &common.output {
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
        Some(path) => {
            write_file(path, &bytes)?;
            let finished = chrono::Utc::now().to_rfc3339();
            let text = manifest_toml(to_toml(config)?, &report.manifest, &started, &finished, path)?;
            write_file(&manifest_path(path), text.as_bytes())?;
        }
    }
    Ok(())
}

/// Parse overrides, run the command and write its outputs.
pub fn run(cli: Cli) -> CliResult<()> {
    let started = chrono::Utc::now().to_rfc3339();
    match cli.command {
        Command::Sweep(a) => {
            let mut o = Overrides::new(&a.common);
            o.set("x.min", a.x_min);
            o.set("x.max", a.x_max);
            o.set("x.count", a.x_count);
            o.set("y.min", a.y_min);
            o.set("y.max", a.y_max);
            o.set("y.count", a.y_count);
            o.list("lambdas", &a.lambdas);
            o.list("quantities", &a.quantities);
            let cfg: config::SweepConfig = resolve(o.apply(&a.common)?)?;
            let report = thread_pool(a.common.threads)?.install(|| commands::sweep(&cfg))?;
            emit(&a.common, &cfg, cfg.format, started, report)
        }
        Command::Boundary(a) => {
            let mut o = Overrides::new(&a.common);
            o.set("x_min", a.x_min);
            o.set("x_max", a.x_max);
            o.set("resolution", a.resolution);
            let cfg: config::BoundaryConfig = resolve(o.apply(&a.common)?)?;
            let report = thread_pool(a.common.threads)?.install(|| commands::boundary(&cfg))?;
            emit(&a.common, &cfg, cfg.format, started, report)
        }
        Command::Scaling(a) => {
            let mut o = Overrides::new(&a.common);
            let target = match a.target.as_deref() {
                None => None,
                Some("qtp") => Some(toml::Value::from("qtp")),
                Some(s) => Some(toml::Value::Float(
                    s.parse().map_err(|_| CliError::Usage(format!("target: expected a number or \"qtp\" (got {s:?})")))?,
                )),
            };
            o.set("target", target);
            o.set("side", a.side);
            o.set("lambda", a.lambda);
            o.set("n_min", a.n_min);
            o.set("n_max", a.n_max);
            o.set("n_count", a.n_count);
            o.set("relation_n", a.relation_n);
            let cfg: config::ScalingConfig = resolve(o.apply(&a.common)?)?;
            let report = thread_pool(a.common.threads)?.install(|| commands::scaling(&cfg))?;
            emit(&a.common, &cfg, cfg.format, started, report)
        }
        Command::Ed(a) => {
            let mut o = Overrides::new(&a.common);
            o.set("x", a.x);
            o.set("y", a.y);
            o.set("lambda", a.lambda);
            o.set("omega0", a.omega0);
            o.list("atoms", &a.atoms);
            o.set("n_max", a.n_max);
            o.set("tolerance", a.tolerance);
            o.set("max_dim", a.max_dim);
            o.set("max_escalations", a.max_escalations);
            o.set("raw.omega", a.omega);
            o.set("raw.delta", a.delta);
            o.set("raw.g", a.g);
            o.set("raw.epsilon", a.epsilon);
            o.set("seed", a.common.seed.map(u64_to_toml).transpose()?);
            let cfg: config::EdRunConfig = resolve(o.apply(&a.common)?)?;
            let report = thread_pool(a.common.threads)?.install(|| commands::ed(&cfg))?;
            emit(&a.common, &cfg, cfg.format, started, report)
        }
    }
}
