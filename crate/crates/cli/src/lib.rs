//! Command-line driver: scenario files in, CSV and JSON out.

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fsg_core::filter::{FilterConfig, FilterKind};
use fsg_core::reference::{collocation_reference, convergence_table, Method};
use fsg_core::{ClosureKind, Error, Scenario, Solver};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "fsg", version, about = "Filtered stochastic Galerkin solvers for uncertain conservation laws")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory (default: [output] dir of the scenario, or . for slice).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario and write the final moment field.
    Run(ScenarioArgs),
    /// Error-versus-N study against a collocation reference.
    Converge {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Truncation orders.
        #[arg(long, value_delimiter = ',', default_value = "5,10,15,20")]
        orders: Vec<usize>,
        /// Methods as closure[:filter[:lambda]], e.g. sg, sg:lasso_adaptive, sg:l2:1e-5, ipm.
        #[arg(long, value_delimiter = ',', default_value = "sg,sg:lasso_adaptive")]
        methods: Vec<String>,
        #[command(flatten)]
        reference: ReferenceArgs,
        /// Conserved state whose error is measured.
        #[arg(long, default_value_t = 0)]
        state: usize,
    },
    /// Collocation reference mean and variance.
    Reference {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        reference: ReferenceArgs,
    },
    /// Profile in ξ of the cell containing a point of a field CSV.
    Slice {
        /// field.csv written by `run`.
        field: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: Option<f64>,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario file.
    pub path: PathBuf,
    /// section.key=value, applied before validation; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ReferenceArgs {
    /// Gauss-Lobatto collocation nodes.
    #[arg(long, default_value_t = 40)]
    pub nodes: usize,
    /// Spatial refinement of the reference mesh.
    #[arg(long, default_value_t = 4)]
    pub factor: usize,
}

/// 2 for a failed dual solve, 3 for loss of hyperbolicity, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    fn core(e: &Error) -> u8 {
        match e {
            Error::NonConvergence { .. } => 2,
            Error::HyperbolicityLoss { .. } => 3,
            Error::Collocation { source, .. } => core(source),
            _ => 1,
        }
    }
    err.chain().find_map(|e| e.downcast_ref::<Error>()).map_or(1, core)
}

pub fn parse_method(spec: &str) -> Result<Method> {
    let mut parts = spec.split(':');
    let closure = ClosureKind::parse(parts.next().unwrap_or(""))?;
    let kind = FilterKind::parse(parts.next().unwrap_or("none"))?;
    let lambda = match parts.next() {
        Some(l) => l.parse::<f64>().with_context(|| format!("filter strength in '{spec}'"))?,
        None if matches!(kind, FilterKind::L2 | FilterKind::LassoFixed) => {
            bail!("method '{spec}' needs a filter strength, e.g. {}:{}:1e-5", closure.name(), kind.name())
        }
        None => 0.0,
    };
    if parts.next().is_some() {
        bail!("method '{spec}' has too many fields");
    }
    Ok(Method { closure, filter: FilterConfig::new(kind, lambda)? })
}

fn load(args: &ScenarioArgs) -> Result<(config::ScenarioFile, Scenario)> {
    let file = config::load(&args.path, &args.overrides)?;
    let scenario = file.to_scenario().with_context(|| format!("in {}", args.path.display()))?;
    Ok((file, scenario))
}

fn out_dir(cli_out: &Option<PathBuf>, file: &config::ScenarioFile) -> Result<PathBuf> {
    let dir = cli_out.clone().unwrap_or_else(|| file.output.dir.clone());
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Run(args) => {
            let (file, scenario) = load(args)?;
            let dir = out_dir(&cli.out, &file)?;
            run_scenario(&scenario, &file, &dir)
        }
        Command::Converge { scenario: args, orders, methods, reference, state } => {
            let (file, scenario) = load(args)?;
            let dir = out_dir(&cli.out, &file)?;
            let methods = methods.iter().map(|m| parse_method(m)).collect::<Result<Vec<_>>>()?;
            if *state >= scenario.physics.states() {
                bail!("state {state} does not exist for {}", scenario.physics.name());
            }
            let reference = collocation_reference(&scenario, reference.nodes, reference.factor)?;
            let rows = convergence_table(&scenario, orders, &methods, &reference, *state)?;
            output::write_convergence(&dir.join("convergence.csv"), &rows)?;
            let slopes = output::slopes(&rows)?;
            if !slopes.is_empty() {
                output::write_slopes(&dir.join("slopes.csv"), &slopes)?;
            }
            Ok(())
        }
        Command::Reference { scenario: args, reference } => {
            let (file, scenario) = load(args)?;
            let dir = out_dir(&cli.out, &file)?;
            run_reference(&scenario, reference, &dir)
        }
        Command::Slice { field, x, y, points } => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let table = output::read_field(field)?;
            let rows = output::slice(&table, *x, *y, *points)?;
            output::write_slice(&dir.join("slice.csv"), &rows)
        }
    }
}

fn run_scenario(scenario: &Scenario, file: &config::ScenarioFile, dir: &Path) -> Result<()> {
    let solver = Solver::new(scenario)?;
    let mesh = solver.mesh();
    let mut snapshot_error = None;
    let solution = solver.run_with(file.output.snapshot_every, |step, _, field| {
        if snapshot_error.is_none() {
            let path = dir.join(format!("snapshot_{step:06}.csv"));
            snapshot_error = output::write_field(&path, mesh, field).err();
        }
    })?;
    if let Some(e) = snapshot_error {
        return Err(e);
    }
    let field = &solution.field;
    output::write_field(&dir.join("field.csv"), mesh, field)?;
    output::write_cell_values(&dir.join("mean.csv"), mesh, field.states(), "mean", |s, j| field.mean_and_variance(s, j).0)?;
    output::write_cell_values(&dir.join("variance.csv"), mesh, field.states(), "variance", |s, j| {
        field.mean_and_variance(s, j).1
    })?;
    output::write_json(&dir.join("report.json"), &output::ReportJson::new(scenario, &solution.report))?;
    let resolved = config::ScenarioFile::from_scenario(scenario, file.output.clone());
    std::fs::write(dir.join("scenario.toml"), resolved.to_toml()?)?;
    Ok(())
}

#[derive(Serialize)]
struct ReferenceJson<'a> {
    scenario: &'a str,
    nodes: usize,
    factor: usize,
    nx: usize,
    ny: usize,
    threads: usize,
    wall_time_s: f64,
}

fn run_reference(scenario: &Scenario, args: &ReferenceArgs, dir: &Path) -> Result<()> {
    let start = Instant::now();
    let reference = collocation_reference(scenario, args.nodes, args.factor)?;
    let mesh = scenario.mesh()?;
    let p = reference.states();
    let means: Vec<Vec<f64>> = (0..p).map(|s| reference.mean(s)).collect();
    let vars: Vec<Vec<f64>> = (0..p).map(|s| reference.variance(s)).collect();
    output::write_cell_values(&dir.join("mean.csv"), &mesh, p, "mean", |s, j| means[s][j])?;
    output::write_cell_values(&dir.join("variance.csv"), &mesh, p, "variance", |s, j| vars[s][j])?;
    output::write_json(
        &dir.join("reference.json"),
        &ReferenceJson {
            scenario: &scenario.name,
            nodes: args.nodes,
            factor: args.factor,
            nx: scenario.domain.nx,
            ny: scenario.domain.ny,
            threads: rayon::current_num_threads(),
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    )
}

/// Parse `args`, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(anyhow!("--threads must be positive")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(e.into()),
        },
        None => run(&cli),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
