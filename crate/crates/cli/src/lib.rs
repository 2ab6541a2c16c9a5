//! `dirac1d`: scattering sweeps, bound states and self-checks from the shell.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical failure (the offending rows are still written, marked).

pub mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dirac_pt::boundstates::{self, BoundStateRecord, PoleConfig, ReducedProblem, ShootConfig, ZeroEnergyClass};
use dirac_pt::potentials::{PotentialClass, PotentialModel};
use dirac_pt::{potentials, sweep, verify, Error};

use config::{Format, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: msg.into() }
    }

    /// Bad input maps to 2, everything else to 3.
    pub fn from_core(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. }
            | Error::UnknownFunction { .. }
            | Error::UnknownIdentifier { .. }
            | Error::UnboundParameter(_)
            | Error::ZeroShift
            | Error::PoleOnAxis { .. }
            | Error::LimitMismatch { .. }
            | Error::InvalidParameter(_)
            | Error::WrongPotentialClass(_)
            | Error::OutOfStatedDomain(_)
            | Error::UnsupportedModel(_)
            | Error::ShiftDomain(_) => EXIT_CONFIG,
            _ => EXIT_NUMERIC,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dirac1d", version, about = "1D Dirac scattering and bound states for PT-symmetric potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transmission and reflection over an energy grid.
    Scatter(RunArgs),
    /// Bound states, zero modes and half-bound states.
    Bound(RunArgs),
    /// Run the built-in numerical checks.
    Verify(VerifyArgs),
    /// List the catalog models and their parameters.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Catalog model name (see `catalog`).
    #[arg(long)]
    pub model: Option<String>,
    /// Model parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = config::parse_param)]
    pub params: Vec<(String, f64)>,
    /// Vector potential V(x) in the expression language.
    #[arg(long = "expr-V", value_name = "EXPR")]
    pub expr_v: Option<String>,
    /// Scalar potential S(x).
    #[arg(long = "expr-S", value_name = "EXPR")]
    pub expr_s: Option<String>,
    /// Pseudoscalar potential P(x).
    #[arg(long = "expr-P", value_name = "EXPR")]
    pub expr_p: Option<String>,
    /// Asymptotic limits V-,V+,S-,S+,P-,P+ of an expression model.
    #[arg(long, value_name = "LIST", value_parser = config::parse_limits)]
    pub limits: Option<dirac_pt::formalism::AsymptoticLimits>,
    /// Tail class of an expression model: exp:RATE, alg:POWER or const.
    #[arg(long, value_parser = config::parse_tail)]
    pub tail: Option<dirac_pt::potentials::Tail>,
    #[arg(long = "E-min")]
    pub e_min: Option<f64>,
    #[arg(long = "E-max")]
    pub e_max: Option<f64>,
    #[arg(long = "E-count")]
    pub e_count: Option<usize>,
    /// Box half-width L.
    #[arg(long = "L")]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub atol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Solve the grid in one thread.
    #[arg(long)]
    pub sequential: bool,
}

impl RunArgs {
    fn overrides(&self) -> RunConfig {
        RunConfig {
            model: self.model.clone(),
            params: self.params.iter().cloned().collect(),
            expr_v: self.expr_v.clone(),
            expr_s: self.expr_s.clone(),
            expr_p: self.expr_p.clone(),
            limits: self.limits,
            tail: self.tail,
            e_min: self.e_min,
            e_max: self.e_max,
            e_count: self.e_count,
            half_width: self.half_width,
            rtol: self.rtol,
            atol: self.atol,
            format: self.format,
            out: self.out.clone(),
            parallel: self.sequential.then_some(false),
        }
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Ok(base.merged(self.overrides()))
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// formalism, centrifugal, pseudoscalar, scalar, susy or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Where to write the JSON report; stdout after the table when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(command: &Command) -> Result<i32, CliError> {
    match command {
        Command::Scatter(a) => scatter(&a.resolve()?),
        Command::Bound(a) => bound(&a.resolve()?),
        Command::Verify(a) => run_verify(a),
        Command::Catalog(a) => catalog(a.format),
    }
}

fn emit(out: Option<&PathBuf>, body: &[u8]) -> Result<(), CliError> {
    let res = match out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body),
    };
    res.map_err(|e| CliError { code: EXIT_NUMERIC, message: format!("write failed: {e}") })
}

fn scatter(cfg: &RunConfig) -> Result<i32, CliError> {
    let model = cfg.model()?;
    let icfg = cfg.integrator()?;
    let (lo, hi) = match (cfg.e_min, cfg.e_max) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(CliError::config("scatter needs --E-min and --E-max")),
    };
    let energies = sweep::energy_grid(lo, hi, cfg.e_count.unwrap_or(101)).map_err(CliError::from_core)?;
    let rows = sweep::scatter_sweep(&model, &energies, &icfg, cfg.parallel.unwrap_or(true));
    let failed = rows.iter().filter(|r| r.is_err()).count();
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => output::csv_rows(&energies, &rows)?,
        Format::Json => output::json_rows(&model, &energies, &rows)?,
    };
    emit(cfg.out.as_ref(), &body)?;
    if failed > 0 {
        eprintln!("error: {failed} of {} energies failed; see the status column", energies.len());
        return Ok(EXIT_NUMERIC);
    }
    Ok(EXIT_OK)
}

fn shoot_config(icfg: &dirac_pt::integrator::IntegratorConfig) -> ShootConfig {
    ShootConfig { half_width: icfg.half_width, integrator: *icfg, ..ShootConfig::default() }
}

/// Shoot partner `j` over [min Re U - margin, threshold).
fn shoot_partner(model: &PotentialModel, j: u8, cfg: &ShootConfig) -> Result<Vec<BoundStateRecord>, Error> {
    let problem = ReducedProblem::partner(model, j)?;
    let top = problem.u.threshold();
    let l = cfg.half_width.unwrap_or_else(|| model.default_half_width());
    let mut low = top;
    for i in 0..=2000 {
        let x = -l + 2.0 * l * i as f64 / 2000.0;
        if let Ok(u) = problem.u.eval(x) {
            low = low.min(u.re);
        }
    }
    let lo = low - 0.25 * (top - low).max(1.0);
    match boundstates::shoot(&problem, (lo, top), cfg) {
        Err(Error::NoBracket) => Ok(Vec::new()),
        other => other,
    }
}

fn bound(cfg: &RunConfig) -> Result<i32, CliError> {
    let model = cfg.model()?;
    let icfg = cfg.integrator()?;
    let scfg = shoot_config(&icfg);
    let pcfg = PoleConfig { half_width: icfg.half_width, integrator: icfg, ..PoleConfig::default() };
    let mut summaries = Vec::new();
    match model.class() {
        PotentialClass::Zero => {}
        PotentialClass::PurePseudoscalar => {
            // partner view: a level shared by U1 and U2 is listed once per partner
            for j in [1, 2] {
                for r in shoot_partner(&model, j, &scfg).map_err(CliError::from_core)? {
                    summaries.push(output::BoundSummary::from_record(&r, "shoot"));
                }
            }
        }
        PotentialClass::PureScalar => {
            // both partners carry the same Dirac states; shoot U1 and confirm by T poles
            let found = shoot_partner(&model, 1, &scfg).map_err(CliError::from_core)?;
            let poles = transmission_scan(&model, &pcfg).map_err(CliError::from_core)?;
            for r in &found {
                let confirmed = poles.iter().any(|p| (p.energy - r.energy).abs() < 1e-6 * r.energy.abs().max(1.0));
                summaries.push(output::BoundSummary::from_record(r, if confirmed { "shoot+pole" } else { "shoot" }));
            }
        }
        _ => {
            for r in transmission_scan(&model, &pcfg).map_err(CliError::from_core)? {
                summaries.push(output::BoundSummary::from_record(&r, "pole"));
            }
            match boundstates::zero_energy_classify(&model, &icfg).map_err(CliError::from_core)? {
                ZeroEnergyClass::ZeroMode { energy, normalizable, .. } => {
                    summaries.push(output::BoundSummary::threshold(energy, model.m, "zero_mode", Some(normalizable)))
                }
                ZeroEnergyClass::HalfBound { energy } => summaries.push(output::BoundSummary::threshold(energy, model.m, "half_bound", None)),
                ZeroEnergyClass::None => {}
            }
        }
    }
    summaries.sort_by(|a, b| a.partner.cmp(&b.partner).then(a.energy.total_cmp(&b.energy)));
    let body = serde_json::to_vec_pretty(&summaries).map_err(|e| CliError { code: EXIT_NUMERIC, message: e.to_string() })?;
    emit(cfg.out.as_ref(), &[body, b"\n".to_vec()].concat())?;
    Ok(EXIT_OK)
}

/// Poles of T strictly inside the gap on the left.
fn transmission_scan(model: &PotentialModel, cfg: &PoleConfig) -> Result<Vec<BoundStateRecord>, Error> {
    let lim = model.limits;
    let gap = ((model.m + lim.s_minus).powi(2) + lim.p_minus.powi(2)).sqrt().re;
    if !(gap > 0.0) {
        return Ok(Vec::new());
    }
    match boundstates::transmission_poles(model, (0.02 * gap, 0.999 * gap), cfg) {
        Err(Error::NoBracket) => Ok(Vec::new()),
        other => other,
    }
}

fn run_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let suite: verify::Suite = args.suite.parse().map_err(CliError::from_core)?;
    let report = verify::run(suite);
    print!("{}", report.table());
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError { code: EXIT_NUMERIC, message: e.to_string() })?;
    match &args.out {
        Some(path) => emit(Some(path), json.as_bytes())?,
        None => println!("{json}"),
    }
    let failures = report.failures().count();
    eprintln!("{} checks, {failures} failed", report.checks.len());
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
}

fn catalog(format: Format) -> Result<i32, CliError> {
    let entries = potentials::catalog();
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&entries).map_err(|e| CliError { code: EXIT_NUMERIC, message: e.to_string() })? + "\n",
        Format::Csv => {
            let mut s = String::new();
            for e in &entries {
                let params: Vec<String> = e.params.iter().map(|(n, d, _)| format!("{n}={d}")).collect();
                s.push_str(&format!("{:<18} {:<60} {}\n", e.name, e.summary, params.join(" ")));
            }
            s
        }
    };
    emit(None, body.as_bytes())?;
    Ok(EXIT_OK)
}
