//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::gaps::{
    check_pinching_table, check_threshold_table, pinching_table, tau_star, threshold_table, write_pinching_csv,
    write_threshold_csv,
};
use crate::lemmas::{run_suite, FaultInjection};
use crate::pipeline::{verify_sources, Verification};
use crate::ratpoly::Rational;
use crate::report::{identities_report, verify_report, VerifyEcho};
use crate::surface::catalog;
use crate::tolerances::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISTRUST: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "minimal-gap-lab",
    version,
    about = "Verification engine for gap and pinching results on minimal surfaces in spheres"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Prove the algebraic identities exactly for codimensions 1..=qmax.
    Identities(IdentitiesArgs),
    /// Run the geometry pipeline and certificates on one or more surfaces.
    Verify(VerifyArgs),
    /// Tabulate the threshold functions and pinching roots as CSV.
    Thresholds(ThresholdArgs),
    /// Built-in surfaces.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    /// List catalog entries.
    List,
}

#[derive(Args, Debug)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 6)]
    pub qmax: usize,
    /// Write the report to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Add a rational constant to one identity's left side, as `name=p/q`.
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Catalog name or spec file path; repeatable.
    #[arg(long = "surface", required = true)]
    pub surfaces: Vec<String>,
    /// Grid size as `NxM`.
    #[arg(long, default_value = "64x128", value_parser = parse_resolution)]
    pub resolution: [usize; 2],
    /// Write the report to this path instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Tolerance override `key=value`; repeatable.
    #[arg(long = "tol")]
    pub tolerances: Vec<String>,
    /// Include per-node invariant records in the report.
    #[arg(long)]
    pub points: bool,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    /// Write the τ table here and the γ table next to it with a `_gamma` suffix.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Left end of the τ grid (default τ*).
    #[arg(long)]
    pub tau_min: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 1000)]
    pub tau_points: usize,
    #[arg(long, default_value_t = 401)]
    pub gamma_points: usize,
}

pub fn parse_resolution(text: &str) -> std::result::Result<[usize; 2], String> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("`{text}` is not of the form NxM"))?;
    let parse = |s: &str| usize::from_str(s.trim()).map_err(|_| format!("`{s}` is not a positive integer"));
    Ok([parse(a)?, parse(b)?])
}

/// `foo/bar.csv` → `foo/bar_gamma.csv`.
pub fn gamma_csv_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_gamma.{}", ext.to_string_lossy()),
        None => format!("{stem}_gamma"),
    };
    path.with_file_name(name)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<'a, I, T>(args: I, out: &'a mut dyn Write, err: &'a mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Identities(a) => cmd_identities(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Thresholds(a) => cmd_thresholds(&a, out, err),
        Command::Catalog { action: CatalogAction::List } => cmd_catalog_list(out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn parse_fault(text: &str) -> Result<FaultInjection> {
    let (name, delta) = text
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("fault `{text}` is not name=value")))?;
    let delta = Rational::from_str(delta.trim())
        .map_err(|_| Error::Config(format!("fault value `{delta}` is not a rational")))?;
    Ok(FaultInjection {
        identity: name.trim().to_string(),
        delta,
    })
}

pub fn cmd_identities(a: &IdentitiesArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if a.qmax < 1 {
        return Err(Error::Config("qmax must be at least 1".into()));
    }
    let fault = a.inject_fault.as_deref().map(parse_fault).transpose()?;
    let suite = pool(a.workers)?.install(|| run_suite(a.qmax, fault.as_ref()));
    for r in &suite.reports {
        let q = r.q.map_or("-".to_string(), |q| q.to_string());
        writeln!(out, "{:<26} {:<38} q={:<2} {}", r.group.name(), r.name, q, r.verdict.as_str())?;
    }
    for r in suite.failures() {
        writeln!(err, "identity {} (q = {:?}) failed; residual:", r.name, r.q)?;
        if let Some(res) = &r.residual {
            write!(err, "{}", res.dump())?;
        }
    }
    let code = if suite.all_proved() { EXIT_OK } else { EXIT_FAILURE };
    if let Some(path) = &a.json {
        std::fs::write(path, identities_report(&suite, code).to_json())?;
    }
    writeln!(
        out,
        "{} of {} identities proved",
        suite.reports.iter().filter(|r| r.proved()).count(),
        suite.reports.len()
    )?;
    Ok(code)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut tol = Tolerances::default();
    for t in &a.tolerances {
        tol.apply(t)?;
    }
    let workers = pool(a.workers)?;
    let Verification {
        runs,
        exit_code: code,
        diagnostics,
    } = workers.install(|| verify_sources(&a.surfaces, a.resolution, &tol));
    let echo = VerifyEcho {
        surfaces: &a.surfaces,
        resolution: a.resolution,
        tolerances: &tol,
        points: a.points,
    };
    let text = verify_report(&echo, &runs, code, &diagnostics).to_json();
    match &a.json {
        Some(path) => {
            std::fs::write(path, &text)?;
            for run in &runs {
                writeln!(
                    out,
                    "{}: S ∈ [{:.12}, {:.12}], max u = {:.12}, flagged {}/{}",
                    run.spec.name,
                    run.fields.s.iter().copied().fold(f64::INFINITY, f64::min),
                    run.fields.s.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    run.integrals.max_u,
                    run.trust.flagged,
                    run.trust.nodes
                )?;
            }
        }
        None => out.write_all(text.as_bytes())?,
    }
    for d in &diagnostics {
        writeln!(err, "{d}")?;
    }
    Ok(code)
}

pub fn cmd_thresholds(a: &ThresholdArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let tau_min = a.tau_min.unwrap_or_else(tau_star);
    let taus = threshold_table(tau_min, a.tau_max, a.tau_points)?;
    let gammas = pinching_table(a.gamma_points)?;
    let mut failures = check_threshold_table(&taus);
    failures.extend(check_pinching_table(&gammas));
    let first = taus.first().expect("at least two rows");
    let last = taus.last().expect("at least two rows");
    if tau_min == tau_star() && first.sigma.abs() > 1e-10 {
        failures.push(format!("σ(τ*) = {:e} is not 0", first.sigma));
    }
    if a.tau_max == 1.0 && ((last.hat_a - 20.0 / 9.0).abs() > 1e-12 || (last.hat_b - 2.0).abs() > 1e-12) {
        failures.push(format!("T̂_A(1) = {}, T̂_B(1) = {}", last.hat_a, last.hat_b));
    }
    let g_first = gammas.first().expect("at least two rows");
    let g_last = gammas.last().expect("at least two rows");
    if (g_first.s0 - 20.0 / 9.0).abs() > 1e-12 || (g_last.s0 - 2.0).abs() > 1e-12 {
        failures.push(format!("S0(0) = {}, S0(4) = {}", g_first.s0, g_last.s0));
    }
    match &a.csv {
        Some(path) => {
            write_threshold_csv(std::fs::File::create(path)?, &taus)?;
            let gpath = gamma_csv_path(path);
            write_pinching_csv(std::fs::File::create(&gpath)?, &gammas)?;
            writeln!(out, "wrote {} and {}", path.display(), gpath.display())?;
        }
        None => {
            write_threshold_csv(&mut *out, &taus)?;
            writeln!(out)?;
            write_pinching_csv(&mut *out, &gammas)?;
        }
    }
    for f in &failures {
        writeln!(err, "check failed: {f}")?;
    }
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

pub fn cmd_catalog_list(out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "{:<10} {:<7} {:>7} {:>3}  description", "name", "chart", "ambient", "q")?;
    for e in &catalog::ENTRIES {
        let spec = catalog::lookup(e.name)?;
        writeln!(
            out,
            "{:<10} {:<7} {:>7} {:>3}  {}",
            e.name,
            spec.chart.as_str(),
            spec.ambient_dim,
            spec.codimension(),
            e.summary
        )?;
    }
    Ok(EXIT_OK)
}
