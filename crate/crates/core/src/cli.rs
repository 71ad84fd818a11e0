//! The `spectra` command line.
//!
//! Exit codes: 0 on success, 1 when a verification row fails while its
//! hypothesis holds, 2 for unusable input (bad flags, unreadable or
//! malformed density files), 3 when a computation fails.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::density::{Density, DensitySpec};
use crate::error::{Error, Result};
use crate::oracle::{flux_reference_eigenvalues, reference_eigenvalues, DEFAULT_MESHES};
use crate::prufer::{Solver, SolverConfig, DEFAULT_REL_TOL, DEFAULT_STEPS};
use crate::transform::{legendre_map, DEFAULT_TABLE_SIZE};
use crate::verify::{corpus, write_reports, Claim, Format, Suite, VerifyConfig, DEFAULT_TAU_STEPS};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;

const MIN_REL_TOL: f64 = 1e-14;
const MAX_REL_TOL: f64 = 1e-2;
/// Samples of `t(x)` written by `transform`.
const MAP_SAMPLES: usize = 100;

#[derive(Debug, Parser)]
#[command(
    name = "spectra",
    version,
    about = "Dirichlet spectra of vibrating strings and checks of their ratio bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and zeros of each density, next to the finite-difference oracle.
    Solve(RunArgs),
    /// Verification rows for the selected claims.
    Verify(RunArgs),
    /// Reduce -(p y')' = λ ρ y (two densities: p then ρ) to a string problem.
    Transform(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// Density JSON file; repeat for several densities.
    #[arg(long = "density", value_name = "PATH")]
    pub densities: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Claim::All)]
    pub claim: Claim,
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    #[arg(long = "rel-tol", default_value_t = DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    /// RK4 steps across [0, 1].
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub grid: usize,
    /// Coarse and fine finite-difference meshes.
    #[arg(long, value_name = "N,N", value_parser = parse_mesh, default_value = "1000,2000")]
    pub mesh: (usize, usize),
    #[arg(long = "tau-steps", default_value_t = DEFAULT_TAU_STEPS)]
    pub tau_steps: usize,
    #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Fill the runtime_ms column (makes output run-dependent).
    #[arg(long)]
    pub timings: bool,
}

fn parse_mesh(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated sizes, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    let (a, b) = (parse(a)?, parse(b)?);
    if !(a >= 2 && b > a) {
        return Err(format!("meshes must satisfy 2 <= coarse < fine, got {a},{b}"));
    }
    Ok((a, b))
}

/// Validated settings of one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: &'static str,
    pub densities: Vec<PathBuf>,
    pub claim: Claim,
    pub verify: VerifyConfig,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(command: &'static str, args: RunArgs) -> Result<Self> {
        if args.nmax < 1 {
            return Err(Error::Domain("--nmax must be at least 1".into()));
        }
        if !(MIN_REL_TOL..=MAX_REL_TOL).contains(&args.rel_tol) {
            return Err(Error::Domain(format!(
                "--rel-tol must lie in [{MIN_REL_TOL:e}, {MAX_REL_TOL:e}], got {}",
                args.rel_tol
            )));
        }
        if args.grid < 16 {
            return Err(Error::Domain(format!("--grid must be at least 16, got {}", args.grid)));
        }
        if args.tau_steps < 2 {
            return Err(Error::Domain(format!(
                "--tau-steps must be at least 2, got {}",
                args.tau_steps
            )));
        }
        let solver = SolverConfig::default().with_rel_tol(args.rel_tol).with_steps(args.grid);
        Ok(Self {
            command,
            densities: args.densities,
            claim: args.claim,
            verify: VerifyConfig {
                solver,
                n_max: args.nmax,
                tau_steps: args.tau_steps,
                meshes: args.mesh,
                seed: args.seed,
            },
            format: args.format,
            out: args.out,
            timings: args.timings,
        })
    }

    /// Provenance line: the defaults, then the values in effect.
    pub fn header(&self) -> String {
        let v = &self.verify;
        format!(
            "# spectra {} defaults: grid={DEFAULT_STEPS} rel_tol={DEFAULT_REL_TOL:e} mesh={},{} tau_steps={DEFAULT_TAU_STEPS} seed={}; \
             run: claim={:?} nmax={} grid={} rel_tol={:e} mesh={},{} tau_steps={} seed={} format={:?}\n",
            self.command,
            DEFAULT_MESHES.0,
            DEFAULT_MESHES.1,
            corpus::DEFAULT_SEED,
            self.claim,
            v.n_max,
            v.solver.steps,
            v.solver.rel_tol,
            v.meshes.0,
            v.meshes.1,
            v.tau_steps,
            v.seed,
            self.format,
        )
        .to_lowercase()
    }

    fn load_densities(&self) -> Result<Vec<Density>> {
        self.densities.iter().map(load_density).collect()
    }
}

/// Reads and builds one density file. Every failure is an input error.
pub fn load_density(path: &PathBuf) -> Result<Density> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    DensitySpec::from_json(&text)
        .and_then(|s| s.build())
        .map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => Error::Parse(format!("{}: {other}", path.display())),
        })
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Domain(_) => EXIT_INPUT,
        _ => EXIT_SOLVER,
    }
}

#[derive(Serialize)]
struct SolveRow {
    density_digest: String,
    n: usize,
    lambda: f64,
    zeros: String,
    oracle_lambda: f64,
}

#[derive(Serialize)]
struct TransformRow {
    kind: &'static str,
    n: Option<usize>,
    x: Option<f64>,
    value: f64,
    oracle: Option<f64>,
}

fn emit<T: Serialize>(buf: &mut Vec<u8>, rows: &[T], format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *buf);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            for r in rows {
                serde_json::to_writer(&mut *buf, r)?;
                buf.push(b'\n');
            }
        }
    }
    Ok(())
}

fn solve(cfg: &RunConfig) -> Result<(Vec<u8>, u8)> {
    let densities = cfg.load_densities()?;
    if densities.is_empty() {
        return Err(Error::Domain("solve needs at least one --density".into()));
    }
    let solver = Solver::new(cfg.verify.solver);
    let mut rows = Vec::new();
    for d in &densities {
        let spectrum = solver.spectrum(d, cfg.verify.n_max)?;
        let refs = reference_eigenvalues(d, cfg.verify.n_max, cfg.verify.meshes)?;
        for (p, r) in spectrum.pairs.iter().zip(refs) {
            let mut zeros = String::new();
            for (i, z) in p.zeros.iter().enumerate() {
                if i > 0 {
                    zeros.push(';');
                }
                write!(zeros, "{z}").expect("writing to a String");
            }
            rows.push(SolveRow {
                density_digest: d.digest(),
                n: p.index,
                lambda: p.lambda,
                zeros,
                oracle_lambda: r.value,
            });
        }
    }
    let mut buf = Vec::new();
    emit(&mut buf, &rows, cfg.format)?;
    Ok((buf, EXIT_OK))
}

fn verify(cfg: &RunConfig) -> Result<(Vec<u8>, u8)> {
    let suite = Suite::new(cfg.verify);
    let densities = if cfg.densities.is_empty() {
        suite.default_densities()
    } else {
        cfg.load_densities()?
    };
    let rows = suite.run(cfg.claim, &densities, &suite.default_pairs())?;
    let mut buf = Vec::new();
    write_reports(&mut buf, &rows, cfg.format.into(), cfg.timings)?;
    let code = if rows.iter().any(|r| r.is_violation()) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    };
    Ok((buf, code))
}

fn transform(cfg: &RunConfig) -> Result<(Vec<u8>, u8)> {
    let densities = cfg.load_densities()?;
    let [p, rho] = densities.as_slice() else {
        return Err(Error::Domain(format!(
            "transform needs exactly two --density files (p, then ρ), got {}",
            densities.len()
        )));
    };
    let map = legendre_map(p, rho, DEFAULT_TABLE_SIZE)?;
    let n_max = cfg.verify.n_max;
    let lambdas = Solver::new(cfg.verify.solver).eigenvalues(map.effective_density(), n_max)?;
    let refs = flux_reference_eigenvalues(p, rho, n_max, cfg.verify.meshes)?;

    let mut rows = vec![TransformRow {
        kind: "sigma",
        n: None,
        x: None,
        value: map.sigma(),
        oracle: None,
    }];
    rows.extend((0..=MAP_SAMPLES).map(|k| {
        let x = k as f64 / MAP_SAMPLES as f64;
        TransformRow {
            kind: "t_of_x",
            n: None,
            x: Some(x),
            value: map.t_of_x(x),
            oracle: None,
        }
    }));
    rows.extend(lambdas.iter().zip(&refs).enumerate().map(|(i, (l, r))| TransformRow {
        kind: "lambda",
        n: Some(i + 1),
        x: None,
        value: *l,
        oracle: Some(r.value),
    }));
    let mut buf = Vec::new();
    emit(&mut buf, &rows, cfg.format)?;
    Ok((buf, EXIT_OK))
}

/// Runs one parsed invocation and returns its exit status. Diagnostics go
/// to standard error.
pub fn run(cli: Cli) -> u8 {
    let (name, args) = match cli.command {
        Command::Solve(a) => ("solve", a),
        Command::Verify(a) => ("verify", a),
        Command::Transform(a) => ("transform", a),
    };
    let cfg = match RunConfig::new(name, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("spectra: {e}");
            return exit_code(&e);
        }
    };
    let outcome = match name {
        "solve" => solve(&cfg),
        "verify" => verify(&cfg),
        _ => transform(&cfg),
    };
    let (body, code) = match outcome {
        Ok(v) => v,
        Err(e) => {
            eprintln!("spectra: {e}");
            return exit_code(&e);
        }
    };
    let mut text = cfg.header().into_bytes();
    text.extend(body);
    let written = match &cfg.out {
        Some(path) => fs::write(path, &text),
        None => std::io::stdout().lock().write_all(&text),
    };
    if let Err(e) = written {
        eprintln!("spectra: cannot write output: {e}");
        return EXIT_SOLVER;
    }
    code
}

/// Entry point of the binary. Flag errors exit with status 2.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    ExitCode::from(run(cli))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> Cli {
        let mut v = vec!["spectra"];
        v.extend(extra);
        Cli::try_parse_from(v).unwrap()
    }

    #[test]
    fn mesh_flag() {
        assert_eq!(parse_mesh("100, 200"), Ok((100, 200)));
        assert!(parse_mesh("200,100").is_err());
        assert!(parse_mesh("100").is_err());
    }

    #[test]
    fn defaults_in_header() {
        let Command::Verify(a) = args(&["verify"]).command else {
            unreachable!()
        };
        let cfg = RunConfig::new("verify", a).unwrap();
        let h = cfg.header();
        assert!(
            h.starts_with("# spectra verify defaults: grid=4096 rel_tol=1e-10 mesh=1000,2000 tau_steps=21 seed=42;")
        );
        assert!(h.ends_with('\n'));
    }

    #[test]
    fn rel_tol_range_is_enforced() {
        for bad in ["1e-15", "0.1"] {
            let Command::Solve(a) = args(&["solve", "--rel-tol", bad]).command else {
                unreachable!()
            };
            let e = RunConfig::new("solve", a).unwrap_err();
            assert_eq!(exit_code(&e), EXIT_INPUT);
        }
    }

    #[test]
    fn claim_names_parse() {
        let Command::Verify(a) = args(&["verify", "--claim", "crossings"]).command else {
            unreachable!()
        };
        assert_eq!(a.claim, Claim::Crossings);
        assert!(Cli::try_parse_from(["spectra", "verify", "--claim", "nonsense"]).is_err());
    }

    #[test]
    fn solver_errors_map_to_three() {
        let e = Error::Resolution {
            mesh: 10,
            requested: 8,
            required: 64,
        };
        assert_eq!(exit_code(&e), EXIT_SOLVER);
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_INPUT);
    }
}
