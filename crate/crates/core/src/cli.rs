//! Command-line front end shared by the `ribbon` binary and the tests.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::elasticity::EquilibriumSolution;
use crate::geometry::PrincipalCurvatureState;
use crate::io::{export_mesh, load_config, ConfigError, Format, JobConfig, Mode, PhaseCsvWriter, RunReport};
use crate::pipeline::SolverRoute;
use crate::surface::{tessellate, RibbonExtent};
use crate::sweep::{find_boundary, run_sweep_streaming, SweepError};
use crate::verify;

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RESIDUAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "ribbon", version, about = "Equilibrium shapes of thin elastic ribbons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Job configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output.directory`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; repeat for several. Overrides `output.formats`.
    #[arg(long = "format", global = true, value_enum)]
    pub formats: Vec<Format>,
    /// Residual tolerance; overrides `output.residual_tolerance`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Mesh resolution as SxT; overrides the extent block.
    #[arg(long, global = true, value_parser = parse_samples)]
    pub samples: Option<(usize, usize)>,
    /// Print nothing on success.
    #[arg(short, long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Solve a mechanical job: loads, equilibrium, descriptors, class, optional mesh.
    Solve,
    /// Descriptors, class and optional mesh of a prescribed curvature state.
    Geometry,
    /// Write the ribbon mesh (OBJ unless a format is given).
    Mesh,
    /// Run a parameter sweep and stream the phase table as CSV.
    Sweep,
    /// Print the morphology class only.
    Classify,
    /// Run the oracle suites on a seeded random corpus.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Cases for the identity suite; the heavier suites use a tenth.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
}

fn parse_samples(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected SxT, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a < 2 || b < 2 {
        return Err("both sample counts must be at least 2".into());
    }
    Ok((a, b))
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Io(String),
    Residual(Vec<String>),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Io(_) => EXIT_IO,
            Failure::Residual(_) => EXIT_RESIDUAL,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

/// Runs one command and returns the process exit status.
pub fn run(cli: &Cli) -> u8 {
    let outcome = match cli.command {
        Command::Verify { seed, cases } => run_verify(cli, seed, cases),
        _ => run_job(cli),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("config error: {m}"),
                Failure::Io(m) => eprintln!("i/o error: {m}"),
                Failure::Residual(list) => {
                    for m in list {
                        eprintln!("residual failure: {m}");
                    }
                }
            }
            f.code()
        }
    }
}

fn run_verify(cli: &Cli, seed: u64, cases: usize) -> Result<(), Failure> {
    let tol = cli.tol.unwrap_or(crate::io::DEFAULT_RESIDUAL_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Config(format!("--tol must be positive, got {tol}")));
    }
    if cases == 0 {
        return Err(Failure::Config("--cases must be at least 1".into()));
    }
    let checks = verify::run_all(seed, cases);
    let mut failed = Vec::new();
    for c in &checks {
        if !cli.quiet {
            println!("{}", c.line(tol));
        }
        if !c.passed(tol) {
            failed.push(format!(
                "{}/{}: {:e} > {:e} ({})",
                c.suite, c.invariant, c.max_residual, tol, c.worst_case
            ));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Residual(failed))
    }
}

struct Job {
    config: JobConfig,
    stem: String,
    out: PathBuf,
}

impl Job {
    fn load(cli: &Cli) -> Result<Self, Failure> {
        let path = cli
            .config
            .as_ref()
            .ok_or_else(|| Failure::Config("--config <path> is required".into()))?;
        let mut config = load_config(path)?;
        if !cli.formats.is_empty() {
            config.output.formats = cli.formats.clone();
        }
        if let Some(tol) = cli.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Failure::Config(format!("--tol must be positive, got {tol}")));
            }
            config.output.residual_tolerance = tol;
        }
        if let Some((s, t)) = cli.samples {
            config.extent.samples_s = s;
            config.extent.samples_t = t;
        }
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "ribbon".into());
        let out = cli.out.clone().unwrap_or_else(|| config.output.directory.clone());
        Ok(Self { config, stem, out })
    }

    fn path(&self, suffix: &str) -> PathBuf {
        self.out.join(format!("{}.{suffix}", self.stem))
    }

    fn ensure_out(&self) -> Result<(), Failure> {
        fs::create_dir_all(&self.out).map_err(|e| io_err(&self.out, e))
    }
}

type Solved = Option<(EquilibriumSolution<f64>, SolverRoute)>;

fn resolve_shape(job: &Job) -> Result<(PrincipalCurvatureState<f64>, Solved), Failure> {
    let cfg = &job.config;
    if let Some(state) = cfg.geometry_state() {
        return Ok((state, None));
    }
    let setup = cfg
        .mechanical_setup()
        .ok_or_else(|| Failure::Config("no geometry or mechanics block".into()))?;
    match setup.solve() {
        Ok((sol, route)) => Ok((sol.curvature_state(), Some((sol, route)))),
        Err(e) => Err(Failure::Residual(vec![format!("no equilibrium: {e}")])),
    }
}

fn run_job(cli: &Cli) -> Result<(), Failure> {
    let job = Job::load(cli)?;
    let mode = job.config.mode;
    let name = match cli.command {
        Command::Solve => "solve",
        Command::Geometry => "geometry",
        Command::Mesh => "mesh",
        Command::Sweep => "sweep",
        Command::Classify => "classify",
        Command::Verify { .. } => unreachable!("handled by run_verify"),
    };
    let wrong_mode = |want: &str| Failure::Config(format!("`{name}` needs a {want} config, got mode {mode}"));
    match cli.command {
        Command::Sweep => {
            if mode != Mode::Sweep {
                return Err(wrong_mode("sweep"));
            }
            return run_sweep_job(cli, &job);
        }
        Command::Solve if !mode.is_mechanical() => return Err(wrong_mode("mechanical")),
        Command::Geometry if mode != Mode::Geometric => return Err(wrong_mode("geometric")),
        _ if mode == Mode::Sweep => return Err(wrong_mode("geometric or mechanical")),
        _ => {}
    }

    let (state, solved) = resolve_shape(&job)?;
    let extent = job.config.extent.resolved(&state);
    let mut resolved = job.config.clone();
    resolved.extent.length = Some(extent.length);
    resolved.extent.width = Some(extent.width);
    let mut report = RunReport::new(name, &resolved, state, solved, extent);

    if !matches!(cli.command, Command::Classify) {
        let mut formats: Vec<Format> = job.config.output.formats.iter().copied().filter(|f| f.is_mesh()).collect();
        if formats.is_empty() && matches!(cli.command, Command::Mesh) {
            formats.push(Format::Obj);
        }
        formats.sort();
        formats.dedup();
        job.ensure_out()?;
        if !formats.is_empty() {
            let mesh = tessellate(&state, &extent).map_err(|e| Failure::Config(format!("extent: {e}")))?;
            for f in formats {
                let p = job.path(f.extension());
                export_mesh(&mesh, f, &p).map_err(|e| Failure::Io(e.to_string()))?;
                report.outputs.push(p);
            }
        }
        let p = job.path("report.json");
        report.outputs.push(p.clone());
        fs::write(&p, report.to_json()).map_err(|e| io_err(&p, e))?;
    }

    if !cli.quiet {
        if matches!(cli.command, Command::Classify) {
            println!("{}", report.classification.class);
        } else {
            println!("{}", report.summary());
            for p in &report.outputs {
                println!("wrote {}", p.display());
            }
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Residual(report.failures))
    }
}

fn run_sweep_job(cli: &Cli, job: &Job) -> Result<(), Failure> {
    let spec = job.config.sweep_spec().map_err(Failure::Config)?;
    RibbonExtent::new(spec.length, spec.width, 2, 2)
        .validate()
        .map_err(|e| Failure::Config(format!("extent: {e}")))?;
    job.ensure_out()?;
    let path = job.path("csv");
    let file = File::create(&path).map_err(|e| io_err(&path, e))?;
    let mut writer = PhaseCsvWriter::new(BufWriter::new(file), &spec.axes).map_err(|e| io_err(&path, e))?;
    let n = run_sweep_streaming(&spec, |r| writer.write(r).map_err(|e| SweepError::Sink(e.to_string())))
        .map_err(|e| match e {
            SweepError::Sink(m) => io_err(&path, m),
            other => Failure::Config(other.to_string()),
        })?;
    writer.finish().map_err(|e| io_err(&path, e))?;
    if !cli.quiet {
        println!("wrote {n} records to {}", path.display());
    }
    if let Some(kind) = job.config.sweep.as_ref().and_then(|s| s.boundary) {
        let roots = find_boundary(&spec, kind).map_err(|e| Failure::Config(e.to_string()))?;
        let p = job.path("boundary.json");
        let body = serde_json::json!({
            "axis": spec.axes[0].name.as_str(),
            "boundary": kind,
            "roots": roots,
        });
        fs::write(&p, format!("{}\n", serde_json::to_string_pretty(&body).expect("json"))).map_err(|e| io_err(&p, e))?;
        if !cli.quiet {
            let list: Vec<String> = roots.iter().map(|&r| crate::io::format_g9(r)).collect();
            println!("boundary {:?} at {} = [{}]", kind, spec.axes[0].name.as_str(), list.join(", "));
        }
    }
    Ok(())
}
