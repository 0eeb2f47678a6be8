//! Command-line front end.
//!
//! Exit codes: 0 success, 1 tolerance failure (`compare`), 2 invalid
//! configuration, 3 solver or I/O failure.

pub mod config;
pub mod output;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dynamics::{default_dt, evolve, steady_state_with, DensityMatrix, SteadyStateOptions};
use crate::error::Error;
use crate::liouvillian::Liouvillian;
use crate::params::{ModelParams, Sideband};
use crate::spectra::{dip_metrics, pole_structure, sweep, Method, SpectrumResult, SweepConfig};
use crate::three_level::Susceptibility;

use self::config::{read_config_file, Format, RunArgs, RunConfig};
use self::output::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ionvit", version, about = "Vibration-induced transparency and Autler-Townes spectra of a trapped ion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output file (directory for `reproduce`); stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Allow the blue-sideband full-Lindblad steady state despite cutoff leakage.
    #[arg(long, global = true)]
    pub allow_blue_full: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Absorption/dispersion spectrum over a detuning grid.
    Spectrum(RunArgs),
    /// Regenerate the data behind a published figure.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
    },
    /// Time-evolve the full master equation from a basis state.
    Evolve(RunArgs),
    /// Steady state of the full master equation at one detuning.
    Steady(RunArgs),
    /// Pole structure of the closed-form susceptibility.
    Classify(RunArgs),
    /// Cross-check the spectrum methods against the closed form.
    Compare(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig2a,
    Fig2b,
    Fig3,
}

impl Figure {
    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3 => "fig3",
        }
    }

    /// Caption parameter sets, all with η = 0.1.
    pub fn curves(&self) -> Vec<(String, ModelParams)> {
        match self {
            Figure::Fig2a => [2.0, 8.0, 16.0]
                .iter()
                .map(|&w| (format!("omega_{w}"), ModelParams::red().with_kappa(0.02).with_omega(w)))
                .collect(),
            Figure::Fig2b => [0.02, 0.1, 0.2]
                .iter()
                .map(|&k| (format!("kappa_{k}"), ModelParams::red().with_omega(8.0).with_kappa(k)))
                .collect(),
            Figure::Fig3 => [15.0, 25.0, 45.0]
                .iter()
                .map(|&w| (format!("omega_{w}"), ModelParams::blue().with_kappa(0.02).with_omega(w)))
                .collect(),
        }
    }

    pub fn sweep_config(&self) -> SweepConfig {
        let case = match self {
            Figure::Fig2a | Figure::Fig2b => Sideband::Red,
            Figure::Fig3 => Sideband::Blue,
        };
        SweepConfig::default_for(case, Method::ClosedForm)
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_validation() { EXIT_VALIDATION } else { EXIT_SOLVER };
        Failure { code, message: e.to_string() }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn resolve(cli: &Cli, args: &RunArgs, default_method: Method) -> Result<RunConfig, Failure> {
    let mut map: BTreeMap<String, String> = match &cli.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    map.extend(args.to_map());
    if let Some(out) = &cli.out {
        map.insert("out".into(), out.display().to_string());
    }
    if let Some(format) = cli.format {
        map.insert("format".into(), if format == Format::Json { "json" } else { "csv" }.into());
    }
    if cli.allow_blue_full {
        map.insert("allow-blue-full".into(), "true".into());
    }
    if let Some(seed) = cli.seed {
        map.insert("seed".into(), seed.to_string());
    }
    let cfg = RunConfig::from_map(&map, default_method)?;
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Spectrum(args) => cmd_spectrum(&resolve(cli, args, Method::ClosedForm)?),
        Command::Reproduce { figure } => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            cmd_reproduce(*figure, &dir)?;
            Ok(EXIT_OK)
        }
        Command::Evolve(args) => cmd_evolve(&resolve(cli, args, Method::FullLindblad)?),
        Command::Steady(args) => cmd_steady(&resolve(cli, args, Method::FullLindblad)?),
        Command::Classify(args) => cmd_classify(&resolve(cli, args, Method::ClosedForm)?),
        Command::Compare(args) => cmd_compare(&resolve(cli, args, Method::ClosedForm)?),
    }
}

fn spectrum_artifact(spec: SpectrumResult) -> SpectrumArtifact {
    let dip_metrics = dip_metrics(&spec).ok();
    SpectrumArtifact { schema_version: SCHEMA_VERSION.into(), spectrum: spec, dip_metrics }
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<i32, Failure> {
    let spec = sweep(&cfg.params, &cfg.sweep)?;
    let text = match cfg.format {
        Format::Csv => spectrum_csv(&spec),
        Format::Json => to_json(&spectrum_artifact(spec))?,
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

/// Writes one CSV per caption curve plus `<figure>_manifest.json` into `dir`.
pub fn cmd_reproduce(figure: Figure, dir: &Path) -> crate::error::Result<Manifest> {
    std::fs::create_dir_all(dir)?;
    let config = figure.sweep_config();
    let mut curves = Vec::new();
    for (label, params) in figure.curves() {
        let spec = sweep(&params, &config)?;
        let file = format!("{}_{label}.csv", figure.name());
        emit(Some(&dir.join(&file)), &spectrum_csv(&spec))?;
        curves.push(CurveEntry { label, file, params, config, dip_metrics: dip_metrics(&spec).ok() });
    }
    let manifest = Manifest { schema_version: SCHEMA_VERSION.into(), figure: figure.name().into(), curves };
    emit(Some(&dir.join(format!("{}_manifest.json", figure.name()))), &to_json(&manifest)?)?;
    Ok(manifest)
}

fn state_output(cfg: &RunConfig, artifact: &StateArtifact, rho: &DensityMatrix) -> Result<(), Failure> {
    let text = match cfg.format {
        Format::Csv => density_csv(rho.matrix()),
        Format::Json => to_json(artifact)?,
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(())
}

fn cmd_evolve(cfg: &RunConfig) -> Result<i32, Failure> {
    let space = cfg.space()?;
    let l = Liouvillian::for_model(&cfg.params, &space, cfg.delta)?;
    let (n, s) = cfg.initial;
    let rho0 = DensityMatrix::fock(&space, n, s);
    let dt = cfg.dt.unwrap_or_else(|| default_dt(&cfg.params, cfg.delta));
    let run = evolve(&l, &rho0, cfg.t_final, dt)?;
    let artifact = StateArtifact {
        schema_version: SCHEMA_VERSION.into(),
        kind: "evolve".into(),
        params: cfg.params,
        delta: cfg.delta,
        n_max: space.n_max(),
        t_final: Some(cfg.t_final),
        dt: Some(dt),
        residual: None,
        susceptibility: Susceptibility::from_coherence(run.state.probe_coherence(), cfg.params.epsilon),
        diagnostics: run.diagnostics,
        rho: run.state.matrix().into(),
    };
    state_output(cfg, &artifact, &run.state)?;
    Ok(EXIT_OK)
}

fn cmd_steady(cfg: &RunConfig) -> Result<i32, Failure> {
    let space = cfg.space()?;
    let l = Liouvillian::for_model(&cfg.params, &space, cfg.delta)?;
    let opts = SteadyStateOptions { allow_blue: cfg.sweep.allow_blue_full, trace_row: 0 };
    let ss = steady_state_with(&l, &opts)?;
    if cfg.params.case == Sideband::Blue {
        eprintln!("warning: top-level population {:.3e}", ss.diagnostics.top_level_population);
    }
    let artifact = StateArtifact {
        schema_version: SCHEMA_VERSION.into(),
        kind: "steady".into(),
        params: cfg.params,
        delta: cfg.delta,
        n_max: space.n_max(),
        t_final: None,
        dt: None,
        residual: Some(ss.residual),
        susceptibility: Susceptibility::from_coherence(ss.rho.probe_coherence(), cfg.params.epsilon),
        diagnostics: ss.diagnostics,
        rho: ss.rho.matrix().into(),
    };
    state_output(cfg, &artifact, &ss.rho)?;
    Ok(EXIT_OK)
}

fn cmd_classify(cfg: &RunConfig) -> Result<i32, Failure> {
    let artifact = ClassifyArtifact {
        schema_version: SCHEMA_VERSION.into(),
        params: cfg.params,
        coupling: cfg.params.coupling(),
        poles: pole_structure(cfg.params.case, &cfg.params),
    };
    let text = match cfg.format {
        Format::Csv => classify_csv(&artifact),
        Format::Json => to_json(&artifact)?,
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

/// Runs every admissible method on one parameter set and measures each
/// against the closed form.
pub fn compare(params: &ModelParams, base: &SweepConfig, tol: f64) -> crate::error::Result<CompareReport> {
    let methods: &[Method] = match params.case {
        Sideband::Red => &[Method::ClosedForm, Method::TruncatedOde, Method::FullLindblad],
        Sideband::Blue => &[Method::ClosedForm, Method::TruncatedOde],
    };
    let mut curves = Vec::new();
    for &method in methods {
        let cfg = SweepConfig { method, ..*base };
        curves.push(sweep(params, &cfg)?);
    }
    let reference = curves[0].absorption();
    let peak = reference.iter().copied().fold(0.0, f64::max);
    let deviations: Vec<Deviation> = curves[1..]
        .iter()
        .map(|c| {
            let worst = c
                .absorption()
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Deviation { method: c.config.method, max_relative_deviation: worst / peak }
        })
        .collect();
    let max_relative_deviation = deviations.iter().map(|d| d.max_relative_deviation).fold(0.0, f64::max);
    Ok(CompareReport {
        schema_version: SCHEMA_VERSION.into(),
        params: *params,
        tol,
        reference: Method::ClosedForm,
        deviations,
        max_relative_deviation,
        // NaN deviations fail
        pass: max_relative_deviation <= tol,
        curves,
    })
}

fn cmd_compare(cfg: &RunConfig) -> Result<i32, Failure> {
    let report = compare(&cfg.params, &cfg.sweep, cfg.tol)?;
    let text = match cfg.format {
        Format::Csv => compare_csv(&report),
        Format::Json => to_json(&report)?,
    };
    emit(cfg.out.as_deref(), &text)?;
    for d in &report.deviations {
        eprintln!("{}: max relative deviation {:.3e}", d.method, d.max_relative_deviation);
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_TOLERANCE })
}
