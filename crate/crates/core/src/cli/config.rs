//! Run configuration: built-in defaults, overlaid by a flat `key = value`
//! file, overlaid by command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};

use crate::error::{Error, Result};
use crate::operators::{HilbertSpace, Qubit, DEFAULT_N_MAX};
use crate::params::{ModelParams, Sideband};
use crate::spectra::{Method, SweepConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::invalid("format", format!("expected csv or json, got `{other}`"))),
        }
    }
}

/// Model, grid and integration flags shared by every compute subcommand.
/// Values stay as strings until merged with the config file so both sources
/// go through the same validation.
#[derive(Args, Clone, Debug, Default)]
pub struct RunArgs {
    /// Sideband driven by the control laser: red or blue.
    #[arg(long)]
    pub case: Option<String>,
    /// Motional heating rate κ/γ.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<String>,
    /// Mean thermal phonon number.
    #[arg(long, allow_negative_numbers = true)]
    pub nbar: Option<String>,
    /// Lamb-Dicke parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<String>,
    /// Control Rabi frequency Ω/γ.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<String>,
    /// Probe Rabi frequency ε/γ.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_min: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_max: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub n_points: Option<String>,
    /// closed-form, truncated-ode or full-lindblad.
    #[arg(long)]
    pub method: Option<String>,
    /// Phonon cutoff for the full master equation.
    #[arg(long, allow_negative_numbers = true)]
    pub n_max: Option<String>,
    /// Single probe detuning Δ/γ (evolve, steady).
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<String>,
    /// Evolution horizon in units of 1/γ.
    #[arg(long, allow_negative_numbers = true)]
    pub t_final: Option<String>,
    /// RK4 step; defaults to 1e-3/max(γ, κ, ηΩ/2, |Δ|, 1).
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<String>,
    /// Initial basis state for evolve, e.g. 0g, 1e.
    #[arg(long)]
    pub initial: Option<String>,
    /// Relative tolerance for compare.
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<String>,
}

impl RunArgs {
    pub fn to_map(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("case", &self.case),
            ("kappa", &self.kappa),
            ("nbar", &self.nbar),
            ("eta", &self.eta),
            ("omega", &self.omega),
            ("epsilon", &self.epsilon),
            ("delta-min", &self.delta_min),
            ("delta-max", &self.delta_max),
            ("n-points", &self.n_points),
            ("method", &self.method),
            ("n-max", &self.n_max),
            ("delta", &self.delta),
            ("t-final", &self.t_final),
            ("dt", &self.dt),
            ("initial", &self.initial),
            ("tol", &self.tol),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

pub const KNOWN_KEYS: &[&str] = &[
    "case",
    "kappa",
    "nbar",
    "eta",
    "omega",
    "epsilon",
    "delta-min",
    "delta-max",
    "n-points",
    "method",
    "n-max",
    "delta",
    "t-final",
    "dt",
    "initial",
    "tol",
    "out",
    "format",
    "seed",
    "allow-blue-full",
];

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// keys are flag names without the leading dashes (`_` is accepted for `-`).
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::invalid("config", format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let bare = key.replace('-', "");
        let Some(known) = KNOWN_KEYS.iter().find(|k| k.replace('-', "") == bare) else {
            return Err(Error::invalid(&key, format!("unknown configuration key (line {})", lineno + 1)));
        };
        let key = known.to_string();
        let value = value.trim().trim_matches('"').to_string();
        out.insert(key, value);
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid("config", format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Fully resolved and validated settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub sweep: SweepConfig,
    pub delta: f64,
    pub t_final: f64,
    pub dt: Option<f64>,
    pub initial: (usize, Qubit),
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub warnings: Vec<String>,
}

fn get<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .trim()
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::invalid(key, format!("cannot parse `{v}`"))),
    }
}

fn parse_bool(map: &BTreeMap<String, String>, key: &str) -> Result<bool> {
    match map.get(key).map(|v| v.trim().to_ascii_lowercase()) {
        None => Ok(false),
        Some(v) if v == "true" || v == "1" || v == "yes" => Ok(true),
        Some(v) if v == "false" || v == "0" || v == "no" => Ok(false),
        Some(v) => Err(Error::invalid(key, format!("expected true or false, got `{v}`"))),
    }
}

fn parse_initial(s: &str) -> Result<(usize, Qubit)> {
    let s = s.trim();
    let (n, q) = s.split_at(s.len().saturating_sub(1));
    let qubit = match q {
        "g" | "G" => Qubit::Ground,
        "e" | "E" => Qubit::Excited,
        _ => return Err(Error::invalid("initial", format!("expected <phonon><g|e> such as 0g, got `{s}`"))),
    };
    let n = n
        .parse::<usize>()
        .map_err(|_| Error::invalid("initial", format!("expected <phonon><g|e> such as 0g, got `{s}`")))?;
    Ok((n, qubit))
}

impl RunConfig {
    /// Resolves a merged key/value map. `method` defaults to `default_method`.
    pub fn from_map(map: &BTreeMap<String, String>, default_method: Method) -> Result<Self> {
        let case = match map.get("case") {
            Some(v) => v.parse::<Sideband>()?,
            None => Sideband::Red,
        };
        let mut params = ModelParams::new(case);
        if case == Sideband::Blue {
            params.omega = 45.0;
        }
        if let Some(v) = get(map, "kappa")? {
            params.kappa = v;
        }
        if let Some(v) = get(map, "nbar")? {
            params.nbar = v;
        }
        if let Some(v) = get(map, "eta")? {
            params.eta = v;
        }
        if let Some(v) = get(map, "omega")? {
            params.omega = v;
        }
        if let Some(v) = get(map, "epsilon")? {
            params.epsilon = v;
        }
        let warnings = params.validate()?;

        let method = match map.get("method") {
            Some(v) => v.parse::<Method>()?,
            None => default_method,
        };
        let mut sweep = SweepConfig::default_for(case, method);
        if let Some(v) = get(map, "delta-min")? {
            sweep.delta_min = v;
        }
        if let Some(v) = get(map, "delta-max")? {
            sweep.delta_max = v;
        }
        if let Some(v) = get::<i64>(map, "n-points")? {
            sweep.n_points = usize::try_from(v).map_err(|_| Error::invalid("n-points", "must be >= 2"))?;
        }
        let n_max = get::<i64>(map, "n-max")?.unwrap_or(DEFAULT_N_MAX as i64);
        if n_max < 1 {
            return Err(Error::invalid("n-max", format!("phonon cutoff must be >= 1, got {n_max}")));
        }
        sweep.n_max = n_max as usize;
        sweep.allow_blue_full = parse_bool(map, "allow-blue-full")?;
        sweep.validate()?;

        let delta: f64 = get(map, "delta")?.unwrap_or(0.0);
        if !delta.is_finite() {
            return Err(Error::invalid("delta", "must be finite"));
        }
        let t_final: f64 = get(map, "t-final")?.unwrap_or(10.0);
        if !(t_final >= 0.0) || !t_final.is_finite() {
            return Err(Error::invalid("t-final", format!("must be finite and >= 0, got {t_final}")));
        }
        let dt: Option<f64> = get(map, "dt")?;
        if let Some(dt) = dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(Error::invalid("dt", format!("must be finite and > 0, got {dt}")));
            }
        }
        let initial = match map.get("initial") {
            Some(v) => parse_initial(v)?,
            None => (0, Qubit::Ground),
        };
        if initial.0 > sweep.n_max {
            return Err(Error::invalid("initial", format!("phonon number {} exceeds n-max {}", initial.0, sweep.n_max)));
        }
        let tol: f64 = get(map, "tol")?.unwrap_or(0.01);
        if !(tol >= 0.0) {
            return Err(Error::invalid("tol", format!("must be >= 0, got {tol}")));
        }
        get::<u64>(map, "seed")?;
        let format = match map.get("format") {
            Some(v) => v.parse::<Format>()?,
            None => Format::Csv,
        };
        let out = map.get("out").map(PathBuf::from);

        Ok(Self { params, sweep, delta, t_final, dt, initial, tol, out, format, warnings })
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        HilbertSpace::new(self.sweep.n_max)
    }
}
