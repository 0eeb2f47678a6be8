//! Detuning sweeps, dip/peak metrics and pole classification.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{steady_state_with, Diagnostics, SteadyStateOptions};
use crate::error::{Error, Result};
use crate::liouvillian::Liouvillian;
use crate::operators::{HilbertSpace, DEFAULT_N_MAX};
use crate::params::{ModelParams, Sideband};
use crate::three_level::{
    integrate_truncated, susceptibility, weak_probe_susceptibility, Susceptibility, TRUNCATED_T_FINAL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    TruncatedOde,
    FullLindblad,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::TruncatedOde => "truncated-ode",
            Method::FullLindblad => "full-lindblad",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "closed-form" => Ok(Method::ClosedForm),
            "truncated-ode" => Ok(Method::TruncatedOde),
            "full-lindblad" => Ok(Method::FullLindblad),
            other => Err(Error::invalid(
                "method",
                format!("expected closed-form, truncated-ode or full-lindblad, got `{other}`"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub delta_min: f64,
    pub delta_max: f64,
    pub n_points: usize,
    pub method: Method,
    /// Phonon cutoff, used by the full-Lindblad method only.
    pub n_max: usize,
    /// Permit the gated blue-sideband full-Lindblad steady state.
    pub allow_blue_full: bool,
}

impl SweepConfig {
    /// Red: Δ ∈ [−2, 2] with 801 points. Blue: Δ ∈ [−5, 5] with 2001 points.
    pub fn default_for(case: Sideband, method: Method) -> Self {
        let (half, n_points) = match case {
            Sideband::Red => (2.0, 801),
            Sideband::Blue => (5.0, 2001),
        };
        Self {
            delta_min: -half,
            delta_max: half,
            n_points,
            method,
            n_max: DEFAULT_N_MAX,
            allow_blue_full: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta_min.is_finite() || !self.delta_max.is_finite() {
            return Err(Error::invalid("delta-min", "detuning bounds must be finite"));
        }
        if !(self.delta_min < self.delta_max) {
            return Err(Error::invalid(
                "delta-max",
                format!("must exceed delta-min ({} >= {})", self.delta_min, self.delta_max),
            ));
        }
        if self.n_points < 2 {
            return Err(Error::invalid("n-points", format!("must be >= 2, got {}", self.n_points)));
        }
        if self.n_max < 1 {
            return Err(Error::invalid("n-max", "phonon cutoff must be >= 1"));
        }
        Ok(())
    }

    /// Uniform grid. Written as a weighted sum of the endpoints so that a
    /// symmetric range yields an exactly antisymmetric grid.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| {
                let i = i as f64;
                (self.delta_min * (last - i) + self.delta_max * i) / last
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub delta: f64,
    pub chi_prime: f64,
    pub chi_double_prime: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub params: ModelParams,
    pub config: SweepConfig,
    pub points: Vec<SpectrumPoint>,
    /// Per-point steady-state diagnostics (full-Lindblad only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Vec<Diagnostics>>,
}

impl SpectrumResult {
    pub fn deltas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.delta).collect()
    }

    pub fn absorption(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.chi_double_prime).collect()
    }

    pub fn dispersion(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.chi_prime).collect()
    }

    /// Largest |χ″(Δᵢ) − χ″(−Δᵢ)| and |χ′(Δᵢ) + χ′(−Δᵢ)| over mirrored grid
    /// points. Only meaningful for a symmetric grid.
    pub fn parity_error(&self) -> (f64, f64) {
        let n = self.points.len();
        let mut even: f64 = 0.0;
        let mut odd: f64 = 0.0;
        for i in 0..n / 2 + 1 {
            let (a, b) = (&self.points[i], &self.points[n - 1 - i]);
            even = even.max((a.chi_double_prime - b.chi_double_prime).abs());
            odd = odd.max((a.chi_prime + b.chi_prime).abs());
        }
        (even, odd)
    }
}

fn point_at(params: &ModelParams, config: &SweepConfig, delta: f64) -> Result<(Susceptibility, Option<Diagnostics>)> {
    match config.method {
        Method::ClosedForm => Ok((susceptibility(params, delta)?, None)),
        Method::TruncatedOde => match params.case {
            Sideband::Red => {
                let sol = integrate_truncated(Sideband::Red, params, delta, TRUNCATED_T_FINAL)?;
                Ok((Susceptibility::from_coherence(sol.state.probe_coherence(), params.epsilon), None))
            }
            // the literal blue system decays to zero; only the clamped
            // weak-probe solution is meaningful
            Sideband::Blue => Ok((weak_probe_susceptibility(Sideband::Blue, params, delta)?, None)),
        },
        Method::FullLindblad => {
            let space = HilbertSpace::new(config.n_max)?;
            let l = Liouvillian::for_model(params, &space, delta)?;
            let opts = SteadyStateOptions { allow_blue: config.allow_blue_full, trace_row: 0 };
            let ss = steady_state_with(&l, &opts)?;
            let chi = Susceptibility::from_coherence(ss.rho.probe_coherence(), params.epsilon);
            Ok((chi, Some(ss.diagnostics)))
        }
    }
}

/// Evaluates χ at every grid detuning with the configured method. Points are
/// computed in parallel and returned in grid order.
pub fn sweep(params: &ModelParams, config: &SweepConfig) -> Result<SpectrumResult> {
    params.validate()?;
    config.validate()?;
    if config.method == Method::FullLindblad && params.case == Sideband::Blue && !config.allow_blue_full {
        return Err(Error::BlueGated);
    }
    let computed: Vec<(SpectrumPoint, Option<Diagnostics>)> = config
        .grid()
        .into_par_iter()
        .map(|delta| {
            let (chi, diag) =
                point_at(params, config, delta).map_err(|e| Error::AtDetuning { delta, source: Box::new(e) })?;
            let point = SpectrumPoint { delta, chi_prime: chi.chi_prime, chi_double_prime: chi.chi_double_prime };
            Ok((point, diag))
        })
        .collect::<Result<_>>()?;
    let diagnostics = if config.method == Method::FullLindblad {
        Some(computed.iter().map(|(_, d)| d.expect("full-Lindblad points carry diagnostics")).collect())
    } else {
        None
    };
    Ok(SpectrumResult {
        params: *params,
        config: *config,
        points: computed.into_iter().map(|(p, _)| p).collect(),
        diagnostics,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DipMetrics {
    /// χ″ at the grid point nearest Δ = 0.
    pub center_absorption: f64,
    /// Largest χ″ on the grid.
    pub baseline: f64,
    pub dip_depth: f64,
    /// Half-width of the region about Δ = 0 where χ″ stays at or below the
    /// midpoint between `center_absorption` and `baseline`.
    pub dip_half_width: f64,
    /// Interior local maxima of χ″, refined by a three-point parabola.
    pub peak_positions: Vec<f64>,
}

fn interpolate_crossing(x0: f64, y0: f64, x1: f64, y1: f64, level: f64) -> f64 {
    if y1 == y0 {
        return x0;
    }
    x0 + (level - y0) / (y1 - y0) * (x1 - x0)
}

pub fn dip_metrics(spec: &SpectrumResult) -> Result<DipMetrics> {
    let x = spec.deltas();
    let y = spec.absorption();
    let n = x.len();
    if n < 3 {
        return Err(Error::FlatSpectrum);
    }
    let step = (x[n - 1] - x[0]) / (n - 1) as f64;
    let center = (0..n)
        .min_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()))
        .expect("non-empty grid");
    if x[center].abs() > 0.5 * step * (1.0 + 1e-9) {
        return Err(Error::invalid("delta-min", "sweep grid does not cover detuning 0"));
    }

    let mut peak_positions = Vec::new();
    for j in 1..n - 1 {
        if y[j] > y[j - 1] && y[j] > y[j + 1] {
            let curvature = y[j - 1] - 2.0 * y[j] + y[j + 1];
            let offset = if curvature < 0.0 { 0.5 * (y[j - 1] - y[j + 1]) / curvature } else { 0.0 };
            peak_positions.push(x[j] + offset.clamp(-0.5, 0.5) * (x[j + 1] - x[j]));
        }
    }
    if peak_positions.is_empty() {
        return Err(Error::FlatSpectrum);
    }

    let center_absorption = y[center];
    let baseline = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let dip_depth = (baseline - center_absorption).max(0.0);
    let dip_half_width = if dip_depth > 0.0 {
        let level = 0.5 * (center_absorption + baseline);
        let mut r = center;
        while r + 1 < n && y[r + 1] <= level {
            r += 1;
        }
        let right = if r + 1 < n { interpolate_crossing(x[r], y[r], x[r + 1], y[r + 1], level) } else { x[n - 1] };
        let mut l = center;
        while l > 0 && y[l - 1] <= level {
            l -= 1;
        }
        let left = if l > 0 { interpolate_crossing(x[l], y[l], x[l - 1], y[l - 1], level) } else { x[0] };
        0.5 * (right - left)
    } else {
        0.0
    };

    Ok(DipMetrics { center_absorption, baseline, dip_depth, dip_half_width, peak_positions })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Overdamped,
    Critical,
    Underdamped,
}

/// Roots of the closed-form denominator as a quadratic in s = iΔ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleStructure {
    pub regime: Regime,
    pub roots: [Complex64; 2],
    pub discriminant: f64,
    /// Coupling at which the discriminant vanishes: half the difference of
    /// the two damping constants.
    pub threshold_coupling: f64,
}

pub const CRITICAL_TOL: f64 = 1e-12;

/// Classifies (s − d₁)(s − d₂) + g² = 0, with damping constants
/// red: d₁ = γ/2, d₂ = κ; blue: d₁ = 2κ + γ/2, d₂ = 3κ + γ.
pub fn pole_structure(case: Sideband, params: &ModelParams) -> PoleStructure {
    let (k, gamma) = (params.kappa, params.gamma);
    let (d1, d2) = match case {
        Sideband::Red => (0.5 * gamma, k),
        Sideband::Blue => (2.0 * k + 0.5 * gamma, 3.0 * k + gamma),
    };
    let g = params.coupling();
    let discriminant = (d1 - d2).powi(2) - 4.0 * g * g;
    let regime = if discriminant.abs() <= CRITICAL_TOL {
        Regime::Critical
    } else if discriminant > 0.0 {
        Regime::Overdamped
    } else {
        Regime::Underdamped
    };
    let root = Complex64::new(discriminant, 0.0).sqrt();
    let mid = Complex64::new(0.5 * (d1 + d2), 0.0);
    PoleStructure {
        regime,
        roots: [mid + 0.5 * root, mid - 0.5 * root],
        discriminant,
        threshold_coupling: 0.5 * (d1 - d2).abs(),
    }
}
