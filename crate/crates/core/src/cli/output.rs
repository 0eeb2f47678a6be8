//! Artifact formats. CSV numbers use 12 significant digits in scientific
//! notation; JSON carries `schema_version` "1" and full-precision floats.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::Diagnostics;
use crate::error::Result;
use crate::params::ModelParams;
use crate::spectra::{DipMetrics, PoleStructure, SpectrumResult};
use crate::three_level::Susceptibility;

pub const SCHEMA_VERSION: &str = "1";

pub fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn spectrum_csv(spec: &SpectrumResult) -> String {
    let mut s = String::from("delta,chi_prime,chi_double_prime\n");
    for p in &spec.points {
        let _ = writeln!(s, "{},{},{}", sci(p.delta), sci(p.chi_prime), sci(p.chi_double_prime));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumArtifact {
    pub schema_version: String,
    #[serde(flatten)]
    pub spectrum: SpectrumResult,
    pub dip_metrics: Option<DipMetrics>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&DMatrix<Complex64>> for ComplexMatrix {
    fn from(m: &DMatrix<Complex64>) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect()
        };
        Self { re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

pub fn density_csv(m: &DMatrix<Complex64>) -> String {
    let mut s = String::from("row,col,re,im\n");
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let _ = writeln!(s, "{i},{j},{},{}", sci(m[(i, j)].re), sci(m[(i, j)].im));
        }
    }
    s
}

/// Output of `evolve` and `steady`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateArtifact {
    pub schema_version: String,
    pub kind: String,
    pub params: ModelParams,
    pub delta: f64,
    pub n_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub susceptibility: Susceptibility,
    pub diagnostics: Diagnostics,
    pub rho: ComplexMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyArtifact {
    pub schema_version: String,
    pub params: ModelParams,
    pub coupling: f64,
    #[serde(flatten)]
    pub poles: PoleStructure,
}

pub fn classify_csv(a: &ClassifyArtifact) -> String {
    let r = &a.poles.roots;
    let regime = serde_json::to_value(a.poles.regime).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    format!(
        "regime,coupling,threshold_coupling,discriminant,root1_re,root1_im,root2_re,root2_im\n{regime},{},{},{},{},{},{},{}\n",
        sci(a.coupling),
        sci(a.poles.threshold_coupling),
        sci(a.poles.discriminant),
        sci(r[0].re),
        sci(r[0].im),
        sci(r[1].re),
        sci(r[1].im),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub label: String,
    pub file: String,
    pub params: ModelParams,
    pub config: crate::spectra::SweepConfig,
    pub dip_metrics: Option<DipMetrics>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: String,
    pub figure: String,
    pub curves: Vec<CurveEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub method: crate::spectra::Method,
    /// max |χ″_method − χ″_closed| / max χ″_closed
    pub max_relative_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub schema_version: String,
    pub params: ModelParams,
    pub tol: f64,
    pub reference: crate::spectra::Method,
    pub deviations: Vec<Deviation>,
    pub max_relative_deviation: f64,
    pub pass: bool,
    pub curves: Vec<SpectrumResult>,
}

pub fn compare_csv(report: &CompareReport) -> String {
    let mut s = String::from("delta");
    for c in &report.curves {
        let _ = write!(s, ",{}", c.config.method.to_string().replace('-', "_"));
    }
    s.push('\n');
    let n = report.curves.first().map_or(0, |c| c.points.len());
    for i in 0..n {
        s.push_str(&sci(report.curves[0].points[i].delta));
        for c in &report.curves {
            let _ = write!(s, ",{}", sci(c.points[i].chi_double_prime));
        }
        s.push('\n');
    }
    s
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, contents)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
