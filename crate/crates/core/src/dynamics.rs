//! Time evolution and steady states of the full master equation, plus
//! physicality audits of density matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liouvillian::{unvectorize, vectorize, Liouvillian};
use crate::operators::{c, HilbertSpace, OperatorMatrix, Qubit};
use crate::params::{ModelParams, Sideband};
use crate::rk4::{step_count, Rk4};

/// Population allowed at the phonon cutoff before a result is treated as a
/// truncation artifact.
pub const LEAKAGE_LIMIT: f64 = 1e-3;
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const MIN_EIGENVALUE_TOL: f64 = -1e-8;
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Singular values below this (relative to max(1, σ_max)) count toward the null space.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(DMatrix<Complex64>);

impl DensityMatrix {
    /// Wraps a square matrix. Physicality is not enforced here; see
    /// [`DensityMatrix::check_physical`].
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        Ok(Self(m))
    }

    /// The pure state |index⟩⟨index|.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(index, index)] = c(1.0);
        Self(m)
    }

    /// The pure state |n, s⟩⟨n, s|.
    pub fn fock(space: &HilbertSpace, n: usize, s: Qubit) -> Self {
        Self::basis(space.dim(), space.index(n, s))
    }

    /// Ground state |0g⟩⟨0g|.
    pub fn ground(space: &HilbertSpace) -> Self {
        Self::fock(space, 0, Qubit::Ground)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    /// ⟨0g|ρ|0e⟩, the probe coherence.
    pub fn probe_coherence(&self) -> Complex64 {
        self.0[(0, 1)]
    }

    fn hermitize(&mut self) {
        let adj = self.0.adjoint();
        self.0 = (&self.0 + adj) * c(0.5);
    }

    pub fn check_physical(&self) -> Result<Diagnostics> {
        let d = diagnose(self);
        if !d.is_finite() {
            return Err(Error::NotPhysical("non-finite entries".into()));
        }
        if d.hermiticity_error > HERMITICITY_TOL {
            return Err(Error::NotPhysical(format!("hermiticity error {:.3e}", d.hermiticity_error)));
        }
        if d.trace_error > TRACE_TOL {
            return Err(Error::NotPhysical(format!("trace error {:.3e}", d.trace_error)));
        }
        if d.min_eigenvalue < MIN_EIGENVALUE_TOL {
            return Err(Error::NotPhysical(format!("negative eigenvalue {:.3e}", d.min_eigenvalue)));
        }
        Ok(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// |tr ρ − 1|
    pub trace_error: f64,
    /// max |ρ − ρ†| entry
    pub hermiticity_error: f64,
    /// Smallest eigenvalue of the Hermitian part of ρ.
    pub min_eigenvalue: f64,
    /// tr(a†a ρ)
    pub mean_phonon: f64,
    /// Total population at n = n_max.
    pub top_level_population: f64,
}

impl Diagnostics {
    pub fn is_finite(&self) -> bool {
        [
            self.trace_error,
            self.hermiticity_error,
            self.min_eigenvalue,
            self.mean_phonon,
            self.top_level_population,
        ]
        .iter()
        .all(|x| x.is_finite())
    }
}

pub fn diagnose(rho: &DensityMatrix) -> Diagnostics {
    let m = rho.matrix();
    let dim = m.nrows();
    let top = (dim.saturating_sub(1)) / 2;
    let mut mean_phonon = 0.0;
    let mut top_level_population = 0.0;
    for i in 0..dim {
        let p = m[(i, i)].re;
        mean_phonon += (i / 2) as f64 * p;
        if i / 2 == top {
            top_level_population += p;
        }
    }
    let herm = (m + m.adjoint()) * c(0.5);
    let min_eigenvalue = if dim == 0 {
        0.0
    } else {
        herm.symmetric_eigenvalues().min()
    };
    Diagnostics {
        trace_error: (m.trace() - c(1.0)).norm(),
        hermiticity_error: crate::operators::hermiticity_error(m),
        min_eigenvalue,
        mean_phonon,
        top_level_population,
    }
}

/// tr(op · ρ)
pub fn expectation(op: &OperatorMatrix, rho: &DensityMatrix) -> Result<Complex64> {
    if op.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), found: rho.dim() });
    }
    let (a, r) = (op.matrix(), rho.matrix());
    let n = op.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * r[(j, i)];
        }
    }
    Ok(acc)
}

/// 10⁻³ / max(γ, κ, ηΩ/2, |Δ|, 1)
pub fn default_dt(params: &ModelParams, delta: f64) -> f64 {
    let scale = [params.gamma, params.kappa, params.coupling(), delta.abs(), 1.0]
        .into_iter()
        .fold(0.0, f64::max);
    1e-3 / scale
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub state: DensityMatrix,
    pub diagnostics: Diagnostics,
    pub steps: usize,
}

fn top_population(v: &[Complex64], dim: usize) -> f64 {
    let top = (dim - 1) / 2;
    (2 * top..dim).map(|i| v[i * dim + i].re).sum()
}

/// Integrates vec(ρ̇) = L vec(ρ) from `rho0` to `t_final` with fixed-step RK4.
///
/// The step is shrunk so an integer number of steps lands exactly on
/// `t_final`. ρ is re-symmetrised after every step; population at the phonon
/// cutoff above [`LEAKAGE_LIMIT`] aborts the run.
pub fn evolve(l: &Liouvillian, rho0: &DensityMatrix, t_final: f64, dt: f64) -> Result<Evolution> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt", format!("must be finite and > 0, got {dt}")));
    }
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::invalid("t_final", format!("must be finite and >= 0, got {t_final}")));
    }
    let dim = l.dim();
    if rho0.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rho0.dim() });
    }

    let steps = step_count(t_final, dt);
    let h = if steps > 0 { t_final / steps as f64 } else { 0.0 };
    let lm = l.matrix();
    let mut y: Vec<Complex64> = vectorize(rho0.matrix()).as_slice().to_vec();
    let mut rk = Rk4::new(y.len());
    let zero = c(0.0);
    let one = c(1.0);

    let guard = |y: &[Complex64], t: f64| -> Result<()> {
        let top = top_population(y, dim);
        if top > LEAKAGE_LIMIT {
            return Err(Error::Leakage { population: top, time: t });
        }
        Ok(())
    };
    guard(&y, 0.0)?;

    for step in 1..=steps {
        rk.step(&mut y, h, |x, out| {
            let xv = nalgebra::DVectorView::from_slice(x, x.len());
            let mut ov = nalgebra::DVectorViewMut::from_slice(out, x.len());
            ov.gemv(one, lm, &xv, zero);
        });
        // ρ ← (ρ + ρ†)/2
        for j in 0..dim {
            for i in 0..j {
                let avg = (y[j * dim + i] + y[i * dim + j].conj()) * 0.5;
                y[j * dim + i] = avg;
                y[i * dim + j] = avg.conj();
            }
            y[j * dim + j].im = 0.0;
        }
        let t = step as f64 * h;
        if y.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { time: t });
        }
        guard(&y, t)?;
    }

    let state = DensityMatrix(unvectorize(&DVector::from_vec(y), dim));
    let diagnostics = diagnose(&state);
    Ok(Evolution { state, diagnostics, steps })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SteadyStateOptions {
    /// Accept blue-sideband generators and cutoff leakage. The result is then
    /// returned with its diagnostics instead of being rejected.
    pub allow_blue: bool,
    /// Diagonal element k whose equation (row k·(dim+1)) is replaced by the
    /// trace constraint.
    pub trace_row: usize,
}

#[derive(Clone, Debug)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    pub diagnostics: Diagnostics,
    /// ‖L vec(ρ)‖∞
    pub residual: f64,
    pub null_dim: usize,
}

/// Number of singular values of L at or below the rank tolerance.
pub fn null_space_dimension(l: &Liouvillian) -> usize {
    let sv = l.matrix().clone().singular_values();
    let scale = sv.max().max(1.0);
    sv.iter().filter(|&&s| s <= RANK_TOL * scale).count()
}

pub fn steady_state(l: &Liouvillian) -> Result<SteadyState> {
    steady_state_with(l, &SteadyStateOptions::default())
}

/// Solves L vec(ρ) = 0 with tr ρ = 1 by replacing one population equation
/// with the trace constraint.
pub fn steady_state_with(l: &Liouvillian, opts: &SteadyStateOptions) -> Result<SteadyState> {
    if l.sideband() == Some(Sideband::Blue) && !opts.allow_blue {
        return Err(Error::BlueGated);
    }
    let dim = l.dim();
    if opts.trace_row >= dim {
        return Err(Error::invalid("trace_row", format!("must be < {dim}, got {}", opts.trace_row)));
    }
    let null_dim = null_space_dimension(l);
    if null_dim != 1 {
        return Err(Error::NullSpace { dimension: null_dim });
    }

    let n = l.dim_sq();
    let row = opts.trace_row * (dim + 1);
    let mut a = l.matrix().clone();
    for j in 0..n {
        a[(row, j)] = c(0.0);
    }
    for k in 0..dim {
        a[(row, k * (dim + 1))] = c(1.0);
    }
    let mut b = DVector::zeros(n);
    b[row] = c(1.0);
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Singular("trace-constrained steady-state system".into()))?;

    let residual = (l.matrix() * &x).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if residual > RESIDUAL_TOL {
        return Err(Error::Residual { residual, tolerance: RESIDUAL_TOL });
    }
    let mut rho = DensityMatrix(unvectorize(&x, dim));
    rho.check_physical()?;
    rho.hermitize();
    let diagnostics = diagnose(&rho);
    // red-sideband loss channels bound the cutoff population; it is reported only
    let guarded = l.sideband() != Some(Sideband::Red) && !opts.allow_blue;
    if guarded && diagnostics.top_level_population > LEAKAGE_LIMIT {
        return Err(Error::Leakage { population: diagnostics.top_level_population, time: f64::INFINITY });
    }
    Ok(SteadyState { rho, diagnostics, residual, null_dim })
}
