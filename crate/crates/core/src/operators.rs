//! Truncated phonon ⊗ qubit space, ladder and Pauli operators, and the
//! sideband Hamiltonians and jump operators built from them.
//!
//! Basis ordering is phonon-major: the state |n, s⟩ lives at index `2n + s`
//! with `s = 0` for the ground state g and `s = 1` for the excited state e.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ModelParams, Sideband};

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Internal state of the two-level ion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Qubit {
    Ground = 0,
    Excited = 1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    n_max: usize,
}

/// Default phonon cutoff: two levels above the one-phonon truncation.
pub const DEFAULT_N_MAX: usize = 3;

impl HilbertSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::invalid(
                "n_max",
                "phonon cutoff must be >= 1 to hold the one-phonon states",
            ));
        }
        Ok(Self { n_max })
    }

    /// Recovers the space from a total dimension `2(n_max + 1)`.
    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim % 2 != 0 || dim < 4 {
            return Err(Error::invalid("dim", format!("{dim} is not 2(n_max+1) with n_max >= 1")));
        }
        Self::new(dim / 2 - 1)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    pub fn index(&self, n: usize, s: Qubit) -> usize {
        debug_assert!(n <= self.n_max);
        2 * n + s as usize
    }

    pub fn state(&self, index: usize) -> (usize, Qubit) {
        let s = if index % 2 == 0 { Qubit::Ground } else { Qubit::Excited };
        (index / 2, s)
    }
}

impl Default for HilbertSpace {
    fn default() -> Self {
        Self { n_max: DEFAULT_N_MAX }
    }
}

/// Dense complex square matrix on the truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix(DMatrix<Complex64>);

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { time: 0.0 });
        }
        Ok(Self(m))
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

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    /// Largest entry of |A − A†|.
    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.0)
    }

    /// Largest singular value.
    pub fn norm(&self) -> f64 {
        self.0.clone().singular_values().max()
    }
}

pub(crate) fn hermiticity_error(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

impl<'a> Mul<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 - &rhs.0)
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalOperators {
    pub a: OperatorMatrix,
    pub a_dag: OperatorMatrix,
    pub sigma_z: OperatorMatrix,
    pub sigma_plus: OperatorMatrix,
    pub sigma_minus: OperatorMatrix,
}

impl CanonicalOperators {
    pub fn number(&self) -> OperatorMatrix {
        &self.a_dag * &self.a
    }
}

/// Ladder operators truncated at `n_max` and Pauli operators acting on the
/// qubit factor, with σz = |e⟩⟨e| − |g⟩⟨g|, σ₊ = |e⟩⟨g|, σ₋ = |g⟩⟨e|.
pub fn canonical_operators(space: &HilbertSpace) -> CanonicalOperators {
    let dim = space.dim();
    let mut a = DMatrix::zeros(dim, dim);
    let mut sz = DMatrix::zeros(dim, dim);
    let mut sp = DMatrix::zeros(dim, dim);
    for n in 0..=space.n_max() {
        for s in [Qubit::Ground, Qubit::Excited] {
            let col = space.index(n, s);
            if n >= 1 {
                a[(space.index(n - 1, s), col)] = c((n as f64).sqrt());
            }
            sz[(col, col)] = c(if s == Qubit::Excited { 1.0 } else { -1.0 });
        }
        sp[(space.index(n, Qubit::Excited), space.index(n, Qubit::Ground))] = c(1.0);
    }
    let a = OperatorMatrix(a);
    let sigma_plus = OperatorMatrix(sp);
    CanonicalOperators {
        a_dag: a.dagger(),
        a,
        sigma_z: OperatorMatrix(sz),
        sigma_minus: sigma_plus.dagger(),
        sigma_plus,
    }
}

/// Sideband Hamiltonian in the probe frame, without the probe term.
///
/// Red:  H = (Δ/2)σz + Δa†a + i g (σ₊a − σ₋a†)
/// Blue: H = (Δ/2)σz − Δa†a + i g (σ₊a† − σ₋a)
///
/// with g = ηΩ/2.
pub fn build_hamiltonian(params: &ModelParams, space: &HilbertSpace, delta: f64) -> OperatorMatrix {
    let ops = canonical_operators(space);
    let g = params.coupling();
    let number = ops.number();
    let (phonon_sign, up, down) = match params.case {
        Sideband::Red => (1.0, &ops.sigma_plus * &ops.a, &ops.sigma_minus * &ops.a_dag),
        Sideband::Blue => (-1.0, &ops.sigma_plus * &ops.a_dag, &ops.sigma_minus * &ops.a),
    };
    let m = ops.sigma_z.matrix() * c(0.5 * delta)
        + number.matrix() * c(phonon_sign * delta)
        + (up.matrix() - down.matrix()) * (I * g);
    OperatorMatrix(m)
}

/// Probe coupling V = iε(σ₋ − σ₊); Hermitian for real ε.
pub fn build_probe(params: &ModelParams, space: &HilbertSpace) -> OperatorMatrix {
    let ops = canonical_operators(space);
    (&ops.sigma_minus - &ops.sigma_plus).scale(I * params.epsilon)
}

/// Hamiltonian plus probe: the full coherent generator of the master equation.
pub fn build_total_hamiltonian(params: &ModelParams, space: &HilbertSpace, delta: f64) -> OperatorMatrix {
    &build_hamiltonian(params, space, delta) + &build_probe(params, space)
}

/// One Lindblad channel, contributing `rate · (2LρL† − L†Lρ − ρL†L)` to ρ̇.
///
/// Note the rate multiplies the factor-2 form: this is twice the usual
/// `LρL† − ½{L†L, ρ}` normalisation.
#[derive(Clone, Debug)]
pub struct Dissipator {
    pub jump_op: OperatorMatrix,
    pub rate: f64,
}

impl Dissipator {
    pub fn new(jump_op: OperatorMatrix, rate: f64) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::invalid("rate", format!("dissipator rate must be finite and >= 0, got {rate}")));
        }
        Ok(Self { jump_op, rate })
    }

    pub fn is_active(&self) -> bool {
        self.rate > 0.0
    }
}

/// Motional and radiative channels for the selected sideband.
///
/// Red:  [(a, κ(n̄+1)), (a†, κn̄), (σ₋, γ/2)]
/// Blue: [(a†, κ(n̄+1)), (a, κn̄), (σ₋, γ/2)]
///
/// The blue-case exchange of a and a† is kept exactly as in the source
/// master equation; it turns phonon loss into pure gain at n̄ = 0.
pub fn dissipators_for(params: &ModelParams, space: &HilbertSpace) -> Vec<Dissipator> {
    let ops = canonical_operators(space);
    let (primary, secondary) = match params.case {
        Sideband::Red => (ops.a, ops.a_dag),
        Sideband::Blue => (ops.a_dag, ops.a),
    };
    vec![
        Dissipator { jump_op: primary, rate: params.kappa * (params.nbar + 1.0) },
        Dissipator { jump_op: secondary, rate: params.kappa * params.nbar },
        Dissipator { jump_op: ops.sigma_minus, rate: 0.5 * params.gamma },
    ]
}
