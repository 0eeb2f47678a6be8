//! Column-stacked Lindblad superoperator.
//!
//! With vec(ρ) stacking columns, vec(AρB) = (Bᵀ ⊗ A) vec(ρ), so
//!
//!   −i[H, ρ]                 →  −i (1 ⊗ H − Hᵀ ⊗ 1)
//!   r (2LρL† − L†Lρ − ρL†L)  →  r (2 L̄ ⊗ L − 1 ⊗ L†L − (L†L)ᵀ ⊗ 1)

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{
    build_total_hamiltonian, c, dissipators_for, Dissipator, HilbertSpace, OperatorMatrix, I,
};
use crate::params::{ModelParams, Sideband};

#[derive(Clone, Debug)]
pub struct Liouvillian {
    dim: usize,
    matrix: DMatrix<Complex64>,
    sideband: Option<Sideband>,
}

pub fn vectorize(rho: &DMatrix<Complex64>) -> DVector<Complex64> {
    DVector::from_column_slice(rho.as_slice())
}

pub fn unvectorize(v: &DVector<Complex64>, dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(dim, dim, v.as_slice())
}

pub fn build_liouvillian(h: &OperatorMatrix, dissipators: &[Dissipator]) -> Result<Liouvillian> {
    let dim = h.dim();
    for d in dissipators {
        if d.jump_op.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: d.jump_op.dim() });
        }
    }
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let hm = h.matrix();
    let mut matrix = (id.kronecker(hm) - hm.transpose().kronecker(&id)) * (-I);
    for d in dissipators.iter().filter(|d| d.is_active()) {
        let l = d.jump_op.matrix();
        let ldl = l.adjoint() * l;
        matrix += (l.conjugate().kronecker(l) * c(2.0) - id.kronecker(&ldl) - ldl.transpose().kronecker(&id))
            * c(d.rate);
    }
    Ok(Liouvillian { dim, matrix, sideband: None })
}

impl Liouvillian {
    /// Full model generator at probe detuning `delta`: sideband Hamiltonian,
    /// probe, and the case's dissipators. Tagged with the sideband so the
    /// steady-state solver can apply the blue-case gate.
    pub fn for_model(params: &ModelParams, space: &HilbertSpace, delta: f64) -> Result<Self> {
        let h = build_total_hamiltonian(params, space, delta);
        let ds = dissipators_for(params, space);
        let mut l = build_liouvillian(&h, &ds)?;
        l.sideband = Some(params.case);
        Ok(l)
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, matrix: DMatrix::zeros(dim * dim, dim * dim), sideband: None }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dim_sq(&self) -> usize {
        self.dim * self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn sideband(&self) -> Option<Sideband> {
        self.sideband
    }

    pub fn with_sideband(mut self, sideband: Option<Sideband>) -> Self {
        self.sideband = sideband;
        self
    }

    /// ρ̇ for the given ρ, as a matrix.
    pub fn apply(&self, rho: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rho.nrows() });
        }
        Ok(unvectorize(&(&self.matrix * vectorize(rho)), self.dim))
    }
}
