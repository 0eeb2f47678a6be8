#![allow(dead_code)]

use ionvit::{HilbertSpace, ModelParams, Sideband};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_params<R: Rng>(rng: &mut R, case: Sideband) -> ModelParams {
    ModelParams::new(case)
        .with_kappa(rng.gen_range(0.005..0.3))
        .with_eta(rng.gen_range(0.02..0.3))
        .with_omega(rng.gen_range(0.0..40.0))
        .with_epsilon(rng.gen_range(1e-4..0.05))
}

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random density matrix of rank ≤ n on the given basis indices.
pub fn random_density_on<R: Rng>(rng: &mut R, dim: usize, support: &[usize]) -> DMatrix<Complex64> {
    let k = support.len();
    let a = DMatrix::from_fn(k, k, |_, _| random_complex(rng));
    let sub = &a * a.adjoint();
    let tr: f64 = (0..k).map(|i| sub[(i, i)].re).sum();
    let mut rho = DMatrix::zeros(dim, dim);
    for (i, &r) in support.iter().enumerate() {
        for (j, &c) in support.iter().enumerate() {
            rho[(r, c)] = sub[(i, j)] / tr;
        }
    }
    rho
}

pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<Complex64> {
    let all: Vec<usize> = (0..dim).collect();
    random_density_on(rng, dim, &all)
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| random_complex(rng));
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Basis indices of the three states each sideband case tracks.
pub fn support(case: Sideband, space: &HilbertSpace) -> [usize; 3] {
    use ionvit::operators::Qubit::{Excited, Ground};
    match case {
        Sideband::Red => [space.index(0, Ground), space.index(0, Excited), space.index(1, Ground)],
        Sideband::Blue => [space.index(0, Ground), space.index(0, Excited), space.index(1, Excited)],
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub fn max_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
