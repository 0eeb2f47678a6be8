//! Six-component density-matrix equations on the three-state subspace of
//! each sideband case, and the closed-form weak-probe susceptibilities.
//!
//! Component order (conjugate elements are never stored):
//!
//! | slot | red            | blue           |
//! |------|----------------|----------------|
//! | 0    | ρ(0g,0g)       | ρ(0g,0g)       |
//! | 1    | ρ(0g,0e)       | ρ(0g,0e)       |
//! | 2    | ρ(0g,1g)       | ρ(1e,0g)       |
//! | 3    | ρ(0e,0e)       | ρ(1e,0e)       |
//! | 4    | ρ(0e,1g)       | ρ(0e,0e)       |
//! | 5    | ρ(1g,1g)       | ρ(1e,1e)       |

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{c, I};
use crate::params::{ModelParams, Sideband};
use crate::rk4::{step_count, Rk4};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SixState {
    pub case: Sideband,
    pub components: [Complex64; 6],
}

/// Slots holding populations, per case.
const RED_POPULATIONS: [usize; 3] = [0, 3, 5];
const BLUE_POPULATIONS: [usize; 3] = [0, 4, 5];

impl SixState {
    pub fn zeros(case: Sideband) -> Self {
        Self { case, components: [c(0.0); 6] }
    }

    pub fn new(case: Sideband, components: [Complex64; 6]) -> Self {
        Self { case, components }
    }

    /// Red: everything in |0g⟩. Blue: everything in |0e⟩.
    pub fn initial(case: Sideband) -> Self {
        let mut s = Self::zeros(case);
        match case {
            Sideband::Red => s.components[0] = c(1.0),
            Sideband::Blue => s.components[4] = c(1.0),
        }
        s
    }

    /// Reads the six tracked elements out of a full density matrix (or its
    /// derivative) in the `2n + s` basis. Needs dimension ≥ 4.
    pub fn project(case: Sideband, rho: &DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() < 4 || rho.ncols() != rho.nrows() {
            return Err(Error::DimensionMismatch { expected: 4, found: rho.nrows().min(rho.ncols()) });
        }
        let elements = match case {
            Sideband::Red => [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)],
            Sideband::Blue => [(0, 0), (0, 1), (3, 0), (3, 1), (1, 1), (3, 3)],
        };
        Ok(Self::new(case, elements.map(|ij| rho[ij])))
    }

    /// ρ(0g,0e)
    pub fn probe_coherence(&self) -> Complex64 {
        self.components[1]
    }

    pub fn population_slots(&self) -> [usize; 3] {
        match self.case {
            Sideband::Red => RED_POPULATIONS,
            Sideband::Blue => BLUE_POPULATIONS,
        }
    }

    /// Sum of the three tracked populations (real part).
    pub fn trace(&self) -> f64 {
        self.population_slots().iter().map(|&i| self.components[i].re).sum()
    }

    fn is_finite(&self) -> bool {
        self.components.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

fn require(case: Sideband, state: &SixState) -> Result<()> {
    if state.case != case {
        return Err(Error::CaseMismatch { expected: case, found: state.case });
    }
    Ok(())
}

fn red_derivative(s: &[Complex64; 6], p: &ModelParams, delta: f64) -> [Complex64; 6] {
    let (gamma, kappa, eps, g) = (p.gamma, p.kappa, p.epsilon, p.coupling());
    let [gg, ge, g1, ee, e1, p1] = *s;
    let eg = ge.conj();
    let e1_sum = e1 + e1.conj();
    [
        ee * gamma + p1 * (2.0 * kappa) + (eg + ge) * eps,
        ge * (I * delta - 0.5 * gamma) + g1 * g - (gg - ee) * eps,
        g1 * (I * delta - kappa) - ge * g + e1 * eps,
        -ee * gamma + e1_sum * g - (ge + eg) * eps,
        -e1 * (kappa + 0.5 * gamma) - g1 * eps + (p1 - ee) * g,
        -p1 * (2.0 * kappa) - e1_sum * g,
    ]
}

fn blue_derivative(s: &[Complex64; 6], p: &ModelParams, delta: f64) -> [Complex64; 6] {
    let (gamma, kappa, eps, g) = (p.gamma, p.kappa, p.epsilon, p.coupling());
    let [gg, ge, x, y, ee, q] = *s;
    let eg = ge.conj();
    let x_sum = x + x.conj();
    [
        -gg * (2.0 * kappa) - x_sum * g + (eg + ge) * eps + ee * gamma,
        ge * (I * delta - 2.0 * kappa - 0.5 * gamma) - y * g - (gg - ee) * eps,
        -x * (3.0 * kappa + 0.5 * gamma) + y * eps + (gg - q) * g,
        y * (I * delta - 3.0 * kappa - gamma) + ge * g - x * eps,
        -ee * (2.0 * kappa + gamma) - (ge + eg) * eps,
        -q * (4.0 * kappa + gamma) + ee * (2.0 * kappa) + x_sum * g,
    ]
}

/// Right-hand sides of the red-sideband six-element system.
pub fn red_rhs(state: &SixState, params: &ModelParams, delta: f64) -> Result<SixState> {
    require(Sideband::Red, state)?;
    Ok(SixState::new(Sideband::Red, red_derivative(&state.components, params, delta)))
}

/// Right-hand sides of the blue-sideband six-element system. This system is
/// not trace preserving: the trace decays as −2κρ(0g,0g) − (4κ+γ)ρ(1e,1e).
pub fn blue_rhs(state: &SixState, params: &ModelParams, delta: f64) -> Result<SixState> {
    require(Sideband::Blue, state)?;
    Ok(SixState::new(Sideband::Blue, blue_derivative(&state.components, params, delta)))
}

/// Dispatches on `state.case`.
pub fn rhs(state: &SixState, params: &ModelParams, delta: f64) -> SixState {
    let comps = match state.case {
        Sideband::Red => red_derivative(&state.components, params, delta),
        Sideband::Blue => blue_derivative(&state.components, params, delta),
    };
    SixState::new(state.case, comps)
}

/// χ = χ′ + iχ″ reported as ρ(0g,0e)/(iε), in units of 1/γ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Susceptibility {
    pub chi_prime: f64,
    pub chi_double_prime: f64,
}

impl Susceptibility {
    pub fn from_coherence(coherence: Complex64, epsilon: f64) -> Self {
        let chi = coherence / (I * epsilon);
        Self { chi_prime: chi.re, chi_double_prime: chi.im }
    }
}

const DEGENERATE: f64 = 1e-300;

fn closed_form(numerator: Complex64, denominator: Complex64) -> Result<Susceptibility> {
    if !(denominator.norm() > DEGENERATE) {
        return Err(Error::Singular("closed-form susceptibility denominator vanishes".into()));
    }
    let chi = numerator / denominator / I;
    Ok(Susceptibility { chi_prime: chi.re, chi_double_prime: chi.im })
}

/// ρ(0g,0e)/(iε) with ρ(0g,0e) = ε(iΔ − κ) / [(iΔ − γ/2)(iΔ − κ) + (ηΩ/2)²].
pub fn red_susceptibility(params: &ModelParams, delta: f64) -> Result<Susceptibility> {
    let s = I * delta;
    let g = params.coupling();
    let num = s - params.kappa;
    closed_form(num, (s - 0.5 * params.gamma) * num + g * g)
}

/// ρ(0g,0e)/(iε) with
/// ρ(0g,0e) = ε(iΔ − 3κ − γ) / [(iΔ − 2κ − γ/2)(iΔ − 3κ − γ) + (ηΩ/2)²].
pub fn blue_susceptibility(params: &ModelParams, delta: f64) -> Result<Susceptibility> {
    let s = I * delta;
    let g = params.coupling();
    let (k, gamma) = (params.kappa, params.gamma);
    let num = s - 3.0 * k - gamma;
    closed_form(num, (s - 2.0 * k - 0.5 * gamma) * num + g * g)
}

pub fn susceptibility(params: &ModelParams, delta: f64) -> Result<Susceptibility> {
    match params.case {
        Sideband::Red => red_susceptibility(params, delta),
        Sideband::Blue => blue_susceptibility(params, delta),
    }
}

/// First-order-in-ε coherence ρ(0g,0e).
///
/// Clamps ρ(0g,0g) = 1 and every other population and second-order coherence
/// to zero, then solves the two stationary equations left over in the probe
/// coherence and its partner (red: ρ(0g,1g); blue: ρ(1e,0e)). The
/// coefficients are read off the six-element right-hand sides, so this is an
/// independent route to the closed forms.
pub fn weak_probe_solve(case: Sideband, params: &ModelParams, delta: f64) -> Result<Complex64> {
    if !(params.epsilon > 0.0) {
        return Err(Error::invalid("epsilon", "weak-probe solve needs epsilon > 0"));
    }
    let partner = match case {
        Sideband::Red => 2,
        Sideband::Blue => 3,
    };
    let unknowns = [1, partner];
    let mut base = SixState::zeros(case);
    base.components[0] = c(1.0);
    let eval = |s: &SixState| rhs(s, params, delta).components;

    let b0 = eval(&base);
    let b = [b0[unknowns[0]], b0[unknowns[1]]];
    let mut m = [[c(0.0); 2]; 2];
    for (col, &slot) in unknowns.iter().enumerate() {
        let mut probe = base;
        probe.components[slot] = c(1.0);
        let f = eval(&probe);
        for (row, &eq) in unknowns.iter().enumerate() {
            m[row][col] = f[eq] - b[row];
        }
    }
    // M x = −b
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !(det.norm() > DEGENERATE) {
        return Err(Error::Singular("weak-probe 2x2 system".into()));
    }
    Ok((-b[0] * m[1][1] + b[1] * m[0][1]) / det)
}

pub fn weak_probe_susceptibility(case: Sideband, params: &ModelParams, delta: f64) -> Result<Susceptibility> {
    Ok(Susceptibility::from_coherence(weak_probe_solve(case, params, delta)?, params.epsilon))
}

/// Long-time horizon used for truncated-system spectra, in units of 1/γ.
pub const TRUNCATED_T_FINAL: f64 = 500.0;

/// Default step for the six-element integration: 0.05 / max(γ, κ, ηΩ/2, |Δ|, ε, 1).
///
/// The systems are linear with constant coefficients, so the RK4 fixed
/// point coincides with the exact stationary point; the step only needs to
/// resolve the transient.
pub fn truncated_dt(params: &ModelParams, delta: f64) -> f64 {
    let scale = [params.gamma, params.kappa, params.coupling(), delta.abs(), params.epsilon, 1.0]
        .into_iter()
        .fold(0.0, f64::max);
    0.05 / scale
}

#[derive(Clone, Copy, Debug)]
pub struct TruncatedSolution {
    pub state: SixState,
    pub time: f64,
    /// Sum of tracked populations at `time`.
    pub trace: f64,
}

/// RK4 integration of the six-element system from the case's initial condition.
pub fn integrate_truncated(case: Sideband, params: &ModelParams, delta: f64, t_final: f64) -> Result<TruncatedSolution> {
    integrate_truncated_with_step(case, params, delta, t_final, truncated_dt(params, delta))
}

pub fn integrate_truncated_with_step(
    case: Sideband,
    params: &ModelParams,
    delta: f64,
    t_final: f64,
    dt: f64,
) -> Result<TruncatedSolution> {
    let mut last = None;
    drive(case, params, delta, t_final, dt, |t, s| last = Some((t, *s)))?;
    let (time, state) = last.expect("drive always reports the initial state");
    Ok(TruncatedSolution { state, time, trace: state.trace() })
}

/// Every RK4 step of the six-element integration, starting with t = 0.
pub fn truncated_trajectory(
    case: Sideband,
    params: &ModelParams,
    delta: f64,
    t_final: f64,
    dt: f64,
) -> Result<Vec<(f64, SixState)>> {
    let mut out = Vec::new();
    drive(case, params, delta, t_final, dt, |t, s| out.push((t, *s)))?;
    Ok(out)
}

fn drive<F>(case: Sideband, params: &ModelParams, delta: f64, t_final: f64, dt: f64, mut visit: F) -> Result<()>
where
    F: FnMut(f64, &SixState),
{
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::invalid("t_final", format!("must be finite and >= 0, got {t_final}")));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt", format!("must be finite and > 0, got {dt}")));
    }
    let steps = step_count(t_final, dt);
    let h = if steps > 0 { t_final / steps as f64 } else { 0.0 };
    let mut state = SixState::initial(case);
    visit(0.0, &state);
    let mut rk = Rk4::new(6);
    let f = match case {
        Sideband::Red => red_derivative,
        Sideband::Blue => blue_derivative,
    };
    for step in 1..=steps {
        rk.step(&mut state.components, h, |y, out| {
            let y: &[Complex64; 6] = y.try_into().expect("six components");
            out.copy_from_slice(&f(y, params, delta));
        });
        let t = step as f64 * h;
        if !state.is_finite() {
            return Err(Error::NonFinite { time: t });
        }
        visit(t, &state);
    }
    Ok(())
}
