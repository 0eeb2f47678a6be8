//! Physical parameters of the driven, damped ion.
//!
//! All rates and frequencies are dimensionless multiples of the spontaneous
//! emission rate γ, which is fixed to 1; ħ = 1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which motional sideband the control laser drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sideband {
    /// First red sideband: Jaynes–Cummings coupling σ₊a.
    Red,
    /// First blue sideband: anti-Jaynes–Cummings coupling σ₊a†.
    Blue,
}

impl fmt::Display for Sideband {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sideband::Red => f.write_str("red"),
            Sideband::Blue => f.write_str("blue"),
        }
    }
}

impl FromStr for Sideband {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "red" => Ok(Sideband::Red),
            "blue" => Ok(Sideband::Blue),
            other => Err(Error::invalid("case", format!("expected red or blue, got `{other}`"))),
        }
    }
}

/// Lamb-Dicke parameters above this trigger a validity warning.
pub const ETA_WARN: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Spontaneous emission rate; the unit of every other rate.
    pub gamma: f64,
    /// Motional heating rate κ.
    pub kappa: f64,
    /// Mean thermal phonon number n̄.
    pub nbar: f64,
    /// Lamb-Dicke parameter η.
    pub eta: f64,
    /// Control Rabi frequency Ω.
    pub omega: f64,
    /// Probe Rabi frequency ε.
    pub epsilon: f64,
    pub case: Sideband,
}

impl ModelParams {
    /// Caption defaults: η = 0.1, γ/κ = 50, n̄ = 0, ε = 10⁻³, Ω = 8.
    pub fn new(case: Sideband) -> Self {
        Self {
            gamma: 1.0,
            kappa: 0.02,
            nbar: 0.0,
            eta: 0.1,
            omega: 8.0,
            epsilon: 1e-3,
            case,
        }
    }

    pub fn red() -> Self {
        Self::new(Sideband::Red)
    }

    pub fn blue() -> Self {
        Self::new(Sideband::Blue)
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_nbar(mut self, nbar: f64) -> Self {
        self.nbar = nbar;
        self
    }

    /// Effective sideband coupling g = ηΩ/2.
    pub fn coupling(&self) -> f64 {
        0.5 * self.eta * self.omega
    }

    /// Checks the hard invariants and returns soft (weak-probe / Lamb-Dicke)
    /// validity warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let fields = [
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("nbar", self.nbar),
            ("eta", self.eta),
            ("omega", self.omega),
            ("epsilon", self.epsilon),
        ];
        for (key, value) in fields {
            if !value.is_finite() {
                return Err(Error::invalid(key, "must be finite"));
            }
        }
        if self.gamma != 1.0 {
            return Err(Error::invalid("gamma", "rates are in units of gamma, which must be exactly 1"));
        }
        if self.kappa < 0.0 {
            return Err(Error::invalid("kappa", format!("must be >= 0, got {}", self.kappa)));
        }
        if self.nbar < 0.0 {
            return Err(Error::invalid("nbar", format!("must be >= 0, got {}", self.nbar)));
        }
        if self.eta <= 0.0 {
            return Err(Error::invalid("eta", format!("must be > 0, got {}", self.eta)));
        }
        if self.omega < 0.0 {
            return Err(Error::invalid("omega", format!("must be >= 0, got {}", self.omega)));
        }
        if self.epsilon <= 0.0 {
            return Err(Error::invalid("epsilon", format!("must be > 0, got {}", self.epsilon)));
        }

        let mut warnings = Vec::new();
        if self.eta > ETA_WARN {
            warnings.push(format!(
                "eta = {} is outside the Lamb-Dicke regime (> {ETA_WARN}); first-order expansion is questionable",
                self.eta
            ));
        }
        // "much less than" taken as a factor of 10
        if self.epsilon > 0.1 * self.gamma {
            warnings.push(format!(
                "epsilon = {} is not small compared to gamma; weak-probe formulas lose accuracy",
                self.epsilon
            ));
        }
        let g = self.coupling();
        if g > 0.0 && self.epsilon > 0.1 * g {
            warnings.push(format!(
                "epsilon = {} is not small compared to eta*omega = {}; weak-probe formulas lose accuracy",
                self.epsilon,
                2.0 * g
            ));
        }
        Ok(warnings)
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::red()
    }
}
