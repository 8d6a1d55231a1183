// SPDX-License-Identifier: Apache-2.0

//! Versioned JSON experiment configuration.

use nalgebra::Matrix2;
use qbm_core::propositions::{log_grid, DEFAULT_MARGIN, SEPARABILITY_TOL};
use qbm_core::{make_spectral_model, CovarianceMatrix, OscillatorNetwork, SpectralFamily};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "schema_version")]
    pub version: u32,
    pub model: ModelSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default)]
    pub system_state: SystemState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_grid: Option<TimeGrid>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    /// Bath sizes for `sweep`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSource {
    /// `omegas[0]` is the system; `kappas[j]` couples it to `omegas[j + 1]`.
    Explicit { omegas: Vec<f64>, kappas: Vec<f64> },
    Family {
        p: f64,
        omega_max: f64,
        coupling_norm: f64,
        n_env: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemState {
    #[default]
    Vacuum,
    Squeezed {
        r: f64,
        #[serde(default)]
        theta: f64,
    },
    /// Row-major 2x2 covariance.
    Explicit([[f64; 2]; 2]),
    /// The system block of a separability certificate for the model.
    Certificate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl TimeGrid {
    pub fn linear(start: f64, stop: f64, points: usize) -> Self {
        Self {
            start,
            stop,
            points,
            spacing: Spacing::Linear,
        }
    }

    pub fn times(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Log => log_grid(self.start, self.stop, self.points),
            Spacing::Linear => {
                let step = (self.stop - self.start) / (self.points - 1) as f64;
                let mut t: Vec<f64> = (0..self.points)
                    .map(|i| self.start + step * i as f64)
                    .collect();
                t[self.points - 1] = self.stop;
                t
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Width of the separable/entangled decision on the PT eigenvalue.
    #[serde(default = "default_separability")]
    pub separability: f64,
    /// Slack in the certificate inequalities.
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_separability() -> f64 {
    SEPARABILITY_TOL
}

fn default_margin() -> f64 {
    DEFAULT_MARGIN
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            separability: SEPARABILITY_TOL,
            margin: DEFAULT_MARGIN,
        }
    }
}

fn field(name: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Field {
        field: name.into(),
        message: message.into(),
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(field(name, format!("must be positive and finite, got {v}")))
    }
}

impl ExperimentConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.version != SCHEMA_VERSION {
            return Err(field(
                "version",
                format!(
                    "unsupported schema version {} (expected {SCHEMA_VERSION})",
                    self.version
                ),
            ));
        }
        match &self.model {
            ModelSource::Explicit { omegas, kappas } => {
                if omegas.is_empty() {
                    return Err(field(
                        "model.explicit.omegas",
                        "needs at least the system frequency",
                    ));
                }
                for (i, &w) in omegas.iter().enumerate() {
                    positive(&format!("model.explicit.omegas[{i}]"), w)?;
                }
                if kappas.len() + 1 != omegas.len() {
                    return Err(field(
                        "model.explicit.kappas",
                        format!(
                            "expected {} entries, got {}",
                            omegas.len() - 1,
                            kappas.len()
                        ),
                    ));
                }
                for (i, &k) in kappas.iter().enumerate() {
                    if !(k.is_finite() && k >= 0.0) {
                        return Err(field(
                            format!("model.explicit.kappas[{i}]"),
                            format!("must be nonnegative and finite, got {k}"),
                        ));
                    }
                }
            }
            ModelSource::Family {
                p,
                omega_max,
                coupling_norm,
                n_env,
            } => {
                positive("model.family.p", *p)?;
                positive("model.family.omega_max", *omega_max)?;
                positive("model.family.coupling_norm", *coupling_norm)?;
                if *n_env == 0 {
                    return Err(field("model.family.n_env", "must be at least 1"));
                }
            }
        }
        if let Some(beta) = self.beta {
            positive("beta", beta)?;
        }
        match &self.system_state {
            SystemState::Squeezed { r, theta } => {
                if !r.is_finite() {
                    return Err(field("system_state.squeezed.r", "must be finite"));
                }
                if !theta.is_finite() {
                    return Err(field("system_state.squeezed.theta", "must be finite"));
                }
            }
            SystemState::Explicit(_) => {
                self.system_covariance()?;
            }
            SystemState::Vacuum | SystemState::Certificate => {}
        }
        if let Some(grid) = &self.time_grid {
            if grid.points < 2 {
                return Err(field(
                    "time_grid.points",
                    format!("need at least 2, got {}", grid.points),
                ));
            }
            if !grid.start.is_finite() || !grid.stop.is_finite() {
                return Err(field("time_grid", "start and stop must be finite"));
            }
            if grid.stop <= grid.start {
                return Err(field("time_grid.stop", "must exceed start"));
            }
            if grid.spacing == Spacing::Log && grid.start <= 0.0 {
                return Err(field(
                    "time_grid.start",
                    "log spacing needs a positive start",
                ));
            }
        }
        positive("tolerances.separability", self.tolerances.separability)?;
        positive("tolerances.margin", self.tolerances.margin)?;
        if let Some(ns) = &self.ns {
            if ns.is_empty() {
                return Err(field("ns", "must not be empty"));
            }
            if let Some(i) = ns.iter().position(|&n| n == 0) {
                return Err(field(format!("ns[{i}]"), "bath size must be at least 1"));
            }
        }
        Ok(())
    }

    pub fn network(&self) -> Result<OscillatorNetwork, CliError> {
        let net = match &self.model {
            ModelSource::Explicit { omegas, kappas } => {
                OscillatorNetwork::new(omegas.clone(), kappas.clone())
            }
            ModelSource::Family { .. } => make_spectral_model(&self.family()?),
        };
        net.map_err(|e| field("model", e.to_string()))
    }

    pub fn family(&self) -> Result<SpectralFamily, CliError> {
        match &self.model {
            ModelSource::Family {
                p,
                omega_max,
                coupling_norm,
                n_env,
            } => SpectralFamily::new(*p, *omega_max, *coupling_norm, *n_env)
                .map_err(|e| field("model.family", e.to_string())),
            ModelSource::Explicit { .. } => {
                Err(field("model", "this command needs a `family` model"))
            }
        }
    }

    pub fn require_beta(&self) -> Result<f64, CliError> {
        self.beta
            .ok_or_else(|| field("beta", "required for this command"))
    }

    /// The configured one-mode state; `None` for `certificate`.
    pub fn system_covariance(&self) -> Result<Option<CovarianceMatrix>, CliError> {
        Ok(match &self.system_state {
            SystemState::Vacuum => Some(CovarianceMatrix::vacuum(1)),
            SystemState::Squeezed { r, theta } => Some(qbm_core::make_pure_gaussian(*r, *theta)),
            SystemState::Explicit(m) => {
                let block = Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
                Some(
                    CovarianceMatrix::from_block(block)
                        .map_err(|e| field("system_state.explicit", e.to_string()))?,
                )
            }
            SystemState::Certificate => None,
        })
    }

    pub fn times_or(&self, default: TimeGrid) -> Vec<f64> {
        self.time_grid.as_ref().unwrap_or(&default).times()
    }
}
