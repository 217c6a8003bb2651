//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{TrapGeometry, TrapModel};
use crate::series::SeriesControl;
use crate::specfun::PhysicalConstants;
use crate::thermo::nu_critical_trap;

/// κ-ladder used when the configuration gives neither `kappa` nor `kappa_ladder`.
pub const DEFAULT_LADDER: [f64; 5] = [0.1, 0.05, 0.02, 0.01, 0.005];

/// Unit convention of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "convention", rename_all = "snake_case")]
pub enum Units {
    /// `ħ = m = ω₀ = 1`.
    #[default]
    Natural,
    /// Explicit constants.
    Explicit {
        /// Reduced Planck constant.
        hbar: f64,
        /// Particle mass.
        mass: f64,
        /// Reference angular frequency.
        omega0: f64,
    },
}

impl Units {
    /// The physical constants of the convention.
    pub fn constants(&self) -> Result<PhysicalConstants> {
        match *self {
            Units::Natural => Ok(PhysicalConstants::default()),
            Units::Explicit { hbar, mass, omega0 } => PhysicalConstants::new(hbar, mass, omega0),
        }
    }

    /// Short name echoed in output metadata.
    pub fn name(&self) -> &'static str {
        match self {
            Units::Natural => "natural",
            Units::Explicit { .. } => "explicit",
        }
    }
}

/// Trap model tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    /// Isotropic `d`-dimensional trap.
    Isotropic,
    /// Quasi-one-dimensional trap.
    #[serde(rename = "quasi1d")]
    Quasi1D,
    /// Quasi-two-dimensional trap.
    #[serde(rename = "quasi2d")]
    Quasi2D,
}

/// Trap section of the configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapSpec {
    /// Model tag.
    pub model: ModelTag,
    /// Dimension (isotropic traps; defaults to 3).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// A single κ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Strictly decreasing κ values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_ladder: Option<Vec<f64>>,
    /// Anisotropy scale κ_c (anisotropic traps).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_c: Option<f64>,
    /// Longitudinal frequency ω₁ (anisotropic traps, default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    /// Transverse frequency ω⊥ (anisotropic traps, default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_perp: Option<f64>,
}

impl TrapSpec {
    /// The κ values of the run.
    pub fn ladder(&self) -> Result<Vec<f64>> {
        let ladder = match (&self.kappa, &self.kappa_ladder) {
            (Some(_), Some(_)) => return Err(Error::Config("give either kappa or kappa_ladder, not both".into())),
            (Some(k), None) => vec![*k],
            (None, Some(l)) => l.clone(),
            (None, None) => DEFAULT_LADDER.to_vec(),
        };
        if ladder.is_empty() {
            return Err(Error::Config("kappa_ladder is empty".into()));
        }
        if ladder.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("kappa_ladder must be strictly decreasing".into()));
        }
        Ok(ladder)
    }

    /// Trap model at a given κ.
    pub fn model_at(&self, kappa: f64, consts: PhysicalConstants) -> Result<TrapModel> {
        let geometry = match self.model {
            ModelTag::Isotropic => {
                if self.kappa_c.is_some() {
                    return Err(Error::Config("kappa_c applies to anisotropic traps only".into()));
                }
                TrapGeometry::Isotropic {
                    d: self.d.unwrap_or(3),
                    kappa,
                }
            }
            ModelTag::Quasi1D | ModelTag::Quasi2D => {
                if self.d.is_some_and(|d| d != 3) {
                    return Err(Error::Config("anisotropic traps are three-dimensional".into()));
                }
                let kappa_c = self
                    .kappa_c
                    .ok_or_else(|| Error::Config("anisotropic traps need kappa_c".into()))?;
                let omega1 = self.omega1.unwrap_or(1.0);
                let omega_perp = self.omega_perp.unwrap_or(1.0);
                if self.model == ModelTag::Quasi1D {
                    TrapGeometry::Quasi1D {
                        kappa,
                        kappa_c,
                        omega1,
                        omega_perp,
                    }
                } else {
                    TrapGeometry::Quasi2D {
                        kappa,
                        kappa_c,
                        omega1,
                        omega_perp,
                    }
                }
            }
        };
        TrapModel::new(geometry, consts)
    }
}

/// Thermodynamic state: `β` and exactly one of `ν`, `μ` or `η = ν/ν_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    /// Inverse temperature.
    pub beta: f64,
    /// Rescaled particle number.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    /// Chemical potential.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// Particle number in units of `ν_c(β)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
}

/// What the state fixes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateKind {
    /// `ν` given (directly or through η).
    Number(f64),
    /// `μ` given.
    Chemical(f64),
}

impl StateSpec {
    /// Resolves the state for a trap (η needs the trap's `ν_c`).
    pub fn resolve(&self, trap: &TrapModel) -> Result<StateKind> {
        let given = [self.nu.is_some(), self.mu.is_some(), self.eta.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given != 1 {
            return Err(Error::Config("state needs exactly one of nu, mu, eta".into()));
        }
        if let Some(nu) = self.nu {
            return Ok(StateKind::Number(nu));
        }
        if let Some(mu) = self.mu {
            return Ok(StateKind::Chemical(mu));
        }
        let eta = self.eta.unwrap_or_default();
        let nuc = nu_critical_trap(self.beta, trap)?
            .finite()
            .ok_or_else(|| Error::Config("eta is undefined when ν_c is infinite".into()))?;
        Ok(StateKind::Number(eta * nuc))
    }
}

/// A pair of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointPair {
    /// First argument.
    pub x: Vec<f64>,
    /// Second argument.
    pub y: Vec<f64>,
}

/// Subcommand parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    /// Point pairs for `rdm`, `loops` and `aniso-check` (default: the origin).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PointPair>,
    /// Scaling exponent δ for `profile`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Profile grid.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<Vec<f64>>,
    /// Rescaled profile `|κ|^{d/2}ρ`.
    #[serde(default)]
    pub rescaled: bool,
    /// g-BEC band width for `thermo`.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_epsilon() -> f64 {
    0.05
}

impl Default for TaskSpec {
    fn default() -> Self {
        TaskSpec {
            pairs: Vec::new(),
            delta: None,
            grid: Vec::new(),
            rescaled: false,
            epsilon: default_epsilon(),
        }
    }
}

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    /// Comma-separated values with `#` metadata lines.
    #[default]
    Csv,
    /// JSON mirroring the result table.
    Json,
}

/// Output section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Output file (standard output when absent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Output format.
    #[serde(default)]
    pub format: Format,
}

/// Complete run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Unit convention.
    #[serde(default)]
    pub units: Units,
    /// Trap.
    pub trap: TrapSpec,
    /// Thermodynamic state.
    pub state: StateSpec,
    /// Subcommand parameters.
    #[serde(default)]
    pub task: TaskSpec,
    /// Series tolerances and loop cutoffs.
    #[serde(default)]
    pub series: SeriesControl,
    /// Output destination.
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    /// Parses a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and parses a JSON file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Structural validation (physics validation happens per κ).
    pub fn validate(&self) -> Result<()> {
        self.units.constants()?;
        self.trap.ladder()?;
        self.series.validate()?;
        if !(self.state.beta > 0.0 && self.state.beta.is_finite()) {
            return Err(Error::domain(format!("beta must be positive, got {}", self.state.beta)));
        }
        if let Some(nu) = self.state.nu {
            if !(nu > 0.0 && nu.is_finite()) {
                return Err(Error::domain(format!("nu must be positive, got {nu}")));
            }
        }
        if let Some(eta) = self.state.eta {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::domain(format!("eta must be positive, got {eta}")));
            }
        }
        let given = [self.state.nu, self.state.mu, self.state.eta]
            .iter()
            .filter(|v| v.is_some())
            .count();
        if given != 1 {
            return Err(Error::Config("state needs exactly one of nu, mu, eta".into()));
        }
        Ok(())
    }

    /// Compact JSON echo of the configuration.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }
}
