use std::path::PathBuf;

use crate::blending::BlendFamily;
use crate::error::{Error, Result};
use crate::lattice::ChainConfig;
use crate::potential::MorseParams;
use crate::stability::{BlendRule, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    CriticalStrain,
    Coercivity,
    Consistency,
    Deform,
    Scaling,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::CriticalStrain => "critical-strain",
            Scenario::Coercivity => "coercivity",
            Scenario::Consistency => "consistency",
            Scenario::Deform => "deform",
            Scenario::Scaling => "scaling",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceKind {
    Sine,
    Gaussian,
    None,
}

impl ForceKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sine" => Ok(ForceKind::Sine),
            "gaussian" => Ok(ForceKind::Gaussian),
            "none" => Ok(ForceKind::None),
            other => Err(Error::InvalidConfig(format!("unknown force kind `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ForceKind::Sine => "sine",
            ForceKind::Gaussian => "gaussian",
            ForceKind::None => "none",
        }
    }
}

/// External force parameters; `mu` and `sigma` are in reference coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceParams {
    pub amplitude_scale: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl ForceParams {
    /// Sine amplitude scale `1/5`, Gaussian scale `a`, `μ = 4a`, `σ = 50a`.
    pub fn defaults(kind: ForceKind, config: &ChainConfig) -> Self {
        let a = config.spacing::<f64>();
        Self {
            amplitude_scale: if kind == ForceKind::Gaussian { a } else { 0.2 },
            mu: 4.0 * a,
            sigma: 50.0 * a,
        }
    }
}

/// Blending selection by name, including the two pure models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Atomistic,
    Continuum,
    Family(BlendFamily),
}

impl ModelChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "atomistic" => Ok(ModelChoice::Atomistic),
            "continuum" => Ok(ModelChoice::Continuum),
            other => BlendFamily::parse(other).map(ModelChoice::Family),
        }
    }

    pub fn model(self, width: usize, one_sided: bool) -> Model {
        match self {
            ModelChoice::Atomistic => Model::Atomistic,
            ModelChoice::Continuum => Model::Continuum,
            ModelChoice::Family(family) => Model::Blended { family, width, one_sided },
        }
    }

    pub fn family(self) -> Option<BlendFamily> {
        match self {
            ModelChoice::Family(f) => Some(f),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub half_atoms: usize,
    pub range: usize,
    pub potential: MorseParams<f64>,
    pub choice: ModelChoice,
    pub blend_width: usize,
    pub one_sided: bool,
    pub scenario: Scenario,
    pub force: ForceKind,
    pub force_params: Option<ForceParams>,
    pub gamma: f64,
    pub dgamma: f64,
    pub gamma_max: f64,
    pub scan_exact: bool,
    /// Build the full family-by-width grid instead of a single critical strain.
    pub table: bool,
    /// Chain sizes for the consistency and scaling studies.
    pub sizes: Vec<usize>,
    pub rule: BlendRule,
    pub output_path: PathBuf,
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            half_atoms: 2000,
            range: 2,
            potential: MorseParams::default(),
            choice: ModelChoice::Family(BlendFamily::Cubic),
            blend_width: 5,
            one_sided: false,
            scenario,
            force: if scenario == Scenario::Deform { ForceKind::Sine } else { ForceKind::None },
            force_params: None,
            gamma: 1.0,
            dgamma: 1e-5,
            gamma_max: 1.5,
            scan_exact: false,
            table: false,
            sizes: match scenario {
                Scenario::Consistency => vec![250, 500, 1000, 2000],
                _ => vec![500, 1000, 2000, 4000],
            },
            rule: BlendRule::CubeRoot,
            output_path: PathBuf::from(format!("{}.csv", scenario.name())),
        }
    }

    pub fn chain(&self) -> Result<ChainConfig> {
        ChainConfig::new(self.half_atoms, self.range)
    }

    pub fn model(&self) -> Model {
        self.choice.model(self.blend_width, self.one_sided)
    }

    pub fn force_params(&self, config: &ChainConfig) -> ForceParams {
        self.force_params.unwrap_or_else(|| ForceParams::defaults(self.force, config))
    }

    pub fn validate(&self) -> Result<()> {
        self.chain()?;
        if self.scenario == Scenario::Deform && self.force == ForceKind::None {
            return Err(Error::InvalidConfig("deform needs --force sine|gaussian".into()));
        }
        if self.scenario == Scenario::Deform && self.half_atoms <= 3 {
            return Err(Error::InvalidConfig("deform compares N = 1, 2, 3 and needs M > 3".into()));
        }
        if !(self.dgamma > 0.0) || !(self.gamma_max > 1.0) {
            return Err(Error::InvalidConfig("need dgamma > 0 and gamma-max > 1".into()));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidConfig("gamma must be positive".into()));
        }
        if matches!(self.scenario, Scenario::Consistency | Scenario::Scaling) && self.sizes.is_empty() {
            return Err(Error::InvalidConfig("size list is empty".into()));
        }
        if let Some(p) = self.force_params {
            if !(p.sigma > 0.0) {
                return Err(Error::InvalidParameter(format!("sigma must be positive, got {}", p.sigma)));
            }
        }
        Ok(())
    }

    /// `key = value` pairs echoed into CSV metadata.
    pub fn echo(&self) -> Vec<(String, String)> {
        let p = &self.potential;
        let mut out = vec![
            ("scenario".to_string(), self.scenario.name().to_string()),
            ("M".to_string(), self.half_atoms.to_string()),
            ("N".to_string(), self.range.to_string()),
            (
                "morse".to_string(),
                format!("De={:?} alpha={:?} re={:?}", p.well_depth, p.width, p.equilibrium),
            ),
            ("model".to_string(), self.model().tag().to_string()),
            ("L".to_string(), self.blend_width.to_string()),
            ("layout".to_string(), if self.one_sided { "one-sided" } else { "symmetric" }.to_string()),
        ];
        if self.scenario == Scenario::CriticalStrain {
            out.push(("dgamma".to_string(), format!("{:?}", self.dgamma)));
            out.push(("gamma_max".to_string(), format!("{:?}", self.gamma_max)));
            out.push(("scan_exact".to_string(), self.scan_exact.to_string()));
        }
        out.push(("version".to_string(), env!("CARGO_PKG_VERSION").to_string()));
        out
    }
}
