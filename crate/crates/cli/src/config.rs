//! JSON experiment configs. Rationals are `"a/b"` strings; floats are
//! rejected wherever an exact value is expected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use solyanik_core::ergodic::FiniteSystem;
use solyanik_core::rational::parse_rational;
use solyanik_core::tauberian::{Mode, DEFAULT_EXHAUSTIVE_CELLS};
use solyanik_core::{BasisFamily, BasisKind, FamilySpec, LatticeSet, Rational, Window, DEFAULT_ENUMERATION_CAP};

use crate::error::{CliError, Result};
use crate::formats;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub kind: String,
    pub dim: usize,
    pub truncation: i64,
    #[serde(default = "one")]
    pub q: u64,
    #[serde(default)]
    pub cap: Option<u64>,
}

fn one() -> u64 {
    1
}

impl FamilyConfig {
    pub fn spec(&self) -> Result<FamilySpec> {
        let kind: BasisKind = self
            .kind
            .parse()
            .map_err(|_| CliError::Config(format!("unknown basis kind '{}'", self.kind)))?;
        Ok(FamilySpec::new(kind, self.dim, self.truncation).with_q(self.q))
    }

    pub fn build(&self) -> Result<BasisFamily> {
        Ok(self.spec()?.enumerate(self.cap.unwrap_or(DEFAULT_ENUMERATION_CAP))?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl WindowConfig {
    pub fn build(&self) -> Result<Window> {
        Ok(Window::new(self.lo.clone(), self.hi.clone())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SetConfig {
    Inline { window: WindowConfig, points: Vec<Vec<i64>> },
    File { file: PathBuf },
}

impl SetConfig {
    pub fn build(&self, base: &Path) -> Result<LatticeSet> {
        match self {
            SetConfig::Inline { window, points } => Ok(LatticeSet::new(window.build()?, points.clone())?),
            SetConfig::File { file } => {
                let path = base.join(file);
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                formats::read_set(&path.display().to_string(), &text)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SystemConfig {
    Cyclic { cyclic: Vec<usize> },
    Explicit { weights: Vec<String>, maps: Vec<Vec<usize>> },
    File { file: PathBuf },
}

impl SystemConfig {
    pub fn build(&self, base: &Path) -> Result<FiniteSystem> {
        match self {
            SystemConfig::Cyclic { cyclic } => Ok(FiniteSystem::product_cyclic(cyclic)?),
            SystemConfig::Explicit { weights, maps } => {
                let weights = weights.iter().map(|w| rational(w)).collect::<Result<Vec<_>>>()?;
                Ok(FiniteSystem::new(weights, maps.clone())?)
            }
            SystemConfig::File { file } => {
                let path = base.join(file);
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                formats::read_system(&path.display().to_string(), &text)
            }
        }
    }
}

pub fn rational(text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| CliError::Config(format!("'{text}': {e}")))
}

pub fn alpha_grid(texts: &[String]) -> Result<Vec<Rational>> {
    let grid = texts.iter().map(|t| rational(t)).collect::<Result<Vec<_>>>()?;
    solyanik_core::tauberian::check_alpha_grid(&grid)?;
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaximalFieldParams {
    pub family: FamilyConfig,
    pub set: SetConfig,
    /// Evaluation window; defaults to the set's window dilated by `r - 1`.
    #[serde(default)]
    pub window: Option<WindowConfig>,
    /// Level sets to report.
    #[serde(default)]
    pub alphas: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeConfig {
    Exhaustive,
    Search,
}

impl From<ModeConfig> for Mode {
    fn from(m: ModeConfig) -> Mode {
        match m {
            ModeConfig::Exhaustive => Mode::Exhaustive,
            ModeConfig::Search => Mode::Search,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub family: FamilyConfig,
    pub window: WindowConfig,
    pub alphas: Vec<String>,
    pub mode: ModeConfig,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default = "default_cells")]
    pub cap: usize,
}

fn default_cells() -> usize {
    DEFAULT_EXHAUSTIVE_CELLS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErgodicParams {
    pub system: SystemConfig,
    pub family: FamilyConfig,
    pub alphas: Vec<String>,
    /// Upper bound to compare the ergodic constant against, one per alpha or
    /// `"centered"` for `1 + 2(1 - alpha)/alpha`.
    #[serde(default)]
    pub discrete_bound: Option<BoundConfig>,
    /// Horizon for the one-sided operator; defaults to the number of atoms.
    #[serde(default)]
    pub nmax: Option<usize>,
    #[serde(default = "default_cells")]
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundConfig {
    Named(String),
    Values(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferenceParams {
    pub system: SystemConfig,
    pub family: FamilyConfig,
    pub horizon: i64,
    /// Atom lists to check; every subset when absent (up to `cap` atoms).
    #[serde(default)]
    pub sets: Option<Vec<Vec<usize>>>,
    #[serde(default = "default_cells")]
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitParams {
    /// `[alpha, value]` pairs, or a sweep CSV path.
    #[serde(default)]
    pub sweep: Option<Vec<[String; 2]>>,
    #[serde(default)]
    pub sweep_csv: Option<PathBuf>,
    /// Reference exponent to report next to the fit.
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub setting: Option<String>,
    #[serde(default)]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", content = "params", rename_all = "kebab-case")]
pub enum Experiment {
    MaximalField(MaximalFieldParams),
    TauberianSweep(SweepParams),
    ErgodicCheck(ErgodicParams),
    Transference(TransferenceParams),
    AnalysisFit(FitParams),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::MaximalField(_) => "maximal-field",
            Experiment::TauberianSweep(_) => "tauberian-sweep",
            Experiment::ErgodicCheck(_) => "ergodic-check",
            Experiment::Transference(_) => "transference",
            Experiment::AnalysisFit(_) => "analysis-fit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

const TOP_LEVEL_KEYS: [&str; 4] = ["experiment", "params", "seed", "out"];

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let object = value.as_object().ok_or_else(|| CliError::Config("expected a JSON object".into()))?;
        if let Some(key) = object.keys().find(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
            return Err(CliError::Config(format!("unknown field '{key}'")));
        }
        let config: Self = serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<()> {
        match &self.experiment {
            Experiment::MaximalField(p) => {
                p.family.spec()?;
                p.alphas.iter().map(|a| rational(a)).collect::<Result<Vec<_>>>()?;
            }
            Experiment::TauberianSweep(p) => {
                p.family.spec()?;
                alpha_grid(&p.alphas)?;
                if p.mode == ModeConfig::Search {
                    if self.seed.is_none() {
                        return Err(CliError::Config("search mode needs a seed".into()));
                    }
                    if p.budget.is_none() {
                        return Err(CliError::Config("search mode needs a budget".into()));
                    }
                }
            }
            Experiment::ErgodicCheck(p) => {
                p.family.spec()?;
                alpha_grid(&p.alphas)?;
                if let Some(BoundConfig::Values(v)) = &p.discrete_bound {
                    if v.len() != p.alphas.len() {
                        return Err(CliError::Config("discrete_bound needs one value per alpha".into()));
                    }
                    v.iter().map(|b| rational(b)).collect::<Result<Vec<_>>>()?;
                }
                if let Some(BoundConfig::Named(name)) = &p.discrete_bound {
                    if name != "centered" {
                        return Err(CliError::Config(format!("unknown bound '{name}'")));
                    }
                }
            }
            Experiment::Transference(p) => {
                p.family.spec()?;
                if p.horizon < 1 {
                    return Err(CliError::Config("horizon must be at least 1".into()));
                }
            }
            Experiment::AnalysisFit(p) => {
                if p.sweep.is_some() == p.sweep_csv.is_some() {
                    return Err(CliError::Config("give exactly one of 'sweep' and 'sweep_csv'".into()));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form (sorted keys, no whitespace).
    pub fn digest(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        hex(&Sha256::digest(value.to_string().as_bytes()))
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWEEP: &str = r#"{
        "experiment": "tauberian-sweep",
        "params": {
            "family": {"kind": "box", "dim": 1, "truncation": 5},
            "window": {"lo": [-3], "hi": [3]},
            "alphas": ["1/2", "2/3", "3/4"],
            "mode": "exhaustive"
        }
    }"#;

    #[test]
    fn parses_a_sweep() {
        let c = ExperimentConfig::parse(SWEEP).unwrap();
        assert_eq!(c.experiment.name(), "tauberian-sweep");
        assert_eq!(c.seed, None);
    }

    #[test]
    fn digest_ignores_formatting_but_not_content() {
        let a = ExperimentConfig::parse(SWEEP).unwrap();
        let b = ExperimentConfig::parse(&SWEEP.replace('\n', " ")).unwrap();
        assert_eq!(a.digest(), b.digest());
        let c = ExperimentConfig::parse(&SWEEP.replace("3/4", "4/5")).unwrap();
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn rejects_bad_configs() {
        for bad in [
            SWEEP.replace("\"1/2\"", "0.5"),
            SWEEP.replace("\"exhaustive\"", "\"search\""),
            SWEEP.replace("\"box\"", "\"disk\""),
            SWEEP.replace("\"mode\"", "\"mood\""),
            SWEEP.replace("\"params\"", "\"seed\": 1, \"extra\": 2, \"params\""),
            "[1, 2]".to_string(),
        ] {
            assert!(ExperimentConfig::parse(&bad).is_err(), "{bad}");
        }
    }
}
