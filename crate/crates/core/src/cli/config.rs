use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::complexity::DEFAULT_TAU;
use crate::fractal::DEFAULT_BOX_CAP;
use crate::ising::{temperature_grid, Algorithm, ScanConfig};
use crate::{Error, Result};

/// Everything a run depends on. Stored as JSON; command-line flags override
/// the file, which overrides the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub quick: bool,
    pub budget: BudgetConfig,
    pub rate: RateConfig,
    pub fractal: FractalConfig,
    pub complexity: ComplexityConfig,
    pub statmech: StatmechConfig,
    pub ising: IsingConfig,
    pub bound: BoundConfig,
    pub pipeline: PipelineConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            out: PathBuf::from("out"),
            threads: None,
            quick: false,
            budget: BudgetConfig::default(),
            rate: RateConfig::default(),
            fractal: FractalConfig::default(),
            complexity: ComplexityConfig::default(),
            statmech: StatmechConfig::default(),
            ising: IsingConfig::default(),
            bound: BoundConfig::default(),
            pipeline: PipelineConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetConfig {
    /// Largest number of digit matrices enumerated exactly.
    pub box_cap: u64,
    /// Sampled points per depth past the cap; `null` disables sampling.
    pub fallback_samples: Option<usize>,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self {
            box_cap: DEFAULT_BOX_CAP,
            fallback_samples: Some(100_000),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RateConfig {
    pub codes: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FractalConfig {
    pub code: Option<PathBuf>,
    pub words: Vec<String>,
    pub q: u32,
    pub depths: Vec<usize>,
}

impl Default for FractalConfig {
    fn default() -> Self {
        Self {
            code: None,
            words: vec!["00".into(), "01".into(), "10".into()],
            q: 2,
            depths: (1..=6).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComplexityConfig {
    /// Words to order; when absent, `random_words` random binary words.
    pub code: Option<PathBuf>,
    pub random_words: usize,
    pub word_length: usize,
    pub neighbors: u32,
    pub tau: f64,
    pub min_length: usize,
    /// Codewords per concatenation for the code-level proxy.
    pub concatenation: usize,
    pub samples: usize,
}

impl Default for ComplexityConfig {
    fn default() -> Self {
        Self {
            code: None,
            random_words: 1000,
            word_length: 64,
            neighbors: 6,
            tau: DEFAULT_TAU,
            min_length: 16,
            concatenation: 4096,
            samples: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatmechConfig {
    pub q: u32,
    pub n: usize,
    pub rate: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    pub points: usize,
    /// Random raw weights rescaled to the Keane condition instead of
    /// uniform ones.
    pub keane: bool,
}

impl Default for StatmechConfig {
    fn default() -> Self {
        Self {
            q: 2,
            n: 8,
            rate: 0.5,
            beta_min: 0.05,
            beta_max: 2.0,
            points: 40,
            keane: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IsingConfig {
    pub d: usize,
    /// Empty selects the preset sizes for `d`.
    pub ls: Vec<usize>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub sweeps: Option<usize>,
    pub thermalization: Option<usize>,
    pub stride: usize,
    pub algorithm: Algorithm,
    pub blocks: usize,
    /// Also measure the energy correlator at the fitted `T_c`.
    pub correlator: bool,
    pub correlator_l: Option<usize>,
}

impl Default for IsingConfig {
    fn default() -> Self {
        Self {
            d: 2,
            ls: Vec::new(),
            t_min: None,
            t_max: None,
            points: None,
            sweeps: None,
            thermalization: None,
            stride: 1,
            algorithm: Algorithm::Wolff,
            blocks: 20,
            correlator: false,
            correlator_l: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundConfig {
    pub d: Option<u32>,
    /// Neighbor count `N = 2d`.
    pub neighbors: Option<u32>,
    pub nu: Option<f64>,
    pub nu_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub dims: Vec<usize>,
    pub words: usize,
    pub word_length: usize,
    pub neighbors: u32,
    pub word_sweeps: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4],
            words: 4096,
            word_length: 16,
            neighbors: 6,
            word_sweeps: 2000,
        }
    }
}

/// Fully resolved simulation grid of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingPlan {
    pub d: usize,
    pub ls: Vec<usize>,
    pub temps: Vec<f64>,
    pub scan: ScanConfig,
    pub correlator_l: usize,
}

/// Sizes and temperature window used when none are configured.
pub fn preset(d: usize, quick: bool) -> Result<(Vec<usize>, f64, f64, usize)> {
    Ok(match (d, quick) {
        (2, _) => (vec![8, 16, 32], 2.19, 2.35, 9),
        (3, false) => (vec![4, 6, 8, 12, 16], 4.40, 4.60, 9),
        (3, true) => (vec![4, 6, 8, 12], 4.40, 4.60, 9),
        (4, _) => (vec![3, 4, 5, 6], 6.40, 6.90, 11),
        _ => return Err(Error::Invalid(format!("lattice dimension must be 2, 3 or 4, got {d}"))),
    })
}

impl IsingConfig {
    pub fn plan(&self, seed: u64, quick: bool) -> Result<IsingPlan> {
        self.plan_for(self.d, seed, quick)
    }

    /// Plan for dimension `d` with this config's overrides.
    pub fn plan_for(&self, d: usize, seed: u64, quick: bool) -> Result<IsingPlan> {
        let (ls, lo, hi, points) = preset(d, quick)?;
        let ls = if self.ls.is_empty() { ls } else { self.ls.clone() };
        if let Some(l) = ls.iter().find(|&&l| l < 2) {
            return Err(Error::Invalid(format!("lattice side must be at least 2, got {l}")));
        }
        let temps = temperature_grid(
            self.t_min.unwrap_or(lo),
            self.t_max.unwrap_or(hi),
            self.points.unwrap_or(points),
        );
        let (sweeps, therm) = if quick { (7_000, 1_000) } else { (22_000, 2_000) };
        let scan = ScanConfig {
            algorithm: self.algorithm,
            sweeps: self.sweeps.unwrap_or(sweeps),
            thermalization: self.thermalization.unwrap_or(therm),
            stride: self.stride,
            seed,
            blocks: self.blocks,
        };
        let correlator_l = self.correlator_l.unwrap_or(match d {
            2 => 64,
            3 => 32,
            _ => 12,
        });
        Ok(IsingPlan {
            d,
            ls,
            temps,
            scan,
            correlator_l,
        })
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    /// Single-line form embedded in output files.
    pub fn to_compact_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
