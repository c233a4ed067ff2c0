use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use qaoa_maxcut::graph::RegularFamily;
use qaoa_maxcut::lightcone::{Backend, LightConeOptions};
use qaoa_maxcut::qaoa::Engine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recipe {
    Fig1,
    Fig2,
    #[serde(rename = "fig3-p0-sweep")]
    Fig3P0Sweep,
    Fig4,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Random,
    Bipartite,
}

impl Family {
    pub fn regular(self) -> RegularFamily {
        match self {
            Self::Random => RegularFamily::Random,
            Self::Bipartite => RegularFamily::Bipartite,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::Bipartite => "bipartite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    StandardTree,
    StandardAscend,
    WarmstartTree,
    WarmstartAscend,
    GwOnly,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Self::StandardTree => "standard-tree",
            Self::StandardAscend => "standard-ascend",
            Self::WarmstartTree => "warmstart-tree",
            Self::WarmstartAscend => "warmstart-ascend",
            Self::GwOnly => "gw-only",
        }
    }

    pub fn needs_gw(self) -> bool {
        matches!(self, Self::WarmstartTree | Self::WarmstartAscend | Self::GwOnly)
    }

    pub fn is_warmstart(self) -> bool {
        matches!(self, Self::WarmstartTree | Self::WarmstartAscend)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    Dense,
    Lightcone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    Tensor,
    Dense,
}

/// One experiment. Every number a run produces is a function of this value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub recipe: Recipe,
    pub sizes: Vec<usize>,
    pub depths: Vec<usize>,
    pub instances: usize,
    pub seed: u64,
    pub families: Vec<Family>,
    pub strategies: Vec<Strategy>,
    /// Keep only graphs with a single best cut.
    pub unique_maxcut: bool,
    pub engine: EngineKind,
    pub backend: BackendKind,
    pub memoize: bool,
    /// Nelder–Mead evaluations for the ascend strategies.
    pub ascend_budget: usize,
    /// Seed of the relaxation solver; the plane seed is derived per graph.
    pub sdp_seed: u64,
    /// Points of the axis-rotation sweep over `[−π, π)`.
    pub sweep_points: usize,
    /// Fill the `wall_ms` column. Off by default so reruns are byte-identical.
    pub record_wall_time: bool,
    pub allow_large: bool,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Desk-scale defaults for each recipe.
    pub fn preset(recipe: Recipe) -> Self {
        let base = Self {
            recipe,
            sizes: vec![16],
            depths: vec![0, 1, 2],
            instances: 10,
            seed: 1,
            families: vec![Family::Random, Family::Bipartite],
            strategies: vec![Strategy::StandardTree],
            unique_maxcut: true,
            engine: EngineKind::Dense,
            backend: BackendKind::Tensor,
            memoize: true,
            ascend_budget: 300,
            sdp_seed: 0,
            sweep_points: 32,
            record_wall_time: false,
            allow_large: false,
            output_dir: PathBuf::from("results"),
        };
        match recipe {
            Recipe::Fig1 | Recipe::Custom => base,
            Recipe::Fig2 => Self {
                sizes: vec![20],
                depths: vec![1, 2, 3],
                instances: 1,
                strategies: vec![Strategy::StandardTree, Strategy::StandardAscend],
                ..base
            },
            Recipe::Fig3P0Sweep => Self {
                sizes: vec![24],
                instances: 1,
                families: vec![Family::Random],
                strategies: vec![Strategy::WarmstartTree, Strategy::GwOnly],
                unique_maxcut: false,
                engine: EngineKind::Lightcone,
                ..base
            },
            Recipe::Fig4 => Self {
                sizes: vec![32, 64, 128],
                depths: vec![0, 1, 2, 3],
                families: vec![Family::Random],
                strategies: vec![Strategy::StandardTree, Strategy::WarmstartTree, Strategy::GwOnly],
                unique_maxcut: false,
                engine: EngineKind::Lightcone,
                ..base
            },
        }
    }

    pub fn engine(&self) -> Engine {
        match self.engine {
            EngineKind::Dense => Engine::Dense,
            EngineKind::Lightcone => Engine::LightCone(LightConeOptions {
                backend: match self.backend {
                    BackendKind::Tensor => Backend::TensorNetwork,
                    BackendKind::Dense => Backend::Dense,
                },
                memoize: self.memoize,
                ..LightConeOptions::default()
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.depths.is_empty() || self.families.is_empty() {
            bail!("sizes, depths and families must be non-empty");
        }
        if self.strategies.is_empty() {
            bail!("strategies must be non-empty");
        }
        if self.instances == 0 {
            bail!("instances must be positive");
        }
        if self.recipe == Recipe::Fig3P0Sweep && self.sweep_points == 0 {
            bail!("sweep_points must be positive");
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).context("parsing config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text)
    }
}
