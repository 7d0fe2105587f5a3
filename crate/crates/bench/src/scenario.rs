//! Scenario identifiers, parameter presets and configuration overrides.

use std::fmt;
use std::path::Path;

use anyhow::{bail, Context};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioId {
    GsoPairwise,
    GsoNodesSweep,
    GenVsGso,
    GenNodesSweep,
    GenAttainedVsBound,
    PcaSampleSweep,
    PcaDimSweep,
    PcaAttainedVsBound,
}

/// Which model generates the matrices and which comparisons are made.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Shift operators of one sampled graph against each other.
    Pairwise,
    /// Shift operators against their generating matrices.
    Generating,
    /// Population against sample covariance.
    Pca,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 8] = [
        ScenarioId::GsoPairwise,
        ScenarioId::GsoNodesSweep,
        ScenarioId::GenVsGso,
        ScenarioId::GenNodesSweep,
        ScenarioId::GenAttainedVsBound,
        ScenarioId::PcaSampleSweep,
        ScenarioId::PcaDimSweep,
        ScenarioId::PcaAttainedVsBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::GsoPairwise => "gso-pairwise",
            ScenarioId::GsoNodesSweep => "gso-nodes-sweep",
            ScenarioId::GenVsGso => "gen-vs-gso",
            ScenarioId::GenNodesSweep => "gen-nodes-sweep",
            ScenarioId::GenAttainedVsBound => "gen-attained-vs-bound",
            ScenarioId::PcaSampleSweep => "pca-sample-sweep",
            ScenarioId::PcaDimSweep => "pca-dim-sweep",
            ScenarioId::PcaAttainedVsBound => "pca-attained-vs-bound",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|id| id.name() == s)
    }

    /// Figure number this scenario feeds.
    pub fn figure(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_figure(figure: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|id| id.figure() == figure)
    }

    pub fn family(self) -> Family {
        match self {
            ScenarioId::GsoPairwise | ScenarioId::GsoNodesSweep => Family::Pairwise,
            ScenarioId::GenVsGso | ScenarioId::GenNodesSweep | ScenarioId::GenAttainedVsBound => Family::Generating,
            _ => Family::Pca,
        }
    }

    /// Name of the swept quantity: graph size `n`, sample count `N` or dimension `p`.
    pub fn axis(self) -> &'static str {
        match self {
            ScenarioId::PcaSampleSweep | ScenarioId::PcaAttainedVsBound => "N",
            ScenarioId::PcaDimSweep => "p",
            _ => "n",
        }
    }

    /// Comparison labels in output order.
    pub fn comparisons(self) -> &'static [&'static str] {
        match self.family() {
            Family::Pairwise => &["A-vs-L", "L-vs-Lsym", "A-vs-Lsym"],
            Family::Generating => &["A-vs-BA", "L-vs-BL", "Lsym-vs-BLsym"],
            Family::Pca => &["SigmaHat-vs-Sigma"],
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fully resolved parameters of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub id: ScenarioId,
    /// Values of the swept quantity named by [`ScenarioId::axis`].
    pub grid: Vec<usize>,
    /// Number of blocks `K` (graphs) or spikes `r` (covariance).
    pub blocks: usize,
    pub p_within: f64,
    pub p_between: f64,
    /// Offset of the compared block, counted from the informative end.
    pub j: usize,
    pub r: usize,
    pub replicates: usize,
    /// Covariance dimension when not swept.
    pub dimension: usize,
    /// Sample count when not swept.
    pub samples: usize,
    pub seed: u64,
    pub full: bool,
}

pub const DEFAULT_SEED: u64 = 20_240_601;

impl ScenarioConfig {
    /// Full-scale parameters with `full`, desk-scale otherwise. Desk presets
    /// cap graph sizes and covariance dimensions at 120 and use 10 replicates.
    pub fn preset(id: ScenarioId, full: bool) -> Self {
        let desk_reps = 10;
        let (grid, pb, pw, j, r, reps): (Vec<usize>, f64, f64, usize, usize, usize) = match id {
            ScenarioId::GsoPairwise => (if full { vec![300] } else { vec![120] }, 0.1, 0.6, 1, 2, 25),
            ScenarioId::GsoNodesSweep => (sweep(full), 0.1, 0.9, 1, 2, 25),
            ScenarioId::GenVsGso => (if full { vec![210] } else { vec![120] }, 0.1, 0.9, 0, 3, 25),
            ScenarioId::GenNodesSweep => (sweep(full), 0.1, 0.8, 0, 3, 25),
            ScenarioId::GenAttainedVsBound => (vec![30], 0.1, 0.6, 0, 3, 25),
            ScenarioId::PcaSampleSweep => (vec![10, 100, 1000], 0.2, 0.8, 0, 3, 25),
            ScenarioId::PcaDimSweep => (
                if full { vec![30, 210, 420] } else { vec![30, 60, 120] },
                0.2,
                0.8,
                0,
                3,
                25,
            ),
            ScenarioId::PcaAttainedVsBound => (vec![100], 0.4, 0.6, 0, 3, 25),
        };
        let single_run = matches!(id, ScenarioId::GenAttainedVsBound | ScenarioId::PcaAttainedVsBound);
        Self {
            id,
            grid,
            blocks: 3,
            p_within: pw,
            p_between: pb,
            j,
            r,
            replicates: if full || single_run { reps } else { desk_reps },
            dimension: 60,
            samples: 100,
            seed: DEFAULT_SEED,
            full,
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.grid.is_empty() {
            bail!("{}: grid is empty", self.id);
        }
        if self.replicates == 0 {
            bail!("{}: replicates must be positive", self.id);
        }
        if self.blocks == 0 {
            bail!("{}: blocks must be positive", self.id);
        }
        for (name, p) in [("p_within", self.p_within), ("p_between", self.p_between)] {
            if !(0.0..=1.0).contains(&p) {
                bail!("{}: {name} = {p} is not a probability", self.id);
            }
        }
        if self.r == 0 {
            bail!("{}: r must be positive", self.id);
        }
        for &v in &self.grid {
            let n = match self.id.axis() {
                "N" => self.dimension,
                _ => v,
            };
            if v == 0 || self.j + self.r >= n || self.blocks > n {
                bail!(
                    "{}: grid value {v} is too small for j = {}, r = {}",
                    self.id,
                    self.j,
                    self.r
                );
            }
        }
        Ok(())
    }

    /// Matrix dimension at grid value `v`.
    pub fn size_at(&self, v: usize) -> usize {
        match self.id.axis() {
            "N" => self.dimension,
            _ => v,
        }
    }

    /// Sample count at grid value `v`.
    pub fn samples_at(&self, v: usize) -> usize {
        match self.id.axis() {
            "N" => v,
            _ => self.samples,
        }
    }

    /// One-line rendering embedded in output headers.
    pub fn header(&self) -> String {
        let grid: Vec<String> = self.grid.iter().map(usize::to_string).collect();
        let mut s = format!(
            "scenario={} seed={} full={} {}=[{}] blocks={} p_within={} p_between={} j={} r={} replicates={}",
            self.id,
            self.seed,
            self.full,
            self.id.axis(),
            grid.join(","),
            self.blocks,
            self.p_within,
            self.p_between,
            self.j,
            self.r,
            self.replicates
        );
        match self.id {
            ScenarioId::PcaSampleSweep | ScenarioId::PcaAttainedVsBound => {
                s.push_str(&format!(" p={}", self.dimension))
            }
            ScenarioId::PcaDimSweep => s.push_str(&format!(" N={}", self.samples)),
            _ => {}
        }
        s
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = &o.grid {
            self.grid = v.clone();
        }
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = o.$f { self.$f = v; } )* };
        }
        set!(blocks, p_within, p_between, j, r, replicates, dimension, samples, seed);
    }
}

fn sweep(full: bool) -> Vec<usize> {
    if full {
        vec![30, 120, 210, 300]
    } else {
        vec![30, 60, 120]
    }
}

/// Optional per-scenario settings; unset fields keep the preset.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub grid: Option<Vec<usize>>,
    pub blocks: Option<usize>,
    pub p_within: Option<f64>,
    pub p_between: Option<f64>,
    pub j: Option<usize>,
    pub r: Option<usize>,
    pub replicates: Option<usize>,
    pub dimension: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

/// A configuration file: top-level keys apply to every scenario, tables
/// named after a scenario apply to that scenario only.
#[derive(Clone, Debug, Default, Deserialize)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub full: Option<bool>,
    #[serde(flatten)]
    pub scenarios: std::collections::BTreeMap<String, Overrides>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let cfg: ConfigFile = toml::from_str(text).context("invalid configuration")?;
        if let Some(bad) = cfg.scenarios.keys().find(|k| ScenarioId::parse(k).is_none()) {
            bail!("unknown scenario section [{bad}]");
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }
}

/// Preset, then the file's section, then explicit flags.
pub fn resolve(
    id: ScenarioId,
    file: Option<&ConfigFile>,
    full_flag: bool,
    seed_flag: Option<u64>,
) -> anyhow::Result<ScenarioConfig> {
    let full = full_flag || file.and_then(|f| f.full).unwrap_or(false);
    let mut cfg = ScenarioConfig::preset(id, full);
    if let Some(f) = file {
        if let Some(s) = f.seed {
            cfg.seed = s;
        }
        if let Some(o) = f.scenarios.get(id.name()) {
            cfg.apply(o);
        }
    }
    if let Some(s) = seed_flag {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}
