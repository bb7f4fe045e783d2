//! Experiment configuration: TOML file, flag overrides, seed fallback.
//!
//! Every key in the file can be overridden on the command line, and a
//! missing seed falls back to the `GFVFA_SEED` environment variable (then
//! to 0). Identical configurations always produce byte-identical artifacts.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use gfvfa::chirp::ChirpSegment;
use gfvfa::graph::{self, Graph, ShiftKind};

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub graph: GraphConfig,
    #[serde(default)]
    pub signal: SignalConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default)]
    pub kernel: KernelConfig,
    #[serde(default)]
    pub detect: DetectConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    /// cycle | sensor | community | edge-list | knn
    pub kind: String,
    pub n: Option<usize>,
    /// Neighbor count for k-NN construction.
    pub k: Option<usize>,
    /// Community sizes (community kind).
    pub sizes: Option<Vec<usize>>,
    pub spread: Option<f64>,
    pub seed: Option<u64>,
    /// Edge-list path (edge-list kind) or coordinate CSV (knn kind).
    pub path: Option<PathBuf>,
    /// Gaussian weight scale for knn; omit for the auto rule.
    pub scale: Option<f64>,
    /// laplacian | adjacency
    pub shift: Option<String>,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            kind: "sensor".into(),
            n: None,
            k: None,
            sizes: None,
            spread: None,
            seed: None,
            path: None,
            scale: None,
            shift: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalConfig {
    /// multichirp | file
    pub kind: String,
    pub rate: Option<f64>,
    /// Segment list "start-end:k,start-end:k,...", 1-based inclusive.
    pub segments: Option<String>,
    pub extras: Option<Vec<usize>>,
    /// Choose the initial frequencies by in-mask chirp energy instead of
    /// taking them from the segment list.
    #[serde(default)]
    pub auto_frequencies: bool,
    pub path: Option<PathBuf>,
    /// 1-based column when `path` is a matrix CSV.
    pub column: Option<usize>,
}

impl Default for SignalConfig {
    fn default() -> Self {
        Self {
            kind: "multichirp".into(),
            rate: None,
            segments: None,
            extras: None,
            auto_frequencies: false,
            path: None,
            column: None,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub sigma: Option<Vec<f64>>,
    /// complex-circular | real
    pub kind: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub orders: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    /// Denominator floor; omit or set 0 for the automatic rule.
    pub epsilon: Option<f64>,
    pub out_dir: Option<PathBuf>,
    /// Report raw squared error instead of the per-vertex MSE.
    #[serde(default)]
    pub mse_raw: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    /// delta | choi-williams
    pub kind: Option<String>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DetectConfig {
    /// How many marginal peaks to report; defaults to the number of
    /// planted frequencies.
    pub top: Option<usize>,
}

impl ExperimentConfig {
    /// Load a config and apply dotted-path overrides ("graph.seed=3",
    /// "signal.rate=0.5") before deserializing, so every key is reachable
    /// from the command line.
    pub fn load_with_overrides(path: &Path, sets: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut table: toml::Table = text
            .parse()
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        for set in sets {
            apply_override(&mut table, set)?;
        }
        table
            .try_into()
            .with_context(|| format!("invalid config {}", path.display()))
    }

    /// Resolved base seed: config, then `GFVFA_SEED`, then 0.
    pub fn seed(&self) -> u64 {
        self.run.seed.unwrap_or_else(env_seed)
    }
}

/// Apply one "dotted.path=value" override to a parsed TOML tree. The value
/// is parsed as TOML when possible (numbers, booleans, arrays) and falls
/// back to a string.
fn apply_override(root: &mut toml::Table, set: &str) -> Result<()> {
    let (path, raw) = set
        .split_once('=')
        .with_context(|| format!("override '{set}' is not KEY=VALUE"))?;
    let parsed: toml::Value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut table) => table.remove("v").unwrap(),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = path.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        bail!("bad override path in '{set}'");
    }
    let mut table = root;
    for part in &parts[..parts.len() - 1] {
        table = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .with_context(|| format!("'{path}' does not address a table"))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}

/// Seed fallback shared by config- and flag-driven commands.
pub fn env_seed() -> u64 {
    std::env::var("GFVFA_SEED")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

/// Parse a segment list "1-24:22,25-34:7".
pub fn parse_segments(text: &str) -> Result<Vec<ChirpSegment>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (range, k) = part
            .split_once(':')
            .with_context(|| format!("segment '{part}' is not 'start-end:k'"))?;
        let (start, end) = range
            .split_once('-')
            .with_context(|| format!("range '{range}' is not 'start-end'"))?;
        out.push(ChirpSegment::new(
            start
                .trim()
                .parse()
                .with_context(|| format!("bad start in '{part}'"))?,
            end.trim()
                .parse()
                .with_context(|| format!("bad end in '{part}'"))?,
            k.trim()
                .parse()
                .with_context(|| format!("bad index in '{part}'"))?,
        ));
    }
    if out.is_empty() {
        bail!("segment list '{text}' is empty");
    }
    Ok(out)
}

pub fn parse_shift(text: &str) -> Result<ShiftKind> {
    match text {
        "laplacian" => Ok(ShiftKind::Laplacian),
        "adjacency" => Ok(ShiftKind::Adjacency),
        other => bail!("unknown shift '{other}' (expected laplacian or adjacency)"),
    }
}

/// Materialize the graph described by a [`GraphConfig`].
pub fn build_graph(cfg: &GraphConfig, base_seed: u64) -> Result<Graph> {
    let seed = cfg.seed.unwrap_or(base_seed);
    let graph = match cfg.kind.as_str() {
        "cycle" => {
            let n = cfg.n.context("graph.n is required for cycle graphs")?;
            graph::cycle_graph(n)?
        }
        "sensor" => {
            let n = cfg.n.context("graph.n is required for sensor graphs")?;
            let k = cfg.k.unwrap_or(5);
            graph::sensor_graph(n, k, seed)?.0
        }
        "community" => {
            let sizes = cfg
                .sizes
                .as_ref()
                .context("graph.sizes is required for community graphs")?;
            let k = cfg.k.unwrap_or(5);
            let spread = cfg.spread.unwrap_or(0.25);
            graph::community_graph(sizes, k, spread, seed)?.0
        }
        "edge-list" => {
            let path = cfg
                .path
                .as_ref()
                .context("graph.path is required for edge-list graphs")?;
            gfvfa::io::read_edge_list(path)?
        }
        "knn" => {
            let path = cfg
                .path
                .as_ref()
                .context("graph.path (coordinate CSV) is required for knn graphs")?;
            let points = gfvfa::io::read_coordinates(path)?;
            let k = cfg.k.context("graph.k is required for knn graphs")?;
            graph::knn_graph(&points, k, cfg.scale.filter(|&s| s > 0.0))?
        }
        other => bail!("unknown graph kind '{other}'"),
    };
    let shift = match &cfg.shift {
        Some(text) => parse_shift(text)?,
        None => ShiftKind::Laplacian,
    };
    Ok(graph.with_shift(shift))
}
