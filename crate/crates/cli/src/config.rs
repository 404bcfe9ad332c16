//! TOML run configuration: a named preset and/or field-by-field overrides,
//! resolved against the library defaults into a full [`SweepConfig`].

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use homsim::experiment::{InitialStateKind, Statistics, SweepConfig, TimeRule};

/// One parameter grid: either an explicit list of values or an evenly
/// spaced range.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    /// Explicit values, e.g. `[0.5, 1.0, 2.0]`.
    List(Vec<f64>),
    /// Evenly spaced values, e.g. `{ start = 0.5, stop = 2.6, points = 25 }`.
    Linspace { start: f64, stop: f64, points: usize },
}

impl GridSpec {
    /// Materializes the grid values.
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::List(values) => {
                if values.is_empty() {
                    bail!("a grid list must not be empty");
                }
                Ok(values.clone())
            }
            GridSpec::Linspace {
                start,
                stop,
                points,
            } => match points {
                0 => bail!("a grid range needs at least one point"),
                1 => Ok(vec![*start]),
                n => Ok((0..*n)
                    .map(|i| start + (stop - start) * i as f64 / (*n - 1) as f64)
                    .collect()),
            },
        }
    }
}

/// The on-disk configuration. Every field is optional: values come from the
/// preset (or the library base configuration when no preset is named) unless
/// overridden here. Unknown keys are rejected so typos cannot silently run
/// the wrong experiment.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Starting point: one of the named presets.
    pub preset: Option<String>,
    /// Hopping amplitude J.
    #[serde(rename = "J")]
    pub hopping: Option<f64>,
    /// Lattice size L (odd).
    #[serde(rename = "L")]
    pub sites: Option<usize>,
    /// Quasimomentum grid.
    pub k_grid: Option<GridSpec>,
    /// Barrier-height grid (μ).
    pub mu_grid: Option<GridSpec>,
    /// Interaction-strength grid (U).
    #[serde(rename = "U_grid")]
    pub interaction_grid: Option<GridSpec>,
    /// `boson`, `fermion`, or `distinguishable`.
    pub statistics: Option<String>,
    /// `product` or `entangled`.
    pub initial_state: Option<String>,
    /// Launch center c < 0 of the left packet.
    pub c: Option<f64>,
    /// Packet width σ.
    pub sigma: Option<f64>,
    /// `border` or `snapshot`.
    pub time_rule: Option<String>,
    /// Deviation threshold for flagging rows.
    pub flag_threshold: Option<f64>,
    /// CSV destination; stdout when omitted.
    pub output: Option<PathBuf>,
}

/// Reads and resolves a configuration file.
pub fn load(path: &Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let file: FileConfig =
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    resolve(file)
}

/// Applies the overrides in `file` on top of its preset (or the base
/// configuration).
pub fn resolve(file: FileConfig) -> Result<SweepConfig> {
    let mut config = match &file.preset {
        Some(name) => SweepConfig::preset(name)?,
        None => SweepConfig::base(),
    };
    if let Some(value) = file.hopping {
        config.hopping = value;
    }
    if let Some(value) = file.sites {
        config.sites = value;
    }
    if let Some(grid) = &file.k_grid {
        config.k_values = grid.values().context("k_grid")?;
    }
    if let Some(grid) = &file.mu_grid {
        config.barrier_values = grid.values().context("mu_grid")?;
    }
    if let Some(grid) = &file.interaction_grid {
        config.interaction_values = grid.values().context("U_grid")?;
    }
    if let Some(label) = &file.statistics {
        config.statistics = Statistics::parse(label)?;
    }
    if let Some(label) = &file.initial_state {
        config.initial_state = InitialStateKind::parse(label)?;
    }
    if let Some(value) = file.c {
        config.packet_center = value;
    }
    if let Some(value) = file.sigma {
        config.packet_width = value;
    }
    if let Some(label) = &file.time_rule {
        config.time_rule = TimeRule::parse(label)?;
    }
    if let Some(value) = file.flag_threshold {
        config.flag_threshold = Some(value);
    }
    if let Some(path) = &file.output {
        config.output = Some(path.clone());
    }
    Ok(config)
}
