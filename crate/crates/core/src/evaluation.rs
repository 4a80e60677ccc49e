// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Partition similarity and the benchmark loop that scores detection
//! algorithms against generated reference structures.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detection::{detect, Algorithm, DetectionParams};
use crate::generator::{generate, GeneratorConfig, GeneratorError};
use crate::graph::Partition;
use crate::metrics::{
    profile_partition_with, property_curve, size_distribution, unit_histogram, BinnedCurve,
    CommunityProfile, DistanceMode, HistogramBin, Property, DEFAULT_BINS_PER_DECADE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvaluationError {
    #[error("partitions cover different node counts ({left} and {right})")]
    NodeCountMismatch { left: usize, right: usize },
    #[error("at least two nodes are required, got {0}")]
    TooFewNodes(usize),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("invalid benchmark setting {field}: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },
}

/// Sparse intersection counts between the communities of two partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    /// `(i, j, N_ij)` for every nonzero cell, sorted by `(i, j)`.
    entries: Vec<(usize, usize, usize)>,
    rows: Vec<usize>,
    columns: Vec<usize>,
    total: usize,
}

impl ConfusionMatrix {
    pub fn entries(&self) -> &[(usize, usize, usize)] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries
            .binary_search_by_key(&(i, j), |&(a, b, _)| (a, b))
            .map_or(0, |k| self.entries[k].2)
    }

    /// Row marginals `N_i.`, the community sizes of the first partition.
    pub fn row_sums(&self) -> &[usize] {
        &self.rows
    }

    /// Column marginals `N_.j`.
    pub fn column_sums(&self) -> &[usize] {
        &self.columns
    }

    pub fn total(&self) -> usize {
        self.total
    }
}

pub fn confusion_matrix(a: &Partition, b: &Partition) -> Result<ConfusionMatrix, EvaluationError> {
    if a.node_count() != b.node_count() {
        return Err(EvaluationError::NodeCountMismatch {
            left: a.node_count(),
            right: b.node_count(),
        });
    }
    let mut pairs: Vec<(usize, usize)> = a
        .membership()
        .iter()
        .zip(b.membership())
        .map(|(&i, &j)| (i, j))
        .collect();
    pairs.sort_unstable();
    let mut entries: Vec<(usize, usize, usize)> = Vec::new();
    for (i, j) in pairs {
        match entries.last_mut() {
            Some(last) if last.0 == i && last.1 == j => last.2 += 1,
            _ => entries.push((i, j, 1)),
        }
    }
    Ok(ConfusionMatrix {
        entries,
        rows: a.sizes(),
        columns: b.sizes(),
        total: a.node_count(),
    })
}

/// Sum of values after sorting, so the result does not depend on the order
/// the terms were produced in.
fn ordered_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

fn marginal_entropy_sum(sizes: &[usize], total: usize) -> f64 {
    ordered_sum(
        sizes
            .iter()
            .map(|&s| s as f64 * (s as f64 / total as f64).ln())
            .collect(),
    )
}

/// Normalized mutual information with natural logarithms:
/// `-2 sum N_ij ln(N_ij N / (N_i. N_.j)) / (sum N_i. ln(N_i./N) + sum N_.j ln(N_.j/N))`.
///
/// Identical partitions score exactly 1. When both partitions are a single
/// block the denominator vanishes and the score is 1.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64, EvaluationError> {
    let cm = confusion_matrix(a, b)?;
    let n = cm.total;
    if n < 2 {
        return Err(EvaluationError::TooFewNodes(n));
    }
    if a == b {
        return Ok(1.0);
    }
    let numerator = -2.0
        * ordered_sum(
            cm.entries
                .iter()
                .map(|&(i, j, nij)| {
                    let joint = nij as u128 * n as u128;
                    let marginal = cm.rows[i] as u128 * cm.columns[j] as u128;
                    nij as f64 * (joint as f64 / marginal as f64).ln()
                })
                .collect(),
        );
    let (ha, hb) = (
        marginal_entropy_sum(&cm.rows, n),
        marginal_entropy_sum(&cm.columns, n),
    );
    let denominator = ha + hb;
    if denominator == 0.0 {
        return Ok(0.0);
    }
    Ok((numerator / denominator).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub generators: Vec<GeneratorConfig>,
    #[serde(default = "all_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default)]
    pub detection: DetectionParams,
    #[serde(default = "default_bins")]
    pub bins_per_decade: usize,
    #[serde(default)]
    pub distance_mode: DistanceMode,
    /// Wall-clock timings make reports differ between runs, so they are
    /// only recorded on request.
    #[serde(default)]
    pub record_runtime: bool,
}

fn all_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}

fn default_instances() -> usize {
    5
}

fn default_bins() -> usize {
    DEFAULT_BINS_PER_DECADE
}

impl BenchmarkConfig {
    pub fn new(generator: GeneratorConfig) -> Self {
        BenchmarkConfig {
            generators: vec![generator],
            algorithms: all_algorithms(),
            instances: default_instances(),
            detection: DetectionParams::default(),
            bins_per_decade: default_bins(),
            distance_mode: DistanceMode::Exact,
            record_runtime: false,
        }
    }

    pub fn validate(&self) -> Result<(), EvaluationError> {
        let bad = |field, message: &str| {
            Err(EvaluationError::InvalidConfig {
                field,
                message: message.into(),
            })
        };
        if self.generators.is_empty() {
            return bad(
                "generators",
                "at least one generator configuration is required",
            );
        }
        if self.algorithms.is_empty() {
            return bad("algorithms", "at least one algorithm is required");
        }
        if self.instances == 0 {
            return bad("instances", "must be at least 1");
        }
        if self.bins_per_decade == 0 {
            return bad("bins_per_decade", "must be at least 1");
        }
        for g in &self.generators {
            g.validate()?;
        }
        Ok(())
    }
}

/// Outcome of one algorithm on one network instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkCell {
    pub instance: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub nmi: Option<f64>,
    pub communities: Option<usize>,
    pub singletons: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub instance: usize,
    pub seed: u64,
    pub nodes: usize,
    pub edges: usize,
    pub reference_communities: usize,
    pub mean_mixing_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub failures: usize,
    pub nmi_mean: Option<f64>,
    /// Sample standard deviation; zero for a single run.
    pub nmi_std: Option<f64>,
    pub mean_communities: Option<f64>,
    pub mean_singletons: Option<f64>,
}

/// Size-indexed curves pooled over all instances.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveSet {
    pub size_distribution: BinnedCurve,
    pub scaled_density: BinnedCurve,
    pub average_distance: BinnedCurve,
    pub hub_dominance: BinnedCurve,
    pub embeddedness: Vec<HistogramBin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmCurves {
    pub algorithm: Algorithm,
    pub curves: CurveSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigReport {
    pub generator: GeneratorConfig,
    pub instances: Vec<InstanceSummary>,
    pub cells: Vec<BenchmarkCell>,
    pub summaries: Vec<AlgorithmSummary>,
    pub reference_curves: CurveSet,
    pub algorithm_curves: Vec<AlgorithmCurves>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub configs: Vec<ConfigReport>,
}

/// Number of equal-width embeddedness histogram bins.
pub const EMBEDDEDNESS_BINS: usize = 20;

#[derive(Default)]
struct Pool {
    profiles: Vec<CommunityProfile>,
    embeddedness: Vec<f64>,
}

impl Pool {
    fn add(&mut self, g: &crate::graph::Graph, p: &Partition, mode: DistanceMode) {
        let profile = profile_partition_with(g, p, mode);
        self.embeddedness
            .extend(profile.embeddedness.iter().flatten());
        self.profiles.extend(profile.communities);
    }

    fn curves(&self, bins_per_decade: usize) -> CurveSet {
        curve_set(&self.profiles, &self.embeddedness, bins_per_decade)
    }
}

/// Curves over a set of community profiles; sizes include singletons.
pub fn curve_set(
    profiles: &[CommunityProfile],
    embeddedness: &[f64],
    bins_per_decade: usize,
) -> CurveSet {
    let sizes: Vec<usize> = profiles.iter().map(|c| c.size).collect();
    CurveSet {
        size_distribution: if sizes.is_empty() {
            BinnedCurve::default()
        } else {
            size_distribution(&sizes, bins_per_decade)
        },
        scaled_density: property_curve(profiles, Property::ScaledDensity, bins_per_decade),
        average_distance: property_curve(profiles, Property::AverageDistance, bins_per_decade),
        hub_dominance: property_curve(profiles, Property::HubDominance, bins_per_decade),
        embeddedness: unit_histogram(embeddedness.iter().copied(), EMBEDDEDNESS_BINS),
    }
}

fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    (Some(mean), Some(std))
}

/// Generates `instances` networks per generator configuration, instance `i`
/// using seed `seed + i`, runs every algorithm on each and scores the result
/// against the planted partition. Failures are recorded per cell.
pub fn run_benchmark(cfg: &BenchmarkConfig) -> Result<BenchmarkReport, EvaluationError> {
    run_benchmark_with(cfg, |_| {})
}

/// Like [`run_benchmark`], calling `on_cell` as each cell completes.
pub fn run_benchmark_with(
    cfg: &BenchmarkConfig,
    mut on_cell: impl FnMut(&BenchmarkCell),
) -> Result<BenchmarkReport, EvaluationError> {
    cfg.validate()?;
    let configs = cfg
        .generators
        .iter()
        .map(|generator| run_config(cfg, generator, &mut on_cell))
        .collect();
    Ok(BenchmarkReport { configs })
}

fn run_config(
    cfg: &BenchmarkConfig,
    generator: &GeneratorConfig,
    on_cell: &mut impl FnMut(&BenchmarkCell),
) -> ConfigReport {
    let mut instances = Vec::with_capacity(cfg.instances);
    let mut cells = Vec::new();
    let mut reference_pool = Pool::default();
    let mut pools: Vec<Pool> = cfg.algorithms.iter().map(|_| Pool::default()).collect();

    for instance in 0..cfg.instances {
        let seed = generator.seed.wrapping_add(instance as u64);
        let instance_cfg = GeneratorConfig {
            seed,
            ..generator.clone()
        };
        let network = match generate(&instance_cfg) {
            Ok(net) => net,
            Err(e) => {
                instances.push(InstanceSummary {
                    instance,
                    seed,
                    nodes: generator.n,
                    edges: 0,
                    reference_communities: 0,
                    mean_mixing_error: None,
                    error: Some(e.to_string()),
                });
                for &algorithm in &cfg.algorithms {
                    let cell = BenchmarkCell {
                        instance,
                        seed,
                        algorithm,
                        nmi: None,
                        communities: None,
                        singletons: None,
                        runtime_seconds: None,
                        error: Some(format!("generation failed: {e}")),
                    };
                    on_cell(&cell);
                    cells.push(cell);
                }
                continue;
            }
        };
        let g = &network.graph;
        instances.push(InstanceSummary {
            instance,
            seed,
            nodes: g.node_count(),
            edges: g.edge_count(),
            reference_communities: network.reference.community_count(),
            mean_mixing_error: Some(network.report.rewire.mean_abs_error),
            error: None,
        });
        reference_pool.add(g, &network.reference, cfg.distance_mode);

        for (k, &algorithm) in cfg.algorithms.iter().enumerate() {
            let params = DetectionParams {
                seed,
                ..cfg.detection.clone()
            };
            let start = Instant::now();
            let outcome = detect(g, algorithm, &params);
            let elapsed = start.elapsed().as_secs_f64();
            let cell = match outcome {
                Ok(found) => {
                    pools[k].add(g, &found, cfg.distance_mode);
                    let score = nmi(&network.reference, &found);
                    BenchmarkCell {
                        instance,
                        seed,
                        algorithm,
                        nmi: score.as_ref().ok().copied(),
                        communities: Some(found.community_count()),
                        singletons: Some(found.singleton_count()),
                        runtime_seconds: cfg.record_runtime.then_some(elapsed),
                        error: score.err().map(|e| e.to_string()),
                    }
                }
                Err(e) => BenchmarkCell {
                    instance,
                    seed,
                    algorithm,
                    nmi: None,
                    communities: None,
                    singletons: None,
                    runtime_seconds: cfg.record_runtime.then_some(elapsed),
                    error: Some(e.to_string()),
                },
            };
            on_cell(&cell);
            cells.push(cell);
        }
    }

    let summaries = cfg
        .algorithms
        .iter()
        .map(|&algorithm| summarize(algorithm, &cells))
        .collect();
    let algorithm_curves = cfg
        .algorithms
        .iter()
        .zip(&pools)
        .map(|(&algorithm, pool)| AlgorithmCurves {
            algorithm,
            curves: pool.curves(cfg.bins_per_decade),
        })
        .collect();
    ConfigReport {
        generator: generator.clone(),
        instances,
        cells,
        summaries,
        reference_curves: reference_pool.curves(cfg.bins_per_decade),
        algorithm_curves,
    }
}

/// Aggregates the cells of one algorithm.
pub fn summarize(algorithm: Algorithm, cells: &[BenchmarkCell]) -> AlgorithmSummary {
    let mine: Vec<&BenchmarkCell> = cells.iter().filter(|c| c.algorithm == algorithm).collect();
    let scores: Vec<f64> = mine.iter().filter_map(|c| c.nmi).collect();
    let communities: Vec<f64> = mine
        .iter()
        .filter_map(|c| c.communities.map(|x| x as f64))
        .collect();
    let singletons: Vec<f64> = mine
        .iter()
        .filter_map(|c| c.singletons.map(|x| x as f64))
        .collect();
    let (nmi_mean, nmi_std) = mean_std(&scores);
    AlgorithmSummary {
        algorithm,
        runs: mine.len(),
        failures: mine.len() - scores.len(),
        nmi_mean,
        nmi_std,
        mean_communities: mean_std(&communities).0,
        mean_singletons: mean_std(&singletons).0,
    }
}
