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

//! LFR-style benchmark generation with a per-node mixing distribution.
//!
//! The pipeline wires a graph with the requested degree distribution
//! (configuration model, or preferential attachment), draws power-law
//! community sizes, places each node in a community large enough for its
//! target internal degree, and finally rewires edges, degree-preservingly,
//! until each node's share of external links approaches its own mixing
//! coefficient.

mod assign;
mod rewire;
mod wiring;

pub use assign::{
    assign_communities, assign_with_requirements, required_internal_degrees, target_internal_degree,
};
pub use rewire::{
    mean_mixing_error, realized_mixing, rewire_to_mixing, RewireConfig, RewireReport,
};
pub use wiring::{
    attachment_edges, is_graphical, seed_clique_size, wire_configuration_model,
    wire_preferential_attachment, WiringReport,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Partition};
use crate::sampling::{
    make_sum_even, sample_community_sizes, sample_mixing, sample_power_law, solve_k_min,
    MixingSpec, PowerLawSpec, SamplingError,
};

/// Full restarts (fresh sizes, fresh sub-seeds) before giving up.
pub const MAX_RESTARTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("invalid configuration field `{field}`: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("degree sequence over {nodes} nodes with sum {degree_sum} is not graphical")]
    NotGraphical { degree_sum: usize, nodes: usize },
    #[error("community sizes sum to {sizes} but the graph has {nodes} nodes")]
    SizeMismatch { sizes: usize, nodes: usize },
    #[error("node {node} needs {internal_degree} internal links but no community with room is large enough")]
    InfeasibleAssignment { node: usize, internal_degree: usize },
    #[error("wiring left node {node} isolated")]
    IsolatedNode { node: usize },
    #[error("generation failed after {attempts} attempts: {last}")]
    RetriesExhausted {
        attempts: usize,
        last: Box<GeneratorError>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Wiring {
    ConfigurationModel,
    PreferentialAttachment,
}

fn default_n() -> usize {
    10_000
}
fn default_mean_degree() -> f64 {
    30.0
}
fn default_k_max() -> usize {
    1000
}
fn default_gamma() -> f64 {
    3.0
}
fn default_beta() -> f64 {
    2.0
}
fn default_mixing() -> MixingSpec {
    MixingSpec::Uniform {
        low: 0.0,
        high: 1.0,
    }
}
fn default_wiring() -> Wiring {
    Wiring::ConfigurationModel
}
fn default_tolerance() -> f64 {
    RewireConfig::default().tolerance
}
fn default_sweeps() -> usize {
    RewireConfig::default().max_sweeps
}

/// Generator parameters. Everything except the seed defaults to the
/// desk-scale setting: n = 10^4, <k> = 30, k_max = 1000, gamma = 3,
/// beta = 2, mu ~ U[0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_mean_degree")]
    pub mean_degree: f64,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_mixing")]
    pub mixing: MixingSpec,
    #[serde(default = "default_wiring")]
    pub wiring: Wiring,
    /// Community size bounds; `[k_min, k_max]` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_bounds: Option<(usize, usize)>,
    #[serde(default = "default_tolerance")]
    pub rewire_tolerance: f64,
    #[serde(default = "default_sweeps")]
    pub rewire_max_sweeps: usize,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn with_seed(seed: u64) -> Self {
        GeneratorConfig {
            n: default_n(),
            mean_degree: default_mean_degree(),
            k_max: default_k_max(),
            gamma: default_gamma(),
            beta: default_beta(),
            mixing: default_mixing(),
            wiring: default_wiring(),
            size_bounds: None,
            rewire_tolerance: default_tolerance(),
            rewire_max_sweeps: default_sweeps(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let bad = |field, message: String| Err(GeneratorError::InvalidConfig { field, message });
        if self.n < 10 {
            return bad("n", format!("need at least 10 nodes, got {}", self.n));
        }
        if !(self.mean_degree > 1.0) {
            return bad(
                "mean_degree",
                format!("must exceed 1, got {}", self.mean_degree),
            );
        }
        if !(self.mean_degree < self.k_max as f64) {
            return bad(
                "mean_degree",
                format!(
                    "must be below k_max = {}, got {}",
                    self.k_max, self.mean_degree
                ),
            );
        }
        if self.k_max >= self.n {
            return bad(
                "k_max",
                format!("must be below n = {}, got {}", self.n, self.k_max),
            );
        }
        if !(self.gamma > 1.0) {
            return bad("gamma", format!("must exceed 1, got {}", self.gamma));
        }
        if !(self.beta > 1.0) {
            return bad("beta", format!("must exceed 1, got {}", self.beta));
        }
        if let Some((lo, hi)) = self.size_bounds {
            if lo < 2 || lo > hi || hi > self.n {
                return bad(
                    "size_bounds",
                    format!("need 2 <= min <= max <= n, got [{lo}, {hi}]"),
                );
            }
        }
        if !(self.rewire_tolerance >= 0.0) {
            return bad(
                "rewire_tolerance",
                format!("must be nonnegative, got {}", self.rewire_tolerance),
            );
        }
        self.mixing
            .validate()
            .map_err(|e| GeneratorError::InvalidConfig {
                field: "mixing",
                message: e.to_string(),
            })
    }

    /// Degree lower cutoff: solved from the mean, floored at 2.
    pub fn k_min(&self) -> Result<usize, GeneratorError> {
        Ok(solve_k_min(self.mean_degree, self.gamma, self.k_max)?.max(2))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub k_min: usize,
    pub attempts: usize,
    pub wiring: WiringReport,
    /// Nodes whose target internal degree was cut to fit the largest community.
    pub clamped_nodes: usize,
    pub rewire: RewireReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedNetwork {
    pub graph: Graph,
    pub reference: Partition,
    pub mu_target: Vec<f64>,
    pub mu_realized: Vec<f64>,
    pub report: GenerationReport,
}

fn attempt(
    cfg: &GeneratorConfig,
    k_min: usize,
    seed: u64,
) -> Result<GeneratedNetwork, GeneratorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stage_rng = |rng: &mut ChaCha8Rng| ChaCha8Rng::seed_from_u64(rng.gen());
    let mut wiring_rng = stage_rng(&mut rng);
    let mut sizes_rng = stage_rng(&mut rng);
    let mut mixing_rng = stage_rng(&mut rng);
    let mut assign_rng = stage_rng(&mut rng);
    let mut rewire_rng = stage_rng(&mut rng);

    let (graph, wiring) = match cfg.wiring {
        Wiring::ConfigurationModel => {
            let spec = PowerLawSpec::new(cfg.gamma, k_min, cfg.k_max)?;
            let mut degrees = sample_power_law(cfg.n, spec, &mut wiring_rng)?;
            make_sum_even(&mut degrees, cfg.k_max);
            wire_configuration_model(&degrees, &mut wiring_rng)?
        }
        Wiring::PreferentialAttachment => {
            let g = wire_preferential_attachment(cfg.n, cfg.mean_degree, &mut wiring_rng)?;
            let report = WiringReport {
                requested_degree_sum: 2 * g.edge_count(),
                realized_degree_sum: 2 * g.edge_count(),
                ..WiringReport::default()
            };
            (g, report)
        }
    };
    if let Some(node) = (0..cfg.n).find(|&u| graph.degree(u) == 0) {
        return Err(GeneratorError::IsolatedNode { node });
    }

    let (lo, hi) = cfg.size_bounds.unwrap_or((k_min, cfg.k_max));
    let sizes =
        sample_community_sizes(cfg.n, PowerLawSpec::new(cfg.beta, lo, hi)?, &mut sizes_rng)?;
    let mu_target = sample_mixing(cfg.n, &cfg.mixing, &mut mixing_rng)?;

    let largest = sizes.iter().copied().max().unwrap_or(1);
    let mut required = required_internal_degrees(&graph, &mu_target);
    let mut clamped_nodes = 0;
    for r in required.iter_mut() {
        if *r > largest - 1 {
            *r = largest - 1;
            clamped_nodes += 1;
        }
    }
    let reference = assign_with_requirements(&required, &sizes, &mut assign_rng)?;

    let rewire_cfg = RewireConfig {
        tolerance: cfg.rewire_tolerance,
        max_sweeps: cfg.rewire_max_sweeps,
    };
    let (graph, rewire) =
        rewire_to_mixing(&graph, &reference, &mu_target, &rewire_cfg, &mut rewire_rng);
    let mu_realized = realized_mixing(&graph, &reference);
    Ok(GeneratedNetwork {
        graph,
        reference,
        mu_target,
        mu_realized,
        report: GenerationReport {
            k_min,
            attempts: 0,
            wiring,
            clamped_nodes,
            rewire,
        },
    })
}

/// Runs the whole pipeline. Deterministic in `cfg.seed`; infeasible draws
/// are retried up to [`MAX_RESTARTS`] times with fresh sub-seeds.
pub fn generate(cfg: &GeneratorConfig) -> Result<GeneratedNetwork, GeneratorError> {
    cfg.validate()?;
    let k_min = cfg.k_min()?;
    let mut seeds = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut last = None;
    for attempts in 1..=MAX_RESTARTS {
        match attempt(cfg, k_min, seeds.gen()) {
            Ok(mut net) => {
                net.report.attempts = attempts;
                return Ok(net);
            }
            Err(
                e @ (GeneratorError::InfeasibleAssignment { .. }
                | GeneratorError::IsolatedNode { .. }
                | GeneratorError::Sampling(SamplingError::SizesUnattainable { .. })),
            ) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(GeneratorError::RetriesExhausted {
        attempts: MAX_RESTARTS,
        last: Box::new(last.expect("at least one attempt ran")),
    })
}
