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

//! Community detection: Louvain, Fast Greedy, MarkovCluster, InfoMap and
//! Walktrap, together with the modularity and map-equation objectives.
//!
//! Every algorithm is deterministic. Nodes are swept by ascending id and
//! ties go to the lowest node or community id. Disconnected graphs are
//! split into components which are processed independently.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{connected_components, Graph, Partition};

mod fast_greedy;
mod infomap;
mod louvain;
mod mcl;
mod modularity;
mod walktrap;
mod weighted;

pub use fast_greedy::{fast_greedy, fast_greedy_connected};
pub use infomap::{infomap, infomap_with_trials, map_equation, InfomapResult};
pub use louvain::{louvain, LouvainResult};
pub use mcl::{markov_cluster, FlowMatrix, MclParams, MclResult};
pub use modularity::modularity;
pub use walktrap::{walk_distance, walktrap, walktrap_connected};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetectionError {
    #[error("graph has no edges")]
    Edgeless,
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("partition covers {partition} nodes but the graph has {graph}")]
    SizeMismatch { graph: usize, partition: usize },
    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },
    #[error(
        "markov cluster did not converge in {iterations} iterations (last change {residual:e})"
    )]
    NotConverged { iterations: usize, residual: f64 },
    #[error("unknown algorithm '{0}' (expected one of: louvain, fast-greedy, markov-cluster, infomap, walktrap)")]
    UnknownAlgorithm(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Louvain,
    FastGreedy,
    MarkovCluster,
    #[serde(rename = "infomap")]
    InfoMap,
    Walktrap,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Louvain,
        Algorithm::FastGreedy,
        Algorithm::MarkovCluster,
        Algorithm::InfoMap,
        Algorithm::Walktrap,
    ];

    /// Identifier used on the command line and in output files.
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Louvain => "louvain",
            Algorithm::FastGreedy => "fast-greedy",
            Algorithm::MarkovCluster => "markov-cluster",
            Algorithm::InfoMap => "infomap",
            Algorithm::Walktrap => "walktrap",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Algorithm::Louvain => "Louvain",
            Algorithm::FastGreedy => "Fast Greedy",
            Algorithm::MarkovCluster => "MarkovCluster",
            Algorithm::InfoMap => "InfoMap",
            Algorithm::Walktrap => "Walktrap",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = DetectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| DetectionError::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectionParams {
    pub walktrap_steps: usize,
    pub mcl: MclParams,
    /// InfoMap runs; runs after the first sweep nodes in a shuffled order.
    pub infomap_trials: usize,
    pub seed: u64,
}

impl Default for DetectionParams {
    fn default() -> Self {
        DetectionParams {
            walktrap_steps: 4,
            mcl: MclParams::default(),
            infomap_trials: 1,
            seed: 0,
        }
    }
}

pub fn detect(
    g: &Graph,
    algorithm: Algorithm,
    params: &DetectionParams,
) -> Result<Partition, DetectionError> {
    match algorithm {
        Algorithm::Louvain => Ok(louvain(g).partition),
        Algorithm::FastGreedy => Ok(fast_greedy(g).0),
        Algorithm::MarkovCluster => Ok(markov_cluster(g, &params.mcl)?.partition),
        Algorithm::InfoMap => {
            Ok(infomap_with_trials(g, params.seed, params.infomap_trials)?.partition)
        }
        Algorithm::Walktrap => Ok(walktrap(g, params.walktrap_steps)?.0),
    }
}

/// One merge of an agglomerative run. Leaves are ids `0..n`; the community
/// created by merge `k` gets id `n + k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    /// Modularity of the partition after this merge.
    pub objective: f64,
}

/// Merge sequence over one connected component, from singletons to a single
/// community.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeDendrogram {
    pub node_count: usize,
    /// Modularity of the all-singletons partition.
    pub initial_objective: f64,
    pub merges: Vec<Merge>,
    /// Number of merges applied in the chosen partition.
    pub cut: usize,
}

impl MergeDendrogram {
    /// Partition after the first `steps` merges.
    pub fn partition_at(&self, steps: usize) -> Partition {
        let n = self.node_count;
        let mut parent: Vec<usize> = (0..n + steps).collect();
        for (k, m) in self.merges[..steps].iter().enumerate() {
            parent[m.a] = n + k;
            parent[m.b] = n + k;
        }
        let labels: Vec<usize> = (0..n)
            .map(|u| {
                let mut r = u;
                while parent[r] != r {
                    r = parent[r];
                }
                r
            })
            .collect();
        Partition::from_labels(&labels)
    }

    pub fn best_partition(&self) -> Partition {
        self.partition_at(self.cut)
    }

    /// Objective after each number of merges, starting from zero merges.
    pub fn objective_curve(&self) -> Vec<f64> {
        std::iter::once(self.initial_objective)
            .chain(self.merges.iter().map(|m| m.objective))
            .collect()
    }
}

/// Dendrogram of one component; `nodes[i]` is the graph node behind leaf `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDendrogram {
    pub nodes: Vec<usize>,
    pub dendrogram: MergeDendrogram,
}

/// Index of the first maximum.
pub(crate) fn first_argmax<T: PartialOrd + Copy>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Splits `g` into connected components, runs `f` on each and unions the
/// results. `f` returns one label per node of the component.
pub(crate) fn per_component<T, E>(
    g: &Graph,
    mut f: impl FnMut(&Graph, &[usize]) -> Result<(Vec<usize>, T), E>,
) -> Result<(Partition, Vec<T>), E> {
    let components = connected_components(g);
    if components.community_count() <= 1 {
        let nodes: Vec<usize> = (0..g.node_count()).collect();
        let (labels, extra) = f(g, &nodes)?;
        return Ok((Partition::from_labels(&labels), vec![extra]));
    }
    let mut labels = vec![0; g.node_count()];
    let mut offset = 0;
    let mut extras = Vec::with_capacity(components.community_count());
    for nodes in components.communities() {
        let sub = g.induced_subgraph(nodes);
        let (local, extra) = f(&sub, nodes)?;
        let width = local.iter().max().map_or(0, |m| m + 1);
        for (i, &u) in nodes.iter().enumerate() {
            labels[u] = offset + local[i];
        }
        offset += width;
        extras.push(extra);
    }
    Ok((Partition::from_labels(&labels), extras))
}
