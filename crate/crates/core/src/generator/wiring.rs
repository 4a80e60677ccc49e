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

use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::GeneratorError;
use crate::graph::{build_graph, Graph};

/// Random swap attempts spent on each self-loop or multi-edge.
const REPAIR_ATTEMPTS: usize = 200;
/// Fresh stub matchings tried while some defect stays unrepaired.
const MATCHING_ATTEMPTS: usize = 20;

/// How far a wired graph ended up from the requested degree sequence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WiringReport {
    pub requested_degree_sum: usize,
    pub realized_degree_sum: usize,
    /// Defective stub pairs fixed by a double-edge swap.
    pub repaired_pairs: usize,
    /// Defective stub pairs that could not be fixed and were discarded.
    pub dropped_pairs: usize,
    /// `(node, requested, realized)` for every node that lost degree.
    pub degree_deficits: Vec<(usize, usize, usize)>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Erdős–Gallai test.
pub fn is_graphical(degrees: &[usize]) -> bool {
    let n = degrees.len();
    if degrees.iter().sum::<usize>() % 2 == 1 || degrees.iter().any(|&d| d >= n) {
        return false;
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut suffix = vec![0u64; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + sorted[i] as u64;
    }
    let mut prefix = 0u64;
    for k in 1..=n {
        prefix += sorted[k - 1] as u64;
        // Entries past k that are still >= k contribute k each.
        let big_end = sorted.partition_point(|&d| d >= k).max(k);
        let tail = (k * (big_end - k)) as u64 + suffix[big_end];
        if prefix > (k * (k - 1)) as u64 + tail {
            return false;
        }
    }
    true
}

/// Edge set with O(1) membership, insertion, removal and uniform sampling.
struct EdgePool {
    edges: Vec<(usize, usize)>,
    index: FxHashMap<(usize, usize), usize>,
}

impl EdgePool {
    fn contains(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&key(u, v))
    }

    fn insert(&mut self, u: usize, v: usize) {
        let k = key(u, v);
        self.index.insert(k, self.edges.len());
        self.edges.push(k);
    }

    fn remove(&mut self, u: usize, v: usize) {
        if let Some(i) = self.index.remove(&key(u, v)) {
            self.edges.swap_remove(i);
            if i < self.edges.len() {
                self.index.insert(self.edges[i], i);
            }
        }
    }
}

/// Configuration-model wiring: shuffle degree stubs, pair them up, then
/// repair self-loops and multi-edges by swapping them against random
/// existing edges. If some pair resists repair the matching is redrawn, up
/// to a fixed number of times; after that the best matching is kept and its
/// unrepaired pairs are dropped and reported.
pub fn wire_configuration_model<R: Rng + ?Sized>(
    degrees: &[usize],
    rng: &mut R,
) -> Result<(Graph, WiringReport), GeneratorError> {
    let requested: usize = degrees.iter().sum();
    if !is_graphical(degrees) {
        return Err(GeneratorError::NotGraphical {
            degree_sum: requested,
            nodes: degrees.len(),
        });
    }
    let mut best = match_stubs(degrees, rng);
    for _ in 1..MATCHING_ATTEMPTS {
        if best.1.dropped_pairs == 0 {
            break;
        }
        let next = match_stubs(degrees, rng);
        if next.1.dropped_pairs < best.1.dropped_pairs {
            best = next;
        }
    }
    Ok(best)
}

fn match_stubs<R: Rng + ?Sized>(degrees: &[usize], rng: &mut R) -> (Graph, WiringReport) {
    let n = degrees.len();
    let requested: usize = degrees.iter().sum();
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(u, &d)| std::iter::repeat_n(u, d))
        .collect();
    stubs.shuffle(rng);

    let mut pool = EdgePool {
        edges: Vec::with_capacity(requested / 2),
        index: FxHashMap::default(),
    };
    let mut defects = Vec::new();
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v || pool.contains(u, v) {
            defects.push((u, v));
        } else {
            pool.insert(u, v);
        }
    }

    let mut report = WiringReport {
        requested_degree_sum: requested,
        ..WiringReport::default()
    };
    for (a, b) in defects {
        if a != b && !pool.contains(a, b) {
            pool.insert(a, b);
            report.repaired_pairs += 1;
            continue;
        }
        let mut fixed = false;
        for _ in 0..REPAIR_ATTEMPTS {
            if pool.edges.is_empty() {
                break;
            }
            let (mut c, mut d) = pool.edges[rng.gen_range(0..pool.edges.len())];
            if rng.gen::<bool>() {
                std::mem::swap(&mut c, &mut d);
            }
            // (a, b) + (c, d) -> (a, c) + (b, d)
            if a == c
                || b == d
                || pool.contains(a, c)
                || pool.contains(b, d)
                || key(a, c) == key(b, d)
            {
                continue;
            }
            pool.remove(c, d);
            pool.insert(a, c);
            pool.insert(b, d);
            fixed = true;
            break;
        }
        if fixed {
            report.repaired_pairs += 1;
        } else {
            report.dropped_pairs += 1;
        }
    }

    let mut edges = pool.edges;
    edges.sort_unstable();
    let graph = build_graph(n, &edges).expect("pool holds a simple edge set");
    report.realized_degree_sum = 2 * graph.edge_count();
    report.degree_deficits = degrees
        .iter()
        .enumerate()
        .filter(|&(u, &d)| graph.degree(u) != d)
        .map(|(u, &d)| (u, d, graph.degree(u)))
        .collect();
    (graph, report)
}

/// Attachment parameter used for a requested mean degree.
pub fn attachment_edges(mean_degree: f64) -> usize {
    ((mean_degree / 2.0).round() as usize).max(1)
}

/// Size of the seed clique for attachment parameter `m`.
pub fn seed_clique_size(m: usize) -> usize {
    m + 1
}

/// Barabási–Albert growth from a clique of `m + 1` nodes; each new node
/// attaches `m` edges to distinct existing nodes chosen proportionally to
/// degree.
pub fn wire_preferential_attachment<R: Rng + ?Sized>(
    n: usize,
    mean_degree: f64,
    rng: &mut R,
) -> Result<Graph, GeneratorError> {
    let m = attachment_edges(mean_degree);
    let m0 = seed_clique_size(m);
    if n <= m0 {
        return Err(GeneratorError::InvalidConfig {
            field: "n",
            message: format!("preferential attachment needs more than {m0} nodes, got {n}"),
        });
    }
    let mut edges = Vec::with_capacity(m0 * (m0 - 1) / 2 + m * (n - m0));
    // Every edge endpoint, so a uniform pick is a degree-proportional pick.
    let mut endpoints = Vec::with_capacity(2 * edges.capacity());
    for u in 0..m0 {
        for v in (u + 1)..m0 {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut chosen = FxHashSet::default();
    let mut targets = Vec::with_capacity(m);
    for v in m0..n {
        chosen.clear();
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if chosen.insert(t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Ok(build_graph(n, &edges).expect("attachment targets are distinct earlier nodes"))
}
