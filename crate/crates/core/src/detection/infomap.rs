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
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::weighted::{compact_labels, WeightedGraph};
use super::{per_component, DetectionError};
use crate::graph::{connected_components, Graph, Partition};

/// Outer refinement stops once a round gains less than this many bits.
const OUTER_TOLERANCE: f64 = 1e-10;
/// Smallest codelength decrease for a single move.
const MOVE_TOLERANCE: f64 = 1e-12;

fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Two-level description length in bits of a random walk on `g` when nodes
/// are grouped by `p`. Visit rates are proportional to degree and module
/// exit rates to the edges leaving the module.
pub fn map_equation(g: &Graph, p: &Partition) -> Result<f64, DetectionError> {
    if p.node_count() != g.node_count() {
        return Err(DetectionError::SizeMismatch {
            graph: g.node_count(),
            partition: p.node_count(),
        });
    }
    if g.edge_count() == 0 {
        return Err(DetectionError::Edgeless);
    }
    let components = connected_components(g).community_count();
    if components > 1 {
        return Err(DetectionError::Disconnected { components });
    }
    Ok(codelength(&WeightedGraph::from_graph(g), p.membership()))
}

fn codelength(w: &WeightedGraph, labels: &[usize]) -> f64 {
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut flow = vec![0u64; count];
    let mut exit = vec![0u64; count];
    for u in 0..w.node_count() {
        flow[labels[u]] += w.strength[u];
        for &(v, wt) in &w.adj[u] {
            if labels[v] != labels[u] {
                exit[labels[u]] += wt;
            }
        }
    }
    let total = w.total as f64;
    let node_entropy: f64 = w.strength.iter().map(|&s| plogp(s as f64 / total)).sum();
    let exit_sum: u64 = exit.iter().sum();
    let module_terms: f64 = (0..count)
        .map(|c| module_term(exit[c] as f64, flow[c] as f64, total))
        .sum();
    plogp(exit_sum as f64 / total) + module_terms - node_entropy
}

/// Contribution of one module with exit weight `e` and flow weight `f`.
fn module_term(e: f64, f: f64, total: f64) -> f64 {
    -2.0 * plogp(e / total) + plogp((e + f) / total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfomapResult {
    pub partition: Partition,
    /// Codelength in bits of each connected component, zero for isolated
    /// nodes.
    pub codelengths: Vec<f64>,
}

pub fn infomap(g: &Graph, seed: u64) -> Result<InfomapResult, DetectionError> {
    infomap_with_trials(g, seed, 1)
}

/// Greedy map-equation minimization with node moves and aggregation,
/// refined in outer rounds from the node level until a round gains less
/// than `1e-10` bits. The first trial sweeps nodes by id; further trials
/// use orders shuffled from `seed`. The best trial is kept.
pub fn infomap_with_trials(
    g: &Graph,
    seed: u64,
    trials: usize,
) -> Result<InfomapResult, DetectionError> {
    if trials == 0 {
        return Err(DetectionError::InvalidParameter {
            name: "infomap_trials",
            message: "at least one trial is required".into(),
        });
    }
    let (partition, codelengths) = per_component(g, |sub, nodes| {
        Ok::<_, DetectionError>(infomap_connected(sub, seed ^ nodes[0] as u64, trials))
    })?;
    Ok(InfomapResult {
        partition,
        codelengths,
    })
}

fn infomap_connected(g: &Graph, seed: u64, trials: usize) -> (Vec<usize>, f64) {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return (vec![0; n], 0.0);
    }
    let w = WeightedGraph::from_graph(g);
    let single = vec![0; n];
    let mut best = (single.clone(), codelength(&w, &single));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let mut order: Vec<usize> = (0..n).collect();
        if trial > 0 {
            order.shuffle(&mut rng);
        }
        let mut labels: Vec<usize> = (0..n).collect();
        let mut length = codelength(&w, &labels);
        loop {
            let next = optimize(&w, &labels, &order);
            let next_length = codelength(&w, &next);
            let improved = length - next_length;
            if improved > 0.0 {
                labels = next;
                length = next_length;
            }
            if improved < OUTER_TOLERANCE {
                break;
            }
        }
        if length < best.1 {
            best = (labels, length);
        }
    }
    let (labels, _) = compact_labels(&best.0);
    (labels, best.1)
}

/// One round of moves and aggregation. Node-level moves start from `start`;
/// higher levels start from singletons.
fn optimize(w: &WeightedGraph, start: &[usize], order: &[usize]) -> Vec<usize> {
    let (init, _) = compact_labels(start);
    let (_, comm) = move_nodes(w, &init, order);
    let (mut labels, count) = compact_labels(&comm);
    let mut level = w.aggregate(&labels, count);
    loop {
        let identity: Vec<usize> = (0..level.node_count()).collect();
        let (moved, comm) = move_nodes(&level, &identity, &identity);
        if !moved {
            break;
        }
        let (comm, count) = compact_labels(&comm);
        for l in labels.iter_mut() {
            *l = comm[*l];
        }
        level = level.aggregate(&comm, count);
    }
    labels
}

struct Modules {
    flow: Vec<f64>,
    exit: Vec<f64>,
    members: Vec<usize>,
    exit_sum: f64,
    empty: Vec<usize>,
}

fn move_nodes(w: &WeightedGraph, init: &[usize], order: &[usize]) -> (bool, Vec<usize>) {
    let n = w.node_count();
    let total = w.total as f64;
    let mut comm = init.to_vec();
    let mut m = Modules {
        flow: vec![0.0; n],
        exit: vec![0.0; n],
        members: vec![0; n],
        exit_sum: 0.0,
        empty: Vec::new(),
    };
    for u in 0..n {
        let c = comm[u];
        m.flow[c] += w.strength[u] as f64;
        m.members[c] += 1;
        for &(v, wt) in &w.adj[u] {
            if comm[v] != c {
                m.exit[c] += wt as f64;
            }
        }
    }
    m.exit_sum = m.exit.iter().sum();
    m.empty = (0..n).rev().filter(|&c| m.members[c] == 0).collect();

    let out: Vec<f64> = (0..n)
        .map(|u| (w.strength[u] - 2 * w.loops[u]) as f64)
        .collect();
    let mut link = vec![0.0f64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;
    loop {
        let mut moved = false;
        for &u in order {
            let a = comm[u];
            for &(v, wt) in &w.adj[u] {
                let c = comm[v];
                if link[c] == 0.0 {
                    touched.push(c);
                }
                link[c] += wt as f64;
            }
            let s = w.strength[u] as f64;
            let exit_a = m.exit[a] - out[u] + 2.0 * link[a];
            let flow_a = m.flow[a] - s;
            let base_a = module_term(m.exit[a], m.flow[a], total);
            let left_a = module_term(exit_a, flow_a, total);
            let sum_without = m.exit_sum - m.exit[a] + exit_a;

            let delta = |b: usize, link_b: f64, m: &Modules| {
                let exit_b = m.exit[b] + out[u] - 2.0 * link_b;
                let sum = sum_without - m.exit[b] + exit_b;
                plogp(sum / total) - plogp(m.exit_sum / total) + left_a - base_a
                    + module_term(exit_b, m.flow[b] + s, total)
                    - module_term(m.exit[b], m.flow[b], total)
            };

            let mut best: Option<(f64, usize)> = None;
            let mut consider = |d: f64, b: usize| {
                if best.is_none_or(|(bd, bb)| d < bd || (d == bd && b < bb)) {
                    best = Some((d, b));
                }
            };
            for &b in &touched {
                if b != a {
                    consider(delta(b, link[b], &m), b);
                }
            }
            if m.members[a] > 1 {
                if let Some(&e) = m.empty.last() {
                    consider(delta(e, 0.0, &m), e);
                }
            }

            if let Some((_, b)) = best.filter(|&(d, _)| d < -MOVE_TOLERANCE) {
                let exit_b = m.exit[b] + out[u] - 2.0 * link[b];
                m.exit_sum = sum_without - m.exit[b] + exit_b;
                m.exit[a] = exit_a;
                m.flow[a] = flow_a;
                m.members[a] -= 1;
                m.exit[b] = exit_b;
                m.flow[b] += s;
                if m.members[b] == 0 {
                    m.empty.pop();
                }
                m.members[b] += 1;
                if m.members[a] == 0 {
                    m.empty.push(a);
                }
                comm[u] = b;
                moved = true;
            }
            for &c in &touched {
                link[c] = 0.0;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    (moved_any, comm)
}
