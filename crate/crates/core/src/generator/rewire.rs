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

//! Degree-preserving rewiring toward per-node mixing targets.
//!
//! The graph is edited with double-edge swaps `(a, b), (c, d) -> (a, c), (b, d)`,
//! which leave every degree unchanged. Two targeted swap shapes are used:
//!
//! * a node short of internal links trades one of its external edges, together
//!   with an external edge of a community-mate, for a direct link to that mate;
//! * a node with too many internal links trades one of them, together with an
//!   internal edge of another community, for two inter-community edges.
//!
//! A swap is kept only if it lowers `Σ_u |k_int(u) - t(u)| / k(u)`, the
//! summed distance between realized and target mixing.

use rand::Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::assign::target_internal_degree;
use crate::graph::{build_graph, Graph, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewireConfig {
    pub tolerance: f64,
    pub max_sweeps: usize,
}

impl Default for RewireConfig {
    fn default() -> Self {
        RewireConfig {
            tolerance: 0.05,
            max_sweeps: 50,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RewireReport {
    pub swaps: usize,
    pub sweeps: usize,
    /// Mean over nodes of `|mu_realized - mu_target|`.
    pub mean_abs_error: f64,
    pub converged: bool,
    /// Nodes whose target internal degree exceeded their community size - 1.
    pub clamped_nodes: usize,
}

/// Set of nodes supporting O(1) insert, remove and uniform sampling.
#[derive(Debug, Clone, Default)]
struct NodeBag {
    items: Vec<usize>,
}

impl NodeBag {
    fn insert(&mut self, u: usize, pos: &mut [usize]) {
        pos[u] = self.items.len();
        self.items.push(u);
    }

    fn remove(&mut self, u: usize, pos: &mut [usize]) {
        let i = pos[u];
        self.items.swap_remove(i);
        if i < self.items.len() {
            pos[self.items[i]] = i;
        }
        pos[u] = usize::MAX;
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        (!self.items.is_empty()).then(|| self.items[rng.gen_range(0..self.items.len())])
    }
}

fn edge_key(u: usize, v: usize) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

struct Rewirer<'a> {
    comm: &'a [usize],
    members: &'a [Vec<usize>],
    adj: Vec<Vec<usize>>,
    edges: FxHashSet<u64>,
    kint: Vec<i64>,
    target: Vec<i64>,
    weight: Vec<f64>,
    /// Per community: members below their internal-degree target.
    short: Vec<NodeBag>,
    /// All nodes above their internal-degree target.
    over: NodeBag,
    short_pos: Vec<usize>,
    over_pos: Vec<usize>,
    swaps: usize,
}

impl<'a> Rewirer<'a> {
    fn deviation(&self, u: usize) -> i64 {
        self.kint[u] - self.target[u]
    }

    fn cost_with(&self, u: usize, kint: i64) -> f64 {
        (kint - self.target[u]).abs() as f64 * self.weight[u]
    }

    fn refresh_bags(&mut self, u: usize) {
        let dev = self.deviation(u);
        let in_short = self.short_pos[u] != usize::MAX;
        let in_over = self.over_pos[u] != usize::MAX;
        let c = self.comm[u];
        if dev < 0 && !in_short {
            self.short[c].insert(u, &mut self.short_pos);
        } else if dev >= 0 && in_short {
            self.short[c].remove(u, &mut self.short_pos);
        }
        if dev > 0 && !in_over {
            self.over.insert(u, &mut self.over_pos);
        } else if dev <= 0 && in_over {
            self.over.remove(u, &mut self.over_pos);
        }
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&edge_key(u, v))
    }

    /// Random neighbor of `u` whose community relation to `u` matches
    /// `internal`, preferring nodes for which `prefer` holds.
    fn pick_neighbor<R: Rng + ?Sized>(
        &self,
        u: usize,
        internal: bool,
        prefer: impl Fn(usize) -> bool,
        rng: &mut R,
    ) -> Option<usize> {
        let list = &self.adj[u];
        if list.is_empty() {
            return None;
        }
        let start = rng.gen_range(0..list.len());
        let mut fallback = None;
        for i in 0..list.len() {
            let v = list[(start + i) % list.len()];
            if (self.comm[v] == self.comm[u]) != internal {
                continue;
            }
            if prefer(v) {
                return Some(v);
            }
            fallback.get_or_insert(v);
        }
        fallback
    }

    fn unlink(&mut self, u: usize, v: usize) {
        self.edges.remove(&edge_key(u, v));
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a];
            let i = list.iter().position(|&x| x == b).expect("edge present");
            list.swap_remove(i);
        }
        if self.comm[u] == self.comm[v] {
            self.kint[u] -= 1;
            self.kint[v] -= 1;
        }
    }

    fn link(&mut self, u: usize, v: usize) {
        self.edges.insert(edge_key(u, v));
        self.adj[u].push(v);
        self.adj[v].push(u);
        if self.comm[u] == self.comm[v] {
            self.kint[u] += 1;
            self.kint[v] += 1;
        }
    }

    /// Replaces `(a, b), (c, d)` with `(a, c), (b, d)` if that lowers the cost.
    fn try_swap(&mut self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let nodes = [a, b, c, d];
        let mut distinct = nodes;
        distinct.sort_unstable();
        if distinct.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        if self.adjacent(a, c) || self.adjacent(b, d) {
            return false;
        }
        let same = |x: usize, y: usize| i64::from(self.comm[x] == self.comm[y]);
        let mut delta_kint = [0i64; 4];
        for (i, &x) in nodes.iter().enumerate() {
            // Old partner and new partner of each endpoint.
            let (old, new) = match i {
                0 => (b, c),
                1 => (a, d),
                2 => (d, a),
                _ => (c, b),
            };
            delta_kint[i] = same(x, new) - same(x, old);
        }
        let delta: f64 = nodes
            .iter()
            .zip(delta_kint)
            .map(|(&x, dk)| self.cost_with(x, self.kint[x] + dk) - self.cost_with(x, self.kint[x]))
            .sum();
        if delta >= -1e-12 {
            return false;
        }
        self.unlink(a, b);
        self.unlink(c, d);
        self.link(a, c);
        self.link(b, d);
        for x in nodes {
            self.refresh_bags(x);
        }
        self.swaps += 1;
        true
    }

    /// `u` needs one more internal link.
    fn raise<R: Rng + ?Sized>(&mut self, u: usize, rng: &mut R) -> bool {
        let c = self.comm[u];
        let mate = (0..4)
            .filter_map(|_| self.short[c].sample(rng))
            .find(|&v| v != u && !self.adjacent(u, v))
            .or_else(|| {
                let members = &self.members[c];
                (0..4)
                    .map(|_| members[rng.gen_range(0..members.len())])
                    .find(|&v| v != u && !self.adjacent(u, v))
            });
        let Some(v) = mate else { return false };
        let Some(x) = self.pick_neighbor(u, false, |_| true, rng) else {
            return false;
        };
        // Prefer a partner for x in x's own community, which helps x too.
        let cx = self.comm[x];
        let Some(y) = self.pick_neighbor(v, false, |y| self.comm[y] == cx, rng) else {
            return false;
        };
        // (u, x), (v, y) -> (u, v), (x, y)
        self.try_swap(u, x, v, y)
    }

    /// `u` has one internal link too many.
    fn lower<R: Rng + ?Sized>(&mut self, u: usize, rng: &mut R) -> bool {
        let Some(v) = self.pick_neighbor(u, true, |v| self.kint[v] > self.target[v], rng) else {
            return false;
        };
        let c = self.comm[u];
        let n = self.comm.len();
        let other = (0..4)
            .filter_map(|_| self.over.sample(rng))
            .find(|&x| self.comm[x] != c && !self.adjacent(u, x))
            .or_else(|| {
                (0..4)
                    .map(|_| rng.gen_range(0..n))
                    .find(|&x| self.comm[x] != c && !self.adjacent(u, x))
            });
        let Some(x) = other else { return false };
        let Some(y) = self.pick_neighbor(x, true, |y| self.kint[y] > self.target[y], rng) else {
            return false;
        };
        // (u, v), (x, y) -> (u, x), (v, y)
        self.try_swap(u, v, x, y)
    }
}

/// Mean of `|k_ext(u)/k(u) - mu(u)|` over nodes with nonzero degree.
pub fn mean_mixing_error(g: &Graph, p: &Partition, mu: &[f64]) -> f64 {
    let realized = realized_mixing(g, p);
    let (sum, count) = (0..g.node_count())
        .filter(|&u| g.degree(u) > 0)
        .fold((0.0, 0usize), |(s, c), u| {
            (s + (realized[u] - mu[u]).abs(), c + 1)
        });
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Realized mixing `k_ext/k` per node; 0 for isolated nodes.
pub fn realized_mixing(g: &Graph, p: &Partition) -> Vec<f64> {
    (0..g.node_count())
        .map(|u| {
            let k = g.degree(u);
            if k == 0 {
                return 0.0;
            }
            let kint = crate::graph::internal_degree(g, p, u);
            (k - kint) as f64 / k as f64
        })
        .collect()
}

pub fn rewire_to_mixing<R: Rng + ?Sized>(
    g: &Graph,
    p: &Partition,
    mu: &[f64],
    cfg: &RewireConfig,
    rng: &mut R,
) -> (Graph, RewireReport) {
    let n = g.node_count();
    let comm = p.membership();
    let mut clamped_nodes = 0;
    let target: Vec<i64> = (0..n)
        .map(|u| {
            let want = target_internal_degree(g.degree(u), mu[u]);
            let cap = p.members(comm[u]).len() - 1;
            if want > cap {
                clamped_nodes += 1;
            }
            want.min(cap) as i64
        })
        .collect();
    let kint: Vec<i64> = (0..n)
        .map(|u| crate::graph::internal_degree(g, p, u) as i64)
        .collect();
    let mut state = Rewirer {
        comm,
        members: p.communities(),
        adj: (0..n).map(|u| g.neighbors(u).to_vec()).collect(),
        edges: g.edges().map(|(u, v)| edge_key(u, v)).collect(),
        kint,
        target,
        weight: (0..n).map(|u| 1.0 / g.degree(u).max(1) as f64).collect(),
        short: vec![NodeBag::default(); p.community_count()],
        over: NodeBag::default(),
        short_pos: vec![usize::MAX; n],
        over_pos: vec![usize::MAX; n],
        swaps: 0,
    };
    for u in 0..n {
        state.refresh_bags(u);
    }

    let mut sweeps = 0;
    while sweeps < cfg.max_sweeps {
        let mut pending: Vec<usize> = (0..n).filter(|&u| state.deviation(u) != 0).collect();
        if pending.is_empty() {
            break;
        }
        sweeps += 1;
        // Worst offenders first.
        pending.sort_by(|&a, &b| {
            let ca = state.cost_with(a, state.kint[a]);
            let cb = state.cost_with(b, state.kint[b]);
            cb.total_cmp(&ca).then(a.cmp(&b))
        });
        let before = state.swaps;
        for u in pending {
            let mut failures = 0;
            while failures < 8 {
                let dev = state.deviation(u);
                let moved = match dev.signum() {
                    -1 => state.raise(u, rng),
                    1 => state.lower(u, rng),
                    _ => break,
                };
                if !moved {
                    failures += 1;
                }
            }
        }
        if state.swaps == before {
            break;
        }
    }

    let mut edges: Vec<(usize, usize)> = state
        .adj
        .iter()
        .enumerate()
        .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
        .collect();
    edges.sort_unstable();
    let rewired = build_graph(n, &edges).expect("swaps keep the graph simple");
    let mean_abs_error = mean_mixing_error(&rewired, p, mu);
    let report = RewireReport {
        swaps: state.swaps,
        sweeps,
        mean_abs_error,
        converged: mean_abs_error <= cfg.tolerance,
        clamped_nodes,
    };
    (rewired, report)
}
