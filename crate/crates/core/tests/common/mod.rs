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

#![allow(dead_code)]

use commbench_core::{build_graph, Graph, Partition};
use rand::Rng;

/// Dense adjacency plus an edge list, kept side by side so oracles never
/// touch the `Graph` adjacency structure.
pub struct Fixture {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
    pub edges: Vec<(usize, usize)>,
    pub labels: Vec<usize>,
}

impl Fixture {
    pub fn graph(&self) -> Graph {
        build_graph(self.n, &self.edges).unwrap()
    }

    pub fn partition(&self) -> Partition {
        Partition::from_labels(&self.labels)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].iter().filter(|&&b| b).count()
    }
}

pub fn random_fixture<R: Rng>(rng: &mut R, max_n: usize) -> Fixture {
    let n = rng.gen_range(2..=max_n);
    let p = rng.gen_range(0.05..0.7);
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                adj[u][v] = true;
                adj[v][u] = true;
                edges.push((u, v));
            }
        }
    }
    let blocks = rng.gen_range(1..=n);
    let labels = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    Fixture {
        n,
        adj,
        edges,
        labels,
    }
}

pub fn fixture_from_edges(n: usize, edges: &[(usize, usize)]) -> Fixture {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    Fixture {
        n,
        adj,
        edges: edges.to_vec(),
        labels: vec![0; n],
    }
}

pub fn clique(nodes: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for u in nodes.clone() {
        for v in (u + 1)..nodes.end {
            e.push((u, v));
        }
    }
    e
}

/// Two triangles joined by the edge 2-3.
pub fn two_triangles() -> Vec<(usize, usize)> {
    vec![(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
}

/// Two K5 joined by the edge 4-5.
pub fn two_k5() -> Vec<(usize, usize)> {
    let mut e = clique(0..5);
    e.extend(clique(5..10));
    e.push((4, 5));
    e
}

/// Four triangles in a ring, each attached to the next by one edge.
pub fn triangle_ring() -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for t in 0..4 {
        let b = 3 * t;
        e.extend([(b, b + 1), (b, b + 2), (b + 1, b + 2)]);
        let next = 3 * ((t + 1) % 4);
        e.push((b + 2, next).min((next, b + 2)));
    }
    e
}

/// Calls `f` with every set partition of `0..n` as a restricted growth string.
pub fn for_each_set_partition(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(labels: &mut Vec<usize>, n: usize, max: usize, f: &mut dyn FnMut(&[usize])) {
        if labels.len() == n {
            f(labels);
            return;
        }
        for l in 0..=max + 1 {
            if labels.is_empty() && l > 0 {
                break;
            }
            labels.push(l);
            let next = if labels.len() == 1 { 0 } else { max.max(l) };
            rec(labels, n, next, f);
            labels.pop();
        }
    }
    if n == 0 {
        return;
    }
    let mut labels = Vec::with_capacity(n);
    rec(&mut labels, n, 0, &mut f);
}

/// Newman modularity from the dense pairwise sum.
pub fn brute_modularity(fx: &Fixture, labels: &[usize]) -> f64 {
    let two_m = (2 * fx.edges.len()) as f64;
    let mut q = 0.0;
    for i in 0..fx.n {
        for j in 0..fx.n {
            if labels[i] == labels[j] {
                let a = if fx.adj[i][j] { 1.0 } else { 0.0 };
                q += a - (fx.degree(i) * fx.degree(j)) as f64 / two_m;
            }
        }
    }
    q / two_m
}

pub fn same_grouping(a: &[usize], b: &[usize]) -> bool {
    Partition::from_labels(a) == Partition::from_labels(b)
}
