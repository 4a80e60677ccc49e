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

//! Simple undirected graphs over dense node ids, and partitions of their
//! node sets into mutually exclusive communities.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({u}, {v}) references a node outside 0..{n}")]
    NodeOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop on node {node}")]
    SelfLoop { node: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
}

/// Immutable simple undirected unweighted graph.
///
/// Node ids are `0..node_count()`. Every adjacency list is sorted, so
/// neighbor iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Builds a canonical graph, rejecting self-loops, duplicate pairs (in either
/// orientation) and out-of-range ids.
pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(GraphError::NodeOutOfRange { u, v, n });
        }
        if u == v {
            return Err(GraphError::SelfLoop { node: u });
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    for (u, list) in adjacency.iter_mut().enumerate() {
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            let (a, b) = (u.min(w[0]), u.max(w[0]));
            return Err(GraphError::DuplicateEdge { u: a, v: b });
        }
    }
    Ok(Graph {
        adjacency,
        edge_count: edges.len(),
    })
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        if self.adjacency.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count as f64 / self.adjacency.len() as f64
    }

    /// Sorted neighbors of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `nodes`. Node `i` of the result is `nodes[i]`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.node_count()];
        for (i, &u) in nodes.iter().enumerate() {
            local[u] = i;
        }
        let mut edge_count = 0;
        let adjacency: Vec<Vec<usize>> = nodes
            .iter()
            .map(|&u| {
                let mut list: Vec<usize> = self.adjacency[u]
                    .iter()
                    .filter_map(|&v| (local[v] != usize::MAX).then_some(local[v]))
                    .collect();
                list.sort_unstable();
                edge_count += list.len();
                list
            })
            .collect();
        Graph {
            adjacency,
            edge_count: edge_count / 2,
        }
    }
}

/// Total assignment of nodes to communities with contiguous ids `0..C`.
///
/// Community ids are canonical: they are numbered in order of first
/// appearance when scanning nodes by ascending id. Two partitions that
/// group nodes identically are therefore equal as values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    membership: Vec<usize>,
    communities: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from arbitrary labels, one per node.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = rustc_hash::FxHashMap::default();
        let mut communities: Vec<Vec<usize>> = Vec::new();
        let membership = labels
            .iter()
            .enumerate()
            .map(|(u, label)| {
                let id = *remap.entry(*label).or_insert_with(|| {
                    communities.push(Vec::new());
                    communities.len() - 1
                });
                communities[id].push(u);
                id
            })
            .collect();
        Partition {
            membership,
            communities,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            membership: (0..n).collect(),
            communities: (0..n).map(|u| vec![u]).collect(),
        }
    }

    pub fn single_block(n: usize) -> Self {
        Self::from_labels(&vec![0; n])
    }

    pub fn node_count(&self) -> usize {
        self.membership.len()
    }

    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    pub fn community_of(&self, u: usize) -> usize {
        self.membership[u]
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    /// Members of community `c`, ascending.
    pub fn members(&self, c: usize) -> &[usize] {
        &self.communities[c]
    }

    pub fn communities(&self) -> &[Vec<usize>] {
        &self.communities
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.communities.iter().map(Vec::len).collect()
    }

    pub fn singleton_count(&self) -> usize {
        self.communities.iter().filter(|c| c.len() == 1).count()
    }
}

/// Number of neighbors of `u` in its own community.
pub fn internal_degree(g: &Graph, p: &Partition, u: usize) -> usize {
    let c = p.community_of(u);
    g.neighbors(u)
        .iter()
        .filter(|&&v| p.community_of(v) == c)
        .count()
}

pub fn external_degree(g: &Graph, p: &Partition, u: usize) -> usize {
    g.degree(u) - internal_degree(g, p, u)
}

/// One community per connected component.
pub fn connected_components(g: &Graph) -> Partition {
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    Partition::from_labels(&label)
}

/// Shortest-path lengths between members of a node set, measured inside the
/// subgraph the set induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    nodes: Vec<usize>,
    dist: Vec<Option<u32>>,
}

impl DistanceTable {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Distance between the `i`-th and `j`-th nodes of the set; `None` when
    /// no path exists inside the induced subgraph.
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.dist[i * self.nodes.len() + j]
    }

    /// Distance between two graph nodes, both of which must be in the set.
    pub fn between(&self, u: usize, v: usize) -> Option<u32> {
        let i = self.nodes.iter().position(|&x| x == u)?;
        let j = self.nodes.iter().position(|&x| x == v)?;
        self.get(i, j)
    }

    pub fn is_connected(&self) -> bool {
        self.dist.iter().all(Option::is_some)
    }

    /// Mean over unordered reachable pairs, or `None` if no pair is reachable.
    pub fn mean_reachable(&self) -> Option<f64> {
        let k = self.nodes.len();
        let mut total = 0u64;
        let mut count = 0u64;
        for i in 0..k {
            for j in (i + 1)..k {
                if let Some(d) = self.get(i, j) {
                    total += u64::from(d);
                    count += 1;
                }
            }
        }
        (count > 0).then(|| total as f64 / count as f64)
    }
}

pub fn pairwise_distances_within(g: &Graph, nodes: &[usize]) -> DistanceTable {
    let sub = g.induced_subgraph(nodes);
    let k = nodes.len();
    let mut dist = vec![None; k * k];
    let mut queue = VecDeque::new();
    for s in 0..k {
        let row = &mut dist[s * k..(s + 1) * k];
        row[s] = Some(0);
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = row[u].unwrap_or(0);
            for &v in sub.neighbors(u) {
                if row[v].is_none() {
                    row[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
    }
    DistanceTable {
        nodes: nodes.to_vec(),
        dist,
    }
}
