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

use rustc_hash::FxHashMap;

use crate::graph::Graph;

/// Multigraph with integer edge weights and self-loops, produced by
/// collapsing communities into nodes.
#[derive(Debug, Clone)]
pub(crate) struct WeightedGraph {
    /// Neighbors other than the node itself, ascending.
    pub adj: Vec<Vec<(usize, u64)>>,
    /// Weight of edges folded inside each node.
    pub loops: Vec<u64>,
    /// Weighted degree, with each folded edge counted twice.
    pub strength: Vec<u64>,
    /// Sum of strengths, twice the total edge weight.
    pub total: u64,
}

impl WeightedGraph {
    pub fn from_graph(g: &Graph) -> Self {
        let adj: Vec<Vec<(usize, u64)>> = (0..g.node_count())
            .map(|u| g.neighbors(u).iter().map(|&v| (v, 1)).collect())
            .collect();
        let n = adj.len();
        Self::assemble(adj, vec![0; n])
    }

    fn assemble(adj: Vec<Vec<(usize, u64)>>, loops: Vec<u64>) -> Self {
        let strength: Vec<u64> = adj
            .iter()
            .zip(&loops)
            .map(|(list, &l)| list.iter().map(|&(_, w)| w).sum::<u64>() + 2 * l)
            .collect();
        let total = strength.iter().sum();
        WeightedGraph {
            adj,
            loops,
            strength,
            total,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Collapses each group of `labels` (values `0..count`) into one node.
    pub fn aggregate(&self, labels: &[usize], count: usize) -> Self {
        let mut loops = vec![0u64; count];
        let mut twice_inside = vec![0u64; count];
        let mut maps: Vec<FxHashMap<usize, u64>> = vec![FxHashMap::default(); count];
        for u in 0..self.node_count() {
            let cu = labels[u];
            loops[cu] += self.loops[u];
            for &(v, w) in &self.adj[u] {
                let cv = labels[v];
                if cu == cv {
                    twice_inside[cu] += w;
                } else {
                    *maps[cu].entry(cv).or_insert(0) += w;
                }
            }
        }
        for (l, t) in loops.iter_mut().zip(&twice_inside) {
            *l += t / 2;
        }
        let adj = maps
            .into_iter()
            .map(|map| {
                let mut list: Vec<(usize, u64)> = map.into_iter().collect();
                list.sort_unstable();
                list
            })
            .collect();
        Self::assemble(adj, loops)
    }
}

/// Renumbers labels by first appearance; returns the new labels and count.
pub(crate) fn compact_labels(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = FxHashMap::default();
    let out = labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect();
    (out, map.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::fixtures::two_triangles;

    #[test]
    fn aggregation_preserves_weight() {
        let w = WeightedGraph::from_graph(&two_triangles());
        assert_eq!(w.total, 14);
        let agg = w.aggregate(&[0, 0, 0, 1, 1, 1], 2);
        assert_eq!(agg.loops, vec![3, 3]);
        assert_eq!(agg.adj[0], vec![(1, 1)]);
        assert_eq!(agg.strength, vec![7, 7]);
        assert_eq!(agg.total, 14);
        let top = agg.aggregate(&[0, 0], 1);
        assert_eq!(top.loops, vec![7]);
        assert_eq!(top.strength, vec![14]);
    }

    #[test]
    fn compact() {
        assert_eq!(compact_labels(&[5, 2, 5, 9]), (vec![0, 1, 0, 2], 3));
    }
}
