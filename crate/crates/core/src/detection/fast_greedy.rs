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

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use super::{first_argmax, per_component, ComponentDendrogram, Merge, MergeDendrogram};
use crate::graph::{Graph, Partition};

/// Greedy modularity agglomeration with a max-heap of merge gains. Each step
/// merges the adjacent pair with the largest gain, the lowest id pair on
/// ties, and the returned partition is the first cut of maximal modularity.
pub fn fast_greedy(g: &Graph) -> (Partition, Vec<ComponentDendrogram>) {
    let run = per_component(g, |sub, nodes| {
        let dendrogram = fast_greedy_connected(sub);
        let labels = dendrogram.best_partition().membership().to_vec();
        Ok::<_, std::convert::Infallible>((
            labels,
            ComponentDendrogram {
                nodes: nodes.to_vec(),
                dendrogram,
            },
        ))
    });
    match run {
        Ok(result) => result,
        Err(never) => match never {},
    }
}

/// Full merge sequence of a connected graph.
///
/// A merged community keeps the slot of the side with more neighbors, so
/// only the other side's neighbors are rewritten. Queue entries are upper
/// bounds: a pair's gain only falls when a third community grows, and is
/// re-evaluated when popped.
pub fn fast_greedy_connected(g: &Graph) -> MergeDendrogram {
    let n = g.node_count();
    let m = g.edge_count() as i128;
    if m == 0 {
        return MergeDendrogram {
            node_count: n,
            initial_objective: 0.0,
            merges: Vec::new(),
            cut: 0,
        };
    }
    let scale = 4.0 * (m as f64) * (m as f64);

    let mut links: Vec<FxHashMap<usize, i128>> = (0..n)
        .map(|u| g.neighbors(u).iter().map(|&v| (v, 1)).collect())
        .collect();
    let mut degree: Vec<i128> = (0..n).map(|u| g.degree(u) as i128).collect();
    let mut alive = vec![true; n];
    // Dendrogram id of the community held in each slot.
    let mut label: Vec<usize> = (0..n).collect();

    // Gain key `2m l_ab - d_a d_b`, proportional to the modularity change.
    let key = |l: i128, da: i128, db: i128| 2 * m * l - da * db;
    let mut heap = BinaryHeap::new();
    for (u, v) in g.edges() {
        heap.push((key(1, degree[u], degree[v]), Reverse(u), Reverse(v)));
    }

    let mut q: i128 = -degree.iter().map(|d| d * d).sum::<i128>();
    let initial_objective = q as f64 / scale;
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    let mut values = vec![q];

    while let Some((stored, Reverse(a), Reverse(b))) = heap.pop() {
        if !alive[a] || !alive[b] {
            continue;
        }
        let gain = key(links[a][&b], degree[a], degree[b]);
        if gain != stored {
            if gain < stored {
                heap.push((gain, Reverse(a), Reverse(b)));
            }
            continue;
        }
        let (keep, gone) = if links[a].len() >= links[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        alive[gone] = false;
        let moved = std::mem::take(&mut links[gone]);
        degree[keep] += degree[gone];
        links[keep].remove(&gone);
        let mut touched: Vec<usize> = moved.keys().copied().filter(|&x| x != keep).collect();
        touched.sort_unstable();
        for x in touched {
            let l = moved[&x];
            let total = {
                let entry = links[keep].entry(x).or_insert(0);
                *entry += l;
                *entry
            };
            let lx = &mut links[x];
            lx.remove(&gone);
            lx.insert(keep, total);
            let (lo, hi) = (x.min(keep), x.max(keep));
            heap.push((
                key(total, degree[x], degree[keep]),
                Reverse(lo),
                Reverse(hi),
            ));
        }

        q += 2 * gain;
        values.push(q);
        let (la, lb) = (label[a].min(label[b]), label[a].max(label[b]));
        merges.push(Merge {
            a: la,
            b: lb,
            objective: q as f64 / scale,
        });
        label[keep] = n + merges.len() - 1;
    }

    MergeDendrogram {
        node_count: n,
        initial_objective,
        merges,
        cut: first_argmax(&values),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::fixtures::*;
    use crate::detection::modularity;
    use crate::graph::build_graph;

    #[test]
    fn two_triangles() {
        let g = crate::detection::fixtures::two_triangles();
        let (p, d) = fast_greedy(&g);
        assert_eq!(p, expected(&[0, 0, 0, 1, 1, 1]));
        let best = d[0].dendrogram.merges[d[0].dendrogram.cut - 1].objective;
        assert!((best - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn single_edge_merges() {
        let g = build_graph(2, &[(0, 1)]).unwrap();
        assert_eq!(fast_greedy(&g).0, Partition::single_block(2));
    }

    #[test]
    fn planted_fixtures() {
        let labels: Vec<usize> = (0..10).map(|u| u / 5).collect();
        assert_eq!(fast_greedy(&two_k5()).0, expected(&labels));
        let labels: Vec<usize> = (0..12).map(|u| u / 3).collect();
        assert_eq!(fast_greedy(&triangle_ring()).0, expected(&labels));
    }

    #[test]
    fn dendrogram_objectives_match_recomputation() {
        for g in [two_k5(), triangle_ring(), k4()] {
            let (_, runs) = fast_greedy(&g);
            let d = &runs[0].dendrogram;
            assert_eq!(d.merges.len(), g.node_count() - 1);
            for (steps, q) in d.objective_curve().into_iter().enumerate() {
                let direct = modularity(&g, &d.partition_at(steps)).unwrap();
                assert!((q - direct).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn components_stay_apart() {
        let mut e = clique_edges(0..3);
        e.extend(clique_edges(3..6));
        let g = build_graph(7, &e).unwrap();
        let (p, runs) = fast_greedy(&g);
        assert_eq!(p, expected(&[0, 0, 0, 1, 1, 1, 2]));
        assert_eq!(runs.len(), 3);
    }
}
