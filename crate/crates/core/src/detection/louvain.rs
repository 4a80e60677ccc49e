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

use super::per_component;
use super::weighted::{compact_labels, WeightedGraph};
use crate::graph::{Graph, Partition};

#[derive(Debug, Clone, PartialEq)]
pub struct LouvainResult {
    pub partition: Partition,
    /// Per connected component, the modularity after each pass that moved
    /// at least one node.
    pub pass_modularity: Vec<Vec<f64>>,
}

/// Alternates node moves and aggregation until a pass moves no node.
///
/// Gains are compared as exact integers, so every accepted move raises
/// modularity and the pass log is strictly increasing.
pub fn louvain(g: &Graph) -> LouvainResult {
    let run = per_component(g, |sub, _| {
        Ok::<_, std::convert::Infallible>(louvain_connected(sub))
    });
    let (partition, pass_modularity) = match run {
        Ok(result) => result,
        Err(never) => match never {},
    };
    LouvainResult {
        partition,
        pass_modularity,
    }
}

fn louvain_connected(g: &Graph) -> (Vec<usize>, Vec<f64>) {
    let n = g.node_count();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut log = Vec::new();
    if g.edge_count() == 0 {
        return (labels, log);
    }
    let mut level = WeightedGraph::from_graph(g);
    loop {
        let (moved, local) = move_nodes(&level);
        if !moved {
            break;
        }
        let (local, count) = compact_labels(&local);
        for l in labels.iter_mut() {
            *l = local[*l];
        }
        level = level.aggregate(&local, count);
        log.push(level_modularity(&level));
    }
    (labels, log)
}

/// Modularity of the partition whose communities are the nodes of `w`.
fn level_modularity(w: &WeightedGraph) -> f64 {
    let two_m = w.total as i128;
    let num: i128 = (0..w.node_count())
        .map(|c| {
            let s = w.strength[c] as i128;
            2 * two_m * w.loops[c] as i128 - s * s
        })
        .sum();
    num as f64 / (two_m * two_m) as f64
}

/// Repeated id-ordered sweeps of best single-node moves.
fn move_nodes(w: &WeightedGraph) -> (bool, Vec<usize>) {
    let n = w.node_count();
    let two_m = w.total as i128;
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot: Vec<i128> = w.strength.iter().map(|&s| s as i128).collect();
    let mut link = vec![0i128; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;
    loop {
        let mut moved = false;
        for i in 0..n {
            let ci = comm[i];
            let ki = w.strength[i] as i128;
            for &(v, wt) in &w.adj[i] {
                let c = comm[v];
                if link[c] == 0 {
                    touched.push(c);
                }
                link[c] += wt as i128;
            }
            tot[ci] -= ki;
            let gain = |c: usize, link: &[i128], tot: &[i128]| two_m * link[c] - tot[c] * ki;
            let stay = gain(ci, &link, &tot);
            let mut best: Option<(i128, usize)> = None;
            for &c in &touched {
                if c == ci {
                    continue;
                }
                let gc = gain(c, &link, &tot);
                if best.is_none_or(|(bg, bc)| gc > bg || (gc == bg && c < bc)) {
                    best = Some((gc, c));
                }
            }
            let target = match best {
                Some((bg, bc)) if bg > stay => bc,
                _ => ci,
            };
            tot[target] += ki;
            if target != ci {
                comm[i] = target;
                moved = true;
            }
            for &c in &touched {
                link[c] = 0;
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
