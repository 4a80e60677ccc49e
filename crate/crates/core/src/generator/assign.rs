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

use rand::Rng;

use super::GeneratorError;
use crate::graph::{Graph, Partition};

/// Internal degree a node of degree `k` should reach for mixing `mu`,
/// rounding halves up.
pub fn target_internal_degree(k: usize, mu: f64) -> usize {
    let t = ((1.0 - mu) * k as f64 + 0.5).floor();
    (t.max(0.0) as usize).min(k)
}

pub fn required_internal_degrees(g: &Graph, mu: &[f64]) -> Vec<usize> {
    (0..g.node_count())
        .map(|u| target_internal_degree(g.degree(u), mu[u]))
        .collect()
}

/// Places every node in a community whose size exceeds the node's target
/// internal degree. See [`assign_with_requirements`].
pub fn assign_communities<R: Rng + ?Sized>(
    g: &Graph,
    sizes: &[usize],
    mu: &[f64],
    rng: &mut R,
) -> Result<Partition, GeneratorError> {
    let required = required_internal_degrees(g, mu);
    assign_with_requirements(&required, sizes, rng)
}

/// Nodes are placed most-constrained first. Each one goes to a random free
/// slot among the communities large enough for it, so the choice is
/// weighted by remaining capacity. Placing in this order succeeds whenever
/// any valid placement exists.
pub fn assign_with_requirements<R: Rng + ?Sized>(
    required: &[usize],
    sizes: &[usize],
    rng: &mut R,
) -> Result<Partition, GeneratorError> {
    let n = required.len();
    let total: usize = sizes.iter().sum();
    if total != n {
        return Err(GeneratorError::SizeMismatch {
            sizes: total,
            nodes: n,
        });
    }
    if sizes.contains(&0) {
        return Err(GeneratorError::SizeMismatch {
            sizes: total,
            nodes: n,
        });
    }

    // Communities by decreasing size: the feasible set for a node is a prefix.
    let mut by_size: Vec<usize> = (0..sizes.len()).collect();
    by_size.sort_by_key(|&c| (std::cmp::Reverse(sizes[c]), c));
    let mut capacity: Vec<usize> = by_size.iter().map(|&c| sizes[c]).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(required[u]), u));

    let mut label = vec![0; n];
    for u in order {
        let need = required[u] + 1;
        let prefix = by_size.partition_point(|&c| sizes[c] >= need);
        let free: usize = capacity[..prefix].iter().sum();
        if free == 0 {
            return Err(GeneratorError::InfeasibleAssignment {
                node: u,
                internal_degree: required[u],
            });
        }
        let mut slot = rng.gen_range(0..free);
        let pick = capacity[..prefix]
            .iter()
            .position(|&cap| {
                if slot < cap {
                    true
                } else {
                    slot -= cap;
                    false
                }
            })
            .expect("slot lies within the free capacity");
        capacity[pick] -= 1;
        label[u] = by_size[pick];
    }
    Ok(Partition::from_labels(&label))
}
