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

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use super::{
    first_argmax, per_component, ComponentDendrogram, DetectionError, Merge, MergeDendrogram,
};
use crate::graph::{Graph, Partition};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Random-walk agglomeration. Communities are compared through their
/// `t`-step transition probability vectors; adjacent pairs are merged in
/// order of least increase of the summed squared distance to community
/// centres. The returned partition is the cut of maximal modularity.
pub fn walktrap(
    g: &Graph,
    t: usize,
) -> Result<(Partition, Vec<ComponentDendrogram>), DetectionError> {
    check_steps(t)?;
    per_component(g, |sub, nodes| {
        let dendrogram = walktrap_connected(sub, t)?;
        let labels = dendrogram.best_partition().membership().to_vec();
        Ok((
            labels,
            ComponentDendrogram {
                nodes: nodes.to_vec(),
                dendrogram,
            },
        ))
    })
}

fn check_steps(t: usize) -> Result<(), DetectionError> {
    if t == 0 {
        return Err(DetectionError::InvalidParameter {
            name: "walktrap_steps",
            message: "walk length must be at least 1".into(),
        });
    }
    Ok(())
}

/// `P^t_{u.}` as a dense vector.
fn walk_probabilities(g: &Graph, u: usize, t: usize, acc: &mut [f64], next: &mut [f64]) {
    acc.fill(0.0);
    acc[u] = 1.0;
    let mut support = vec![u];
    let mut seen = vec![false; g.node_count()];
    for _ in 0..t {
        let mut next_support = Vec::with_capacity(support.len() * 4);
        for &j in &support {
            let d = g.degree(j);
            if d == 0 {
                continue;
            }
            let share = acc[j] / d as f64;
            for &k in g.neighbors(j) {
                if !seen[k] {
                    seen[k] = true;
                    next_support.push(k);
                }
                next[k] += share;
            }
        }
        for &j in &support {
            acc[j] = 0.0;
        }
        for &k in &next_support {
            acc[k] = next[k];
            next[k] = 0.0;
            seen[k] = false;
        }
        support = next_support;
    }
}

/// Walk distance `r(u, v) = || D^{-1/2} (P^t_u - P^t_v) ||`.
pub fn walk_distance(g: &Graph, t: usize, u: usize, v: usize) -> f64 {
    let n = g.node_count();
    let (mut pu, mut pv, mut scratch) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    walk_probabilities(g, u, t, &mut pu, &mut scratch);
    walk_probabilities(g, v, t, &mut pv, &mut scratch);
    (0..n)
        .filter(|&k| g.degree(k) > 0)
        .map(|k| (pu[k] - pv[k]).powi(2) / g.degree(k) as f64)
        .sum::<f64>()
        .sqrt()
}

fn squared_distance(a: &[f32], b: &[f32]) -> f64 {
    // Independent lanes so the loop vectorizes.
    const LANES: usize = 16;
    let mut acc = [0.0f32; LANES];
    let (ca, cb) = (a.chunks_exact(LANES), b.chunks_exact(LANES));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    let mut total = 0.0f64;
    for (k, (x, y)) in ca.zip(cb).enumerate() {
        for l in 0..LANES {
            let d = x[l] - y[l];
            acc[l] += d * d;
        }
        // Flush periodically to limit single-precision drift.
        if k % 64 == 63 {
            total += acc.iter().map(|&v| v as f64).sum::<f64>();
            acc = [0.0; LANES];
        }
    }
    total += acc.iter().map(|&v| v as f64).sum::<f64>();
    for (x, y) in ra.iter().zip(rb) {
        total += ((x - y) * (x - y)) as f64;
    }
    total
}

/// Scaled walk vectors `P^t_{u.} / sqrt(d)` of every node, computed for
/// blocks of sources at once by gathering over neighbors.
fn walk_vectors(g: &Graph, t: usize) -> Vec<Option<Vec<f32>>> {
    const BLOCK: usize = 16;
    let n = g.node_count();
    let inv_degree: Vec<f64> = (0..n).map(|k| 1.0 / g.degree(k).max(1) as f64).collect();
    let inv_sqrt: Vec<f64> = (0..n).map(|k| inv_degree[k].sqrt()).collect();
    let mut out: Vec<Option<Vec<f32>>> = Vec::with_capacity(2 * n);
    let mut x = vec![0.0f64; n * BLOCK];
    let mut y = vec![0.0f64; n * BLOCK];
    for start in (0..n).step_by(BLOCK) {
        let width = BLOCK.min(n - start);
        x.fill(0.0);
        for b in 0..width {
            x[(start + b) * BLOCK + b] = 1.0;
        }
        for _ in 0..t {
            for j in 0..n {
                let s = inv_degree[j];
                for v in &mut x[j * BLOCK..(j + 1) * BLOCK] {
                    *v *= s;
                }
            }
            for k in 0..n {
                let mut acc = [0.0f64; BLOCK];
                for &j in g.neighbors(k) {
                    let row = &x[j * BLOCK..(j + 1) * BLOCK];
                    for l in 0..BLOCK {
                        acc[l] += row[l];
                    }
                }
                y[k * BLOCK..(k + 1) * BLOCK].copy_from_slice(&acc);
            }
            std::mem::swap(&mut x, &mut y);
        }
        for b in 0..width {
            out.push(Some(
                (0..n)
                    .map(|k| (x[k * BLOCK + b] * inv_sqrt[k]) as f32)
                    .collect(),
            ));
        }
    }
    out
}

struct Neighbor {
    links: i128,
    delta_sigma: f64,
    /// Whether `delta_sigma` is exact or only a lower bound.
    exact: bool,
}

/// Variance increase of merging communities of sizes `s1` and `s2` whose
/// centres are `r` apart, in a graph of `n` nodes.
fn delta_sigma(s1: f64, s2: f64, r2: f64, n: f64) -> f64 {
    s1 * s2 / (s1 + s2) * r2 / n
}

fn centre_distance(s1: f64, s2: f64, ds: f64, n: f64) -> f64 {
    (ds * n * (s1 + s2) / (s1 * s2)).max(0.0).sqrt()
}

/// Full merge sequence of a connected graph.
///
/// Pairs not adjacent to both merged communities get a triangle-inequality
/// lower bound on their cost; the exact cost is computed only if the bound
/// reaches the top of the queue, so the merge order is unchanged.
pub fn walktrap_connected(g: &Graph, t: usize) -> Result<MergeDendrogram, DetectionError> {
    check_steps(t)?;
    let n = g.node_count();
    let m = g.edge_count() as i128;
    if m == 0 {
        return Ok(MergeDendrogram {
            node_count: n,
            initial_objective: 0.0,
            merges: Vec::new(),
            cut: 0,
        });
    }
    let scale = 4.0 * (m as f64) * (m as f64);
    let mut vectors = walk_vectors(g, t);

    let nf = n as f64;
    let mut size: Vec<usize> = vec![1; n];
    let mut degree: Vec<i128> = (0..n).map(|u| g.degree(u) as i128).collect();
    let mut neighbors: Vec<FxHashMap<usize, Neighbor>> =
        (0..n).map(|_| FxHashMap::default()).collect();
    let mut heap = BinaryHeap::new();
    for (u, v) in g.edges() {
        let r2 = squared_distance(vectors[u].as_ref().unwrap(), vectors[v].as_ref().unwrap());
        let ds = delta_sigma(1.0, 1.0, r2, nf);
        for (x, y) in [(u, v), (v, u)] {
            neighbors[x].insert(
                y,
                Neighbor {
                    links: 1,
                    delta_sigma: ds,
                    exact: true,
                },
            );
        }
        heap.push(Reverse((Key(ds), u, v)));
    }
    let mut alive = vec![true; n];

    let exact_cost = |x: usize, y: usize, vectors: &[Option<Vec<f32>>], size: &[usize]| {
        let r2 = squared_distance(vectors[x].as_ref().unwrap(), vectors[y].as_ref().unwrap());
        delta_sigma(size[x] as f64, size[y] as f64, r2, nf)
    };
    let set_exact = |x: usize, y: usize, ds: f64, neighbors: &mut [FxHashMap<usize, Neighbor>]| {
        for (p, q) in [(x, y), (y, x)] {
            let e = neighbors[p].get_mut(&q).unwrap();
            e.delta_sigma = ds;
            e.exact = true;
        }
    };

    let mut q: i128 = -degree.iter().map(|d| d * d).sum::<i128>();
    let initial_objective = q as f64 / scale;
    let mut values = vec![q];
    let mut merges = Vec::with_capacity(n - 1);

    while let Some(Reverse((Key(key), a, b))) = heap.pop() {
        if !alive[a] || !alive[b] {
            continue;
        }
        let entry = &neighbors[a][&b];
        if entry.delta_sigma != key {
            continue;
        }
        if !entry.exact {
            let ds = exact_cost(a, b, &vectors, &size);
            set_exact(a, b, ds, &mut neighbors);
            heap.push(Reverse((Key(ds), a, b)));
            continue;
        }

        let mut ids: Vec<usize> = neighbors[a]
            .keys()
            .chain(neighbors[b].keys())
            .copied()
            .filter(|&x| x != a && x != b)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        // Shared neighbors need exact costs on both sides.
        for &x in &ids {
            if let (Some(ea), Some(eb)) = (neighbors[a].get(&x), neighbors[b].get(&x)) {
                let (ea, eb) = (ea.exact, eb.exact);
                if !ea {
                    let ds = exact_cost(a, x, &vectors, &size);
                    set_exact(a, x, ds, &mut neighbors);
                }
                if !eb {
                    let ds = exact_cost(b, x, &vectors, &size);
                    set_exact(b, x, ds, &mut neighbors);
                }
            }
        }

        let c = vectors.len();
        alive[a] = false;
        alive[b] = false;
        alive.push(true);
        let (sa, sb) = (size[a] as f64, size[b] as f64);
        let sc = sa + sb;
        size.push(size[a] + size[b]);

        let va = vectors[a].take().unwrap();
        let vb = vectors[b].take().unwrap();
        let (wa, wb) = ((sa / sc) as f32, (sb / sc) as f32);
        let mut vc = va;
        for (x, y) in vc.iter_mut().zip(&vb) {
            *x = *x * wa + *y * wb;
        }
        drop(vb);
        vectors.push(Some(vc));

        let na = std::mem::take(&mut neighbors[a]);
        let nb = std::mem::take(&mut neighbors[b]);
        let ds_ab = na[&b].delta_sigma;
        let l_ab = na[&b].links;
        let r_ab = centre_distance(sa, sb, ds_ab, nf);

        let mut merged = FxHashMap::default();
        for x in ids {
            let sx = size[x] as f64;
            let (from_a, from_b) = (na.get(&x), nb.get(&x));
            let links = from_a.map_or(0, |e| e.links) + from_b.map_or(0, |e| e.links);
            let (ds, exact) = match (from_a, from_b) {
                (Some(ea), Some(eb)) => (
                    ((sa + sx) * ea.delta_sigma + (sb + sx) * eb.delta_sigma - sx * ds_ab)
                        / (sc + sx),
                    true,
                ),
                (Some(e), None) | (None, Some(e)) => {
                    // The new centre lies on the segment between the old ones.
                    let (sy, r_yc) = if from_a.is_some() {
                        (sa, sb / sc * r_ab)
                    } else {
                        (sb, sa / sc * r_ab)
                    };
                    let r_yx = centre_distance(sy, sx, e.delta_sigma, nf);
                    let r = (r_yx - r_yc).max(0.0);
                    (delta_sigma(sc, sx, r * r, nf) * (1.0 - 1e-6), false)
                }
                (None, None) => unreachable!("x is a neighbor of a or b"),
            };
            let nx = &mut neighbors[x];
            nx.remove(&a);
            nx.remove(&b);
            nx.insert(
                c,
                Neighbor {
                    links,
                    delta_sigma: ds,
                    exact,
                },
            );
            merged.insert(
                x,
                Neighbor {
                    links,
                    delta_sigma: ds,
                    exact,
                },
            );
            heap.push(Reverse((Key(ds), x, c)));
        }
        neighbors.push(merged);

        q += 2 * (2 * m * l_ab - degree[a] * degree[b]);
        degree.push(degree[a] + degree[b]);
        values.push(q);
        merges.push(Merge {
            a,
            b,
            objective: q as f64 / scale,
        });
    }

    Ok(MergeDendrogram {
        node_count: n,
        initial_objective,
        merges,
        cut: first_argmax(&values),
    })
}
