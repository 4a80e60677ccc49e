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

//! Mesoscopic properties of a community structure.
//!
//! Per node: embeddedness `k_int / k`. Per community `C` with `n_C` members
//! and `m_C` internal edges: density `2 m_C / (n_C (n_C - 1))`, scaled
//! density `2 m_C / (n_C - 1)`, hub dominance `max k_int / (n_C - 1)` and
//! the mean shortest-path length inside the induced subgraph.
//!
//! Singleton communities have none of the per-community measures; they are
//! reported with every measure unset and left out of the binned curves.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{internal_degree, Graph, Partition};

/// Default logarithmic bin resolution for size-indexed curves.
pub const DEFAULT_BINS_PER_DECADE: usize = 5;

/// `k_int / k`, or `None` for an isolated node.
pub fn embeddedness(g: &Graph, p: &Partition, u: usize) -> Option<f64> {
    let k = g.degree(u);
    (k > 0).then(|| internal_degree(g, p, u) as f64 / k as f64)
}

pub fn density(n_c: usize, m_c: usize) -> Option<f64> {
    (n_c >= 2).then(|| 2.0 * m_c as f64 / (n_c as f64 * (n_c - 1) as f64))
}

pub fn scaled_density(n_c: usize, m_c: usize) -> Option<f64> {
    (n_c >= 2).then(|| 2.0 * m_c as f64 / (n_c - 1) as f64)
}

pub fn hub_dominance(g: &Graph, p: &Partition, c: usize) -> Option<f64> {
    let members = p.members(c);
    if members.len() < 2 {
        return None;
    }
    let max_kint = members
        .iter()
        .map(|&u| internal_degree(g, p, u))
        .max()
        .unwrap_or(0);
    Some(max_kint as f64 / (members.len() - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageDistance {
    /// Mean shortest-path length over reachable member pairs.
    pub mean: f64,
    pub connected: bool,
}

/// How community average distances are computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DistanceMode {
    /// BFS from every member.
    #[default]
    Exact,
    /// Communities larger than `threshold` use BFS from `sources` members
    /// picked with a seeded RNG.
    Sampled {
        threshold: usize,
        sources: usize,
        seed: u64,
    },
}

pub fn community_avg_distance(g: &Graph, p: &Partition, c: usize) -> Option<AverageDistance> {
    avg_distance_with(g, p, c, DistanceMode::Exact)
}

fn avg_distance_with(
    g: &Graph,
    p: &Partition,
    c: usize,
    mode: DistanceMode,
) -> Option<AverageDistance> {
    let members = p.members(c);
    let k = members.len();
    if k < 2 {
        return None;
    }
    let sub = g.induced_subgraph(members);
    let sources: Vec<usize> = match mode {
        DistanceMode::Sampled {
            threshold,
            sources,
            seed,
        } if k > threshold && sources < k => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ c as u64);
            let mut picked = sample(&mut rng, k, sources).into_vec();
            picked.sort_unstable();
            picked
        }
        _ => (0..k).collect(),
    };
    let exhaustive = sources.len() == k;
    let mut dist = vec![u32::MAX; k];
    let mut queue = VecDeque::new();
    let (mut total, mut reachable, mut unreachable) = (0u64, 0u64, 0u64);
    for &s in &sources {
        dist.fill(u32::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in sub.neighbors(u) {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for (t, &d) in dist.iter().enumerate() {
            // Each unordered pair once when every member is a source.
            if t == s || (exhaustive && t < s) {
                continue;
            }
            if d == u32::MAX {
                unreachable += 1;
            } else {
                total += u64::from(d);
                reachable += 1;
            }
        }
    }
    (reachable > 0).then(|| AverageDistance {
        mean: total as f64 / reachable as f64,
        connected: unreachable == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityProfile {
    pub community: usize,
    pub size: usize,
    pub internal_edges: usize,
    pub density: Option<f64>,
    pub scaled_density: Option<f64>,
    pub avg_distance: Option<f64>,
    pub hub_dominance: Option<f64>,
    pub internally_connected: bool,
}

impl CommunityProfile {
    pub fn is_singleton(&self) -> bool {
        self.size < 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionProfile {
    pub communities: Vec<CommunityProfile>,
    /// Per-node embeddedness; `None` for isolated nodes.
    pub embeddedness: Vec<Option<f64>>,
}

pub fn profile_partition(g: &Graph, p: &Partition) -> PartitionProfile {
    profile_partition_with(g, p, DistanceMode::Exact)
}

pub fn profile_partition_with(g: &Graph, p: &Partition, mode: DistanceMode) -> PartitionProfile {
    let kint: Vec<usize> = (0..g.node_count())
        .map(|u| internal_degree(g, p, u))
        .collect();
    let communities = (0..p.community_count())
        .map(|c| {
            let members = p.members(c);
            let size = members.len();
            let internal_edges = members.iter().map(|&u| kint[u]).sum::<usize>() / 2;
            let max_kint = members.iter().map(|&u| kint[u]).max().unwrap_or(0);
            let distance = avg_distance_with(g, p, c, mode);
            CommunityProfile {
                community: c,
                size,
                internal_edges,
                density: density(size, internal_edges),
                scaled_density: scaled_density(size, internal_edges),
                avg_distance: distance.map(|d| d.mean),
                hub_dominance: (size >= 2).then(|| max_kint as f64 / (size - 1) as f64),
                internally_connected: size < 2 || distance.is_some_and(|d| d.connected),
            }
        })
        .collect();
    let embeddedness = (0..g.node_count())
        .map(|u| {
            let k = g.degree(u);
            (k > 0).then(|| kint[u] as f64 / k as f64)
        })
        .collect();
    PartitionProfile {
        communities,
        embeddedness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveBin {
    /// Inclusive lower size edge.
    pub lower: f64,
    /// Exclusive upper size edge.
    pub upper: f64,
    pub mean: f64,
    pub count: usize,
}

/// Averages over logarithmic size bins. Bin `j` covers
/// `[10^(j/b), 10^((j+1)/b))` for `b` bins per decade, so curves built from
/// different partitions share their bin edges.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BinnedCurve {
    pub bins: Vec<CurveBin>,
}

fn bin_edge(j: i64, bins_per_decade: usize) -> f64 {
    10f64.powf(j as f64 / bins_per_decade as f64)
}

/// Index of the logarithmic bin holding `size`.
pub fn log_bin_index(size: usize, bins_per_decade: usize) -> i64 {
    let x = size as f64;
    let mut j = (x.log10() * bins_per_decade as f64).floor() as i64;
    // Guard against log10 rounding at exact edges.
    while bin_edge(j, bins_per_decade) > x {
        j -= 1;
    }
    while bin_edge(j + 1, bins_per_decade) <= x {
        j += 1;
    }
    j
}

pub fn log_binned_curve(points: &[(usize, f64)], bins_per_decade: usize) -> BinnedCurve {
    let bins_per_decade = bins_per_decade.max(1);
    let mut acc: std::collections::BTreeMap<i64, (f64, usize)> = Default::default();
    for &(size, value) in points {
        let e = acc
            .entry(log_bin_index(size.max(1), bins_per_decade))
            .or_default();
        e.0 += value;
        e.1 += 1;
    }
    BinnedCurve {
        bins: acc
            .into_iter()
            .map(|(j, (sum, count))| CurveBin {
                lower: bin_edge(j, bins_per_decade),
                upper: bin_edge(j + 1, bins_per_decade),
                mean: sum / count as f64,
                count,
            })
            .collect(),
    }
}

/// Which per-community measure a curve tracks against community size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    ScaledDensity,
    AverageDistance,
    HubDominance,
    Density,
}

impl Property {
    pub const ALL: [Property; 4] = [
        Property::ScaledDensity,
        Property::AverageDistance,
        Property::HubDominance,
        Property::Density,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::ScaledDensity => "scaled_density",
            Property::AverageDistance => "average_distance",
            Property::HubDominance => "hub_dominance",
            Property::Density => "density",
        }
    }

    pub fn value(self, profile: &CommunityProfile) -> Option<f64> {
        match self {
            Property::ScaledDensity => profile.scaled_density,
            Property::AverageDistance => profile.avg_distance,
            Property::HubDominance => profile.hub_dominance,
            Property::Density => profile.density,
        }
    }
}

/// Log-binned curve of `property` against size, skipping communities where
/// the property is undefined.
pub fn property_curve<'a>(
    profiles: impl IntoIterator<Item = &'a CommunityProfile>,
    property: Property,
    bins_per_decade: usize,
) -> BinnedCurve {
    let points: Vec<(usize, f64)> = profiles
        .into_iter()
        .filter(|c| !c.is_singleton())
        .filter_map(|c| property.value(c).map(|v| (c.size, v)))
        .collect();
    log_binned_curve(&points, bins_per_decade)
}

/// Community size distribution over logarithmic bins: each bin's `mean` is
/// the fraction of communities whose size falls in it.
pub fn size_distribution(sizes: &[usize], bins_per_decade: usize) -> BinnedCurve {
    let total = sizes.len();
    let points: Vec<(usize, f64)> = sizes.iter().map(|&s| (s, 1.0)).collect();
    let mut curve = log_binned_curve(&points, bins_per_decade);
    for bin in &mut curve.bins {
        bin.mean = bin.count as f64 / total as f64;
    }
    curve
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    pub fraction: f64,
}

/// Equal-width histogram of values in `[0, 1]`; 1.0 falls in the last bin.
pub fn unit_histogram(values: impl IntoIterator<Item = f64>, bins: usize) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let mut counts = vec![0usize; bins];
    let mut total = 0;
    for v in values {
        let i = ((v * bins as f64).floor() as usize).min(bins - 1);
        counts[i] += 1;
        total += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            lower: i as f64 / bins as f64,
            upper: (i + 1) as f64 / bins as f64,
            count,
            fraction: if total == 0 {
                0.0
            } else {
                count as f64 / total as f64
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        build_graph(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn embeddedness_extremes() {
        let g = star(4);
        let all_in = Partition::single_block(5);
        assert_eq!(embeddedness(&g, &all_in, 0), Some(1.0));
        let hub_alone = Partition::from_labels(&[0, 1, 1, 1, 1]);
        assert_eq!(embeddedness(&g, &hub_alone, 0), Some(0.0));
        let three_of_four = Partition::from_labels(&[0, 0, 0, 0, 1]);
        assert_eq!(embeddedness(&g, &three_of_four, 0), Some(0.75));
        let isolated = Graph::empty(2);
        assert_eq!(
            embeddedness(&isolated, &Partition::single_block(2), 0),
            None
        );
    }

    #[test]
    fn scaled_density_closed_forms() {
        assert_eq!(scaled_density(10, 9), Some(2.0));
        assert_eq!(scaled_density(7, 21), Some(7.0));
        assert_eq!(scaled_density(5, 6), Some(3.0));
        assert_eq!(scaled_density(1, 0), None);
    }

    #[test]
    fn hub_dominance_cases() {
        let g = star(4);
        assert_eq!(hub_dominance(&g, &Partition::single_block(5), 0), Some(1.0));
        let empty = Graph::empty(3);
        assert_eq!(
            hub_dominance(&empty, &Partition::single_block(3), 0),
            Some(0.0)
        );
        let path = build_graph(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            hub_dominance(&path, &Partition::single_block(3), 0),
            Some(1.0)
        );
        assert_eq!(hub_dominance(&path, &Partition::singletons(3), 0), None);
    }

    #[test]
    fn average_distance_cases() {
        let k4 = build_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let d = community_avg_distance(&k4, &Partition::single_block(4), 0).unwrap();
        assert_eq!(d.mean, 1.0);
        assert!(d.connected);

        let path = build_graph(3, &[(0, 1), (1, 2)]).unwrap();
        let d = community_avg_distance(&path, &Partition::single_block(3), 0).unwrap();
        assert!((d.mean - 4.0 / 3.0).abs() < 1e-15);

        let d = community_avg_distance(&star(4), &Partition::single_block(5), 0).unwrap();
        assert!((d.mean - 1.6).abs() < 1e-15);

        // Members 0 and 2 are only linked through node 1 of another community.
        let p = Partition::from_labels(&[0, 1, 0]);
        assert_eq!(community_avg_distance(&path, &p, 0), None);
    }

    #[test]
    fn two_triangles_profile() {
        let g = build_graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
        let p = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        let profile = profile_partition(&g, &p);
        for c in &profile.communities {
            assert_eq!(c.size, 3);
            assert_eq!(c.scaled_density, Some(3.0));
            assert_eq!(c.avg_distance, Some(1.0));
            assert_eq!(c.hub_dominance, Some(1.0));
            assert!(c.internally_connected);
        }
        assert_eq!(profile.embeddedness[2], Some(2.0 / 3.0));
        assert_eq!(profile.embeddedness[0], Some(1.0));
    }

    #[test]
    fn singleton_profile_is_flagged() {
        let g = build_graph(3, &[(0, 1), (1, 2)]).unwrap();
        let p = Partition::from_labels(&[0, 0, 1]);
        let profile = profile_partition(&g, &p);
        let single = &profile.communities[1];
        assert!(single.is_singleton());
        assert_eq!(single.scaled_density, None);
        assert_eq!(single.avg_distance, None);
        assert_eq!(single.hub_dominance, None);
        let curve = property_curve(&profile.communities, Property::ScaledDensity, 5);
        assert_eq!(curve.bins.iter().map(|b| b.count).sum::<usize>(), 1);
    }

    #[test]
    fn sampled_distance_mode() {
        let edges: Vec<_> = (1..200).map(|v| (v - 1, v)).collect();
        let path = build_graph(200, &edges).unwrap();
        let p = Partition::single_block(200);
        let exact = profile_partition(&path, &p).communities[0]
            .avg_distance
            .unwrap();
        assert!((exact - 201.0 / 3.0).abs() < 1e-9);
        let mode = DistanceMode::Sampled {
            threshold: 100,
            sources: 50,
            seed: 1,
        };
        let sampled = profile_partition_with(&path, &p, mode).communities[0]
            .avg_distance
            .unwrap();
        assert!((sampled - exact).abs() / exact < 0.25);
        let small = DistanceMode::Sampled {
            threshold: 500,
            sources: 50,
            seed: 1,
        };
        assert_eq!(
            profile_partition_with(&path, &p, small).communities[0].avg_distance,
            Some(exact)
        );
    }

    #[test]
    fn binned_curves() {
        let one = log_binned_curve(&[(10, 5.0)], 5);
        assert_eq!(one.bins.len(), 1);
        assert_eq!(one.bins[0].mean, 5.0);
        assert_eq!(one.bins[0].count, 1);
        assert!(one.bins[0].lower <= 10.0 && 10.0 < one.bins[0].upper);

        let coarse = log_binned_curve(&[(10, 1.0), (11, 3.0)], 1);
        assert_eq!(coarse.bins.len(), 1);
        assert_eq!(coarse.bins[0].mean, 2.0);
        assert_eq!(coarse.bins[0].count, 2);

        let flat: Vec<_> = (1..2000).map(|s| (s, 0.25)).collect();
        let curve = log_binned_curve(&flat, 5);
        assert!(curve.bins.iter().all(|b| b.mean == 0.25));
        assert_eq!(curve.bins.iter().map(|b| b.count).sum::<usize>(), 1999);
        for w in curve.bins.windows(2) {
            assert_eq!(w[0].upper, w[1].lower);
        }
    }

    #[test]
    fn exact_edges_land_in_upper_bin() {
        for b in [1, 2, 5, 10] {
            assert_eq!(log_bin_index(10, b), b as i64);
            assert_eq!(log_bin_index(100, b), 2 * b as i64);
            assert_eq!(log_bin_index(1, b), 0);
        }
    }

    #[test]
    fn histogram_and_size_distribution() {
        let h = unit_histogram([0.0, 0.5, 1.0, 0.99], 20);
        assert_eq!(h.len(), 20);
        assert_eq!(h[0].count, 1);
        assert_eq!(h[10].count, 1);
        assert_eq!(h[19].count, 2);

        let d = size_distribution(&[10, 11, 100, 1000], 1);
        assert_eq!(d.bins.iter().map(|b| b.mean).sum::<f64>(), 1.0);
        assert_eq!(d.bins[0].mean, 0.5);
    }
}
