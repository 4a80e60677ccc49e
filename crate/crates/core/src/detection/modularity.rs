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

use super::DetectionError;
use crate::graph::{Graph, Partition};

/// `Q = sum_c [m_c / m - (d_c / 2m)^2]` with `m_c` the internal edges and
/// `d_c` the total degree of community `c`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64, DetectionError> {
    if p.node_count() != g.node_count() {
        return Err(DetectionError::SizeMismatch {
            graph: g.node_count(),
            partition: p.node_count(),
        });
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(DetectionError::Edgeless);
    }
    let scale = 4.0 * (m as f64) * (m as f64);
    Ok(modularity_numerator(g, p) as f64 / scale)
}

/// `4 m^2 Q`, which is an integer.
pub(crate) fn modularity_numerator(g: &Graph, p: &Partition) -> i128 {
    let m = g.edge_count() as i128;
    let c = p.community_count();
    let mut internal = vec![0i128; c];
    let mut degree = vec![0i128; c];
    for u in 0..g.node_count() {
        let cu = p.community_of(u);
        degree[cu] += g.degree(u) as i128;
        internal[cu] += g
            .neighbors(u)
            .iter()
            .filter(|&&v| p.community_of(v) == cu)
            .count() as i128;
    }
    // `internal` counts each edge twice.
    (0..c)
        .map(|i| 2 * m * internal[i] - degree[i] * degree[i])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::fixtures::*;
    use crate::graph::build_graph;

    #[test]
    fn single_block_is_zero() {
        let g = two_triangles();
        assert_eq!(modularity(&g, &Partition::single_block(6)).unwrap(), 0.0);
    }

    #[test]
    fn two_triangles_value() {
        let g = two_triangles();
        let q = modularity(&g, &expected(&[0, 0, 0, 1, 1, 1])).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-15);
    }

    #[test]
    fn singletons_are_negative() {
        let g = two_k5();
        let q = modularity(&g, &Partition::singletons(10)).unwrap();
        let two_m = 2.0 * g.edge_count() as f64;
        let expect: f64 = -(0..10)
            .map(|u| (g.degree(u) as f64 / two_m).powi(2))
            .sum::<f64>();
        assert!((q - expect).abs() < 1e-15);
        assert!(q < 0.0);
    }

    #[test]
    fn edgeless_is_error() {
        let g = build_graph(3, &[]).unwrap();
        assert_eq!(
            modularity(&g, &Partition::singletons(3)),
            Err(DetectionError::Edgeless)
        );
    }
}
