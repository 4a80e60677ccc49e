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

use serde::{Deserialize, Serialize};

use super::DetectionError;
use crate::graph::{Graph, Partition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MclParams {
    pub expansion: u32,
    pub inflation: f64,
    /// Entries below this value are dropped after inflation.
    pub prune_threshold: f64,
    /// Largest entries kept per column after pruning; `None` keeps all.
    pub max_column_entries: Option<usize>,
    pub max_iterations: usize,
    /// Largest entry change between iterates at convergence.
    pub tolerance: f64,
}

impl Default for MclParams {
    fn default() -> Self {
        MclParams {
            expansion: 2,
            inflation: 2.0,
            prune_threshold: 1e-6,
            max_column_entries: None,
            max_iterations: 1000,
            tolerance: 1e-8,
        }
    }
}

impl MclParams {
    pub fn validate(&self) -> Result<(), DetectionError> {
        let bad = |name, message: &str| {
            Err(DetectionError::InvalidParameter {
                name,
                message: message.into(),
            })
        };
        if self.expansion < 2 {
            return bad("expansion", "must be at least 2");
        }
        if !(self.inflation > 1.0) || !self.inflation.is_finite() {
            return bad("inflation", "must be a finite value above 1");
        }
        if !(self.prune_threshold >= 0.0) || self.prune_threshold >= 1.0 {
            return bad("prune_threshold", "must lie in [0, 1)");
        }
        if self.max_column_entries == Some(0) {
            return bad("max_column_entries", "must keep at least one entry");
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance", "must be positive");
        }
        Ok(())
    }
}

/// Column-stochastic sparse matrix; column `j` holds the transition
/// probabilities out of node `j` as `(row, value)` pairs sorted by row.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowMatrix {
    columns: Vec<Vec<(u32, f64)>>,
}

impl FlowMatrix {
    /// Random-walk matrix of `g` with a unit self-loop on every node.
    pub fn from_graph(g: &Graph) -> Self {
        let columns = (0..g.node_count())
            .map(|j| {
                let w = 1.0 / (g.degree(j) + 1) as f64;
                let mut col: Vec<(u32, f64)> =
                    g.neighbors(j).iter().map(|&i| (i as u32, w)).collect();
                let pos = col.partition_point(|&(i, _)| (i as usize) < j);
                col.insert(pos, (j as u32, w));
                col
            })
            .collect();
        FlowMatrix { columns }
    }

    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(u32, f64)] {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let col = &self.columns[j];
        col.binary_search_by_key(&(i as u32), |&(r, _)| r)
            .map_or(0.0, |k| col[k].1)
    }

    pub fn nonzeros(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Largest deviation of a column sum from 1.
    pub fn stochastic_error(&self) -> f64 {
        self.columns
            .iter()
            .map(|c| (c.iter().map(|&(_, v)| v).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `self * other`.
    fn multiply(&self, other: &FlowMatrix) -> FlowMatrix {
        let n = self.size();
        let mut acc = vec![0.0f64; n];
        let mut mark = vec![false; n];
        let mut rows: Vec<u32> = Vec::new();
        let columns = other
            .columns
            .iter()
            .map(|col| {
                for &(k, w) in col {
                    for &(i, v) in &self.columns[k as usize] {
                        if !mark[i as usize] {
                            mark[i as usize] = true;
                            rows.push(i);
                        }
                        acc[i as usize] += w * v;
                    }
                }
                rows.sort_unstable();
                let out = rows
                    .iter()
                    .map(|&i| {
                        let v = acc[i as usize];
                        acc[i as usize] = 0.0;
                        mark[i as usize] = false;
                        (i, v)
                    })
                    .collect();
                rows.clear();
                out
            })
            .collect();
        FlowMatrix { columns }
    }

    pub fn expand(&self, power: u32) -> FlowMatrix {
        let mut out = self.clone();
        for _ in 1..power {
            out = self.multiply(&out);
        }
        out
    }

    /// Entrywise power, pruning, then column renormalization.
    pub fn inflate(&mut self, params: &MclParams) {
        for col in &mut self.columns {
            inflate_column(col, params);
        }
    }

    /// Largest absolute entry difference.
    pub fn max_difference(&self, other: &FlowMatrix) -> f64 {
        let mut worst = 0.0f64;
        for (a, b) in self.columns.iter().zip(&other.columns) {
            let (mut i, mut j) = (0, 0);
            while i < a.len() || j < b.len() {
                let ra = a.get(i).map_or(u32::MAX, |e| e.0);
                let rb = b.get(j).map_or(u32::MAX, |e| e.0);
                let d = match ra.cmp(&rb) {
                    std::cmp::Ordering::Equal => {
                        let d = a[i].1 - b[j].1;
                        i += 1;
                        j += 1;
                        d
                    }
                    std::cmp::Ordering::Less => {
                        i += 1;
                        a[i - 1].1
                    }
                    std::cmp::Ordering::Greater => {
                        j += 1;
                        b[j - 1].1
                    }
                };
                worst = worst.max(d.abs());
            }
        }
        worst
    }
}

fn inflate_column(col: &mut Vec<(u32, f64)>, params: &MclParams) {
    let mut sum = 0.0;
    for e in col.iter_mut() {
        e.1 = e.1.powf(params.inflation);
        sum += e.1;
    }
    for e in col.iter_mut() {
        e.1 /= sum;
    }
    let largest = col.iter().map(|e| e.1).fold(0.0, f64::max);
    // Never prune a column empty.
    let threshold = params.prune_threshold.min(largest);
    col.retain(|e| e.1 >= threshold);
    if let Some(cap) = params.max_column_entries {
        if col.len() > cap {
            col.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
            col.truncate(cap);
            col.sort_unstable_by_key(|e| e.0);
        }
    }
    let kept: f64 = col.iter().map(|e| e.1).sum();
    for e in col.iter_mut() {
        e.1 /= kept;
    }
}

#[derive(Debug, Clone)]
pub struct MclResult {
    pub partition: Partition,
    pub iterations: usize,
    /// Largest entry change in the final iteration.
    pub residual: f64,
    pub flow: FlowMatrix,
}

/// Alternates expansion and inflation of the flow matrix until successive
/// iterates agree within the tolerance. Communities are the connected
/// components of the nonzero pattern of the limit.
pub fn markov_cluster(g: &Graph, params: &MclParams) -> Result<MclResult, DetectionError> {
    params.validate()?;
    let mut m = FlowMatrix::from_graph(g);
    let mut residual = f64::INFINITY;
    for iteration in 1..=params.max_iterations {
        let mut next = m.expand(params.expansion);
        next.inflate(params);
        residual = next.max_difference(&m);
        m = next;
        if residual < params.tolerance {
            return Ok(MclResult {
                partition: attractor_components(&m),
                iterations: iteration,
                residual,
                flow: m,
            });
        }
    }
    Err(DetectionError::NotConverged {
        iterations: params.max_iterations,
        residual,
    })
}

fn attractor_components(m: &FlowMatrix) -> Partition {
    let n = m.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..n {
        for &(i, v) in m.column(j) {
            if v > 0.0 {
                let (a, b) = (find(&mut parent, i as usize), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|u| find(&mut parent, u)).collect();
    Partition::from_labels(&labels)
}
