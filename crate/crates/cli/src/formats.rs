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

//! Text formats. Every file opens with a `# format: <name> v<version>`
//! line; other `#` lines carry metadata and are skipped by readers except
//! where noted. Output is byte-for-byte determined by its inputs.

use std::fmt::Write;
use std::path::Path;

use commbench_core::evaluation::CurveSet;
use commbench_core::metrics::{BinnedCurve, HistogramBin, PartitionProfile};
use commbench_core::{build_graph, Graph, Partition};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;
pub const EDGE_LIST: &str = "commbench-edges";
pub const MEMBERSHIP: &str = "commbench-membership";
pub const MU_TABLE: &str = "commbench-mu";

pub fn header(name: &str) -> String {
    format!("# format: {name} v{FORMAT_VERSION}\n")
}

/// Edges as `u<TAB>v` with `u < v`, sorted; `# nodes:` records isolated
/// trailing nodes.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = header(EDGE_LIST);
    let _ = writeln!(out, "# nodes: {}", g.node_count());
    let _ = writeln!(out, "# edges: {}", g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u}\t{v}");
    }
    out
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads `# key: value` metadata from a comment line.
fn metadata<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.strip_prefix('#')?
        .trim()
        .strip_prefix(key)?
        .strip_prefix(':')
        .map(str::trim)
}

fn parse_id(field: &str, path: &Path, line: usize) -> Result<usize, CliError> {
    field
        .trim()
        .parse()
        .map_err(|_| parse_error(path, line, format!("expected a node id, found '{field}'")))
}

/// Accepts tab- or whitespace-separated pairs in any order; the node count
/// comes from `# nodes:` when present, otherwise from the largest id.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<Graph, CliError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if let Some(v) = metadata(trimmed, "nodes") {
                declared = Some(parse_id(v, path, lineno)?);
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_error(path, lineno, "expected two node ids per line"));
        }
        let u = parse_id(fields[0], path, lineno)?;
        let v = parse_id(fields[1], path, lineno)?;
        edges.push((u.min(v), u.max(v)));
    }
    let n = declared.unwrap_or_else(|| edges.iter().map(|&(_, v)| v + 1).max().unwrap_or(0));
    Ok(build_graph(n, &edges)?)
}

pub fn write_membership(p: &Partition) -> String {
    let mut out = header(MEMBERSHIP);
    let _ = writeln!(out, "# nodes: {}", p.node_count());
    let _ = writeln!(out, "# communities: {}", p.community_count());
    for (u, c) in p.membership().iter().enumerate() {
        let _ = writeln!(out, "{u}\t{c}");
    }
    out
}

/// Every node `0..n` must appear exactly once; labels may be arbitrary
/// integers and are renumbered canonically.
pub fn parse_membership(text: &str, path: &Path) -> Result<Partition, CliError> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_error(path, lineno, "expected 'node<TAB>community'"));
        }
        pairs.push((
            parse_id(fields[0], path, lineno)?,
            parse_id(fields[1], path, lineno)?,
            lineno,
        ));
    }
    let n = pairs.len();
    let mut labels = vec![None; n];
    for &(u, c, lineno) in &pairs {
        if u >= n {
            return Err(parse_error(
                path,
                lineno,
                format!("node {u} out of range for {n} nodes"),
            ));
        }
        if labels[u].replace(c).is_some() {
            return Err(parse_error(path, lineno, format!("node {u} listed twice")));
        }
    }
    let labels: Vec<usize> = labels
        .into_iter()
        .map(|l| l.expect("all nodes present"))
        .collect();
    Ok(Partition::from_labels(&labels))
}

pub fn write_mu_table(target: &[f64], realized: &[f64]) -> String {
    let mut out = header(MU_TABLE);
    out.push_str("# columns: node mu_target mu_realized\n");
    for (u, (t, r)) in target.iter().zip(realized).enumerate() {
        let _ = writeln!(out, "{u}\t{t:.6}\t{r:.6}");
    }
    out
}

/// Parses the μ table back into `(target, realized)` columns.
pub fn parse_mu_table(text: &str, path: &Path) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let (mut target, mut realized) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        let value = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| parse_error(path, i + 1, format!("expected a number, found '{s}'")))
        };
        if fields.len() != 3 || parse_id(fields[0], path, i + 1)? != target.len() {
            return Err(parse_error(
                path,
                i + 1,
                "expected 'node<TAB>mu_target<TAB>mu_realized'",
            ));
        }
        target.push(value(fields[1])?);
        realized.push(value(fields[2])?);
    }
    Ok((target, realized))
}

/// Optional float as a CSV field; undefined values are left empty.
pub fn csv_float(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const PROFILES: &str = "commbench-profiles";
pub const CURVES: &str = "commbench-curves";
pub const HISTOGRAM: &str = "commbench-embeddedness";

pub fn write_profiles_csv(profile: &PartitionProfile) -> String {
    let mut out = header(PROFILES);
    out.push_str("community,size,internal_edges,density,scaled_density,avg_distance,hub_dominance,internally_connected,undefined\n");
    for c in &profile.communities {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            c.community,
            c.size,
            c.internal_edges,
            csv_float(c.density),
            csv_float(c.scaled_density),
            csv_float(c.avg_distance),
            csv_float(c.hub_dominance),
            c.internally_connected,
            c.is_singleton()
        );
    }
    out
}

pub fn curve_rows(out: &mut String, prefix: &str, property: &str, curve: &BinnedCurve) {
    for b in &curve.bins {
        let _ = writeln!(
            out,
            "{prefix}{property},{},{},{},{}",
            b.lower, b.upper, b.mean, b.count
        );
    }
}

/// One row per (property, bin) of a curve set.
pub fn write_curves_csv(curves: &[(&str, &CurveSet)]) -> String {
    let mut out = header(CURVES);
    let labelled = curves.iter().any(|(label, _)| !label.is_empty());
    if labelled {
        out.push_str("source,");
    }
    out.push_str("property,bin_lower,bin_upper,mean,count\n");
    for (label, set) in curves {
        let prefix = if labelled {
            format!("{label},")
        } else {
            String::new()
        };
        curve_rows(
            &mut out,
            &prefix,
            "size_distribution",
            &set.size_distribution,
        );
        curve_rows(&mut out, &prefix, "scaled_density", &set.scaled_density);
        curve_rows(&mut out, &prefix, "average_distance", &set.average_distance);
        curve_rows(&mut out, &prefix, "hub_dominance", &set.hub_dominance);
    }
    out
}

pub fn write_histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = header(HISTOGRAM);
    out.push_str("bin_lower,bin_upper,count,fraction\n");
    for b in bins {
        let _ = writeln!(out, "{},{},{},{}", b.lower, b.upper, b.count, b.fraction);
    }
    out
}
