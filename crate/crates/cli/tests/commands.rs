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

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use commbench::commands::{
    read_graph, read_partition, DetectManifest, GenerateManifest, NetworkStatistics, ReportFile,
};
use commbench::formats::parse_mu_table;
use commbench::{run, CliError};
use commbench_core::detection::Algorithm;
use commbench_core::Partition;
use serde_json::Value;
use tempfile::TempDir;

const TWO_TRIANGLES: &str =
    "# format: commbench-edges v1\n0\t1\n0\t2\n1\t2\n2\t3\n3\t4\n3\t5\n4\t5\n";

fn cli(args: &[&str]) -> Result<Value, CliError> {
    let mut all = vec!["commbench"];
    all.extend_from_slice(args);
    run(all)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn fixture(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("two.edges");
    fs::write(&path, TWO_TRIANGLES).unwrap();
    path
}

fn small_generate(dir: &Path, seed: &str) -> Value {
    cli(&[
        "generate",
        "--seed",
        seed,
        "--n",
        "300",
        "--mean-degree",
        "12",
        "--k-max",
        "40",
        "--out-dir",
        p(dir),
    ])
    .unwrap()
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn detect_two_triangles_with_louvain() {
    let dir = TempDir::new().unwrap();
    let edges = fixture(&dir);
    let out = dir.path().join("two.membership");
    let summary = cli(&[
        "detect",
        "--edges",
        p(&edges),
        "--algorithm",
        "louvain",
        "--out",
        p(&out),
    ])
    .unwrap();
    assert_eq!(summary["communities"], 2);
    let part = read_partition(&out).unwrap();
    assert_eq!(part, Partition::from_labels(&[0, 0, 0, 1, 1, 1]));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# format: commbench-membership v1\n"));
    assert!(text.contains("\n0\t0\n1\t0\n2\t0\n3\t1\n4\t1\n5\t1\n"));

    let manifest: DetectManifest = serde_json::from_str(
        &fs::read_to_string(dir.path().join("two.membership.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest.algorithm, Algorithm::Louvain);
    assert_eq!(manifest.communities, 2);
    assert_eq!(manifest.singletons, 0);
    assert!((manifest.modularity.unwrap() - 5.0 / 14.0).abs() < 1e-12);
    assert!(manifest.runtime_seconds.is_none());
}

#[test]
fn every_algorithm_round_trips_through_membership_files() {
    let dir = TempDir::new().unwrap();
    let edges = fixture(&dir);
    for alg in Algorithm::ALL {
        let out = dir.path().join(format!("{}.membership", alg.id()));
        let summary = cli(&[
            "detect",
            "--edges",
            p(&edges),
            "--algorithm",
            alg.id(),
            "--out",
            p(&out),
        ])
        .unwrap();
        let part = read_partition(&out).unwrap();
        assert_eq!(part.node_count(), 6, "{alg}");
        assert_eq!(summary["communities"], part.community_count(), "{alg}");
    }
}

#[test]
fn record_runtime_only_when_requested() {
    let dir = TempDir::new().unwrap();
    let edges = fixture(&dir);
    let out = dir.path().join("m");
    let summary = cli(&[
        "detect",
        "--edges",
        p(&edges),
        "--algorithm",
        "infomap",
        "--out",
        p(&out),
        "--record-runtime",
    ])
    .unwrap();
    assert!(summary["runtime_seconds"].as_f64().unwrap() >= 0.0);
    let manifest: DetectManifest =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.manifest.json")).unwrap())
            .unwrap();
    assert!(manifest.runtime_seconds.is_some());
    assert_eq!(manifest.codelengths.as_ref().map(Vec::len), Some(1));
}

#[test]
fn dendrogram_csv_marks_one_cut_per_component() {
    let dir = TempDir::new().unwrap();
    let edges = fixture(&dir);
    for alg in ["fast-greedy", "walktrap"] {
        let csv = dir.path().join(format!("{alg}.csv"));
        cli(&[
            "detect",
            "--edges",
            p(&edges),
            "--algorithm",
            alg,
            "--out",
            p(&dir.path().join("o")),
            "--dendrogram",
            p(&csv),
        ])
        .unwrap();
        let text = fs::read_to_string(&csv).unwrap();
        let rows: Vec<&str> = text.lines().skip(2).collect();
        assert_eq!(rows.len(), 6, "{alg}: initial state plus five merges");
        assert_eq!(rows.iter().filter(|r| r.ends_with(",true")).count(), 1);
        assert!(rows[4].ends_with(",true"), "{alg}: {text}");
    }
    let err = cli(&[
        "detect",
        "--edges",
        p(&edges),
        "--algorithm",
        "louvain",
        "--out",
        p(&dir.path().join("o")),
        "--dendrogram",
        p(&dir.path().join("x.csv")),
    ])
    .unwrap_err();
    assert_eq!(err.kind(), "usage");
}

#[test]
fn unknown_algorithm_is_rejected_in_process() {
    let dir = TempDir::new().unwrap();
    let edges = fixture(&dir);
    let err = cli(&[
        "detect",
        "--edges",
        p(&edges),
        "--algorithm",
        "girvan-newman",
        "--out",
        p(&dir.path().join("o")),
    ])
    .unwrap_err();
    let json: Value = serde_json::from_str(&err.to_json()).unwrap();
    assert_eq!(json["error"]["kind"], "unknown_algorithm");
    let valid: Vec<&str> = json["error"]["valid"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(
        valid,
        [
            "louvain",
            "fast-greedy",
            "markov-cluster",
            "infomap",
            "walktrap"
        ]
    );
    for name in valid {
        assert!(json["error"]["message"].as_str().unwrap().contains(name));
    }
}

#[test]
fn binary_reports_errors_as_json_on_stderr() {
    let dir = TempDir::new().unwrap();
    let edges = fixture(&dir);
    let output = Command::new(env!("CARGO_BIN_EXE_commbench"))
        .args([
            "detect",
            "--edges",
            p(&edges),
            "--algorithm",
            "girvan-newman",
            "--out",
        ])
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(output.stdout.is_empty());
    let err: Value = serde_json::from_slice(&output.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "unknown_algorithm");

    let output = Command::new(env!("CARGO_BIN_EXE_commbench"))
        .args([
            "detect",
            "--edges",
            p(&edges),
            "--algorithm",
            "louvain",
            "--out",
        ])
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert!(output.status.success());
    let summary: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(summary["communities"], 2);
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let err = cli(&[
        "detect",
        "--edges",
        p(&dir.path().join("nope.edges")),
        "--algorithm",
        "louvain",
        "--out",
        p(&dir.path().join("o")),
    ])
    .unwrap_err();
    assert_eq!(err.kind(), "io");
}

#[test]
fn generate_rejects_mean_degree_above_k_max() {
    let dir = TempDir::new().unwrap();
    let err = cli(&[
        "generate",
        "--seed",
        "1",
        "--n",
        "300",
        "--mean-degree",
        "50",
        "--k-max",
        "40",
        "--out-dir",
        p(dir.path()),
    ])
    .unwrap_err();
    let json: Value = serde_json::from_str(&err.to_json()).unwrap();
    assert_eq!(json["error"]["kind"], "config");
    assert!(json["error"]["message"]
        .as_str()
        .unwrap()
        .contains("mean_degree"));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn generate_requires_a_seed() {
    let dir = TempDir::new().unwrap();
    let err = cli(&["generate", "--out-dir", p(dir.path())]).unwrap_err();
    assert_eq!(err.kind(), "usage");
    let err = cli(&["bench", "--out-dir", p(dir.path())]).unwrap_err();
    assert_eq!(err.kind(), "usage");
}

#[test]
fn manifest_statistics_match_the_emitted_files() {
    let dir = TempDir::new().unwrap();
    small_generate(dir.path(), "11");
    let manifest: GenerateManifest = serde_json::from_str(
        &fs::read_to_string(dir.path().join("network.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest.config.seed, 11);
    let g = read_graph(&dir.path().join(&manifest.files.edges)).unwrap();
    let part = read_partition(&dir.path().join(&manifest.files.membership)).unwrap();
    let mu_text = fs::read_to_string(dir.path().join(&manifest.files.mu)).unwrap();
    let (target, realized) = parse_mu_table(&mu_text, Path::new("mu")).unwrap();
    let stats = NetworkStatistics::compute(&g, &part, &target, &realized);
    assert_eq!(stats.nodes, manifest.statistics.nodes);
    assert_eq!(stats.edges, manifest.statistics.edges);
    assert_eq!(stats.min_degree, manifest.statistics.min_degree);
    assert_eq!(stats.max_degree, manifest.statistics.max_degree);
    assert_eq!(stats.mean_degree, manifest.statistics.mean_degree);
    assert_eq!(stats.communities, manifest.statistics.communities);
    assert_eq!(
        stats.min_community_size,
        manifest.statistics.min_community_size
    );
    assert_eq!(
        stats.max_community_size,
        manifest.statistics.max_community_size
    );
    // The μ table is rounded to six decimals.
    assert!((stats.mean_mu_target - manifest.statistics.mean_mu_target).abs() < 1e-6);
    assert!((stats.mean_mu_realized - manifest.statistics.mean_mu_realized).abs() < 1e-6);
    assert!((stats.mean_abs_mixing_error - manifest.statistics.mean_abs_mixing_error).abs() < 1e-6);

    // Realized μ recomputed from the edge list and membership.
    for u in 0..g.node_count() {
        let k = g.degree(u) as f64;
        let ext = g
            .neighbors(u)
            .iter()
            .filter(|&&v| part.community_of(v) != part.community_of(u))
            .count();
        assert!((ext as f64 / k - realized[u]).abs() <= 5e-7);
    }
    let degree_sum: usize = g.degrees().iter().sum();
    assert_eq!(manifest.report.wiring.realized_degree_sum, degree_sum);
    assert_eq!(g.edge_count(), degree_sum / 2);
}

#[test]
fn edge_list_is_sorted_with_tab_separated_ids() {
    let dir = TempDir::new().unwrap();
    small_generate(dir.path(), "2");
    let text = fs::read_to_string(dir.path().join("network.edges")).unwrap();
    let mut prev = None;
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let (a, b) = line.split_once('\t').unwrap();
        let (u, v): (usize, usize) = (a.parse().unwrap(), b.parse().unwrap());
        assert!(u < v);
        assert!(prev < Some((u, v)));
        prev = Some((u, v));
    }
}

#[test]
fn generate_detect_analyze_are_byte_identical_on_rerun() {
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let dir = TempDir::new().unwrap();
            let d = dir.path();
            small_generate(d, "5");
            let edges = d.join("network.edges");
            for alg in Algorithm::ALL {
                cli(&[
                    "detect",
                    "--edges",
                    p(&edges),
                    "--algorithm",
                    alg.id(),
                    "--out",
                    p(&d.join(format!("{}.membership", alg.id()))),
                    "--seed",
                    "9",
                ])
                .unwrap();
            }
            cli(&[
                "analyze",
                "--edges",
                p(&edges),
                "--membership",
                p(&d.join("network.membership")),
                "--out-dir",
                p(d),
                "--name",
                "reference",
            ])
            .unwrap();
            let bytes = dir_bytes(d);
            (dir, bytes)
        })
        .collect();
    assert_eq!(runs[0].1.len(), 4 + 2 * Algorithm::ALL.len() + 3);
    assert_eq!(runs[0].1, runs[1].1);
}

#[test]
fn different_seeds_give_different_networks() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    small_generate(a.path(), "1");
    small_generate(b.path(), "2");
    assert_ne!(
        fs::read(a.path().join("network.edges")).unwrap(),
        fs::read(b.path().join("network.edges")).unwrap()
    );
}

#[test]
fn config_file_and_flags_combine() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("gen.toml");
    fs::write(
        &cfg,
        "n = 200\nmean_degree = 10.0\nk_max = 30\n[mixing]\nkind = \"constant\"\nmu = 0.2\n",
    )
    .unwrap();
    cli(&[
        "generate",
        "--config",
        p(&cfg),
        "--seed",
        "4",
        "--n",
        "250",
        "--out-dir",
        p(dir.path()),
    ])
    .unwrap();
    let manifest: GenerateManifest = serde_json::from_str(
        &fs::read_to_string(dir.path().join("network.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest.config.n, 250);
    assert_eq!(manifest.config.k_max, 30);
    assert!((manifest.statistics.mean_mu_target - 0.2).abs() < 1e-12);

    fs::write(&cfg, "n = 200\nbogus = 1\n").unwrap();
    let err = cli(&[
        "generate",
        "--config",
        p(&cfg),
        "--seed",
        "4",
        "--out-dir",
        p(dir.path()),
    ])
    .unwrap_err();
    assert_eq!(err.kind(), "config");
}

#[test]
fn analyze_two_triangles() {
    let dir = TempDir::new().unwrap();
    let edges = fixture(&dir);
    let membership = dir.path().join("two.membership");
    fs::write(
        &membership,
        "# format: commbench-membership v1\n0\t0\n1\t0\n2\t0\n3\t1\n4\t1\n5\t1\n",
    )
    .unwrap();
    cli(&[
        "analyze",
        "--edges",
        p(&edges),
        "--membership",
        p(&membership),
        "--out-dir",
        p(dir.path()),
    ])
    .unwrap();
    let text = fs::read_to_string(dir.path().join("analysis.profiles.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# format: commbench-profiles v1"));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(row[col("size")], "3");
        assert_eq!(row[col("scaled_density")].parse::<f64>().unwrap(), 3.0);
        assert_eq!(row[col("avg_distance")].parse::<f64>().unwrap(), 1.0);
        assert_eq!(row[col("hub_dominance")].parse::<f64>().unwrap(), 1.0);
        assert_eq!(row[col("undefined")], "false");
    }

    let hist = fs::read_to_string(dir.path().join("analysis.embeddedness.csv")).unwrap();
    let bins: Vec<&str> = hist.lines().skip(2).collect();
    assert_eq!(bins.len(), 20);
    let total: usize = bins
        .iter()
        .map(|b| b.split(',').nth(2).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 6);
}

#[test]
fn analyze_flags_singletons_and_leaves_them_out_of_curves() {
    let dir = TempDir::new().unwrap();
    let edges = fixture(&dir);
    let membership = dir.path().join("m");
    fs::write(&membership, "0\t0\n1\t0\n2\t0\n3\t1\n4\t1\n5\t2\n").unwrap();
    let summary = cli(&[
        "analyze",
        "--edges",
        p(&edges),
        "--membership",
        p(&membership),
        "--out-dir",
        p(dir.path()),
    ])
    .unwrap();
    assert_eq!(summary["undefined_profiles"], 1);
    let text = fs::read_to_string(dir.path().join("analysis.profiles.csv")).unwrap();
    let singleton = text.lines().find(|l| l.starts_with("2,1,")).unwrap();
    assert!(singleton.ends_with(",true"), "{singleton}");
    assert!(
        singleton.contains(",,"),
        "undefined values are left empty: {singleton}"
    );

    let curves = fs::read_to_string(dir.path().join("analysis.curves.csv")).unwrap();
    for line in curves.lines().skip(2) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields[0] == "size_distribution" {
            continue;
        }
        let (lower, upper): (f64, f64) = (fields[1].parse().unwrap(), fields[2].parse().unwrap());
        assert!(
            !(lower <= 1.0 && upper > 1.0),
            "singleton bin present: {line}"
        );
    }
}

#[test]
fn curve_bins_are_geometric_and_contiguous() {
    let dir = TempDir::new().unwrap();
    small_generate(dir.path(), "8");
    cli(&[
        "analyze",
        "--edges",
        p(&dir.path().join("network.edges")),
        "--membership",
        p(&dir.path().join("network.membership")),
        "--out-dir",
        p(dir.path()),
        "--bins-per-decade",
        "4",
    ])
    .unwrap();
    let text = fs::read_to_string(dir.path().join("analysis.curves.csv")).unwrap();
    let ratio = 10f64.powf(0.25);
    let mut by_property: std::collections::BTreeMap<&str, Vec<(f64, f64)>> = Default::default();
    for line in text.lines().skip(2) {
        let f: Vec<&str> = line.split(',').collect();
        by_property
            .entry(f[0])
            .or_default()
            .push((f[1].parse().unwrap(), f[2].parse().unwrap()));
    }
    assert_eq!(by_property.len(), 4);
    for (property, bins) in by_property {
        for (lo, hi) in &bins {
            assert!((hi / lo - ratio).abs() < 1e-9, "{property}");
            let j = (lo.log10() * 4.0).round();
            assert!(
                (lo.log10() * 4.0 - j).abs() < 1e-9,
                "{property}: edge {lo} off the grid"
            );
        }
        for w in bins.windows(2) {
            assert!(w[0].1 <= w[1].0 * (1.0 + 1e-12), "{property}: bins overlap");
        }
        let first = bins.first().unwrap().0;
        let last = bins.last().unwrap().1;
        let expected = ((last / first).log10() * 4.0).round() as usize;
        assert_eq!(
            bins.len(),
            expected,
            "{property}: populated range must be contiguous"
        );
    }
}

#[test]
fn analyze_rejects_node_mismatch() {
    let dir = TempDir::new().unwrap();
    let edges = fixture(&dir);
    let membership = dir.path().join("m");
    fs::write(&membership, "0\t0\n1\t0\n2\t0\n").unwrap();
    let err = cli(&[
        "analyze",
        "--edges",
        p(&edges),
        "--membership",
        p(&membership),
        "--out-dir",
        p(dir.path()),
    ])
    .unwrap_err();
    assert_eq!(err.kind(), "node_mismatch");
}

#[test]
fn bench_small_config() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bench.toml");
    fs::write(
        &cfg,
        "instances = 2\n[[generators]]\nn = 200\nmean_degree = 10.0\nk_max = 30\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let summary = cli(&[
        "bench",
        "--config",
        p(&cfg),
        "--seed",
        "3",
        "--out-dir",
        p(&out),
    ])
    .unwrap();
    assert!(summary["failures"].as_array().unwrap().is_empty());

    let table = fs::read_to_string(out.join("nmi_table.csv")).unwrap();
    let header = table.lines().nth(1).unwrap();
    assert_eq!(
        header,
        "config,n,instances,louvain,fast-greedy,markov-cluster,infomap,walktrap"
    );

    let summary_csv = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary_csv.lines().skip(2).count(), 5);

    let text = fs::read_to_string(out.join("report.json")).unwrap();
    let file: ReportFile = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&file).unwrap() + "\n", text);
    let run = &file.report.configs[0];
    assert_eq!(run.cells.len(), 10);
    // Means are recomputable from the per-cell values.
    for s in &run.summaries {
        let values: Vec<f64> = run
            .cells
            .iter()
            .filter(|c| c.algorithm == s.algorithm)
            .filter_map(|c| c.nmi)
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        assert!((s.nmi_mean.unwrap() - mean).abs() < 1e-12);
    }

    let curves = fs::read_to_string(out.join("curves.csv")).unwrap();
    assert!(curves.lines().nth(1).unwrap().starts_with("source,"));
    assert!(curves.contains("\n0:reference,"));
    assert!(curves.contains("\n0:walktrap,"));
}

#[test]
fn bench_flags_and_determinism() {
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let dir = TempDir::new().unwrap();
            let cfg = dir.path().join("bench.json");
            fs::write(
                &cfg,
                r#"{"generators": [{"n": 150, "mean_degree": 8.0, "k_max": 25}]}"#,
            )
            .unwrap();
            let out = dir.path().join("out");
            cli(&[
                "bench",
                "--config",
                p(&cfg),
                "--seed",
                "12",
                "--instances",
                "1",
                "--algorithms",
                "infomap,louvain",
                "--out-dir",
                p(&out),
            ])
            .unwrap();
            let bytes = dir_bytes(&out);
            (dir, bytes)
        })
        .collect();
    assert_eq!(runs[0].1, runs[1].1);
    let table = &runs[0]
        .1
        .iter()
        .find(|(n, _)| n == "nmi_table.csv")
        .unwrap()
        .1;
    let table = String::from_utf8_lossy(table);
    assert_eq!(
        table.lines().nth(1).unwrap(),
        "config,n,instances,louvain,infomap"
    );

    let dir = TempDir::new().unwrap();
    let err = cli(&[
        "bench",
        "--seed",
        "1",
        "--algorithms",
        "louvain,spectral",
        "--out-dir",
        p(dir.path()),
    ])
    .unwrap_err();
    assert_eq!(err.kind(), "unknown_algorithm");
}
