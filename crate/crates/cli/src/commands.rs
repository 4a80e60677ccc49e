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

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use commbench_core::detection::{
    fast_greedy, infomap_with_trials, louvain, markov_cluster, modularity, walktrap, Algorithm,
    ComponentDendrogram, DetectionParams, MclParams,
};
use commbench_core::evaluation::{
    curve_set, run_benchmark, AlgorithmSummary, BenchmarkReport, CurveSet,
};
use commbench_core::generator::{generate, GenerationReport, GeneratorConfig};
use commbench_core::metrics::{profile_partition_with, DistanceMode, DEFAULT_BINS_PER_DECADE};
use commbench_core::{Graph, Partition};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{bench_config, generator_config};
use crate::error::CliError;
use crate::formats::*;

#[derive(Debug, Parser)]
#[command(
    name = "commbench",
    version,
    about = "Benchmark networks with heterogeneous mixing and community detection scoring"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a network with a planted community structure.
    Generate(GenerateArgs),
    /// Run one detection algorithm on an edge list.
    Detect(DetectArgs),
    /// Profile the communities of a membership file.
    Analyze(AnalyzeArgs),
    /// Generate instances, run the algorithms and score them.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// TOML or JSON generator configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Base name of the output files.
    #[arg(long, default_value = "network")]
    pub name: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub mean_degree: Option<f64>,
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Degree exponent.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Community size exponent.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Same mixing coefficient for every node.
    #[arg(long, conflicts_with_all = ["mu_min", "mu_max"])]
    pub mu: Option<f64>,
    /// Uniform mixing between --mu-min and --mu-max.
    #[arg(long, requires = "mu_max")]
    pub mu_min: Option<f64>,
    #[arg(long, requires = "mu_min")]
    pub mu_max: Option<f64>,
    /// configuration-model or preferential-attachment.
    #[arg(long)]
    pub wiring: Option<String>,
    #[arg(long, requires = "max_size")]
    pub min_size: Option<usize>,
    #[arg(long, requires = "min_size")]
    pub max_size: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub edges: PathBuf,
    /// louvain, fast-greedy, markov-cluster, infomap or walktrap.
    #[arg(long)]
    pub algorithm: String,
    /// Membership output file.
    #[arg(long)]
    pub out: PathBuf,
    /// Run manifest; defaults to the output path with `.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Modularity after every merge, for fast-greedy and walktrap.
    #[arg(long)]
    pub dendrogram: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub walk_length: usize,
    #[arg(long, default_value_t = 2)]
    pub expansion: u32,
    #[arg(long, default_value_t = 2.0)]
    pub inflation: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub prune: f64,
    #[arg(long)]
    pub max_column_entries: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Store the wall-clock runtime in the manifest.
    #[arg(long)]
    pub record_runtime: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub membership: PathBuf,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, default_value = "analysis")]
    pub name: String,
    #[arg(long, default_value_t = DEFAULT_BINS_PER_DECADE)]
    pub bins_per_decade: usize,
    /// Sample BFS sources in communities larger than this.
    #[arg(long)]
    pub distance_sample_above: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub distance_sources: usize,
    #[arg(long, default_value_t = 0)]
    pub distance_seed: u64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// TOML or JSON benchmark configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub instances: Option<usize>,
    /// Comma-separated algorithm list.
    #[arg(long, value_delimiter = ',')]
    pub algorithms: Option<Vec<String>>,
    /// Override the node count of every generator.
    #[arg(long)]
    pub n: Option<usize>,
    /// Override the maximum degree of every generator.
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub record_runtime: bool,
}

/// Parses arguments and runs the command. Returns the summary printed on
/// stdout.
pub fn run<I, T>(args: I) -> Result<Value, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Detect(a) => cmd_detect(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    parse_edge_list(&read_file(path)?, path)
}

pub fn read_partition(path: &Path) -> Result<Partition, CliError> {
    parse_membership(&read_file(path)?, path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStatistics {
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub min_degree: usize,
    pub max_degree: usize,
    pub communities: usize,
    pub min_community_size: usize,
    pub max_community_size: usize,
    pub mean_mu_target: f64,
    pub mean_mu_realized: f64,
    pub mean_abs_mixing_error: f64,
}

impl NetworkStatistics {
    pub fn compute(g: &Graph, p: &Partition, target: &[f64], realized: &[f64]) -> Self {
        let n = g.node_count().max(1) as f64;
        let sizes = p.sizes();
        NetworkStatistics {
            nodes: g.node_count(),
            edges: g.edge_count(),
            mean_degree: g.mean_degree(),
            min_degree: g.degrees().into_iter().min().unwrap_or(0),
            max_degree: g.max_degree(),
            communities: p.community_count(),
            min_community_size: sizes.iter().copied().min().unwrap_or(0),
            max_community_size: sizes.iter().copied().max().unwrap_or(0),
            mean_mu_target: target.iter().sum::<f64>() / n,
            mean_mu_realized: realized.iter().sum::<f64>() / n,
            mean_abs_mixing_error: target
                .iter()
                .zip(realized)
                .map(|(t, r)| (t - r).abs())
                .sum::<f64>()
                / n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateManifest {
    pub format: String,
    pub version: u32,
    pub config: GeneratorConfig,
    pub files: GeneratedFiles,
    pub statistics: NetworkStatistics,
    pub report: GenerationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedFiles {
    pub edges: String,
    pub membership: String,
    pub mu: String,
}

pub const GENERATE_MANIFEST: &str = "commbench-generate-manifest";
pub const DETECT_MANIFEST: &str = "commbench-detect-manifest";
pub const REPORT: &str = "commbench-report";

fn cmd_generate(a: &GenerateArgs) -> Result<Value, CliError> {
    let mut overrides: Vec<(&'static str, Value)> = Vec::new();
    if let Some(v) = a.n {
        overrides.push(("n", json!(v)));
    }
    if let Some(v) = a.mean_degree {
        overrides.push(("mean_degree", json!(v)));
    }
    if let Some(v) = a.k_max {
        overrides.push(("k_max", json!(v)));
    }
    if let Some(v) = a.gamma {
        overrides.push(("gamma", json!(v)));
    }
    if let Some(v) = a.beta {
        overrides.push(("beta", json!(v)));
    }
    if let Some(mu) = a.mu {
        overrides.push(("mixing", json!({"kind": "constant", "mu": mu})));
    }
    if let (Some(low), Some(high)) = (a.mu_min, a.mu_max) {
        overrides.push((
            "mixing",
            json!({"kind": "uniform", "low": low, "high": high}),
        ));
    }
    if let Some(w) = &a.wiring {
        overrides.push(("wiring", json!(w)));
    }
    if let (Some(lo), Some(hi)) = (a.min_size, a.max_size) {
        overrides.push(("size_bounds", json!([lo, hi])));
    }
    let cfg = generator_config(a.config.as_deref(), overrides, a.seed)?;
    let net = generate(&cfg)?;

    let files = GeneratedFiles {
        edges: format!("{}.edges", a.name),
        membership: format!("{}.membership", a.name),
        mu: format!("{}.mu", a.name),
    };
    write_file(&a.out_dir.join(&files.edges), &write_edge_list(&net.graph))?;
    write_file(
        &a.out_dir.join(&files.membership),
        &write_membership(&net.reference),
    )?;
    write_file(
        &a.out_dir.join(&files.mu),
        &write_mu_table(&net.mu_target, &net.mu_realized),
    )?;
    let statistics =
        NetworkStatistics::compute(&net.graph, &net.reference, &net.mu_target, &net.mu_realized);
    let manifest = GenerateManifest {
        format: GENERATE_MANIFEST.into(),
        version: FORMAT_VERSION,
        config: cfg,
        files,
        statistics,
        report: net.report,
    };
    let manifest_path = a.out_dir.join(format!("{}.manifest.json", a.name));
    write_file(&manifest_path, &to_json(&manifest))?;
    Ok(json!({
        "command": "generate",
        "manifest": manifest_path.display().to_string(),
        "nodes": manifest.statistics.nodes,
        "edges": manifest.statistics.edges,
        "communities": manifest.statistics.communities,
        "mean_abs_mixing_error": manifest.statistics.mean_abs_mixing_error,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectManifest {
    pub format: String,
    pub version: u32,
    pub algorithm: Algorithm,
    pub input: String,
    pub output: String,
    pub parameters: DetectionParams,
    pub nodes: usize,
    pub edges: usize,
    pub communities: usize,
    pub singletons: usize,
    pub largest_community: usize,
    pub modularity: Option<f64>,
    /// InfoMap codelength per connected component, in bits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codelengths: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

fn dendrogram_csv(runs: &[ComponentDendrogram]) -> String {
    let mut out = header("commbench-dendrogram");
    out.push_str("component,merges,a,b,modularity,chosen\n");
    for (c, run) in runs.iter().enumerate() {
        let d = &run.dendrogram;
        let _ = writeln!(out, "{c},0,,,{},{}", d.initial_objective, d.cut == 0);
        for (k, m) in d.merges.iter().enumerate() {
            // Leaf ids are mapped back to graph nodes; merged ids stay local.
            let id = |x: usize| {
                if x < run.nodes.len() {
                    format!("node:{}", run.nodes[x])
                } else {
                    format!("merge:{}", x - run.nodes.len())
                }
            };
            let _ = writeln!(
                out,
                "{c},{},{},{},{},{}",
                k + 1,
                id(m.a),
                id(m.b),
                m.objective,
                d.cut == k + 1
            );
        }
    }
    out
}

fn cmd_detect(a: &DetectArgs) -> Result<Value, CliError> {
    let algorithm: Algorithm = a.algorithm.parse()?;
    let g = read_graph(&a.edges)?;
    let params = DetectionParams {
        walktrap_steps: a.walk_length,
        mcl: MclParams {
            expansion: a.expansion,
            inflation: a.inflation,
            prune_threshold: a.prune,
            max_column_entries: a.max_column_entries,
            max_iterations: a.max_iterations,
            ..MclParams::default()
        },
        infomap_trials: a.trials,
        seed: a.seed,
    };
    let start = Instant::now();
    let mut codelengths = None;
    let mut dendrograms = None;
    let partition = match algorithm {
        Algorithm::Louvain => louvain(&g).partition,
        Algorithm::FastGreedy => {
            let (p, d) = fast_greedy(&g);
            dendrograms = Some(d);
            p
        }
        Algorithm::Walktrap => {
            let (p, d) = walktrap(&g, params.walktrap_steps)?;
            dendrograms = Some(d);
            p
        }
        Algorithm::MarkovCluster => markov_cluster(&g, &params.mcl)?.partition,
        Algorithm::InfoMap => {
            let r = infomap_with_trials(&g, params.seed, params.infomap_trials)?;
            codelengths = Some(r.codelengths);
            r.partition
        }
    };
    let runtime = start.elapsed().as_secs_f64();

    write_file(&a.out, &write_membership(&partition))?;
    if let Some(path) = &a.dendrogram {
        let runs = dendrograms.as_deref().ok_or_else(|| {
            CliError::Usage(format!("--dendrogram is not available for {algorithm}"))
        })?;
        write_file(path, &dendrogram_csv(runs))?;
    }
    let manifest = DetectManifest {
        format: DETECT_MANIFEST.into(),
        version: FORMAT_VERSION,
        algorithm,
        input: file_name(&a.edges),
        output: file_name(&a.out),
        parameters: params,
        nodes: g.node_count(),
        edges: g.edge_count(),
        communities: partition.community_count(),
        singletons: partition.singleton_count(),
        largest_community: partition.sizes().into_iter().max().unwrap_or(0),
        modularity: modularity(&g, &partition).ok(),
        codelengths,
        runtime_seconds: a.record_runtime.then_some(runtime),
    };
    let manifest_path = a.manifest.clone().unwrap_or_else(|| {
        let mut s = a.out.clone().into_os_string();
        s.push(".manifest.json");
        PathBuf::from(s)
    });
    write_file(&manifest_path, &to_json(&manifest))?;
    Ok(json!({
        "command": "detect",
        "algorithm": algorithm.id(),
        "communities": manifest.communities,
        "singletons": manifest.singletons,
        "modularity": manifest.modularity,
        "runtime_seconds": runtime,
    }))
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<Value, CliError> {
    if a.bins_per_decade == 0 {
        return Err(CliError::Usage(
            "--bins-per-decade must be at least 1".into(),
        ));
    }
    let g = read_graph(&a.edges)?;
    let p = read_partition(&a.membership)?;
    if p.node_count() != g.node_count() {
        return Err(CliError::NodeMismatch {
            network: g.node_count(),
            membership: p.node_count(),
        });
    }
    let mode = match a.distance_sample_above {
        Some(threshold) => DistanceMode::Sampled {
            threshold,
            sources: a.distance_sources,
            seed: a.distance_seed,
        },
        None => DistanceMode::Exact,
    };
    let profile = profile_partition_with(&g, &p, mode);
    let embeddedness: Vec<f64> = profile.embeddedness.iter().flatten().copied().collect();
    let curves = curve_set(&profile.communities, &embeddedness, a.bins_per_decade);

    let profiles_path = a.out_dir.join(format!("{}.profiles.csv", a.name));
    let curves_path = a.out_dir.join(format!("{}.curves.csv", a.name));
    let histogram_path = a.out_dir.join(format!("{}.embeddedness.csv", a.name));
    write_file(&profiles_path, &write_profiles_csv(&profile))?;
    write_file(&curves_path, &write_curves_csv(&[("", &curves)]))?;
    write_file(&histogram_path, &write_histogram_csv(&curves.embeddedness))?;
    Ok(json!({
        "command": "analyze",
        "communities": p.community_count(),
        "undefined_profiles": profile.communities.iter().filter(|c| c.is_singleton()).count(),
        "profiles": profiles_path.display().to_string(),
        "curves": curves_path.display().to_string(),
        "embeddedness": histogram_path.display().to_string(),
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub format: String,
    pub version: u32,
    pub report: BenchmarkReport,
}

/// Algorithms in the canonical table order.
fn table_order(selected: &[Algorithm]) -> Vec<Algorithm> {
    Algorithm::ALL
        .into_iter()
        .filter(|a| selected.contains(a))
        .collect()
}

fn summary_csv(report: &BenchmarkReport) -> String {
    let mut out = header("commbench-summary");
    out.push_str(
        "config,algorithm,runs,failures,nmi_mean,nmi_std,mean_communities,mean_singletons\n",
    );
    for (i, run) in report.configs.iter().enumerate() {
        let mut rows: Vec<&AlgorithmSummary> = run.summaries.iter().collect();
        rows.sort_by_key(|s| s.algorithm);
        for s in rows {
            let _ = writeln!(
                out,
                "{i},{},{},{},{},{},{},{}",
                s.algorithm.id(),
                s.runs,
                s.failures,
                csv_float(s.nmi_mean),
                csv_float(s.nmi_std),
                csv_float(s.mean_communities),
                csv_float(s.mean_singletons)
            );
        }
    }
    out
}

/// Mean NMI with one column per algorithm, in table order.
fn nmi_table_csv(report: &BenchmarkReport, algorithms: &[Algorithm]) -> String {
    let order = table_order(algorithms);
    let mut out = header("commbench-nmi-table");
    out.push_str("config,n,instances");
    for a in &order {
        let _ = write!(out, ",{}", a.id());
    }
    out.push('\n');
    for (i, run) in report.configs.iter().enumerate() {
        let _ = write!(out, "{i},{},{}", run.generator.n, run.instances.len());
        for a in &order {
            let mean = run
                .summaries
                .iter()
                .find(|s| s.algorithm == *a)
                .and_then(|s| s.nmi_mean);
            let _ = write!(out, ",{}", csv_float(mean));
        }
        out.push('\n');
    }
    out
}

fn cells_csv(report: &BenchmarkReport) -> String {
    let mut out = header("commbench-cells");
    out.push_str(
        "config,instance,seed,algorithm,nmi,communities,singletons,runtime_seconds,error\n",
    );
    for (i, run) in report.configs.iter().enumerate() {
        for c in &run.cells {
            let error = c
                .error
                .as_deref()
                .map(|e| format!("\"{}\"", e.replace('"', "\"\"")))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{i},{},{},{},{},{},{},{},{}",
                c.instance,
                c.seed,
                c.algorithm.id(),
                csv_float(c.nmi),
                c.communities.map(|x| x.to_string()).unwrap_or_default(),
                c.singletons.map(|x| x.to_string()).unwrap_or_default(),
                csv_float(c.runtime_seconds),
                error
            );
        }
    }
    out
}

fn bench_curves(report: &BenchmarkReport) -> (String, String) {
    let mut labelled: Vec<(String, &CurveSet)> = Vec::new();
    for (i, run) in report.configs.iter().enumerate() {
        labelled.push((format!("{i}:reference"), &run.reference_curves));
        let mut algs: Vec<_> = run.algorithm_curves.iter().collect();
        algs.sort_by_key(|c| c.algorithm);
        for c in algs {
            labelled.push((format!("{i}:{}", c.algorithm.id()), &c.curves));
        }
    }
    let refs: Vec<(&str, &CurveSet)> = labelled.iter().map(|(l, c)| (l.as_str(), *c)).collect();
    let curves = write_curves_csv(&refs);
    let mut hist = header(HISTOGRAM);
    hist.push_str("source,bin_lower,bin_upper,count,fraction\n");
    for (label, set) in &refs {
        for b in &set.embeddedness {
            let _ = writeln!(
                hist,
                "{label},{},{},{},{}",
                b.lower, b.upper, b.count, b.fraction
            );
        }
    }
    (curves, hist)
}

fn cmd_bench(a: &BenchArgs) -> Result<Value, CliError> {
    let mut overrides: Vec<(&'static str, Value)> = Vec::new();
    if let Some(i) = a.instances {
        overrides.push(("instances", json!(i)));
    }
    if let Some(list) = &a.algorithms {
        let parsed = list
            .iter()
            .map(|s| s.trim().parse::<Algorithm>())
            .collect::<Result<Vec<_>, _>>()?;
        overrides.push(("algorithms", json!(parsed)));
    }
    if a.record_runtime {
        overrides.push(("record_runtime", json!(true)));
    }
    let mut generator_overrides = Vec::new();
    if let Some(n) = a.n {
        generator_overrides.push(("n", json!(n)));
    }
    if let Some(k) = a.k_max {
        generator_overrides.push(("k_max", json!(k)));
    }
    let cfg = bench_config(a.config.as_deref(), overrides, generator_overrides, a.seed)?;
    let report = run_benchmark(&cfg)?;

    let file = ReportFile {
        format: REPORT.into(),
        version: FORMAT_VERSION,
        report,
    };
    let report = &file.report;
    write_file(&a.out_dir.join("report.json"), &to_json(&file))?;
    write_file(&a.out_dir.join("cells.csv"), &cells_csv(report))?;
    write_file(&a.out_dir.join("summary.csv"), &summary_csv(report))?;
    write_file(
        &a.out_dir.join("nmi_table.csv"),
        &nmi_table_csv(report, &cfg.algorithms),
    )?;
    let (curves, hist) = bench_curves(report);
    write_file(&a.out_dir.join("curves.csv"), &curves)?;
    write_file(&a.out_dir.join("embeddedness.csv"), &hist)?;

    let failures: Vec<Value> = report
        .configs
        .iter()
        .enumerate()
        .flat_map(|(i, run)| {
            run.cells.iter().filter_map(move |c| {
                c.error.as_ref().map(|e| {
                    json!({"config": i, "instance": c.instance, "algorithm": c.algorithm.id(), "error": e})
                })
            })
        })
        .collect();
    let nmi: Vec<Value> = report
        .configs
        .iter()
        .map(|run| {
            let mut m = serde_json::Map::new();
            for a in table_order(&cfg.algorithms) {
                let mean = run
                    .summaries
                    .iter()
                    .find(|s| s.algorithm == a)
                    .and_then(|s| s.nmi_mean);
                m.insert(a.id().into(), json!(mean));
            }
            Value::Object(m)
        })
        .collect();
    Ok(json!({
        "command": "bench",
        "out_dir": a.out_dir.display().to_string(),
        "mean_nmi": nmi,
        "failures": failures,
    }))
}
