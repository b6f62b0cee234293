//! Benchmark harness: runs algorithms over generated instances and writes a
//! CSV plus one SVG line plot per metric.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Deserialize;

use super::generators::{GeneratorKind, GeneratorSpec};
use super::plot::{line_plot, Series};
use crate::algorithms::{dual_benson_exact_with, filter_redundant, grid_algorithm_with, oaa_with, RunOptions};
use crate::error::{Error, Result};
use crate::numeric::{parse_rational, to_f64};
use crate::problem::{ObjectiveVector, ProblemInstance};
use crate::quality::convex_indicator;
use crate::scalarization::{Oracle, OracleKind};
use crate::Rational;

pub const CSV_SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "instance_id,n,type,algorithm,epsilon,runtime_ms,oracle_calls,solution_count,indicator,reference_count,cardinality_ratio,timeout";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmKind {
    Oaa,
    Grid,
    BensonExact,
}

impl AlgorithmKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Oaa => "oaa",
            AlgorithmKind::Grid => "grid",
            AlgorithmKind::BensonExact => "benson-exact",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "oaa" => AlgorithmKind::Oaa,
            "grid" => AlgorithmKind::Grid,
            "benson-exact" => AlgorithmKind::BensonExact,
            other => return Err(Error::Configuration(format!("unknown algorithm {other:?}"))),
        })
    }
}

/// A number written either as a TOML float or as a string such as `"1/10"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum NumberText {
    Text(String),
    Float(f64),
}

impl NumberText {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            NumberText::Text(s) => parse_rational(s),
            NumberText::Float(f) => parse_rational(&f.to_string()),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceGroup {
    pub generator: String,
    pub n: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_d")]
    pub d: usize,
    /// Oracle used by `oaa` and `grid`; defaults to greedy / christofides.
    pub oracle: Option<String>,
    /// Exact oracle for the reference and `benson-exact`; defaults to
    /// dp / held-karp.
    pub reference_oracle: Option<String>,
}

fn default_d() -> usize {
    3
}

fn default_repetitions() -> usize {
    1
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub out_dir: PathBuf,
    pub algorithms: Vec<String>,
    pub epsilons: Vec<NumberText>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// Per-run limit; an exceeded limit yields a row flagged as timeout.
    pub time_limit_ms: Option<u64>,
    /// Compute the reference set and the quality columns.
    #[serde(default = "default_true")]
    pub reference: bool,
    pub reference_time_limit_ms: Option<u64>,
    pub instances: Vec<InstanceGroup>,
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: BenchConfig =
            toml::from_str(text).map_err(|e| Error::Configuration(format!("bench config: {e}")))?;
        if config.repetitions == 0 {
            return Err(Error::Configuration("repetitions must be at least 1".into()));
        }
        Ok(config)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub instance_id: String,
    pub n: usize,
    pub problem_type: String,
    pub algorithm: AlgorithmKind,
    /// `None` for `benson-exact`, which has no accuracy parameter.
    pub epsilon: Option<Rational>,
    pub runtime_ms: f64,
    pub oracle_calls: u64,
    pub solution_count: usize,
    pub indicator: Option<Rational>,
    pub reference_count: Option<usize>,
    pub timeout: bool,
}

impl BenchRecord {
    pub fn cardinality_ratio(&self) -> Option<f64> {
        self.reference_count.map(|r| self.solution_count as f64 / r as f64)
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let (runtime, calls, count) = if self.timeout {
            (String::new(), String::new(), String::new())
        } else {
            (
                format!("{:.3}", self.runtime_ms),
                self.oracle_calls.to_string(),
                self.solution_count.to_string(),
            )
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.instance_id,
            self.n,
            self.problem_type,
            self.algorithm.name(),
            opt(self.epsilon.as_ref().map(|e| e.to_string())),
            runtime,
            calls,
            count,
            opt(self.indicator.as_ref().map(|v| format!("{:.6}", to_f64(v)))),
            opt(self.reference_count.map(|r| r.to_string())),
            opt(self.cardinality_ratio().filter(|_| !self.timeout).map(|r| format!("{r:.6}"))),
            self.timeout
        )
    }
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

struct BenchInstance {
    id: String,
    n: usize,
    kind: GeneratorKind,
    instance: ProblemInstance,
    oracle: OracleKind,
    reference_oracle: OracleKind,
}

fn oracle_or(name: &Option<String>, default: OracleKind) -> Result<OracleKind> {
    name.as_deref().map(OracleKind::parse).transpose().map(|k| k.unwrap_or(default))
}

fn build_instances(config: &BenchConfig) -> Result<Vec<BenchInstance>> {
    let mut out = Vec::new();
    for group in &config.instances {
        let kind = GeneratorKind::parse(&group.generator)?;
        let (approx, exact) = match kind {
            GeneratorKind::Tsp => (OracleKind::Christofides, OracleKind::HeldKarp),
            _ => (OracleKind::ExtendedGreedy, OracleKind::KnapsackDp),
        };
        let oracle = oracle_or(&group.oracle, approx)?;
        let reference_oracle = oracle_or(&group.reference_oracle, exact)?;
        for &n in &group.n {
            for &seed in &group.seeds {
                let spec = GeneratorSpec { kind, n, d: group.d, seed };
                out.push(BenchInstance {
                    id: format!("{}-n{}-d{}-s{}", kind.name(), n, group.d, seed),
                    n,
                    kind,
                    instance: spec.generate()?,
                    oracle,
                    reference_oracle,
                });
            }
        }
    }
    Ok(out)
}

fn options(limit_ms: Option<u64>) -> RunOptions {
    match limit_ms {
        Some(ms) => RunOptions::with_time_limit(Duration::from_millis(ms)),
        None => RunOptions::default(),
    }
}

/// Filtered exact reference set, or `None` if it timed out.
fn reference_images(b: &BenchInstance, limit_ms: Option<u64>) -> Result<Option<Vec<ObjectiveVector>>> {
    let oracle = Oracle::new(b.reference_oracle);
    match dual_benson_exact_with(&b.instance, &oracle, &options(limit_ms)) {
        Ok(sols) => {
            let kept = filter_redundant(&sols, b.instance.sense())?;
            Ok(Some(kept.into_iter().map(|s| s.image).collect()))
        }
        Err(Error::Timeout) => {
            log::warn!("reference for {} timed out; quality columns left empty", b.id);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

struct Outcome {
    images: Vec<ObjectiveVector>,
    calls: u64,
}

fn run_once(
    b: &BenchInstance,
    algorithm: AlgorithmKind,
    epsilon: Option<&Rational>,
    limit_ms: Option<u64>,
) -> Result<Option<(Outcome, Duration)>> {
    let opts = options(limit_ms);
    let start = Instant::now();
    let result = match algorithm {
        AlgorithmKind::Oaa | AlgorithmKind::Grid => {
            let oracle = Oracle::new(b.oracle);
            let eps = epsilon.expect("approximation runs carry an epsilon");
            let run = if algorithm == AlgorithmKind::Oaa {
                oaa_with(&b.instance, &oracle, eps, &opts)
            } else {
                grid_algorithm_with(&b.instance, &oracle, eps, &opts)
            };
            run.map(|r| Outcome { images: r.images(), calls: r.oracle_calls })
        }
        AlgorithmKind::BensonExact => {
            let oracle = Oracle::new(b.reference_oracle);
            dual_benson_exact_with(&b.instance, &oracle, &opts)
                .map(|s| Outcome { images: s.into_iter().map(|s| s.image).collect(), calls: oracle.calls() })
        }
    };
    match result {
        Ok(o) => Ok(Some((o, start.elapsed()))),
        Err(Error::Timeout) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run_cell(
    b: &BenchInstance,
    reference: Option<&[ObjectiveVector]>,
    algorithm: AlgorithmKind,
    epsilon: Option<&Rational>,
    config: &BenchConfig,
) -> Result<BenchRecord> {
    let mut record = BenchRecord {
        instance_id: b.id.clone(),
        n: b.n,
        problem_type: b.kind.name().to_string(),
        algorithm,
        epsilon: epsilon.cloned(),
        runtime_ms: 0.0,
        oracle_calls: 0,
        solution_count: 0,
        indicator: None,
        reference_count: reference.map(|r| r.len()),
        timeout: false,
    };
    let mut total = Duration::ZERO;
    let mut last = None;
    for _ in 0..config.repetitions {
        match run_once(b, algorithm, epsilon, config.time_limit_ms)? {
            Some((outcome, took)) => {
                total += took;
                last = Some(outcome);
            }
            None => {
                log::warn!("{} {} timed out", b.id, algorithm.name());
                record.timeout = true;
                return Ok(record);
            }
        }
    }
    let outcome = last.expect("at least one repetition");
    record.runtime_ms = total.as_secs_f64() * 1000.0 / config.repetitions as f64;
    record.oracle_calls = outcome.calls;
    record.solution_count = outcome.images.len();
    if let Some(reference) = reference {
        record.indicator = Some(convex_indicator(&outcome.images, reference, b.instance.sense())?.value);
    }
    Ok(record)
}

/// Runs every (instance, algorithm, ε) cell. Cells run concurrently; the
/// returned rows are in configuration order.
pub fn run_bench_records(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let algorithms: Vec<AlgorithmKind> =
        config.algorithms.iter().map(|a| AlgorithmKind::parse(a)).collect::<Result<_>>()?;
    let epsilons: Vec<Rational> = config.epsilons.iter().map(|e| e.to_rational()).collect::<Result<_>>()?;
    let instances = build_instances(config)?;

    let references: Vec<Option<Vec<ObjectiveVector>>> = if config.reference {
        instances
            .par_iter()
            .map(|b| reference_images(b, config.reference_time_limit_ms))
            .collect::<Result<_>>()?
    } else {
        instances.iter().map(|_| None).collect()
    };

    let mut cells = Vec::new();
    for (i, _) in instances.iter().enumerate() {
        for &alg in &algorithms {
            if alg == AlgorithmKind::BensonExact {
                cells.push((i, alg, None));
            } else {
                for e in &epsilons {
                    cells.push((i, alg, Some(e)));
                }
            }
        }
    }
    cells
        .par_iter()
        .map(|&(i, alg, eps)| run_cell(&instances[i], references[i].as_deref(), alg, eps, config))
        .collect()
}

/// Per-metric SVG plots: one series per (type, algorithm, ε), averaged over
/// the instances of each size. Timed-out rows are skipped.
pub fn plots(records: &[BenchRecord]) -> Vec<(&'static str, String)> {
    type Metric = (&'static str, &'static str, fn(&BenchRecord) -> Option<f64>);
    let metrics: [Metric; 3] = [
        ("runtime", "runtime (ms)", |r| Some(r.runtime_ms)),
        ("indicator", "convex indicator", |r| r.indicator.as_ref().map(to_f64)),
        ("cardinality", "cardinality ratio", |r| r.cardinality_ratio()),
    ];
    metrics
        .iter()
        .map(|(name, label, metric)| {
            let mut groups: BTreeMap<String, BTreeMap<usize, (f64, usize)>> = BTreeMap::new();
            for r in records.iter().filter(|r| !r.timeout) {
                if let Some(v) = metric(r) {
                    let eps = r.epsilon.as_ref().map(|e| format!(" eps={e}")).unwrap_or_default();
                    let key = format!("{} {}{}", r.problem_type, r.algorithm.name(), eps);
                    let slot = groups.entry(key).or_default().entry(r.n).or_insert((0.0, 0));
                    slot.0 += v;
                    slot.1 += 1;
                }
            }
            let series: Vec<Series> = groups
                .into_iter()
                .map(|(label, points)| Series {
                    label,
                    points: points.into_iter().map(|(n, (s, c))| (n as f64, s / c as f64)).collect(),
                })
                .collect();
            (*name, line_plot(&format!("{label} vs. n"), "n", label, &series))
        })
        .collect()
}

/// Runs the benchmark and writes `bench-v<version>.csv` and one SVG per
/// metric into `config.out_dir`. Returns the written paths.
pub fn run_bench(config: &BenchConfig) -> Result<(Vec<BenchRecord>, Vec<PathBuf>)> {
    let records = run_bench_records(config)?;
    let files = write_outputs(&records, &config.out_dir)?;
    Ok((records, files))
}

pub fn write_outputs(records: &[BenchRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let csv = dir.join(format!("bench-v{CSV_SCHEMA_VERSION}.csv"));
    std::fs::write(&csv, to_csv(records))?;
    written.push(csv);
    for (name, svg) in plots(records) {
        let path = dir.join(format!("{name}.svg"));
        std::fs::write(&path, svg)?;
        written.push(path);
    }
    Ok(written)
}
