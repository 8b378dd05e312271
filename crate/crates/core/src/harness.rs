//! Evaluation harness: algorithm dispatch, comparison tables against
//! published reference values, and the synthetic scaling benchmark.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::baselines::{greedy_modularity, lpa, DEFAULT_LPA_ITERATIONS};
use crate::error::{Error, Result};
use crate::generate::PlantedPartition;
use crate::graph::Graph;
use crate::metrics::{modularity, nmi};
use crate::ncb::detect;
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Ncb,
    Lpa,
    GreedyModularity,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Ncb, Algorithm::Lpa, Algorithm::GreedyModularity];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ncb => "ncb",
            Algorithm::Lpa => "lpa",
            Algorithm::GreedyModularity => "greedy-modularity",
        }
    }

    pub fn is_randomized(self) -> bool {
        self == Algorithm::Lpa
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

/// Runs one algorithm and measures wall-clock time. `seed` only affects LPA.
pub fn run(algorithm: Algorithm, g: &Graph, seed: u64) -> Result<(Partition, Duration)> {
    let start = Instant::now();
    let p = match algorithm {
        Algorithm::Ncb => detect(g)?,
        Algorithm::Lpa => lpa(g, seed, DEFAULT_LPA_ITERATIONS)?,
        Algorithm::GreedyModularity => greedy_modularity(g)?,
    };
    Ok((p, start.elapsed()))
}

/// Mean with observed range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Spread {
    pub fn exact(x: f64) -> Self {
        Spread {
            mean: x,
            min: x,
            max: x,
        }
    }

    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Some(Spread { mean, min, max })
    }

    pub fn is_exact(&self) -> bool {
        self.min == self.max
    }

    fn render(&self, decimals: usize) -> String {
        if self.is_exact() {
            format!("{:.*}", decimals, self.mean)
        } else {
            format!(
                "{:.d$}[{:.d$},{:.d$}]",
                self.mean,
                self.min,
                self.max,
                d = decimals
            )
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Run,
    Published,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Run => "run",
            Source::Published => "published",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub algorithm: String,
    pub source: Source,
    pub modularity: Spread,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub communities: Option<Spread>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_s: Option<f64>,
}

pub const COMPARISON_CSV_HEADER: &str = "algorithm,source,modularity,nmi,communities,time_s";

impl ComparisonRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.algorithm,
            self.source,
            self.modularity.render(3),
            self.nmi.map(|x| format!("{x:.3}")).unwrap_or_default(),
            self.communities
                .map(|c| if c.is_exact() {
                    format!("{}", c.mean)
                } else {
                    c.render(1)
                })
                .unwrap_or_default(),
            self.time_s.map(|t| format!("{t:.2}")).unwrap_or_default(),
        )
    }
}

pub fn write_comparison_csv<W: Write>(rows: &[ComparisonRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{COMPARISON_CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

pub fn write_comparison_json<W: Write>(rows: &[ComparisonRow], out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(out, rows).map_err(std::io::Error::other)
}

/// Reference numbers reported for the benchmark networks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedResult {
    pub algorithm: &'static str,
    pub dataset: &'static str,
    pub modularity: Spread,
    pub communities: Option<usize>,
    pub time_s: Option<f64>,
}

const fn published(
    algorithm: &'static str,
    dataset: &'static str,
    q: f64,
    communities: Option<usize>,
    time_s: Option<f64>,
) -> PublishedResult {
    PublishedResult {
        algorithm,
        dataset,
        modularity: Spread {
            mean: q,
            min: q,
            max: q,
        },
        communities,
        time_s,
    }
}

const fn published_range(
    algorithm: &'static str,
    dataset: &'static str,
    q: f64,
    min: f64,
    max: f64,
) -> PublishedResult {
    PublishedResult {
        algorithm,
        dataset,
        modularity: Spread { mean: q, min, max },
        communities: None,
        time_s: None,
    }
}

pub const PUBLISHED: &[PublishedResult] = &[
    published("cnm", "karate", 0.381, None, None),
    published("cnm", "football", 0.550, None, None),
    published("cnm", "dolphins", 0.495, None, None),
    published_range("lpa", "karate", 0.345, 0.132, 0.402),
    published_range("lpa", "football", 0.581, 0.563, 0.602),
    published_range("lpa", "dolphins", 0.458, 0.373, 0.502),
    published("infomap", "karate", 0.402, None, None),
    published("infomap", "football", 0.600, None, None),
    published("infomap", "dolphins", 0.528, None, None),
    published("fastunfolding", "karate", 0.419, None, None),
    published("fastunfolding", "football", 0.605, None, None),
    published("fastunfolding", "dolphins", 0.519, None, None),
    published("ncb", "karate", 0.378, None, None),
    published("ncb", "football", 0.585, None, None),
    published("ncb", "dolphins", 0.510, None, None),
    published("cnm", "cond-mat", 0.679, Some(1910), Some(250.7)),
    published("cnm", "twitter", 0.869, Some(168), Some(68.15)),
    published("cnm", "brightkite", 0.603, Some(1034), Some(358.88)),
    published("lpa", "cond-mat", 0.662, Some(3590), Some(72.40)),
    published("lpa", "twitter", 0.794, Some(648), Some(49.74)),
    published("lpa", "brightkite", 0.455, Some(1569), Some(151.63)),
    published("infomap", "cond-mat", 0.674, Some(3233), Some(639.766)),
    published("infomap", "twitter", 0.825, Some(607), Some(51.663)),
    published("infomap", "brightkite", 0.581, Some(4829), Some(869.767)),
    published("fastunfolding", "cond-mat", 0.722, Some(1667), Some(45.39)),
    published("fastunfolding", "twitter", 0.896, Some(136), Some(18.79)),
    published(
        "fastunfolding",
        "brightkite",
        0.664,
        Some(951),
        Some(127.60),
    ),
    published("ncb", "cond-mat", 0.681, Some(2267), Some(56.19)),
    published("ncb", "twitter", 0.826, Some(366), Some(23.64)),
    published("ncb", "brightkite", 0.611, Some(1260), Some(161.30)),
];

/// Algorithms that only appear through reference numbers.
pub const REFERENCE_ONLY: [&str; 3] = ["cnm", "infomap", "fastunfolding"];

pub fn published_for(algorithm: &str, dataset: &str) -> Option<&'static PublishedResult> {
    PUBLISHED
        .iter()
        .find(|r| r.algorithm == algorithm && r.dataset == dataset)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareConfig {
    pub algorithms: Vec<Algorithm>,
    /// LPA runs use seeds `seed, seed + 1, ..`.
    pub lpa_repeats: usize,
    pub seed: u64,
    /// Dataset key for published rows (`karate`, `dolphins`, ...); `None`
    /// omits them.
    pub dataset: Option<String>,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            algorithms: Algorithm::ALL.to_vec(),
            lpa_repeats: 5,
            seed: 0,
            dataset: None,
        }
    }
}

/// One row per live algorithm in [`Algorithm::ALL`] order, followed by
/// published rows for reference-only algorithms. LPA reports the modularity
/// spread over its repeats and the best NMI.
pub fn compare(
    g: &Graph,
    truth: Option<&Partition>,
    config: &CompareConfig,
) -> Result<Vec<ComparisonRow>> {
    if config.lpa_repeats == 0 {
        return Err(Error::Config("LPA repeat count must be at least 1".into()));
    }
    let mut algorithms = config.algorithms.clone();
    algorithms.sort();
    algorithms.dedup();

    let mut rows = Vec::new();
    for alg in algorithms {
        let repeats = if alg.is_randomized() {
            config.lpa_repeats
        } else {
            1
        };
        let mut qs = Vec::with_capacity(repeats);
        let mut counts = Vec::with_capacity(repeats);
        let mut secs = Vec::with_capacity(repeats);
        let mut best_nmi: Option<f64> = None;
        for r in 0..repeats {
            let (p, elapsed) = run(alg, g, config.seed.wrapping_add(r as u64))?;
            qs.push(modularity(g, &p)?);
            counts.push(p.community_count() as f64);
            secs.push(elapsed.as_secs_f64());
            if let Some(t) = truth {
                let score = nmi(&p, t)?;
                best_nmi = Some(best_nmi.map_or(score, |b: f64| b.max(score)));
            }
        }
        rows.push(ComparisonRow {
            algorithm: alg.name().to_owned(),
            source: Source::Run,
            modularity: Spread::of(&qs).expect("at least one repeat"),
            nmi: best_nmi,
            communities: Spread::of(&counts),
            time_s: Spread::of(&secs).map(|s| s.mean),
        });
    }
    if let Some(dataset) = &config.dataset {
        for alg in REFERENCE_ONLY {
            if let Some(r) = published_for(alg, dataset) {
                rows.push(ComparisonRow {
                    algorithm: alg.to_owned(),
                    source: Source::Published,
                    modularity: r.modularity,
                    nmi: None,
                    communities: r.communities.map(|c| Spread::exact(c as f64)),
                    time_s: r.time_s,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    /// Target edge counts, strictly increasing.
    pub edge_targets: Vec<usize>,
    pub block_size: usize,
    pub p_in: f64,
    /// Expected number of cross-block neighbors per node.
    pub inter_degree: f64,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            edge_targets: vec![10_000, 20_000, 40_000, 80_000],
            block_size: 32,
            p_in: 0.5,
            inter_degree: 2.0,
            repeats: 3,
            seed: 1,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::Config("repeat count must be at least 1".into()));
        }
        if self.edge_targets.is_empty() {
            return Err(Error::Config("at least one size is required".into()));
        }
        if self.edge_targets.windows(2).any(|w| w[0] >= w[1]) || self.edge_targets[0] == 0 {
            return Err(Error::Config(
                "sizes must be positive and strictly increasing".into(),
            ));
        }
        if self.block_size < 2 || self.inter_degree.is_nan() || self.inter_degree < 0.0 {
            return Err(Error::Config(
                "block size must be at least 2 and inter degree non-negative".into(),
            ));
        }
        for &t in &self.edge_targets {
            self.model_for(t).validate()?;
        }
        Ok(())
    }

    /// Planted-partition model whose expected edge count is close to `target`.
    pub fn model_for(&self, target: usize) -> PlantedPartition {
        let s = self.block_size as f64;
        let per_block = s * (s - 1.0) / 2.0 * self.p_in + s * self.inter_degree / 2.0;
        let blocks = ((target as f64 / per_block).round() as usize).max(2);
        let outside = ((blocks - 1) * self.block_size) as f64;
        PlantedPartition {
            blocks,
            block_size: self.block_size,
            p_in: self.p_in,
            p_out: self.inter_degree / outside,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchPoint {
    pub target_edges: usize,
    pub nodes: usize,
    pub edges: usize,
    pub communities: usize,
    /// Fastest of the repeats.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub points: Vec<BenchPoint>,
    /// Runtime growth between consecutive points, rescaled to one doubling
    /// of the edge count.
    pub ratios: Vec<f64>,
    pub mean_ratio: Option<f64>,
}

pub fn bench(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let mut points = Vec::with_capacity(config.edge_targets.len());
    for (i, &target) in config.edge_targets.iter().enumerate() {
        let g = config
            .model_for(target)
            .generate(config.seed.wrapping_add(i as u64))?;
        let mut best = f64::INFINITY;
        let mut communities = 0;
        for _ in 0..config.repeats {
            let (p, elapsed) = run(Algorithm::Ncb, &g, 0)?;
            best = best.min(elapsed.as_secs_f64());
            communities = p.community_count();
        }
        log::info!("bench: {} edges in {:.4}s", g.edge_count(), best);
        points.push(BenchPoint {
            target_edges: target,
            nodes: g.node_count(),
            edges: g.edge_count(),
            communities,
            seconds: best,
        });
    }
    let ratios: Vec<f64> = points
        .windows(2)
        .map(|w| {
            let doublings = (w[1].edges as f64 / w[0].edges as f64).log2();
            (w[1].seconds / w[0].seconds).powf(1.0 / doublings)
        })
        .collect();
    let mean_ratio = (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    Ok(BenchReport {
        points,
        ratios,
        mean_ratio,
    })
}

pub const BENCH_CSV_HEADER: &str = "target_edges,nodes,edges,communities,seconds,ratio";

pub fn write_bench_csv<W: Write>(report: &BenchReport, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{BENCH_CSV_HEADER}")?;
    for (i, p) in report.points.iter().enumerate() {
        let ratio = i
            .checked_sub(1)
            .map(|j| format!("{:.3}", report.ratios[j]))
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{:.6},{}",
            p.target_edges, p.nodes, p.edges, p.communities, p.seconds, ratio
        )?;
    }
    Ok(())
}
