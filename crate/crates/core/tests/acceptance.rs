//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria that need datasets which are not bundled (Dolphins, Football)
//! report `FAIL (BLOCKED)` when the files are absent from `NCB_DATA_DIR`.
//! Blocked criteria do not fail the run unless `NCB_ACCEPTANCE_STRICT=1`;
//! any other failure does.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{brute_conductance, brute_counts, exact};
use ncb::baselines::{greedy_modularity, lpa, DEFAULT_LPA_ITERATIONS};
use ncb::conductance::{cut, volume};
use ncb::datasets::{data_dir, karate, karate_truth, load_path, locate};
use ncb::generate::{cliques_with_bridge, erdos_renyi, PlantedPartition};
use ncb::harness::{bench, published_for, BenchConfig};
use ncb::{conductance, detect, detect_traced, modularity, nmi, Graph, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KARATE_RUNTIME_LIMIT: Duration = Duration::from_secs(1);
const Q_KARATE: (f64, f64) = (0.378, 0.02);
const Q_DOLPHINS: (f64, f64) = (0.510, 0.03);
const Q_FOOTBALL: (f64, f64) = (0.585, 0.03);
const LPA_BAND: (f64, f64) = (0.132, 0.402);
const LPA_RUNS: u64 = 5;
const Q_GREEDY: (f64, f64) = (0.381, 0.02);
const ORACLE_GRAPHS: u64 = 200;
const ORACLE_MAX_N: usize = 64;
const DUALITY_TOLERANCE: f64 = 1e-12;
const VALIDITY_GRAPHS: u64 = 100;
const VALIDITY_MAX_N: usize = 500;
const CLIQUE_SIZES: std::ops::RangeInclusive<usize> = 4..=8;
const BENCH_SIZES: [usize; 4] = [12_500, 25_000, 50_000, 100_000];
const MAX_DOUBLING_RATIO: f64 = 2.6;
const BRIGHTKITE_LIMIT: Duration = Duration::from_secs(600);

type Check = fn() -> Outcome;

enum Outcome {
    Pass(String),
    Fail(String),
    Blocked(String),
    Info(String),
}

fn within(x: f64, (target, tol): (f64, f64)) -> bool {
    (x - target).abs() <= tol
}

/// `None` when the dataset file is not present.
fn load_optional(name: &str) -> Option<Graph> {
    let path = locate(name)?;
    Some(load_path(&path, None).unwrap_or_else(|e| panic!("{}: {e}", path.display())))
}

fn criterion_1() -> Outcome {
    let g = karate();
    let truth = karate_truth(&g).unwrap();
    let start = Instant::now();
    let p = detect(&g).unwrap();
    let elapsed = start.elapsed();
    let score = nmi(&p, &truth).unwrap();
    let detail = format!(
        "karate NMI = {score:.6}, {} communities, {:.3} ms",
        p.community_count(),
        elapsed.as_secs_f64() * 1e3
    );
    if score == 1.0 && elapsed < KARATE_RUNTIME_LIMIT {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    let mut failed = false;
    let mut blocked = false;
    for (name, target) in [
        ("karate", Q_KARATE),
        ("dolphins", Q_DOLPHINS),
        ("football", Q_FOOTBALL),
    ] {
        let g = if name == "karate" {
            Some(karate())
        } else {
            load_optional(name)
        };
        match g {
            Some(g) => {
                let q = modularity(&g, &detect(&g).unwrap()).unwrap();
                let ok = within(q, target);
                failed |= !ok;
                parts.push(format!(
                    "{name} Q = {q:.4} (target {} ± {}) {}",
                    target.0,
                    target.1,
                    if ok { "ok" } else { "OUT" }
                ));
            }
            None => {
                blocked = true;
                parts.push(format!(
                    "{name}: dataset missing in {}",
                    data_dir().display()
                ));
            }
        }
    }
    let detail = parts.join("; ");
    if failed {
        Outcome::Fail(detail)
    } else if blocked {
        Outcome::Blocked(detail)
    } else {
        Outcome::Pass(detail)
    }
}

fn criterion_3() -> Outcome {
    let g = karate();
    let start = Instant::now();
    let qs: Vec<f64> = (0..LPA_RUNS)
        .map(|seed| modularity(&g, &lpa(&g, seed, DEFAULT_LPA_ITERATIONS).unwrap()).unwrap())
        .collect();
    let elapsed = start.elapsed();
    let mean = qs.iter().sum::<f64>() / qs.len() as f64;
    let min = qs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = qs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let detail = format!(
        "karate LPA Q = {mean:.3}[{min:.3},{max:.3}] over {LPA_RUNS} seeds, band [{}, {}], {:.3} ms",
        LPA_BAND.0,
        LPA_BAND.1,
        elapsed.as_secs_f64() * 1e3
    );
    if (LPA_BAND.0..=LPA_BAND.1).contains(&mean) && elapsed < KARATE_RUNTIME_LIMIT {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn criterion_4() -> Outcome {
    let g = karate();
    let q = modularity(&g, &greedy_modularity(&g).unwrap()).unwrap();
    let detail = format!(
        "karate greedy modularity Q = {q:.4}, target {} ± {}",
        Q_GREEDY.0, Q_GREEDY.1
    );
    if within(q, Q_GREEDY) {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sets = 0;
    let mut mismatches = Vec::new();
    let mut graphs = 0;
    while graphs < ORACLE_GRAPHS {
        let n = rng.random_range(2..=ORACLE_MAX_N);
        let p = rng.random_range(0.02..0.5);
        let Ok(g) = erdos_renyi(n, p, rng.random()) else {
            continue;
        };
        if g.edge_count() == 0 {
            continue;
        }
        graphs += 1;
        for _ in 0..5 {
            let keep = rng.random_range(0.05..0.95);
            let set: Vec<usize> = (0..n).filter(|_| rng.random_bool(keep)).collect();
            if set.is_empty() {
                continue;
            }
            sets += 1;
            let b = brute_counts(&g, &set);
            let measured = (cut(&g, &set).unwrap(), volume(&g, &set).unwrap());
            let phi_ok = match (conductance(&g, &set), brute_conductance(&g, &set)) {
                (Ok(r), Some(e)) => exact(r) == e,
                (Err(_), None) => true,
                _ => false,
            };
            if measured != (b.cut, b.volume) || !phi_ok || b.volume - b.cut != 2 * b.internal {
                mismatches.push(format!("n={n} set={set:?}"));
            }
        }
    }
    let detail = format!(
        "{graphs} ER graphs (n ≤ {ORACLE_MAX_N}), {sets} node sets, {} mismatches",
        mismatches.len()
    );
    if mismatches.is_empty() {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(format!("{detail}; first: {}", mismatches[0]))
    }
}

fn duality_violations(g: &Graph, p: &Partition) -> (usize, usize) {
    let half = g.total_volume();
    let mut checked = 0;
    let mut bad = 0;
    for c in p.communities() {
        if c.degree_sum == 0 || 2 * c.degree_sum > half || c.len() == g.node_count() {
            continue;
        }
        checked += 1;
        let s = c.stability().unwrap().to_f64();
        let phi = conductance(g, &c.members).unwrap().to_f64();
        if (s - (1.0 - phi)).abs() > DUALITY_TOLERANCE {
            bad += 1;
        }
    }
    (checked, bad)
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    let mut failed = false;
    let mut blocked = false;
    for name in ["karate", "dolphins", "football"] {
        let g = if name == "karate" {
            Some(karate())
        } else {
            load_optional(name)
        };
        match g {
            Some(g) => {
                let (checked, bad) = duality_violations(&g, &detect(&g).unwrap());
                failed |= bad > 0;
                parts.push(format!(
                    "{name}: {checked} communities checked, {bad} violations"
                ));
            }
            None => {
                blocked = true;
                parts.push(format!("{name}: dataset missing"));
            }
        }
    }
    let detail = parts.join("; ");
    if failed {
        Outcome::Fail(detail)
    } else if blocked {
        Outcome::Blocked(detail)
    } else {
        Outcome::Pass(detail)
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut problems = Vec::new();
    let mut graphs = 0;
    let mut accepted_events = 0;
    while graphs < VALIDITY_GRAPHS {
        let g = if graphs % 2 == 0 {
            let n = rng.random_range(10..=VALIDITY_MAX_N);
            let degree = rng.random_range(1.0..8.0);
            erdos_renyi(n, degree / n as f64, rng.random())
        } else {
            let block_size = rng.random_range(5..=50);
            let blocks = rng.random_range(2..=(VALIDITY_MAX_N / block_size).max(2));
            PlantedPartition {
                blocks,
                block_size,
                p_in: rng.random_range(0.2..0.9),
                p_out: rng.random_range(0.0..0.02),
            }
            .generate(rng.random())
        };
        let Ok(g) = g else { continue };
        if g.edge_count() == 0 {
            continue;
        }
        graphs += 1;
        let (p, events) = detect_traced(&g).unwrap();
        let seed = rng.random();
        let partitions = [
            ("ncb", p),
            ("lpa", lpa(&g, seed, DEFAULT_LPA_ITERATIONS).unwrap()),
            ("greedy-modularity", greedy_modularity(&g).unwrap()),
        ];
        for (name, p) in &partitions {
            if !p.is_total() {
                problems.push(format!("{name}: partial partition on graph {graphs}"));
            }
            if let Err(e) = p.validate(&g) {
                problems.push(format!("{name}: {e} on graph {graphs}"));
            }
        }
        for e in events.iter().filter(|e| e.accepted) {
            accepted_events += 1;
            if e.capture_factor.is_nan() || e.capture_factor <= 0.0 {
                problems.push(format!(
                    "accepted event with ε = {} on graph {graphs}",
                    e.capture_factor
                ));
            }
        }
    }
    let detail = format!(
        "{graphs} graphs (ER and planted, n ≤ {VALIDITY_MAX_N}) × 3 algorithms, {accepted_events} accepted events, {} problems",
        problems.len()
    );
    if problems.is_empty() {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(format!("{detail}; first: {}", problems[0]))
    }
}

fn criterion_8() -> Outcome {
    let mut wrong = Vec::new();
    for k in CLIQUE_SIZES {
        let g = cliques_with_bridge(k).unwrap();
        let labels = detect(&g).unwrap().labels().unwrap();
        let split = (0..k).all(|v| labels[v] == labels[0])
            && (k..2 * k).all(|v| labels[v] == labels[k])
            && labels[0] != labels[k];
        if !split {
            wrong.push(k);
        }
    }
    let detail = format!(
        "k = {}..={}, wrong for {:?}",
        CLIQUE_SIZES.start(),
        CLIQUE_SIZES.end(),
        wrong
    );
    if wrong.is_empty() {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn criterion_9() -> Outcome {
    let config = BenchConfig {
        edge_targets: BENCH_SIZES.to_vec(),
        ..BenchConfig::default()
    };
    let report = bench(&config).unwrap();
    let mean = report.mean_ratio.unwrap();
    let points: Vec<String> = report
        .points
        .iter()
        .map(|p| format!("{}:{:.4}s", p.edges, p.seconds))
        .collect();
    let detail = format!(
        "mean per-doubling ratio {mean:.3} (limit {MAX_DOUBLING_RATIO}); {}",
        points.join(" ")
    );
    if mean <= MAX_DOUBLING_RATIO {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn criterion_10() -> Outcome {
    let candidates = |name: &str, alt: &str| -> Option<PathBuf> {
        locate(name).or_else(|| Some(data_dir().join(alt)).filter(|p| p.is_file()))
    };
    let mut parts = Vec::new();
    let mut over_limit = false;
    for (name, alt) in [
        ("cond-mat", "cond-mat-2005.gml"),
        ("twitter", "twitter_combined.txt"),
        ("brightkite", "loc-brightkite_edges.txt"),
    ] {
        let Some(path) = candidates(name, alt) else {
            parts.push(format!("{name}: not supplied"));
            continue;
        };
        let g = load_path(&path, None).unwrap();
        let start = Instant::now();
        let p = detect(&g).unwrap();
        let elapsed = start.elapsed();
        if name == "brightkite" && elapsed > BRIGHTKITE_LIMIT {
            over_limit = true;
        }
        let published = published_for("ncb", name)
            .and_then(|r| r.communities)
            .unwrap_or_default();
        parts.push(format!(
            "{name}: {} nodes, {} edges, {} communities (published {published}), {:.1}s",
            g.node_count(),
            g.edge_count(),
            p.community_count(),
            elapsed.as_secs_f64()
        ));
    }
    let detail = parts.join("; ");
    if over_limit {
        Outcome::Fail(detail)
    } else {
        Outcome::Info(detail)
    }
}

fn main() -> ExitCode {
    let strict = std::env::var("NCB_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let criteria: [(&str, Check); 10] = [
        ("karate exactness", criterion_1),
        ("modularity targets", criterion_2),
        ("LPA band", criterion_3),
        ("greedy modularity sanity", criterion_4),
        ("conductance oracle", criterion_5),
        ("stability-conductance duality", criterion_6),
        ("partition validity", criterion_7),
        ("planted cliques", criterion_8),
        ("scaling", criterion_9),
        ("large networks", criterion_10),
    ];
    let (mut passed, mut failed, mut blocked) = (0, 0, 0);
    println!("acceptance criteria (data dir: {})", data_dir().display());
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (status, detail) = match check() {
            Outcome::Pass(d) => {
                passed += 1;
                ("PASS", d)
            }
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Blocked(d) => {
                blocked += 1;
                ("FAIL (BLOCKED)", d)
            }
            Outcome::Info(d) => ("INFO", d),
        };
        println!("criterion {:>2} {name}: {status}: {detail}", i + 1);
    }
    println!("summary: {passed} passed, {failed} failed, {blocked} blocked on missing data");
    if failed > 0 || (strict && blocked > 0) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
