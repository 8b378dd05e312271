use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ncb::datasets::{load_path, InputFormat};
use ncb::harness::{self, Algorithm, BenchConfig, CompareConfig};
use ncb::metrics::{evaluate, write_reports_csv, write_reports_json};
use ncb::partition::{read_csv, read_json, write_csv, write_json};
use ncb::{Graph, Partition};

const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_RUNTIME: u8 = 4;

#[derive(Parser)]
#[command(name = "ncb")]
#[command(about = "Community detection with conductance-seeded growth and baseline comparison")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Detect communities and write the partition.
    Detect(DetectArgs),
    /// Run several algorithms on one graph and tabulate the results.
    Compare(CompareArgs),
    /// Write the closed-neighborhood conductance of every node.
    Profile(ProfileArgs),
    /// Time detection on planted-partition graphs of growing size.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    EdgeList,
    Gml,
}

impl From<FormatArg> for InputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::EdgeList => InputFormat::EdgeList,
            FormatArg::Gml => InputFormat::Gml,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Ncb,
    Lpa,
    GreedyModularity,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Ncb => Algorithm::Ncb,
            AlgorithmArg::Lpa => Algorithm::Lpa,
            AlgorithmArg::GreedyModularity => Algorithm::GreedyModularity,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Graph file (edge list or GML).
    #[arg(short, long)]
    input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(short, long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(short, long, value_enum, default_value = "ncb")]
    algorithm: AlgorithmArg,
    /// RNG seed (label propagation only).
    #[arg(short, long)]
    seed: Option<u64>,
    /// Partition file to score against (CSV `node,community` or JSON).
    #[arg(short, long)]
    ground_truth: Option<PathBuf>,
    /// Partition output path.
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    output_format: OutputFormat,
    /// Write accept/reject events as JSON lines (ncb only).
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Algorithms to run; repeatable. All of them when omitted, together with
    /// published reference rows for the dataset.
    #[arg(short, long, value_enum)]
    algorithm: Vec<AlgorithmArg>,
    /// Base RNG seed for label propagation repeats.
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    /// Label propagation runs.
    #[arg(short, long, default_value_t = 5)]
    repeats: usize,
    #[arg(short, long)]
    ground_truth: Option<PathBuf>,
    /// Dataset name for published rows; defaults to the input file stem.
    #[arg(long)]
    dataset: Option<String>,
    /// Table output path; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    output_format: OutputFormat,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    input: InputArgs,
    /// CSV output path; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Target edge counts, comma separated and increasing.
    #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 20_000, 40_000, 80_000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 32)]
    block_size: usize,
    #[arg(long, default_value_t = 0.5)]
    p_in: f64,
    /// Expected cross-block neighbors per node.
    #[arg(long, default_value_t = 2.0)]
    inter_degree: f64,
    /// Timed runs per size; the fastest is reported.
    #[arg(short, long, default_value_t = 3)]
    repeats: usize,
    #[arg(short, long, default_value_t = 1)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    output_format: OutputFormat,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<ncb::Error> for Failure {
    fn from(e: ncb::Error) -> Self {
        match e {
            ncb::Error::Config(msg) => Failure::Usage(msg),
            ncb::Error::Parse { .. }
            | ncb::Error::EmptyGraph
            | ncb::Error::PartitionMismatch(_) => Failure::Parse(e.into()),
            other => Failure::Runtime(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Commands::Detect(args) => cmd_detect(args),
        Commands::Compare(args) => cmd_compare(args),
        Commands::Profile(args) => cmd_profile(args),
        Commands::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Parse(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

fn load_graph(args: &InputArgs) -> Result<Graph, Failure> {
    let g =
        load_path(&args.input, args.format.map(Into::into)).map_err(|e| {
            match Failure::from(e) {
                Failure::Parse(e) => {
                    Failure::Parse(e.context(format!("reading {}", args.input.display())))
                }
                other => other,
            }
        })?;
    let summary = g.load_summary();
    log::info!(
        "loaded {} nodes, {} edges ({} self-loops, {} duplicates dropped)",
        g.node_count(),
        g.edge_count(),
        summary.self_loops,
        summary.duplicate_edges
    );
    Ok(g)
}

fn load_truth(g: &Graph, path: &Path) -> Result<Partition, Failure> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let reader = BufReader::new(file);
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let p = if is_json {
        read_json(g, reader)
    } else {
        read_csv(g, reader)
    };
    p.map_err(|e| match Failure::from(e) {
        Failure::Parse(e) => Failure::Parse(e.context(format!("reading {}", path.display()))),
        other => other,
    })
}

/// Writes `bytes` to `path` through a sibling temporary file so a failure
/// never leaves a truncated output behind.
fn write_atomically(path: &Path, bytes: &[u8]) -> CmdResult {
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".partial");
    let tmp = path.with_file_name(tmp_name);
    let result = fs::write(&tmp, bytes).and_then(|()| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Runtime)
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> CmdResult {
    match path {
        Some(p) => write_atomically(p, bytes),
        None => {
            io::stdout().lock().write_all(bytes)?;
            Ok(())
        }
    }
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().to_lowercase())
        .unwrap_or_default()
}

fn cmd_detect(args: DetectArgs) -> CmdResult {
    let algorithm = Algorithm::from(args.algorithm);
    if args.seed.is_some() && !algorithm.is_randomized() {
        return Err(Failure::Usage(format!(
            "--seed has no effect for {algorithm}"
        )));
    }
    if args.trace.is_some() && algorithm != Algorithm::Ncb {
        return Err(Failure::Usage(format!(
            "--trace is only available for ncb, not {algorithm}"
        )));
    }

    let g = load_graph(&args.input)?;
    let truth = args
        .ground_truth
        .as_deref()
        .map(|p| load_truth(&g, p))
        .transpose()?;

    let start = std::time::Instant::now();
    let (partition, events) = if args.trace.is_some() {
        let (p, events) = ncb::detect_traced(&g)?;
        (p, Some(events))
    } else {
        (harness::run(algorithm, &g, args.seed.unwrap_or(0))?.0, None)
    };
    let elapsed = start.elapsed();

    let report = evaluate(
        &g,
        &partition,
        truth.as_ref(),
        elapsed,
        algorithm.name(),
        &dataset_name(&args.input.input),
    )?;

    let mut body = Vec::new();
    match args.output_format {
        OutputFormat::Csv => write_csv(&g, &partition, &mut body)?,
        OutputFormat::Json => write_json(&g, &partition, &mut body)?,
    }
    let trace_body = events
        .map(|events| -> anyhow::Result<Vec<u8>> {
            let mut buf = Vec::new();
            for e in events {
                let line = serde_json::json!({
                    "node": g.label(e.node),
                    "community": e.community,
                    "gravitation": e.gravitation,
                    "capture_factor": e.capture_factor,
                    "accepted": e.accepted,
                });
                writeln!(buf, "{line}")?;
            }
            Ok(buf)
        })
        .transpose()?;

    write_atomically(&args.output, &body)?;
    if let (Some(path), Some(bytes)) = (&args.trace, trace_body) {
        write_atomically(path, &bytes)?;
    }

    let mut summary = Vec::new();
    match args.output_format {
        OutputFormat::Csv => write_reports_csv(&[report], &mut summary)?,
        OutputFormat::Json => {
            write_reports_json(&[report], &mut summary)?;
            summary.push(b'\n');
        }
    }
    emit(None, &summary)
}

fn cmd_compare(args: CompareArgs) -> CmdResult {
    if args.repeats == 0 {
        return Err(Failure::Usage("--repeats must be at least 1".into()));
    }
    let g = load_graph(&args.input)?;
    let truth = args
        .ground_truth
        .as_deref()
        .map(|p| load_truth(&g, p))
        .transpose()?;

    let full = args.algorithm.is_empty();
    let config = CompareConfig {
        algorithms: if full {
            Algorithm::ALL.to_vec()
        } else {
            args.algorithm.iter().copied().map(Into::into).collect()
        },
        lpa_repeats: args.repeats,
        seed: args.seed,
        dataset: full.then(|| {
            args.dataset
                .clone()
                .unwrap_or_else(|| dataset_name(&args.input.input))
        }),
    };
    let rows = harness::compare(&g, truth.as_ref(), &config)?;

    let mut body = Vec::new();
    match args.output_format {
        OutputFormat::Csv => harness::write_comparison_csv(&rows, &mut body)?,
        OutputFormat::Json => {
            harness::write_comparison_json(&rows, &mut body)?;
            body.push(b'\n');
        }
    }
    emit(args.output.as_deref(), &body)
}

fn cmd_profile(args: ProfileArgs) -> CmdResult {
    let g = load_graph(&args.input)?;
    let records = ncb::conductance::profile(&g);
    let mut body = Vec::new();
    ncb::conductance::write_profile_csv(&g, &records, &mut body)?;
    emit(args.output.as_deref(), &body)
}

fn cmd_bench(args: BenchArgs) -> CmdResult {
    if args.repeats == 0 {
        return Err(Failure::Usage("--repeats must be at least 1".into()));
    }
    let config = BenchConfig {
        edge_targets: args.sizes,
        block_size: args.block_size,
        p_in: args.p_in,
        inter_degree: args.inter_degree,
        repeats: args.repeats,
        seed: args.seed,
    };
    let report = harness::bench(&config)?;
    let mut body = Vec::new();
    match args.output_format {
        OutputFormat::Csv => harness::write_bench_csv(&report, &mut body)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut body, &report).map_err(io::Error::other)?;
            body.push(b'\n');
        }
    }
    emit(args.output.as_deref(), &body)?;
    if let Some(mean) = report.mean_ratio {
        eprintln!("mean runtime ratio per edge doubling: {mean:.3}");
    }
    Ok(())
}
