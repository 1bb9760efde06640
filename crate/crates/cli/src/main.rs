//! `mtv`: offline verification of multi-traces against interaction models.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mtv_core::analysis::{explore, export_dot, export_jsonl, ExploreConfig, Strategy, Verdict};
use mtv_core::bench::{
    bucket_medians, encode_3sat, gen_accepted, gen_interaction, gen_prefix, mutate_noise, mutate_swap_act,
    mutate_swap_comp, run_suite, write_csv, Cnf, GenParams, Method, SuiteConfig,
};
use mtv_core::ir::{parse_model, print_model, Interaction, Signature};
use mtv_core::traces::{parse_multitrace, print_multitrace, MultiTrace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "mtv", version, about = "Check multi-traces against interaction models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a multi-trace is a multi-prefix of the model's behaviors.
    Analyze(AnalyzeArgs),
    /// Run the benchmark suite described by a TOML file and write a CSV.
    Bench(BenchArgs),
    /// Write random models (and optionally accepted traces).
    Generate(GenerateArgs),
    /// Derive a mutant or prefix of a multi-trace.
    Mutate(MutateArgs),
    /// Encode a 3-CNF formula as a model and a multi-trace.
    Sat(SatArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    model: PathBuf,
    trace: PathBuf,
    /// Partial order reduction on one-unambiguous actions.
    #[arg(long)]
    por: bool,
    /// Reject vertices failing the per-lifeline check.
    #[arg(long)]
    loc: bool,
    /// Truncation of local components for --loc: a number or `inf`.
    #[arg(long, default_value = "inf")]
    loc_depth: Depth,
    #[arg(long, value_enum, default_value_t = StrategyArg::Dfs)]
    strategy: StrategyArg,
    #[arg(long, env = "MTV_TIMEOUT_MS", default_value_t = 3000)]
    timeout_ms: u64,
    /// Explore the whole graph instead of stopping at the first Ok.
    #[arg(long)]
    full: bool,
    /// Write the explored graph as Graphviz DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the explored graph as JSON lines.
    #[arg(long)]
    jsonl: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug)]
struct Depth(Option<usize>);

impl FromStr for Depth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Depth(None));
        }
        s.parse().map(|d| Depth(Some(d))).map_err(|_| format!("expected a number or `inf`, got `{s}`"))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Dfs,
    Bfs,
}

#[derive(Args)]
struct BenchArgs {
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed of the configuration file.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Paper,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Preset::Paper)]
    preset: Preset,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Accepted multi-traces written per model.
    #[arg(long, default_value_t = 0)]
    traces: usize,
    #[arg(long, default_value_t = 30)]
    max_trace_len: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationKind {
    Prefix,
    Noise,
    SwapAct,
    SwapComp,
}

#[derive(Args)]
struct MutateArgs {
    model: PathBuf,
    trace: PathBuf,
    #[arg(long, value_enum)]
    kind: MutationKind,
    /// Partner multi-trace for swap-comp.
    #[arg(long)]
    other: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SatArgs {
    #[arg(long)]
    dimacs: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => analyze(&args),
        Command::Bench(args) => bench(&args).map(|_| ExitCode::SUCCESS),
        Command::Generate(args) => generate(&args).map(|_| ExitCode::SUCCESS),
        Command::Mutate(args) => mutate(&args).map(|_| ExitCode::SUCCESS),
        Command::Sat(args) => sat(&args).map(|_| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|err| {
        eprintln!("error: {err:#}");
        ExitCode::from(EXIT_ERROR)
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_model(path: &Path) -> Result<(Signature, Interaction)> {
    let text = read(path)?;
    parse_model(&text).map_err(|e| anyhow::anyhow!("{}:{e}", path.display()))
}

fn load_trace(sig: &Signature, path: &Path) -> Result<MultiTrace> {
    let text = read(path)?;
    parse_multitrace(sig, &text).map_err(|e| anyhow::anyhow!("{}:{e}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn out_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).with_context(|| format!("cannot create {}", path.display()))
}

fn analyze(args: &AnalyzeArgs) -> Result<ExitCode> {
    let (sig, i) = load_model(&args.model)?;
    let mu = load_trace(&sig, &args.trace)?;
    let cfg = ExploreConfig {
        por: args.por,
        loc: args.loc,
        loc_depth: args.loc_depth.0,
        strategy: match args.strategy {
            StrategyArg::Dfs => Strategy::Dfs,
            StrategyArg::Bfs => Strategy::Bfs,
        },
        timeout: Some(Duration::from_millis(args.timeout_ms)),
        stop_on_ok: !args.full,
        record_graph: args.dot.is_some() || args.jsonl.is_some(),
    };
    let report = explore(&sig, &i, &mu, &cfg)?;
    if let Some(path) = &args.dot {
        write(path, &export_dot(&report).unwrap_or_default())?;
    }
    if let Some(path) = &args.jsonl {
        write(path, &export_jsonl(&report).unwrap_or_default())?;
    }
    println!("verdict={}", report.verdict.as_str());
    println!("node_count={}", report.node_count);
    println!("edge_count={}", report.edge_count);
    println!("elapsed_us={}", report.elapsed.as_micros());
    Ok(ExitCode::from(match report.verdict {
        Verdict::Ok => 0,
        Verdict::Nok => 1,
        Verdict::Timeout => 3,
    }))
}

fn bench(args: &BenchArgs) -> Result<()> {
    let text = read(&args.config)?;
    let mut cfg: SuiteConfig =
        toml::from_str(&text).with_context(|| format!("invalid configuration {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.generator.validate()?;
    out_dir(&args.out)?;
    let rows = run_suite(&cfg)?;
    let csv_path = args.out.join("results.csv");
    let file = fs::File::create(&csv_path).with_context(|| format!("cannot write {}", csv_path.display()))?;
    write_csv(&rows, file)?;
    println!("rows={}", rows.len());
    println!("csv={}", csv_path.display());
    for method in &cfg.methods {
        for (bucket, n, median) in bucket_medians(&rows, *method) {
            let median = median.map_or_else(|| "-".to_string(), |m| m.to_string());
            eprintln!("{:<8} {:<6} n={n:<4} median_nodes={median}", method_name(*method), bucket);
        }
    }
    Ok(())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Base => "base",
        Method::Por => "por",
        Method::Loc => "loc",
        Method::PorLoc => "por+loc",
    }
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let base = match args.preset {
        Preset::Paper => GenParams::paper_preset(),
    };
    out_dir(&args.out)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for k in 0..args.count {
        let params = GenParams { rng_seed: args.seed.wrapping_add(k as u64), ..base.clone() };
        let (sig, i) = gen_interaction(&params)?;
        write(&args.out.join(format!("i{k}.model")), &print_model(&sig, &i))?;
        for j in 0..args.traces {
            let Some((_, mu)) = gen_accepted(&sig, &i, 1..=args.max_trace_len, &mut rng) else {
                eprintln!("i{k}: no accepted trace within the length range");
                break;
            };
            write(&args.out.join(format!("i{k}_t{j}.trace")), &print_multitrace(&sig, &mu))?;
        }
    }
    println!("models={}", args.count);
    println!("out={}", args.out.display());
    Ok(())
}

fn mutate(args: &MutateArgs) -> Result<()> {
    let (sig, _) = load_model(&args.model)?;
    let mu = load_trace(&sig, &args.trace)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (name, mutant) = match args.kind {
        MutationKind::Prefix => ("prefix", Some(gen_prefix(&mu, &mut rng))),
        MutationKind::Noise => ("noise", Some(mutate_noise(&sig, &mu, &mut rng))),
        MutationKind::SwapAct => ("swap-act", mutate_swap_act(&mu, &mut rng)),
        MutationKind::SwapComp => {
            let Some(other) = &args.other else {
                bail!("--kind swap-comp needs --other");
            };
            let other = load_trace(&sig, other)?;
            ("swap-comp", mutate_swap_comp(&mu, &other, &mut rng))
        }
    };
    let Some(mutant) = mutant else {
        bail!("the multi-trace admits no {name} mutation");
    };
    out_dir(&args.out)?;
    let stem = args.trace.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
    let path = args.out.join(format!("{stem}.{name}.trace"));
    write(&path, &print_multitrace(&sig, &mutant))?;
    println!("trace={}", path.display());
    println!("len={}", mutant.len());
    Ok(())
}

fn sat(args: &SatArgs) -> Result<()> {
    let text = read(&args.dimacs)?;
    let cnf = Cnf::parse_dimacs(&text).map_err(|e| anyhow::anyhow!("{}: {e}", args.dimacs.display()))?;
    let (sig, i, mu) = encode_3sat(&cnf);
    out_dir(&args.out)?;
    let stem = args.dimacs.file_stem().and_then(|s| s.to_str()).unwrap_or("formula");
    let model = args.out.join(format!("{stem}.model"));
    let trace = args.out.join(format!("{stem}.trace"));
    write(&model, &print_model(&sig, &i))?;
    write(&trace, &print_multitrace(&sig, &mu))?;
    println!("model={}", model.display());
    println!("trace={}", trace.display());
    println!("clauses={}", cnf.clauses().len());
    Ok(())
}
