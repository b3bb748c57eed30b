use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use syncomplete::ht::ValueMode;
use syncomplete::{HtOptions, RuleSet, ScoredString, StructureKind};
use syncomplete_bench::latency::{long_quartile_len, mean_from_len, throughput, to_csv};
use syncomplete_bench::{
    build_measured, generate_synthetic, generate_workload, load_dictionary, load_rules,
    run_benchmark, summarize, workload, BenchOptions, DatasetSpec, StructureStats, WorkloadMode,
};
use syncomplete_cli::response::{line, views, CompletionResponse};
use syncomplete_cli::server::{self, AppState, Loaded};
use syncomplete_cli::{rule_trie_links, Snapshot};

#[derive(Parser)]
#[command(
    name = "syncomplete",
    version,
    about = "Top-k completion with synonym rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index and write a snapshot.
    Build(BuildArgs),
    /// Print the top-k completions of one query.
    Query(QueryArgs),
    /// Time lookups over generated workloads.
    Bench(BenchArgs),
    /// Serve completions over HTTP.
    Serve(ServeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ValueArg {
    Applications,
    Strings,
}

#[derive(Args)]
struct BuildArgs {
    /// Dictionary TSV: `text<TAB>score` per line.
    #[arg(long)]
    dict: PathBuf,
    /// Rules TSV: `lhs<TAB>rhs` per line.
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    structure: StructureKind,
    /// Share of full expansion bytes hybrid tries may spend, in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "applications")]
    value_mode: ValueArg,
    /// Search nodes before rule selection settles for its best so far.
    #[arg(long, default_value_t = syncomplete::ht::DEFAULT_NODE_CAP)]
    node_cap: u64,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    q: String,
    #[arg(short, default_value_t = 10)]
    k: usize,
    /// Print the JSON response the service would send.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, requires = "rules", required_unless_present = "synthetic")]
    dict: Option<PathBuf>,
    #[arg(long, requires = "dict")]
    rules: Option<PathBuf>,
    /// Generate a dataset shaped like `dblp`, `usps` or `sprot`.
    #[arg(long, conflicts_with = "dict")]
    synthetic: Option<String>,
    /// Override the synthetic string count.
    #[arg(long, requires = "synthetic")]
    strings: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "tt,et,ht")]
    structures: Vec<StructureKind>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    alphas: Vec<f64>,
    #[arg(short, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 10_000)]
    queries: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Latency by query length goes here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Structure statistics as JSON lines go here.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Queries start anywhere in a string instead of at its beginning.
    #[arg(long)]
    substring_mode: bool,
    /// Also report throughput with this many threads.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    /// Directory of static files served under `/`.
    #[arg(long = "static")]
    static_dir: Option<PathBuf>,
}

type Failure = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(a) => build(a),
        Command::Query(a) => query(a),
        Command::Bench(a) => bench(a),
        Command::Serve(a) => serve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn build(a: BuildArgs) -> Result<(), Failure> {
    let alpha = match (a.structure, a.alpha) {
        (StructureKind::Ht, Some(x)) if (0.0..=1.0).contains(&x) => x,
        (StructureKind::Ht, Some(x)) => {
            return Err(format!("alpha must lie in [0, 1], got {x}").into())
        }
        (StructureKind::Ht, None) => return Err("--alpha is required for ht".into()),
        (_, Some(_)) => return Err("--alpha only applies to ht".into()),
        (_, None) => 0.0,
    };
    let dict = load_dictionary(&a.dict)?;
    let rules = load_rules(&a.rules)?;
    let options = HtOptions {
        value_mode: match a.value_mode {
            ValueArg::Applications => ValueMode::Applications,
            ValueArg::Strings => ValueMode::Strings,
        },
        node_cap: a.node_cap,
        ..HtOptions::default()
    };
    let (index, stats) = build_measured(a.structure, &dict, &rules, alpha, &options)?;
    print_stats(&stats);
    for (rhs, count) in rule_trie_links(&index) {
        println!("links\t{rhs}\t{count}");
    }
    if let Some(out) = a.out {
        Snapshot::of(&index, &dict, &options.model)?.save(&out)?;
        println!("snapshot\t{}", out.display());
    }
    Ok(())
}

fn print_stats(s: &StructureStats) {
    println!("structure\t{}", s.structure);
    println!("strings\t{}", s.string_count);
    println!("rules\t{}", s.rule_count);
    println!("nodes\t{}", s.node_count);
    println!("link_count\t{}", s.link_count);
    println!("bytes_total\t{}", s.bytes_total);
    println!("bytes_per_string\t{:.2}", s.bytes_per_string);
    println!(
        "breakdown\tdictionary={} expanded={} unexpanded={}",
        s.breakdown.dictionary, s.breakdown.expanded, s.breakdown.unexpanded
    );
    println!("build_ms\t{:.1}", s.build_millis);
    let p = s.probes;
    println!("probes\tm={} n={} s={} t={} l={}", p.m, p.n, p.s, p.t, p.l);
    if let Some(n) = s.expanded_rules {
        println!("expanded_rules\t{n}");
    }
    if let Some(exact) = s.selection_exact {
        println!("selection_exact\t{exact}");
    }
}

fn query(a: QueryArgs) -> Result<(), Failure> {
    let snapshot = Snapshot::load(&a.index)?;
    let index = snapshot.build()?;
    let start = Instant::now();
    let found = index.topk(&a.q, a.k);
    let latency_us = start.elapsed().as_secs_f64() * 1e6;
    let completions = views(&found, index.rules());
    if a.json {
        let response = CompletionResponse {
            query: a.q,
            k: a.k,
            completions,
            latency_us,
            structure: syncomplete_bench::label(snapshot.kind, snapshot.alpha.unwrap_or(0.0)),
        };
        println!("{}", serde_json::to_string(&response)?);
    } else {
        for v in &completions {
            println!("{}", line(v));
        }
    }
    Ok(())
}

fn bench_inputs(a: &BenchArgs) -> Result<(Vec<ScoredString>, RuleSet), Failure> {
    if let (Some(d), Some(r)) = (&a.dict, &a.rules) {
        return Ok((load_dictionary(d)?, load_rules(r)?));
    }
    let name = a
        .synthetic
        .as_deref()
        .ok_or("give --dict and --rules, or --synthetic")?;
    let mut spec = DatasetSpec::by_name(name)
        .ok_or_else(|| format!("unknown synthetic dataset {name:?}, expected dblp, usps or sprot"))?
        .with_seed(a.seed);
    if let Some(n) = a.strings {
        spec = spec.with_strings(n);
    }
    let data = generate_synthetic(&spec)?;
    eprintln!("generated {:?}", data.report);
    Ok((data.dict, data.rules))
}

fn bench(a: BenchArgs) -> Result<(), Failure> {
    if let Some(bad) = a.alphas.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(format!("alpha must lie in [0, 1], got {bad}").into());
    }
    let (dict, rules) = bench_inputs(&a)?;
    let mode = if a.substring_mode {
        WorkloadMode::Substring
    } else {
        WorkloadMode::Prefix
    };
    let work = workload::texts(&generate_workload(&dict, &rules, a.queries, a.seed, mode)?);
    let options = HtOptions::default();
    let bench_opts = BenchOptions {
        k: a.k,
        ..BenchOptions::default()
    };
    let mut plan = Vec::new();
    for &kind in &a.structures {
        match kind {
            StructureKind::Ht => plan.extend(a.alphas.iter().map(|&x| (kind, x))),
            _ => plan.push((kind, 0.0)),
        }
    }
    let mut rows = Vec::new();
    let mut stats_lines = String::new();
    println!("structure\tbytes_per_string\tbuild_ms\tmean_us\tlong_mean_us\tqps");
    for (kind, alpha) in plan {
        let (index, stats) = build_measured(kind, &dict, &rules, alpha, &options)?;
        let samples = run_benchmark(&index, &work, &bench_opts);
        let long = long_quartile_len(&samples);
        let qps = a.threads.map(|t| throughput(&index, &work, a.k, t));
        println!(
            "{}\t{:.2}\t{:.1}\t{:.2}\t{:.2}\t{}",
            stats.structure,
            stats.bytes_per_string,
            stats.build_millis,
            mean_from_len(&samples, 0),
            mean_from_len(&samples, long),
            qps.map_or("-".to_owned(), |q| format!("{q:.0}")),
        );
        rows.extend(summarize(&stats.structure, &samples));
        stats_lines.push_str(&serde_json::to_string(&stats)?);
        stats_lines.push('\n');
    }
    if let Some(path) = &a.csv {
        write(path, &to_csv(&rows))?;
    }
    if let Some(path) = &a.stats {
        write(path, &stats_lines)?;
    }
    Ok(())
}

fn write(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn serve(a: ServeArgs) -> Result<(), Failure> {
    let loaded = Loaded::from_path(&a.index)?;
    let state = AppState::new(loaded, Some(a.index.clone()));
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let addr = SocketAddr::new(a.host, a.port);
        let listener = tokio::net::TcpListener::bind(addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        server::run(listener, state, a.static_dir.as_deref()).await
    })?;
    Ok(())
}
