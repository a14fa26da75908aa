use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use episcan::bench::{self, BenchError, Grid, Regime};
use episcan::{matcher, selftest, Engine, Mode, Pattern};
use serde_json::json;

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "episcan", version, about = "Count windows containing serial episodes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the windows of a file that contain the patterns.
    Count(CountArgs),
    /// Time every engine over generated corpora and write CSV rows.
    Bench(BenchArgs),
    /// Run the built-in worked examples and random differential suite.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct CountArgs {
    /// File whose raw bytes are scanned.
    #[arg(long)]
    text: PathBuf,
    /// Comma-separated patterns; may be repeated.
    #[arg(long, value_delimiter = ',')]
    patterns: Vec<String>,
    /// File with one pattern per line.
    #[arg(long)]
    patterns_file: Option<PathBuf>,
    #[arg(long, short = 'w')]
    window: usize,
    #[arg(long, default_value = "mp-trie")]
    engine: String,
    #[arg(long, default_value = "all")]
    mode: String,
    /// `plain` or `machine` (one JSON object).
    #[arg(long, default_value = "plain")]
    format: String,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "1000000")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "4")]
    q: Vec<usize>,
    /// Length of each pattern.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    plen: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "10")]
    window: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "4")]
    alphabet: Vec<usize>,
    /// `a` (distinct first letters) or `b` (shared prefix).
    #[arg(long, default_value = "a")]
    regime: String,
    #[arg(long, default_value_t = 2)]
    shared_prefix: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, value_delimiter = ',', default_value = "mp-trie,mp-concat,std-trie,std-concat")]
    engines: Vec<String>,
    /// Output path; stdout when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Time cells one at a time instead of across threads.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 1000)]
    instances: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure { code: EXIT_IO, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Count(args) => cmd_count(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Splits a pattern file into lines, dropping `\n` / `\r\n` terminators.
fn pattern_lines(bytes: &[u8]) -> Vec<Vec<u8>> {
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    if body.is_empty() {
        return Vec::new();
    }
    body.split(|&b| b == b'\n')
        .map(|line| line.strip_suffix(b"\r").unwrap_or(line).to_vec())
        .collect()
}

fn cmd_count(args: CountArgs) -> Result<(), Failure> {
    let engine: Engine = args.engine.parse().map_err(Failure::usage)?;
    let mode: Mode = args.mode.parse().map_err(Failure::usage)?;
    let machine = match args.format.as_str() {
        "plain" => false,
        "machine" => true,
        other => return Err(Failure::usage(format!("unknown format `{other}` (expected plain or machine)"))),
    };
    if args.window == 0 {
        return Err(Failure::usage("--window must be at least 1"));
    }

    let mut raw: Vec<Vec<u8>> = args.patterns.iter().map(|p| p.as_bytes().to_vec()).collect();
    if let Some(path) = &args.patterns_file {
        let bytes = fs::read(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
        raw.extend(pattern_lines(&bytes));
    }
    if raw.is_empty() {
        return Err(Failure::usage("no patterns given (use --patterns or --patterns-file)"));
    }
    let patterns = Pattern::parse_all(&raw).map_err(|e| Failure::usage(e.to_string()))?;

    let text = fs::read(&args.text).map_err(|e| Failure::io(format!("{}: {e}", args.text.display())))?;
    if args.window > text.len() {
        eprintln!(
            "warning: window {} is longer than the text ({} bytes); there are no windows",
            args.window,
            text.len()
        );
    }

    let report = matcher::count(engine, &text, &patterns, args.window, mode)
        .map_err(|e| Failure::usage(e.to_string()))?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let written = if machine {
        let names: Vec<String> = patterns.iter().map(|p| p.to_string()).collect();
        let obj = json!({
            "engine": engine.name(),
            "window": args.window,
            "mode": args.mode,
            "patterns": names,
            "windows_total": report.windows_total,
            "c_all": report.c_all,
            "c_each": report.c_each,
        });
        writeln!(out, "{obj}")
    } else {
        (|| {
            writeln!(out, "windows: {}", report.windows_total)?;
            if let Some(c) = report.c_all {
                writeln!(out, "all: {c}")?;
            }
            if let Some(each) = &report.c_each {
                for (p, c) in patterns.iter().zip(each) {
                    writeln!(out, "{p}: {c}")?;
                }
            }
            Ok(())
        })()
    };
    written.map_err(|e| Failure::io(e.to_string()))
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let regime: Regime = args.regime.parse().map_err(Failure::usage)?;
    let engines = args
        .engines
        .iter()
        .map(|e| e.parse::<Engine>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::usage)?;
    let grid = Grid {
        ns: args.n,
        qs: args.q,
        plens: args.plen,
        windows: args.window,
        alphabets: args.alphabet,
        regime,
        shared_prefix: args.shared_prefix,
        seed: args.seed,
        reps: args.reps,
        engines,
        sequential: args.sequential,
    };

    let rows = bench::run_grid(&grid).map_err(|e| match e {
        BenchError::Disagreement { .. } => Failure { code: EXIT_FAILED, message: e.to_string() },
        _ => Failure::usage(e.to_string()),
    })?;

    match &args.csv {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
            bench::write_csv(&rows, io::BufWriter::new(file)).map_err(|e| Failure::io(e.to_string()))?;
        }
        None => bench::write_csv(&rows, io::stdout().lock()).map_err(|e| Failure::io(e.to_string()))?,
    }

    let summary = bench::summarize(&rows);
    for s in &summary {
        eprintln!(
            "{:<10} n={} q={} plen_total={} w={} alphabet={} c_all={} median={:.3} ms over {} reps",
            s.engine,
            s.n,
            s.q,
            s.plen_total,
            s.w,
            s.alphabet,
            s.c_all,
            s.median_ns as f64 / 1e6,
            s.reps
        );
    }
    for (fast, slow) in [("mp-concat", "std-concat"), ("mp-trie", "std-trie"), ("std-trie", "std-concat")] {
        for s in summary.iter().filter(|s| s.engine == fast) {
            let other = summary.iter().find(|o| {
                o.engine == slow && (o.n, o.q, o.plen_total, o.w, o.alphabet) == (s.n, s.q, s.plen_total, s.w, s.alphabet)
            });
            if let Some(o) = other {
                eprintln!(
                    "speedup {fast} over {slow} (n={} q={} w={}): {:.2}x",
                    s.n,
                    s.q,
                    s.w,
                    o.median_ns as f64 / s.median_ns.max(1) as f64
                );
            }
        }
    }
    Ok(())
}

fn cmd_selftest(args: SelftestArgs) -> Result<(), Failure> {
    let report = selftest::run(args.instances, args.seed);
    for line in &report.lines {
        println!("{line}");
    }
    println!("random instances executed: {}", report.random_instances);
    if report.passed() {
        println!("selftest: all checks passed");
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_FAILED,
            message: format!("selftest failed: {}", report.failures.join(", ")),
        })
    }
}
