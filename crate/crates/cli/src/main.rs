use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use wheeler_core::automaton::{parse_automaton, serialize_automaton};
use wheeler_core::bench::{run_bench, write_csv, BenchConfig};
use wheeler_core::ov::{build_ov_dfa, ov_bruteforce, parse_ov, random_ov_instance, to_binary_alphabet, Force};
use wheeler_core::par::Execution;
use wheeler_core::recognizer::{analyze, InputMode, Report, Strategy};
use wheeler_core::regex::{compile_regex, parse_regex};

/// Decide whether a regular language is Wheeler.
#[derive(Parser)]
#[command(name = "wheeler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print `wheeler` or `non-wheeler`; exit 0, 1, or 2 on error.
    Check(CheckArgs),
    /// Generate the DFA of the orthogonal-vectors reduction.
    GenOv(GenOvArgs),
    /// Time the recognizer on random DFAs and emit CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true))]
struct CheckArgs {
    /// Automaton in the text format.
    #[arg(long, group = "input")]
    dfa: Option<PathBuf>,
    /// Regular expression over alphanumerics with `| * + ? ( )`.
    #[arg(long, group = "input")]
    regex: Option<String>,
    /// Write the full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Only print the verdict.
    #[arg(long)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ForceArg {
    Yes,
    No,
    Any,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("instance").required(true))]
struct GenOvArgs {
    /// Random instance: `N d seed`.
    #[arg(long, num_args = 3, value_names = ["N", "D", "SEED"], group = "instance")]
    random: Option<Vec<u64>>,
    /// Instance file: `N d`, then N vectors of A, then N of B.
    #[arg(long, group = "instance")]
    file: Option<PathBuf>,
    /// Whether a random instance must (not) contain an orthogonal pair.
    #[arg(long, value_enum, default_value = "any")]
    force: ForceArg,
    /// Re-encode over {0, 1}.
    #[arg(long)]
    binary_alphabet: bool,
    /// Report the brute-force answer on stderr.
    #[arg(long)]
    solve: bool,
    /// Output path; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [500, 1000, 2000, 4000, 8000, 16000])]
    sizes: Vec<usize>,
    /// Transitions per state.
    #[arg(long, default_value_t = 3)]
    edge_factor: usize,
    /// Alphabet size.
    #[arg(long, default_value_t = 3)]
    sigma: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1])]
    seeds: Vec<u64>,
    /// Output path; stdout if absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Run trials one after another.
    #[arg(long)]
    sequential: bool,
}

fn check(args: &CheckArgs) -> Result<bool> {
    let (dfa, mode) = match (&args.dfa, &args.regex) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let dfa = parse_automaton(&text).with_context(|| format!("parsing {}", path.display()))?;
            (dfa, InputMode::Dfa)
        }
        (None, Some(pattern)) => (compile_regex(&parse_regex(pattern)?)?, InputMode::Regex),
        (None, None) => bail!("one of --dfa or --regex is required"),
    };
    let report: Report = analyze(&dfa, Strategy::Pruned, mode)?.report;
    if let Some(path) = &args.json {
        let json = serde_json::to_string_pretty(&report)?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{}", if report.wheeler { "wheeler" } else { "non-wheeler" });
    if !args.quiet {
        eprintln!(
            "n={} m={} n_min={} m_min={} p={} square={}/{} total={:.2}ms",
            report.n,
            report.m,
            report.n_min,
            report.m_min,
            report.width_estimate,
            report.square_states,
            report.square_transitions,
            report.timings_ms.total
        );
        if let Some(w) = &report.witness {
            eprintln!("witness cycle of length {} labeled {}", w.cycle.len(), w.labels);
        }
    }
    Ok(report.wheeler)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn gen_ov(args: &GenOvArgs) -> Result<()> {
    let inst = match (&args.random, &args.file) {
        (Some(v), _) => {
            let force = match args.force {
                ForceArg::Yes => Force::Yes,
                ForceArg::No => Force::No,
                ForceArg::Any => Force::Any,
            };
            random_ov_instance(v[0] as usize, v[1] as usize, v[2], force)?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_ov(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, None) => bail!("one of --random or --file is required"),
    };
    if args.solve {
        match ov_bruteforce(&inst) {
            Some((r, s)) => eprintln!("orthogonal pair: a_{r}, b_{s}"),
            None => eprintln!("no orthogonal pair"),
        }
    }
    let (mut dfa, _) = build_ov_dfa(&inst)?;
    if args.binary_alphabet {
        dfa = to_binary_alphabet(&dfa)?;
    }
    emit(&args.out, &serialize_automaton(&dfa))
}

fn bench(args: &BenchArgs) -> Result<()> {
    let config = BenchConfig {
        sizes: args.sizes.clone(),
        edge_factor: args.edge_factor,
        sigma: args.sigma,
        seeds: args.seeds.clone(),
        execution: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let rows = run_bench(&config)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    emit(&args.csv, std::str::from_utf8(&buf)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Check(args) => check(args).map(|wheeler| if wheeler { 0 } else { 1 }),
        Command::GenOv(args) => gen_ov(args).map(|()| 0),
        Command::Bench(args) => bench(args).map(|()| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
