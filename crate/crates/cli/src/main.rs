use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use convex_approx::algorithms::{
    dual_benson_exact_with, filter_redundant, grid_algorithm_with, oaa_with, RunOptions,
};
use convex_approx::numeric::to_f64;
use convex_approx::quality::convex_indicator;
use convex_approx::scalarization::{Oracle, OracleKind};
use convex_approx::toolkit::bench::{run_bench, AlgorithmKind, BenchConfig, NumberText};
use convex_approx::toolkit::generators::{GeneratorKind, GeneratorSpec};
use convex_approx::toolkit::io::{parse_instance, parse_solutions, write_instance, write_solutions};
use convex_approx::{Error, ProblemInstance, Result, SolutionRecord};

#[derive(Parser)]
#[command(name = "convex-approx", version, about = "Convex approximation sets for multiobjective problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    KnapsackUniform,
    KnapsackConflicting,
    Tsp,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance.
    Generate {
        #[arg(long, value_enum)]
        kind: Generator,
        #[arg(long)]
        n: usize,
        /// Number of objectives.
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute an approximation set for an instance.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// oaa, grid or benson-exact.
        #[arg(long, default_value = "oaa")]
        algorithm: String,
        /// Accuracy, as a decimal or a fraction such as 1/10. Ignored by benson-exact.
        #[arg(long, default_value = "1/10")]
        epsilon: String,
        /// greedy, dp, christofides, double-tree or held-karp.
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        time_limit_ms: Option<u64>,
    },
    /// Exact reference set: dual Benson with an exact oracle, redundant points removed.
    Reference {
        #[arg(long)]
        instance: PathBuf,
        /// dp or held-karp.
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        time_limit_ms: Option<u64>,
    },
    /// Convex indicator of a solution file against a reference file.
    Indicator {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solutions: PathBuf,
        #[arg(long)]
        reference: PathBuf,
    },
    /// Run a benchmark described by a TOML file.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Configuration(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn options(time_limit_ms: Option<u64>) -> RunOptions {
    match time_limit_ms {
        Some(ms) => RunOptions::with_time_limit(Duration::from_millis(ms)),
        None => RunOptions::default(),
    }
}

fn load_instance(path: &Path) -> Result<ProblemInstance> {
    parse_instance(&read(path)?)
}

fn solve(
    instance: &ProblemInstance,
    algorithm: AlgorithmKind,
    epsilon: &str,
    oracle: &Oracle,
    options: &RunOptions,
) -> Result<Vec<SolutionRecord>> {
    if algorithm == AlgorithmKind::BensonExact {
        return dual_benson_exact_with(instance, oracle, options);
    }
    let eps = NumberText::Text(epsilon.to_string()).to_rational()?;
    let result = match algorithm {
        AlgorithmKind::Oaa => oaa_with(instance, oracle, &eps, options)?,
        _ => grid_algorithm_with(instance, oracle, &eps, options)?,
    };
    log::info!(
        "{} solutions from {} oracle calls in {:.1} ms",
        result.solutions.len(),
        result.oracle_calls,
        result.wall_time.as_secs_f64() * 1e3
    );
    Ok(result.solutions)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { kind, n, d, seed, out } => {
            let kind = match kind {
                Generator::KnapsackUniform => GeneratorKind::KnapsackUniform,
                Generator::KnapsackConflicting => GeneratorKind::KnapsackConflicting,
                Generator::Tsp => GeneratorKind::Tsp,
            };
            let instance = GeneratorSpec { kind, n, d, seed }.generate()?;
            emit(out.as_deref(), &write_instance(&instance)?)
        }
        Command::Solve { instance, algorithm, epsilon, oracle, out, time_limit_ms } => {
            let instance = load_instance(&instance)?;
            let algorithm = AlgorithmKind::parse(&algorithm)?;
            let oracle = Oracle::new(OracleKind::parse(&oracle)?);
            let solutions = solve(&instance, algorithm, &epsilon, &oracle, &options(time_limit_ms))?;
            emit(out.as_deref(), &write_solutions(&instance, &solutions))
        }
        Command::Reference { instance, oracle, out, time_limit_ms } => {
            let instance = load_instance(&instance)?;
            let oracle = Oracle::new(OracleKind::parse(&oracle)?);
            let all = dual_benson_exact_with(&instance, &oracle, &options(time_limit_ms))?;
            let kept = filter_redundant(&all, instance.sense())?;
            log::info!("{} reference points ({} before filtering)", kept.len(), all.len());
            emit(out.as_deref(), &write_solutions(&instance, &kept))
        }
        Command::Indicator { instance, solutions, reference } => {
            let instance = load_instance(&instance)?;
            let images = |path: &Path| -> Result<Vec<_>> {
                Ok(parse_solutions(&read(path)?, &instance)?.into_iter().map(|s| s.image).collect())
            };
            let report = convex_indicator(&images(&solutions)?, &images(&reference)?, instance.sense())?;
            let weight: Vec<String> = report.argmax_weight.components().iter().map(|w| w.to_string()).collect();
            println!("indicator {} ({:.6})", report.value, to_f64(&report.value));
            println!("weight {}", weight.join(" "));
            Ok(())
        }
        Command::Bench { config } => {
            let config = BenchConfig::from_toml(&read(&config)?)?;
            let (records, files) = run_bench(&config)?;
            log::info!("{} rows", records.len());
            for f in files {
                println!("{}", f.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
