use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dualitylab_cli::{aggregate_exit, list_scenarios, parse_batch, run_batch, ScenarioConfig, THREADS_ENV};

#[derive(Parser)]
#[command(name = "dualitylab", version, about = "Centralizer algebras on tensor powers of classical representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and print its report.
    Verify(VerifyArgs),
    /// List the registered scenarios.
    List,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "batch")]
    scenario: Option<String>,
    /// so, so-odd, so-even, sp or gl.
    #[arg(long, required_unless_present = "batch")]
    family: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    /// Comma-separated parts, e.g. 2,1,1.
    #[arg(long)]
    partition: Option<String>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// rational, prime or prime:<p>.
    #[arg(long, default_value = "rational")]
    field: String,
    /// trace or killing.
    #[arg(long, default_value = "trace")]
    normalization: String,
    #[arg(long)]
    normality_table: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here and a text copy next to it.
    #[arg(long)]
    report: Option<PathBuf>,
    /// JSON array of configurations, run concurrently.
    #[arg(long, conflicts_with_all = ["scenario", "family"])]
    batch: Option<PathBuf>,
}

fn configs(a: VerifyArgs) -> Result<Vec<ScenarioConfig>, String> {
    if let Some(path) = a.batch {
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        return parse_batch(&text).map_err(|e| e.0);
    }
    Ok(vec![ScenarioConfig {
        scenario: a.scenario.unwrap_or_default(),
        family: a.family.unwrap_or_default(),
        rank: a.rank,
        dim: a.dim,
        partition: a.partition,
        d: a.d,
        field: a.field,
        normalization: a.normalization,
        normality_table: a.normality_table,
        seed: a.seed,
        report: a.report,
    }])
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for (name, citation) in list_scenarios() {
                println!("{name}\t{citation}");
            }
            ExitCode::SUCCESS
        }
        Command::Verify(args) => {
            if let Err(e) = init_threads() {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            let configs = match configs(args) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let results = run_batch(&configs);
            for (cfg, r) in configs.iter().zip(&results) {
                match r {
                    Ok(rep) => {
                        print!("{}", rep.to_text());
                        if let Some(path) = &cfg.report {
                            if let Err(e) = rep.write(path) {
                                eprintln!("error: writing {}: {e}", path.display());
                                return ExitCode::from(1);
                            }
                        }
                    }
                    Err(e) => eprintln!("error: {} ({}): {e}", cfg.scenario, cfg.family),
                }
                if configs.len() > 1 {
                    println!("----");
                }
            }
            ExitCode::from(aggregate_exit(&results) as u8)
        }
    }
}
