use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use netdiff_cli::bench::{self, BenchConfig};
use netdiff_cli::run;
use netdiff_cli::spec::RunSpec;
use netdiff_cli::CliError;
use netdiff_core::engine::Execution;
use netdiff_server::ServerConfig;
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "netdiff", version, about = "Diffusion simulation over static and dynamic networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExecArg {
    Parallel,
    Sequential,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON spec and write its artifacts.
    Run {
        spec: PathBuf,
        /// Worker threads for concurrent runs (default: all cores).
        #[arg(long, short = 'j')]
        jobs: Option<usize>,
    },
    /// Time SIR on Barabasi-Albert graphs, excluding graph construction.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1_000usize, 10_000, 100_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 25)]
        iterations: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, value_enum, default_value_t = ExecArg::Parallel)]
        execution: ExecArg,
        /// Print rows as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Serve the REST API.
    Serve {
        #[arg(long, env = "NETDIFF_LISTEN", default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        /// Experiment expiry in seconds since last use.
        #[arg(long, env = "NETDIFF_TTL", default_value_t = 3600)]
        ttl: u64,
        #[arg(long, env = "NETDIFF_EXPLORATORIES")]
        exploratories: Option<PathBuf>,
        #[arg(long, env = "NETDIFF_SNAPSHOTS")]
        snapshots: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { spec, jobs } => {
            if let Some(j) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(j.max(1))
                    .build_global()
                    .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
            }
            let spec = RunSpec::load(&spec)?;
            let report = run::run(&spec)?;
            for path in report.artifacts {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Bench { sizes, seed, reps, iterations, m, execution, json } => {
            let cfg = BenchConfig {
                sizes,
                seed,
                reps,
                iterations,
                m,
                execution: match execution {
                    ExecArg::Parallel => Execution::Parallel,
                    ExecArg::Sequential => Execution::Sequential,
                },
            };
            let mut rows = Vec::new();
            for &n in &cfg.sizes {
                let row = bench::bench_size(&cfg, n)?;
                if !json {
                    // Stream rows so long sweeps show progress.
                    if rows.is_empty() {
                        print!("{}", bench::table(&[]));
                    }
                    print!("{}", bench::table(std::slice::from_ref(&row)).lines().nth(1).unwrap_or_default());
                    println!();
                }
                rows.push(row);
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialise"));
            }
            Ok(())
        }
        Command::Serve { listen, ttl, exploratories, snapshots } => {
            let config = ServerConfig { listen, ttl: Duration::from_secs(ttl), exploratories, snapshots };
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
            rt.block_on(netdiff_server::serve(config)).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
