//! Thin command-line front end over the library: run experiments from a
//! config file, list built-in topologies, and export workload CSVs.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eonsim::config::ExperimentConfig;
use eonsim::error::Error;
use eonsim::topology::Topology;
use eonsim::workload::{self, WorkloadSpec, DEFAULT_FR_MAX, DEFAULT_FR_MIN};
use eonsim::harness;

#[derive(Parser)]
#[command(
    name = "eonsim",
    version,
    about = "Dual-link-failure survivability simulator for elastic optical networks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiment described by a key-value config file.
    Run {
        /// Path to the config file.
        #[arg(long)]
        config: PathBuf,
        /// Also write per-cell spectrum grid dumps under <out>/grids/.
        #[arg(long)]
        dump_grid: bool,
    },
    /// List the built-in topologies.
    Topologies,
    /// Generate a seeded workload CSV.
    Workload {
        /// Built-in topology name or `file:<path>`.
        #[arg(long)]
        topology: String,
        /// Number of requests (at most the topology's node-pair count).
        #[arg(long)]
        count: usize,
        /// Generator seed.
        #[arg(long)]
        seed: u64,
        /// Output CSV path (`-` for stdout).
        #[arg(long)]
        out: PathBuf,
        /// Smallest slot demand.
        #[arg(long, default_value_t = DEFAULT_FR_MIN)]
        fr_min: usize,
        /// Largest slot demand.
        #[arg(long, default_value_t = DEFAULT_FR_MAX)]
        fr_max: usize,
    },
}

fn load_topology(spec: &str) -> eonsim::Result<Topology> {
    match spec.strip_prefix("file:") {
        Some(path) => Topology::load_file(std::path::Path::new(path.trim())),
        None => Topology::load_builtin(spec),
    }
}

fn run(cli: Cli) -> eonsim::Result<()> {
    match cli.cmd {
        Cmd::Run { config, dump_grid } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            cfg.dump_grids = dump_grid;
            let (exp, result) = harness::execute(&cfg)?;
            println!(
                "{}: {} schemes x {} sweep points x {} seeds, {} failure scenarios",
                result.topology,
                result.schemes.len(),
                result.sweep.len(),
                result.seeds.len(),
                result.scenario_count,
            );
            for s in &result.summary {
                println!(
                    "  {}: mean bbp {:.6}, mean rt {} us, mean bpr {}",
                    s.scheme,
                    s.mean_bbp,
                    s.mean_rt_us.map(|v| format!("{v:.1}")).unwrap_or_else(|| "-".into()),
                    s.mean_bpr.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into()),
                );
            }
            println!("wrote {}", exp.out_dir.display());
            Ok(())
        }
        Cmd::Topologies => {
            for name in Topology::builtin_names() {
                let t = Topology::load_builtin(name)?;
                println!(
                    "{name}: {} nodes, {} links, {} slots/link",
                    t.node_count(),
                    t.link_count(),
                    t.slot_capacity()
                );
            }
            Ok(())
        }
        Cmd::Workload { topology, count, seed, out, fr_min, fr_max } => {
            let t = load_topology(&topology)?;
            let spec = WorkloadSpec { count, fr_min, fr_max, seed };
            let requests = workload::generate(&t, &spec)?;
            let csv = workload::to_csv(&requests);
            if out.as_os_str() == "-" {
                print!("{csv}");
            } else {
                std::fs::write(&out, csv)?;
                println!("wrote {} requests to {}", requests.len(), out.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version exit 0; usage errors are validation errors.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_of(&err))
        }
    }
}

fn exit_code_of(err: &Error) -> u8 {
    err.exit_code() as u8
}
