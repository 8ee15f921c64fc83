use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use msr_plan::allocation::AlgoParams;
use msr_plan::bench::{generate_scenario, run_cases, run_sweep, GenParams, SweepKind, SweepParams};
use msr_plan::io::{export_event_log, load_scenario, save_result, scenario_to_string};
use msr_plan::sim::run_scenario_with;

#[derive(Parser)]
#[command(name = "msr-plan", version, about = "Modular-robot configuration formation planner")]
struct Cli {
    /// Directory for output files when --out is not given; stdout otherwise.
    #[arg(long, global = true, env = "MSR_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct AlgoArgs {
    /// Maximum eviction chain depth.
    #[arg(long, default_value_t = 3)]
    dmax: u32,
    /// Embeddings considered per configuration.
    #[arg(long, default_value_t = 20)]
    max_embeddings: usize,
}

impl AlgoArgs {
    fn params(self) -> AlgoParams {
        AlgoParams {
            d_max: self.dmax,
            max_embeddings: self.max_embeddings,
            ..AlgoParams::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random scenario.
    Generate {
        #[arg(long, default_value_t = 10)]
        spots: usize,
        /// Defaults to the spot count.
        #[arg(long)]
        modules: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Give every configuration this exact size.
        #[arg(long)]
        equal_size: Option<usize>,
        /// No initial configurations.
        #[arg(long)]
        singletons: bool,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plan and act one scenario file; writes the result document.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the event log, one JSON record per line.
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Run one experiment sweep.
    Sweep {
        kind: SweepKind,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Run the case suite.
    Cases {
        #[arg(default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/cases"))]
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spot allocation against the auction on singleton-only scenarios.
    CompareAuction {
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 50)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sweep points, comma separated; defaults depend on the kind.
    #[arg(long, value_delimiter = ',')]
    points: Option<Vec<usize>>,
    /// Target size for sweeps over another variable.
    #[arg(long)]
    spots: Option<usize>,
    /// table1: glue the target together from configuration-shaped pieces.
    #[arg(long)]
    glued_targets: bool,
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(text: &str, out: Option<PathBuf>, out_dir: Option<&Path>, default_name: &str) -> Result<(), String> {
    let path = out.or_else(|| out_dir.map(|d| d.join(default_name)));
    match path {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| format!("{}: {e}", parent.display()))?;
            }
            std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep(kind: SweepKind, args: SweepArgs, out_dir: Option<&Path>) -> Result<(), String> {
    let params = SweepParams {
        runs: args.runs,
        seed: args.seed,
        points: args.points,
        n_spots: args.spots,
        algo: args.algo.params(),
        glued_targets: args.glued_targets,
    };
    let report = run_sweep(kind, &params);
    let (text, ext) = match args.format {
        Format::Csv => (report.to_csv(), "csv"),
        Format::Json => (report.to_json(), "json"),
    };
    emit(&text, args.out, out_dir, &format!("{kind}.{ext}"))?;
    if !report.failures.is_empty() {
        eprintln!("{} run(s) failed", report.failures.len());
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), String> {
    let out_dir = cli.out_dir.as_deref();
    match cli.command {
        Command::Generate { spots, modules, seed, equal_size, singletons, algo, out } => {
            let mut p = GenParams::new(spots, seed);
            p.n_modules = modules;
            p.equal_config_size = equal_size;
            p.algo_params = algo.params();
            if singletons {
                p = p.singletons_only();
            }
            let scenario = generate_scenario(&p).map_err(|e| e.to_string())?;
            emit(&scenario_to_string(&scenario), out, out_dir, &format!("scenario_{spots}_{seed}.json"))
        }
        Command::Run { scenario, algo, out, events } => {
            let s = load_scenario(&scenario).map_err(|e| e.to_string())?;
            let result = run_scenario_with(&s, algo.params()).map_err(|e| e.to_string())?;
            let m = &result.metrics;
            eprintln!(
                "complete={} planning={:.3}ms broadcasts={} disconnections={} evictions={} distance={:.3} utility={:.4}",
                result.complete,
                m.planning_wall_time * 1e3,
                m.broadcast_count,
                m.disconnection_count,
                m.eviction_count,
                m.total_distance,
                m.total_utility
            );
            if let Some(path) = events {
                export_event_log(&result, path).map_err(|e| e.to_string())?;
            }
            match out.or_else(|| out_dir.map(|d| d.join("result.json"))) {
                Some(path) => save_result(&result, &path).map_err(|e| e.to_string()),
                None => {
                    println!("{}", serde_json::to_string_pretty(&result).map_err(|e| e.to_string())?);
                    Ok(())
                }
            }
        }
        Command::Sweep { kind, sweep: args } => sweep(kind, args, out_dir),
        Command::CompareAuction { sweep: args } => sweep(SweepKind::AuctionCompare, args, out_dir),
        Command::Cases { dir, out } => {
            let reports = run_cases(&dir).map_err(|e| e.to_string())?;
            let mut text = String::from("case,modules,spots,planning_time_ms,disconnections,expected_max,no_spot_found,ok\n");
            for r in &reports {
                text.push_str(&format!(
                    "{},{},{},{:.3},{},{},{},{}\n",
                    r.name,
                    r.modules,
                    r.spots,
                    r.planning_time_ms,
                    r.disconnections,
                    r.expected_max_disconnections,
                    r.no_spot_found,
                    r.meets_expectation()
                ));
            }
            emit(&text, out, out_dir, "cases.csv")
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
