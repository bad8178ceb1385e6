//! Command-line front end: solve one instance, run the experiment grids, or
//! run the verification battery.

use clap::{Parser, Subcommand};
use shadowlp::experiment::{run_pivots, run_sections, write_csv, ExperimentConfig};
use shadowlp::io::{read_instance, InstanceError};
use shadowlp::randgen::{stream, Purpose};
use shadowlp::verify::{run_all, VerifyConfig};
use shadowlp::{solve_lp, SolverOptions};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;

#[derive(Parser)]
#[command(name = "shadowlp", version, about = "Shadow-vertex simplex solver and experiment harness")]
struct Cli {
    /// Worker threads for trial-level parallelism (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the instance in a JSON file and print a JSON report.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Pivot counts over a grid of (n, d, sigma); writes CSV.
    ExperimentPivots(ExperimentArgs),
    /// Edge counts of random planar sections over a grid; writes CSV.
    ExperimentSections(ExperimentArgs),
    /// Run the acceptance suites; prints one line per suite and a JSON summary.
    Verify {
        /// JSON object overriding suite sizes.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON summary here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the output path in the config; standard output if neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn solve(file: &Path, seed: u64) -> ExitCode {
    let lp = match read_instance(file) {
        Ok(lp) => lp,
        Err(e @ InstanceError::Io { .. }) => return fail(EXIT_FAILURE, e),
        Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", file.display())),
    };
    match solve_lp(&lp, &mut stream(seed, Purpose::Phase1, 0), &SolverOptions::default()) {
        Ok(res) => {
            let report = serde_json::json!({
                "status": res.status,
                "basis": res.basis,
                "x_opt": res.x_opt,
                "objective": res.objective,
                "pivots_phase1": res.pivots_phase1,
                "pivots_phase2": res.pivots_phase2,
                "phase1_iterations": res.phase1_iterations,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable report"));
            ExitCode::SUCCESS
        }
        Err(e) => fail(EXIT_FAILURE, format!("numeric failure: {e}")),
    }
}

fn experiment(args: &ExperimentArgs, sections: bool) -> ExitCode {
    let mut cfg = match ExperimentConfig::read(&args.config) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    let opts = SolverOptions::default();
    let written = output(cfg.out.as_deref()).map_err(|e| e.to_string()).and_then(|mut w| {
        let r = if sections {
            write_csv(&mut w, &run_sections(&cfg, &opts))
        } else {
            write_csv(&mut w, &run_pivots(&cfg, &opts))
        };
        r.map_err(|e| e.to_string())?;
        w.flush().map_err(|e| e.to_string())
    });
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_FAILURE, e),
    }
}

fn verify(config: Option<&Path>, seed: Option<u64>, out: Option<&Path>) -> ExitCode {
    let mut cfg = match config {
        None => VerifyConfig::default(),
        Some(p) => {
            let parsed = std::fs::read_to_string(p)
                .map_err(|e| e.to_string())
                .and_then(|t| serde_json::from_str::<VerifyConfig>(&t).map_err(|e| e.to_string()));
            match parsed {
                Ok(c) => c,
                Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", p.display())),
            }
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let summary = run_all(&cfg);
    for s in &summary.suites {
        eprintln!("{}", s.line());
    }
    let written = output(out).and_then(|mut w| {
        writeln!(w, "{}", serde_json::to_string_pretty(&summary).expect("serializable summary"))?;
        w.flush()
    });
    if let Err(e) = written {
        return fail(EXIT_FAILURE, e);
    }
    if summary.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            return fail(EXIT_FAILURE, e);
        }
    }
    match &cli.command {
        Command::Solve { file, seed } => solve(file, *seed),
        Command::ExperimentPivots(args) => experiment(args, false),
        Command::ExperimentSections(args) => experiment(args, true),
        Command::Verify { config, seed, out } => verify(config.as_deref(), *seed, out.as_deref()),
    }
}
