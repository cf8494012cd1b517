use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use repdtc::error::Result;
use repdtc::harness::{describe, estimate, find_preset, list_presets, run_experiment, run_verify_suite, ExperimentConfig, Lowering};

#[derive(Parser)]
#[command(name = "repdtc", version, about = "Large-period time crystals from repetition codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a config file.
    Run {
        target: String,
        #[arg(long, env = "REPDTC_SEED")]
        seed: Option<u64>,
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long)]
        cycles: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// pauli-layers, local-gadgets or native-iswap
        #[arg(long)]
        lowering: Option<String>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// List presets.
    List,
    /// Show the settings of a preset.
    Describe { preset: String },
    /// Run the compiler and oracle self-checks.
    Verify,
}

fn load(target: &str) -> Result<ExperimentConfig> {
    match find_preset(target) {
        Ok(p) => Ok(p.config()),
        Err(e) if !Path::new(target).exists() => Err(e),
        Err(_) => ExperimentConfig::load(Path::new(target)),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run {
            target,
            seed,
            realizations,
            cycles,
            out,
            lowering,
            threads,
        } => {
            let mut config = load(&target)?;
            if let Some(s) = seed {
                config.seed = s;
            }
            if let Some(r) = realizations {
                config.realizations = r;
            }
            if let Some(t) = cycles {
                config.cycles = t;
                config.window = t.min(500);
            }
            if let Some(l) = lowering {
                config.lowering = Lowering::parse(&l)?;
            }
            config.validate()?;
            let est = estimate(&config)?;
            eprintln!(
                "{}: {} qubits, {} gates/cycle, {} realizations × {} cycles, ~{:.0} s single-threaded",
                config.name, est.qubits, est.gates_per_cycle, config.realizations, config.cycles, est.seconds
            );
            let record = run_experiment(&config, threads)?;
            record.write_outputs(&out)?;
            let s = &record.scores;
            println!("score {:.3}  targets dominate: {}", s.subharmonic_score, s.targets_dominate);
            println!("peak Ω = {:.6}  |S| = {:.6}", s.peak_omega, s.peak_magnitude);
            println!("wrote {} in {:.1} s", out.display(), record.wall_time_secs);
            Ok(true)
        }
        Command::List => {
            print!("{}", list_presets());
            Ok(true)
        }
        Command::Describe { preset } => {
            print!("{}", describe(&preset)?);
            Ok(true)
        }
        Command::Verify => {
            let cases = run_verify_suite()?;
            for c in &cases {
                println!(
                    "{} {:<45} {:.3e} (< {:.0e})",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name,
                    c.deviation,
                    c.tolerance
                );
            }
            Ok(cases.iter().all(|c| c.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
