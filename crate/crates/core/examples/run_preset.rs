//! Runs a shortened preset and writes its CSV and JSON outputs.
//!
//! `cargo run --release --example run_preset -- fig5b out/fig5b`

use std::path::PathBuf;

use repdtc::error::Result;
use repdtc::harness::{estimate, preset, run_experiment};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fig2a".into());
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/example".into()));

    let mut config = preset(&name)?;
    config.realizations = config.realizations.min(10);
    let est = estimate(&config)?;
    println!("{} qubits, {} gates per cycle, about {:.1} s", est.qubits, est.gates_per_cycle, est.seconds);

    let record = run_experiment(&config, 2)?;
    record.write_outputs(&out)?;
    let s = &record.scores;
    println!(
        "score {:.3}, targets dominate {}, peak Ω = {:.4}, written to {}",
        s.subharmonic_score,
        s.targets_dominate,
        s.peak_omega,
        out.display()
    );
    Ok(())
}
