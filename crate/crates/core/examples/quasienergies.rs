//! Checks the quasienergy ladder of the modulo-2^n drive.

use repdtc::error::Result;
use repdtc::models::{build_model, ChainLayout, ModelId, ModelParams};
use repdtc::oracle::check_quasienergy_spectrum;

fn main() -> Result<()> {
    for n in 1..=3 {
        let layout = ChainLayout::new(n, 3)?;
        let model = ModelId::U2n(n);
        let program = build_model(model, layout, &ModelParams::ideal_uniform(model, layout, 0.8)?)?;
        let report = check_quasienergy_spectrum(&program)?;
        println!(
            "n = {n}: spacing {:.6}, max residual {:.1e}, passed {}",
            report.expected_spacing,
            report.max_residual(),
            report.passed
        );
        for e in &report.entries {
            println!("    ℓ = {}: ε = {:+.6}", e.ell, e.measured_quasienergy);
        }
    }
    Ok(())
}
