//! Draws disordered parameters for a few realizations of a preset.

use repdtc::disorder::{sample_model_params, SeedPlan};
use repdtc::error::Result;
use repdtc::harness::preset;

fn main() -> Result<()> {
    let config = preset("fig2a")?;
    let layout = config.layout()?;
    let plan = SeedPlan::new(config.seed);
    for r in 0..3 {
        let p = sample_model_params(config.model, layout, &config.disorder, &plan, r)?;
        println!("realization {r}");
        println!("  couplings {:?}", p.couplings);
        println!("  field     {:?}", p.field);
        println!("  cnot zx   {:?}", p.cnots[0].zx);
    }
    let again = sample_model_params(config.model, layout, &config.disorder, &plan, 0)?;
    let first = sample_model_params(config.model, layout, &config.disorder, &plan, 0)?;
    println!("replay identical: {}", again == first);
    Ok(())
}
