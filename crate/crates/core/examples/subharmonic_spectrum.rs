//! Magnetization series, spectrum and score for an ideal U4 drive.

use std::f64::consts::PI;

use repdtc::error::Result;
use repdtc::models::{build_model, ChainLayout, ModelId, ModelParams};
use repdtc::observables::{
    power_spectrum, prepare_initial_state, stroboscopic_run, subharmonic_score, subharmonics, Scope,
    DEFAULT_SCORE_CEILING,
};

fn main() -> Result<()> {
    let layout = ChainLayout::new(2, 4)?;
    let program = build_model(ModelId::U4, layout, &ModelParams::ideal_uniform(ModelId::U4, layout, 1.0)?)?;
    let initial = prepare_initial_state(layout.qubit_count(), PI / 8.0)?;

    for scope in [Scope::Average, Scope::Qubit(4)] {
        let series = stroboscopic_run(&program, &initial, 64, scope)?;
        let spectrum = power_spectrum(&series, 64)?;
        let targets = [PI / 2.0, 3.0 * PI / 2.0];
        let top = spectrum.ranked_non_dc()[0];
        println!("{scope:?}");
        println!("  first cycles {:?}", &series.values[..6]);
        println!("  top bin Ω = {:.4}, |S| = {:.4}", spectrum.omegas[top], spectrum.magnitudes[top]);
        println!("  score at π/2, 3π/2: {:.3}", subharmonic_score(&spectrum, &targets, DEFAULT_SCORE_CEILING)?);
    }
    println!("period-4 subharmonics: {:?}", subharmonics(4));
    Ok(())
}
