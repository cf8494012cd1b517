//! Follows each ideal model through its logical cycle.

use repdtc::error::Result;
use repdtc::models::{build_model, ChainLayout, ModelId, ModelParams};

fn label(bits: usize, chains: usize) -> String {
    (0..chains).map(|s| if bits >> s & 1 == 1 { '1' } else { '0' }).collect()
}

fn main() -> Result<()> {
    for model in [ModelId::U4, ModelId::U3, ModelId::U8, ModelId::U2n(3)] {
        let chains = model.chains();
        let layout = ChainLayout::new(chains, 3)?;
        let params = ModelParams::ideal_uniform(model, layout, 1.3)?;
        let program = build_model(model, layout, &params)?;
        let labels: Vec<String> = program.layers.iter().map(|l| l.kind.label()).collect();
        println!("{model}: layers {labels:?}, period {}", model.period());

        let mut state = layout.logical_index_state(0)?;
        let mut path = vec![label(0, chains)];
        for _ in 0..model.period() {
            program.apply(&mut state)?;
            let j = (0..1 << chains)
                .max_by(|&a, &b| {
                    let fa = state.fidelity(&layout.logical_index_state(a).unwrap()).unwrap();
                    let fb = state.fidelity(&layout.logical_index_state(b).unwrap()).unwrap();
                    fa.total_cmp(&fb)
                })
                .unwrap_or(0);
            path.push(label(j, chains));
        }
        println!("  {}", path.join(" -> "));
    }
    Ok(())
}
