//! Lowers one U4 cycle to iSWAP plus single-qubit rotations.

use repdtc::compiler::{lower_program_to_iswap, lower_rotation, verify_equivalence};
use repdtc::error::Result;
use repdtc::models::{build_model, ChainLayout, ModelId, ModelParams};
use repdtc::pauli::{PauliRotation, PauliString};

fn main() -> Result<()> {
    let zx = PauliRotation::new(0.4, PauliString::parse_with_qubits("Z0 X1", 2)?)?;
    print!("{}", lower_rotation(&zx)?.to_text());

    let layout = ChainLayout::new(2, 3)?;
    let program = build_model(ModelId::U4, layout, &ModelParams::ideal_uniform(ModelId::U4, layout, 1.5)?)?;
    let native = lower_program_to_iswap(&program)?;
    println!(
        "U4 on 2x3: {} native gates, {} iSWAPs, deviation {:.2e}",
        native.gates.len(),
        native.iswap_count(),
        verify_equivalence(&program, &native)?
    );
    Ok(())
}
