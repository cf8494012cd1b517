//! Breaks long Pauli rotations into nearest-neighbour pieces.

use repdtc::compiler::{decompose, lower_ccnot_local, verify_equivalence, Role};
use repdtc::error::Result;
use repdtc::models::{build_transversal_ccnot_layer, ChainLayout, FloquetProgram};
use repdtc::pauli::PauliString;

fn main() -> Result<()> {
    let layout = ChainLayout::new(5, 1)?;
    for text in ["Z0 Z1 Z2 X3", "Z0 X3", "Z0 Z4"] {
        let target = PauliString::parse_with_qubits(text, 5)?;
        let seq = decompose(&layout, &target, 0.37)?;
        seq.check_local(&layout)?;
        println!(
            "exp(-i 0.37 {text}): {} rotations ({} dressing)",
            seq.len(),
            seq.count(Role::Dressing)
        );
        for r in &seq.rotations {
            println!("    {r}");
        }
    }

    let l3 = ChainLayout::new(3, 1)?;
    let local = lower_ccnot_local(&l3, (0, 1), 2, 0, 1.0)?;
    let layer = FloquetProgram::new(l3, vec![build_transversal_ccnot_layer(l3, (0, 1), 2, &[1.0])?]);
    println!(
        "local CCNOT: {} rotations, deviation from the three-body form {:.2e}",
        local.len(),
        verify_equivalence(&layer, &local)?
    );
    Ok(())
}
