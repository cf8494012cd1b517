//! Multiplying, commuting and conjugating Pauli strings.

use repdtc::error::Result;
use repdtc::pauli::{clifford_conjugate, PauliString};

fn main() -> Result<()> {
    let a = PauliString::parse_with_qubits("Z0 X1", 3)?;
    let b = PauliString::parse_with_qubits("Y1 X2", 3)?;
    println!("({a}) · ({b}) = {}", a.multiply(&b)?);
    println!("anticommute: {}", a.anticommutes(&b)?);

    // moving Y1 X2 through a π/4 rotation about Z0 X1
    let r = clifford_conjugate(&a, 1, &b)?;
    println!("conjugated: {} (trivial: {})", r.result, r.trivial);

    let zz = PauliString::parse_with_qubits("Z0 Z1", 3)?;
    let r = clifford_conjugate(&zz, -1, &PauliString::parse_with_qubits("Z1 Z2", 3)?)?;
    println!("commuting case: {} (trivial: {})", r.result, r.trivial);
    Ok(())
}
