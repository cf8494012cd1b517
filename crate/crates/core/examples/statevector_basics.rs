//! Pauli rotations and measurement on a small register.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use repdtc::error::Result;
use repdtc::pauli::{Pauli, PauliRotation, PauliString};
use repdtc::statevector::{Gate, StateVector};

fn main() -> Result<()> {
    let mut s = StateVector::zero(3)?;
    s.apply(&Gate::Rotation(PauliRotation::new(FRAC_PI_2, PauliString::single(3, 0, Pauli::X))?))?;
    println!("after X on qubit 0: {:?}", s.expectation_z_all());

    let zx = PauliString::parse_with_qubits("Z0 X1", 3)?;
    s.apply(&Gate::Rotation(PauliRotation::new(0.3, zx)?))?;
    s.apply(&Gate::ISwap { q1: 1, q2: 2, inverse: false })?;
    println!("<Z> per qubit: {:?}", s.expectation_z_all());
    println!("norm: {:.15}", s.norm());

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q in 0..3 {
        println!("qubit {q}: 1000-shot estimate {:+.3}", s.sample_z(q, 1000, &mut rng)?);
    }
    Ok(())
}
