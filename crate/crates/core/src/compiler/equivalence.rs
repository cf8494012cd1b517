//! Unitary equivalence up to a global phase.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gadgets::GadgetSequence;
use super::native::NativeCircuit;
use crate::error::{Error, Result};
use crate::models::FloquetProgram;
use crate::statevector::{CompiledCircuit, Gate, StateVector};

/// Largest register compared with full matrices.
pub const DENSE_LIMIT: usize = 6;
/// Largest register accepted at all.
pub const PROBE_LIMIT: usize = 12;
const PROBE_COLUMNS: usize = 64;
const PROBE_RANDOM_STATES: usize = 4;

/// Anything that acts as a unitary on a fixed register.
pub trait UnitaryProgram {
    fn qubit_count(&self) -> usize;
    fn apply_to(&self, state: &mut StateVector) -> Result<()>;
}

impl UnitaryProgram for FloquetProgram {
    fn qubit_count(&self) -> usize {
        FloquetProgram::qubit_count(self)
    }
    fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        self.apply(state)
    }
}

impl UnitaryProgram for GadgetSequence {
    fn qubit_count(&self) -> usize {
        self.qubits
    }
    fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        state.apply_all(&self.gates())?;
        if self.global_phase != 0.0 {
            state.scale(Complex64::from_polar(1.0, self.global_phase));
        }
        Ok(())
    }
}

impl UnitaryProgram for NativeCircuit {
    fn qubit_count(&self) -> usize {
        self.qubits
    }
    fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        self.apply(state)
    }
}

impl UnitaryProgram for CompiledCircuit {
    fn qubit_count(&self) -> usize {
        CompiledCircuit::qubit_count(self)
    }
    fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        self.apply(state)
    }
}

/// A bare gate list on `qubits` qubits.
pub struct GateList<'a> {
    pub qubits: usize,
    pub gates: &'a [Gate],
    pub global_phase: f64,
}

impl UnitaryProgram for GateList<'_> {
    fn qubit_count(&self) -> usize {
        self.qubits
    }
    fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        state.apply_all(self.gates)?;
        if self.global_phase != 0.0 {
            state.scale(Complex64::from_polar(1.0, self.global_phase));
        }
        Ok(())
    }
}

/// Column `k` of the unitary.
pub fn column<P: UnitaryProgram + ?Sized>(p: &P, k: usize) -> Result<Vec<Complex64>> {
    let mut s = StateVector::basis_state(p.qubit_count(), k as u64)?;
    p.apply_to(&mut s)?;
    Ok(s.amplitudes().to_vec())
}

/// Dense unitary, `m[row][col]`.
pub fn dense_unitary<P: UnitaryProgram + ?Sized>(p: &P) -> Result<Vec<Vec<Complex64>>> {
    let q = p.qubit_count();
    if q > DENSE_LIMIT {
        return Err(Error::Capacity {
            requested: q,
            limit: DENSE_LIMIT,
        });
    }
    let dim = 1usize << q;
    let cols: Vec<Vec<Complex64>> = (0..dim).map(|k| column(p, k)).collect::<Result<_>>()?;
    Ok((0..dim).map(|r| (0..dim).map(|c| cols[c][r]).collect()).collect())
}

fn max_dev(pairs: &[(Vec<Complex64>, Vec<Complex64>)]) -> f64 {
    let overlap: Complex64 = pairs
        .iter()
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| y.conj() * x))
        .sum();
    let phase = if overlap.im == 0.0 && overlap.re > 0.0 {
        Complex64::new(1.0, 0.0)
    } else if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    pairs
        .iter()
        .flat_map(|(a, b)| a.iter().zip(b).map(move |(x, y)| (x - phase * y).norm()))
        .fold(0.0, f64::max)
}

/// Max elementwise deviation between `a` and `e^{iφ} b`, with `φ` fitted to
/// the overlap. Registers up to [`DENSE_LIMIT`] compare every column; larger
/// ones up to [`PROBE_LIMIT`] compare a spread of basis columns plus a few
/// random superpositions, which also catches relative phases between columns.
pub fn verify_equivalence<A, B>(a: &A, b: &B) -> Result<f64>
where
    A: UnitaryProgram + ?Sized,
    B: UnitaryProgram + ?Sized,
{
    let q = a.qubit_count();
    if b.qubit_count() != q {
        return Err(Error::dim(format!("comparing {q} qubits against {}", b.qubit_count())));
    }
    if q > PROBE_LIMIT {
        return Err(Error::Capacity {
            requested: q,
            limit: PROBE_LIMIT,
        });
    }
    let dim = 1usize << q;
    let mut pairs = Vec::new();
    if q <= DENSE_LIMIT {
        for k in 0..dim {
            pairs.push((column(a, k)?, column(b, k)?));
        }
        return Ok(max_dev(&pairs));
    }
    let step = dim / PROBE_COLUMNS;
    for i in 0..PROBE_COLUMNS {
        let k = (i * step + (i * 7919) % step.max(1)) % dim;
        pairs.push((column(a, k)?, column(b, k)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_e9);
    for _ in 0..PROBE_RANDOM_STATES {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let mut sa = StateVector::from_amplitudes(amps)?;
        sa.normalize();
        let mut sb = sa.clone();
        a.apply_to(&mut sa)?;
        b.apply_to(&mut sb)?;
        pairs.push((sa.amplitudes().to_vec(), sb.amplitudes().to_vec()));
    }
    Ok(max_dev(&pairs))
}
