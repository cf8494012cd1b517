//! Dense statevector engine.
//!
//! Bit `q` of an amplitude index is qubit `q`; bit value 0 is the `Z = +1`
//! eigenstate. Pauli rotations are applied analytically through
//! `exp(−iθP) = cos θ − i sin θ P`, one pass over amplitude pairs.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliRotation;

pub const MAX_QUBITS: usize = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(qubits: usize) -> Result<Self> {
        Self::basis_state(qubits, 0)
    }

    /// Basis state whose index has bit `q` set iff qubit `q` is `|1⟩`.
    pub fn basis_state(qubits: usize, index: u64) -> Result<Self> {
        check_capacity(qubits)?;
        if qubits == 0 {
            return Err(Error::dim("a register needs at least one qubit"));
        }
        let dim = 1usize << qubits;
        if index as usize >= dim {
            return Err(Error::dim(format!("basis index {index} outside 2^{qubits}")));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index as usize] = ONE;
        Ok(StateVector { qubits, amplitudes })
    }

    /// Basis state from per-qubit bits, `bits[q]` being qubit `q`.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        check_capacity(bits.len())?;
        let index = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (q, &b)| acc | ((b as u64) << q));
        Self::basis_state(bits.len(), index)
    }

    /// Wraps raw amplitudes; the length must be a power of two. No normalization is applied.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::dim(format!("{len} amplitudes is not a qubit register")));
        }
        let qubits = len.trailing_zeros() as usize;
        check_capacity(qubits)?;
        Ok(StateVector { qubits, amplitudes })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amplitudes {
                *a /= n;
            }
        }
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.qubits {
            return Err(Error::dim(format!("qubit {q} outside a {}-qubit register", self.qubits)));
        }
        Ok(())
    }

    /// `⟨a|b⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.qubits != other.qubits {
            return Err(Error::dim(format!(
                "states on {} and {} qubits",
                self.qubits, other.qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.check(self.qubits)?;
        match gate {
            Gate::Rotation(r) => apply_rotation(&mut self.amplitudes, r),
            Gate::Single { qubit, matrix } => apply_single(&mut self.amplitudes, *qubit, matrix),
            Gate::Two { q1, q2, matrix } => apply_two(&mut self.amplitudes, *q1, *q2, matrix),
            Gate::ISwap { q1, q2, inverse } => {
                let angle = if *inverse { -std::f64::consts::FRAC_PI_4 } else { std::f64::consts::FRAC_PI_4 };
                apply_xy(&mut self.amplitudes, *q1, *q2, angle)
            }
            Gate::XyRotation { q1, q2, angle } => apply_xy(&mut self.amplitudes, *q1, *q2, *angle),
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Probability that qubit `q` reads 0.
    pub fn prob_zero(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    pub fn expectation_z(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let mut acc = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if i & bit == 0 {
                acc += a.norm_sqr();
            } else {
                acc -= a.norm_sqr();
            }
        }
        Ok(acc)
    }

    /// `⟨Z_q⟩` for every qubit in one pass.
    pub fn expectation_z_all(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.qubits];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            for (q, o) in out.iter_mut().enumerate() {
                if (i >> q) & 1 == 0 {
                    *o += p;
                } else {
                    *o -= p;
                }
            }
        }
        out
    }

    /// Empirical `⟨Z_q⟩` from `shots` independent single-qubit measurements.
    pub fn sample_z<R: Rng + ?Sized>(&self, q: usize, shots: u32, rng: &mut R) -> Result<f64> {
        if shots == 0 {
            return Err(Error::config("shots must be at least 1"));
        }
        let p0 = self.prob_zero(q)?.clamp(0.0, 1.0);
        Ok(sample_from_prob(p0, shots, rng))
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Little-endian `(re, im)` f64 pairs in index order.
    pub fn write_amplitudes<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for a in &self.amplitudes {
            out.write_all(&a.re.to_le_bytes())?;
            out.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_amplitudes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() % 16 != 0 {
            return Err(Error::Parse("amplitude dump length is not a multiple of 16".into()));
        }
        let amps = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        Self::from_amplitudes(amps)
    }
}

pub(crate) fn sample_from_prob<R: Rng + ?Sized>(p0: f64, shots: u32, rng: &mut R) -> f64 {
    let mut zeros = 0u32;
    for _ in 0..shots {
        if rng.gen::<f64>() < p0 {
            zeros += 1;
        }
    }
    (2.0 * zeros as f64 - shots as f64) / shots as f64
}

pub fn check_capacity(qubits: usize) -> Result<()> {
    if qubits > MAX_QUBITS {
        return Err(Error::Capacity {
            requested: qubits,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

pub type Matrix2 = [[Complex64; 2]; 2];
pub type Matrix4 = [[Complex64; 4]; 4];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    Rotation(PauliRotation),
    Single {
        qubit: usize,
        matrix: Matrix2,
    },
    /// Local basis index is `2·bit(q1) + bit(q2)`.
    Two {
        q1: usize,
        q2: usize,
        matrix: Matrix4,
    },
    /// `exp(∓iπ/4·(X X + Y Y))`, the minus sign for the forward gate.
    ISwap {
        q1: usize,
        q2: usize,
        inverse: bool,
    },
    /// `exp(−i·angle·(X X + Y Y))`; `angle = π/4` is the forward iSWAP.
    XyRotation {
        q1: usize,
        q2: usize,
        angle: f64,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Rotation(r) => r.pauli().support(),
            Gate::Single { qubit, .. } => vec![*qubit],
            Gate::Two { q1, q2, .. } | Gate::ISwap { q1, q2, .. } | Gate::XyRotation { q1, q2, .. } => {
                vec![*q1, *q2]
            }
        }
    }

    fn check(&self, qubits: usize) -> Result<()> {
        if let Gate::Rotation(r) = self {
            if r.qubit_count() != qubits {
                return Err(Error::dim(format!(
                    "rotation on {} qubits applied to a {qubits}-qubit state",
                    r.qubit_count()
                )));
            }
            return Ok(());
        }
        let qs = self.qubits();
        if let Some(q) = qs.iter().find(|&&q| q >= qubits) {
            return Err(Error::dim(format!("qubit {q} outside a {qubits}-qubit register")));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::dim(format!("two-qubit gate on repeated qubit {}", qs[0])));
        }
        Ok(())
    }

    /// True when the gate is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        matches!(self, Gate::Rotation(r) if r.pauli().is_diagonal())
    }
}

#[inline]
fn insert_zero_bit(i: usize, pos: u32) -> usize {
    let low = i & ((1usize << pos) - 1);
    let high = i >> pos;
    (high << (pos + 1)) | low
}

#[inline]
fn parity(x: usize) -> bool {
    x.count_ones() & 1 == 1
}

pub(crate) fn apply_rotation(amps: &mut [Complex64], rot: &PauliRotation) {
    if rot.angle == 0.0 {
        return;
    }
    let (x, z, ny) = rot.pauli().masks();
    apply_pauli_exp(amps, x as usize, z as usize, ny, rot.angle);
}

/// `exp(−iθP)` with `P = i^ny X^x Z^z` on the given masks.
pub(crate) fn apply_pauli_exp(amps: &mut [Complex64], x: usize, z: usize, ny: u32, theta: f64) {
    let (s, c) = theta.sin_cos();
    if x == 0 {
        // P|b⟩ = (−1)^{|b∧z|}|b⟩
        let plus = Complex64::new(c, -s);
        let minus = Complex64::new(c, s);
        for (b, a) in amps.iter_mut().enumerate() {
            *a *= if parity(b & z) { minus } else { plus };
        }
        return;
    }
    // P|b⟩ = i^ny (−1)^{|b∧z|} |b⊕x⟩
    let k = Complex64::new(0.0, -s) * crate::pauli::Phase::from_power(ny as i64).to_complex();
    let pivot = x.trailing_zeros();
    let half = amps.len() / 2;
    for i in 0..half {
        let b = insert_zero_bit(i, pivot);
        let bp = b ^ x;
        let sb = if parity(b & z) { -k } else { k };
        let sbp = if parity(bp & z) { -k } else { k };
        let ab = amps[b];
        let abp = amps[bp];
        amps[b] = ab * c + sbp * abp;
        amps[bp] = abp * c + sb * ab;
    }
}

pub(crate) fn apply_single(amps: &mut [Complex64], q: usize, m: &Matrix2) {
    let half = amps.len() / 2;
    let bit = 1usize << q;
    for i in 0..half {
        let b0 = insert_zero_bit(i, q as u32);
        let b1 = b0 | bit;
        let a0 = amps[b0];
        let a1 = amps[b1];
        amps[b0] = m[0][0] * a0 + m[0][1] * a1;
        amps[b1] = m[1][0] * a0 + m[1][1] * a1;
    }
}

pub(crate) fn apply_two(amps: &mut [Complex64], q1: usize, q2: usize, m: &Matrix4) {
    let (lo, hi) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
    let b1 = 1usize << q1;
    let b2 = 1usize << q2;
    let quarter = amps.len() / 4;
    for i in 0..quarter {
        let base = insert_zero_bit(insert_zero_bit(i, lo as u32), hi as u32);
        let idx = [base, base | b2, base | b1, base | b1 | b2];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for r in 0..4 {
            amps[idx[r]] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
    }
}

/// `exp(−iφ(XX+YY))` acts as `cos 2φ − i sin 2φ σx` on `{|01⟩, |10⟩}`.
pub(crate) fn apply_xy(amps: &mut [Complex64], q1: usize, q2: usize, angle: f64) {
    let (lo, hi) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
    let b1 = 1usize << q1;
    let b2 = 1usize << q2;
    let (s, c) = (2.0 * angle).sin_cos();
    let off = Complex64::new(0.0, -s);
    let quarter = amps.len() / 4;
    for i in 0..quarter {
        let base = insert_zero_bit(insert_zero_bit(i, lo as u32), hi as u32);
        let i01 = base | b2;
        let i10 = base | b1;
        let a = amps[i01];
        let b = amps[i10];
        amps[i01] = a * c + off * b;
        amps[i10] = b * c + off * a;
    }
}

/// A gate list with consecutive diagonal rotations fused into one phase table.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    qubits: usize,
    ops: Vec<Op>,
}

#[derive(Clone, Debug)]
enum Op {
    Diagonal(Vec<Complex64>),
    Exp { x: usize, z: usize, ny: u32, theta: f64 },
    Gate(Gate),
}

impl CompiledCircuit {
    pub fn new<'a>(qubits: usize, gates: impl IntoIterator<Item = &'a Gate>, global_phase: f64) -> Result<Self> {
        check_capacity(qubits)?;
        let dim = 1usize << qubits;
        let mut ops = Vec::new();
        let mut pending: Option<Vec<f64>> = None;
        let flush = |pending: &mut Option<Vec<f64>>, ops: &mut Vec<Op>| {
            if let Some(phases) = pending.take() {
                ops.push(Op::Diagonal(phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect()));
            }
        };
        for g in gates {
            g.check(qubits)?;
            match g {
                Gate::Rotation(r) if r.pauli().is_diagonal() => {
                    if r.angle == 0.0 {
                        continue;
                    }
                    let (_, z, _) = r.pauli().masks();
                    let z = z as usize;
                    let phases = pending.get_or_insert_with(|| vec![0.0; dim]);
                    for (b, p) in phases.iter_mut().enumerate() {
                        *p += if parity(b & z) { r.angle } else { -r.angle };
                    }
                }
                Gate::Rotation(r) => {
                    flush(&mut pending, &mut ops);
                    if r.angle != 0.0 {
                        let (x, z, ny) = r.pauli().masks();
                        ops.push(Op::Exp {
                            x: x as usize,
                            z: z as usize,
                            ny,
                            theta: r.angle,
                        });
                    }
                }
                other => {
                    flush(&mut pending, &mut ops);
                    ops.push(Op::Gate(other.clone()));
                }
            }
        }
        if global_phase != 0.0 {
            let phases = pending.get_or_insert_with(|| vec![0.0; dim]);
            for p in phases.iter_mut() {
                *p += global_phase;
            }
        }
        flush(&mut pending, &mut ops);
        Ok(CompiledCircuit { qubits, ops })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        if state.qubit_count() != self.qubits {
            return Err(Error::dim(format!(
                "circuit on {} qubits applied to a {}-qubit state",
                self.qubits,
                state.qubit_count()
            )));
        }
        let amps = state.amplitudes_mut();
        for op in &self.ops {
            match op {
                Op::Diagonal(d) => {
                    for (a, p) in amps.iter_mut().zip(d) {
                        *a *= p;
                    }
                }
                Op::Exp { x, z, ny, theta } => apply_pauli_exp(amps, *x, *z, *ny, *theta),
                Op::Gate(g) => match g {
                    Gate::Rotation(r) => apply_rotation(amps, r),
                    Gate::Single { qubit, matrix } => apply_single(amps, *qubit, matrix),
                    Gate::Two { q1, q2, matrix } => apply_two(amps, *q1, *q2, matrix),
                    Gate::ISwap { q1, q2, inverse } => {
                        let a = if *inverse { -std::f64::consts::FRAC_PI_4 } else { std::f64::consts::FRAC_PI_4 };
                        apply_xy(amps, *q1, *q2, a)
                    }
                    Gate::XyRotation { q1, q2, angle } => apply_xy(amps, *q1, *q2, *angle),
                },
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Pauli, PauliString};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

    fn rot(theta: f64, s: &str, n: usize) -> Gate {
        Gate::Rotation(PauliRotation::new(theta, PauliString::parse_with_qubits(s, n).unwrap()).unwrap())
    }

    #[test]
    fn basis_state_bit_convention() {
        let s = StateVector::from_bits(&[true, false]).unwrap();
        assert_eq!(s.amplitudes()[1], ONE);
        let s = StateVector::basis_state(2, 0).unwrap();
        assert_eq!(s.amplitudes()[0], ONE);
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(
            StateVector::zero(MAX_QUBITS + 1),
            Err(Error::Capacity { requested: 25, limit: 24 })
        ));
    }

    #[test]
    fn flipping_every_qubit_reaches_last_index() {
        let mut s = StateVector::zero(8).unwrap();
        for q in 0..8 {
            s.apply(&rot(FRAC_PI_2, &format!("X{q}"), 8)).unwrap();
        }
        assert!((s.amplitudes()[255].norm() - 1.0).abs() < 1e-12);
        for q in 0..8 {
            assert!((s.expectation_z(q).unwrap() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_angle_is_bit_exact_identity() {
        let mut s = StateVector::zero(3).unwrap();
        s.apply(&rot(0.3, "X0 Y2", 3)).unwrap();
        let before = s.clone();
        s.apply(&rot(0.0, "Z0 Y1 X2", 3)).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn half_pi_x_rotation() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply(&rot(FRAC_PI_2, "X0", 1)).unwrap();
        let a = s.amplitudes();
        assert!(a[0].norm() < 1e-15);
        assert!((a[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn pi_over_eight_magnetization() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply(&rot(FRAC_PI_8, "X0", 1)).unwrap();
        assert!((s.expectation_z(0).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn out_of_range_qubit() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(s.expectation_z(2).is_err());
        assert!(s.apply(&Gate::ISwap { q1: 0, q2: 5, inverse: false }).is_err());
        let wrong = Gate::Rotation(PauliRotation::new(0.1, PauliString::single(3, 0, Pauli::X)).unwrap());
        assert!(s.apply(&wrong).is_err());
    }

    #[test]
    fn fidelity_ignores_global_phase() {
        let mut a = StateVector::zero(2).unwrap();
        a.apply(&rot(0.4, "X0 Y1", 2)).unwrap();
        let mut b = a.clone();
        b.scale(Complex64::from_polar(1.0, 1.234));
        assert!((a.fidelity(&b).unwrap() - 1.0).abs() < 1e-14);
        let z = StateVector::basis_state(1, 0).unwrap();
        let o = StateVector::basis_state(1, 1).unwrap();
        assert_eq!(z.fidelity(&o).unwrap(), 0.0);
    }

    #[test]
    fn deterministic_sampling() {
        let s = StateVector::zero(1).unwrap();
        let mut rng = rand::thread_rng();
        assert_eq!(s.sample_z(0, 17, &mut rng).unwrap(), 1.0);
        assert!(s.sample_z(0, 0, &mut rng).is_err());
    }

    #[test]
    fn amplitude_dump_round_trips() {
        let mut s = StateVector::zero(3).unwrap();
        s.apply(&rot(0.7, "Y0 X2", 3)).unwrap();
        let mut buf = Vec::new();
        s.write_amplitudes(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 * 16);
        assert_eq!(StateVector::read_amplitudes(&buf).unwrap(), s);
    }

    #[test]
    fn fused_circuit_matches_gate_by_gate() {
        let gates = vec![
            rot(0.3, "Z0 Z1", 3),
            rot(-0.2, "Z2", 3),
            rot(0.5, "X1", 3),
            rot(0.1, "Z1 Z2", 3),
            Gate::ISwap { q1: 0, q2: 2, inverse: false },
            rot(0.9, "Z0", 3),
        ];
        let mut a = StateVector::zero(3).unwrap();
        a.apply(&rot(0.4, "Y0 X1 X2", 3)).unwrap();
        let mut b = a.clone();
        a.apply_all(&gates).unwrap();
        a.scale(Complex64::from_polar(1.0, 0.25));
        CompiledCircuit::new(3, &gates, 0.25).unwrap().apply(&mut b).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}
