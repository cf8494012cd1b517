//! Lowering to single-qubit rotations and iSWAP.
//!
//! `exp(−iθ Z_c X_t)` is `iSWAP · R_Y(θ)_c · iSWAP⁻¹` and `exp(−iθ Z_c Y_t)` is
//! `iSWAP⁻¹ · R_X(θ)_c · iSWAP`. Any other weight-two letter pair is first
//! rotated onto one of these by `±π/4` single-qubit Cliffords, and the
//! resulting sign is read off symbolically.

use std::f64::consts::FRAC_PI_4;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::FloquetProgram;
use crate::pauli::{clifford_conjugate, Pauli, PauliRotation, PauliString};
use crate::statevector::{check_capacity, Gate, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum NativeGate {
    /// `R_S(θ) = exp(−iθ S)`.
    Rot { axis: Axis, qubit: usize, angle: f64 },
    ISwap { q1: usize, q2: usize },
    ISwapInv { q1: usize, q2: usize },
}

impl NativeGate {
    pub fn is_two_qubit(&self) -> bool {
        !matches!(self, NativeGate::Rot { .. })
    }

    pub fn to_gate(&self, qubits: usize) -> Result<Gate> {
        Ok(match *self {
            NativeGate::Rot { axis, qubit, angle } => {
                Gate::Rotation(PauliRotation::new(angle, PauliString::single(qubits, qubit, axis.pauli()))?)
            }
            NativeGate::ISwap { q1, q2 } => Gate::ISwap { q1, q2, inverse: false },
            NativeGate::ISwapInv { q1, q2 } => Gate::ISwap { q1, q2, inverse: true },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NativeCircuit {
    pub qubits: usize,
    pub gates: Vec<NativeGate>,
    pub global_phase: f64,
}

impl NativeCircuit {
    pub fn new(qubits: usize) -> Self {
        NativeCircuit {
            qubits,
            gates: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn iswap_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn to_gates(&self) -> Result<Vec<Gate>> {
        self.gates.iter().map(|g| g.to_gate(self.qubits)).collect()
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        state.apply_all(&self.to_gates()?)?;
        if self.global_phase != 0.0 {
            state.scale(num_complex::Complex64::from_polar(1.0, self.global_phase));
        }
        Ok(())
    }

    pub fn append(&mut self, other: &NativeCircuit) {
        self.gates.extend_from_slice(&other.gates);
        self.global_phase += other.global_phase;
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl fmt::Display for NativeCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(s, "QUBITS {}", self.qubits)?;
        if self.global_phase != 0.0 {
            writeln!(s, "PHASE {}", num(self.global_phase))?;
        }
        for g in &self.gates {
            match g {
                NativeGate::Rot { axis, qubit, angle } => {
                    let name = match axis {
                        Axis::X => "RX",
                        Axis::Y => "RY",
                        Axis::Z => "RZ",
                    };
                    writeln!(s, "{name} q{qubit} {}", num(*angle))?;
                }
                NativeGate::ISwap { q1, q2 } => writeln!(s, "ISWAP q{q1} q{q2}")?,
                NativeGate::ISwapInv { q1, q2 } => writeln!(s, "ISWAPINV q{q1} q{q2}")?,
            }
        }
        f.write_str(&s)
    }
}

impl FromStr for NativeCircuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut qubits = None;
        let mut phase = 0.0;
        let mut gates = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: `{raw}`", n + 1));
            let qubit = |t: &str| -> Result<usize> {
                t.strip_prefix('q')
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| bad("expected a qubit like q3"))
            };
            let real = |t: &str| -> Result<f64> { t.parse().map_err(|_| bad("expected a number")) };
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["QUBITS", n] => qubits = Some(n.parse::<usize>().map_err(|_| bad("expected a count"))?),
                ["PHASE", x] => phase = real(x)?,
                [name @ ("RX" | "RY" | "RZ"), q, x] => {
                    let axis = match *name {
                        "RX" => Axis::X,
                        "RY" => Axis::Y,
                        _ => Axis::Z,
                    };
                    gates.push(NativeGate::Rot {
                        axis,
                        qubit: qubit(q)?,
                        angle: real(x)?,
                    });
                }
                ["ISWAP", a, b] => gates.push(NativeGate::ISwap { q1: qubit(a)?, q2: qubit(b)? }),
                ["ISWAPINV", a, b] => gates.push(NativeGate::ISwapInv { q1: qubit(a)?, q2: qubit(b)? }),
                _ => return Err(bad("unrecognised gate")),
            }
        }
        let max_q = gates
            .iter()
            .map(|g| match *g {
                NativeGate::Rot { qubit, .. } => qubit + 1,
                NativeGate::ISwap { q1, q2 } | NativeGate::ISwapInv { q1, q2 } => q1.max(q2) + 1,
            })
            .max()
            .unwrap_or(0);
        let qubits = qubits.unwrap_or(max_q);
        if max_q > qubits {
            return Err(Error::Parse(format!("gate on qubit {} in a {qubits}-qubit circuit", max_q - 1)));
        }
        check_capacity(qubits)?;
        Ok(NativeCircuit {
            qubits,
            gates,
            global_phase: phase,
        })
    }
}

fn unsupported(p: &PauliString, reason: &str) -> Error {
    Error::Compilation {
        pauli: p.to_string(),
        reason: reason.into(),
    }
}

/// Single-qubit Clifford `R_S(φ)`, `φ = ±π/4`, such that the time order
/// `[R, core, R†]` turns a `from` letter of the core into `to`.
fn basis_change(from: Pauli, to: Pauli) -> Option<(Axis, f64)> {
    if from == to {
        return None;
    }
    let axis = match (from, to) {
        (Pauli::Z, Pauli::X) | (Pauli::X, Pauli::Z) => Axis::Y,
        (Pauli::Z, Pauli::Y) | (Pauli::Y, Pauli::Z) => Axis::X,
        _ => Axis::Z,
    };
    Some((axis, FRAC_PI_4))
}

/// Lowers `exp(−iθ·P)` for `|P| ≤ 2`.
pub fn lower_rotation(rot: &PauliRotation) -> Result<NativeCircuit> {
    let p = rot.pauli();
    let q = p.qubit_count();
    let mut out = NativeCircuit::new(q);
    let support = p.support();
    match support.len() {
        0 => {
            out.global_phase = -rot.angle;
            return Ok(out);
        }
        1 => {
            let axis = match p.letter(support[0]) {
                Pauli::X => Axis::X,
                Pauli::Y => Axis::Y,
                _ => Axis::Z,
            };
            out.gates.push(NativeGate::Rot {
                axis,
                qubit: support[0],
                angle: rot.angle,
            });
            return Ok(out);
        }
        2 => {}
        _ => return Err(unsupported(p, "weight above two; lower to local gadgets first")),
    }
    let (mut c, mut t) = (support[0], support[1]);
    if p.letter(c) != Pauli::Z && p.letter(t) == Pauli::Z {
        std::mem::swap(&mut c, &mut t);
    }
    let (lc, lt) = (p.letter(c), p.letter(t));
    let core_target = if lt == Pauli::X { Pauli::X } else { Pauli::Y };

    // time order: B_c, B_t, core, B_t†, B_c†; unitary is exp(−iθ' B† core B)
    let mut pre: Vec<(Axis, usize, f64)> = Vec::new();
    if let Some((a, phi)) = basis_change(Pauli::Z, lc) {
        pre.push((a, c, phi));
    }
    if let Some((a, phi)) = basis_change(core_target, lt) {
        pre.push((a, t, phi));
    }
    let core = PauliString::from_sparse(q, &[(c, Pauli::Z), (t, core_target)])?;
    let mut effective = core.clone();
    for &(axis, qubit, phi) in pre.iter().rev() {
        let g = PauliString::single(q, qubit, axis.pauli());
        // B† P B with B = exp(−iφS) is the conjugation with sign φ/(π/4)
        effective = clifford_conjugate(&g, (phi / FRAC_PI_4).round() as i8, &effective)?.result;
    }
    let unsigned = effective.unsigned();
    if unsigned.letters() != p.letters() {
        return Err(unsupported(p, "no single-qubit basis change reaches this letter pair"));
    }
    let sign = if effective == unsigned { 1.0 } else { -1.0 };
    let theta = sign * rot.angle;

    for &(axis, qubit, phi) in &pre {
        out.gates.push(NativeGate::Rot { axis, qubit, angle: phi });
    }
    match core_target {
        Pauli::X => {
            out.gates.push(NativeGate::ISwapInv { q1: c, q2: t });
            out.gates.push(NativeGate::Rot {
                axis: Axis::Y,
                qubit: c,
                angle: theta,
            });
            out.gates.push(NativeGate::ISwap { q1: c, q2: t });
        }
        _ => {
            out.gates.push(NativeGate::ISwap { q1: c, q2: t });
            out.gates.push(NativeGate::Rot {
                axis: Axis::X,
                qubit: c,
                angle: theta,
            });
            out.gates.push(NativeGate::ISwapInv { q1: c, q2: t });
        }
    }
    for &(axis, qubit, phi) in pre.iter().rev() {
        out.gates.push(NativeGate::Rot {
            axis,
            qubit,
            angle: -phi,
        });
    }
    Ok(out)
}

/// Lowers a gate list of Pauli rotations (weight ≤ 2) and iSWAPs.
pub fn lower_to_iswap(qubits: usize, gates: &[Gate]) -> Result<NativeCircuit> {
    let mut out = NativeCircuit::new(qubits);
    for g in gates {
        match g {
            Gate::Rotation(r) => {
                if r.qubit_count() != qubits {
                    return Err(Error::dim("rotation register size differs from the circuit"));
                }
                out.append(&lower_rotation(r)?);
            }
            Gate::ISwap { q1, q2, inverse } => out.gates.push(if *inverse {
                NativeGate::ISwapInv { q1: *q1, q2: *q2 }
            } else {
                NativeGate::ISwap { q1: *q1, q2: *q2 }
            }),
            other => {
                return Err(Error::Compilation {
                    pauli: format!("{other:?}"),
                    reason: "dense gates have no native lowering".into(),
                })
            }
        }
    }
    Ok(out)
}

/// One period as a native circuit, through the local gadget lowering.
pub fn lower_program_to_iswap(program: &FloquetProgram) -> Result<NativeCircuit> {
    let local = super::gadgets::lower_program_local(program)?;
    let mut out = lower_to_iswap(local.qubit_count(), &local.gates())?;
    out.global_phase += local.global_phase();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_bit_exact() {
        let mut c = NativeCircuit::new(3);
        c.global_phase = -0.1;
        c.gates = vec![
            NativeGate::Rot {
                axis: Axis::Y,
                qubit: 2,
                angle: std::f64::consts::FRAC_PI_4,
            },
            NativeGate::ISwap { q1: 0, q2: 1 },
            NativeGate::ISwapInv { q1: 1, q2: 2 },
            NativeGate::Rot {
                axis: Axis::X,
                qubit: 0,
                angle: 1.0 / 3.0,
            },
        ];
        let text = c.to_text();
        assert!(text.contains("RY q2 7.8539816339744828e-1"));
        assert_eq!(text.parse::<NativeCircuit>().unwrap(), c);
    }

    #[test]
    fn zero_angle_keeps_the_iswap_pair() {
        let r = PauliRotation::new(0.0, PauliString::parse_with_qubits("Z0 X1", 2).unwrap()).unwrap();
        let c = lower_rotation(&r).unwrap();
        assert_eq!(c.iswap_count(), 2);
    }

    #[test]
    fn weight_three_is_rejected() {
        let r = PauliRotation::new(0.3, PauliString::parse_with_qubits("Z0 Z1 X2", 3).unwrap()).unwrap();
        assert!(matches!(lower_rotation(&r), Err(Error::Compilation { .. })));
    }

    #[test]
    fn bad_lines_are_reported() {
        assert!("RY q0".parse::<NativeCircuit>().is_err());
        assert!("FOO q0 q1".parse::<NativeCircuit>().is_err());
        assert!("QUBITS 1\nISWAP q0 q1".parse::<NativeCircuit>().is_err());
    }
}
