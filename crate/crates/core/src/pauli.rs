//! Exact Pauli-string algebra.
//!
//! A [`PauliString`] is a phase from the fourth roots of unity times a tensor
//! product of single-qubit letters. Products, commutation tests and
//! conjugation by `exp(±iπ/4 G)` are all exact; no floating point is involved.
//!
//! Qubits are indexed flat. For an array of chains the convention used by the
//! whole crate is `q = chain * sites + site` (both zero based).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Single-qubit product `self · other` as `(i^k, letter)`.
    pub fn mul(self, other: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, X) => (Phase::I, Y),
            (Y, X) => (Phase::MINUS_I, Z),
            (Z, Y) => (Phase::MINUS_I, X),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }

    pub fn anticommutes(self, other: Pauli) -> bool {
        self != Pauli::I && other != Pauli::I && self != other
    }

    pub fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// A phase `i^k`, `k mod 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: i64) -> Phase {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        use num_complex::Complex64 as C;
        match self.0 {
            0 => C::new(1.0, 0.0),
            1 => C::new(0.0, 1.0),
            2 => C::new(-1.0, 0.0),
            _ => C::new(0.0, -1.0),
        }
    }

    pub fn neg(self) -> Phase {
        self * Phase::MINUS_ONE
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: Phase,
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(qubits: usize) -> Self {
        PauliString {
            phase: Phase::ONE,
            letters: vec![Pauli::I; qubits],
        }
    }

    pub fn new(phase: Phase, letters: Vec<Pauli>) -> Self {
        PauliString { phase, letters }
    }

    /// Builds a string from `(qubit, letter)` pairs; unlisted qubits are `I`.
    pub fn from_sparse(qubits: usize, terms: &[(usize, Pauli)]) -> Result<Self> {
        let mut letters = vec![Pauli::I; qubits];
        for &(q, p) in terms {
            if q >= qubits {
                return Err(Error::dim(format!("qubit {q} outside a {qubits}-qubit register")));
            }
            if letters[q] != Pauli::I {
                return Err(Error::Parse(format!("qubit {q} listed twice")));
            }
            letters[q] = p;
        }
        Ok(PauliString {
            phase: Phase::ONE,
            letters,
        })
    }

    /// Single-letter string on `qubit`.
    pub fn single(qubits: usize, qubit: usize, p: Pauli) -> Self {
        let mut s = PauliString::identity(qubits);
        s.letters[qubit] = p;
        s
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn letter(&self, q: usize) -> Pauli {
        self.letters[q]
    }

    pub fn qubit_count(&self) -> usize {
        self.letters.len()
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(q, _)| q)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.letters.iter().all(|p| !p.has_x())
    }

    /// Same letters, phase reset to `+1`.
    pub fn unsigned(&self) -> PauliString {
        PauliString {
            phase: Phase::ONE,
            letters: self.letters.clone(),
        }
    }

    /// Bit masks `(x, z)` and the number of `Y` letters; valid for at most 64 qubits.
    pub fn masks(&self) -> (u64, u64, u32) {
        let mut x = 0u64;
        let mut z = 0u64;
        let mut ny = 0;
        for (q, p) in self.letters.iter().enumerate() {
            if p.has_x() {
                x |= 1 << q;
            }
            if p.has_z() {
                z |= 1 << q;
            }
            if *p == Pauli::Y {
                ny += 1;
            }
        }
        (x, z, ny)
    }

    fn check_same_size(&self, other: &PauliString) -> Result<()> {
        if self.letters.len() != other.letters.len() {
            return Err(Error::dim(format!(
                "Pauli strings on {} and {} qubits",
                self.letters.len(),
                other.letters.len()
            )));
        }
        Ok(())
    }

    /// Exact operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_same_size(other)?;
        let mut phase = self.phase * other.phase;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (ph, p) = a.mul(b);
                phase = phase * ph;
                p
            })
            .collect();
        Ok(PauliString { phase, letters })
    }

    pub fn anticommutes(&self, other: &PauliString) -> Result<bool> {
        self.check_same_size(other)?;
        let count = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| a.anticommutes(**b))
            .count();
        Ok(count % 2 == 1)
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.anticommutes(other).map(|a| !a)
    }

    /// Parses the canonical text form with an explicit register size.
    pub fn parse_with_qubits(text: &str, qubits: usize) -> Result<Self> {
        let (phase, terms) = parse_terms(text)?;
        let s = PauliString::from_sparse(qubits, &terms)?;
        Ok(s.with_phase(phase))
    }
}

fn parse_terms(text: &str) -> Result<(Phase, Vec<(usize, Pauli)>)> {
    let mut phase = Phase::ONE;
    let mut terms = Vec::new();
    let normalized = text.replace('\u{2212}', "-");
    for (i, tok) in normalized.split_whitespace().enumerate() {
        let parsed_phase = match tok {
            "+" | "+1" => Some(Phase::ONE),
            "-" | "-1" => Some(Phase::MINUS_ONE),
            "+i" | "i" => Some(Phase::I),
            "-i" => Some(Phase::MINUS_I),
            _ => None,
        };
        if let Some(p) = parsed_phase {
            if i != 0 {
                return Err(Error::Parse(format!("phase `{tok}` must come first")));
            }
            phase = p;
            continue;
        }
        let mut chars = tok.chars();
        let letter = chars
            .next()
            .and_then(Pauli::from_char)
            .ok_or_else(|| Error::Parse(format!("bad token `{tok}`")))?;
        let index: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Parse(format!("bad qubit index in `{tok}`")))?;
        if letter != Pauli::I {
            terms.push((index, letter));
        }
    }
    Ok((phase, terms))
}

impl FromStr for PauliString {
    type Err = Error;

    /// Register size is inferred as one past the largest index mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let (phase, terms) = parse_terms(s)?;
        let qubits = terms.iter().map(|(q, _)| q + 1).max().unwrap_or(0);
        Ok(PauliString::from_sparse(qubits, &terms)?.with_phase(phase))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.phase != Phase::ONE {
            parts.push(self.phase.to_string());
        }
        for (q, p) in self.letters.iter().enumerate() {
            if *p != Pauli::I {
                parts.push(format!("{p}{q}"));
            }
        }
        if self.is_identity() {
            parts.push("I".into());
        }
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}|{}", self.qubit_count(), self))
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        let (n, body) = raw
            .split_once('|')
            .ok_or_else(|| serde::de::Error::custom("expected `<qubits>|<pauli>`"))?;
        let n: usize = n.parse().map_err(serde::de::Error::custom)?;
        PauliString::parse_with_qubits(body, n).map_err(serde::de::Error::custom)
    }
}

/// Result of [`clifford_conjugate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjugated {
    pub result: PauliString,
    /// `true` when generator and target commute and the target came back unchanged.
    pub trivial: bool,
}

/// `exp(+i·sign·π/4·G) · T · exp(−i·sign·π/4·G)`.
///
/// For anticommuting `G`, `T` this is `(i·sign)·G·T`.
pub fn clifford_conjugate(generator: &PauliString, sign: i8, target: &PauliString) -> Result<Conjugated> {
    if generator.anticommutes(target)? {
        let base = generator.multiply(target)?;
        let factor = if sign >= 0 { Phase::I } else { Phase::MINUS_I };
        Ok(Conjugated {
            result: PauliString {
                phase: base.phase * factor,
                letters: base.letters,
            },
            trivial: false,
        })
    } else {
        Ok(Conjugated {
            result: target.clone(),
            trivial: true,
        })
    }
}

/// The unitary `exp(−i·angle·pauli)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliRotation {
    pub angle: f64,
    pauli: PauliString,
}

impl PauliRotation {
    /// Folds a `−1` phase into the angle. Imaginary phases are rejected since
    /// the generator would not be Hermitian.
    pub fn new(angle: f64, pauli: PauliString) -> Result<Self> {
        match pauli.phase() {
            Phase::ONE => Ok(PauliRotation { angle, pauli }),
            Phase::MINUS_ONE => Ok(PauliRotation {
                angle: -angle,
                pauli: pauli.unsigned(),
            }),
            _ => Err(Error::Parse(format!("non-Hermitian generator {pauli}"))),
        }
    }

    pub fn pauli(&self) -> &PauliString {
        &self.pauli
    }

    pub fn qubit_count(&self) -> usize {
        self.pauli.qubit_count()
    }

    pub fn inverse(&self) -> PauliRotation {
        PauliRotation {
            angle: -self.angle,
            pauli: self.pauli.clone(),
        }
    }
}

impl fmt::Display for PauliRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(-i {} [{}])", self.angle, self.pauli)
    }
}
