//! Dense-matrix reference implementations for cross-checking the kernels.
//! Qubit `q` is bit `q` of a basis index.
#![allow(dead_code)]

use num_complex::Complex64 as C;

use repdtc::compiler::UnitaryProgram;
use repdtc::statevector::StateVector;

pub const ZERO: C = C { re: 0.0, im: 0.0 };
pub const ONE: C = C { re: 1.0, im: 0.0 };
pub const I: C = C { re: 0.0, im: 1.0 };

#[derive(Clone, Debug)]
pub struct Mat {
    pub dim: usize,
    pub data: Vec<C>,
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        Mat {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[C]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (c, v) in row.iter().enumerate() {
                m.data[r * dim + c] = *v;
            }
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> C {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.dim, o.dim);
        let n = self.dim;
        let mut m = Mat::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.at(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    m.data[r * n + c] += a * o.at(k, c);
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: C) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn dagger(&self) -> Mat {
        let n = self.dim;
        let mut m = Mat::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.set(c, r, self.at(r, c).conj());
            }
        }
        m
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.at(r, c) * v[c]).sum())
            .collect()
    }
}

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli2(letter: char) -> [[C; 2]; 2] {
    match letter {
        'I' => [[ONE, ZERO], [ZERO, ONE]],
        'X' => [[ZERO, ONE], [ONE, ZERO]],
        'Y' => [[ZERO, -I], [I, ZERO]],
        'Z' => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("bad letter {letter}"),
    }
}

/// Tensor product of per-qubit 2×2 factors, `factors[q]` on qubit `q`.
pub fn kron(factors: &[[[C; 2]; 2]]) -> Mat {
    let n = factors.len();
    let dim = 1 << n;
    let mut m = Mat::zeros(dim);
    for r in 0..dim {
        for col in 0..dim {
            let mut v = ONE;
            for (q, f) in factors.iter().enumerate() {
                v *= f[(r >> q) & 1][(col >> q) & 1];
                if v == ZERO {
                    break;
                }
            }
            m.set(r, col, v);
        }
    }
    m
}

/// Pauli operator from `(qubit, letter)` pairs.
pub fn pauli(n: usize, terms: &[(usize, char)]) -> Mat {
    let mut f = vec![pauli2('I'); n];
    for &(q, l) in terms {
        f[q] = pauli2(l);
    }
    kron(&f)
}

/// Pauli operator from text like "Z0 X2".
pub fn pauli_text(n: usize, text: &str) -> Mat {
    let terms: Vec<(usize, char)> = text
        .split_whitespace()
        .map(|t| {
            let l = t.chars().next().unwrap();
            (t[1..].parse().unwrap(), l)
        })
        .collect();
    pauli(n, &terms)
}

/// Scaling-and-squaring Taylor exponential of `−i·H`.
pub fn expm_minus_i(h: &Mat) -> Mat {
    let a = h.scale(-I);
    let norm: f64 = a.data.iter().map(|x| x.norm()).sum::<f64>().max(1e-300);
    let mut s = 0;
    while norm / f64::from(1u32 << s.min(30)) > 0.25 {
        s += 1;
    }
    let a = a.scale(ONE / f64::from(1u32 << s));
    let mut result = Mat::identity(h.dim);
    let mut term = Mat::identity(h.dim);
    for k in 1..30 {
        term = term.mul(&a).scale(ONE / k as f64);
        result = result.add(&term);
        if term.norm_inf() < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = result.mul(&result);
    }
    result
}

/// Distance `min_φ max |A − e^{iφ}B|` with `φ` fitted from the trace overlap.
pub fn phase_distance(a: &Mat, b: &Mat) -> f64 {
    let overlap: C = a.data.iter().zip(&b.data).map(|(x, y)| y.conj() * x).sum();
    let ph = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - ph * y).norm())
        .fold(0.0, f64::max)
}

pub fn distance(a: &Mat, b: &Mat) -> f64 {
    a.data.iter().zip(&b.data).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Unitary of a program, built column by column from basis states.
pub fn unitary_of<P: UnitaryProgram + ?Sized>(p: &P) -> Mat {
    let n = p.qubit_count();
    let dim = 1 << n;
    let mut m = Mat::zeros(dim);
    for col in 0..dim {
        let mut s = StateVector::basis_state(n, col as u64).unwrap();
        p.apply_to(&mut s).unwrap();
        for (r, a) in s.amplitudes().iter().enumerate() {
            m.set(r, col, *a);
        }
    }
    m
}

/// Permutation-type gate from a classical case table acting on basis indices.
pub fn classical(n: usize, f: impl Fn(usize) -> usize) -> Mat {
    let dim = 1 << n;
    let mut m = Mat::zeros(dim);
    for col in 0..dim {
        m.set(f(col), col, ONE);
    }
    m
}

/// Controlled-X with the listed controls, target flipped when all are 1.
pub fn multi_controlled_x(n: usize, controls: &[usize], target: usize) -> Mat {
    classical(n, |b| {
        if controls.iter().all(|&c| b >> c & 1 == 1) {
            b ^ (1 << target)
        } else {
            b
        }
    })
}

/// `iSWAP = exp(−iπ/4(XX + YY))` on qubits `a`, `b` of an `n`-qubit register.
pub fn iswap(n: usize, a: usize, b: usize) -> Mat {
    let h = pauli(n, &[(a, 'X'), (b, 'X')]).add(&pauli(n, &[(a, 'Y'), (b, 'Y')]));
    expm_minus_i(&h.scale(c(std::f64::consts::FRAC_PI_4, 0.0)))
}

/// `exp(−iθ P)` from the dense Pauli matrix.
pub fn rotation(n: usize, text: &str, theta: f64) -> Mat {
    expm_minus_i(&pauli_text(n, text).scale(c(theta, 0.0)))
}

/// Dense state from a statevector.
pub fn amps(s: &StateVector) -> Vec<C> {
    s.amplitudes().to_vec()
}
