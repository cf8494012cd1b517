//! Exact Floquet eigenstates on the logical subspace.
//!
//! For ideal gates the `2ⁿ`-period models act on logical basis states as
//! `U|j̄⟩ = e^{−iE₀} e^{iφ} |j − 1⟩` with `E₀ = −ΣJ` and a frame phase `φ`
//! collected from the layers. The Fourier combinations
//! `|ε_ℓ⟩ = 2^{−n/2} Σ_j e^{ijπℓ/2^{n−1}} |j̄⟩` are then eigenstates with
//! quasienergy `ε_ℓ = E₀ − φ − ℓπ/2^{n−1}`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ChainLayout, FloquetProgram, LayerKind, ModelParams};
use crate::statevector::StateVector;

pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Wraps into `[0, 2π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `|ε_ℓ⟩` for an `n`-chain layout.
pub fn build_logical_eigenstate(layout: ChainLayout, ell: usize) -> Result<StateVector> {
    let n = layout.chains;
    let count = 1usize << n;
    if ell >= count {
        return Err(Error::config(format!("ℓ = {ell} outside 0..{count}")));
    }
    let norm = 1.0 / (count as f64).sqrt();
    let step = PI * ell as f64 / (1u64 << (n - 1)) as f64;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << layout.qubit_count()];
    for j in 0..count {
        let mut index = 0usize;
        for s in 0..n {
            if j >> s & 1 == 1 {
                for site in 0..layout.sites {
                    index |= 1 << layout.qubit(s, site);
                }
            }
        }
        amps[index] = Complex64::from_polar(norm, step * j as f64);
    }
    StateVector::from_amplitudes(amps)
}

/// Phase picked up on the logical subspace from ideal `X̄` layers
/// (`(−i)^N`) and CNOT layers written without their identity term (`e^{iπ/4}` per site).
pub fn logical_frame_phase(program: &FloquetProgram) -> f64 {
    let n = program.layout.sites as f64;
    program
        .layers
        .iter()
        .map(|l| match l.kind {
            LayerKind::LogicalX { .. } => -n * FRAC_PI_2,
            LayerKind::Cnot { .. } => n * FRAC_PI_4,
            _ => 0.0,
        })
        .sum()
}

/// Predicted `ε_ℓ` in `[0, 2π)`.
pub fn predicted_quasienergy(program: &FloquetProgram, params: &ModelParams, ell: usize) -> f64 {
    let n = program.layout.chains;
    let spacing = PI / (1u64 << (n - 1)) as f64;
    wrap_phase(params.ground_energy() - logical_frame_phase(program) - ell as f64 * spacing)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCheck {
    pub ell: usize,
    pub residual: f64,
    pub measured_quasienergy: f64,
    pub predicted_quasienergy: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasienergyReport {
    pub chains: usize,
    pub sites: usize,
    pub tolerance: f64,
    pub expected_spacing: f64,
    pub entries: Vec<EigenCheck>,
    /// `ε_ℓ − ε_{ℓ+1}` in `[0, 2π)`, measured.
    pub spacings: Vec<f64>,
    pub passed: bool,
}

impl QuasienergyReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn max_spacing_error(&self) -> f64 {
        self.spacings
            .iter()
            .map(|s| circular_distance(*s, self.expected_spacing))
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    d.min(TAU - d)
}

/// `‖U|ψ⟩ − e^{−iε}|ψ⟩‖` and the measured `ε = −arg⟨ψ|U|ψ⟩`.
pub fn eigen_residual(program: &FloquetProgram, state: &StateVector, epsilon: f64) -> Result<(f64, f64)> {
    let mut out = state.clone();
    program.apply(&mut out)?;
    let overlap = state.inner(&out)?;
    let eig = Complex64::from_polar(1.0, -epsilon);
    let residual = out
        .amplitudes()
        .iter()
        .zip(state.amplitudes())
        .map(|(u, s)| (u - eig * s).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((residual, wrap_phase(-overlap.arg())))
}

/// Checks every `|ε_ℓ⟩` of an ideal-parameter program. Failures are reported,
/// not raised.
pub fn check_quasienergy_spectrum(program: &FloquetProgram) -> Result<QuasienergyReport> {
    let params = program
        .params
        .as_ref()
        .ok_or_else(|| Error::config("the program carries no parameter snapshot"))?;
    let layout = program.layout;
    let n = layout.chains;
    let mut entries = Vec::with_capacity(1 << n);
    for ell in 0..1usize << n {
        let state = build_logical_eigenstate(layout, ell)?;
        let predicted = predicted_quasienergy(program, params, ell);
        let (residual, measured) = eigen_residual(program, &state, predicted)?;
        entries.push(EigenCheck {
            ell,
            residual,
            measured_quasienergy: measured,
            predicted_quasienergy: predicted,
            passed: residual < RESIDUAL_TOLERANCE,
        });
    }
    let spacings: Vec<f64> = (0..entries.len())
        .map(|i| {
            let next = &entries[(i + 1) % entries.len()];
            wrap_phase(entries[i].measured_quasienergy - next.measured_quasienergy)
        })
        .collect();
    let expected_spacing = PI / (1u64 << (n - 1)) as f64;
    let mut report = QuasienergyReport {
        chains: n,
        sites: layout.sites,
        tolerance: RESIDUAL_TOLERANCE,
        expected_spacing,
        entries,
        spacings,
        passed: false,
    };
    report.passed =
        report.entries.iter().all(|e| e.passed) && report.max_spacing_error() < RESIDUAL_TOLERANCE;
    Ok(report)
}

/// `e^{−iΣh^Z/2}|0̄⟩ ± e^{+iΣh^Z/2}|1̄⟩`, normalized, for the single-chain model.
pub fn build_two_t_eigenstates(layout: ChainLayout, z_field: &[f64]) -> Result<(StateVector, StateVector)> {
    if layout.chains != 1 {
        return Err(Error::config("the two-period eigenstates live on a single chain"));
    }
    if z_field.len() != layout.sites {
        return Err(Error::Shape(format!("{} z-field values for {} sites", z_field.len(), layout.sites)));
    }
    let half: f64 = z_field.iter().sum::<f64>() / 2.0;
    let dim = 1usize << layout.qubit_count();
    let make = |sign: f64| {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[0] = Complex64::from_polar(FRAC_1_SQRT_2, -half);
        amps[dim - 1] = Complex64::from_polar(sign * FRAC_1_SQRT_2, half);
        StateVector::from_amplitudes(amps)
    };
    Ok((make(1.0)?, make(-1.0)?))
}

/// Residuals and measured quasienergies of the two-period eigenstates.
pub fn check_two_t(program: &FloquetProgram) -> Result<[(f64, f64); 2]> {
    let params = program
        .params
        .as_ref()
        .ok_or_else(|| Error::config("the program carries no parameter snapshot"))?;
    let (plus, minus) = build_two_t_eigenstates(program.layout, &params.z_field)?;
    let mut out = [(0.0, 0.0); 2];
    for (slot, state) in out.iter_mut().zip([plus, minus]) {
        let mut u = state.clone();
        program.apply(&mut u)?;
        let lambda = state.inner(&u)?;
        let residual = u
            .amplitudes()
            .iter()
            .zip(state.amplitudes())
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        *slot = (residual, wrap_phase(-lambda.arg()));
    }
    Ok(out)
}
