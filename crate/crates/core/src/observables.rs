//! Stroboscopic magnetization, its discrete spectrum and peak metrics.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compiler::UnitaryProgram;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliRotation, PauliString};
use crate::statevector::{Gate, StateVector};

pub const NUMERICAL_FLOOR: f64 = 1e-12;
pub const DEFAULT_SCORE_CEILING: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scope {
    /// `(1/Q) Σ_q ⟨Z_q⟩`.
    Average,
    Qubit(usize),
}

/// `⟨S_z⟩` at cycles `0…τ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub values: Vec<f64>,
    pub scope: Scope,
    pub model: Option<String>,
    pub realization: Option<u64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, scope: Scope) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.abs() <= 1.0 + 1e-9)) {
            return Err(Error::config(format!("magnetization {v} outside [−1, 1]")));
        }
        Ok(TimeSeries {
            values,
            scope,
            model: None,
            realization: None,
        })
    }

    /// Number of recorded periods `τ` (cycle 0 excluded).
    pub fn cycles(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// `Π_q exp(−iθ₀ X_q)|0⋯0⟩`.
pub fn prepare_initial_state(qubits: usize, theta: f64) -> Result<StateVector> {
    prepare_product_state(&vec![theta; qubits])
}

/// Same with each angle scaled by `1 + δ_q`, `δ_q` uniform in `±relative`.
pub fn prepare_initial_state_jittered<R: Rng + ?Sized>(
    qubits: usize,
    theta: f64,
    relative: f64,
    rng: &mut R,
) -> Result<StateVector> {
    let angles: Vec<f64> = (0..qubits)
        .map(|_| {
            if relative > 0.0 {
                theta * (1.0 + rng.gen_range(-relative..=relative))
            } else {
                theta
            }
        })
        .collect();
    prepare_product_state(&angles)
}

pub fn prepare_product_state(angles: &[f64]) -> Result<StateVector> {
    let q = angles.len();
    let mut s = StateVector::zero(q)?;
    let gates = angles
        .iter()
        .enumerate()
        .map(|(k, &t)| Ok(Gate::Rotation(PauliRotation::new(t, PauliString::single(q, k, Pauli::X))?)))
        .collect::<Result<Vec<_>>>()?;
    s.apply_all(&gates)?;
    Ok(s)
}

pub fn magnetization(state: &StateVector, scope: Scope) -> Result<f64> {
    match scope {
        Scope::Average => {
            let z = state.expectation_z_all();
            Ok(z.iter().sum::<f64>() / z.len() as f64)
        }
        Scope::Qubit(q) => state.expectation_z(q),
    }
}

/// Records `observe` at cycle 0 and after each of `cycles` calls to `step`.
pub fn evolve<S, O>(initial: &StateVector, cycles: usize, mut step: S, mut observe: O) -> Result<Vec<f64>>
where
    S: FnMut(usize, &mut StateVector) -> Result<()>,
    O: FnMut(usize, &StateVector) -> Result<f64>,
{
    let mut state = initial.clone();
    let mut out = Vec::with_capacity(cycles + 1);
    out.push(observe(0, &state)?);
    for cycle in 1..=cycles {
        step(cycle, &mut state)?;
        out.push(observe(cycle, &state)?);
    }
    Ok(out)
}

pub fn stroboscopic_run<P: UnitaryProgram + ?Sized>(
    program: &P,
    initial: &StateVector,
    cycles: usize,
    scope: Scope,
) -> Result<TimeSeries> {
    if cycles == 0 {
        return Err(Error::config("at least one cycle is required"));
    }
    let values = evolve(initial, cycles, |_, s| program.apply_to(s), |_, s| magnetization(s, scope))?;
    TimeSeries::new(values, scope)
}

/// `|(1/τ) Σ_{j=1}^{τ} e^{−ijΩ_k} x_j|` on `Ω_k = 2πk/τ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub magnitudes: Vec<f64>,
}

impl Spectrum {
    pub fn window(&self) -> usize {
        self.omegas.len()
    }

    /// Grid index of `omega`, if it lies on the grid.
    pub fn bin_of(&self, omega: f64) -> Option<usize> {
        let tau = self.window() as f64;
        let k = omega.rem_euclid(TAU) * tau / TAU;
        let r = k.round();
        if (k - r).abs() < 1e-9 * tau.max(1.0) {
            Some(r as usize % self.window())
        } else {
            None
        }
    }

    pub fn magnitude_at(&self, omega: f64) -> Option<f64> {
        self.bin_of(omega).map(|k| self.magnitudes[k])
    }

    /// Non-DC bins sorted by magnitude, largest first, ties by index.
    pub fn ranked_non_dc(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (1..self.window()).collect();
        idx.sort_by(|&a, &b| self.magnitudes[b].total_cmp(&self.magnitudes[a]).then(a.cmp(&b)));
        idx
    }

    /// True when every target bin is at least as large as every other non-DC bin.
    pub fn targets_dominate(&self, targets: &[f64]) -> Result<bool> {
        let bins = self.target_bins(targets)?;
        let min_target = bins.iter().map(|&k| self.magnitudes[k]).fold(f64::INFINITY, f64::min);
        let max_other = (1..self.window())
            .filter(|k| !bins.contains(k))
            .map(|k| self.magnitudes[k])
            .fold(0.0, f64::max);
        Ok(min_target >= max_other)
    }

    fn target_bins(&self, targets: &[f64]) -> Result<Vec<usize>> {
        targets
            .iter()
            .map(|&t| {
                self.bin_of(t)
                    .ok_or_else(|| Error::config(format!("Ω = {t} is not on the {}-point grid", self.window())))
            })
            .collect()
    }
}

fn twiddles(tau: usize) -> Vec<Complex64> {
    (0..tau).map(|m| Complex64::from_polar(1.0, -TAU * m as f64 / tau as f64)).collect()
}

/// Spectrum of cycles `1..=window`.
pub fn power_spectrum(series: &TimeSeries, window: usize) -> Result<Spectrum> {
    spectrum_of_values(&series.values, window)
}

pub fn spectrum_of_values(values: &[f64], window: usize) -> Result<Spectrum> {
    if window < 2 || values.len() < window + 1 {
        return Err(Error::config(format!(
            "spectrum window {window} needs at least two cycles and at most {}",
            values.len().saturating_sub(1)
        )));
    }
    let tw = twiddles(window);
    let x = &values[1..=window];
    let magnitudes = (0..window)
        .map(|k| {
            let sum: Complex64 = x
                .iter()
                .enumerate()
                .map(|(i, &v)| tw[((i + 1) * k) % window] * v)
                .sum();
            sum.norm() / window as f64
        })
        .collect();
    let omegas = (0..window).map(|k| TAU * k as f64 / window as f64).collect();
    Ok(Spectrum { omegas, magnitudes })
}

/// The same sum at an arbitrary `Ω`.
pub fn spectrum_at(values: &[f64], window: usize, omega: f64) -> Result<f64> {
    if window < 1 || values.len() < window + 1 {
        return Err(Error::config("spectrum window exceeds the series"));
    }
    let sum: Complex64 = values[1..=window]
        .iter()
        .enumerate()
        .map(|(i, &v)| Complex64::from_polar(v, -omega * (i + 1) as f64))
        .sum();
    Ok(sum.norm() / window as f64)
}

/// Mean target magnitude over the largest non-target, non-DC magnitude,
/// capped at `ceiling`. Magnitudes below [`NUMERICAL_FLOOR`] times the
/// largest bin count as zero.
pub fn subharmonic_score(spectrum: &Spectrum, targets: &[f64], ceiling: f64) -> Result<f64> {
    let bins = spectrum.target_bins(targets)?;
    if bins.is_empty() {
        return Err(Error::config("no target frequencies"));
    }
    let floor = NUMERICAL_FLOOR * spectrum.magnitudes.iter().copied().fold(0.0, f64::max);
    let signal = bins.iter().map(|&k| spectrum.magnitudes[k]).sum::<f64>() / bins.len() as f64;
    if signal <= floor {
        return Ok(0.0);
    }
    let background = (1..spectrum.window())
        .filter(|k| !bins.contains(k))
        .map(|k| spectrum.magnitudes[k])
        .fold(0.0, f64::max);
    if background <= floor {
        return Ok(ceiling);
    }
    Ok((signal / background).min(ceiling))
}

/// Subharmonic frequencies `2πm/p` for `m = 1…p−1`.
pub fn subharmonics(period: usize) -> Vec<f64> {
    (1..period).map(|m| TAU * m as f64 / period as f64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AveragingMode {
    /// Spectrum of the averaged series.
    SeriesFirst,
    /// Average of per-realization spectra.
    SpectraFirst,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AveragedRun {
    pub mean: Vec<f64>,
    pub per_realization: Vec<Vec<f64>>,
}

impl AveragedRun {
    pub fn spectrum(&self, window: usize, mode: AveragingMode) -> Result<Spectrum> {
        match mode {
            AveragingMode::SeriesFirst => spectrum_of_values(&self.mean, window),
            AveragingMode::SpectraFirst => {
                let mut acc: Option<Spectrum> = None;
                for series in &self.per_realization {
                    let s = spectrum_of_values(series, window)?;
                    match acc.as_mut() {
                        None => acc = Some(s),
                        Some(a) => a.magnitudes.iter_mut().zip(&s.magnitudes).for_each(|(x, y)| *x += y),
                    }
                }
                let mut a = acc.ok_or_else(|| Error::config("no realizations"))?;
                let r = self.per_realization.len() as f64;
                a.magnitudes.iter_mut().for_each(|x| *x /= r);
                Ok(a)
            }
        }
    }
}

/// Runs realizations `0..count` on `workers` threads and averages pointwise
/// in realization order, so the result does not depend on `workers`.
pub fn disorder_average<F>(count: usize, workers: usize, run: F) -> Result<AveragedRun>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync,
{
    if count == 0 {
        return Err(Error::config("at least one realization is required"));
    }
    let series: Vec<Vec<f64>> = if workers <= 1 {
        (0..count as u64).map(&run).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?;
        pool.install(|| (0..count as u64).into_par_iter().map(&run).collect::<Result<Vec<_>>>())?
    };
    let len = series[0].len();
    if series.iter().any(|s| s.len() != len) {
        return Err(Error::Shape("realizations returned series of different lengths".into()));
    }
    let mut mean = vec![0.0; len];
    for s in &series {
        for (m, v) in mean.iter_mut().zip(s) {
            *m += v;
        }
    }
    let r = count as f64;
    mean.iter_mut().for_each(|m| *m /= r);
    Ok(AveragedRun {
        mean,
        per_realization: series,
    })
}

/// Sliding-window amplitude `|(1/w) Σ e^{−i2πj/p} x_j|` at the period
/// frequency, starting at cycle 1 and stepping by `w`.
pub fn pattern_amplitudes(values: &[f64], period: usize, window: usize) -> Vec<f64> {
    let omega = TAU / period as f64;
    let mut out = Vec::new();
    let mut start = 1;
    while start + window <= values.len() {
        let sum: Complex64 = (start..start + window)
            .map(|j| Complex64::from_polar(values[j], -omega * j as f64))
            .sum();
        out.push(sum.norm() / window as f64);
        start += window;
    }
    out
}

/// Cycles until the windowed period-`p` amplitude first drops below
/// `threshold`; the full length if it never does.
pub fn pattern_lifetime(values: &[f64], period: usize, window: usize, threshold: f64) -> usize {
    let amps = pattern_amplitudes(values, period, window);
    match amps.iter().position(|&a| a < threshold) {
        Some(i) => i * window,
        None => amps.len() * window,
    }
}
