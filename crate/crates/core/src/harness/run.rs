//! The experiment pipeline: sample, build, lower, evolve, observe, average.

use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::compiler::{lower_program_local, lower_program_to_iswap, NativeCircuit, NativeGate};
use crate::disorder::{sample_model_params, ParamSource, Purpose, SeedPlan};
use crate::error::{Error, Result};
use crate::models::{build_model, FloquetProgram};
use crate::observables::{
    disorder_average, evolve, magnetization, pattern_amplitudes, prepare_initial_state_jittered,
    subharmonic_score, Scope, Spectrum, DEFAULT_SCORE_CEILING,
};
use crate::pauli::{PauliRotation, PauliString};
use crate::statevector::{check_capacity, CompiledCircuit, Gate, StateVector};

use super::config::{ExperimentConfig, Lowering, Noise, Shots};

/// Amplitude updates per second assumed by [`estimate`].
pub const ASSUMED_THROUGHPUT: f64 = 1.5e8;
/// Windows of this many periods measure the pattern amplitude.
pub const LIFETIME_WINDOW_PERIODS: usize = 10;
/// The pattern has decayed once its amplitude falls below this fraction of
/// the first window.
pub const LIFETIME_FRACTION: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub qubits: usize,
    pub amplitudes: usize,
    pub state_bytes: usize,
    pub gates_per_cycle: usize,
    pub seconds: f64,
}

/// Cost of `config` from its register size, gate count and cycle budget.
/// Fails with a capacity error above the register cap.
pub fn estimate(config: &ExperimentConfig) -> Result<ResourceEstimate> {
    check_capacity(config.qubits())?;
    config.validate()?;
    let layout = config.layout()?;
    let plan = SeedPlan::new(config.seed);
    let params = sample_model_params(config.model, layout, &config.disorder, &plan, 0)?;
    let program = build_model(config.model, layout, &params)?;
    let gates = match config.lowering {
        Lowering::PauliLayers => program.gate_count(),
        Lowering::LocalGadgets => lower_program_local(&program)?.gate_count(),
        Lowering::NativeIswap => lower_program_to_iswap(&program)?.gates.len(),
    };
    let amplitudes = 1usize << config.qubits();
    let work = amplitudes as f64 * gates as f64 * config.cycles as f64 * config.realizations as f64;
    Ok(ResourceEstimate {
        qubits: config.qubits(),
        amplitudes,
        state_bytes: amplitudes * 16,
        gates_per_cycle: gates,
        seconds: work / ASSUMED_THROUGHPUT,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub targets: Vec<f64>,
    pub target_magnitudes: Vec<f64>,
    pub subharmonic_score: f64,
    /// Targets hold the top non-DC bins.
    pub targets_dominate: bool,
    /// Frequency of the largest non-DC bin.
    pub peak_omega: f64,
    pub peak_magnitude: f64,
    /// Cycles until the period-`p` pattern amplitude halves.
    pub pattern_lifetime: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub estimate: ResourceEstimate,
    pub per_realization: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub spectrum: Spectrum,
    pub scores: Scores,
    pub wall_time_secs: f64,
}

/// Per-cycle evolution of one realization.
enum Stepper {
    Exact(CompiledCircuit),
    Noisy {
        circuit: NativeCircuit,
        single_qubit: f64,
        iswap: f64,
    },
}

fn lowered(config: &ExperimentConfig, program: &FloquetProgram) -> Result<Stepper> {
    let q = program.qubit_count();
    Ok(match (config.lowering, config.noise) {
        (Lowering::PauliLayers, Noise::None) => Stepper::Exact(program.compile()?),
        (Lowering::LocalGadgets, Noise::None) => Stepper::Exact(lower_program_local(program)?.compile()?),
        (Lowering::NativeIswap, Noise::None) => {
            let c = lower_program_to_iswap(program)?;
            Stepper::Exact(CompiledCircuit::new(q, &c.to_gates()?, c.global_phase)?)
        }
        (Lowering::NativeIswap, Noise::Temporal { single_qubit, iswap }) => Stepper::Noisy {
            circuit: lower_program_to_iswap(program)?,
            single_qubit,
            iswap,
        },
        (_, Noise::Temporal { .. }) => {
            return Err(Error::config("noise.mode: temporal noise requires lowering = native-iswap"))
        }
    })
}

fn jitter<R: Rng>(rng: &mut R, width: f64) -> f64 {
    if width > 0.0 {
        1.0 + rng.gen_range(-width..=width)
    } else {
        1.0
    }
}

/// The native circuit with fresh angle errors on every gate.
fn noisy_gates<R: Rng>(circuit: &NativeCircuit, single_qubit: f64, iswap: f64, rng: &mut R) -> Result<Vec<Gate>> {
    let q = circuit.qubits;
    circuit
        .gates
        .iter()
        .map(|g| {
            Ok(match *g {
                NativeGate::Rot { axis, qubit, angle } => Gate::Rotation(PauliRotation::new(
                    angle * jitter(rng, single_qubit),
                    PauliString::single(q, qubit, axis.pauli()),
                )?),
                NativeGate::ISwap { q1, q2 } => Gate::XyRotation {
                    q1,
                    q2,
                    angle: FRAC_PI_4 * jitter(rng, iswap),
                },
                NativeGate::ISwapInv { q1, q2 } => Gate::XyRotation {
                    q1,
                    q2,
                    angle: -FRAC_PI_4 * jitter(rng, iswap),
                },
            })
        })
        .collect()
}

fn observe(state: &StateVector, scope: Scope, shots: Shots, plan: &SeedPlan, r: u64, cycle: usize) -> Result<f64> {
    match shots {
        Shots::Exact => magnetization(state, scope),
        Shots::Sampled(n) => {
            let mut rng = plan.stream(r, Purpose::ShotNoise, &[cycle as u64]);
            match scope {
                Scope::Qubit(q) => state.sample_z(q, n, &mut rng),
                Scope::Average => {
                    let q = state.qubit_count();
                    let mut acc = 0.0;
                    for k in 0..q {
                        acc += state.sample_z(k, n, &mut rng)?;
                    }
                    Ok(acc / q as f64)
                }
            }
        }
    }
}

/// Magnetization series of realization `r`, cycles `0..=τ`.
pub fn run_realization(config: &ExperimentConfig, r: u64) -> Result<Vec<f64>> {
    let layout = config.layout()?;
    let plan = SeedPlan::new(config.seed);
    let params = sample_model_params(config.model, layout, &config.disorder, &plan, r)?;
    let program = build_model(config.model, layout, &params)?;
    let stepper = lowered(config, &program)?;
    let mut rng = plan.stream(r, Purpose::InitialAngle, &[]);
    let initial =
        prepare_initial_state_jittered(layout.qubit_count(), config.initial_angle, config.initial_jitter, &mut rng)?;
    let scope = config.observable;
    evolve(
        &initial,
        config.cycles,
        |cycle, state| match &stepper {
            Stepper::Exact(c) => c.apply(state),
            Stepper::Noisy {
                circuit,
                single_qubit,
                iswap,
            } => {
                let mut rng = plan.stream(r, Purpose::TemporalNoise, &[cycle as u64]);
                state.apply_all(&noisy_gates(circuit, *single_qubit, *iswap, &mut rng)?)
            }
        },
        |cycle, state| observe(state, scope, config.shots, &plan, r, cycle),
    )
}

/// Cycles until the windowed period amplitude of `values` drops below
/// [`LIFETIME_FRACTION`] of its first window.
pub fn relative_pattern_lifetime(values: &[f64], period: usize) -> usize {
    let window = LIFETIME_WINDOW_PERIODS * period;
    let amps = pattern_amplitudes(values, period, window);
    let Some(&first) = amps.first() else { return 0 };
    match amps.iter().position(|&a| a < LIFETIME_FRACTION * first) {
        Some(i) => i * window,
        None => amps.len() * window,
    }
}

pub fn score_spectrum(spectrum: &Spectrum, targets: &[f64], mean: &[f64], period: usize) -> Result<Scores> {
    let ranked = spectrum.ranked_non_dc();
    let top = ranked.first().copied().unwrap_or(0);
    Ok(Scores {
        targets: targets.to_vec(),
        target_magnitudes: targets
            .iter()
            .map(|&t| spectrum.magnitude_at(t).ok_or_else(|| Error::config(format!("Ω = {t} is off the grid"))))
            .collect::<Result<_>>()?,
        subharmonic_score: subharmonic_score(spectrum, targets, DEFAULT_SCORE_CEILING)?,
        targets_dominate: spectrum.targets_dominate(targets)?,
        peak_omega: spectrum.omegas[top],
        peak_magnitude: spectrum.magnitudes[top],
        pattern_lifetime: relative_pattern_lifetime(mean, period),
    })
}

/// Runs the full pipeline on `workers` threads. The result does not depend
/// on `workers`.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<RunRecord> {
    let start = Instant::now();
    let estimate = estimate(config)?;
    let averaged = disorder_average(config.realizations, workers, |r| run_realization(config, r))?;
    let spectrum = averaged.spectrum(config.window, config.averaging)?;
    let scores = score_spectrum(&spectrum, &config.targets, &averaged.mean, config.model.period())?;
    Ok(RunRecord {
        config: config.clone(),
        seed: config.seed,
        estimate,
        per_realization: averaged.per_realization,
        mean: averaged.mean,
        spectrum,
        scores,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

fn source_text(src: &ParamSource) -> String {
    match src {
        ParamSource::Ideal => "ideal".into(),
        ParamSource::Uniform(s) => format!("uniform({}, {})", s.mean, s.half_width),
        ParamSource::Relative { low, high, signed } => {
            format!("relative({low}, {high}{})", if *signed { ", signed" } else { "" })
        }
    }
}

impl RunRecord {
    pub fn series_csv(&self) -> String {
        let c = &self.config;
        let d = &c.disorder;
        let mut s = String::new();
        let _ = writeln!(s, "# preset={} model={} chains={} sites={}", c.name, c.model, c.chains, c.sites);
        let _ = writeln!(s, "# seed={} realizations={} cycles={}", self.seed, c.realizations, c.cycles);
        let couplings: Vec<String> = d
            .couplings
            .iter()
            .map(|j| format!("({}, {})", j.mean, j.half_width))
            .collect();
        let _ = writeln!(s, "# couplings={}", couplings.join(" "));
        let _ = writeln!(
            s,
            "# field={} cnot_zx={} cnot_z={} cnot_x={} gate_scale={}",
            source_text(&d.field),
            source_text(&d.cnot_zx),
            source_text(&d.cnot_z),
            source_text(&d.cnot_x),
            source_text(&d.gate_scale)
        );
        let _ = writeln!(
            s,
            "# lowering={} noise={:?} shots={:?} observable={:?}",
            c.lowering.name(),
            c.noise,
            c.shots,
            c.observable
        );
        s.push_str("realization,cycle,sz\n");
        for (r, series) in self.per_realization.iter().enumerate() {
            for (t, v) in series.iter().enumerate() {
                let _ = writeln!(s, "{r},{t},{v}");
            }
        }
        for (t, v) in self.mean.iter().enumerate() {
            let _ = writeln!(s, "mean,{t},{v}");
        }
        s
    }

    pub fn spectrum_csv(&self) -> String {
        let mut s = String::from("omega,magnitude\n");
        for (w, m) in self.spectrum.omegas.iter().zip(&self.spectrum.magnitudes) {
            let _ = writeln!(s, "{w},{m}");
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Writes `series.csv`, `spectrum.csv` and `record.json` into `dir`.
    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("series.csv"), self.series_csv())?;
        fs::write(dir.join("spectrum.csv"), self.spectrum_csv())?;
        fs::write(dir.join("record.json"), self.to_json()?)?;
        Ok(())
    }
}
