//! Named experiment settings.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;

use crate::disorder::{DisorderConfig, DisorderSpec, ParamSource};
use crate::error::{Error, Result};
use crate::models::ModelId;
use crate::observables::{AveragingMode, Scope};

use super::config::{default_targets, ExperimentConfig, Lowering, Noise, Shots};

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub notes: &'static str,
    build: fn() -> ExperimentConfig,
}

impl Preset {
    pub fn config(&self) -> ExperimentConfig {
        (self.build)()
    }
}

pub const DEFAULT_SEED: u64 = 20_211_104;

fn spec(mean: f64, half_width: f64) -> DisorderSpec {
    DisorderSpec::new(mean, half_width).expect("preset specs are valid")
}

fn base(name: &str, model: ModelId, sites: usize, couplings: Vec<DisorderSpec>) -> ExperimentConfig {
    let mut disorder = DisorderConfig::ideal(&[]);
    disorder.couplings = couplings;
    ExperimentConfig {
        name: name.to_string(),
        model,
        chains: model.chains(),
        sites,
        disorder,
        realizations: 100,
        cycles: 500,
        window: 500,
        initial_angle: PI / 8.0,
        initial_jitter: 0.0,
        lowering: Lowering::PauliLayers,
        noise: Noise::None,
        shots: Shots::Exact,
        observable: Scope::Average,
        averaging: AveragingMode::SeriesFirst,
        targets: default_targets(model.period()),
        seed: DEFAULT_SEED,
    }
}

fn fig2(name: &str, model: ModelId, sites: usize) -> ExperimentConfig {
    let mut c = base(name, model, sites, vec![spec(1.5, 0.5), spec(2.5, 0.5)]);
    c.disorder.field = ParamSource::Uniform(spec(1.125 * FRAC_PI_2, 0.025 * FRAC_PI_2));
    let cnot = ParamSource::Uniform(spec(0.925 * FRAC_PI_4, 0.025 * FRAC_PI_4));
    c.disorder.cnot_zx = cnot;
    c.disorder.cnot_z = cnot;
    c.disorder.cnot_x = cnot;
    c
}

fn fig2a() -> ExperimentConfig {
    fig2("fig2a", ModelId::U4, 4)
}

fn fig2b() -> ExperimentConfig {
    fig2("fig2b", ModelId::U4, 5)
}

fn fig3() -> ExperimentConfig {
    fig2("fig3", ModelId::U4LongRange, 4)
}

fn fig4(name: &str, sites: usize) -> ExperimentConfig {
    let mut c = base(name, ModelId::U4, sites, vec![spec(1.5, 0.5), spec(2.5, 0.5)]);
    c.disorder = c.disorder.with_gate_error(0.0, 0.075, true);
    c.realizations = 20;
    c.cycles = 100;
    c.window = 100;
    c.initial_jitter = 0.005;
    c.lowering = Lowering::NativeIswap;
    c.noise = Noise::Temporal {
        single_qubit: 0.005,
        iswap: 0.04,
    };
    c.shots = Shots::Sampled(480);
    c.observable = Scope::Qubit(sites);
    c
}

fn fig4_analog() -> ExperimentConfig {
    fig4("fig4-analog", 8)
}

fn fig4_smoke() -> ExperimentConfig {
    fig4("fig4-smoke", 4)
}

fn fig5(name: &str, model: ModelId) -> ExperimentConfig {
    let mut c = base(name, model, 4, vec![spec(1.0, 0.5), spec(1.5, 0.5), spec(2.0, 0.5)]);
    c.disorder = c.disorder.with_gate_error(0.05, 0.10, true);
    c.cycles = 480;
    c.window = 480;
    c
}

fn fig5a() -> ExperimentConfig {
    fig5("fig5a", ModelId::U8)
}

fn fig5b() -> ExperimentConfig {
    fig5("fig5b", ModelId::U3)
}

fn ideal(name: &str, model: ModelId, sites: usize, couplings: &[f64], cycles: usize) -> ExperimentConfig {
    let mut c = base(name, model, sites, couplings.iter().map(|&j| DisorderSpec::fixed(j)).collect());
    c.realizations = 1;
    c.cycles = cycles;
    c.window = cycles;
    c.initial_angle = 0.0;
    c
}

fn ideal_u2n() -> ExperimentConfig {
    ideal("ideal-u2n", ModelId::U2n(3), 3, &[1.0, 1.5, 2.0], 64)
}

fn ideal_u3() -> ExperimentConfig {
    ideal("ideal-u3", ModelId::U3, 3, &[1.0, 1.5, 2.0], 60)
}

fn ideal_u4() -> ExperimentConfig {
    ideal("ideal-u4", ModelId::U4, 4, &[1.5, 2.5], 64)
}

pub static PRESETS: &[Preset] = &[
    Preset {
        name: "fig2a",
        summary: "period-4 drive, two size-4 chains, disordered couplings and gates",
        notes: "J̄, ΔJ per chain (1.5, 0.5) and (2.5, 0.5); field 1.125·π/2 ± 0.025·π/2; \
                CNOT angle magnitudes 0.925·π/4 ± 0.025·π/4; average magnetization; 500 cycles",
        build: fig2a,
    },
    Preset {
        name: "fig2b",
        summary: "as fig2a with two size-5 chains",
        notes: "10 qubits; same distributions as fig2a",
        build: fig2b,
    },
    Preset {
        name: "fig3",
        summary: "period-4 drive with power-law couplings inside each chain",
        notes: "α = 1.5; pair couplings drawn from the fig2a chain distributions and divided by d^α",
        build: fig3,
    },
    Preset {
        name: "fig4-analog",
        summary: "iSWAP-lowered period-4 circuit on two size-8 chains with temporal noise and shot sampling",
        notes: "16 qubits; quenched gate error up to 7.5%; per-cycle error up to 0.5% on single-qubit gates \
                and 4% on iSWAP; 480 shots; 20 realizations; 100 cycles; measures qubit N (chain 2, site 1)",
        build: fig4_analog,
    },
    Preset {
        name: "fig4-smoke",
        summary: "fig4-analog on two size-4 chains",
        notes: "8 qubits; otherwise identical to fig4-analog",
        build: fig4_smoke,
    },
    Preset {
        name: "fig5a",
        summary: "period-8 drive, three size-4 chains, 5-10% gate error",
        notes: "J̄, ΔJ per chain (1, 0.5), (1.5, 0.5), (2, 0.5); relative gate error 5-10% with random sign; 480 cycles",
        build: fig5a,
    },
    Preset {
        name: "fig5b",
        summary: "period-3 drive, three size-4 chains, 5-10% gate error",
        notes: "same distributions as fig5a",
        build: fig5b,
    },
    Preset {
        name: "ideal-u2n",
        summary: "exact period-8 counter on three size-3 chains",
        notes: "fixed couplings, ideal gates, logical initial state, one realization",
        build: ideal_u2n,
    },
    Preset {
        name: "ideal-u3",
        summary: "exact period-3 drive on three size-3 chains",
        notes: "fixed couplings, ideal gates, logical initial state, one realization",
        build: ideal_u3,
    },
    Preset {
        name: "ideal-u4",
        summary: "exact period-4 drive on two size-4 chains",
        notes: "fixed couplings, ideal gates, logical initial state, one realization",
        build: ideal_u4,
    },
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

pub fn find_preset(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| Error::UnknownPreset {
        name: name.to_string(),
        valid: preset_names().join(", "),
    })
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    Ok(find_preset(name)?.config())
}

pub fn list_presets() -> String {
    let width = PRESETS.iter().map(|p| p.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for p in PRESETS {
        let _ = writeln!(s, "{:width$}  {}", p.name, p.summary);
    }
    s
}

pub fn describe(name: &str) -> Result<String> {
    let p = find_preset(name)?;
    let c = p.config();
    let mut s = String::new();
    let _ = writeln!(s, "{}: {}", p.name, p.summary);
    let _ = writeln!(s, "{}", p.notes);
    let _ = writeln!(s, "qubits: {}", c.qubits());
    for (i, spec) in c.disorder.couplings.iter().enumerate() {
        let _ = writeln!(s, "chain {}: (J̄, ΔJ) = ({}, {})", i + 1, spec.mean, spec.half_width);
    }
    let _ = writeln!(s, "\n{}", c.to_text());
    Ok(s)
}
