//! Experiment configuration and its line-oriented text form.
//!
//! ```text
//! name = fig2a
//! model = U4
//! chains = 2
//! sites = 4
//! cycles = 500
//!
//! [couplings]
//! chain1 = 1.5 0.5
//! chain2 = 2.5 0.5
//!
//! [gates]
//! field = uniform 1.125*pi/2 0.025*pi/2
//! cnot_zx = relative 0.05 0.10 signed
//! ```
//!
//! Numbers accept `pi` with `*` and `/`, e.g. `3*pi/2`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::disorder::{DisorderConfig, DisorderSpec, ParamSource};
use crate::error::{Error, Result};
use crate::models::{ChainLayout, ModelId};
use crate::observables::{AveragingMode, Scope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lowering {
    PauliLayers,
    LocalGadgets,
    NativeIswap,
}

impl Lowering {
    pub fn name(self) -> &'static str {
        match self {
            Lowering::PauliLayers => "pauli-layers",
            Lowering::LocalGadgets => "local-gadgets",
            Lowering::NativeIswap => "native-iswap",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "pauli-layers" => Ok(Lowering::PauliLayers),
            "local-gadgets" => Ok(Lowering::LocalGadgets),
            "native-iswap" => Ok(Lowering::NativeIswap),
            other => Err(Error::Parse(format!(
                "lowering `{other}`; expected pauli-layers, local-gadgets or native-iswap"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Noise {
    None,
    /// Fresh relative angle errors on every native gate in every cycle.
    Temporal { single_qubit: f64, iswap: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shots {
    Exact,
    Sampled(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub model: ModelId,
    pub chains: usize,
    pub sites: usize,
    pub disorder: DisorderConfig,
    pub realizations: usize,
    pub cycles: usize,
    /// Cycles entering the spectrum; defaults to `min(cycles, 500)`.
    pub window: usize,
    pub initial_angle: f64,
    /// Relative jitter of the initial rotation angle per qubit.
    pub initial_jitter: f64,
    pub lowering: Lowering,
    pub noise: Noise,
    pub shots: Shots,
    pub observable: Scope,
    pub averaging: AveragingMode,
    /// Subharmonic frequencies scored in the spectrum.
    pub targets: Vec<f64>,
    pub seed: u64,
}

/// `2π/p` and `2π(p−1)/p` for a period `p`.
pub fn default_targets(period: usize) -> Vec<f64> {
    let a = TAU / period as f64;
    let b = TAU * (period - 1) as f64 / period as f64;
    if period == 2 {
        vec![PI]
    } else {
        vec![a, b]
    }
}

impl ExperimentConfig {
    pub fn layout(&self) -> Result<ChainLayout> {
        ChainLayout::new(self.chains, self.sites)
    }

    pub fn qubits(&self) -> usize {
        self.chains * self.sites
    }

    pub fn validate(&self) -> Result<()> {
        let field = |name: &str, msg: String| Error::config(format!("{name}: {msg}"));
        if self.chains != self.model.chains() {
            return Err(field(
                "chains",
                format!("model {} needs {} chains, got {}", self.model, self.model.chains(), self.chains),
            ));
        }
        if self.sites == 0 {
            return Err(field("sites", "must be at least 1".into()));
        }
        self.layout()?;
        if self.disorder.couplings.len() != self.chains {
            return Err(field(
                "couplings",
                format!("{} chain distributions for {} chains", self.disorder.couplings.len(), self.chains),
            ));
        }
        if self.model == ModelId::TwoT && self.disorder.z_field.is_none() {
            return Err(field("gates.z_field", "required by the two-period model".into()));
        }
        if self.realizations == 0 {
            return Err(field("realizations", "must be at least 1".into()));
        }
        if self.cycles == 0 {
            return Err(field("cycles", "must be at least 1".into()));
        }
        if self.window < 2 || self.window > self.cycles {
            return Err(field("window", format!("must lie in 2..={}", self.cycles)));
        }
        if !(0.0..1.0).contains(&self.initial_jitter) {
            return Err(field("noise.initial_jitter", "must lie in [0, 1)".into()));
        }
        if let Noise::Temporal { single_qubit, iswap } = self.noise {
            if self.lowering != Lowering::NativeIswap {
                return Err(field("noise.mode", "temporal noise requires lowering = native-iswap".into()));
            }
            if !(single_qubit >= 0.0 && iswap >= 0.0) {
                return Err(field("noise", "error magnitudes must be ≥ 0".into()));
            }
        }
        if let Shots::Sampled(0) = self.shots {
            return Err(field("shots.count", "must be at least 1".into()));
        }
        if let Scope::Qubit(q) = self.observable {
            if q >= self.qubits() {
                return Err(field("observable", format!("qubit {q} outside {} qubits", self.qubits())));
            }
        }
        if self.targets.is_empty() {
            return Err(field("targets", "at least one frequency is required".into()));
        }
        for &t in &self.targets {
            let k = t.rem_euclid(TAU) * self.window as f64 / TAU;
            if (k - k.round()).abs() > 1e-9 * self.window as f64 {
                return Err(field("targets", format!("Ω = {t} is not on the {}-point grid", self.window)));
            }
        }
        for (name, src) in [
            ("gates.field", &self.disorder.field),
            ("gates.cnot_zx", &self.disorder.cnot_zx),
            ("gates.cnot_z", &self.disorder.cnot_z),
            ("gates.cnot_x", &self.disorder.cnot_x),
            ("gates.gate_scale", &self.disorder.gate_scale),
        ] {
            if let ParamSource::Relative { low, high, .. } = src {
                if !(0.0 <= *low && low <= high) {
                    return Err(field(name, format!("relative range [{low}, {high}] is invalid")));
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "model = {}", self.model);
        let _ = writeln!(s, "chains = {}", self.chains);
        let _ = writeln!(s, "sites = {}", self.sites);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "realizations = {}", self.realizations);
        let _ = writeln!(s, "cycles = {}", self.cycles);
        let _ = writeln!(s, "window = {}", self.window);
        let _ = writeln!(s, "initial_angle = {}", self.initial_angle);
        let _ = writeln!(
            s,
            "observable = {}",
            match self.observable {
                Scope::Average => "average".to_string(),
                Scope::Qubit(q) => format!("qubit:{q}"),
            }
        );
        let _ = writeln!(s, "lowering = {}", self.lowering.name());
        let _ = writeln!(
            s,
            "averaging = {}",
            match self.averaging {
                AveragingMode::SeriesFirst => "series-first",
                AveragingMode::SpectraFirst => "spectra-first",
            }
        );
        let t: Vec<String> = self.targets.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(s, "targets = {}", t.join(" "));
        let _ = writeln!(s, "\n[couplings]");
        for (i, c) in self.disorder.couplings.iter().enumerate() {
            let _ = writeln!(s, "chain{} = {} {}", i + 1, c.mean, c.half_width);
        }
        let _ = writeln!(s, "\n[gates]");
        let d = &self.disorder;
        for (k, v) in [
            ("field", d.field),
            ("cnot_zx", d.cnot_zx),
            ("cnot_z", d.cnot_z),
            ("cnot_x", d.cnot_x),
            ("gate_scale", d.gate_scale),
        ] {
            let _ = writeln!(s, "{k} = {}", source_text(&v));
        }
        if let Some(z) = d.z_field {
            let _ = writeln!(s, "z_field = {} {}", z.mean, z.half_width);
        }
        let _ = writeln!(s, "long_range_exponent = {}", d.long_range_exponent);
        let _ = writeln!(s, "\n[noise]");
        match self.noise {
            Noise::None => {
                let _ = writeln!(s, "mode = none");
            }
            Noise::Temporal { single_qubit, iswap } => {
                let _ = writeln!(s, "mode = temporal");
                let _ = writeln!(s, "single_qubit = {single_qubit}");
                let _ = writeln!(s, "iswap = {iswap}");
            }
        }
        let _ = writeln!(s, "initial_jitter = {}", self.initial_jitter);
        let _ = writeln!(s, "\n[shots]");
        match self.shots {
            Shots::Exact => {
                let _ = writeln!(s, "mode = exact");
            }
            Shots::Sampled(n) => {
                let _ = writeln!(s, "mode = sampled");
                let _ = writeln!(s, "count = {n}");
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        parse_config(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        parse_config(&std::fs::read_to_string(path)?)
    }
}

fn source_text(src: &ParamSource) -> String {
    match src {
        ParamSource::Ideal => "ideal".into(),
        ParamSource::Uniform(s) => format!("uniform {} {}", s.mean, s.half_width),
        ParamSource::Relative { low, high, signed } => {
            format!("relative {low} {high} {}", if *signed { "signed" } else { "unsigned" })
        }
    }
}

/// Real number with optional `pi`, `*` and `/`: `0.925*pi/4`, `-pi`, `2.5`.
pub fn parse_real(text: &str) -> Result<f64> {
    let t = text.trim();
    let err = || Error::Parse(format!("cannot read `{text}` as a number"));
    if t.is_empty() {
        return Err(err());
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t),
    };
    let mut value = 1.0;
    let mut op = '*';
    let mut token = String::new();
    let flush = |token: &str, op: char, value: &mut f64| -> Result<()> {
        let x = match token.trim() {
            "pi" | "π" => PI,
            other => other.parse::<f64>().map_err(|_| err())?,
        };
        match op {
            '*' => *value *= x,
            _ => *value /= x,
        }
        Ok(())
    };
    for ch in body.chars() {
        if ch == '*' || ch == '/' {
            flush(&token, op, &mut value)?;
            token.clear();
            op = ch;
        } else {
            token.push(ch);
        }
    }
    flush(&token, op, &mut value)?;
    Ok(sign * value)
}

fn parse_source(text: &str) -> Result<ParamSource> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    match parts.as_slice() {
        ["ideal"] => Ok(ParamSource::Ideal),
        ["uniform", m, w] => Ok(ParamSource::Uniform(DisorderSpec::new(parse_real(m)?, parse_real(w)?)?)),
        ["relative", lo, hi] => Ok(ParamSource::Relative {
            low: parse_real(lo)?,
            high: parse_real(hi)?,
            signed: true,
        }),
        ["relative", lo, hi, mode] => Ok(ParamSource::Relative {
            low: parse_real(lo)?,
            high: parse_real(hi)?,
            signed: match *mode {
                "signed" => true,
                "unsigned" => false,
                _ => return Err(Error::Parse(format!("`{mode}`: expected signed or unsigned"))),
            },
        }),
        _ => Err(Error::Parse(format!(
            "`{text}`: expected `ideal`, `uniform <mean> <half-width>` or `relative <low> <high> [signed|unsigned]`"
        ))),
    }
}

fn parse_spec(text: &str) -> Result<DisorderSpec> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    match parts.as_slice() {
        [m] => Ok(DisorderSpec::fixed(parse_real(m)?)),
        [m, w] => DisorderSpec::new(parse_real(m)?, parse_real(w)?),
        _ => Err(Error::Parse(format!("`{text}`: expected `<mean> <half-width>`"))),
    }
}

fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut section = String::new();
    let mut name = String::from("custom");
    let mut model: Option<ModelId> = None;
    let mut chains: Option<usize> = None;
    let mut sites: Option<usize> = None;
    let mut seed = 0u64;
    let mut realizations = 100usize;
    let mut cycles = 500usize;
    let mut window: Option<usize> = None;
    let mut initial_angle = PI / 8.0;
    let mut initial_jitter = 0.0;
    let mut observable = Scope::Average;
    let mut lowering = Lowering::PauliLayers;
    let mut averaging = AveragingMode::SeriesFirst;
    let mut targets: Option<Vec<f64>> = None;
    let mut couplings: Vec<(usize, DisorderSpec)> = Vec::new();
    let mut disorder = DisorderConfig::ideal(&[]);
    let mut noise_mode = String::from("none");
    let mut single_qubit = 0.005;
    let mut iswap = 0.04;
    let mut shots_mode = String::from("exact");
    let mut shot_count = 480u32;

    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::Parse(format!("line {}: {msg}", n + 1));
        if let Some(rest) = line.strip_prefix('[') {
            section = rest
                .strip_suffix(']')
                .ok_or_else(|| at(format!("unterminated section `{line}`")))?
                .trim()
                .to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let ctx = |e: Error| at(format!("{section}{}{key}: {e}", if section.is_empty() { "" } else { "." }));
        let int = |v: &str| v.parse::<usize>().map_err(|_| Error::Parse(format!("`{v}` is not an integer")));
        match (section.as_str(), key) {
            ("", "name") => name = value.to_string(),
            ("", "model") => model = Some(value.parse().map_err(ctx)?),
            ("", "chains") => chains = Some(int(value).map_err(ctx)?),
            ("", "sites") => sites = Some(int(value).map_err(ctx)?),
            ("", "seed") => seed = value.parse().map_err(|_| ctx(Error::Parse(format!("`{value}` is not a seed"))))?,
            ("", "realizations") => realizations = int(value).map_err(ctx)?,
            ("", "cycles") => cycles = int(value).map_err(ctx)?,
            ("", "window") => window = Some(int(value).map_err(ctx)?),
            ("", "initial_angle") => initial_angle = parse_real(value).map_err(ctx)?,
            ("", "observable") => {
                observable = match value {
                    "average" => Scope::Average,
                    v => match v.strip_prefix("qubit:") {
                        Some(q) => Scope::Qubit(int(q).map_err(ctx)?),
                        None => return Err(ctx(Error::Parse(format!("`{v}`: expected average or qubit:<q>")))),
                    },
                }
            }
            ("", "lowering") => lowering = Lowering::parse(value).map_err(ctx)?,
            ("", "averaging") => {
                averaging = match value {
                    "series-first" => AveragingMode::SeriesFirst,
                    "spectra-first" => AveragingMode::SpectraFirst,
                    v => return Err(ctx(Error::Parse(format!("`{v}`: expected series-first or spectra-first")))),
                }
            }
            ("", "targets") => {
                targets = Some(value.split_whitespace().map(parse_real).collect::<Result<_>>().map_err(ctx)?)
            }
            ("couplings", k) => {
                let idx = k
                    .strip_prefix("chain")
                    .and_then(|i| i.parse::<usize>().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| ctx(Error::Parse("expected chain<k> with k ≥ 1".into())))?;
                couplings.push((idx, parse_spec(value).map_err(ctx)?));
            }
            ("gates", "field") => disorder.field = parse_source(value).map_err(ctx)?,
            ("gates", "cnot_zx") => disorder.cnot_zx = parse_source(value).map_err(ctx)?,
            ("gates", "cnot_z") => disorder.cnot_z = parse_source(value).map_err(ctx)?,
            ("gates", "cnot_x") => disorder.cnot_x = parse_source(value).map_err(ctx)?,
            ("gates", "cnot") => {
                let s = parse_source(value).map_err(ctx)?;
                disorder.cnot_zx = s;
                disorder.cnot_z = s;
                disorder.cnot_x = s;
            }
            ("gates", "gate_scale") => disorder.gate_scale = parse_source(value).map_err(ctx)?,
            ("gates", "z_field") => disorder.z_field = Some(parse_spec(value).map_err(ctx)?),
            ("gates", "long_range_exponent") => disorder.long_range_exponent = parse_real(value).map_err(ctx)?,
            ("noise", "mode") => noise_mode = value.to_string(),
            ("noise", "single_qubit") => single_qubit = parse_real(value).map_err(ctx)?,
            ("noise", "iswap") => iswap = parse_real(value).map_err(ctx)?,
            ("noise", "initial_jitter") => initial_jitter = parse_real(value).map_err(ctx)?,
            ("shots", "mode") => shots_mode = value.to_string(),
            ("shots", "count") => {
                shot_count = value
                    .parse()
                    .map_err(|_| ctx(Error::Parse(format!("`{value}` is not a shot count"))))?
            }
            _ => return Err(ctx(Error::Parse("unknown key".into()))),
        }
    }

    let model = model.ok_or_else(|| Error::config("model: missing"))?;
    let chains = chains.unwrap_or(model.chains());
    let sites = sites.ok_or_else(|| Error::config("sites: missing"))?;
    couplings.sort_by_key(|c| c.0);
    for (i, (idx, _)) in couplings.iter().enumerate() {
        if *idx != i + 1 {
            return Err(Error::config(format!("couplings: chain{} missing or repeated", i + 1)));
        }
    }
    disorder.couplings = couplings.into_iter().map(|c| c.1).collect();
    let noise = match noise_mode.as_str() {
        "none" => Noise::None,
        "temporal" => Noise::Temporal { single_qubit, iswap },
        other => return Err(Error::config(format!("noise.mode: `{other}`; expected none or temporal"))),
    };
    let shots = match shots_mode.as_str() {
        "exact" => Shots::Exact,
        "sampled" => Shots::Sampled(shot_count),
        other => return Err(Error::config(format!("shots.mode: `{other}`; expected exact or sampled"))),
    };
    let cfg = ExperimentConfig {
        name,
        model,
        chains,
        sites,
        disorder,
        realizations,
        cycles,
        window: window.unwrap_or(cycles.min(500)),
        initial_angle,
        initial_jitter,
        lowering,
        noise,
        shots,
        observable,
        averaging,
        targets: targets.unwrap_or_else(|| default_targets(model.period())),
        seed,
    };
    cfg.validate()?;
    Ok(cfg)
}
