//! Seeded sampling of quenched disorder and gate imperfections.
//!
//! Every random value comes from its own stream, derived by hashing the
//! master seed with the realization index, a purpose tag and site indices.
//! Adding a parameter family therefore never shifts the values of another.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{long_range_pairs, ChainLayout, CnotParams, LongRangeParams, ModelId, ModelParams};

/// Uniform distribution on `[mean − half_width, mean + half_width]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub mean: f64,
    pub half_width: f64,
}

impl DisorderSpec {
    pub fn new(mean: f64, half_width: f64) -> Result<Self> {
        if !(half_width >= 0.0) || !mean.is_finite() || !half_width.is_finite() {
            return Err(Error::config(format!(
                "disorder needs a finite mean and half-width ≥ 0, got ({mean}, {half_width})"
            )));
        }
        Ok(DisorderSpec { mean, half_width })
    }

    pub fn fixed(value: f64) -> Self {
        DisorderSpec {
            mean: value,
            half_width: 0.0,
        }
    }

    pub fn low(&self) -> f64 {
        self.mean - self.half_width
    }

    pub fn high(&self) -> f64 {
        self.mean + self.half_width
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.low() && x <= self.high()
    }
}

pub fn sample_uniform<R: Rng + ?Sized>(spec: &DisorderSpec, rng: &mut R) -> f64 {
    if spec.half_width == 0.0 {
        return spec.mean;
    }
    rng.gen_range(spec.low()..=spec.high())
}

/// `ε` uniform on `[low, high]`, negated with probability ½ when `signed`.
pub fn sample_error_fraction<R: Rng + ?Sized>(low: f64, high: f64, signed: bool, rng: &mut R) -> Result<f64> {
    if !(0.0 <= low && low <= high) {
        return Err(Error::config(format!("error fraction range [{low}, {high}] is invalid")));
    }
    let magnitude = if low == high { low } else { rng.gen_range(low..=high) };
    if signed && rng.gen::<bool>() {
        Ok(-magnitude)
    } else {
        Ok(magnitude)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Purpose {
    Couplings,
    Field,
    Cnot,
    GateScale,
    ZField,
    LongRange,
    InitialAngle,
    ShotNoise,
    TemporalNoise,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Couplings => 0x01,
            Purpose::Field => 0x02,
            Purpose::Cnot => 0x03,
            Purpose::GateScale => 0x04,
            Purpose::ZField => 0x05,
            Purpose::LongRange => 0x06,
            Purpose::InitialAngle => 0x10,
            Purpose::ShotNoise => 0x11,
            Purpose::TemporalNoise => 0x12,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPlan {
    pub master_seed: u64,
}

impl SeedPlan {
    pub fn new(master_seed: u64) -> Self {
        SeedPlan { master_seed }
    }

    pub fn seed(&self, realization: u64, purpose: Purpose, indices: &[u64]) -> u64 {
        let mut h = splitmix64(self.master_seed);
        h = splitmix64(h ^ realization);
        h = splitmix64(h ^ purpose.tag());
        for &i in indices {
            h = splitmix64(h ^ i);
        }
        h
    }

    pub fn stream(&self, realization: u64, purpose: Purpose, indices: &[u64]) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed(realization, purpose, indices))
    }
}

/// How one gate-parameter family deviates from its ideal value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ParamSource {
    Ideal,
    /// Magnitude drawn from the spec; the sign of the ideal value is kept.
    Uniform(DisorderSpec),
    /// `ideal × (1 + ε)` with `ε` from [`sample_error_fraction`].
    Relative { low: f64, high: f64, signed: bool },
}

impl ParamSource {
    pub fn sample<R: Rng + ?Sized>(&self, ideal: f64, rng: &mut R) -> Result<f64> {
        match self {
            ParamSource::Ideal => Ok(ideal),
            ParamSource::Uniform(spec) => {
                let m = sample_uniform(spec, rng);
                Ok(if ideal < 0.0 { -m } else { m })
            }
            ParamSource::Relative { low, high, signed } => {
                Ok(ideal * (1.0 + sample_error_fraction(*low, *high, *signed, rng)?))
            }
        }
    }

    /// Bounds a sample for `ideal` can take.
    pub fn range(&self, ideal: f64) -> (f64, f64) {
        let (a, b) = match self {
            ParamSource::Ideal => (ideal, ideal),
            ParamSource::Uniform(s) if ideal < 0.0 => (-s.high(), -s.low()),
            ParamSource::Uniform(s) => (s.low(), s.high()),
            ParamSource::Relative { low, high, signed } => {
                let lo = if *signed { -high } else { *low };
                (ideal * (1.0 + lo), ideal * (1.0 + high))
            }
        };
        (a.min(b), a.max(b))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderConfig {
    /// One coupling distribution per chain.
    pub couplings: Vec<DisorderSpec>,
    pub field: ParamSource,
    pub cnot_zx: ParamSource,
    pub cnot_z: ParamSource,
    pub cnot_x: ParamSource,
    pub gate_scale: ParamSource,
    /// Required by the two-period model only.
    pub z_field: Option<DisorderSpec>,
    pub long_range_exponent: f64,
}

impl DisorderConfig {
    /// Fixed couplings and ideal gates.
    pub fn ideal(couplings: &[f64]) -> Self {
        DisorderConfig {
            couplings: couplings.iter().map(|&j| DisorderSpec::fixed(j)).collect(),
            field: ParamSource::Ideal,
            cnot_zx: ParamSource::Ideal,
            cnot_z: ParamSource::Ideal,
            cnot_x: ParamSource::Ideal,
            gate_scale: ParamSource::Ideal,
            z_field: None,
            long_range_exponent: 1.5,
        }
    }

    /// Same relative error on every gate family.
    pub fn with_gate_error(mut self, low: f64, high: f64, signed: bool) -> Self {
        let s = ParamSource::Relative { low, high, signed };
        self.field = s;
        self.cnot_zx = s;
        self.cnot_z = s;
        self.cnot_x = s;
        self.gate_scale = s;
        self
    }
}

fn draw(plan: &SeedPlan, r: u64, purpose: Purpose, idx: &[u64], src: &ParamSource, ideal: f64) -> Result<f64> {
    src.sample(ideal, &mut plan.stream(r, purpose, idx))
}

/// Quenched parameters of realization `realization`.
pub fn sample_model_params(
    model: ModelId,
    layout: ChainLayout,
    config: &DisorderConfig,
    plan: &SeedPlan,
    realization: u64,
) -> Result<ModelParams> {
    if config.couplings.len() != layout.chains {
        return Err(Error::config(format!(
            "coupling distributions for {} chains, model {model} has {}",
            config.couplings.len(),
            layout.chains
        )));
    }
    let n = layout.sites;
    let r = realization;
    let mut params = ModelParams::ideal(model, layout, vec![vec![0.0; n - 1]; layout.chains])?;

    for (s, spec) in config.couplings.iter().enumerate() {
        for j in 0..n - 1 {
            let mut rng = plan.stream(r, Purpose::Couplings, &[s as u64, j as u64]);
            params.couplings[s][j] = sample_uniform(spec, &mut rng);
        }
    }
    for j in 0..n {
        let ideal = params.field[j];
        params.field[j] = draw(plan, r, Purpose::Field, &[j as u64], &config.field, ideal)?;
    }
    for (layer, c) in params.cnots.iter_mut().enumerate() {
        let ideal = CnotParams::ideal(n);
        for j in 0..n {
            let l = layer as u64;
            let site = j as u64;
            c.zx[j] = draw(plan, r, Purpose::Cnot, &[l, 0, site], &config.cnot_zx, ideal.zx[j])?;
            c.z[j] = draw(plan, r, Purpose::Cnot, &[l, 1, site], &config.cnot_z, ideal.z[j])?;
            c.x[j] = draw(plan, r, Purpose::Cnot, &[l, 2, site], &config.cnot_x, ideal.x[j])?;
        }
    }
    for (layer, g) in params.gate_scales.iter_mut().enumerate() {
        for (j, v) in g.iter_mut().enumerate() {
            *v = draw(plan, r, Purpose::GateScale, &[layer as u64, j as u64], &config.gate_scale, 1.0)?;
        }
    }
    if model == ModelId::TwoT {
        let spec = config
            .z_field
            .ok_or_else(|| Error::config("the two-period model needs a z-field distribution"))?;
        for j in 0..n {
            let mut rng = plan.stream(r, Purpose::ZField, &[j as u64]);
            params.z_field[j] = sample_uniform(&spec, &mut rng);
        }
    }
    if model == ModelId::U4LongRange {
        let pairs = long_range_pairs(n);
        let couplings = config
            .couplings
            .iter()
            .enumerate()
            .map(|(s, spec)| {
                pairs
                    .iter()
                    .map(|&(j, k)| {
                        let mut rng = plan.stream(r, Purpose::LongRange, &[s as u64, j as u64, k as u64]);
                        sample_uniform(spec, &mut rng)
                    })
                    .collect()
            })
            .collect();
        params.long_range = Some(LongRangeParams {
            exponent: config.long_range_exponent,
            couplings,
        });
        params.couplings.clear();
    }
    params.validate(model, layout)?;
    Ok(params)
}
