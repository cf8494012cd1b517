//! Floquet programs for arrays of repetition-code chains.
//!
//! One program is one driving period. Layers are stored in time order, so the
//! rightmost factor of a written Floquet operator is the first layer. Every
//! `Commuting` layer is checked at build time for pairwise commutation, which
//! makes its sequential application an exact exponential of the sum.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliRotation, PauliString};
use crate::statevector::{check_capacity, CompiledCircuit, Gate, StateVector};

/// `chains` open chains of `sites` qubits, qubit `q = chain * sites + site`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainLayout {
    pub chains: usize,
    pub sites: usize,
}

impl ChainLayout {
    pub fn new(chains: usize, sites: usize) -> Result<Self> {
        if chains == 0 || sites == 0 {
            return Err(Error::config("a layout needs at least one chain and one site"));
        }
        check_capacity(chains * sites)?;
        Ok(ChainLayout { chains, sites })
    }

    pub fn qubit_count(&self) -> usize {
        self.chains * self.sites
    }

    pub fn qubit(&self, chain: usize, site: usize) -> usize {
        debug_assert!(chain < self.chains && site < self.sites);
        chain * self.sites + site
    }

    pub fn chain_of(&self, q: usize) -> usize {
        q / self.sites
    }

    pub fn site_of(&self, q: usize) -> usize {
        q % self.sites
    }

    /// Neighbouring sites of one chain, or the same site of neighbouring chains.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        let (ca, sa) = (self.chain_of(a), self.site_of(a));
        let (cb, sb) = (self.chain_of(b), self.site_of(b));
        (ca == cb && sa.abs_diff(sb) == 1) || (sa == sb && ca.abs_diff(cb) == 1)
    }

    /// Straight nearest-neighbour path from `a` to `b` along a chain or a column.
    pub fn straight_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let (ca, sa) = (self.chain_of(a), self.site_of(a));
        let (cb, sb) = (self.chain_of(b), self.site_of(b));
        if ca == cb {
            Some(walk(sa, sb).map(|s| self.qubit(ca, s)).collect())
        } else if sa == sb {
            Some(walk(ca, cb).map(|c| self.qubit(c, sa)).collect())
        } else {
            None
        }
    }

    /// Basis state with chain `s` in `|1⋯1⟩` iff `chain_bits[s]`.
    pub fn logical_state(&self, chain_bits: &[bool]) -> Result<StateVector> {
        if chain_bits.len() != self.chains {
            return Err(Error::dim(format!(
                "{} logical bits for {} chains",
                chain_bits.len(),
                self.chains
            )));
        }
        let mut bits = vec![false; self.qubit_count()];
        for (s, &b) in chain_bits.iter().enumerate() {
            for j in 0..self.sites {
                bits[self.qubit(s, j)] = b;
            }
        }
        StateVector::from_bits(&bits)
    }

    /// `|j̄⟩` with chain `s` carrying bit `s` of `j` (chain 1 is the least significant).
    pub fn logical_index_state(&self, j: usize) -> Result<StateVector> {
        let bits: Vec<bool> = (0..self.chains).map(|s| (j >> s) & 1 == 1).collect();
        self.logical_state(&bits)
    }
}

fn walk(from: usize, to: usize) -> Box<dyn Iterator<Item = usize>> {
    if from <= to {
        Box::new(from..=to)
    } else {
        Box::new((to..=from).rev())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelId {
    /// Two chains, `CNOT̄₁,₂ X̄₁` after the stabilizer layer: period 4.
    U4,
    /// Three chains, `CNOT̄₂,₁ CNOT̄₁,₂ CNOT̄₃,₂ X̄₁`: period 3.
    U3,
    /// Three chains, `CCNOT̄₁₂,₃ CNOT̄₁,₂ X̄₁`: period 8.
    U8,
    /// `n` chains running a modulo-`2ⁿ` decrement: period `2ⁿ`.
    U2n(usize),
    /// Single chain with a disordered Z field: period 2.
    TwoT,
    /// `U4` with power-law Ising couplings inside each chain.
    U4LongRange,
}

impl ModelId {
    pub fn chains(&self) -> usize {
        match self {
            ModelId::U4 | ModelId::U4LongRange => 2,
            ModelId::U3 | ModelId::U8 => 3,
            ModelId::U2n(n) => *n,
            ModelId::TwoT => 1,
        }
    }

    /// Period of the ideal logical cycle.
    pub fn period(&self) -> usize {
        match self {
            ModelId::U4 | ModelId::U4LongRange => 4,
            ModelId::U3 => 3,
            ModelId::U8 => 8,
            ModelId::U2n(n) => 1 << n,
            ModelId::TwoT => 2,
        }
    }

    /// CNOT layers in time order as `(control, target)`.
    pub fn cnot_layers(&self) -> Vec<(usize, usize)> {
        match self {
            ModelId::U4 | ModelId::U4LongRange | ModelId::U8 => vec![(0, 1)],
            ModelId::U3 => vec![(2, 1), (0, 1), (1, 0)],
            ModelId::U2n(n) if *n >= 2 => vec![(0, 1)],
            _ => vec![],
        }
    }

    /// Multi-control layers in time order as `(controls, target)`.
    pub fn generalized_layers(&self) -> Vec<(Vec<usize>, usize)> {
        match self {
            ModelId::U8 => vec![(vec![0, 1], 2)],
            ModelId::U2n(n) => (2..*n).map(|j| ((0..j).collect(), j)).collect(),
            _ => vec![],
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::U4 => write!(f, "U4"),
            ModelId::U3 => write!(f, "U3"),
            ModelId::U8 => write!(f, "U8"),
            ModelId::U2n(n) => write!(f, "U2n({n})"),
            ModelId::TwoT => write!(f, "TwoT"),
            ModelId::U4LongRange => write!(f, "U4_long_range"),
        }
    }
}

impl FromStr for ModelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "U4" => return Ok(ModelId::U4),
            "U3" => return Ok(ModelId::U3),
            "U8" => return Ok(ModelId::U8),
            "TwoT" | "2T" => return Ok(ModelId::TwoT),
            "U4_long_range" | "U4LongRange" => return Ok(ModelId::U4LongRange),
            _ => {}
        }
        let inner = t
            .strip_prefix("U2n(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("U2n:"));
        match inner.map(|n| n.trim().parse::<usize>()) {
            Some(Ok(n)) if n >= 1 => Ok(ModelId::U2n(n)),
            _ => Err(Error::Parse(format!("unknown model `{s}`"))),
        }
    }
}

/// Per-site angles of one transversal CNOT layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnotParams {
    pub zx: Vec<f64>,
    pub z: Vec<f64>,
    pub x: Vec<f64>,
}

impl CnotParams {
    pub const IDEAL_ZX: f64 = FRAC_PI_4;
    pub const IDEAL_Z: f64 = -FRAC_PI_4;
    pub const IDEAL_X: f64 = -FRAC_PI_4;

    pub fn ideal(sites: usize) -> Self {
        CnotParams {
            zx: vec![Self::IDEAL_ZX; sites],
            z: vec![Self::IDEAL_Z; sites],
            x: vec![Self::IDEAL_X; sites],
        }
    }

    pub fn zero(sites: usize) -> Self {
        CnotParams {
            zx: vec![0.0; sites],
            z: vec![0.0; sites],
            x: vec![0.0; sites],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongRangeParams {
    pub exponent: f64,
    /// `[chain][pair]` with pairs `(j, k)`, `k < j`, enumerated by [`long_range_pairs`].
    pub couplings: Vec<Vec<f64>>,
}

/// Site pairs `(j, k)` with `k < j`, in the order used by [`LongRangeParams`].
pub fn long_range_pairs(sites: usize) -> Vec<(usize, usize)> {
    (1..sites).flat_map(|j| (0..j).map(move |k| (j, k))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Ising couplings `[chain][bond]`, `sites − 1` bonds per chain.
    pub couplings: Vec<Vec<f64>>,
    /// X̄ field angles on chain 1.
    pub field: Vec<f64>,
    /// One entry per CNOT layer, in [`ModelId::cnot_layers`] order.
    pub cnots: Vec<CnotParams>,
    /// `[layer][site]` multipliers of the ideal multi-control angle.
    pub gate_scales: Vec<Vec<f64>>,
    /// Z-field angles of the two-period model; empty otherwise.
    pub z_field: Vec<f64>,
    pub long_range: Option<LongRangeParams>,
}

impl ModelParams {
    /// Ideal gate angles with the given couplings.
    pub fn ideal(model: ModelId, layout: ChainLayout, couplings: Vec<Vec<f64>>) -> Result<Self> {
        let n = layout.sites;
        let p = ModelParams {
            couplings,
            field: vec![FRAC_PI_2; n],
            cnots: model.cnot_layers().iter().map(|_| CnotParams::ideal(n)).collect(),
            gate_scales: model.generalized_layers().iter().map(|_| vec![1.0; n]).collect(),
            z_field: if model == ModelId::TwoT { vec![0.0; n] } else { vec![] },
            long_range: (model == ModelId::U4LongRange).then(|| LongRangeParams {
                exponent: 1.5,
                couplings: vec![vec![0.0; long_range_pairs(n).len()]; layout.chains],
            }),
        };
        p.validate(model, layout)?;
        Ok(p)
    }

    /// Ideal gates with every coupling equal to `j`.
    pub fn ideal_uniform(model: ModelId, layout: ChainLayout, j: f64) -> Result<Self> {
        let couplings = vec![vec![j; layout.sites.saturating_sub(1)]; layout.chains];
        let mut p = Self::ideal(model, layout, couplings)?;
        if model == ModelId::U4LongRange {
            p.long_range = Some(LongRangeParams {
                exponent: 1.5,
                couplings: vec![vec![j; long_range_pairs(layout.sites).len()]; layout.chains],
            });
        }
        Ok(p)
    }

    /// `−Σ J` over every stabilizer bond.
    pub fn ground_energy(&self) -> f64 {
        -self.couplings.iter().flatten().sum::<f64>()
    }

    pub fn validate(&self, model: ModelId, layout: ChainLayout) -> Result<()> {
        let n = layout.sites;
        if layout.chains != model.chains() {
            return Err(Error::config(format!(
                "model {model} needs {} chains, layout has {}",
                model.chains(),
                layout.chains
            )));
        }
        let shape = |what: &str, got: usize, want: usize| -> Result<()> {
            if got != want {
                return Err(Error::Shape(format!("{what}: expected {want} entries, got {got}")));
            }
            Ok(())
        };
        if model != ModelId::U4LongRange || !self.couplings.is_empty() {
            shape("couplings (chains)", self.couplings.len(), layout.chains)?;
            for c in &self.couplings {
                shape("couplings (bonds)", c.len(), n.saturating_sub(1))?;
            }
        }
        shape("field", self.field.len(), n)?;
        shape("cnot layers", self.cnots.len(), model.cnot_layers().len())?;
        for c in &self.cnots {
            shape("cnot zx", c.zx.len(), n)?;
            shape("cnot z", c.z.len(), n)?;
            shape("cnot x", c.x.len(), n)?;
        }
        shape("gate scale layers", self.gate_scales.len(), model.generalized_layers().len())?;
        for g in &self.gate_scales {
            shape("gate scales", g.len(), n)?;
        }
        if model == ModelId::TwoT {
            shape("z field", self.z_field.len(), n)?;
        }
        if model == ModelId::U4LongRange {
            let lr = self
                .long_range
                .as_ref()
                .ok_or_else(|| Error::Shape("long-range model without long-range couplings".into()))?;
            shape("long-range chains", lr.couplings.len(), layout.chains)?;
            for c in &lr.couplings {
                shape("long-range pairs", c.len(), long_range_pairs(n).len())?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LayerKind {
    Stabilizer,
    LongRangeStabilizer,
    /// Stabilizer couplings plus a Z field (two-period model).
    StabilizerWithField,
    LogicalX { chain: usize },
    Cnot { control: usize, target: usize },
    GeneralizedCnot { controls: Vec<usize>, target: usize },
}

impl LayerKind {
    pub fn label(&self) -> String {
        match self {
            LayerKind::Stabilizer => "H_rep".into(),
            LayerKind::LongRangeStabilizer => "H_rep(long-range)".into(),
            LayerKind::StabilizerWithField => "H_rep+Z".into(),
            LayerKind::LogicalX { chain } => format!("X{}", chain + 1),
            LayerKind::Cnot { control, target } => format!("CNOT{},{}", control + 1, target + 1),
            LayerKind::GeneralizedCnot { controls, target } => {
                let c: Vec<String> = controls.iter().map(|c| (c + 1).to_string()).collect();
                format!("C{}NOT{},{}", controls.len(), c.join(""), target + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LayerBody {
    /// Mutually commuting rotations.
    Commuting(Vec<PauliRotation>),
    /// Ordered gates, applied first to last.
    Sequence(Vec<Gate>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub kind: LayerKind,
    pub body: LayerBody,
    /// Phase `φ` of the `e^{iφ}` factor split off from identity terms.
    pub global_phase: f64,
}

impl Layer {
    /// Checks pairwise commutation before accepting the rotations.
    pub fn commuting(kind: LayerKind, rotations: Vec<PauliRotation>, global_phase: f64) -> Result<Self> {
        for (i, a) in rotations.iter().enumerate() {
            for b in &rotations[i + 1..] {
                if a.pauli().anticommutes(b.pauli())? {
                    return Err(Error::config(format!(
                        "layer {} mixes anticommuting terms {} and {}",
                        kind.label(),
                        a.pauli(),
                        b.pauli()
                    )));
                }
            }
        }
        Ok(Layer {
            kind,
            body: LayerBody::Commuting(rotations),
            global_phase,
        })
    }

    pub fn gates(&self) -> Vec<Gate> {
        match &self.body {
            LayerBody::Commuting(r) => r.iter().cloned().map(Gate::Rotation).collect(),
            LayerBody::Sequence(g) => g.clone(),
        }
    }

    pub fn rotations(&self) -> Option<&[PauliRotation]> {
        match &self.body {
            LayerBody::Commuting(r) => Some(r),
            LayerBody::Sequence(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.body {
            LayerBody::Commuting(r) => r.len(),
            LayerBody::Sequence(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloquetProgram {
    pub model: Option<ModelId>,
    pub layout: ChainLayout,
    pub params: Option<ModelParams>,
    pub layers: Vec<Layer>,
}

impl FloquetProgram {
    pub fn new(layout: ChainLayout, layers: Vec<Layer>) -> Self {
        FloquetProgram {
            model: None,
            layout,
            params: None,
            layers,
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.layout.qubit_count()
    }

    pub fn global_phase(&self) -> f64 {
        self.layers.iter().map(|l| l.global_phase).sum()
    }

    /// Every gate of one period in application order.
    pub fn gates(&self) -> Vec<Gate> {
        self.layers.iter().flat_map(|l| l.gates()).collect()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }

    /// One period, including the tracked global phase.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        for layer in &self.layers {
            state.apply_all(&layer.gates())?;
        }
        let phase = self.global_phase();
        if phase != 0.0 {
            state.scale(num_complex::Complex64::from_polar(1.0, phase));
        }
        Ok(())
    }

    /// Fused kernel plan for repeated application.
    pub fn compile(&self) -> Result<CompiledCircuit> {
        CompiledCircuit::new(self.qubit_count(), &self.gates(), self.global_phase())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn rotation(angle: f64, q: usize, terms: &[(usize, Pauli)]) -> Result<PauliRotation> {
    PauliRotation::new(angle, PauliString::from_sparse(q, terms)?)
}

/// `exp(−i Σ_s H_rep,s) = exp(+i Σ J Z_j Z_{j+1})`.
pub fn build_h_rep_layer(layout: ChainLayout, couplings: &[Vec<f64>]) -> Result<Layer> {
    if couplings.len() != layout.chains {
        return Err(Error::Shape(format!(
            "couplings for {} chains, layout has {}",
            couplings.len(),
            layout.chains
        )));
    }
    let q = layout.qubit_count();
    let mut rots = Vec::new();
    for (s, js) in couplings.iter().enumerate() {
        if js.len() != layout.sites - 1 {
            return Err(Error::Shape(format!(
                "chain {s}: {} couplings for {} bonds",
                js.len(),
                layout.sites - 1
            )));
        }
        for (j, &coupling) in js.iter().enumerate() {
            let a = layout.qubit(s, j);
            let b = layout.qubit(s, j + 1);
            rots.push(rotation(-coupling, q, &[(a, Pauli::Z), (b, Pauli::Z)])?);
        }
    }
    Layer::commuting(LayerKind::Stabilizer, rots, 0.0)
}

/// `exp(−i Σ_s Σ_{j>k} J_{jks} Z_j Z_k / |j−k|^α)`.
pub fn build_long_range_layer(layout: ChainLayout, params: &LongRangeParams) -> Result<Layer> {
    let pairs = long_range_pairs(layout.sites);
    if params.couplings.len() != layout.chains {
        return Err(Error::Shape("long-range couplings per chain".into()));
    }
    let q = layout.qubit_count();
    let mut rots = Vec::new();
    for (s, js) in params.couplings.iter().enumerate() {
        if js.len() != pairs.len() {
            return Err(Error::Shape(format!("chain {s}: {} pair couplings, need {}", js.len(), pairs.len())));
        }
        for (&(j, k), &coupling) in pairs.iter().zip(js) {
            let d = (j - k) as f64;
            let angle = coupling / d.powf(params.exponent);
            rots.push(rotation(
                angle,
                q,
                &[(layout.qubit(s, k), Pauli::Z), (layout.qubit(s, j), Pauli::Z)],
            )?);
        }
    }
    Layer::commuting(LayerKind::LongRangeStabilizer, rots, 0.0)
}

/// `exp(+i Σ [J Z_j Z_{j+1} + h^Z_j Z_j])` on a single chain.
pub fn build_stabilizer_field_layer(layout: ChainLayout, couplings: &[f64], z_field: &[f64]) -> Result<Layer> {
    if layout.chains != 1 {
        return Err(Error::config("the two-period model uses a single chain"));
    }
    if z_field.len() != layout.sites {
        return Err(Error::Shape(format!("{} z-field values for {} sites", z_field.len(), layout.sites)));
    }
    let base = build_h_rep_layer(layout, &[couplings.to_vec()])?;
    let mut rots = base.rotations().unwrap().to_vec();
    let q = layout.qubit_count();
    for (j, &hz) in z_field.iter().enumerate() {
        rots.push(rotation(-hz, q, &[(j, Pauli::Z)])?);
    }
    Layer::commuting(LayerKind::StabilizerWithField, rots, 0.0)
}

/// `exp(−i Σ_j h_j X_{j,s})`.
pub fn build_logical_x_layer(layout: ChainLayout, field: &[f64], chain: usize) -> Result<Layer> {
    if chain >= layout.chains {
        return Err(Error::config(format!("chain {chain} outside a {}-chain layout", layout.chains)));
    }
    if field.len() != layout.sites {
        return Err(Error::Shape(format!("{} field values for {} sites", field.len(), layout.sites)));
    }
    let q = layout.qubit_count();
    let rots = field
        .iter()
        .enumerate()
        .map(|(j, &h)| rotation(h, q, &[(layout.qubit(chain, j), Pauli::X)]))
        .collect::<Result<Vec<_>>>()?;
    Layer::commuting(LayerKind::LogicalX { chain }, rots, 0.0)
}

/// `exp(−i Σ_j [J^{ZX} Z_{j,A} X_{j,B} + J^Z Z_{j,A} + J^X X_{j,B}])`.
pub fn build_transversal_cnot_layer(
    layout: ChainLayout,
    control: usize,
    target: usize,
    params: &CnotParams,
) -> Result<Layer> {
    if control == target {
        return Err(Error::config("CNOT control and target chains must differ"));
    }
    if control.max(target) >= layout.chains {
        return Err(Error::config("CNOT chain outside the layout"));
    }
    let n = layout.sites;
    if params.zx.len() != n || params.z.len() != n || params.x.len() != n {
        return Err(Error::Shape(format!("CNOT parameters must have {n} entries each")));
    }
    let q = layout.qubit_count();
    let mut rots = Vec::with_capacity(3 * n);
    for j in 0..n {
        let a = layout.qubit(control, j);
        let b = layout.qubit(target, j);
        rots.push(rotation(params.zx[j], q, &[(a, Pauli::Z), (b, Pauli::X)])?);
        rots.push(rotation(params.z[j], q, &[(a, Pauli::Z)])?);
        rots.push(rotation(params.x[j], q, &[(b, Pauli::X)])?);
    }
    Layer::commuting(LayerKind::Cnot { control, target }, rots, 0.0)
}

/// Transversal `C^{(j)}NOT`: per site
/// `exp(−i·g·π/2^{j+1}·Π_k (1−Z_k)·(1−X_target))` expanded into Pauli terms.
/// The identity term is split off into the layer's global phase.
pub fn build_generalized_cnot_layer(
    layout: ChainLayout,
    controls: &[usize],
    target: usize,
    scales: &[f64],
) -> Result<Layer> {
    if controls.is_empty() {
        return Err(Error::config("a generalized CNOT needs at least one control"));
    }
    let mut chains: Vec<usize> = controls.to_vec();
    chains.push(target);
    let mut sorted = chains.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != chains.len() {
        return Err(Error::config("control and target chains must be distinct"));
    }
    if let Some(&c) = chains.iter().find(|&&c| c >= layout.chains) {
        return Err(Error::config(format!(
            "chain {} requested but the layout has {} chains",
            c + 1,
            layout.chains
        )));
    }
    if scales.len() != layout.sites {
        return Err(Error::Shape(format!("{} scales for {} sites", scales.len(), layout.sites)));
    }
    let q = layout.qubit_count();
    let k = controls.len();
    let base = PI / (1u64 << (k + 1)) as f64;
    let mut rots = Vec::new();
    let mut global_phase = 0.0;
    for (j, &g) in scales.iter().enumerate() {
        let theta = g * base;
        // subset bit i < k selects −Z on control i; bit k selects −X on the target
        for mask in 0u32..(1 << (k + 1)) {
            let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            let mut terms = Vec::new();
            for (i, &c) in controls.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    terms.push((layout.qubit(c, j), Pauli::Z));
                }
            }
            if mask >> k & 1 == 1 {
                terms.push((layout.qubit(target, j), Pauli::X));
            }
            if terms.is_empty() {
                global_phase -= theta;
            } else {
                rots.push(rotation(sign * theta, q, &terms)?);
            }
        }
    }
    Layer::commuting(
        LayerKind::GeneralizedCnot {
            controls: controls.to_vec(),
            target,
        },
        rots,
        global_phase,
    )
}

/// Transversal Toffoli, `exp(−i g π/8 Σ_j (1−Z_A)(1−Z_B)(1−X_C))`.
pub fn build_transversal_ccnot_layer(
    layout: ChainLayout,
    controls: (usize, usize),
    target: usize,
    scales: &[f64],
) -> Result<Layer> {
    build_generalized_cnot_layer(layout, &[controls.0, controls.1], target, scales)
}

/// Assembles one of the models. Layers are in time order: stabilizer layer,
/// `X̄₁`, then the gate layers of the written operator from right to left.
pub fn build_model(model: ModelId, layout: ChainLayout, params: &ModelParams) -> Result<FloquetProgram> {
    params.validate(model, layout)?;
    let mut layers = Vec::new();
    match model {
        ModelId::TwoT => {
            layers.push(build_stabilizer_field_layer(layout, &params.couplings[0], &params.z_field)?);
        }
        ModelId::U4LongRange => {
            layers.push(build_long_range_layer(layout, params.long_range.as_ref().unwrap())?);
        }
        _ => layers.push(build_h_rep_layer(layout, &params.couplings)?),
    }
    layers.push(build_logical_x_layer(layout, &params.field, 0)?);
    for (&(c, t), p) in model.cnot_layers().iter().zip(&params.cnots) {
        layers.push(build_transversal_cnot_layer(layout, c, t, p)?);
    }
    for ((controls, t), g) in model.generalized_layers().iter().zip(&params.gate_scales) {
        layers.push(build_generalized_cnot_layer(layout, controls, *t, g)?);
    }
    Ok(FloquetProgram {
        model: Some(model),
        layout,
        params: Some(params.clone()),
        layers,
    })
}
