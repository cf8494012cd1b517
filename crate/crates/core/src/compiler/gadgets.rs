//! Nearest-neighbour gadget sequences.
//!
//! A gadget realizes `exp(−iθ·P)` for a long Pauli string `P` by sandwiching a
//! weight-two core rotation between `±π/4` dressings. Every sequence is
//! certified symbolically when it is built: the dressings are pushed through
//! the core with [`clifford_conjugate`] and the result must equal `±P`.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ChainLayout, FloquetProgram, Layer, LayerBody, LayerKind};
use crate::pauli::{clifford_conjugate, Pauli, PauliRotation, PauliString, Phase};
use crate::statevector::Gate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Core,
    Dressing,
    /// Weight ≤ 2 term emitted as is.
    Local,
}

/// Rotations in time order with their roles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadgetSequence {
    pub qubits: usize,
    pub rotations: Vec<PauliRotation>,
    pub roles: Vec<Role>,
    pub global_phase: f64,
}

impl GadgetSequence {
    pub fn new(qubits: usize) -> Self {
        GadgetSequence {
            qubits,
            rotations: Vec::new(),
            roles: Vec::new(),
            global_phase: 0.0,
        }
    }

    fn push(&mut self, r: PauliRotation, role: Role) {
        self.rotations.push(r);
        self.roles.push(role);
    }

    pub fn extend(&mut self, other: GadgetSequence) {
        debug_assert_eq!(self.qubits, other.qubits);
        self.rotations.extend(other.rotations);
        self.roles.extend(other.roles);
        self.global_phase += other.global_phase;
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn count(&self, role: Role) -> usize {
        self.roles.iter().filter(|&&r| r == role).count()
    }

    pub fn gates(&self) -> Vec<Gate> {
        self.rotations.iter().cloned().map(Gate::Rotation).collect()
    }

    /// Only the dressings, which must compose to the identity.
    pub fn dressings_only(&self) -> GadgetSequence {
        let mut out = GadgetSequence::new(self.qubits);
        for (r, &role) in self.rotations.iter().zip(&self.roles) {
            if role == Role::Dressing {
                out.push(r.clone(), role);
            }
        }
        out
    }

    /// Every rotation has weight ≤ 2 with adjacent support.
    pub fn check_local(&self, layout: &ChainLayout) -> Result<()> {
        for r in &self.rotations {
            let s = r.pauli().support();
            let ok = match s.len() {
                0 | 1 => true,
                2 => layout.adjacent(s[0], s[1]),
                _ => false,
            };
            if !ok {
                return Err(Error::Compilation {
                    pauli: r.pauli().to_string(),
                    reason: "not a nearest-neighbour term of weight ≤ 2".into(),
                });
            }
        }
        Ok(())
    }
}

fn two(q: usize, a: usize, pa: Pauli, b: usize, pb: Pauli) -> Result<PauliString> {
    PauliString::from_sparse(q, &[(a, pa), (b, pb)])
}

fn compile_err(p: &PauliString, reason: impl Into<String>) -> Error {
    Error::Compilation {
        pauli: p.to_string(),
        reason: reason.into(),
    }
}

/// `exp(−iθ·target)` from `core` dressed by `steps`, applied to the core in
/// the given order. The core angle sign is chosen from the symbolic result.
pub fn sandwich(core: &PauliString, steps: &[(PauliString, i8)], target: &PauliString, theta: f64) -> Result<GadgetSequence> {
    let mut t = core.clone();
    for (g, sigma) in steps {
        let c = clifford_conjugate(g, *sigma, &t)?;
        if c.trivial {
            return Err(compile_err(target, format!("dressing {g} commutes with {t}")));
        }
        t = c.result;
    }
    if t.letters() != target.letters() {
        return Err(compile_err(target, format!("dressings produce {t}")));
    }
    let sign = if t.phase() == target.phase() {
        1.0
    } else if t.phase() == target.phase().neg() {
        -1.0
    } else {
        return Err(compile_err(target, format!("dressings produce {t}")));
    };
    let q = core.qubit_count();
    let mut seq = GadgetSequence::new(q);
    for (g, sigma) in steps.iter().rev() {
        seq.push(PauliRotation::new(*sigma as f64 * FRAC_PI_4, g.clone())?, Role::Dressing);
    }
    seq.push(PauliRotation::new(sign * theta, core.clone())?, Role::Core);
    for (g, sigma) in steps {
        seq.push(PauliRotation::new(-(*sigma as f64) * FRAC_PI_4, g.clone())?, Role::Dressing);
    }
    Ok(seq)
}

fn letters_on(p: &PauliString, path: &[usize]) -> Vec<Pauli> {
    path.iter().map(|&q| p.letter(q)).collect()
}

fn check_path(p: &PauliString, path: &[usize], expected: &[Pauli], name: &str) -> Result<()> {
    if path.len() < 2 {
        return Err(compile_err(p, format!("{name} needs a path of at least two qubits")));
    }
    let mut on_path = vec![false; p.qubit_count()];
    for &q in path {
        if q >= p.qubit_count() || on_path[q] {
            return Err(compile_err(p, format!("{name}: invalid path {path:?}")));
        }
        on_path[q] = true;
    }
    let off_path = (0..p.qubit_count()).any(|q| !on_path[q] && p.letter(q) != Pauli::I);
    if off_path || letters_on(p, path) != expected || p.phase() != Phase::ONE {
        return Err(Error::Pattern(format!("{p} does not match the {name} pattern on {path:?}")));
    }
    Ok(())
}

/// `Z⋯Z X` along `path`: core `Z X` on the first pair, `Y X` dressings.
pub fn decompose_i1(target: &PauliString, path: &[usize], theta: f64) -> Result<GadgetSequence> {
    let l = path.len();
    let mut expected = vec![Pauli::Z; l];
    expected[l.max(1) - 1] = Pauli::X;
    check_path(target, path, &expected, "Z…ZX")?;
    let q = target.qubit_count();
    let core = two(q, path[0], Pauli::Z, path[1], Pauli::X)?;
    let steps = (1..l - 1)
        .map(|k| Ok((two(q, path[k], Pauli::Y, path[k + 1], Pauli::X)?, 1)))
        .collect::<Result<Vec<_>>>()?;
    sandwich(&core, &steps, target, theta)
}

/// `Z ⋯ X` with identities in between: `Y Y` then `Z Z` dressings per step.
pub fn decompose_i2(target: &PauliString, path: &[usize], theta: f64) -> Result<GadgetSequence> {
    let l = path.len();
    let mut expected = vec![Pauli::I; l];
    expected[0] = Pauli::Z;
    expected[l.max(1) - 1] = Pauli::X;
    check_path(target, path, &expected, "Z…X")?;
    let q = target.qubit_count();
    let core = two(q, path[0], Pauli::Z, path[1], Pauli::X)?;
    let mut steps = Vec::new();
    for k in 1..l - 1 {
        steps.push((two(q, path[k], Pauli::Y, path[k + 1], Pauli::Y)?, 1));
        steps.push((two(q, path[k], Pauli::Z, path[k + 1], Pauli::Z)?, 1));
    }
    sandwich(&core, &steps, target, theta)
}

/// `Z ⋯ Z` with identities in between: core `Z X`, `Y Y`/`Z Z` dressings,
/// closed by a `Y Y`/`Z X` step that lands on the final `Z`.
pub fn decompose_i3(target: &PauliString, path: &[usize], theta: f64) -> Result<GadgetSequence> {
    let l = path.len();
    let mut expected = vec![Pauli::I; l];
    expected[0] = Pauli::Z;
    expected[l.max(1) - 1] = Pauli::Z;
    check_path(target, path, &expected, "Z…Z")?;
    let q = target.qubit_count();
    if l == 2 {
        let mut seq = GadgetSequence::new(q);
        seq.push(PauliRotation::new(theta, target.clone())?, Role::Core);
        return Ok(seq);
    }
    let core = two(q, path[0], Pauli::Z, path[1], Pauli::X)?;
    let mut steps = Vec::new();
    for k in 1..l - 2 {
        steps.push((two(q, path[k], Pauli::Y, path[k + 1], Pauli::Y)?, 1));
        steps.push((two(q, path[k], Pauli::Z, path[k + 1], Pauli::Z)?, 1));
    }
    steps.push((two(q, path[l - 2], Pauli::Y, path[l - 1], Pauli::Y)?, 1));
    steps.push((two(q, path[l - 2], Pauli::Z, path[l - 1], Pauli::X)?, 1));
    sandwich(&core, &steps, target, theta)
}

fn anticommuting_partner(p: Pauli) -> Pauli {
    match p {
        Pauli::Y => Pauli::Z,
        _ => Pauli::Y,
    }
}

/// Any string whose support lies on `path`, reduced from the far end.
pub fn decompose_along_path(target: &PauliString, path: &[usize], theta: f64) -> Result<GadgetSequence> {
    let q = target.qubit_count();
    if target.phase() != Phase::ONE {
        return Err(compile_err(target, "generator must carry a +1 phase"));
    }
    let support = target.support();
    if support.iter().any(|s| !path.contains(s)) {
        return Err(compile_err(target, format!("support leaves the path {path:?}")));
    }
    if support.len() <= 1 {
        let mut seq = GadgetSequence::new(q);
        if support.is_empty() {
            seq.global_phase = -theta;
        } else {
            seq.push(PauliRotation::new(theta, target.clone())?, Role::Core);
        }
        return Ok(seq);
    }
    let first = path.iter().position(|p| support.contains(p)).unwrap();
    let last = path.iter().rposition(|p| support.contains(p)).unwrap();
    let mut sub: Vec<usize> = path[first..=last].to_vec();

    let mut t = target.clone();
    let mut reductions: Vec<(PauliString, i8)> = Vec::new();
    while sub.len() > 2 {
        let (qa, qb) = (sub[sub.len() - 2], sub[sub.len() - 1]);
        let (a, b) = (t.letter(qa), t.letter(qb));
        let g = if a != Pauli::I {
            two(q, qa, anticommuting_partner(a), qb, b)?
        } else {
            two(q, qa, Pauli::Z, qb, anticommuting_partner(b))?
        };
        t = clifford_conjugate(&g, 1, &t)?.result;
        reductions.push((g, 1));
        if t.letter(qb) == Pauli::I {
            sub.pop();
        }
    }
    let core = t.unsigned();
    let steps: Vec<(PauliString, i8)> = reductions.into_iter().rev().map(|(g, s)| (g, -s)).collect();
    sandwich(&core, &steps, target, theta)
}

/// Orders the support of a string along a chain or a column.
pub fn straight_support_path(layout: &ChainLayout, p: &PauliString) -> Result<Vec<usize>> {
    let s = p.support();
    match s.len() {
        0 => Ok(vec![]),
        1 => Ok(s),
        _ => {
            let (lo, hi) = (s[0], s[s.len() - 1]);
            layout
                .straight_path(lo, hi)
                .ok_or_else(|| compile_err(p, "support is not on one chain or one column"))
        }
    }
}

/// Picks the named decomposition matching `target`, falling back to the
/// generic reduction.
pub fn decompose(layout: &ChainLayout, target: &PauliString, theta: f64) -> Result<GadgetSequence> {
    let path = straight_support_path(layout, target)?;
    if path.len() <= 2 {
        return decompose_along_path(target, &path, theta);
    }
    decompose_i1(target, &path, theta)
        .or_else(|_| decompose_i2(target, &path, theta))
        .or_else(|_| decompose_i3(target, &path, theta))
        .or_else(|_| decompose_along_path(target, &path, theta))
}

/// Local sequence for the Toffoli at one site of three adjacent chains:
/// the `Z_a X_c` term through `Y Y`/`Z Z` dressings, the `Z_a Z_b X_c` term
/// through a `Y X` dressing, then the remaining weight ≤ 2 terms.
pub fn lower_ccnot_local(layout: &ChainLayout, controls: (usize, usize), target: usize, site: usize, scale: f64) -> Result<GadgetSequence> {
    if controls.0.max(controls.1).max(target) >= layout.chains || site >= layout.sites {
        return Err(Error::config("chain or site outside the layout"));
    }
    let q = layout.qubit_count();
    let a = layout.qubit(controls.0, site);
    let b = layout.qubit(controls.1, site);
    let c = layout.qubit(target, site);
    if !layout.adjacent(a, b) || !layout.adjacent(b, c) {
        return Err(Error::Compilation {
            pauli: format!("CCNOT{},{}→{}", controls.0 + 1, controls.1 + 1, target + 1),
            reason: "chains must be adjacent in the order control, control, target".into(),
        });
    }
    let e = scale * PI / 8.0;
    let core = two(q, a, Pauli::Z, b, Pauli::X)?;
    let zaxc = two(q, a, Pauli::Z, c, Pauli::X)?;
    let zazbxc = PauliString::from_sparse(q, &[(a, Pauli::Z), (b, Pauli::Z), (c, Pauli::X)])?;
    let mut seq = sandwich(
        &core,
        &[(two(q, b, Pauli::Y, c, Pauli::Y)?, 1), (two(q, b, Pauli::Z, c, Pauli::Z)?, 1)],
        &zaxc,
        e,
    )?;
    seq.extend(sandwich(&core, &[(two(q, b, Pauli::Y, c, Pauli::X)?, 1)], &zazbxc, -e)?);
    let local: [(f64, Vec<(usize, Pauli)>); 5] = [
        (e, vec![(a, Pauli::Z), (b, Pauli::Z)]),
        (e, vec![(b, Pauli::Z), (c, Pauli::X)]),
        (-e, vec![(a, Pauli::Z)]),
        (-e, vec![(b, Pauli::Z)]),
        (-e, vec![(c, Pauli::X)]),
    ];
    for (angle, terms) in local {
        seq.push(PauliRotation::new(angle, PauliString::from_sparse(q, &terms)?)?, Role::Local);
    }
    seq.global_phase = -e;
    Ok(seq)
}

/// Rewrites every layer of `program` as nearest-neighbour rotations.
///
/// Terms of a commuting layer are lowered one by one; two-control layers on
/// adjacent chains use [`lower_ccnot_local`].
pub fn lower_program_local(program: &FloquetProgram) -> Result<FloquetProgram> {
    let layout = program.layout;
    let mut layers = Vec::with_capacity(program.layers.len());
    for layer in &program.layers {
        let seq = lower_layer_local(&layout, layer)?;
        seq.check_local(&layout)?;
        layers.push(Layer {
            kind: layer.kind.clone(),
            body: LayerBody::Sequence(seq.gates()),
            global_phase: layer.global_phase + seq.global_phase,
        });
    }
    Ok(FloquetProgram {
        model: program.model,
        layout,
        params: program.params.clone(),
        layers,
    })
}

pub fn lower_layer_local(layout: &ChainLayout, layer: &Layer) -> Result<GadgetSequence> {
    let q = layout.qubit_count();
    let rotations = match &layer.body {
        LayerBody::Commuting(r) => r,
        LayerBody::Sequence(gates) => {
            let mut seq = GadgetSequence::new(q);
            for g in gates {
                match g {
                    Gate::Rotation(r) => seq.extend(decompose(layout, r.pauli(), r.angle)?),
                    other => {
                        return Err(Error::Compilation {
                            pauli: format!("{other:?}"),
                            reason: "only Pauli rotations can be lowered to gadgets".into(),
                        })
                    }
                }
            }
            return Ok(seq);
        }
    };
    if let LayerKind::GeneralizedCnot { controls, target } = &layer.kind {
        if controls.len() == 2 {
            if let Some(scales) = ccnot_scales(layout, rotations, controls[0], controls[1], *target) {
                let mut seq = GadgetSequence::new(q);
                for (site, g) in scales.into_iter().enumerate() {
                    let mut s = lower_ccnot_local(layout, (controls[0], controls[1]), *target, site, g)?;
                    s.global_phase = 0.0;
                    seq.extend(s);
                }
                return Ok(seq);
            }
        }
    }
    let mut seq = GadgetSequence::new(q);
    for r in rotations {
        seq.extend(decompose(layout, r.pauli(), r.angle)?);
    }
    Ok(seq)
}

/// Recovers per-site scales when the layer has the exact Toffoli structure
/// on adjacent chains.
fn ccnot_scales(layout: &ChainLayout, rotations: &[PauliRotation], a: usize, b: usize, c: usize) -> Option<Vec<f64>> {
    let n = layout.sites;
    if rotations.len() != 7 * n {
        return None;
    }
    let e = PI / 8.0;
    let mut scales = Vec::with_capacity(n);
    for (site, chunk) in rotations.chunks(7).enumerate() {
        let (qa, qb, qc) = (layout.qubit(a, site), layout.qubit(b, site), layout.qubit(c, site));
        if !layout.adjacent(qa, qb) || !layout.adjacent(qb, qc) {
            return None;
        }
        let g = -chunk[0].angle / e;
        let ok = chunk.iter().all(|r| {
            let s = r.pauli().support();
            let sign = if s.len() % 2 == 0 { 1.0 } else { -1.0 };
            s.iter().all(|&x| x == qa || x == qb || x == qc) && (r.angle - sign * g * e).abs() <= 1e-15 * (1.0 + g.abs())
        });
        if !ok {
            return None;
        }
        scales.push(g);
    }
    Some(scales)
}
