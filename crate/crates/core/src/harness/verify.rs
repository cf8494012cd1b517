//! Self-checks of the compiler and the oracle, run by `repdtc verify`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compiler::{
    decompose_i1, decompose_i2, decompose_i3, lower_ccnot_local, lower_program_local, lower_program_to_iswap,
    lower_rotation, verify_equivalence, GateList, UnitaryProgram,
};
use crate::error::Result;
use crate::models::{
    build_generalized_cnot_layer, build_model, build_transversal_cnot_layer, ChainLayout, CnotParams, FloquetProgram,
    Layer, ModelId, ModelParams,
};
use crate::oracle::{check_quasienergy_spectrum, check_two_t, wrap_phase, RESIDUAL_TOLERANCE};
use crate::pauli::{PauliRotation, PauliString};
use crate::statevector::{Gate, StateVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyCase {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl VerifyCase {
    fn new(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        VerifyCase {
            name: name.into(),
            deviation,
            tolerance,
            passed: deviation < tolerance,
        }
    }
}

/// Largest deviation of `p` from `e^{iφ}·P_f` where `P_f|k⟩ = |f(k)⟩`, with
/// one phase shared by all columns.
pub fn permutation_deviation<P, F>(p: &P, f: F) -> Result<f64>
where
    P: UnitaryProgram + ?Sized,
    F: Fn(usize) -> usize,
{
    let q = p.qubit_count();
    let mut phase: Option<Complex64> = None;
    let mut worst: f64 = 0.0;
    for k in 0..1usize << q {
        let mut s = StateVector::basis_state(q, k as u64)?;
        p.apply_to(&mut s)?;
        let want = f(k);
        let a = s.amplitudes();
        let ph = *phase.get_or_insert_with(|| {
            let x = a[want];
            if x.norm() > 0.0 {
                x / x.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
        for (i, x) in a.iter().enumerate() {
            let expected = if i == want { ph } else { Complex64::new(0.0, 0.0) };
            worst = worst.max((x - expected).norm());
        }
    }
    Ok(worst)
}

fn single_layer(layout: ChainLayout, layer: Layer) -> FloquetProgram {
    FloquetProgram::new(layout, vec![layer])
}

/// Flips bit `t` when every bit in `controls` is set, site by site.
fn controlled_flip(layout: ChainLayout, controls: &[usize], target: usize) -> impl Fn(usize) -> usize {
    let controls = controls.to_vec();
    move |k| {
        let mut out = k;
        for j in 0..layout.sites {
            if controls.iter().all(|&c| k >> layout.qubit(c, j) & 1 == 1) {
                out ^= 1 << layout.qubit(target, j);
            }
        }
        out
    }
}

fn cnot_matrix() -> [[Complex64; 4]; 4] {
    let o = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    [[o, z, z, z], [z, o, z, z], [z, z, z, o], [z, z, o, z]]
}

fn gadget_cases(rng: &mut ChaCha8Rng, out: &mut Vec<VerifyCase>) -> Result<()> {
    let q = 4;
    let path = [0, 1, 2, 3];
    let targets = [
        ("I1", "Z0 Z1 Z2 X3"),
        ("I2", "Z0 X3"),
        ("I3", "Z0 Z3"),
    ];
    for (label, text) in targets {
        let target = PauliString::parse_with_qubits(text, q)?;
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let theta = rng.gen_range(-PI..PI);
            let seq = match label {
                "I1" => decompose_i1(&target, &path, theta)?,
                "I2" => decompose_i2(&target, &path, theta)?,
                _ => decompose_i3(&target, &path, theta)?,
            };
            let reference = [Gate::Rotation(PauliRotation::new(theta, target.clone())?)];
            let r = GateList {
                qubits: q,
                gates: &reference,
                global_phase: 0.0,
            };
            worst = worst.max(verify_equivalence(&seq, &r)?);
        }
        out.push(VerifyCase::new(format!("gadget {label} {text}, 50 angles"), worst, 1e-10));
    }
    Ok(())
}

fn native_cases(rng: &mut ChaCha8Rng, out: &mut Vec<VerifyCase>) -> Result<()> {
    for text in ["Z0 X1", "Z0 Y1", "Z0 Z1", "X0 X1", "Y0 Z1", "X0 Y1"] {
        let p = PauliString::parse_with_qubits(text, 2)?;
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let rot = PauliRotation::new(rng.gen_range(-PI..PI), p.clone())?;
            let native = lower_rotation(&rot)?;
            let reference = [Gate::Rotation(rot)];
            let r = GateList {
                qubits: 2,
                gates: &reference,
                global_phase: 0.0,
            };
            worst = worst.max(verify_equivalence(&native, &r)?);
        }
        out.push(VerifyCase::new(format!("iSWAP lowering of {text}"), worst, 1e-12));
    }
    Ok(())
}

/// Runs every check; failures are reported in the returned cases.
pub fn run_verify_suite() -> Result<Vec<VerifyCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e51f1);
    let mut out = Vec::new();

    let l2 = ChainLayout::new(2, 1)?;
    let cnot = single_layer(l2, build_transversal_cnot_layer(l2, 0, 1, &CnotParams::ideal(1))?);
    let matrix = [Gate::Two {
        q1: 0,
        q2: 1,
        matrix: cnot_matrix(),
    }];
    let reference = GateList {
        qubits: 2,
        gates: &matrix,
        global_phase: 0.0,
    };
    out.push(VerifyCase::new("transversal CNOT, one site", verify_equivalence(&cnot, &reference)?, 1e-12));

    let l = ChainLayout::new(2, 3)?;
    let cnot = single_layer(l, build_transversal_cnot_layer(l, 0, 1, &CnotParams::ideal(3))?);
    out.push(VerifyCase::new(
        "transversal CNOT, three sites",
        permutation_deviation(&cnot, controlled_flip(l, &[0], 1))?,
        1e-12,
    ));

    for sites in [1, 2] {
        let l = ChainLayout::new(3, sites)?;
        let ccnot = single_layer(l, build_generalized_cnot_layer(l, &[0, 1], 2, &vec![1.0; sites])?);
        out.push(VerifyCase::new(
            format!("transversal CCNOT, {sites} site(s)"),
            permutation_deviation(&ccnot, controlled_flip(l, &[0, 1], 2))?,
            1e-12,
        ));
    }

    let l4 = ChainLayout::new(4, 1)?;
    let c3 = single_layer(l4, build_generalized_cnot_layer(l4, &[0, 1, 2], 3, &[1.0])?);
    out.push(VerifyCase::new(
        "three-control generalized CNOT",
        permutation_deviation(&c3, controlled_flip(l4, &[0, 1, 2], 3))?,
        1e-12,
    ));

    let l3 = ChainLayout::new(3, 1)?;
    let local = lower_ccnot_local(&l3, (0, 1), 2, 0, 1.0)?;
    out.push(VerifyCase::new(
        "nearest-neighbour CCNOT sequence",
        permutation_deviation(&local, controlled_flip(l3, &[0, 1], 2))?,
        1e-10,
    ));

    gadget_cases(&mut rng, &mut out)?;
    native_cases(&mut rng, &mut out)?;

    let l = ChainLayout::new(2, 3)?;
    let couplings = (0..2).map(|_| (0..2).map(|_| rng.gen_range(0.5..3.0)).collect()).collect();
    let u4 = build_model(ModelId::U4, l, &ModelParams::ideal(ModelId::U4, l, couplings)?)?;
    out.push(VerifyCase::new(
        "U4 cycle, local gadgets",
        verify_equivalence(&u4, &lower_program_local(&u4)?)?,
        1e-10,
    ));
    out.push(VerifyCase::new(
        "U4 cycle, iSWAP lowering",
        verify_equivalence(&u4, &lower_program_to_iswap(&u4)?)?,
        1e-10,
    ));

    for n in 1..=3 {
        let l = ChainLayout::new(n, 2)?;
        let couplings = (0..n).map(|_| vec![rng.gen_range(0.5..3.0)]).collect();
        let model = ModelId::U2n(n);
        let p = build_model(model, l, &ModelParams::ideal(model, l, couplings)?)?;
        let r = check_quasienergy_spectrum(&p)?;
        out.push(VerifyCase::new(
            format!("quasienergy residual, {n} chain(s)"),
            r.max_residual(),
            RESIDUAL_TOLERANCE,
        ));
        out.push(VerifyCase::new(
            format!("quasienergy spacing π/2^{}, {n} chain(s)", n - 1),
            r.max_spacing_error(),
            RESIDUAL_TOLERANCE,
        ));
    }

    let l = ChainLayout::new(1, 3)?;
    let mut params = ModelParams::ideal(ModelId::TwoT, l, vec![vec![1.1, 0.7]])?;
    params.z_field = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let p = build_model(ModelId::TwoT, l, &params)?;
    let [(r0, e0), (r1, e1)] = check_two_t(&p)?;
    out.push(VerifyCase::new("two-period eigenstates", r0.max(r1), RESIDUAL_TOLERANCE));
    out.push(VerifyCase::new(
        "two-period π gap",
        (wrap_phase(e0 - e1) - PI).abs(),
        RESIDUAL_TOLERANCE,
    ));
    Ok(out)
}
