mod support;

use std::f64::consts::{FRAC_PI_8, PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repdtc::compiler::*;
use repdtc::harness::*;
use repdtc::models::*;
use repdtc::observables::{spectrum_of_values, subharmonic_score, Scope, DEFAULT_SCORE_CEILING};
use repdtc::oracle::{build_logical_eigenstate, predicted_quasienergy, wrap_phase};
use repdtc::pauli::{PauliRotation, PauliString};
use repdtc::statevector::StateVector;
use support::*;

struct Report {
    passed: usize,
    failed: Vec<String>,
}

impl Report {
    fn check(&mut self, id: &str, ok: bool, detail: String) {
        println!("{} {id}: {detail}", if ok { "PASS" } else { "FAIL" });
        if ok {
            self.passed += 1;
        } else {
            self.failed.push(id.to_string());
        }
    }

    fn error(&mut self, id: &str, e: impl std::fmt::Display) {
        self.check(id, false, format!("error: {e}"));
    }
}

fn info(id: &str, text: String) {
    println!("INFO {id}: {text}");
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn bits(text: &str) -> Vec<bool> {
    text.chars().map(|c| c == '1').collect()
}

fn random_couplings(rng: &mut ChaCha8Rng, chains: usize, sites: usize) -> Vec<Vec<f64>> {
    (0..chains)
        .map(|_| (0..sites - 1).map(|_| rng.gen_range(0.5..3.0)).collect())
        .collect()
}

fn ideal_program(model: ModelId, chains: usize, sites: usize, rng: &mut ChaCha8Rng) -> repdtc::error::Result<FloquetProgram> {
    let l = ChainLayout::new(chains, sites)?;
    let params = ModelParams::ideal(model, l, random_couplings(rng, chains, sites))?;
    build_model(model, l, &params)
}

/// Smallest per-step fidelity along a sequence of logical states.
fn walk(prog: &FloquetProgram, states: &[StateVector]) -> repdtc::error::Result<f64> {
    let mut s = states[0].clone();
    let mut worst: f64 = 1.0;
    for want in &states[1..] {
        prog.apply(&mut s)?;
        worst = worst.min(s.fidelity(want)?);
    }
    Ok(worst)
}

fn criterion_1(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tol = 1.0 - 1e-10;

    let start = Instant::now();
    let u4 = (|| {
        let mut worst: f64 = 1.0;
        for sites in [2, 3, 4] {
            let p = ideal_program(ModelId::U4, 2, sites, &mut rng)?;
            let states = ["00", "11", "01", "10", "00"]
                .iter()
                .map(|b| p.layout.logical_state(&bits(b)))
                .collect::<repdtc::error::Result<Vec<_>>>()?;
            worst = worst.min(walk(&p, &states)?);
        }
        Ok::<_, repdtc::error::Error>(worst)
    })();
    report_cycle(rep, "1a U4 cycle 00>11>01>10>00", u4, tol, start);

    let start = Instant::now();
    let u3 = (|| {
        let mut worst: f64 = 1.0;
        for sites in [2, 3] {
            let p = ideal_program(ModelId::U3, 3, sites, &mut rng)?;
            for cycle in [["000", "010", "100", "000"], ["111", "001", "101", "111"]] {
                let states = cycle
                    .iter()
                    .map(|b| p.layout.logical_state(&bits(b)))
                    .collect::<repdtc::error::Result<Vec<_>>>()?;
                worst = worst.min(walk(&p, &states)?);
            }
        }
        Ok::<_, repdtc::error::Error>(worst)
    })();
    report_cycle(rep, "1b U3 both 3-cycles", u3, tol, start);

    // X on chain 1, then CNOT 1→2, then CCNOT 12→3, on chain bits of j
    let u8_map = |j: usize| {
        let j = j ^ 1;
        let j = j ^ ((j & 1) << 1);
        j ^ (((j & 1) & (j >> 1 & 1)) << 2)
    };
    let mut orbit = vec![0usize];
    while orbit.len() < 9 {
        orbit.push(u8_map(*orbit.last().unwrap()));
    }
    let mut visited = orbit[..8].to_vec();
    visited.sort_unstable();
    visited.dedup();
    let full_orbit = visited.len() == 8 && orbit[8] == 0;

    let start = Instant::now();
    let u8 = (|| {
        let mut worst: f64 = 1.0;
        for sites in [2, 3] {
            let p = ideal_program(ModelId::U8, 3, sites, &mut rng)?;
            for j0 in 0..8 {
                let mut seq = vec![j0];
                for _ in 0..8 {
                    seq.push(u8_map(*seq.last().unwrap()));
                }
                let states = seq
                    .iter()
                    .map(|&j| p.layout.logical_index_state(j))
                    .collect::<repdtc::error::Result<Vec<_>>>()?;
                worst = worst.min(walk(&p, &states)?);
            }
        }
        Ok::<_, repdtc::error::Error>(worst)
    })();
    let u8 = u8.map(|f| if full_orbit { f } else { 0.0 });
    report_cycle(rep, "1c U8 period-8 permutation of all 8 states", u8, tol, start);

    let start = Instant::now();
    let u2n = (|| {
        let mut worst: f64 = 1.0;
        for n in 1..=3 {
            for sites in [2, 3] {
                let p = ideal_program(ModelId::U2n(n), n, sites, &mut rng)?;
                let dim = 1 << n;
                for j in 0..dim {
                    let states = (0..=dim)
                        .map(|k| p.layout.logical_index_state((j + dim * 2 - k) % dim))
                        .collect::<repdtc::error::Result<Vec<_>>>()?;
                    worst = worst.min(walk(&p, &states)?);
                }
            }
        }
        Ok::<_, repdtc::error::Error>(worst)
    })();
    report_cycle(rep, "1d U2n decrement, n<=3, N=2,3", u2n, tol, start);
}

fn report_cycle(rep: &mut Report, id: &str, worst: repdtc::error::Result<f64>, tol: f64, start: Instant) {
    let secs = start.elapsed().as_secs_f64();
    match worst {
        Ok(f) => rep.check(id, f >= tol && secs < 1.0, format!("min fidelity {f:.15}, {secs:.3} s")),
        Err(e) => rep.error(id, e),
    }
}

fn criterion_2(rep: &mut Report) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut run = || -> repdtc::error::Result<(f64, f64, f64)> {
        let (mut residual, mut spacing, mut predicted) = (0.0f64, 0.0f64, 0.0f64);
        for n in 1..=3 {
            for sites in [2, 3] {
                let l = ChainLayout::new(n, sites)?;
                let params = ModelParams::ideal(ModelId::U2n(n), l, random_couplings(&mut rng, n, sites))?;
                let p = build_model(ModelId::U2n(n), l, &params)?;
                let mut eps = Vec::new();
                for ell in 0..1 << n {
                    let psi = build_logical_eigenstate(l, ell)?;
                    let mut u = psi.clone();
                    p.apply(&mut u)?;
                    let overlap = psi.inner(&u)?;
                    let e = wrap_phase(-overlap.arg());
                    let rot = Complex64::from_polar(1.0, -e);
                    let r = u
                        .amplitudes()
                        .iter()
                        .zip(psi.amplitudes())
                        .map(|(a, b)| (a - rot * b).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    residual = residual.max(r);
                    predicted = predicted.max(circular(e, predicted_quasienergy(&p, &params, ell)));
                    eps.push(e);
                }
                let want = PI / (1 << (n - 1)) as f64;
                for w in eps.windows(2) {
                    spacing = spacing.max(circular(wrap_phase(w[0] - w[1]), want));
                }
            }
        }
        Ok((residual, spacing, predicted))
    };
    match run() {
        Ok((r, s, p)) => {
            let secs = start.elapsed().as_secs_f64();
            rep.check(
                "2 quasienergy oracle n=1,2,3",
                r < 1e-9 && s < 1e-9 && p < 1e-9 && secs < 5.0,
                format!("residual {r:.2e}, spacing error {s:.2e}, prediction error {p:.2e}, {secs:.3} s"),
            );
        }
        Err(e) => rep.error("2 quasienergy oracle n=1,2,3", e),
    }
}

fn circular(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    d.min(TAU - d)
}

fn ps(s: &str, n: usize) -> PauliString {
    PauliString::parse_with_qubits(s, n).unwrap()
}

/// `exp(−iπ/8 (1−Z_a)(1−Z_b)(1−X_c))`, the three-qubit Toffoli in the X basis.
fn projector_toffoli() -> Mat {
    let one = c(1.0, 0.0);
    let proj = Mat::identity(8)
        .add(&pauli_text(3, "Z0").scale(-one))
        .mul(&Mat::identity(8).add(&pauli_text(3, "Z1").scale(-one)))
        .mul(&Mat::identity(8).add(&pauli_text(3, "X2").scale(-one)));
    expm_minus_i(&proj.scale(c(FRAC_PI_8, 0.0)))
}

fn native_dense(nc: &NativeCircuit) -> Mat {
    let n = nc.qubits;
    let mut u = Mat::identity(1 << n);
    for g in &nc.gates {
        let m = match *g {
            NativeGate::Rot { axis, qubit, angle } => {
                let letter = match axis {
                    Axis::X => 'X',
                    Axis::Y => 'Y',
                    Axis::Z => 'Z',
                };
                expm_minus_i(&pauli(n, &[(qubit, letter)]).scale(c(angle, 0.0)))
            }
            NativeGate::ISwap { q1, q2 } => iswap(n, q1, q2),
            NativeGate::ISwapInv { q1, q2 } => iswap(n, q1, q2).dagger(),
        };
        u = m.mul(&u);
    }
    u.scale(Complex64::from_polar(1.0, nc.global_phase))
}

fn criterion_3(rep: &mut Report) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let run = |rng: &mut ChaCha8Rng| -> repdtc::error::Result<[f64; 6]> {
        let l2 = ChainLayout::new(2, 1)?;
        let cnot = FloquetProgram::new(l2, vec![build_transversal_cnot_layer(l2, 0, 1, &CnotParams::ideal(1))?]);
        let l3 = ChainLayout::new(3, 1)?;
        let ccnot = FloquetProgram::new(l3, vec![build_transversal_ccnot_layer(l3, (0, 1), 2, &[1.0])?]);
        let l4 = ChainLayout::new(4, 1)?;
        let c3 = FloquetProgram::new(l4, vec![build_generalized_cnot_layer(l4, &[0, 1, 2], 3, &[1.0])?]);
        let transversal = phase_distance(&unitary_of(&cnot), &multi_controlled_x(2, &[0], 1))
            .max(phase_distance(&unitary_of(&ccnot), &multi_controlled_x(3, &[0, 1], 2)))
            .max(phase_distance(&unitary_of(&c3), &multi_controlled_x(4, &[0, 1, 2], 3)));

        let local = lower_ccnot_local(&l3, (0, 1), 2, 0, 1.0)?;
        let local_dev = phase_distance(&unitary_of(&local), &projector_toffoli())
            .max(phase_distance(&unitary_of(&local), &unitary_of(&ccnot)));

        let mut gadget = [0.0f64; 3];
        for _ in 0..50 {
            let theta = rng.gen_range(-PI..PI);
            let len = rng.gen_range(3..=5);
            let path: Vec<usize> = (0..len).collect();
            let zs: String = (0..len - 1).map(|q| format!("Z{q} ")).collect();
            let cases = [
                (format!("{zs}X{}", len - 1), 0),
                (format!("Z0 X{}", len - 1), 1),
                (format!("Z0 Z{}", len - 1), 2),
            ];
            for (text, which) in cases {
                let target = ps(&text, len);
                let seq = match which {
                    0 => decompose_i1(&target, &path, theta)?,
                    1 => decompose_i2(&target, &path, theta)?,
                    _ => decompose_i3(&target, &path, theta)?,
                };
                let d = distance(&unitary_of(&seq), &rotation(len, &text, theta));
                gadget[which] = gadget[which].max(d);
            }
        }

        let mut native: f64 = 0.0;
        for text in ["Z0 X1", "Z0 Y1", "Z0 Z1", "X0 Z1", "Y0 Z1"] {
            for _ in 0..10 {
                let theta = rng.gen_range(-PI..PI);
                let nc = lower_rotation(&PauliRotation::new(theta, ps(text, 2))?)?;
                native = native.max(distance(&native_dense(&nc), &rotation(2, text, theta)));
            }
        }
        Ok([transversal, local_dev, gadget[0], gadget[1], gadget[2], native])
    };
    match run(&mut rng) {
        Ok([t, l, i1, i2, i3, n]) => {
            let secs = start.elapsed().as_secs_f64();
            rep.check("3a transversal CNOT/CCNOT", t < 1e-12, format!("deviation {t:.2e}"));
            rep.check("3b local CCNOT sequence", l < 1e-10, format!("deviation {l:.2e}"));
            rep.check(
                "3c I1/I2/I3 gadgets, 50 angles each",
                i1.max(i2).max(i3) < 1e-10,
                format!("I1 {i1:.2e}, I2 {i2:.2e}, I3 {i3:.2e}"),
            );
            rep.check("3d iSWAP lowering of ZX/ZY/ZZ", n < 1e-12, format!("deviation {n:.2e}"));
            rep.check("3e decomposition runtime", secs < 30.0, format!("{secs:.3} s"));
        }
        Err(e) => rep.error("3 decomposition equivalence", e),
    }
}

fn run_preset(name: &str, adjust: impl FnOnce(&mut ExperimentConfig)) -> repdtc::error::Result<RunRecord> {
    let mut c = preset(name)?;
    adjust(&mut c);
    run_experiment(&c, workers())
}

fn spectral_check(rep: &mut Report, id: &str, rec: &RunRecord, threshold: f64) {
    let s = &rec.scores;
    rep.check(
        id,
        s.subharmonic_score >= threshold && s.targets_dominate,
        format!(
            "score {:.3} (need {threshold}), targets dominate {}, {:.1} s",
            s.subharmonic_score, s.targets_dominate, rec.wall_time_secs
        ),
    );
    let pi = rec.spectrum.magnitude_at(PI).map(|m| format!("{m:.4}")).unwrap_or_else(|| "off-grid".into());
    info(
        id,
        format!(
            "peak Ω = {:.4} (|S| = {:.4}), target |S| = {:?}, |S(π)| = {pi}",
            s.peak_omega,
            s.peak_magnitude,
            s.target_magnitudes.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>()
        ),
    );
}

/// Score of the same averaged run seen through one qubit instead of the chain average.
fn single_qubit_info(id: &str, name: &str, qubit: impl Fn(&ExperimentConfig) -> usize, cycles: Option<usize>) {
    let rec = run_preset(name, |c| {
        c.observable = Scope::Qubit(qubit(c));
        if let Some(t) = cycles {
            c.cycles = t;
        }
    });
    match rec {
        Ok(rec) => info(
            id,
            format!(
                "{:?}: score {:.3}, targets dominate {}, peak Ω = {:.4}, pattern lifetime {} cycles",
                rec.config.observable,
                rec.scores.subharmonic_score,
                rec.scores.targets_dominate,
                rec.scores.peak_omega,
                rec.scores.pattern_lifetime
            ),
        ),
        Err(e) => info(id, format!("single-qubit run failed: {e}")),
    }
}

fn criterion_4(rep: &mut Report) {
    let mut lifetimes = Vec::new();
    for (id, name) in [("4a fig2a", "fig2a"), ("4b fig2b", "fig2b")] {
        match run_preset(name, |c| {
            c.cycles = 2000;
            c.window = 500;
        }) {
            Ok(rec) => {
                spectral_check(rep, id, &rec, 3.0);
                let window = 500;
                let rescored = spectrum_of_values(&rec.mean, window)
                    .and_then(|s| subharmonic_score(&s, &rec.config.targets, DEFAULT_SCORE_CEILING));
                if let Ok(x) = rescored {
                    info(id, format!("score over cycles 1..=500 recomputed in test: {x:.3}"));
                }
                lifetimes.push(Some(rec.scores.pattern_lifetime));
                info(id, format!("4T pattern lifetime {} cycles", rec.scores.pattern_lifetime));
            }
            Err(e) => {
                rep.error(id, e);
                lifetimes.push(None);
            }
        }
        single_qubit_info(id, name, |c| c.sites, Some(2000));
    }
    match (lifetimes[0], lifetimes[1]) {
        (Some(a), Some(b)) => rep.check(
            "4c N=5 lifetime >= N=4 lifetime",
            b >= a,
            format!("N=4 {a} cycles, N=5 {b} cycles over 2000"),
        ),
        _ => rep.check("4c N=5 lifetime >= N=4 lifetime", false, "runs failed".into()),
    }
}

fn criterion_5(rep: &mut Report) {
    match run_preset("fig3", |_| {}) {
        Ok(rec) => spectral_check(rep, "5 fig3 long-range", &rec, 3.0),
        Err(e) => rep.error("5 fig3 long-range", e),
    }
    single_qubit_info("5 fig3 long-range", "fig3", |c| c.sites, None);
}

fn criterion_6(rep: &mut Report) {
    match run_preset("fig5a", |_| {}) {
        Ok(rec) => spectral_check(rep, "6a fig5a U8", &rec, 2.0),
        Err(e) => rep.error("6a fig5a U8", e),
    }
    single_qubit_info("6a fig5a U8", "fig5a", |c| 2 * c.sites, None);
    match run_preset("fig5b", |_| {}) {
        Ok(rec) => spectral_check(rep, "6b fig5b U3", &rec, 2.0),
        Err(e) => rep.error("6b fig5b U3", e),
    }
}

fn criterion_7(rep: &mut Report) {
    for (id, name, budget) in [("7a fig4 smoke (2x4)", "fig4-smoke", 300.0), ("7b fig4 analog (2x8)", "fig4-analog", 3600.0)] {
        match run_preset(name, |_| {}) {
            Ok(rec) => {
                let s = &rec.scores;
                let ok = s.targets_dominate && rec.wall_time_secs < budget;
                rep.check(
                    id,
                    ok,
                    format!(
                        "targets dominate {}, score {:.3}, peak Ω = {:.4}, {:.1} s (budget {budget} s)",
                        s.targets_dominate, s.subharmonic_score, s.peak_omega, rec.wall_time_secs
                    ),
                );
            }
            Err(e) => rep.error(id, e),
        }
    }
}

fn criterion_8(rep: &mut Report) {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return rep.error("8 determinism", e),
    };
    for name in preset_names() {
        let id = format!("8 determinism {name}");
        let run = || -> repdtc::error::Result<bool> {
            let mut c = preset(name)?;
            c.realizations = c.realizations.min(3);
            c.cycles = 48;
            c.window = 48;
            let a = run_experiment(&c, 1)?;
            let b = run_experiment(&c, 4)?;
            let (pa, pb) = (dir.path().join(format!("{name}-1")), dir.path().join(format!("{name}-4")));
            a.write_outputs(&pa)?;
            b.write_outputs(&pb)?;
            let mut same = true;
            for f in ["series.csv", "spectrum.csv"] {
                same &= std::fs::read(pa.join(f))? == std::fs::read(pb.join(f))?;
            }
            Ok(same)
        };
        match run() {
            Ok(same) => rep.check(&id, same, "workers 1 vs 4, series.csv and spectrum.csv".into()),
            Err(e) => rep.error(&id, e),
        }
    }
}

fn main() {
    let mut rep = Report {
        passed: 0,
        failed: Vec::new(),
    };
    let start = Instant::now();
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    criterion_3(&mut rep);
    criterion_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep);
    criterion_7(&mut rep);
    criterion_8(&mut rep);
    println!(
        "acceptance: {} passed, {} failed ({:.1} s)",
        rep.passed,
        rep.failed.len(),
        start.elapsed().as_secs_f64()
    );
    if !rep.failed.is_empty() {
        println!("failed: {}", rep.failed.join(", "));
        if std::env::var_os("REPDTC_ACCEPTANCE_STRICT").is_some() {
            std::process::exit(1);
        }
    }
}
