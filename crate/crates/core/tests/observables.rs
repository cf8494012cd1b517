use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repdtc::compiler::GateList;
use repdtc::models::*;
use repdtc::observables::*;

fn ideal_u4(sites: usize) -> FloquetProgram {
    let l = ChainLayout::new(2, sites).unwrap();
    build_model(ModelId::U4, l, &ModelParams::ideal_uniform(ModelId::U4, l, 1.3).unwrap()).unwrap()
}

/// `|(1/τ) Σ_{j=1}^{τ} x_j e^{−ijΩ}|` evaluated term by term.
fn naive_dft(x: &[f64], tau: usize, omega: f64) -> f64 {
    let s: Complex64 = (1..=tau).map(|j| Complex64::from_polar(x[j], -omega * j as f64)).sum();
    s.norm() / tau as f64
}

#[test]
fn initial_state_examples() {
    let s = prepare_initial_state(3, 0.0).unwrap();
    assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
    let s = prepare_initial_state(1, FRAC_PI_8).unwrap();
    assert!((s.expectation_z(0).unwrap() - FRAC_PI_4.cos()).abs() < 1e-15);
    let s = prepare_initial_state(4, FRAC_PI_2).unwrap();
    assert!((s.amplitudes()[15].norm() - 1.0).abs() < 1e-15);
}

#[test]
fn jittered_initial_state_stays_close() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = prepare_initial_state_jittered(6, FRAC_PI_8, 0.005, &mut rng).unwrap();
    for z in s.expectation_z_all() {
        assert!((z - FRAC_PI_4.cos()).abs() < 0.01);
        assert!((z - FRAC_PI_4.cos()).abs() > 0.0);
    }
}

#[test]
fn ideal_u4_average_magnetization_cycles_through_one_minus_one_zero_zero() {
    let p = ideal_u4(4);
    let init = prepare_initial_state(8, 0.0).unwrap();
    let s = stroboscopic_run(&p, &init, 12, Scope::Average).unwrap();
    let want = [1.0, -1.0, 0.0, 0.0];
    for (j, v) in s.values.iter().enumerate() {
        assert!((v - want[j % 4]).abs() < 1e-10, "cycle {j}: {v}");
    }
}

#[test]
fn spectrum_of_the_ideal_u4_series() {
    let p = ideal_u4(4);
    let init = prepare_initial_state(8, 0.0).unwrap();
    let s = stroboscopic_run(&p, &init, 500, Scope::Average).unwrap();
    let sp = power_spectrum(&s, 500).unwrap();
    for k in 0..500 {
        let w = TAU * k as f64 / 500.0;
        assert!((sp.magnitudes[k] - naive_dft(&s.values, 500, w)).abs() < 1e-12);
    }
    // over one period x_1..x_4 = −1, 0, 0, 1
    let half = Complex64::new(-1.0, 0.0) * Complex64::from_polar(1.0, -FRAC_PI_2) + Complex64::from_polar(1.0, -TAU);
    assert!((sp.magnitude_at(FRAC_PI_2).unwrap() - half.norm() / 4.0).abs() < 1e-10);
    assert!((sp.magnitude_at(PI).unwrap() - 0.5).abs() < 1e-10);
    assert!((sp.magnitude_at(FRAC_PI_2).unwrap() - sp.magnitude_at(3.0 * FRAC_PI_2).unwrap()).abs() < 1e-12);
    assert_eq!(sp.ranked_non_dc()[0], 250);
}

#[test]
fn single_qubit_of_the_second_chain_shows_the_four_period_peak() {
    let p = ideal_u4(4);
    let init = prepare_initial_state(8, 0.0).unwrap();
    let s = stroboscopic_run(&p, &init, 400, Scope::Qubit(4)).unwrap();
    let sp = power_spectrum(&s, 400).unwrap();
    assert!(sp.targets_dominate(&[FRAC_PI_2, 3.0 * FRAC_PI_2]).unwrap());
    assert_eq!(subharmonic_score(&sp, &[FRAC_PI_2, 3.0 * FRAC_PI_2], 1e6).unwrap(), 1e6);
}

#[test]
fn identity_program_gives_a_constant_series() {
    let id = GateList {
        qubits: 3,
        gates: &[],
        global_phase: 0.4,
    };
    let init = prepare_initial_state(3, 0.3).unwrap();
    let s = stroboscopic_run(&id, &init, 20, Scope::Average).unwrap();
    assert!(s.values.iter().all(|v| (v - s.values[0]).abs() < 1e-13));
    assert!(stroboscopic_run(&id, &init, 0, Scope::Average).is_err());
}

#[test]
fn u2n_fidelity_period_is_eight() {
    let l = ChainLayout::new(3, 2).unwrap();
    let p = build_model(
        ModelId::U2n(3),
        l,
        &ModelParams::ideal(ModelId::U2n(3), l, vec![vec![0.9], vec![1.7], vec![2.2]]).unwrap(),
    )
    .unwrap();
    let init = l.logical_index_state(0).unwrap();
    let mut s = init.clone();
    for k in 1..=24 {
        p.apply(&mut s).unwrap();
        let f = s.fidelity(&init).unwrap();
        if k % 8 == 0 {
            assert!((f - 1.0).abs() < 1e-10, "cycle {k}: {f}");
        } else {
            assert!(f < 1e-10, "cycle {k}: {f}");
        }
    }
}

#[test]
fn spectrum_examples() {
    let sp = spectrum_of_values(&[0.7; 101], 100).unwrap();
    assert!((sp.magnitudes[0] - 0.7).abs() < 1e-13);
    assert_eq!(subharmonic_score(&sp, &[FRAC_PI_2, 3.0 * FRAC_PI_2], 1e6).unwrap(), 0.0);

    let alt: Vec<f64> = (0..=100).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let sp = spectrum_of_values(&alt, 100).unwrap();
    assert_eq!(sp.ranked_non_dc()[0], 50);
    assert!(sp.magnitudes.iter().enumerate().all(|(k, &m)| k == 50 || m < 1e-12));

    let cos: Vec<f64> = (0..=500).map(|j| (FRAC_PI_2 * j as f64).cos()).collect();
    let sp = spectrum_of_values(&cos, 500).unwrap();
    let targets = [FRAC_PI_2, 3.0 * FRAC_PI_2];
    assert!(sp.targets_dominate(&targets).unwrap());
    assert_eq!(subharmonic_score(&sp, &targets, DEFAULT_SCORE_CEILING).unwrap(), DEFAULT_SCORE_CEILING);
    assert!((sp.magnitude_at(FRAC_PI_2).unwrap() - 0.5).abs() < 1e-12);

    assert!(spectrum_of_values(&[1.0], 1).is_err());
    assert!(spectrum_of_values(&[1.0; 5], 5).is_err());
}

#[test]
fn off_grid_evaluation_agrees_on_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let x: Vec<f64> = (0..=60).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sp = spectrum_of_values(&x, 60).unwrap();
    for k in [1, 7, 15, 30] {
        assert!((spectrum_at(&x, 60, sp.omegas[k]).unwrap() - sp.magnitudes[k]).abs() < 1e-12);
    }
    assert!((spectrum_at(&x, 60, 0.123).unwrap() - naive_dft(&x, 60, 0.123)).abs() < 1e-14);
}

#[test]
fn white_noise_has_no_subharmonic_preference() {
    let targets = [FRAC_PI_2, 3.0 * FRAC_PI_2];
    let mut scores = Vec::new();
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..=500).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sp = spectrum_of_values(&x, 500).unwrap();
        scores.push(subharmonic_score(&sp, &targets, 1e6).unwrap());
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    assert!((0.2..1.2).contains(&mean), "{mean}");
    assert!(scores.iter().all(|&s| s < 3.0));
}

#[test]
fn time_series_rejects_out_of_range_values() {
    assert!(TimeSeries::new(vec![0.0, 1.5], Scope::Average).is_err());
    assert!(TimeSeries::new(vec![0.0, -1.0, 1.0], Scope::Qubit(0)).is_ok());
}

#[test]
fn disorder_average_matches_single_runs_and_ignores_workers() {
    let l = ChainLayout::new(2, 3).unwrap();
    let run = |r: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(r);
        let couplings = (0..2).map(|_| (0..2).map(|_| rng.gen_range(1.0..3.0)).collect()).collect();
        let mut params = ModelParams::ideal(ModelId::U4, l, couplings).unwrap();
        params.field.iter_mut().for_each(|h| *h *= 1.0 + rng.gen_range(-0.08..0.08));
        let p = build_model(ModelId::U4, l, &params).unwrap();
        let init = prepare_initial_state(6, FRAC_PI_8).unwrap();
        Ok(stroboscopic_run(&p, &init, 40, Scope::Average)?.values)
    };
    let one = disorder_average(1, 1, run).unwrap();
    assert_eq!(one.mean, run(0).unwrap());

    let a = disorder_average(9, 1, run).unwrap();
    let b = disorder_average(9, 3, run).unwrap();
    assert_eq!(a.mean, b.mean);
    assert_eq!(a.per_realization, b.per_realization);
    let manual: Vec<f64> = (0..41)
        .map(|t| (0..9).map(|r| a.per_realization[r][t]).sum::<f64>() / 9.0)
        .collect();
    assert_eq!(a.mean, manual);

    let series_first = a.spectrum(40, AveragingMode::SeriesFirst).unwrap();
    assert_eq!(series_first, spectrum_of_values(&a.mean, 40).unwrap());
    let spectra_first = a.spectrum(40, AveragingMode::SpectraFirst).unwrap();
    assert_ne!(series_first, spectra_first);
    let one_first = one.spectrum(40, AveragingMode::SpectraFirst).unwrap();
    assert_eq!(one_first, one.spectrum(40, AveragingMode::SeriesFirst).unwrap());

    assert!(disorder_average(0, 1, run).is_err());
}

#[test]
fn averaging_ideal_realizations_changes_nothing() {
    let p = ideal_u4(3);
    let run = |_r: u64| {
        let init = prepare_initial_state(6, FRAC_PI_8).unwrap();
        Ok(stroboscopic_run(&p, &init, 16, Scope::Average)?.values)
    };
    let avg = disorder_average(5, 2, run).unwrap();
    let single = run(0).unwrap();
    for (a, b) in avg.mean.iter().zip(&single) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn pattern_lifetime_tracks_decay() {
    let v: Vec<f64> = (0..=2000)
        .map(|j| (FRAC_PI_2 * j as f64).cos() * (-(j as f64) / 300.0).exp())
        .collect();
    let amps = pattern_amplitudes(&v, 4, 40);
    assert!(amps.windows(2).all(|w| w[1] < w[0]));
    let life = pattern_lifetime(&v, 4, 40, 0.5 * amps[0]);
    // amplitude ≈ ½·e^{−t/300}; halves near t ≈ 300·ln 2
    assert!((160..=240).contains(&life), "{life}");
}

proptest! {
    #[test]
    fn bounded_series_have_bounded_spectra(seed in any::<u64>(), tau in 2usize..120) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..=tau).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let sp = spectrum_of_values(&x, tau).unwrap();
        prop_assert!(sp.magnitudes.iter().all(|&m| m <= 1.0 + 1e-12));
        for k in 1..tau {
            prop_assert!((sp.magnitudes[k] - sp.magnitudes[tau - k]).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_keeps_the_peak(seed in any::<u64>(), scale in 0.01f64..0.99) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..=64).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| v * scale).collect();
        let a = spectrum_of_values(&x, 64).unwrap();
        let b = spectrum_of_values(&y, 64).unwrap();
        let top = a.ranked_non_dc()[0];
        let best = b.magnitudes[top];
        prop_assert!(b.magnitudes[1..].iter().all(|&m| m <= best * (1.0 + 1e-12)));
        for (u, v) in a.magnitudes.iter().zip(&b.magnitudes) {
            prop_assert!((u * scale - v).abs() < 1e-12);
        }
    }
}
