//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line with its measured figures (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use num_complex::Complex64;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use spintop::boson::{reference_state, FockMode, ReferenceState};
use spintop::classical::{KickedTopMap, SpherePoint, CHAOTIC_FIXTURE, ISLAND_FIXTURE};
use spintop::linalg::{distance_up_to_global_phase, matrix_exponential, ComplexMatrix, StateVector};
use spintop::protocols::{
    cat_state_protocol, controlled_phase, controlled_phase_pulsed, evolve_kicked_top,
    floquet_operator, measurement_record, readout_coupling, HusimiSpec,
    KickedTopParams,
};
use spintop::pulse::{
    loop_sequence, reduced_spin_action, verify_nonlinear_top, LoopOrdering, SpinWeight,
};
use spintop::spin::{
    embed_symmetric_into_full, measure_jz, single_ion_operator, spin_coherent_state, Axis,
    SpinRegister, SpinState,
};

const CUTOFF: usize = 32;

/// Spin coherent state whose Bloch vector points along (θ, φ): the label
/// is the antipode because the construction rotates the south pole.
fn coherent_at_direction(register: &SpinRegister, theta: f64, phi: f64) -> SpinState {
    spin_coherent_state(register, PI - theta, (phi + PI).rem_euclid(2.0 * PI)).unwrap()
}

#[test]
fn acceptance_01_nonlinear_top_identity() {
    let start = Instant::now();
    let kappas = [0.2, 0.3, 0.4];
    let mut worst_residual = 0.0_f64;
    let mut worst_phase = 0.0_f64;
    for n in 1..=4 {
        for &kx in &kappas {
            for &kp in &kappas {
                let report = verify_nonlinear_top(n, kx, kp, CUTOFF, LoopOrdering::Closed).unwrap();
                worst_residual = worst_residual.max(report.residual);
                worst_phase = worst_phase.max(report.max_phase_error());
                assert!(
                    report.residual < 1e-8,
                    "N={n} kx={kx} kp={kp}: residual {}",
                    report.residual
                );
                assert!(
                    report.max_phase_error() < 1e-8,
                    "N={n} kx={kx} kp={kp}: phase error {}",
                    report.max_phase_error()
                );
            }
        }
    }
    println!(
        "criterion 01 nonlinear-top identity: PASS — worst residual {worst_residual:.2e}, \
         worst phase error {worst_phase:.2e}, {:.1} s",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn acceptance_02_typo_diagnostic() {
    let start = Instant::now();
    let literal = verify_nonlinear_top(2, 0.3, 0.3, CUTOFF, LoopOrdering::Unclosed).unwrap();
    assert!(literal.residual > 0.1, "unclosed residual {}", literal.residual);
    let corrected = verify_nonlinear_top(2, 0.3, 0.3, CUTOFF, LoopOrdering::Closed).unwrap();
    assert!(corrected.residual < 1e-8);
    println!(
        "criterion 02 typo diagnostic: PASS — unclosed residual {:.3} vs corrected {:.2e}, {:.1} s",
        literal.residual,
        corrected.residual,
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn acceptance_03_vibrational_state_independence() {
    let start = Instant::now();
    let mode = FockMode::new(CUTOFF).unwrap();
    let preparations = [
        reference_state(&mode, ReferenceState::Ground).unwrap(),
        reference_state(&mode, ReferenceState::Fock(3)).unwrap(),
        reference_state(&mode, ReferenceState::Coherent(Complex64::new(1.0, 0.0))).unwrap(),
    ];

    // Corrected loop with collective weights.
    let reg = SpinRegister::symmetric(2).unwrap();
    let seq = loop_sequence(0.3, 0.3, SpinWeight::CollectiveJz, SpinWeight::CollectiveJz).unwrap();
    let spin_in = spin_coherent_state(&reg, 1.0, 0.7).unwrap().into_vector();
    let reduced: Vec<StateVector> = preparations
        .iter()
        .map(|m| reduced_spin_action(&reg, &mode, &seq, &spin_in, m).unwrap())
        .collect();
    let mut worst = 0.0_f64;
    for other in &reduced[1..] {
        for (a, b) in reduced[0].amplitudes().iter().zip(other.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
    }
    assert!(worst < 1e-8, "loop reduced-action spread {worst}");

    // Ising gate from single-ion weights at χ = π.
    let full = SpinRegister::full(2).unwrap();
    let kappa = PI.sqrt();
    let seq = loop_sequence(kappa, kappa, SpinWeight::SingleIon(0), SpinWeight::SingleIon(1)).unwrap();
    let sym_state = spin_coherent_state(&SpinRegister::symmetric(2).unwrap(), 1.1, 0.4).unwrap();
    let spin_in = embed_symmetric_into_full(&sym_state).unwrap().into_vector();
    let reduced: Vec<StateVector> = preparations
        .iter()
        .map(|m| reduced_spin_action(&full, &mode, &seq, &spin_in, m).unwrap())
        .collect();
    let mut worst_ising = 0.0_f64;
    for other in &reduced[1..] {
        for (a, b) in reduced[0].amplitudes().iter().zip(other.amplitudes()) {
            worst_ising = worst_ising.max((a - b).norm());
        }
    }
    assert!(worst_ising < 1e-8, "ising reduced-action spread {worst_ising}");
    println!(
        "criterion 03 vibrational-state independence: PASS — loop spread {worst:.2e}, \
         ising spread {worst_ising:.2e}, {:.1} s",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn acceptance_04_cat_states() {
    let start = Instant::now();
    for n in [2usize, 4, 6] {
        let report = cat_state_protocol(n).unwrap();
        assert!((report.population_minus - 0.5).abs() < 1e-8, "N={n}");
        assert!((report.population_plus - 0.5).abs() < 1e-8, "N={n}");
        assert!(report.max_other < 1e-8, "N={n}: other {}", report.max_other);
    }
    // Odd counts: report only, no assertion on the two-component form.
    for n in [3usize, 5] {
        let report = cat_state_protocol(n).unwrap();
        println!(
            "  odd-N diagnostic N={n}: pop(-j)={:.4} pop(+j)={:.4} max_other={:.4}",
            report.population_minus, report.population_plus, report.max_other
        );
    }
    println!(
        "criterion 04 cat states: PASS — even N ∈ {{2,4,6}} split 0.5/0.5 within 1e-8, {:.1} s",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn acceptance_05_controlled_phase() {
    let start = Instant::now();
    let reg = SpinRegister::full(2).unwrap();
    let target = ComplexMatrix::diagonal(&[
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ]);
    let direct = controlled_phase(&reg, 0, 1).unwrap();
    let d_direct = distance_up_to_global_phase(&direct, &target).unwrap();
    assert!(d_direct < 1e-8, "direct distance {d_direct}");

    let mode = FockMode::new(CUTOFF).unwrap();
    let (pulsed, residual) = controlled_phase_pulsed(&reg, &mode, 0, 1).unwrap();
    let d_pulsed = distance_up_to_global_phase(&pulsed, &target).unwrap();
    assert!(d_pulsed < 1e-8, "pulsed distance {d_pulsed}");
    assert!(residual < 1e-8, "pulse residual {residual}");
    println!(
        "criterion 05 controlled phase: PASS — direct {d_direct:.2e}, pulsed {d_pulsed:.2e} \
         (residual {residual:.2e}), {:.1} s",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn acceptance_06_readout_coupling() {
    let start = Instant::now();
    // Three system ions (0..2) plus the readout ion 3.
    let reg = SpinRegister::full(4).unwrap();
    let readout = 3usize;
    let mut jy_sys = ComplexMatrix::zeros(reg.dim(), reg.dim());
    for ion in 0..3 {
        jy_sys = jy_sys.add(&single_ion_operator(&reg, ion, Axis::Y).unwrap()).unwrap();
    }
    let sz_r = single_ion_operator(&reg, readout, Axis::Z).unwrap();
    let mut worst = 0.0_f64;
    for &mu in &[0.3, 0.7] {
        let constructed = readout_coupling(&reg, readout, mu).unwrap();
        let generator = jy_sys.mul(&sz_r).unwrap().scale(Complex64::new(0.0, -mu));
        let direct = matrix_exponential(&generator).unwrap();
        let d = distance_up_to_global_phase(&constructed, &direct).unwrap();
        assert!(d < 1e-8, "mu={mu}: distance {d}");
        worst = worst.max(d);
    }
    println!(
        "criterion 06 readout coupling: PASS — worst distance {worst:.2e} over μ ∈ {{0.3, 0.7}}, {:.1} s",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn acceptance_07_kicked_top_spreading() {
    let start = Instant::now();
    let params = KickedTopParams::with_defaults(40.0).unwrap();
    let register = params.register();

    let floquet = floquet_operator(&params).unwrap();
    let unitarity = floquet.unitarity_defect();
    let unitarity_ok = unitarity < 1e-10;

    let spec = HusimiSpec { every: 1, n_theta: 64, n_phi: 128 };
    let moment_series = |theta: f64, phi: f64, steps: usize| -> (f64, f64) {
        let initial = coherent_at_direction(&register, theta, phi);
        let traj = evolve_kicked_top(&params, &initial, steps, Some(spec)).unwrap();
        let m0 = traj.snapshots[0].1.second_moment_about_centroid().0;
        let max = traj.snapshots[1..]
            .iter()
            .map(|(_, g)| g.second_moment_about_centroid().0)
            .fold(0.0, f64::max);
        (m0, max)
    };

    // Norm drift over 200 steps.
    let initial = coherent_at_direction(&register, ISLAND_FIXTURE.0, ISLAND_FIXTURE.1);
    let long = evolve_kicked_top(&params, &initial, 200, None).unwrap();
    let drift = long.points.iter().map(|p| (p.norm - 1.0).abs()).fold(0.0, f64::max);
    let drift_ok = drift < 1e-9;

    let (island_m0, island_max) = moment_series(ISLAND_FIXTURE.0, ISLAND_FIXTURE.1, 100);
    let island_ratio = island_max / island_m0;
    let island_ok = island_ratio < 3.0;

    let (chaos_m0, chaos_max) = moment_series(CHAOTIC_FIXTURE.0, CHAOTIC_FIXTURE.1, 100);
    let chaos_ratio = chaos_max / chaos_m0;
    let chaos_ok = chaos_ratio > 10.0;

    let verdict = if unitarity_ok && drift_ok && island_ok && chaos_ok { "PASS" } else { "FAIL" };
    println!(
        "criterion 07 kicked top: {verdict} — unitarity {unitarity:.2e} (<1e-10: {unitarity_ok}), \
         norm drift {drift:.2e} (<1e-9: {drift_ok}), island moment ratio {island_ratio:.2} \
         (<3: {island_ok}), chaotic ratio {chaos_ratio:.2} (>10: {chaos_ok}), {:.1} s",
        start.elapsed().as_secs_f64()
    );
    assert!(unitarity_ok, "Floquet unitarity defect {unitarity}");
    assert!(drift_ok, "norm drift {drift}");
    assert!(chaos_ok, "chaotic-sea ratio {chaos_ratio} did not exceed 10");
    // The island bound fails at j = 40: the largest regular island of the
    // κ = 3 map (the stable fixed point at the island fixture, radius
    // ≈ 0.17 rad) is smaller than a j = 40 coherent state (width
    // 1/√(2j) ≈ 0.11 rad), so roughly a third of the state leaks into the
    // chaotic sea and the moment grows to ≈ 7× regardless of fixture
    // choice. The same protocol at j = 100 stays under 3×.
    assert!(
        island_ok,
        "island moment ratio {island_ratio:.2} exceeded 3 (best attainable at j = 40 is ≈ 7; \
         the bound is satisfied for j ≳ 100 where the coherent state fits inside the island)"
    );
}

#[test]
fn acceptance_08_quantum_classical_correspondence() {
    let start = Instant::now();
    let params = KickedTopParams::with_defaults(100.0).unwrap();
    let register = params.register();
    let initial = coherent_at_direction(&register, ISLAND_FIXTURE.0, ISLAND_FIXTURE.1);
    let traj = evolve_kicked_top(&params, &initial, 5, None).unwrap();

    let map = KickedTopMap::new(params.kappa, params.p);
    let mut pt = SpherePoint::from_angles(ISLAND_FIXTURE.0, ISLAND_FIXTURE.1);
    let mut worst = 0.0_f64;
    for point in &traj.points[1..] {
        pt = map.step(pt);
        let (x, y, z) = pt.coords();
        worst = worst
            .max((point.jx - x).abs())
            .max((point.jy - y).abs())
            .max((point.jz - z).abs());
    }
    assert!(worst < 0.05, "per-component deviation {worst}");
    println!(
        "criterion 08 quantum-classical correspondence: PASS — max per-component deviation \
         {worst:.4} over 5 steps at j = 100, {:.1} s",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn acceptance_09_classical_chaos_classification() {
    let start = Instant::now();
    let map = KickedTopMap::new(3.0, FRAC_PI_2);
    let island = map
        .lyapunov_estimate(SpherePoint::from_angles(ISLAND_FIXTURE.0, ISLAND_FIXTURE.1), 100_000)
        .unwrap();
    let chaotic = map
        .lyapunov_estimate(SpherePoint::from_angles(CHAOTIC_FIXTURE.0, CHAOTIC_FIXTURE.1), 100_000)
        .unwrap();
    assert!(island.abs() < 0.01, "island exponent {island}");
    assert!(chaotic > 0.05, "chaotic exponent {chaotic}");
    println!(
        "criterion 09 classical chaos: PASS — island λ = {island:.2e}, chaotic λ = {chaotic:.3}, {:.1} s",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn acceptance_10_sampling_statistics() {
    let start = Instant::now();
    // Collective z sampling against the exact binomial law of an equatorial
    // coherent state (j = 2, five outcomes, all probabilities ≥ 1/16).
    let reg = SpinRegister::symmetric(4).unwrap();
    let state = spin_coherent_state(&reg, FRAC_PI_2, 0.3).unwrap();
    let probs: Vec<f64> = state.vector().amplitudes().iter().map(|z| z.norm_sqr()).collect();
    let n_samples = 100_000usize;
    let samples = measure_jz(&state, 20260810, n_samples).unwrap();
    let mut counts = vec![0usize; reg.dim()];
    for m in samples {
        counts[(m + reg.j()).round() as usize] += 1;
    }
    let mut chi2 = 0.0;
    for (count, p) in counts.iter().zip(&probs) {
        let expected = n_samples as f64 * p;
        chi2 += (*count as f64 - expected).powi(2) / expected;
    }
    let threshold = ChiSquared::new((reg.dim() - 1) as f64).unwrap().inverse_cdf(0.999);
    assert!(chi2 < threshold, "jz chi² = {chi2:.2} vs threshold {threshold:.2}");

    // Decoupled readout record: μ = 0 gives i.i.d. Bernoulli(sin²(θr/2)).
    let params = KickedTopParams::with_defaults(1.0).unwrap();
    let theta_r = 1.0;
    let record = measurement_record(3, 2, &params, 0.0, theta_r, 0.7, 10_000, 4242, None).unwrap();
    let p1 = (theta_r / 2.0_f64).sin().powi(2);
    let ones = record.bits.iter().filter(|&&b| b == 1).count() as f64;
    let n = record.bits.len() as f64;
    let e1 = n * p1;
    let chi2_bits = (ones - e1).powi(2) / e1 + ((n - ones) - (n - e1)).powi(2) / (n - e1);
    let threshold_bits = ChiSquared::new(1.0).unwrap().inverse_cdf(0.999);
    assert!(
        chi2_bits < threshold_bits,
        "record chi² = {chi2_bits:.2} vs threshold {threshold_bits:.2}"
    );
    println!(
        "criterion 10 sampling statistics: PASS — jz χ² {chi2:.2} < {threshold:.2}, \
         record χ² {chi2_bits:.2} < {threshold_bits:.2}, {:.1} s",
        start.elapsed().as_secs_f64()
    );
}
