//! Acceptance suite: one test per promised end-to-end behavior, each
//! printing a PASS line with the measured numbers (visible with
//! `--nocapture`). Tolerances come from `homsim::tolerances` or are pinned
//! right here next to the assertion they justify.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::LazyLock;

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use homsim::analytics::{bunching_prediction, mixed_state_bunching};
use homsim::evolution::{
    brute_force_propagate, evolution_time, evolve, jacobi_eigen, PropagationPlan,
};
use homsim::experiment::{
    run_snapshot, run_sweep, sign_symmetry_audit, RunResult, Statistics, SweepConfig,
};
use homsim::model::{ModelParams, Parity, Quasimomentum, SymmetrySector};
use homsim::scattering::{
    barrier_amplitudes, barrier_bound_state, fifty_fifty_barrier, pair_bound_state,
};
use homsim::state::{product_state, sector_weights, symmetrize, TwoParticleState, WavepacketSpec};
use homsim::tolerances::{
    BOUND_STATE_ORACLE_BOUND, IDENTITY_TOLERANCE, INTERACTING_DEVIATION, NONINTERACTING_DEVIATION,
    NORM_DRIFT_BOUND, PROPAGATOR_ORACLE_BOUND, SECTOR_RETENTION,
};

/// Fermion−product suppression is finite-bandwidth limited: packets of width
/// 5 average the prediction over a quasimomentum window of width 0.1, which
/// leaves residual bunching of ~0.02 at the band-edge grid points. The
/// perfect selection rule only emerges in the plane-wave limit.
const FERMION_PRODUCT_CEILING: f64 = 0.02;

/// Pointwise agreement demanded between the fermion-entangled and the
/// boson-product bunching curves (both follow the same closed form).
const TWIN_CURVE_TOLERANCE: f64 = 0.02;

/// Half-width of the quasimomentum window around the pair-resonance center
/// k = 3π/4 (where μ = U = 2J sin k simultaneously) that must come out
/// flagged in the interacting sweeps.
const RESONANCE_WINDOW: f64 = 0.15;

static FIG4: LazyLock<Vec<RunResult>> =
    LazyLock::new(|| run_sweep(&SweepConfig::preset("fig4").unwrap()).unwrap());

static FIG4_FERMIONS: LazyLock<Vec<RunResult>> =
    LazyLock::new(|| run_sweep(&SweepConfig::preset("fig4_fermions").unwrap()).unwrap());

static FERMION_PRODUCT: LazyLock<Vec<RunResult>> = LazyLock::new(|| {
    let mut config = SweepConfig::preset("fig4").unwrap();
    config.statistics = Statistics::Fermion;
    run_sweep(&config).unwrap()
});

static FIG5A: LazyLock<Vec<RunResult>> =
    LazyLock::new(|| run_sweep(&SweepConfig::preset("fig5a").unwrap()).unwrap());

static FIG5B: LazyLock<Vec<RunResult>> =
    LazyLock::new(|| run_sweep(&SweepConfig::preset("fig5b").unwrap()).unwrap());

fn quasimomentum(value: f64) -> Quasimomentum {
    Quasimomentum::new(value).unwrap()
}

#[test]
fn criterion_01_barrier_amplitudes_are_unitary() {
    let mut worst: f64 = 0.0;
    for i in 1..=100 {
        let k = quasimomentum(PI * i as f64 / 101.0);
        for ratio in [0.1, 0.5, 1.0, 2.0, 3.0, 5.0] {
            for sign in [1.0, -1.0] {
                let amps = barrier_amplitudes(1.0, sign * ratio, k).unwrap();
                let (total, overlap) = amps.unitarity_defect();
                worst = worst.max(total.abs()).max(overlap.abs());
            }
        }
    }
    assert!(worst < IDENTITY_TOLERANCE, "worst unitarity defect {worst:e}");
    println!("criterion 01 PASS: worst unitarity defect {worst:.3e} < 1e-12");
}

#[test]
fn criterion_02_fifty_fifty_barrier_splits_evenly() {
    let mut worst: f64 = 0.0;
    for i in 1..=100 {
        let k = quasimomentum(PI * i as f64 / 101.0);
        let mu = fifty_fifty_barrier(1.0, k).unwrap();
        let amps = barrier_amplitudes(1.0, mu, k).unwrap();
        worst = worst.max((amps.transmission_probability() - 0.5).abs());
    }
    assert!(worst < IDENTITY_TOLERANCE, "worst |t|^2 offset {worst:e}");
    println!("criterion 02 PASS: worst | |t|^2 - 1/2 | = {worst:.3e} < 1e-12");
}

#[test]
fn criterion_03_closed_form_interference_identities() {
    // Bosons from the product state on a 50-50 barrier: certain bunching.
    let perfect = bunching_prediction(
        1.0,
        2.0,
        0.0,
        quasimomentum(PI / 2.0),
        SymmetrySector::new(Parity::Even, Parity::Even),
    )
    .unwrap();
    assert!((perfect - 1.0).abs() < IDENTITY_TOLERANCE);

    // The exchange-odd, antidiagonal-even channel is closed at every
    // parameter combination.
    let mut worst_closed: f64 = 0.0;
    for i in 1..=25 {
        let k = quasimomentum(PI * i as f64 / 26.0);
        for mu in [0.3, 1.0, 2.0, 4.0] {
            for u in [0.0, -2.0, 3.0, 50.0] {
                let p = bunching_prediction(
                    1.0,
                    mu,
                    u,
                    k,
                    SymmetrySector::new(Parity::Odd, Parity::Even),
                )
                .unwrap();
                worst_closed = worst_closed.max(p);
            }
        }
    }
    assert!(worst_closed < IDENTITY_TOLERANCE);

    // Distinguishable particles: the equal sector mixture reduces to the
    // classical 2|r t|².
    let mut worst_classical: f64 = 0.0;
    for i in 1..=25 {
        let k = quasimomentum(PI * i as f64 / 26.0);
        for mu in [0.3, 1.0, 2.0, 4.0] {
            let mut weights = BTreeMap::new();
            let mut probs = BTreeMap::new();
            for exchange in [Parity::Even, Parity::Odd] {
                let sector = SymmetrySector::new(exchange, Parity::Even);
                weights.insert(sector, 0.5);
                probs.insert(sector, bunching_prediction(1.0, mu, 0.0, k, sector).unwrap());
            }
            let mixed = mixed_state_bunching(&weights, &probs).unwrap();
            let amps = barrier_amplitudes(1.0, mu, k).unwrap();
            let classical = 2.0 * (amps.reflection * amps.transmission).norm_sqr();
            worst_classical = worst_classical.max((mixed - classical).abs());
        }
    }
    assert!(worst_classical < IDENTITY_TOLERANCE);
    println!(
        "criterion 03 PASS: perfect dip {perfect:.15}, closed channel <= {worst_closed:.3e}, classical mixture offset <= {worst_classical:.3e}"
    );
}

#[test]
fn criterion_04_noninteracting_boson_sweep_matches_prediction() {
    let results = &*FIG4;
    assert_eq!(results.len(), 100);
    let mut worst: f64 = 0.0;
    for row in results {
        assert!(row.failure.is_none(), "row failed: {:?}", row.failure);
        assert!(row.norm_drift < NORM_DRIFT_BOUND);
        worst = worst.max(row.deviation.abs());
    }
    assert!(
        worst <= NONINTERACTING_DEVIATION,
        "worst |deviation| {worst} exceeds {NONINTERACTING_DEVIATION}"
    );
    assert!(results.iter().all(|r| !r.flagged));
    println!(
        "criterion 04 PASS: max |numeric - analytic| = {worst:.6} <= {NONINTERACTING_DEVIATION} over 100 boson-product points"
    );
}

#[test]
fn criterion_05_fermion_product_channel_stays_closed() {
    let results = &*FERMION_PRODUCT;
    assert_eq!(results.len(), 100);
    let mut worst: f64 = 0.0;
    for row in results {
        assert!(row.failure.is_none());
        // The closed form for this channel is exactly zero.
        assert!(row.analytic < IDENTITY_TOLERANCE);
        worst = worst.max(row.bunching_fraction());
    }
    assert!(
        worst <= FERMION_PRODUCT_CEILING,
        "worst fermion-product bunching {worst} exceeds {FERMION_PRODUCT_CEILING}"
    );
    println!(
        "criterion 05 PASS: fermion-product bunching <= {worst:.6} (ceiling {FERMION_PRODUCT_CEILING}) at every grid point"
    );
}

#[test]
fn criterion_06_fermion_entangled_twins_the_boson_curve() {
    let bosons = &*FIG4;
    let fermions = &*FIG4_FERMIONS;
    assert_eq!(bosons.len(), fermions.len());
    let mut worst: f64 = 0.0;
    for (b, f) in bosons.iter().zip(fermions.iter()) {
        assert_eq!(b.k, f.k);
        assert_eq!(b.barrier, f.barrier);
        // Identical closed forms for (+1,+1) and (−1,−1).
        assert!((b.analytic - f.analytic).abs() < IDENTITY_TOLERANCE);
        worst = worst.max((b.bunching_fraction() - f.bunching_fraction()).abs());
    }
    assert!(
        worst <= TWIN_CURVE_TOLERANCE,
        "worst boson/fermion mismatch {worst}"
    );
    println!(
        "criterion 06 PASS: fermion-entangled matches boson-product within {worst:.6} <= {TWIN_CURVE_TOLERANCE} pointwise"
    );
}

#[test]
fn criterion_07_interacting_sweeps_flag_resonances_and_break_sign_symmetry() {
    let all: Vec<&RunResult> = FIG5A.iter().chain(FIG5B.iter()).collect();
    assert_eq!(all.len(), 8 * 25 + 6 * 25);

    // Outside flagged windows the numerics track the closed form.
    let mut worst_unflagged: f64 = 0.0;
    let mut flagged_count = 0usize;
    for row in &all {
        assert!(row.failure.is_none());
        if row.flagged {
            flagged_count += 1;
        } else {
            worst_unflagged = worst_unflagged.max(row.deviation.abs());
        }
    }
    assert!(worst_unflagged <= INTERACTING_DEVIATION);
    // Resonances are broad (the packets average the prediction over a finite
    // quasimomentum window), but the majority of the grid still tracks the
    // closed form.
    assert!(
        flagged_count * 2 < all.len(),
        "{flagged_count} of {} rows flagged",
        all.len()
    );

    // The simultaneous-resonance window μ = U = 2J around k = 3π/4 must be
    // flagged, with the numerics below the closed form: the pair spends time
    // bound to the barrier, which the asymptotic prediction ignores.
    let center = 3.0 * PI / 4.0;
    let mut window_rows = 0usize;
    for row in &all {
        if row.barrier == 2.0 && row.interaction == 2.0 && (row.k - center).abs() <= RESONANCE_WINDOW
        {
            window_rows += 1;
            assert!(
                row.flagged,
                "window row at k = {} not flagged (deviation {})",
                row.k, row.deviation
            );
            assert!(
                row.deviation < 0.0,
                "window row at k = {} has numeric above analytic",
                row.k
            );
        }
    }
    assert_eq!(window_rows, 6, "three window points in each of two sweeps");

    // Opposite interaction (and barrier) signs coincide analytically but not
    // numerically: at least one pair splits by more than 0.01.
    let mut audits = sign_symmetry_audit(&FIG5A);
    audits.extend(sign_symmetry_audit(&FIG5B));
    assert!(!audits.is_empty());
    let mut worst_analytic: f64 = 0.0;
    let mut best_measured: f64 = 0.0;
    for pair in &audits {
        worst_analytic = worst_analytic.max(pair.analytic_difference);
        best_measured = best_measured.max(pair.measured_difference);
    }
    assert!(worst_analytic <= IDENTITY_TOLERANCE);
    assert!(
        best_measured > 0.01,
        "largest sign asymmetry {best_measured}"
    );
    println!(
        "criterion 07 PASS: unflagged |deviation| <= {worst_unflagged:.6}, {window_rows} resonance rows flagged below prediction, sign asymmetry up to {best_measured:.6} with analytic split <= {worst_analytic:.3e}"
    );
}

#[test]
fn criterion_08_hardcore_interaction_restores_antibunching() {
    let mut config = SweepConfig::preset("fig4").unwrap();
    config.k_values = vec![PI / 2.0];
    config.barrier_values = vec![2.0];
    config.interaction_values = vec![100.0];
    let results = run_sweep(&config).unwrap();
    assert_eq!(results.len(), 1);
    let row = &results[0];
    assert!(row.failure.is_none());
    let expected = 16.0 / 10016.0;
    assert!((row.analytic - expected).abs() < IDENTITY_TOLERANCE);
    let numeric = row.bunching_fraction();
    assert!(
        numeric <= 0.02,
        "hardcore bunching fraction {numeric} should be suppressed"
    );
    println!(
        "criterion 08 PASS: hardcore point analytic = {:.7} (= 16/10016), numeric = {numeric:.6} <= 0.02",
        row.analytic
    );
}

/// Dense single-particle chain with hopping J and a central on-site term,
/// diagonalized for the out-of-band state: returns (energy, decay rate).
/// Uses the Jacobi solver — the decay rate reads the eigenvector envelope,
/// which needs rounding-level eigenpair residuals.
fn dense_bound_state(hopping: f64, center_term: f64, sites: usize) -> (f64, f64) {
    let mut h = DMatrix::<f64>::zeros(sites, sites);
    for i in 0..sites - 1 {
        h[(i, i + 1)] = -hopping;
        h[(i + 1, i)] = -hopping;
    }
    h[(sites / 2, sites / 2)] = center_term;
    let (values, vectors) = jacobi_eigen(h);
    let mut idx = 0;
    for i in 0..sites {
        if values[i].abs() > values[idx].abs() {
            idx = i;
        }
    }
    let center = sites / 2;
    let ratio = (vectors[(center + 6, idx)] / vectors[(center + 5, idx)]).abs();
    (values[idx], -ratio.ln())
}

#[test]
fn criterion_09_bound_states_match_dense_diagonalization() {
    // Barrier bound state on the physical lattice size.
    let mut worst_barrier: f64 = 0.0;
    for mu in [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0] {
        let predicted = barrier_bound_state(1.0, mu).unwrap();
        let (energy, kappa) = dense_bound_state(1.0, mu, 61);
        worst_barrier = worst_barrier
            .max((predicted.energy - energy).abs())
            .max((predicted.decay_rate - kappa).abs());
    }
    assert!(
        worst_barrier < BOUND_STATE_ORACLE_BOUND,
        "barrier bound-state disagreement {worst_barrier:e}"
    );

    // Pair bound state against the relative-coordinate lattice (hopping 2J,
    // on-site U at zero separation). |U| = J binds with decay rate ≈ 0.25
    // per site, so its chain must be longer before the closed form emerges.
    let mut worst_pair: f64 = 0.0;
    for u in [-4.0, -2.0, -1.0, 1.0, 2.0, 4.0] {
        let predicted = pair_bound_state(1.0, u).unwrap();
        let sites = if u.abs() < 2.0 { 121 } else { 61 };
        let (energy, kappa) = dense_bound_state(2.0, u, sites);
        worst_pair = worst_pair
            .max((predicted.energy - energy).abs())
            .max((predicted.decay_rate - kappa).abs());
    }
    assert!(
        worst_pair < BOUND_STATE_ORACLE_BOUND,
        "pair bound-state disagreement {worst_pair:e}"
    );

    // Half-unit couplings bind loosest of all (decay rates 0.12–0.25 per
    // site); the dense extraction converges to the closed forms on chains
    // long enough to hold the tails.
    let mut worst_shallow: f64 = 0.0;
    for (hopping, coupling, sites) in
        [(1.0, -0.5, 121), (1.0, 0.5, 121), (2.0, -0.5, 181), (2.0, 0.5, 181)]
    {
        let predicted = if hopping == 1.0 {
            barrier_bound_state(1.0, coupling).unwrap()
        } else {
            pair_bound_state(1.0, coupling).unwrap()
        };
        let (energy, kappa) = dense_bound_state(hopping, coupling, sites);
        worst_shallow = worst_shallow
            .max((predicted.energy - energy).abs())
            .max((predicted.decay_rate - kappa).abs());
    }
    assert!(
        worst_shallow < BOUND_STATE_ORACLE_BOUND,
        "shallow bound-state disagreement {worst_shallow:e}"
    );
    println!(
        "criterion 09 PASS: bound-state oracle offsets {worst_barrier:.3e} (barrier), {worst_pair:.3e} (pair), {worst_shallow:.3e} (shallow) < 1e-6"
    );
}

#[test]
fn criterion_10_propagator_matches_dense_reference_on_random_cases() {
    let mut rng = StdRng::seed_from_u64(0xC0FFEE);
    let sites = 11;
    let mut worst_state: f64 = 0.0;
    let mut worst_drift: f64 = 0.0;
    let mut worst_energy: f64 = 0.0;
    for case in 0..20 {
        let mu = rng.gen_range(-3.0..3.0);
        let u = rng.gen_range(-4.0..4.0);
        let time = rng.gen_range(1.0..25.0);
        let params = ModelParams::new(1.0, mu, u, sites).unwrap();

        let mut grid = Array2::zeros((sites, sites));
        for a in grid.iter_mut() {
            *a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let state = TwoParticleState::from_amplitudes(grid)
            .unwrap()
            .normalized()
            .unwrap();

        let plan = PropagationPlan::for_params(&params);
        let fast = evolve(&state, &params, time, &plan).unwrap();
        let exact = brute_force_propagate(&state, &params, time).unwrap();

        let diff = fast
            .amplitudes()
            .iter()
            .zip(exact.amplitudes().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0_f64, f64::max);
        worst_state = worst_state.max(diff);
        worst_drift = worst_drift.max((fast.norm_sqr() - 1.0).abs());

        let energy = |s: &TwoParticleState| {
            s.inner(&homsim::evolution::apply_hamiltonian(&params, s).unwrap())
                .unwrap()
                .re
        };
        let before = energy(&state);
        let after = energy(&fast);
        worst_energy = worst_energy.max((before - after).abs() / (1.0 + before.abs()));
        assert!(
            diff < PROPAGATOR_ORACLE_BOUND,
            "case {case}: mu={mu} U={u} t={time} disagrees by {diff:e}"
        );
    }
    assert!(worst_drift < NORM_DRIFT_BOUND);
    assert!(worst_energy < 1e-8);
    println!(
        "criterion 10 PASS: 20 random cases, max state difference {worst_state:.3e} < 1e-8, norm drift {worst_drift:.3e} < 1e-10, relative energy drift {worst_energy:.3e} < 1e-8"
    );
}

#[test]
fn criterion_11_symmetry_sector_is_conserved_throughout_the_run() {
    let k = quasimomentum(3.0 * PI / 4.0);
    let params = ModelParams::new(1.0, 2.0, 2.0, 61).unwrap();
    let spec = WavepacketSpec::new(k, -15.0, 5.0).unwrap();
    let sector = SymmetrySector::new(Parity::Even, Parity::Even);
    let mut state = symmetrize(&product_state(&spec, 61).unwrap(), Parity::Even).unwrap();

    let total = evolution_time(-15.0, 61, 1.0, k).unwrap();
    let plan = PropagationPlan::for_params(&params);
    let mut minimum: f64 = sector_weights(&state)[&sector];
    for _ in 0..4 {
        state = evolve(&state, &params, total / 4.0, &plan).unwrap();
        let weight = sector_weights(&state)[&sector] / state.norm_sqr();
        minimum = minimum.min(weight);
    }
    assert!(
        minimum >= SECTOR_RETENTION,
        "sector weight dropped to {minimum}"
    );
    println!(
        "criterion 11 PASS: symmetry-sector weight stayed >= {minimum:.12} (bound {SECTOR_RETENTION}) across the run"
    );
}

#[test]
fn criterion_12_interaction_builds_bound_pairs_in_the_snapshot() {
    let interacting = run_snapshot(&SweepConfig::preset("fig6").unwrap()).unwrap();
    let mut control_config = SweepConfig::preset("fig6").unwrap();
    control_config.interaction_values = vec![0.0];
    let control = run_snapshot(&control_config).unwrap();

    // Strict-diagonal weight (both particles on the same site, off the
    // barrier), recomputed from the stored distributions.
    let strict_diagonal = |snapshot: &homsim::experiment::Snapshot| -> f64 {
        let n = snapshot.sites;
        let mut total = 0.0;
        for i in 0..n {
            if i != n / 2 {
                total += snapshot.distribution[(i, i)];
            }
        }
        total
    };
    let pair_on = strict_diagonal(&interacting);
    let pair_off = strict_diagonal(&control);
    let barrier_on = interacting.partition.barrier;
    let barrier_off = control.partition.barrier;

    assert!(
        pair_on > 1.5 * pair_off,
        "strict-diagonal weight {pair_on} vs control {pair_off}"
    );
    assert!(
        barrier_on > 1.2 * barrier_off,
        "barrier occupancy {barrier_on} vs control {barrier_off}"
    );
    println!(
        "criterion 12 PASS: snapshot strict-diagonal weight {pair_on:.4} > 1.5x control {pair_off:.4}; barrier occupancy {barrier_on:.4} > 1.2x control {barrier_off:.4}"
    );
}
