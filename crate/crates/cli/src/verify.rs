//! Built-in verification suite: fast, deterministic cross-checks of the
//! library's closed forms against independent numerics. Prints one line per
//! check and reports the number of failures.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;

use homsim::analytics::{
    bunching_interacting, bunching_noninteracting, bunching_prediction, coincidence_prediction,
    mirror_phases, mixed_state_bunching,
};
use homsim::evolution::{
    brute_force_propagate, evolve, jacobi_eigen, PropagationPlan,
};
use homsim::model::{ModelParams, Parity, Quasimomentum, SymmetrySector};
use homsim::observables::{diagonal_pair_probability, partition};
use homsim::scattering::{
    barrier_amplitudes, barrier_bound_state, fifty_fifty_barrier, pair_bound_state,
    relative_amplitudes,
};
use homsim::state::{product_state, sector_weights, symmetrize, TwoParticleState, WavepacketSpec};
use homsim::tolerances::{
    BOUND_STATE_ORACLE_BOUND, IDENTITY_TOLERANCE, NORM_DRIFT_BOUND, PROPAGATOR_ORACLE_BOUND,
    SECTOR_RETENTION,
};

/// Prints one line, ignoring a consumer that has stopped reading: the
/// checks keep running and the failure count stays honest either way.
fn say(line: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{line}");
}

/// Runs every check; returns the number of failures.
pub fn run() -> usize {
    let checks: &[(&str, fn() -> Result<String, String>)] = &[
        ("barrier amplitudes are unitary", check_unitarity),
        ("matched barrier splits 50-50", check_even_splitting),
        ("relative amplitudes map onto the doubled-hopping barrier", check_relative_mapping),
        ("mirror phases are unimodular and complementary", check_mirror_phases),
        ("non-interacting selection rules hold", check_selection_rules),
        ("hard-core interaction suppresses bunching", check_hardcore_limit),
        ("bound states match dense diagonalization", check_bound_states),
        ("propagator matches the dense reference", check_propagator),
        ("symmetry sector is conserved", check_sector_retention),
        ("probability partition is exhaustive", check_partition),
    ];
    let mut failures = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => say(format_args!("ok      {name} ({detail})")),
            Err(detail) => {
                say(format_args!("FAILED  {name}: {detail}"));
                failures += 1;
            }
        }
    }
    if failures == 0 {
        say(format_args!("all {} checks passed", checks.len()));
    } else {
        say(format_args!("{failures} of {} checks FAILED", checks.len()));
    }
    failures
}

fn quasimomentum(value: f64) -> Quasimomentum {
    Quasimomentum::new(value).expect("finite quasimomentum")
}

fn k_grid(points: usize) -> Vec<Quasimomentum> {
    (1..=points)
        .map(|i| quasimomentum(PI * i as f64 / (points + 1) as f64))
        .collect()
}

fn check_unitarity() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in k_grid(99) {
        for ratio in [0.1, 0.5, 1.0, 2.0, 3.0, 5.0] {
            for sign in [1.0, -1.0] {
                let amps = barrier_amplitudes(1.0, sign * ratio, k)
                    .map_err(|e| e.to_string())?;
                let (total, overlap) = amps.unitarity_defect();
                worst = worst.max(total.abs()).max(overlap.abs());
            }
        }
    }
    if worst < IDENTITY_TOLERANCE {
        Ok(format!("worst defect {worst:.2e}"))
    } else {
        Err(format!("worst defect {worst:e}"))
    }
}

fn check_even_splitting() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in k_grid(99) {
        let mu = fifty_fifty_barrier(1.0, k).map_err(|e| e.to_string())?;
        let amps = barrier_amplitudes(1.0, mu, k).map_err(|e| e.to_string())?;
        worst = worst.max((amps.transmission_probability() - 0.5).abs());
    }
    if worst < IDENTITY_TOLERANCE {
        Ok(format!("worst offset {worst:.2e}"))
    } else {
        Err(format!("worst offset {worst:e}"))
    }
}

fn check_relative_mapping() -> Result<String, String> {
    let mut points = 0;
    for k in k_grid(25) {
        for u in [-4.0, -1.0, 0.5, 2.0, 6.0] {
            let relative = relative_amplitudes(1.0, u, k).map_err(|e| e.to_string())?;
            let doubled = barrier_amplitudes(2.0, u, k).map_err(|e| e.to_string())?;
            if relative.transmission != doubled.transmission
                || relative.reflection != doubled.reflection
            {
                return Err(format!("mismatch at k = {}, U = {u}", k.radians()));
            }
            points += 1;
        }
    }
    Ok(format!("bit-identical on {points} points"))
}

fn check_mirror_phases() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in k_grid(25) {
        for u in [0.0, -2.0, 1.0, 4.0] {
            for sector in SymmetrySector::all() {
                let phases =
                    mirror_phases(1.0, u, k, sector).map_err(|e| e.to_string())?;
                worst = worst.max((phases.exchange.norm() - 1.0).abs());
                if sector.exchange == Parity::Odd {
                    // Interaction-blind up to the rounding of two complex
                    // divisions.
                    worst =
                        worst.max((phases.exchange - Complex64::new(-1.0, 0.0)).norm());
                }
                for mu in [0.5, 2.0] {
                    let bunch = bunching_prediction(1.0, mu, u, k, sector)
                        .map_err(|e| e.to_string())?;
                    let coin = coincidence_prediction(1.0, mu, u, k, sector)
                        .map_err(|e| e.to_string())?;
                    worst = worst.max((bunch + coin - 1.0).abs());
                }
            }
        }
    }
    if worst < IDENTITY_TOLERANCE {
        Ok(format!("worst identity defect {worst:.2e}"))
    } else {
        Err(format!("worst identity defect {worst:e}"))
    }
}

fn check_selection_rules() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in k_grid(25) {
        for mu in [0.5, 1.0, 2.0, 3.0] {
            // The mismatched channel (odd exchange, even antidiagonal) is
            // closed without interaction.
            let closed = bunching_prediction(
                1.0,
                mu,
                0.0,
                k,
                SymmetrySector::new(Parity::Odd, Parity::Even),
            )
            .map_err(|e| e.to_string())?;
            worst = worst.max(closed);

            // The matched channels reproduce the closed form.
            for sector in [
                SymmetrySector::new(Parity::Even, Parity::Even),
                SymmetrySector::new(Parity::Odd, Parity::Odd),
            ] {
                let assembled =
                    bunching_prediction(1.0, mu, 0.0, k, sector).map_err(|e| e.to_string())?;
                let direct =
                    bunching_noninteracting(1.0, mu, k, sector).map_err(|e| e.to_string())?;
                worst = worst.max((assembled - direct).abs());
            }

            // The equal sector mixture is the classical coincidence law.
            let mut weights = BTreeMap::new();
            let mut probs = BTreeMap::new();
            for exchange in [Parity::Even, Parity::Odd] {
                let sector = SymmetrySector::new(exchange, Parity::Even);
                weights.insert(sector, 0.5);
                probs.insert(
                    sector,
                    bunching_prediction(1.0, mu, 0.0, k, sector).map_err(|e| e.to_string())?,
                );
            }
            let mixed = mixed_state_bunching(&weights, &probs).map_err(|e| e.to_string())?;
            let amps = barrier_amplitudes(1.0, mu, k).map_err(|e| e.to_string())?;
            let classical = 2.0 * (amps.reflection * amps.transmission).norm_sqr();
            worst = worst.max((mixed - classical).abs());
        }
    }
    if worst < IDENTITY_TOLERANCE {
        Ok(format!("worst defect {worst:.2e}"))
    } else {
        Err(format!("worst defect {worst:e}"))
    }
}

fn check_hardcore_limit() -> Result<String, String> {
    let k = quasimomentum(PI / 2.0);
    let strong = bunching_interacting(1.0, 2.0, 100.0, k).map_err(|e| e.to_string())?;
    let expected = 16.0 / 10016.0;
    if (strong - expected).abs() > IDENTITY_TOLERANCE {
        return Err(format!("strong-interaction value {strong}, expected {expected}"));
    }
    let free =
        bunching_noninteracting(1.0, 2.0, k, SymmetrySector::new(Parity::Even, Parity::Even))
            .map_err(|e| e.to_string())?;
    if strong >= 0.01 * free {
        return Err(format!("no suppression: {strong} vs free {free}"));
    }
    Ok(format!("{strong:.6} vs free {free:.3}"))
}

/// Dense single-particle chain with a central on-site term; returns the
/// out-of-band (energy, decay rate) via the Jacobi solver.
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

fn check_bound_states() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for mu in [-2.0, -1.0, 1.0, 2.0] {
        let predicted = barrier_bound_state(1.0, mu).map_err(|e| e.to_string())?;
        let (energy, kappa) = dense_bound_state(1.0, mu, 61);
        worst = worst
            .max((predicted.energy - energy).abs())
            .max((predicted.decay_rate - kappa).abs());
    }
    for u in [-4.0, -2.0, 2.0, 4.0] {
        let predicted = pair_bound_state(1.0, u).map_err(|e| e.to_string())?;
        let (energy, kappa) = dense_bound_state(2.0, u, 61);
        worst = worst
            .max((predicted.energy - energy).abs())
            .max((predicted.decay_rate - kappa).abs());
    }
    if worst < BOUND_STATE_ORACLE_BOUND {
        Ok(format!("worst offset {worst:.2e}"))
    } else {
        Err(format!("worst offset {worst:e}"))
    }
}

/// Deterministic pseudo-random stream for the propagator cases; no external
/// randomness so the suite prints identical numbers on every run.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_double(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

fn check_propagator() -> Result<String, String> {
    let sites = 11;
    let mut stream: u64 = 0x5EED;
    let mut worst_state: f64 = 0.0;
    let mut worst_drift: f64 = 0.0;
    for case in 0..6 {
        let mu = 6.0 * unit_double(&mut stream) - 3.0;
        let u = 8.0 * unit_double(&mut stream) - 4.0;
        let time = 1.0 + 19.0 * unit_double(&mut stream);
        let params = ModelParams::new(1.0, mu, u, sites).map_err(|e| e.to_string())?;

        let mut grid = Array2::zeros((sites, sites));
        for a in grid.iter_mut() {
            *a = Complex64::new(
                2.0 * unit_double(&mut stream) - 1.0,
                2.0 * unit_double(&mut stream) - 1.0,
            );
        }
        let state = TwoParticleState::from_amplitudes(grid)
            .map_err(|e| e.to_string())?
            .normalized()
            .map_err(|e| e.to_string())?;

        let plan = PropagationPlan::for_params(&params);
        let fast = evolve(&state, &params, time, &plan).map_err(|e| e.to_string())?;
        let exact = brute_force_propagate(&state, &params, time).map_err(|e| e.to_string())?;
        let diff = fast
            .amplitudes()
            .iter()
            .zip(exact.amplitudes().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0_f64, f64::max);
        if diff >= PROPAGATOR_ORACLE_BOUND {
            return Err(format!("case {case} disagrees by {diff:e}"));
        }
        worst_state = worst_state.max(diff);
        worst_drift = worst_drift.max((fast.norm_sqr() - 1.0).abs());
    }
    if worst_drift >= NORM_DRIFT_BOUND {
        return Err(format!("norm drift {worst_drift:e}"));
    }
    Ok(format!(
        "6 cases, worst difference {worst_state:.2e}, drift {worst_drift:.2e}"
    ))
}

fn check_sector_retention() -> Result<String, String> {
    let k = quasimomentum(3.0 * PI / 4.0);
    let params = ModelParams::new(1.0, 2.0, 2.0, 31).map_err(|e| e.to_string())?;
    let spec = WavepacketSpec::new(k, -9.0, 2.0).map_err(|e| e.to_string())?;
    let launched = product_state(&spec, 31).map_err(|e| e.to_string())?;
    let state = symmetrize(&launched, Parity::Even).map_err(|e| e.to_string())?;
    let plan = PropagationPlan::for_params(&params);
    let evolved = evolve(&state, &params, 7.0, &plan).map_err(|e| e.to_string())?;
    let sector = SymmetrySector::new(Parity::Even, Parity::Even);
    let weight = sector_weights(&evolved)[&sector] / evolved.norm_sqr();
    if weight >= SECTOR_RETENTION {
        Ok(format!("retained weight {weight:.12}"))
    } else {
        Err(format!("retained weight {weight}"))
    }
}

fn check_partition() -> Result<String, String> {
    let sites = 21;
    let mut stream: u64 = 0xFEED;
    let mut grid = Array2::zeros((sites, sites));
    for a in grid.iter_mut() {
        *a = Complex64::new(
            2.0 * unit_double(&mut stream) - 1.0,
            2.0 * unit_double(&mut stream) - 1.0,
        );
    }
    let state = TwoParticleState::from_amplitudes(grid)
        .map_err(|e| e.to_string())?
        .normalized()
        .map_err(|e| e.to_string())?;
    let parts = partition(&state);
    let total_defect = (parts.total() - 1.0).abs();
    let full_band = diagonal_pair_probability(&state, sites);
    let band_defect = (full_band - (1.0 - parts.barrier)).abs();
    let worst = total_defect.max(band_defect);
    if worst < IDENTITY_TOLERANCE {
        Ok(format!("worst defect {worst:.2e}"))
    } else {
        Err(format!("worst defect {worst:e}"))
    }
}
