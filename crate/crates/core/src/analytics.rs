//! Closed-form interference probabilities for two particles meeting at the
//! barrier, sector by sector.
//!
//! After the wavepackets scatter, the joint amplitude decomposes over the
//! mirror eigenvalues (ε, δ) of exchange and antidiagonal reflection. Each
//! sector interferes with its own pair of phases:
//!
//! * the exchange mirror phase e = r′ + ε t′, built from the relative-wave
//!   amplitudes t′, r′ at the contact interaction (e ≡ −1 in exchange-odd
//!   sectors, where the relative wave never visits the interaction);
//! * the antidiagonal mirror phase d = δ.
//!
//! The probability that both particles end up on the same side of the
//! barrier (bunching) is |e + d|²·|r t|², and the probability that they end
//! up on opposite sides (coincidence) is |e t² + d r²|²; together with the
//! unitarity of (t, r) these sum to one. For U = 0 the bunching probability
//! reduces to |ε + δ|²·4J²μ² sin²k / (4J² sin²k + μ²)², and a contact
//! interaction multiplies the boson-product result by the transmission
//! probability 16J² sin²k / (16J² sin²k + U²) of the relative wave.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Parity, Quasimomentum, SymmetrySector};
use crate::scattering::{barrier_amplitudes, relative_amplitudes, ScatteringAmplitudes};
use crate::tolerances::WEIGHT_SUM_TOLERANCE;

/// The two mirror phases that control interference in one symmetry sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorPhases {
    /// Exchange mirror phase e = r′ + ε t′; unimodular.
    pub exchange: Complex64,
    /// Antidiagonal mirror phase d = δ; ±1.
    pub antidiagonal: Complex64,
}

/// Exchange mirror phase e = r′ + ε t′ for exchange eigenvalue ε, where
/// (t′, r′) are the relative-wave amplitudes at the contact interaction.
///
/// For ε = −1 the phase is identically −1 (independent of U): the
/// exchange-odd relative wave vanishes at zero separation and never feels
/// the interaction. For ε = +1 it is (4iJ sin k + U) / (4iJ sin k − U).
pub fn exchange_mirror_phase(
    hopping: f64,
    interaction: f64,
    k: Quasimomentum,
    exchange: Parity,
) -> Result<Complex64> {
    let amps = relative_amplitudes(hopping, interaction, k)?;
    Ok(amps.reflection + exchange.sign() * amps.transmission)
}

/// Antidiagonal mirror phase d = δ for antidiagonal eigenvalue δ.
pub fn antidiagonal_mirror_phase(antidiagonal: Parity) -> Complex64 {
    Complex64::new(antidiagonal.sign(), 0.0)
}

/// Both mirror phases of a sector.
pub fn mirror_phases(
    hopping: f64,
    interaction: f64,
    k: Quasimomentum,
    sector: SymmetrySector,
) -> Result<MirrorPhases> {
    Ok(MirrorPhases {
        exchange: exchange_mirror_phase(hopping, interaction, k, sector.exchange)?,
        antidiagonal: antidiagonal_mirror_phase(sector.antidiagonal),
    })
}

/// Probability that both particles exit on the same side of the barrier:
/// |e + d|²·|r t|², clamped to [0, 1] against rounding.
pub fn bunching_probability(amps: &ScatteringAmplitudes, phases: &MirrorPhases) -> f64 {
    let combined = (phases.exchange + phases.antidiagonal).norm_sqr()
        * (amps.reflection * amps.transmission).norm_sqr();
    combined.clamp(0.0, 1.0)
}

/// Probability that the particles exit on opposite sides of the barrier:
/// |e t² + d r²|², clamped to [0, 1] against rounding.
pub fn coincidence_probability(amps: &ScatteringAmplitudes, phases: &MirrorPhases) -> f64 {
    let t2 = amps.transmission * amps.transmission;
    let r2 = amps.reflection * amps.reflection;
    (phases.exchange * t2 + phases.antidiagonal * r2)
        .norm_sqr()
        .clamp(0.0, 1.0)
}

/// Bunching probability assembled from the model parameters for one sector:
/// barrier amplitudes at k, mirror phases at (U, ε, δ). This is the general
/// prediction; the non-interacting and interacting closed forms below are
/// special cases of it.
pub fn bunching_prediction(
    hopping: f64,
    barrier: f64,
    interaction: f64,
    k: Quasimomentum,
    sector: SymmetrySector,
) -> Result<f64> {
    let amps = barrier_amplitudes(hopping, barrier, k)?;
    let phases = mirror_phases(hopping, interaction, k, sector)?;
    Ok(bunching_probability(&amps, &phases))
}

/// Coincidence probability assembled from the model parameters for one
/// sector; complements [`bunching_prediction`] to one.
pub fn coincidence_prediction(
    hopping: f64,
    barrier: f64,
    interaction: f64,
    k: Quasimomentum,
    sector: SymmetrySector,
) -> Result<f64> {
    let amps = barrier_amplitudes(hopping, barrier, k)?;
    let phases = mirror_phases(hopping, interaction, k, sector)?;
    Ok(coincidence_probability(&amps, &phases))
}

/// Non-interacting bunching probability in closed form:
/// |ε + δ|² · 4J²μ² sin²k / (4J² sin²k + μ²)².
///
/// The prefactor |ε + δ|² is 4 when the labels agree and 0 when they differ,
/// which encodes both perfect-interference selection rules: fermions from a
/// product-like state (ε = −1, δ = +1) and bosons from an
/// entangled-antisymmetric state (ε = +1, δ = −1) never bunch.
pub fn bunching_noninteracting(
    hopping: f64,
    barrier: f64,
    k: Quasimomentum,
    sector: SymmetrySector,
) -> Result<f64> {
    let sin_k = k.require_propagating()?;
    let label_weight = (sector.exchange.sign() + sector.antidiagonal.sign()).powi(2);
    let js2 = (hopping * sin_k).powi(2);
    let denom = 4.0 * js2 + barrier * barrier;
    Ok((label_weight * 4.0 * js2 * barrier * barrier / (denom * denom)).clamp(0.0, 1.0))
}

/// Interacting bunching probability of the boson-product sector
/// (ε = δ = +1) in closed form: the relative wave's transmission probability
/// 16J² sin²k / (16J² sin²k + U²) times the non-interacting result.
pub fn bunching_interacting(
    hopping: f64,
    barrier: f64,
    interaction: f64,
    k: Quasimomentum,
) -> Result<f64> {
    let sin_k = k.require_propagating()?;
    let both_even = SymmetrySector::new(Parity::Even, Parity::Even);
    let free = bunching_noninteracting(hopping, barrier, k, both_even)?;
    let sixteen_js2 = 16.0 * (hopping * sin_k).powi(2);
    let suppression = sixteen_js2 / (sixteen_js2 + interaction * interaction);
    Ok((suppression * free).clamp(0.0, 1.0))
}

/// Average of per-sector probabilities over a statistical mixture of
/// sectors.
///
/// `weights` must be non-negative and sum to one (within the weight-sum
/// tolerance); every sector with a nonzero weight must have an entry in
/// `sector_probabilities`. This is how non-symmetrized (distinguishable)
/// inputs are handled: they are equal-weight mixtures of the two exchange
/// sectors at fixed δ, which reproduces the classical 2|r t|² coincidence
/// dip for U = 0.
pub fn mixed_state_bunching(
    weights: &BTreeMap<SymmetrySector, f64>,
    sector_probabilities: &BTreeMap<SymmetrySector, f64>,
) -> Result<f64> {
    let mut sum = 0.0;
    let mut average = 0.0;
    for (sector, &weight) in weights {
        if weight < 0.0 {
            return Err(Error::NegativeWeight { value: weight });
        }
        sum += weight;
        if weight == 0.0 {
            continue;
        }
        let probability = sector_probabilities.get(sector).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "missing probability for weighted sector (exchange {}, antidiagonal {})",
                sector.exchange.as_int(),
                sector.antidiagonal.as_int()
            ))
        })?;
        average += weight * probability;
    }
    if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::WeightNormalization {
            sum,
            tolerance: WEIGHT_SUM_TOLERANCE,
        });
    }
    Ok(average)
}
