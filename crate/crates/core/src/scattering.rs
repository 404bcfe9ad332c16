//! Closed-form scattering at the central barrier, the relative-coordinate
//! mapping for the interacting pair, and the bound states of both problems.
//!
//! A plane wave e^{ikl} in the band E(k) = −2J cos k hitting a single-site
//! barrier of height μ splits with amplitudes
//!
//! t = 2iJ sin k / (2iJ sin k − μ),  r = μ / (2iJ sin k − μ),
//!
//! which satisfy |t|² + |r|² = 1 and Re(t·r̄) = 0. The relative coordinate
//! of two interacting particles at zero center-of-mass quasimomentum obeys
//! the same equation with J → 2J and μ → U, which is how the contact
//! interaction acts as a beam splitter for the pair's relative wave. A
//! barrier (interaction) of either sign additionally binds one state that
//! decays as e^{−κ|l|} away from the scatterer, above the band for positive
//! strength and below it for negative strength.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Quasimomentum;

/// Transmission and reflection amplitudes of a lossless single-site
/// scatterer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    /// Transmission amplitude t.
    pub transmission: Complex64,
    /// Reflection amplitude r.
    pub reflection: Complex64,
}

impl ScatteringAmplitudes {
    /// Transmission probability |t|².
    pub fn transmission_probability(&self) -> f64 {
        self.transmission.norm_sqr()
    }

    /// Reflection probability |r|².
    pub fn reflection_probability(&self) -> f64 {
        self.reflection.norm_sqr()
    }

    /// Deviations from losslessness: (|t|² + |r|² − 1, Re t·r̄). Both vanish
    /// for a unitary scatterer, up to rounding.
    pub fn unitarity_defect(&self) -> (f64, f64) {
        let total = self.transmission_probability() + self.reflection_probability() - 1.0;
        let overlap = (self.transmission * self.reflection.conj()).re;
        (total, overlap)
    }
}

/// Band energy E(k) = −2J cos k of a single particle.
pub fn dispersion_energy(hopping: f64, k: Quasimomentum) -> f64 {
    -2.0 * hopping * k.cos()
}

/// Group velocity v(k) = dE/dk = 2J sin k of a single particle.
pub fn group_velocity(hopping: f64, k: Quasimomentum) -> f64 {
    2.0 * hopping * k.sin()
}

/// Scattering amplitudes of a single particle with hopping J at a barrier of
/// height μ, for a propagating quasimomentum k.
pub fn barrier_amplitudes(
    hopping: f64,
    barrier: f64,
    k: Quasimomentum,
) -> Result<ScatteringAmplitudes> {
    let sin_k = k.require_propagating()?;
    let two_j_sin = 2.0 * hopping * sin_k;
    let denom = Complex64::new(-barrier, two_j_sin);
    Ok(ScatteringAmplitudes {
        transmission: Complex64::new(0.0, two_j_sin) / denom,
        reflection: Complex64::new(barrier, 0.0) / denom,
    })
}

/// The barrier height μ = 2J sin k at which the barrier splits 50-50
/// (|t|² = |r|² = 1/2) for the given quasimomentum.
pub fn fifty_fifty_barrier(hopping: f64, k: Quasimomentum) -> Result<f64> {
    Ok(2.0 * hopping * k.require_propagating()?)
}

/// Scattering amplitudes of the pair's relative wave at the contact
/// interaction, for relative quasimomentum k at zero center-of-mass
/// quasimomentum.
///
/// This is exactly the barrier problem with doubled hopping and the
/// interaction in place of the barrier, so the two functions agree
/// identically: `relative_amplitudes(J, U, k) == barrier_amplitudes(2J, U, k)`.
pub fn relative_amplitudes(
    hopping: f64,
    interaction: f64,
    k: Quasimomentum,
) -> Result<ScatteringAmplitudes> {
    barrier_amplitudes(2.0 * hopping, interaction, k)
}

/// A state bound to a single-site scatterer, with amplitude envelope
/// e^{−κ|l|} and energy outside the band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    /// Decay rate κ > 0 of the exponential envelope.
    pub decay_rate: f64,
    /// Energy; above the band for a repulsive scatterer, below for an
    /// attractive one.
    pub energy: f64,
}

impl BoundState {
    /// Localization length 1/κ in sites.
    pub fn localization_length(&self) -> f64 {
        1.0 / self.decay_rate
    }
}

/// The single bound state of a barrier of height μ ≠ 0:
/// κ = asinh(|μ| / 2J), E = sign(μ)·√(4J² + μ²).
pub fn barrier_bound_state(hopping: f64, barrier: f64) -> Result<BoundState> {
    if barrier == 0.0 {
        return Err(Error::NoBoundState);
    }
    Ok(BoundState {
        decay_rate: (barrier.abs() / (2.0 * hopping)).asinh(),
        energy: barrier.signum() * (4.0 * hopping * hopping + barrier * barrier).sqrt(),
    })
}

/// The bound state of the interacting pair at zero center-of-mass
/// quasimomentum: the relative-coordinate problem with doubled hopping, so
/// κ = asinh(|U| / 4J), E = sign(U)·√(16J² + U²).
pub fn pair_bound_state(hopping: f64, interaction: f64) -> Result<BoundState> {
    barrier_bound_state(2.0 * hopping, interaction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::{BOUND_STATE_ORACLE_BOUND, IDENTITY_TOLERANCE};
    use nalgebra::{DMatrix, SymmetricEigen};
    use std::f64::consts::PI;

    fn k(value: f64) -> Quasimomentum {
        Quasimomentum::new(value).unwrap()
    }

    #[test]
    fn dispersion_and_group_velocity() {
        assert!((dispersion_energy(1.0, k(0.0)) + 2.0).abs() < 1e-15);
        assert!((dispersion_energy(1.0, k(PI / 2.0))).abs() < 1e-15);
        assert!((group_velocity(1.0, k(PI / 2.0)) - 2.0).abs() < 1e-15);
        assert!((group_velocity(2.0, k(PI / 3.0)) - 4.0 * (PI / 3.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn fifty_fifty_barrier_splits_evenly() {
        for kv in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0] {
            let mu = fifty_fifty_barrier(1.0, k(kv)).unwrap();
            let amps = barrier_amplitudes(1.0, mu, k(kv)).unwrap();
            assert!(
                (amps.transmission_probability() - 0.5).abs() < IDENTITY_TOLERANCE,
                "k = {kv}"
            );
            assert!((amps.reflection_probability() - 0.5).abs() < IDENTITY_TOLERANCE);
        }
        // k = π/2 at J = 1 gives exactly μ = 2.
        assert!((fifty_fifty_barrier(1.0, k(PI / 2.0)).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn amplitudes_are_unitary_across_band_and_barrier_grid() {
        for i in 1..100 {
            let kv = PI * i as f64 / 100.0;
            for mu_tenths in [1, 5, 10, 20, 30, 50] {
                let mu = mu_tenths as f64 / 10.0;
                for sign in [1.0, -1.0] {
                    let amps = barrier_amplitudes(1.0, sign * mu, k(kv)).unwrap();
                    let (total, overlap) = amps.unitarity_defect();
                    assert!(total.abs() < IDENTITY_TOLERANCE, "k={kv} mu={mu}");
                    assert!(overlap.abs() < IDENTITY_TOLERANCE, "k={kv} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn transparent_barrier_and_strong_barrier_limits() {
        let amps = barrier_amplitudes(1.0, 0.0, k(PI / 3.0)).unwrap();
        assert!((amps.transmission - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(amps.reflection.norm() < 1e-15);

        let amps = barrier_amplitudes(1.0, 1e6, k(PI / 2.0)).unwrap();
        assert!(amps.transmission_probability() < 1e-11);
        assert!((amps.reflection_probability() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn degenerate_quasimomentum_is_rejected() {
        assert!(matches!(
            barrier_amplitudes(1.0, 1.0, k(0.0)),
            Err(Error::DegenerateQuasimomentum { .. })
        ));
        assert!(matches!(
            relative_amplitudes(1.0, 1.0, k(PI)),
            Err(Error::DegenerateQuasimomentum { .. })
        ));
    }

    #[test]
    fn relative_mapping_matches_doubled_barrier_exactly() {
        for kv in [PI / 6.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
            for u in [-4.0, -0.5, 0.5, 2.0, 4.0] {
                let rel = relative_amplitudes(1.3, u, k(kv)).unwrap();
                let mapped = barrier_amplitudes(2.6, u, k(kv)).unwrap();
                assert_eq!(rel, mapped);
            }
        }
    }

    #[test]
    fn relative_amplitudes_match_closed_form() {
        // J = 1, U = 4, k = π/2: t' = 4i/(4i − 4) = (1 − i)/2 and
        // r' = 4/(4i − 4) = −(1 + i)/2.
        let amps = relative_amplitudes(1.0, 4.0, k(PI / 2.0)).unwrap();
        assert!((amps.transmission - Complex64::new(0.5, -0.5)).norm() < 1e-15);
        assert!((amps.reflection - Complex64::new(-0.5, -0.5)).norm() < 1e-15);
        assert!((amps.transmission_probability() - 0.5).abs() < 1e-15);
    }

    /// Dense single-particle lattice Hamiltonian with hopping J and an
    /// on-site term μ at the central site, on an open chain of `sites` sites.
    fn dense_chain(hopping: f64, center_term: f64, sites: usize) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(sites, sites);
        for i in 0..sites - 1 {
            h[(i, i + 1)] = -hopping;
            h[(i + 1, i)] = -hopping;
        }
        h[(sites / 2, sites / 2)] = center_term;
        h
    }

    /// Extracts (energy, decay rate) of the out-of-band state from a dense
    /// diagonalization: the eigenvalue of largest magnitude and the log-ratio
    /// of its eigenvector's envelope a few sites away from the center.
    fn dense_bound_state(hopping: f64, center_term: f64, sites: usize) -> (f64, f64) {
        let eigen = SymmetricEigen::new(dense_chain(hopping, center_term, sites));
        let mut idx = 0;
        for i in 0..sites {
            if eigen.eigenvalues[i].abs() > eigen.eigenvalues[idx].abs() {
                idx = i;
            }
        }
        let vec = eigen.eigenvectors.column(idx);
        let center = sites / 2;
        let ratio = (vec[center + 6] / vec[center + 5]).abs();
        (eigen.eigenvalues[idx], -ratio.ln())
    }

    #[test]
    fn barrier_bound_state_matches_dense_diagonalization() {
        for mu in [-2.0, -1.0, 1.0, 2.0, 3.0] {
            let predicted = barrier_bound_state(1.0, mu).unwrap();
            let (energy, kappa) = dense_bound_state(1.0, mu, 61);
            assert!(
                (predicted.energy - energy).abs() < BOUND_STATE_ORACLE_BOUND,
                "mu = {mu}: {} vs {energy}",
                predicted.energy
            );
            assert!(
                (predicted.decay_rate - kappa).abs() < BOUND_STATE_ORACLE_BOUND,
                "mu = {mu}: {} vs {kappa}",
                predicted.decay_rate
            );
        }
    }

    #[test]
    fn barrier_bound_state_closed_form_values() {
        // μ = 2J: κ = asinh(1), E = ±√8.
        let bs = barrier_bound_state(1.0, 2.0).unwrap();
        assert!((bs.decay_rate - 1.0_f64.asinh()).abs() < 1e-15);
        assert!((bs.energy - 8.0_f64.sqrt()).abs() < 1e-15);
        let bs = barrier_bound_state(1.0, -2.0).unwrap();
        assert!((bs.energy + 8.0_f64.sqrt()).abs() < 1e-15);
        assert!(bs.decay_rate > 0.0);
        assert!(matches!(
            barrier_bound_state(1.0, 0.0),
            Err(Error::NoBoundState)
        ));
    }

    #[test]
    fn pair_bound_state_matches_relative_lattice_diagonalization() {
        for u in [-4.0, -2.0, 2.0, 4.0] {
            let predicted = pair_bound_state(1.0, u).unwrap();
            // The relative coordinate hops with amplitude 2J and sees the
            // interaction as an on-site term at relative distance zero.
            let (energy, kappa) = dense_bound_state(2.0, u, 61);
            assert!(
                (predicted.energy - energy).abs() < BOUND_STATE_ORACLE_BOUND,
                "U = {u}"
            );
            assert!(
                (predicted.decay_rate - kappa).abs() < BOUND_STATE_ORACLE_BOUND,
                "U = {u}"
            );
        }
        // U = 3J: E = √(16 + 9) = 5 exactly.
        let bs = pair_bound_state(1.0, 3.0).unwrap();
        assert!((bs.energy - 5.0).abs() < 1e-15);
        assert!((bs.decay_rate - 0.75_f64.asinh()).abs() < 1e-15);
    }

    #[test]
    fn pair_bound_state_appears_in_full_two_particle_spectrum() {
        // Full two-particle Hamiltonian on a small open lattice (no barrier):
        // the top of the spectrum for U > 0 is the pair bound band, whose
        // maximum approaches √(16J² + U²) as the lattice grows. Open-boundary
        // quantization of the pair's center-of-mass motion limits the
        // agreement on 21 sites, hence the loose bound.
        let sites = 21;
        let dim = sites * sites;
        let u = 3.0;
        let mut h = DMatrix::zeros(dim, dim);
        for l in 0..sites {
            for m in 0..sites {
                let row = l * sites + m;
                if l + 1 < sites {
                    h[(row, (l + 1) * sites + m)] = -1.0;
                    h[((l + 1) * sites + m, row)] = -1.0;
                }
                if m + 1 < sites {
                    h[(row, l * sites + m + 1)] = -1.0;
                    h[(l * sites + m + 1, row)] = -1.0;
                }
                if l == m {
                    h[(row, row)] = u;
                }
            }
        }
        let eigen = SymmetricEigen::new(h);
        let top = eigen.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
        let predicted = pair_bound_state(1.0, u).unwrap().energy;
        assert!(
            (top - predicted).abs() < 0.05,
            "top of spectrum {top} vs pair bound energy {predicted}"
        );
        // The bound band is separated from the two-particle continuum edge.
        assert!(top > 4.0 + 0.5);
    }
}
