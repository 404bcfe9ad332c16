//! Core model types: lattice/Hamiltonian parameters, quasimomenta, and the
//! discrete symmetry labels of the two-particle problem.
//!
//! The physical setting is two identical particles hopping on a
//! one-dimensional tight-binding chain of an odd number of sites
//! l = −(L−1)/2, …, (L−1)/2 with open ends. The central site l = 0 carries a
//! barrier potential that acts as a beam splitter, and the particles feel an
//! on-site contact interaction when they occupy the same site. Energies are
//! measured in units of the hopping amplitude J and times in ħ/J (ħ = 1).

use crate::error::{Error, Result};
use crate::tolerances::QUASIMOMENTUM_CUTOFF;

/// Parameters of the two-particle lattice Hamiltonian
/// H = −J Σ (hops for both particles) + μ (n₀ for each particle) + U Σ_l n_l(n_l−1)/2,
/// i.e. hopping amplitude, barrier height on the central site, contact
/// interaction energy, and the (odd) number of lattice sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Hopping amplitude J > 0; sets the energy unit.
    pub hopping: f64,
    /// On-site energy μ of the central barrier site (either sign).
    pub barrier: f64,
    /// On-site contact interaction U between the two particles (either sign).
    pub interaction: f64,
    /// Number of lattice sites L; odd, so a central site exists.
    pub sites: usize,
}

impl ModelParams {
    /// Validates and builds a parameter set.
    pub fn new(hopping: f64, barrier: f64, interaction: f64, sites: usize) -> Result<Self> {
        if !hopping.is_finite() || hopping <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "hopping must be finite and positive, got {hopping}"
            )));
        }
        if !barrier.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "barrier must be finite, got {barrier}"
            )));
        }
        if !interaction.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interaction must be finite, got {interaction}"
            )));
        }
        check_sites(sites)?;
        Ok(Self {
            hopping,
            barrier,
            interaction,
            sites,
        })
    }

    /// Half-width (L−1)/2 of the site range; sites run from −half to +half.
    pub fn half_width(&self) -> i64 {
        (self.sites as i64 - 1) / 2
    }
}

/// Checks the odd-size lattice contract shared by states and models.
pub(crate) fn check_sites(sites: usize) -> Result<()> {
    if sites < 3 || sites % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "lattice needs an odd number of sites >= 3 so a central site exists, got {sites}"
        )));
    }
    Ok(())
}

/// A single-particle quasimomentum k of the tight-binding band
/// E(k) = −2J cos k, stored in radians per site.
///
/// Construction only requires finiteness; operations that need a propagating
/// wave (nonzero group velocity) call [`Quasimomentum::require_propagating`]
/// and fail with [`Error::DegenerateQuasimomentum`] near the band edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quasimomentum(f64);

impl Quasimomentum {
    /// Wraps a finite quasimomentum value (radians per site).
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "quasimomentum must be finite, got {k}"
            )));
        }
        Ok(Self(k))
    }

    /// The raw value in radians per site.
    pub fn radians(&self) -> f64 {
        self.0
    }

    /// sin k, the kinematic factor of the group velocity.
    pub fn sin(&self) -> f64 {
        self.0.sin()
    }

    /// cos k, the kinematic factor of the band energy.
    pub fn cos(&self) -> f64 {
        self.0.cos()
    }

    /// Returns sin k if the wave propagates (|sin k| at or above the cutoff),
    /// otherwise the degenerate-quasimomentum error.
    pub fn require_propagating(&self) -> Result<f64> {
        let s = self.sin();
        if s.abs() < QUASIMOMENTUM_CUTOFF {
            return Err(Error::DegenerateQuasimomentum {
                k: self.0,
                sin_k_abs: s.abs(),
                cutoff: QUASIMOMENTUM_CUTOFF,
            });
        }
        Ok(s)
    }
}

/// Eigenvalue label (±1) of an involutive mirror symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    /// Eigenvalue +1.
    Even,
    /// Eigenvalue −1.
    Odd,
}

impl Parity {
    /// The eigenvalue as a float, +1.0 or −1.0.
    pub fn sign(&self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    /// The eigenvalue as an integer, +1 or −1.
    pub fn as_int(&self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    /// Parses +1 or −1.
    pub fn from_int(value: i8) -> Result<Self> {
        match value {
            1 => Ok(Parity::Even),
            -1 => Ok(Parity::Odd),
            other => Err(Error::InvalidParameter(format!(
                "parity eigenvalue must be +1 or -1, got {other}"
            ))),
        }
    }
}

/// Joint eigenvalue labels of the two commuting mirror symmetries of the
/// two-particle amplitude Ψ(l, m):
///
/// * `exchange` — eigenvalue ε of particle exchange E: Ψ(l, m) → Ψ(m, l);
///   +1 for bosons, −1 for fermions.
/// * `antidiagonal` — eigenvalue δ of the reflection D = E·P across the
///   lattice antidiagonal: Ψ(l, m) → Ψ(−m, −l), where P is the spatial
///   inversion Ψ(l, m) → Ψ(−l, −m).
///
/// Both mirrors commute with the Hamiltonian, so each sector evolves
/// independently; the interference analytics are formulated sector by sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymmetrySector {
    /// Exchange eigenvalue ε.
    pub exchange: Parity,
    /// Antidiagonal-reflection eigenvalue δ.
    pub antidiagonal: Parity,
}

impl SymmetrySector {
    /// Convenience constructor.
    pub fn new(exchange: Parity, antidiagonal: Parity) -> Self {
        Self {
            exchange,
            antidiagonal,
        }
    }

    /// All four sectors, in a fixed deterministic order.
    pub fn all() -> [SymmetrySector; 4] {
        [
            SymmetrySector::new(Parity::Even, Parity::Even),
            SymmetrySector::new(Parity::Even, Parity::Odd),
            SymmetrySector::new(Parity::Odd, Parity::Even),
            SymmetrySector::new(Parity::Odd, Parity::Odd),
        ]
    }

    /// Eigenvalue of the spatial inversion P = E·D implied by the two labels.
    pub fn inversion(&self) -> Parity {
        if self.exchange == self.antidiagonal {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}
