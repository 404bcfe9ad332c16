//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building models, preparing states,
/// propagating them, or assembling experiment runs.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A model or plan parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The quasimomentum sits too close to a band edge, where the group
    /// velocity vanishes and scattering amplitudes degenerate.
    #[error("quasimomentum k = {k} is non-propagating: |sin k| = {sin_k_abs:e} is below the cutoff {cutoff:e}")]
    DegenerateQuasimomentum {
        k: f64,
        sin_k_abs: f64,
        cutoff: f64,
    },

    /// Requested a bound state of a scatterer with zero strength, which has
    /// none.
    #[error("a scatterer of zero strength supports no bound state")]
    NoBoundState,

    /// A wavepacket does not fit on the lattice with the required clearance
    /// from the open boundaries.
    #[error("wavepacket at center {center} with width {width} leaks past the lattice edge ±{half_width}: require |center| + 3·width <= half-width")]
    PacketTruncated {
        center: f64,
        width: f64,
        half_width: i64,
    },

    /// Symmetrization annihilated the state (e.g. antisymmetrizing an
    /// exchange-symmetric amplitude), leaving nothing to normalize.
    #[error("symmetrization annihilated the state: norm {norm:e} is below the threshold {threshold:e}")]
    Annihilated { norm: f64, threshold: f64 },

    /// Two states (or a state and a model) disagree about the lattice size.
    #[error("lattice size mismatch: expected {expected} sites, got {got}")]
    SitesMismatch { expected: usize, got: usize },

    /// The dense reference propagator is restricted to small lattices.
    #[error("lattice of {sites} sites is too large for the dense reference propagator (limit {limit})")]
    LatticeTooLarge { sites: usize, limit: usize },

    /// The Chebyshev expansion could not reach the target accuracy within the
    /// configured order budget.
    #[error("propagator did not converge: needs more than {max_order} expansion terms for target accuracy {target_accuracy:e}")]
    NonConvergence {
        max_order: usize,
        target_accuracy: f64,
    },

    /// A propagated state lost more norm than any emitted result row is
    /// allowed to carry.
    #[error("propagation lost norm conservation: |‖Ψ‖² − 1| = {drift:e} exceeds {bound:e}")]
    NormDrift { drift: f64, bound: f64 },

    /// A sector weight in a mixed-state average is negative.
    #[error("sector weight {value} is negative")]
    NegativeWeight { value: f64 },

    /// Sector weights in a mixed-state average do not sum to one.
    #[error("sector weights sum to {sum}, expected 1 within {tolerance:e}")]
    WeightNormalization { sum: f64, tolerance: f64 },

    /// An experiment configuration is inconsistent or incomplete.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
