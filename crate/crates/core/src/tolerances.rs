//! Numeric tolerances and accuracy targets, collected in one place.
//!
//! Every bound that the crate promises (and that the test suite enforces) is
//! defined here rather than scattered through the modules, so the numeric
//! contract can be audited at a glance. Loosening a constant here loosens the
//! corresponding guarantee everywhere.

/// Scattering amplitudes, group velocities, and arrival-time rules reject
/// quasimomenta whose |sin k| falls below this cutoff: at the band edges the
/// group velocity vanishes and the scattering problem degenerates.
pub const QUASIMOMENTUM_CUTOFF: f64 = 1e-6;

/// Truncation target for the Chebyshev expansion of the propagator. The
/// expansion order is chosen so that the first discarded coefficient is
/// smaller than this.
pub const PROPAGATOR_ACCURACY: f64 = 1e-12;

/// Promised bound on |‖Ψ(t)‖² − 1| accumulated over one propagation run of a
/// normalized state.
pub const NORM_DRIFT_BOUND: f64 = 1e-10;

/// Promised max-norm agreement between the Chebyshev propagator and the dense
/// spectral reference propagator on lattices small enough for the latter.
pub const PROPAGATOR_ORACLE_BOUND: f64 = 1e-8;

/// Relative drift allowed in the energy expectation value over a propagation
/// run (energy is conserved exactly; this absorbs floating-point noise).
pub const ENERGY_DRIFT_BOUND: f64 = 1e-8;

/// Squared-norm threshold below which a symmetrized state counts as
/// annihilated instead of being rescaled into garbage.
pub const ANNIHILATION_THRESHOLD: f64 = 1e-12;

/// How accurately the weights of a mixed-sector average must sum to one.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Agreement demanded between closed-form identities that are exact in exact
/// arithmetic (unitarity defects, complementarity sums, mapping consistency,
/// sign-symmetry of analytic predictions, probability partitions).
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Agreement demanded between closed-form bound-state parameters and a dense
/// diagonalization on a lattice large enough to hold the bound state.
pub const BOUND_STATE_ORACLE_BOUND: f64 = 1e-6;

/// Largest |numeric − analytic| bunching deviation expected from a
/// non-interacting sweep at the standard packet geometry (width 5, launch
/// distance 15, 61 sites). The residual is finite-bandwidth physics: the
/// packet averages the analytic curve over a quasimomentum window of width
/// ~1/(2·width).
pub const NONINTERACTING_DEVIATION: f64 = 0.02;

/// Largest |numeric − analytic| bunching deviation expected from an
/// interacting sweep outside flagged resonance windows, at the standard
/// packet geometry. Interaction-induced scattering of the bound relative
/// wave makes this looser than the non-interacting bound.
pub const INTERACTING_DEVIATION: f64 = 0.05;

/// Minimal symmetry-sector weight a state prepared in one sector must retain
/// throughout a propagation run (the evolution commutes with both mirrors).
pub const SECTOR_RETENTION: f64 = 1.0 - 1e-9;
