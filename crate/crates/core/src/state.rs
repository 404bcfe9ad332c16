//! Two-particle amplitudes on the lattice and Gaussian wavepacket
//! preparation.
//!
//! The joint amplitude Ψ(l, m) of the two particles lives on the L×L grid of
//! site pairs, l, m = −(L−1)/2, …, (L−1)/2. Initial states are built from a
//! Gaussian packet G(l) = exp(−(l−c)²/(4σ²) + ikl) launched from the left
//! (center c < 0, momentum +k) and its mirror launched from the right
//! (center −c, momentum −k):
//!
//! * the product state Ψ ∝ G_left(l)·G_right(m), which is even under the
//!   antidiagonal reflection D;
//! * the entangled state Ψ ∝ (l + m)·G_left(l)·G_right(m), odd under D.
//!
//! Exchange symmetry is imposed afterwards by projecting with (1 ± E) and
//! renormalizing; distinguishable runs skip the projection. The module also
//! provides the three mirror operations E, P, D = E·P and the decomposition
//! of a state's squared norm over the four (ε, δ) sectors.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{check_sites, Parity, Quasimomentum, SymmetrySector};
use crate::tolerances::ANNIHILATION_THRESHOLD;

/// Width below which a packet is too narrow for the dispersion-free
/// narrow-band picture and a geometry warning is issued.
pub const MIN_ADVISED_WIDTH: f64 = 2.0;

/// A Gaussian wavepacket G(l) = exp(−(l−center)²/(4·width²) + i·k·l) with
/// its envelope peak at `center` and carrier quasimomentum `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    /// Envelope center c (sites; need not be an integer).
    pub center: f64,
    /// Envelope width σ (sites): the *amplitude* is e^{−1} of its peak at
    /// |l − c| = 2σ, so the density has standard deviation σ.
    pub width: f64,
    /// Carrier quasimomentum.
    pub k: Quasimomentum,
}

impl GaussianPacket {
    /// Validates and builds a packet.
    pub fn new(center: f64, width: f64, k: Quasimomentum) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "packet center must be finite, got {center}"
            )));
        }
        if !width.is_finite() || width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "packet width must be finite and positive, got {width}"
            )));
        }
        Ok(Self { center, width, k })
    }

    /// Unnormalized amplitude at a lattice site.
    pub fn amplitude(&self, site: i64) -> Complex64 {
        let x = site as f64;
        let envelope = (-(x - self.center).powi(2) / (4.0 * self.width * self.width)).exp();
        Complex64::from_polar(envelope, self.k.radians() * x)
    }

    /// Checks that the ±3σ core of the packet fits on a lattice with the
    /// given half-width.
    pub fn check_fits(&self, half_width: i64) -> Result<()> {
        if self.center.abs() + 3.0 * self.width > half_width as f64 {
            return Err(Error::PacketTruncated {
                center: self.center,
                width: self.width,
                half_width,
            });
        }
        Ok(())
    }
}

/// Specification of the standard two-packet launch: one packet at c < 0
/// moving right with quasimomentum k ∈ (0, π), and its mirror image at −c
/// moving left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavepacketSpec {
    /// Carrier quasimomentum of the left packet; the right packet carries −k.
    pub k: Quasimomentum,
    /// Center c < 0 of the left packet; the right packet sits at −c.
    pub center: f64,
    /// Common envelope width σ > 0.
    pub width: f64,
}

impl WavepacketSpec {
    /// Validates and builds a launch specification.
    pub fn new(k: Quasimomentum, center: f64, width: f64) -> Result<Self> {
        if k.radians() <= 0.0 || k.radians() >= std::f64::consts::PI {
            return Err(Error::InvalidParameter(format!(
                "launch quasimomentum must lie in (0, pi), got {}",
                k.radians()
            )));
        }
        k.require_propagating()?;
        if !(center.is_finite() && center < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "launch center must be finite and negative (left of the barrier), got {center}"
            )));
        }
        if !width.is_finite() || width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "packet width must be finite and positive, got {width}"
            )));
        }
        Ok(Self { k, center, width })
    }

    /// The packet launched from the left of the barrier.
    pub fn left_packet(&self) -> GaussianPacket {
        GaussianPacket {
            center: self.center,
            width: self.width,
            k: self.k,
        }
    }

    /// The mirror packet launched from the right of the barrier.
    pub fn right_packet(&self) -> GaussianPacket {
        GaussianPacket {
            center: -self.center,
            width: self.width,
            // Negation of a finite value stays finite.
            k: Quasimomentum::new(-self.k.radians()).expect("finite quasimomentum"),
        }
    }

    /// Non-fatal geometry advisories: packets narrower than
    /// [`MIN_ADVISED_WIDTH`] disperse quickly, and packets launched closer
    /// than 3σ to the barrier overlap it at t = 0.
    pub fn geometry_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.width < MIN_ADVISED_WIDTH {
            warnings.push(format!(
                "packet width {} is below {MIN_ADVISED_WIDTH}: the quasimomentum spread is large and the packet disperses quickly",
                self.width
            ));
        }
        if self.center.abs() < 3.0 * self.width {
            warnings.push(format!(
                "launch distance {} is less than 3 widths ({}): the packets initially overlap the barrier",
                self.center.abs(),
                3.0 * self.width
            ));
        }
        warnings
    }

    /// Hard geometry check: both packet cores must fit between the barrier
    /// region and the open lattice ends.
    pub fn check_fits(&self, sites: usize) -> Result<()> {
        check_sites(sites)?;
        let half_width = (sites as i64 - 1) / 2;
        self.left_packet().check_fits(half_width)?;
        self.right_packet().check_fits(half_width)
    }
}

/// The joint amplitude Ψ(l, m) of two particles on an odd-sized lattice,
/// stored as a dense L×L complex grid (rows indexed by l, columns by m).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    amplitudes: Array2<Complex64>,
}

impl TwoParticleState {
    /// The zero state on a lattice of `sites` sites.
    pub fn zeros(sites: usize) -> Result<Self> {
        check_sites(sites)?;
        Ok(Self {
            amplitudes: Array2::zeros((sites, sites)),
        })
    }

    /// Wraps an existing amplitude grid; must be square with an odd side.
    /// Non-contiguous grids are copied into row-major layout, which the
    /// propagation stencil relies on.
    pub fn from_amplitudes(amplitudes: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = amplitudes.dim();
        if rows != cols {
            return Err(Error::InvalidParameter(format!(
                "amplitude grid must be square, got {rows}x{cols}"
            )));
        }
        check_sites(rows)?;
        let amplitudes = if amplitudes.is_standard_layout() {
            amplitudes
        } else {
            amplitudes.as_standard_layout().into_owned()
        };
        Ok(Self { amplitudes })
    }

    /// Number of lattice sites L.
    pub fn sites(&self) -> usize {
        self.amplitudes.nrows()
    }

    /// Half-width (L−1)/2; sites run from −half to +half.
    pub fn half_width(&self) -> i64 {
        (self.sites() as i64 - 1) / 2
    }

    /// All site coordinates, from −half to +half.
    pub fn site_range(&self) -> std::ops::RangeInclusive<i64> {
        -self.half_width()..=self.half_width()
    }

    fn index_of(&self, site: i64) -> usize {
        let shifted = site + self.half_width();
        debug_assert!(
            (0..self.sites() as i64).contains(&shifted),
            "site {site} outside the lattice"
        );
        shifted as usize
    }

    /// Amplitude at site pair (l, m).
    pub fn amplitude(&self, l: i64, m: i64) -> Complex64 {
        self.amplitudes[(self.index_of(l), self.index_of(m))]
    }

    /// Sets the amplitude at site pair (l, m).
    pub fn set_amplitude(&mut self, l: i64, m: i64, value: Complex64) {
        let idx = (self.index_of(l), self.index_of(m));
        self.amplitudes[idx] = value;
    }

    /// The underlying amplitude grid.
    pub fn amplitudes(&self) -> &Array2<Complex64> {
        &self.amplitudes
    }

    /// Squared norm Σ |Ψ(l, m)|².
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Norm √(Σ |Ψ|²).
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Inner product ⟨self|other⟩ = Σ conj(self)·other.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.sites() != other.sites() {
            return Err(Error::SitesMismatch {
                expected: self.sites(),
                got: other.sites(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Rescales to unit norm; fails if the state is (numerically)
    /// annihilated.
    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm < ANNIHILATION_THRESHOLD {
            return Err(Error::Annihilated {
                norm,
                threshold: ANNIHILATION_THRESHOLD,
            });
        }
        self.amplitudes.mapv_inplace(|a| a / norm);
        Ok(self)
    }
}

/// Normalized product state G_left(l)·G_right(m): both packets incoming, no
/// correlations, even under the antidiagonal reflection D.
pub fn product_state(spec: &WavepacketSpec, sites: usize) -> Result<TwoParticleState> {
    spec.check_fits(sites)?;
    two_packet_state(&spec.left_packet(), &spec.right_packet(), sites, |_, _| {
        Complex64::new(1.0, 0.0)
    })
}

/// Normalized entangled state (l + m)·G_left(l)·G_right(m): the
/// center-of-mass weight flips sign under D, making the state D-odd.
pub fn entangled_state(spec: &WavepacketSpec, sites: usize) -> Result<TwoParticleState> {
    spec.check_fits(sites)?;
    two_packet_state(&spec.left_packet(), &spec.right_packet(), sites, |l, m| {
        Complex64::new((l + m) as f64, 0.0)
    })
}

/// Normalized product state a(l)·b(m) of two independently specified
/// packets — a position or quasimomentum offset on one side, unequal
/// widths, and so on. Without the mirror relation b(x) = a(−x) the result
/// has no definite antidiagonal parity, so [`sector_weights`] generally
/// spreads over all four sectors.
pub fn offset_product_state(
    left: &GaussianPacket,
    right: &GaussianPacket,
    sites: usize,
) -> Result<TwoParticleState> {
    check_sites(sites)?;
    let half_width = (sites as i64 - 1) / 2;
    left.check_fits(half_width)?;
    right.check_fits(half_width)?;
    two_packet_state(left, right, sites, |_, _| Complex64::new(1.0, 0.0))
}

/// Normalized state weight(l, m)·a(l)·b(m) from two arbitrary packets.
fn two_packet_state(
    a: &GaussianPacket,
    b: &GaussianPacket,
    sites: usize,
    weight: impl Fn(i64, i64) -> Complex64,
) -> Result<TwoParticleState> {
    let mut state = TwoParticleState::zeros(sites)?;
    let half = state.half_width();
    // Precompute the two single-particle profiles once per axis.
    let row: Vec<Complex64> = (-half..=half).map(|l| a.amplitude(l)).collect();
    let col: Vec<Complex64> = (-half..=half).map(|m| b.amplitude(m)).collect();
    for (i, l) in (-half..=half).enumerate() {
        for (j, m) in (-half..=half).enumerate() {
            state.amplitudes[(i, j)] = weight(l, m) * row[i] * col[j];
        }
    }
    state.normalized()
}

/// Exchange mirror E: (EΨ)(l, m) = Ψ(m, l).
pub fn apply_exchange(state: &TwoParticleState) -> TwoParticleState {
    TwoParticleState {
        amplitudes: state.amplitudes.t().as_standard_layout().into_owned(),
    }
}

/// Inversion mirror P: (PΨ)(l, m) = Ψ(−l, −m).
pub fn apply_inversion(state: &TwoParticleState) -> TwoParticleState {
    TwoParticleState {
        amplitudes: state
            .amplitudes
            .slice(ndarray::s![..;-1, ..;-1])
            .as_standard_layout()
            .into_owned(),
    }
}

/// Antidiagonal mirror D = E·P: (DΨ)(l, m) = Ψ(−m, −l).
pub fn apply_antidiagonal(state: &TwoParticleState) -> TwoParticleState {
    TwoParticleState {
        amplitudes: state
            .amplitudes
            .slice(ndarray::s![..;-1, ..;-1])
            .reversed_axes()
            .as_standard_layout()
            .into_owned(),
    }
}

/// Projects onto an exchange-parity eigenspace, Ψ → (Ψ ± EΨ), and
/// renormalizes. Fails with [`Error::Annihilated`] when the state has no
/// component in the requested sector (e.g. antisymmetrizing an
/// exchange-symmetric state).
pub fn symmetrize(state: &TwoParticleState, exchange: Parity) -> Result<TwoParticleState> {
    let mirrored = apply_exchange(state);
    let combined = &state.amplitudes + &mirrored.amplitudes.mapv(|a| exchange.sign() * a);
    TwoParticleState {
        amplitudes: combined,
    }
    .normalized()
}

/// Squared-norm weight of the state in each (ε, δ) sector: the norms of the
/// four projections ¼(1 + εE)(1 + δD)Ψ. The weights sum to ‖Ψ‖² because the
/// projectors are orthogonal and complete.
pub fn sector_weights(state: &TwoParticleState) -> BTreeMap<SymmetrySector, f64> {
    let exchanged = apply_exchange(state);
    let inverted = apply_inversion(state);
    let antidiagonal = apply_antidiagonal(state);

    let mut weights = BTreeMap::new();
    for sector in SymmetrySector::all() {
        let eps = sector.exchange.sign();
        let delta = sector.antidiagonal.sign();
        let mut norm_sqr = 0.0;
        for (((a, e), d), p) in state
            .amplitudes
            .iter()
            .zip(exchanged.amplitudes.iter())
            .zip(antidiagonal.amplitudes.iter())
            .zip(inverted.amplitudes.iter())
        {
            norm_sqr += (0.25 * (a + eps * e + delta * d + eps * delta * p)).norm_sqr();
        }
        weights.insert(sector, norm_sqr);
    }
    weights
}
