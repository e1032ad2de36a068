//! Enumeration of the conjugated lattices inside the archimedean regions,
//! constrained pair counts, successive minima, and the proposition ratio
//! sweeps.

mod bounds;
mod enumerate;
mod minima;
mod pairs;

pub use bounds::{
    emptiness_threshold, rhs_heart, rhs_omega, rhs_psi, rhs_trace_free, rhs_upper_triangular,
    verify_bound, BoundOptions, EllChoice, GridSpec, Proposition,
};
pub use enumerate::{
    enumerate_brute_force, enumerate_region, EnumerationLimits, LatticeElement,
};
pub use minima::{successive_minima, SublatticeKind};
pub use pairs::{
    det_class_sizes, pair_count, upper_triangular_pair_count, PairConstraint, PairCountResult,
    RegionSelector,
};

use crate::algebra::AlgebraError;

#[derive(Debug, thiserror::Error)]
pub enum CountError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("enumeration budget exceeded: visited {visited} nodes, budget {budget}")]
    BudgetExceeded { visited: u64, budget: u64 },
    #[error("scaled invariant overflowed 64-bit storage: {0}")]
    Overflow(String),
    #[error("invalid region: {0}")]
    BadRegion(String),
    #[error("{0}")]
    NonConvergent(String),
}

/// Which part of the conjugated matrix the delta constraint bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    /// `P <= L^2` and `b^2 + c^2 <= delta L^2` (rotation part bounded).
    Omega,
    /// `P <= L^2` and `a^2 + d^2 <= delta L^2` (dilation part bounded).
    Psi,
}

/// An archimedean region with parameters (delta, L); `star` excludes zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub kind: RegionKind,
    pub delta: f64,
    pub l: f64,
    pub star: bool,
}

impl Region {
    pub fn new(kind: RegionKind, delta: f64, l: f64, star: bool) -> Result<Self, CountError> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(CountError::BadRegion(format!(
                "delta must lie in (0, 1], got {delta}"
            )));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(CountError::BadRegion(format!("L must be positive, got {l}")));
        }
        Ok(Self {
            kind,
            delta,
            l,
            star,
        })
    }

    pub fn omega_star(delta: f64, l: f64) -> Result<Self, CountError> {
        Self::new(RegionKind::Omega, delta, l, true)
    }

    pub fn psi_star(delta: f64, l: f64) -> Result<Self, CountError> {
        Self::new(RegionKind::Psi, delta, l, true)
    }
}
