//! Numerical toolkit for second-moment lattice counts over split quaternion
//! orders and the archimedean test functions that drive them.
//!
//! The crate is organised around five layers:
//!
//! * [`algebra`] — exact arithmetic for 2x2 matrices in tailored coordinates,
//!   the level-N order and its partial duals, conjugation, Atkin-Lehner
//!   reduction and the height function on the upper half plane;
//! * [`specfun`] — imaginary-order K-Bessel functions, the spherical function
//!   of the principal series, and normalised incomplete gamma values, each with
//!   two independent evaluation paths;
//! * [`testfn`] — the spectral window, the Q kernel, and the radial test
//!   function evaluated by an Abel-transform route and a spectral route;
//! * [`counting`] — Fincke-Pohst enumeration of the conjugated lattices inside
//!   the archimedean regions, pair counts, successive minima and the
//!   proposition/conjecture ratio sweeps;
//! * [`theta`] — truncated theta-kernel sums, their L^2 integrand, and the
//!   geometric fourth-moment bound wrapper.
//!
//! [`report`] serialises count reports in byte-stable CSV/JSON form and
//! [`constants`] pins every frozen envelope constant used by the test suite.

pub mod algebra;
pub mod constants;
pub mod counting;
pub mod mp;
pub mod quad;
pub mod rat;
pub mod report;
pub mod specfun;
pub mod testfn;
pub mod theta;

pub use algebra::{GroupElement, HalfPlanePoint, LatticeSpec, TailoredMatrix};
pub use counting::{PairConstraint, Region, RegionKind};
pub use specfun::Precision;
pub use testfn::{PhiValue, SpectralWindow, WindowShape};
