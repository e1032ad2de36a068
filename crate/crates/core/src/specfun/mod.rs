//! Special functions with two independent evaluation paths: imaginary-order
//! K-Bessel, the spherical function of the principal series, and normalised
//! incomplete gamma values.

mod bessel;
mod envelopes;
mod incgamma;
mod xi;

pub use bessel::{bessel_k_imag, bessel_k_imag_checked, bessel_k_imag_scaled};
pub use envelopes::{verify_appendix_bounds, AppendixGrid, EnvelopeReport, EnvelopeRow};
pub use incgamma::incomplete_gamma_q;
pub use xi::{spherical_xi, xi_mehler, xi_ode_residual, xi_series};

#[derive(Debug, thiserror::Error)]
pub enum SpecFunError {
    #[error("invalid precision: tol {tol} with {digits} working digits")]
    InvalidPrecision { tol: f64, digits: u32 },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("{what}: paths disagree (a = {path_a:e}, b = {path_b:e}, rel = {rel_diff:e} > tol {tol:e})")]
    PrecisionUnachievable {
        what: String,
        path_a: f64,
        path_b: f64,
        rel_diff: f64,
        tol: f64,
    },
    #[error("incomplete gamma order {0} unsupported (closed forms cover s = 1, 2, 3)")]
    UnsupportedGammaOrder(u32),
}

/// Target accuracy plus the mantissa size of the extended-precision path.
///
/// `working_digits` is a floor: internal paths raise their precision further
/// when a cancellation estimate demands it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    target_rel_tol: f64,
    working_digits: u32,
}

impl Precision {
    pub fn new(target_rel_tol: f64, working_digits: u32) -> Result<Self, SpecFunError> {
        let floor = 10f64.powi(8 - working_digits as i32);
        if working_digits < 16 || !(target_rel_tol >= floor) || !(target_rel_tol < 1.0) {
            return Err(SpecFunError::InvalidPrecision {
                tol: target_rel_tol,
                digits: working_digits,
            });
        }
        Ok(Self {
            target_rel_tol,
            working_digits,
        })
    }

    pub fn target_rel_tol(&self) -> f64 {
        self.target_rel_tol
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::new(1e-10, 20).expect("default precision is valid")
    }
}
