//! The archimedean test function: spectral windows h(t), the Q kernel
//! obtained from the inverse Fourier transform of the Bessel factor, and the
//! radial function Phi evaluated by two independent routes (inverse Abel
//! transform of Q, and the spectral integral against the spherical function).

mod phi;
mod qkernel;

pub use phi::{
    pde_residual, phi_abel, phi_routes_agree, phi_spectral, selberg_forward, PdeResidual,
    PhiRoute, PhiValue,
};
pub use qkernel::{fourier_kernel, phi_decay_constant, q_decay_constant, q_eval, QValue};

use crate::specfun::SpecFunError;

#[derive(Debug, thiserror::Error)]
pub enum TestFnError {
    #[error("invalid spectral window: {0}")]
    Window(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("tail bound unachievable at (P = {p}, tau = {tau}): {detail}")]
    TailBound { p: f64, tau: f64, detail: String },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// The even weight h(t) in front of `cosh(alpha t) 2 sqrt|tau| K_{it}`.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowShape {
    /// h = 1; the long-window choice.
    Unit,
    /// h(t) = sum_j c_j cos(beta_j t), inverse Fourier transform a sum of
    /// point masses at +-beta_j.
    CosineSum(Vec<(f64, f64)>),
    /// h(t) = exp(-t^2 / (2 sigma^2)).
    GaussianEnvelope { sigma: f64 },
}

/// Spectral window (alpha, h). `alpha < pi/2` strictly.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralWindow {
    alpha: f64,
    shape: WindowShape,
}

impl SpectralWindow {
    pub fn new(alpha: f64, shape: WindowShape) -> Result<Self, TestFnError> {
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&alpha) {
            return Err(TestFnError::Window(format!(
                "alpha must lie in [0, pi/2), got {alpha}"
            )));
        }
        match &shape {
            WindowShape::GaussianEnvelope { sigma } if !(*sigma > 0.0) => {
                return Err(TestFnError::Window(format!(
                    "gaussian envelope needs sigma > 0, got {sigma}"
                )));
            }
            WindowShape::CosineSum(terms) => {
                if terms.iter().any(|(c, b)| !c.is_finite() || !b.is_finite()) {
                    return Err(TestFnError::Window(
                        "cosine sum coefficients must be finite".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(Self { alpha, shape })
    }

    /// The long window `alpha = pi/2 - 1/T` with unit h, `T >= 3`.
    pub fn long_window(t_scale: f64) -> Result<Self, TestFnError> {
        if !(t_scale >= 3.0) {
            return Err(TestFnError::Window(format!(
                "long window needs T >= 3, got {t_scale}"
            )));
        }
        Self::new(
            std::f64::consts::FRAC_PI_2 - 1.0 / t_scale,
            WindowShape::Unit,
        )
    }

    /// Unit shape at alpha = 0; the reference Gaussian test function.
    pub fn unit_alpha_zero() -> Self {
        Self::new(0.0, WindowShape::Unit).expect("alpha = 0 is valid")
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn shape(&self) -> &WindowShape {
        &self.shape
    }

    /// h(t).
    pub fn h_of_t(&self, t: f64) -> f64 {
        match &self.shape {
            WindowShape::Unit => 1.0,
            WindowShape::CosineSum(terms) => {
                terms.iter().map(|(c, b)| c * (b * t).cos()).sum()
            }
            WindowShape::GaussianEnvelope { sigma } => (-t * t / (2.0 * sigma * sigma)).exp(),
        }
    }

    /// Upper envelope for |h(t)|.
    pub fn h_envelope(&self, t: f64) -> f64 {
        match &self.shape {
            WindowShape::Unit => 1.0,
            WindowShape::CosineSum(terms) => terms.iter().map(|(c, _)| c.abs()).sum(),
            WindowShape::GaussianEnvelope { sigma } => (-t * t / (2.0 * sigma * sigma)).exp(),
        }
    }

    /// The point masses (weight, location >= 0) of the inverse Fourier
    /// transform of h, when it is atomic.
    pub(crate) fn point_masses(&self) -> Option<Vec<(f64, f64)>> {
        match &self.shape {
            WindowShape::Unit => Some(vec![(1.0, 0.0)]),
            WindowShape::CosineSum(terms) => {
                Some(terms.iter().map(|&(c, b)| (c, b.abs())).collect())
            }
            WindowShape::GaussianEnvelope { .. } => None,
        }
    }

    /// Decay rate of `cosh(alpha t) e^{-pi |t|/2}`: the reciprocal of the
    /// effective spectral length.
    pub fn spectral_rate(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 - self.alpha
    }

    /// `cosh(alpha t) e^{-pi |t|/2}`, combined analytically.
    pub fn cosh_alpha_scaled(&self, t: f64) -> f64 {
        let t = t.abs();
        0.5 * ((-self.spectral_rate() * t).exp()
            + (-(std::f64::consts::FRAC_PI_2 + self.alpha) * t).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_validation() {
        assert!(SpectralWindow::new(std::f64::consts::FRAC_PI_2, WindowShape::Unit).is_err());
        assert!(SpectralWindow::new(-0.1, WindowShape::Unit).is_err());
        assert!(SpectralWindow::new(0.3, WindowShape::GaussianEnvelope { sigma: 0.0 }).is_err());
        assert!(SpectralWindow::long_window(2.0).is_err());
        let w = SpectralWindow::long_window(3.0).unwrap();
        assert!((w.alpha() - (std::f64::consts::FRAC_PI_2 - 1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn cosh_scaling_matches_direct_product() {
        let w = SpectralWindow::long_window(5.0).unwrap();
        for &t in &[0.0f64, 1.0, 10.0, 50.0] {
            let direct = (w.alpha() * t).cosh() * (-std::f64::consts::FRAC_PI_2 * t).exp();
            assert!((w.cosh_alpha_scaled(t) - direct).abs() <= 1e-15 * direct.max(1e-300));
        }
    }
}
