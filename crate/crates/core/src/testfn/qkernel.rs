//! The Q kernel: the inverse Fourier transform of the windowed Bessel factor
//! expressed in the invariant `P` and the determinant `tau`, together with
//! its P-derivative and certified polynomial-decay envelopes.
//!
//! For point-mass windows (unit and cosine sums) Q is in closed form; for the
//! Gaussian envelope it is a one-dimensional convolution integral. Everything
//! is written in the form symmetrised over the convolution variable, which
//! keeps the P-derivative finite on the boundary `P = |tau|`.

use super::{SpectralWindow, TestFnError, WindowShape};
use crate::quad::gl_panels;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// `sqrt|tau| e^{-2 pi |tau| cos(alpha) cosh r} cos(2 pi |tau| sin(alpha) sinh r)`:
/// the inverse Fourier transform (over t) of `cosh(alpha t) sqrt|tau|
/// K_{it}(2 pi |tau|) / pi`.
pub fn fourier_kernel(r: f64, tau: f64, alpha: f64) -> f64 {
    let at = tau.abs();
    at.sqrt()
        * (-TWO_PI * at * alpha.cos() * r.cosh()).exp()
        * (TWO_PI * at * alpha.sin() * r.sinh()).cos()
}

#[derive(Debug, Clone, Copy)]
pub struct QValue {
    pub q: f64,
    pub q_p: f64,
}

fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        1.0 - y * y / 6.0 * (1.0 - y * y / 20.0)
    } else {
        y.sin() / y
    }
}

/// The symmetrised convolution integrand and its P-derivative at offset `l`.
///
/// With `S = sqrt(P^2 - tau^2)`,
/// `A = 2 pi cos(alpha) sinh l`, `B = 2 pi sin(alpha) cosh l`,
/// `D = 2 pi sin(alpha) sinh l`, `E = -2 pi cos(alpha) P cosh l`:
///
/// `F(l) = e^E [cosh(SA) cos(SB) cos(PD) + sinh(SA) sin(SB) sin(PD)]`.
///
/// All S-derivatives come paired with factors vanishing like S, so the
/// returned derivative stays finite as `P -> |tau|`.
fn fsym_and_p(l: f64, p: f64, s: f64, alpha: f64) -> (f64, f64) {
    let (ca, sa) = (alpha.cos(), alpha.sin());
    let a = TWO_PI * ca * l.sinh();
    let b = TWO_PI * sa * l.cosh();
    let d = TWO_PI * sa * l.sinh();
    let e = -TWO_PI * ca * p * l.cosh();
    let c1 = s * a;
    let c2 = s * b;
    let c3 = p * d;

    // e^E cosh(C1), e^E sinh(C1), e^E sinhc(C1), computed overflow-free
    let ep = (e + c1).exp();
    let em = (e - c1).exp();
    let ec = 0.5 * (ep + em);
    let es = 0.5 * (ep - em);
    let esc = if c1.abs() < 1e-5 {
        e.exp() * (1.0 + c1 * c1 / 6.0)
    } else {
        es / c1
    };

    let (s2, c2c) = (c2.sin(), c2.cos());
    let (s3, c3c) = (c3.sin(), c3.cos());

    let f = ec * c2c * c3c + es * s2 * s3;

    let e_p = -TWO_PI * ca * l.cosh();
    let df = p * a * a * esc * c2c * c3c
        - p * b * b * ec * sinc(c2) * c3c
        - d * ec * c2c * s3
        + p * a * b * ec * sinc(c2) * s3
        + p * a * b * esc * c2c * s3
        + d * es * s2 * c3c;

    (f, e_p * f + df)
}

fn s_of(p: f64, tau: f64) -> f64 {
    // sqrt(P^2 - tau^2) without cancellation near P = |tau|
    ((p - tau.abs()).max(0.0) * (p + tau.abs())).sqrt()
}

/// Q(P; tau) and its P-derivative for `P >= |tau|`.
pub fn q_eval(p: f64, tau: f64, w: &SpectralWindow) -> Result<QValue, TestFnError> {
    if !(p >= tau.abs() - 1e-12 * tau.abs().max(1.0)) || !p.is_finite() {
        return Err(TestFnError::Domain(format!(
            "q_eval requires P >= |tau|, got P = {p}, tau = {tau}"
        )));
    }
    let s = s_of(p, tau);
    if let Some(masses) = w.point_masses() {
        let mut q = 0.0;
        let mut q_p = 0.0;
        for (c, beta) in masses {
            let (f, fp) = fsym_and_p(beta, p, s, w.alpha());
            q += 0.5 * c * f;
            q_p += 0.5 * c * fp;
        }
        return Ok(QValue { q, q_p });
    }
    let WindowShape::GaussianEnvelope { sigma } = *w.shape() else {
        unreachable!("non-atomic windows are gaussian");
    };
    let alpha = w.alpha();
    let at = tau.abs().max(1e-300);
    let r = (p / at).max(1.0).acosh();
    let decay = TWO_PI * alpha.cos() * at;
    // the product envelope g(l) e^{-decay cosh(l - r)} dies once either
    // factor has lost ~50 nats
    let w_cut = (1.0 + 50.0 / decay.max(1e-280)).acosh();
    let l_max = (r + w_cut).min(10.0 / sigma + r.min(10.0 / sigma) + 0.5) + 0.25;
    let g = |l: f64| sigma / (TWO_PI).sqrt() * (-0.5 * sigma * sigma * l * l).exp();

    // integrate segment-wise, skipping segments whose envelope is negligible
    let seg = 0.5f64;
    let mut q = 0.0;
    let mut q_p = 0.0;
    let env = |l: f64| g(l) * (-decay * ((l - r).cosh() - 1.0)).exp();
    let peak = env(r.min(l_max)).max(env(0.0));
    let mut lo = 0.0;
    while lo < l_max {
        let hi = (lo + seg).min(l_max);
        if env(lo).max(env(hi)) > 1e-22 * peak {
            let freq = TWO_PI * (s + 2.0 * p) * hi.cosh();
            let panels = ((hi - lo) * freq / 4.0).ceil() as usize + 1;
            let mut fq = |l: f64| g(l) * fsym_and_p(l, p, s, alpha).0;
            q += gl_panels(&mut fq, lo, hi, panels, 16);
            let mut fqp = |l: f64| g(l) * fsym_and_p(l, p, s, alpha).1;
            q_p += gl_panels(&mut fqp, lo, hi, panels, 16);
        }
        lo = hi;
    }
    Ok(QValue { q, q_p })
}

/// Certified constant C with |Q(P; tau)| <= C (1+P)^{-A} for all P, tau.
///
/// For point-mass windows the integrand admits the envelope
/// `|F(l)| <= e^{-rho_l P}` with `rho_l = 2 pi cos(alpha) e^{-|l|}`, so the
/// constant is an explicit supremum. The Gaussian window is handled by the
/// frozen sweep constants in [`crate::constants`].
pub fn q_decay_constant(w: &SpectralWindow, a_pow: u32) -> f64 {
    match w.point_masses() {
        Some(masses) => masses
            .iter()
            .map(|&(c, beta)| {
                let rho = TWO_PI * w.alpha().cos() * (-beta.abs()).exp();
                0.5 * c.abs() * sup_poly_exp(a_pow as f64, 0.0, rho)
            })
            .sum(),
        None => crate::constants::GAUSSIAN_Q_DECAY_C8,
    }
}

/// Certified constant for |Q_P| <= C (1+P)^{-A}; the derivative envelope
/// carries one extra power of P and the frequency factors.
pub fn q_p_decay_constant(w: &SpectralWindow, a_pow: u32) -> f64 {
    match w.point_masses() {
        Some(masses) => masses
            .iter()
            .map(|&(c, beta)| {
                let ch = beta.abs().cosh();
                let rho = TWO_PI * w.alpha().cos() * (-beta.abs()).exp();
                let lin = 3.0 * (TWO_PI * ch) * (TWO_PI * ch);
                let cst = 2.0 * TWO_PI * ch;
                0.5 * c.abs() * (cst * sup_poly_exp(a_pow as f64, 0.0, rho)
                    + lin * sup_poly_exp(a_pow as f64, 1.0, rho))
            })
            .sum(),
        None => crate::constants::GAUSSIAN_QP_DECAY_C8,
    }
}

/// Certified constant for |Phi| <= C (1+P)^{-A}, derived from the Q_P
/// envelope at power A+1 through the Abel integral.
pub fn phi_decay_constant(w: &SpectralWindow, a_pow: u32) -> f64 {
    match w.point_masses() {
        Some(_) => std::f64::consts::SQRT_2 * q_p_decay_constant(w, a_pow + 1),
        None => crate::constants::GAUSSIAN_PHI_DECAY_C8,
    }
}

/// Certified pointwise envelope `|Q_P(P)| <= sum_j (cst_j + lin_j P) e^{-rho_j P}`
/// for point-mass windows, with explicit constants from the symmetrised
/// integrand: `cst = 2 pi cos(a) cosh(b) + 4 pi sin(a) sinh(b)` and
/// `lin = (2 pi cos(a) sinh(b) + 2 pi sin(a) cosh(b))^2`.
#[derive(Debug, Clone)]
pub(crate) struct ExpEnvelope {
    terms: Vec<(f64, f64, f64)>, // (cst, lin, rho)
}

pub(crate) fn q_p_exp_envelope(w: &SpectralWindow) -> Option<ExpEnvelope> {
    let masses = w.point_masses()?;
    let (ca, sa) = (w.alpha().cos(), w.alpha().sin());
    let terms = masses
        .iter()
        .map(|&(c, beta)| {
            let rho = TWO_PI * ca * (-beta.abs()).exp();
            let a = TWO_PI * ca * beta.abs().sinh();
            let b = TWO_PI * sa * beta.abs().cosh();
            let cst = TWO_PI * ca * beta.abs().cosh() + 2.0 * TWO_PI * sa * beta.abs().sinh();
            let lin = (a + b) * (a + b);
            (0.5 * c.abs() * cst, 0.5 * c.abs() * lin, rho)
        })
        .collect();
    Some(ExpEnvelope { terms })
}

impl ExpEnvelope {
    /// Envelope value at P.
    pub(crate) fn q_p_at(&self, p: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(cst, lin, rho)| (cst + lin * p) * (-rho * p).exp())
            .sum()
    }

    /// Bound on `(2 sqrt2/pi) int_W^inf |Q_P(w^2 + P)| dw` via
    /// `int_W^inf e^{-rho w^2} dw <= e^{-rho W^2}/(2 rho W)` and
    /// `int_W^inf w^2 e^{-rho w^2} dw <= e^{-rho W^2} (W/(2 rho) + 1/(4 rho^2 W))`.
    pub(crate) fn phi_tail(&self, p: f64, v_max: f64) -> f64 {
        let w0 = v_max.sqrt().max(1e-6);
        let mut total = 0.0;
        for &(cst, lin, rho) in &self.terms {
            let e = (-rho * (v_max + p)).exp();
            let i0 = e / (2.0 * rho * w0);
            let i2 = e * (w0 / (2.0 * rho) + 1.0 / (4.0 * rho * rho * w0));
            total += (cst + lin * p) * i0 + lin * i2;
        }
        2.0 * std::f64::consts::SQRT_2 / std::f64::consts::PI * total
    }

    /// Bound on |Phi(P)| itself (tail from zero, full Gaussian integrals).
    pub(crate) fn phi_at(&self, p: f64) -> f64 {
        let mut total = 0.0;
        for &(cst, lin, rho) in &self.terms {
            let e = (-rho * p).exp();
            let i0 = 0.5 * (std::f64::consts::PI / rho).sqrt();
            let i2 = 0.25 * (std::f64::consts::PI / (rho * rho * rho)).sqrt();
            total += e * ((cst + lin * p) * i0 + lin * i2);
        }
        2.0 * std::f64::consts::SQRT_2 / std::f64::consts::PI * total
    }
}

/// sup over P >= 0 of (1+P)^a P^b e^{-rho P} (b in {0, 1}).
fn sup_poly_exp(a: f64, b: f64, rho: f64) -> f64 {
    assert!(rho > 0.0);
    // coarse log-spaced scan with a tight safety factor; the maximand is
    // unimodal and smooth
    let mut best: f64 = if b == 0.0 { 1.0 } else { 0.0 };
    let p_star = ((a + b) / rho).max(1e-3);
    let mut p = p_star * 1e-3;
    while p < p_star * 1e3 {
        let v = (1.0 + p).powf(a) * p.powf(b) * (-rho * p).exp();
        best = best.max(v);
        p *= 1.02;
    }
    best * 1.05
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::SpectralWindow;

    #[test]
    fn fourier_kernel_alpha_zero_reduces() {
        for &r in &[0.0f64, 0.7, -1.3] {
            let v = fourier_kernel(r, 0.8, 0.0);
            let want = 0.8f64.sqrt() * (-TWO_PI * 0.8 * r.cosh()).exp();
            assert!((v - want).abs() < 1e-15);
        }
    }

    #[test]
    fn fourier_kernel_even_in_r() {
        let v1 = fourier_kernel(1.3, 0.5, 0.9);
        let v2 = fourier_kernel(-1.3, 0.5, 0.9);
        assert_eq!(v1, v2);
    }

    #[test]
    fn q_boundary_value() {
        // Q(|tau|; tau) = (1/2) e^{-2 pi cos(alpha) |tau|}
        let w = SpectralWindow::new(0.7, crate::testfn::WindowShape::Unit).unwrap();
        let tau = 1.3;
        let v = q_eval(tau, tau, &w).unwrap();
        let want = 0.5 * (-TWO_PI * 0.7f64.cos() * tau).exp();
        assert!((v.q - want).abs() < 1e-14 * want);
    }

    #[test]
    fn q_alpha_zero_is_tau_independent() {
        let w = SpectralWindow::unit_alpha_zero();
        for &tau in &[0.2f64, 1.0, 2.5] {
            let v = q_eval(3.0, tau, &w).unwrap();
            let want = 0.5 * (-TWO_PI * 3.0).exp();
            assert!((v.q - want).abs() < 1e-15);
            assert!((v.q_p + TWO_PI * want).abs() < 1e-14);
        }
    }

    #[test]
    fn q_p_matches_divided_difference() {
        let windows = [
            SpectralWindow::long_window(3.0).unwrap(),
            SpectralWindow::new(
                0.4,
                crate::testfn::WindowShape::CosineSum(vec![(1.0, 0.0), (0.5, 1.2)]),
            )
            .unwrap(),
            SpectralWindow::new(
                std::f64::consts::FRAC_PI_4,
                crate::testfn::WindowShape::GaussianEnvelope { sigma: 2.0 },
            )
            .unwrap(),
        ];
        for w in &windows {
            for &(p, tau) in &[(1.5f64, 1.0f64), (4.0, 0.5), (1.0001, 1.0)] {
                let h = 1e-5 * p;
                let qm = q_eval(p - h, tau, w).unwrap().q;
                let qp = q_eval(p + h, tau, w).unwrap().q;
                let v = q_eval(p, tau, w).unwrap();
                let fd = (qp - qm) / (2.0 * h);
                assert!(
                    (v.q_p - fd).abs() < 1e-5 * v.q_p.abs().max(1e-6),
                    "window {:?} at P={p}, tau={tau}: analytic {} vs fd {fd}",
                    w.shape(),
                    v.q_p
                );
            }
        }
    }

    #[test]
    fn q_decay_envelope_holds_on_grid() {
        for t_scale in [3.0, 10.0] {
            let w = SpectralWindow::long_window(t_scale).unwrap();
            let c6 = q_decay_constant(&w, 6);
            for &tau in &[0.25f64, 1.0, 4.0] {
                for k in 0..40 {
                    let p = tau + k as f64 * 1.7;
                    let v = q_eval(p, tau, &w).unwrap();
                    assert!(
                        v.q.abs() <= c6 * (1.0 + p).powi(-6),
                        "T={t_scale} tau={tau} P={p}: |Q|={} > {}",
                        v.q.abs(),
                        c6 * (1.0 + p).powi(-6)
                    );
                }
            }
        }
    }
}
