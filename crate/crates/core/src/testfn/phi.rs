//! The radial test function by two independent routes.
//!
//! * Abel route: `Phi = -(sqrt 2/pi) int_0^inf v^{-1/2} dQ(v + P; tau)`,
//!   evaluated after `v = w^2` (which removes both the `v^{-1/2}` weight and
//!   the boundary derivative blow-up at `P = |tau|`) with a certified
//!   polynomial-decay tail bound and a mandatory doubling check.
//! * Spectral route: `Phi = k(u; tau)/|tau|` with
//!   `k(u;tau) = (1/4pi) int h(t;tau) Xi_{1/2+it}(u) tanh(pi t) t dt`,
//!   `u = (P - |tau|)/(2|tau|)`, assembled from the scaled Bessel path so the
//!   exponential scales cancel analytically.
//!
//! On the determinant-zero locus both routes evaluate at `|tau| = TAU_FLOOR`
//! by continuous extension and tag the result.

use super::qkernel::{q_eval, q_p_decay_constant};
use super::{SpectralWindow, TestFnError, WindowShape};
use crate::constants::TAU_FLOOR;
use crate::quad::gl_panel;
use crate::specfun::{bessel_k_imag_scaled, spherical_xi, Precision};
use std::cell::RefCell;
use std::collections::HashMap;

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiRoute {
    Abel,
    Spectral,
}

#[derive(Debug, Clone, Copy)]
pub struct PhiValue {
    pub value: f64,
    pub route: PhiRoute,
    pub error_estimate: f64,
    /// Set when tau was clamped to the continuous-extension floor.
    pub tau_floored: bool,
}

fn floor_tau(tau: f64) -> (f64, bool) {
    let at = tau.abs();
    if at < TAU_FLOOR {
        (TAU_FLOOR, true)
    } else {
        (at, false)
    }
}

// ---------------------------------------------------------------------------
// Abel route

/// Frozen quadrature layout for the substituted Abel integral; reusing one
/// layout across nearby (P, tau) keeps finite differences of Phi smooth.
#[derive(Debug, Clone)]
pub(crate) struct AbelLayout {
    /// (lo, hi, panels) segments in the substituted variable w.
    segments: Vec<(f64, f64, usize)>,
}

fn abel_layout(p: f64, tau: f64, w: &SpectralWindow, v_max: f64) -> AbelLayout {
    let w_max = v_max.sqrt();
    // resolve the S(w) kink scale near w = 0 when P is close to |tau|
    let eps = ((p - tau.abs()).max(0.0) * (p + tau.abs())).sqrt();
    let kink = (eps / (2.0 * p).sqrt()).max(w_max * 1e-9);
    let levels = ((w_max / kink).log2().ceil() as i64).clamp(3, 48) as usize;
    // oscillation is at most 2 pi sin(alpha) * dS/dw <= 2 pi (2w + sqrt(2P))
    let freq = |x: f64| 2.0 * PI * w.alpha().sin() * (2.0 * x + (2.0 * p).sqrt().min(2.0 * x + 1.0));
    let mut segments = Vec::new();
    let mut hi = w_max;
    for _ in 0..levels {
        let lo = hi * 0.5;
        let panels = ((hi - lo) * freq(hi) / 3.0).ceil() as usize + 1;
        segments.push((lo, hi, panels));
        hi = lo;
    }
    segments.push((0.0, hi, 1));
    segments.reverse();
    AbelLayout { segments }
}

fn abel_integral(
    p: f64,
    tau: f64,
    w: &SpectralWindow,
    layout: &AbelLayout,
) -> Result<f64, TestFnError> {
    let mut total = 0.0;
    for &(lo, hi, panels) in &layout.segments {
        let h = (hi - lo) / panels as f64;
        for k in 0..panels {
            let a = lo + k as f64 * h;
            let b = a + h;
            let mut bad = None;
            let mut f = |x: f64| match q_eval(x * x + p, tau, w) {
                Ok(v) => v.q_p,
                Err(e) => {
                    bad = Some(e);
                    0.0
                }
            };
            total += gl_panel(&mut f, a, b, 16);
            if let Some(e) = bad {
                return Err(e);
            }
        }
    }
    Ok(-(2.0 * std::f64::consts::SQRT_2 / PI) * total)
}

/// Solve the tail criterion `C_8 (1 + v + P)^{-8} * 2 sqrt(v) / pi <= tol`.
fn solve_v_max(p: f64, c8: f64, tol_abs: f64) -> f64 {
    let crit = |v: f64| c8 * (1.0 + v + p).powi(-8) * 2.0 * v.sqrt() / PI;
    let mut v = 1.0f64.max(p * 0.1);
    while crit(v) > tol_abs && v < 1e9 {
        v *= 2.0;
    }
    v
}

pub fn phi_abel(
    p: f64,
    tau: f64,
    w: &SpectralWindow,
    prec: &Precision,
) -> Result<PhiValue, TestFnError> {
    let (at, floored) = floor_tau(tau);
    if !(p >= at) || !p.is_finite() {
        return Err(TestFnError::Domain(format!(
            "phi_abel requires P >= |tau|, got P = {p}, tau = {tau}"
        )));
    }
    let tol = prec.target_rel_tol();
    let qv = q_eval(p, at, w)?;
    let c8 = q_p_decay_constant(w, 8);
    let scale = qv.q.abs().max(qv.q_p.abs()).max(c8 * (1.0 + p).powi(-8)).max(1e-290);

    let mut v_max = solve_v_max(p, c8, tol * scale);
    let mut value = abel_integral(p, at, w, &abel_layout(p, at, w, v_max))?;
    let mut err = f64::INFINITY;
    for _ in 0..6 {
        let v2 = 2.0 * v_max;
        let value2 = abel_integral(p, at, w, &abel_layout(p, at, w, v2))?;
        err = (value2 - value).abs();
        let ok = err <= tol * value2.abs().max(1e-2 * scale);
        value = value2;
        v_max = v2;
        if ok {
            return Ok(PhiValue {
                value,
                route: PhiRoute::Abel,
                error_estimate: err,
                tau_floored: floored,
            });
        }
    }
    Err(TestFnError::TailBound {
        p,
        tau,
        detail: format!("doubling v_max to {v_max} still moved Phi by {err:e}"),
    })
}

/// Abel-route Phi on a frozen layout; used by the finite-difference PDE
/// check, where the quadrature grid must not depend on the sample point.
pub(crate) fn phi_abel_fixed(
    p: f64,
    tau: f64,
    w: &SpectralWindow,
    layout: &AbelLayout,
) -> Result<f64, TestFnError> {
    abel_integral(p, tau.abs().max(TAU_FLOOR), w, layout)
}

// ---------------------------------------------------------------------------
// spectral route

thread_local! {
    static K_CACHE: RefCell<HashMap<(u64, u64), f64>> = RefCell::new(HashMap::new());
}

fn scaled_k_cached(t: f64, x: f64, prec: &Precision) -> Result<f64, TestFnError> {
    let key = (t.to_bits(), x.to_bits());
    if let Some(v) = K_CACHE.with(|c| c.borrow().get(&key).copied()) {
        return Ok(v);
    }
    let v = bessel_k_imag_scaled(t, x, prec)?;
    K_CACHE.with(|c| {
        let mut map = c.borrow_mut();
        if map.len() > 4_000_000 {
            map.clear();
        }
        map.insert(key, v);
    });
    Ok(v)
}

/// h(t; tau) assembled through the scaled Bessel path:
/// `h(t) * [cosh(alpha t) e^{-pi|t|/2}] * 2 sqrt|tau| * e^{pi|t|/2} K_{it}`.
pub fn h_transform(
    t: f64,
    tau: f64,
    w: &SpectralWindow,
    prec: &Precision,
) -> Result<f64, TestFnError> {
    if tau == 0.0 {
        return Err(TestFnError::Domain("h_transform requires tau != 0".into()));
    }
    let at = tau.abs();
    let k = scaled_k_cached(t.abs(), 2.0 * PI * at, prec)?;
    Ok(w.h_of_t(t) * w.cosh_alpha_scaled(t) * 2.0 * at.sqrt() * k)
}

fn spectral_t_panel_len(w: &SpectralWindow, theta: f64) -> f64 {
    let beta_max = match w.shape() {
        WindowShape::CosineSum(terms) => terms.iter().map(|(_, b)| b.abs()).fold(0.0, f64::max),
        _ => 0.0,
    };
    let freq = theta + beta_max;
    (3.0 / freq.max(0.75)).clamp(0.05, 1.5)
}

pub fn phi_spectral(
    p: f64,
    tau: f64,
    w: &SpectralWindow,
    prec: &Precision,
) -> Result<PhiValue, TestFnError> {
    let (at, floored) = floor_tau(tau);
    if !(p >= at) || !p.is_finite() {
        return Err(TestFnError::Domain(format!(
            "phi_spectral requires P >= |tau|, got P = {p}, tau = {tau}"
        )));
    }
    let tol = prec.target_rel_tol();
    let u = (p - at) / (2.0 * at);
    let theta = (2.0 * u + 2.0 * (u * (1.0 + u)).sqrt()).ln_1p();
    let x = 2.0 * PI * at;
    let rate = w.spectral_rate();
    let t_eff = (1.0 / rate).max(1.0);

    // cap from the long-window truncation rule; the envelope-based stopping
    // below normally halts far earlier
    let t_cap = t_eff * (40.0 + 10.0 * (1.0 + 1.0 / tol).ln());
    let lp = spectral_t_panel_len(w, theta);
    let t_min = match w.shape() {
        WindowShape::GaussianEnvelope { sigma } => 3.0 * sigma + 2.0,
        _ => 6.0 * t_eff,
    };

    let mut acc = 0.0f64;
    let mut lo = 0.0f64;
    let mut quiet = 0u32;
    while lo < t_cap {
        let hi = (lo + lp).min(t_cap);
        let mut bad = None;
        let mut f = |t: f64| {
            let ht = match h_transform(t, at, w, prec) {
                Ok(v) => v,
                Err(e) => {
                    bad = Some(e);
                    return 0.0;
                }
            };
            let xi = match spherical_xi(t, u, prec) {
                Ok(v) => v,
                Err(e) => {
                    bad = Some(TestFnError::SpecFun(e));
                    return 0.0;
                }
            };
            ht * xi * (PI * t).tanh() * t
        };
        let contrib = gl_panel(&mut f, lo, hi, 16);
        if let Some(e) = bad {
            return Err(e);
        }
        acc += contrib;
        if hi > t_min {
            if contrib.abs() <= tol * 1e-2 * acc.abs().max(1e-290) {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        lo = hi;
    }
    let _ = x;

    let value = acc / (2.0 * PI * at);
    Ok(PhiValue {
        value,
        route: PhiRoute::Spectral,
        error_estimate: tol * value.abs(),
        tau_floored: floored,
    })
}

/// Convenience used by the acceptance suite: both routes plus their relative
/// gap against `max(|Phi|, 1e-30)`.
pub fn phi_routes_agree(
    p: f64,
    tau: f64,
    w: &SpectralWindow,
    prec: &Precision,
) -> Result<(PhiValue, PhiValue, f64), TestFnError> {
    let a = phi_abel(p, tau, w, prec)?;
    let s = phi_spectral(p, tau, w, prec)?;
    let rel = (a.value - s.value).abs() / a.value.abs().max(s.value.abs()).max(1e-30);
    Ok((a, s, rel))
}

// ---------------------------------------------------------------------------
// forward transform

/// `4 pi int_0^inf k(u; tau) Xi_{1/2+it}(u) du` with `k = |tau| Phi` from the
/// Abel route; the round trip should recover `h_transform(t, tau, w)`.
///
/// The inner Abel evaluations run once per node against an absolute target
/// tied to the peak of k; the truncation certificate is a single doubling
/// check on the whole forward integral.
pub fn selberg_forward(
    w: &SpectralWindow,
    tau: f64,
    t: f64,
    prec: &Precision,
) -> Result<f64, TestFnError> {
    if tau == 0.0 {
        return Err(TestFnError::Domain("selberg_forward requires tau != 0".into()));
    }
    let at = tau.abs();
    let tol_outer = prec.target_rel_tol().max(1e-7);
    let tol_inner = tol_outer * 1e-2;
    let c8 = q_p_decay_constant(w, 8);
    let phi_scale = phi_abel(at, at, w, prec)?.value.abs().max(1e-250);

    // initial truncation where even the polynomial decay envelope is below
    // tolerance relative to the peak
    let mut u_max = 1.0f64;
    while std::f64::consts::SQRT_2 * c8 * (1.0 + at * (2.0 * u_max + 1.0)).powi(-8)
        > tol_inner * phi_scale
        && u_max < 1e7
    {
        u_max *= 2.0;
    }

    let integral = |u_hi: f64| -> Result<f64, TestFnError> {
        let s_hi = u_hi.sqrt();
        // phase t*theta(s^2) has |d theta/ds| <= 2; k oscillates at most at
        // 2 pi sin(alpha) * 2|tau| per unit u, i.e. 8 pi |tau| s per unit s
        let freq = 2.0 * t.abs() + 8.0 * PI * w.alpha().sin() * at * s_hi + 1.0;
        let panels = ((s_hi * freq / 3.0).ceil() as usize).max(4);
        let h = s_hi / panels as f64;
        let mut total = 0.0;
        for k in 0..panels {
            let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
            let mut bad = None;
            let mut f = |s: f64| {
                let u = s * s;
                let p = at * (2.0 * u + 1.0);
                let v_max = solve_v_max(p, c8, tol_inner * phi_scale);
                let layout = abel_layout(p, at, w, v_max);
                let kval = match abel_integral(p, at, w, &layout) {
                    Ok(v) => at * v,
                    Err(e) => {
                        bad = Some(e);
                        return 0.0;
                    }
                };
                let xi = match spherical_xi(t, u, prec) {
                    Ok(v) => v,
                    Err(e) => {
                        bad = Some(TestFnError::SpecFun(e));
                        return 0.0;
                    }
                };
                kval * xi * 2.0 * s
            };
            total += gl_panel(&mut f, a, b, 16);
            if let Some(e) = bad {
                return Err(e);
            }
        }
        Ok(4.0 * PI * total)
    };

    let mut value = integral(u_max)?;
    for _ in 0..4 {
        let value2 = integral(2.0 * u_max)?;
        let moved = (value2 - value).abs();
        let ok = moved <= tol_outer * value2.abs().max(at * phi_scale * 1e-3);
        value = value2;
        u_max *= 2.0;
        if ok {
            return Ok(value);
        }
    }
    Err(TestFnError::TailBound {
        p: at,
        tau,
        detail: "forward transform u-truncation did not settle".into(),
    })
}

// ---------------------------------------------------------------------------
// oscillator PDE residual

#[derive(Debug, Clone, Copy)]
pub struct PdeResidual {
    pub residual: f64,
    /// Residual divided by `4 pi^2 (P + |tau|) |Phi|`.
    pub scaled: f64,
    pub phi: f64,
}

/// Central-difference check of `-Delta Phi + 4 pi^2 det * Phi = 0` in the
/// coordinates `[a,b,c]+d`, where
/// `Delta = (1/4)(d^2/da^2 - d^2/db^2 - d^2/dc^2 + d^2/dd^2)`.
///
/// Requires `P >= 1.2 |tau|` and `|tau| >= 0.1`, which keeps a margin from
/// the boundary where smoothness is not guaranteed.
pub fn pde_residual(
    gamma: [f64; 4],
    w: &SpectralWindow,
    step: f64,
    prec: &Precision,
) -> Result<PdeResidual, TestFnError> {
    let [a, b, c, d] = gamma;
    let p0 = a * a + b * b + c * c + d * d;
    let tau0 = a * a - b * b - c * c + d * d;
    if !(p0 >= 1.2 * tau0.abs()) || !(tau0.abs() >= 0.1) {
        return Err(TestFnError::Domain(format!(
            "pde_residual needs P >= 1.2 |tau| and |tau| >= 0.1, got P = {p0}, tau = {tau0}"
        )));
    }
    let tol = prec.target_rel_tol();
    let c8 = q_p_decay_constant(w, 8);
    let qv = q_eval(p0, tau0.abs(), w)?;
    let scale = qv.q_p.abs().max(c8 * (1.0 + p0).powi(-8)).max(1e-290);
    // generous fixed tail so the same layout serves all stencil points
    let v_max = solve_v_max(p0 + 1.0, c8, tol * 1e-3 * scale);
    let layout = abel_layout(p0, tau0.abs(), w, v_max);

    let phi_at = |g: [f64; 4]| -> Result<f64, TestFnError> {
        let p = g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
        let tau = g[0] * g[0] - g[1] * g[1] - g[2] * g[2] + g[3] * g[3];
        phi_abel_fixed(p, tau, w, &layout)
    };

    let phi0 = phi_at(gamma)?;
    let mut lap = 0.0;
    for (axis, sign) in [(0usize, 1.0f64), (1, -1.0), (2, -1.0), (3, 1.0)] {
        let mut gp = gamma;
        gp[axis] += step;
        let mut gm = gamma;
        gm[axis] -= step;
        let second = (phi_at(gp)? - 2.0 * phi0 + phi_at(gm)?) / (step * step);
        lap += 0.25 * sign * second;
    }
    let residual = -lap + 4.0 * PI * PI * tau0 * phi0;
    let scaled = residual.abs() / (4.0 * PI * PI * (p0 + tau0.abs()) * phi0.abs()).max(1e-290);
    Ok(PdeResidual {
        residual,
        scaled,
        phi: phi0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::new(1e-10, 20).unwrap()
    }

    #[test]
    fn alpha_zero_closed_form_abel() {
        // Phi = e^{-2 pi P} for the unit window at alpha = 0
        let w = SpectralWindow::unit_alpha_zero();
        let p = prec();
        for &pv in &[1.0f64, 2.0, 5.0] {
            let v = phi_abel(pv, 1.0, &w, &p).unwrap();
            let want = (-2.0 * PI * pv).exp();
            assert!(
                (v.value - want).abs() < 1e-10 * want,
                "P={pv}: {} vs {want}",
                v.value
            );
        }
    }

    #[test]
    fn alpha_zero_closed_form_spectral() {
        let w = SpectralWindow::unit_alpha_zero();
        let p = prec();
        let v = phi_spectral(1.0, 1.0, &w, &p).unwrap();
        let want = (-2.0 * PI).exp();
        assert!(
            (v.value - want).abs() < 1e-8 * want,
            "{} vs {want}",
            v.value
        );
    }

    #[test]
    fn phi_even_in_tau() {
        let w = SpectralWindow::long_window(4.0).unwrap();
        let p = prec();
        let a = phi_abel(2.0, 0.7, &w, &p).unwrap().value;
        let b = phi_abel(2.0, -0.7, &w, &p).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn tau_floor_is_tagged() {
        let w = SpectralWindow::unit_alpha_zero();
        let v = phi_abel(1.0, 0.0, &w, &prec()).unwrap();
        assert!(v.tau_floored);
        // alpha = 0 makes the floored value exactly the closed form
        assert!((v.value - (-2.0 * PI).exp()).abs() < 1e-12);
    }

    #[test]
    fn routes_agree_spot_check() {
        let w = SpectralWindow::long_window(3.0).unwrap();
        let (_, _, rel) = phi_routes_agree(1.5, 1.0, &w, &prec()).unwrap();
        assert!(rel < 1e-6, "relative gap {rel}");
    }

    #[test]
    fn h_transform_even_and_positive_at_zero() {
        let w = SpectralWindow::long_window(3.0).unwrap();
        let p = prec();
        let a = h_transform(1.3, 1.0, &w, &p).unwrap();
        let b = h_transform(-1.3, 1.0, &w, &p).unwrap();
        assert_eq!(a, b);
        assert!(h_transform(0.0, 1.0, &w, &p).unwrap() > 0.0);
    }

    #[test]
    fn h_transform_satisfies_bessel_ode() {
        // h_tt + (-4 pi^2 + (1/4 + t^2)/tau^2) h = 0
        let w = SpectralWindow::long_window(3.0).unwrap();
        let p = prec();
        let (t, tau) = (1.0, 1.5);
        let h = 1e-4;
        let fm = h_transform(t, tau - h, &w, &p).unwrap();
        let f0 = h_transform(t, tau, &w, &p).unwrap();
        let fp = h_transform(t, tau + h, &w, &p).unwrap();
        let d2 = (fp - 2.0 * f0 + fm) / (h * h);
        let res = d2 + (-4.0 * PI * PI + (0.25 + t * t) / (tau * tau)) * f0;
        assert!(res.abs() < 1e-6 * f0.abs().max(1.0), "residual {res}");
    }

    #[test]
    fn selberg_round_trip_spot() {
        let w = SpectralWindow::long_window(3.0).unwrap();
        let p = prec();
        for &t in &[0.0f64, 1.0] {
            let fwd = selberg_forward(&w, 1.0, t, &p).unwrap();
            let want = h_transform(t, 1.0, &w, &p).unwrap();
            assert!(
                (fwd - want).abs() <= 1e-4 * want.abs(),
                "t={t}: forward {fwd} vs h {want}"
            );
        }
    }

    #[test]
    fn selberg_forward_is_linear_in_the_window() {
        let p = prec();
        let alpha = 0.6;
        let w1 = SpectralWindow::new(alpha, WindowShape::CosineSum(vec![(1.0, 0.4)])).unwrap();
        let w2 = SpectralWindow::new(alpha, WindowShape::CosineSum(vec![(0.7, 1.1)])).unwrap();
        let w12 = SpectralWindow::new(
            alpha,
            WindowShape::CosineSum(vec![(1.0, 0.4), (0.7, 1.1)]),
        )
        .unwrap();
        let (tau, t) = (1.0, 0.8);
        let f1 = selberg_forward(&w1, tau, t, &p).unwrap();
        let f2 = selberg_forward(&w2, tau, t, &p).unwrap();
        let f12 = selberg_forward(&w12, tau, t, &p).unwrap();
        assert!(
            (f12 - f1 - f2).abs() < 2e-4 * f12.abs().max(1e-6),
            "{f12} vs {f1} + {f2}"
        );
    }

    #[test]
    fn pde_residual_small_and_second_order() {
        let w = SpectralWindow::long_window(3.0).unwrap();
        let p = prec();
        let gamma = [1.2, 0.3, 0.2, 0.9];
        let r1 = pde_residual(gamma, &w, 1e-3, &p).unwrap();
        assert!(r1.scaled < 1e-4, "scaled residual {}", r1.scaled);
        let r2 = pde_residual(gamma, &w, 5e-4, &p).unwrap();
        let ratio = r1.residual.abs() / r2.residual.abs();
        assert!((3.0..5.0).contains(&ratio), "convergence ratio {ratio}");
    }

    #[test]
    fn pde_alpha_zero_exact_identity() {
        // for Phi = e^{-2 pi P}: Delta Phi = 4 pi^2 tau Phi exactly
        let w = SpectralWindow::unit_alpha_zero();
        let r = pde_residual([1.0, 0.4, 0.1, 0.8], &w, 1e-3, &prec()).unwrap();
        assert!(r.scaled < 1e-5, "scaled residual {}", r.scaled);
    }

    #[test]
    fn pde_rejects_boundary_points() {
        let w = SpectralWindow::long_window(3.0).unwrap();
        // P close to |tau| violates the margin precondition
        assert!(pde_residual([1.0, 0.05, 0.0, 0.0], &w, 1e-3, &prec()).is_err());
    }
}
