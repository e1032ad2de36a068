//! Spherical function of the spherical principal series,
//! `Xi_{1/2+it}(u) = {}_2F_1(1/2+it, 1/2-it; 1; -u)`, real for real t and
//! `u >= 0`.
//!
//! Two independent paths:
//! * the hypergeometric series (radius `u < 1`), whose terms are real with an
//!   explicit cancellation estimate `2 t asin(sqrt u)` nats governing the
//!   working precision;
//! * the Mehler integral for the Legendre function `P_{-1/2+it}(2u+1)` with
//!   the endpoint inverse-square-root removed by substitution, stable for all
//!   `u > 0`.

use super::{Precision, SpecFunError};
use crate::mp::{bits_for_digits, small_vs};
use crate::quad::gl_panels;
use rug::Float;

const U_SWITCH: f64 = 0.5;

pub fn spherical_xi(t: f64, u: f64, prec: &Precision) -> Result<f64, SpecFunError> {
    if !(u >= 0.0) || !u.is_finite() || !t.is_finite() {
        return Err(SpecFunError::Domain(format!(
            "spherical_xi requires finite t and u >= 0, got t = {t}, u = {u}"
        )));
    }
    if u == 0.0 {
        return Ok(1.0);
    }
    if u <= U_SWITCH {
        xi_series(t, u, prec)
    } else {
        xi_mehler(t, u, prec)
    }
}

/// Decimal digits lost to cancellation in the hypergeometric series.
fn series_cancel_digits(t: f64, u: f64) -> f64 {
    2.0 * t.abs() * u.min(1.0).sqrt().asin() / std::f64::consts::LN_10
}

/// Hypergeometric series; requires `u < 1`.
pub fn xi_series(t: f64, u: f64, prec: &Precision) -> Result<f64, SpecFunError> {
    if !(0.0..1.0).contains(&u) {
        return Err(SpecFunError::Domain(format!(
            "series path needs 0 <= u < 1, got {u}"
        )));
    }
    debug_assert!(u < 1.0, "series called outside its radius");
    let cancel = series_cancel_digits(t, u);
    if cancel <= 2.0 {
        Ok(xi_series_f64(t, u))
    } else {
        let digits = prec.working_digits().max(18 + cancel.ceil() as u32);
        Ok(xi_series_mp(t, u, digits))
    }
}

fn xi_series_f64(t: f64, u: f64) -> f64 {
    let t2 = t * t;
    let mut term = 1.0f64;
    let mut sum = 0.0f64;
    let mut max_abs = 0.0f64;
    for m in 0..10_000 {
        sum += term;
        max_abs = max_abs.max(term.abs());
        let mf = m as f64;
        let ratio = -u * ((mf + 0.5) * (mf + 0.5) + t2) / ((mf + 1.0) * (mf + 1.0));
        term *= ratio;
        if ratio.abs() < 1.0 && term.abs() < 1e-20 * max_abs.max(1e-300) {
            break;
        }
    }
    sum
}

fn xi_series_mp(t: f64, u: f64, digits: u32) -> f64 {
    let bits = bits_for_digits(digits);
    let t2 = Float::with_val(bits, t).square();
    let uf = Float::with_val(bits, u);
    let mut term = Float::with_val(bits, 1);
    let mut sum = Float::new(bits);
    let mut max_abs = Float::new(bits);
    let stop_exp = -(digits as i32) - 4;
    for m in 0..1_000_000u32 {
        sum += &term;
        let a = term.clone().abs();
        if a > max_abs {
            max_abs = a.clone();
        }
        let mh = Float::with_val(bits, m as f64 + 0.5);
        let mp1 = Float::with_val(bits, m + 1);
        let num = mh.square() + &t2;
        let den = mp1.square();
        term = -(term * &uf) * num / den;
        let converged = u * ((m as f64 + 0.5).powi(2) + t * t) / ((m as f64 + 1.0).powi(2)) < 1.0;
        if converged && small_vs(&a, &max_abs, stop_exp) {
            break;
        }
    }
    sum.to_f64()
}

/// Mehler integral with the substitution `s = theta - w^2`:
///
/// `Xi = (2 sqrt 2 / pi) int_0^{sqrt theta}
///        cos(t (theta - w^2)) / sqrt(sinh(theta - w^2/2) sinhc(w^2/2)) dw`,
/// where `cosh theta = 2u + 1`.
pub fn xi_mehler(t: f64, u: f64, _prec: &Precision) -> Result<f64, SpecFunError> {
    if !(u > 0.0) {
        return Err(SpecFunError::Domain(format!(
            "mehler path needs u > 0, got {u}"
        )));
    }
    let theta = (2.0 * u + 2.0 * (u * (1.0 + u)).sqrt()).ln_1p();
    let w_max = theta.sqrt();
    let mut f = |w: f64| {
        let w2 = w * w;
        let phase = t * (theta - w2);
        let a = (theta - 0.5 * w2).sinh();
        let b = sinhc(0.5 * w2);
        phase.cos() / (a * b).sqrt()
    };
    let panels = ((t.abs() * theta / 2.0).ceil() as usize).max(6);
    let v = gl_panels(&mut f, 0.0, w_max, panels, 24);
    Ok(2.0 * std::f64::consts::SQRT_2 / std::f64::consts::PI * v)
}

fn sinhc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        1.0 + y * y / 6.0 * (1.0 + y * y / 20.0)
    } else {
        y.sinh() / y
    }
}

/// Mehler integral in MPFR floats (f64 Gauss-Legendre nodes, extended-
/// precision arithmetic). Keeps the evaluation noise of the ODE residual far
/// below its finite-difference truncation error.
fn xi_mehler_mp(t: f64, u: f64, digits: u32) -> Float {
    let bits = bits_for_digits(digits);
    let f = |x: f64| Float::with_val(bits, x);
    let two_u = f(2.0 * u);
    let theta = (two_u + f(2.0) * f(u * (1.0 + u)).sqrt()).ln_1p();
    let w_max = theta.clone().sqrt();
    let tf = f(t);
    let rule = crate::quad::gl_rule(24);
    let theta_f64 = theta.to_f64();
    let panels = ((t.abs() * theta_f64 / 2.0).ceil() as usize).max(6);
    let mut total = Float::new(bits);
    for k in 0..panels {
        let lo = w_max.clone() * f(k as f64 / panels as f64);
        let half = w_max.clone() * f(0.5 / panels as f64);
        for (x, wgt) in rule.nodes.iter().zip(rule.weights.iter()) {
            let w = lo.clone() + half.clone() * f(x + 1.0);
            let w2 = w.square();
            let phase = (tf.clone() * (theta.clone() - &w2)).cos();
            let a = (theta.clone() - w2.clone() / f(2.0)).sinh();
            let y = w2 / f(2.0);
            let sc = if y.to_f64().abs() < 1e-12 {
                f(1.0) + y.square() / f(6.0)
            } else {
                y.clone().sinh() / y
            };
            total += phase / (a * sc).sqrt() * f(*wgt) * &half;
        }
    }
    total * f(2.0 * std::f64::consts::SQRT_2 / std::f64::consts::PI)
}

/// Residual of `u(u+1) Xi'' + (2u+1) Xi' + (1/4 + t^2) Xi` by central
/// differences with step `h`. The three samples are taken through the
/// extended-precision Mehler path (series path below the switch point), so
/// the returned residual is finite-difference truncation, not rounding.
pub fn xi_ode_residual(t: f64, u: f64, h: f64, prec: &Precision) -> Result<f64, SpecFunError> {
    if !(u - h > 0.0) {
        return Err(SpecFunError::Domain(format!(
            "ode residual needs u - h > 0, got u = {u}, h = {h}"
        )));
    }
    let digits = prec.working_digits().max(30);
    let bits = bits_for_digits(digits);
    let sample = |uu: f64| -> Result<Float, SpecFunError> {
        if uu <= U_SWITCH {
            Ok(Float::with_val(bits, xi_series(t, uu, prec)?))
        } else {
            Ok(xi_mehler_mp(t, uu, digits))
        }
    };
    let fm = sample(u - h)?;
    let f0 = sample(u)?;
    let fp = sample(u + h)?;
    let hf = Float::with_val(bits, h);
    let d1 = (fp.clone() - &fm) / (Float::with_val(bits, 2.0) * &hf);
    let d2 = (fp - Float::with_val(bits, 2.0) * &f0 + fm) / hf.square();
    let res = Float::with_val(bits, u * (u + 1.0)) * d2
        + Float::with_val(bits, 2.0 * u + 1.0) * d1
        + Float::with_val(bits, 0.25 + t * t) * f0;
    Ok(res.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::new(1e-10, 20).unwrap()
    }

    #[test]
    fn value_at_zero_is_one() {
        for &t in &[0.0f64, 1.0, 13.7] {
            assert_eq!(spherical_xi(t, 0.0, &prec()).unwrap(), 1.0);
        }
    }

    #[test]
    fn series_and_mehler_agree() {
        let p = prec();
        let a = xi_series(1.0, 0.3, &p).unwrap();
        let b = xi_mehler(1.0, 0.3, &p).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        for &t in &[0.0f64, 2.5, 17.0] {
            for &u in &[0.05f64, 0.45, 0.8] {
                if u < 1.0 {
                    let a = xi_series(t, u, &p).unwrap();
                    let b = xi_mehler(t, u, &p).unwrap();
                    assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "t={t} u={u}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn mp_series_kicks_in_for_large_t() {
        let p = prec();
        // heavy cancellation: 2t asin(sqrt(0.4)) ~ 56 nats at t = 40
        let a = xi_series(40.0, 0.4, &p).unwrap();
        let b = xi_mehler(40.0, 0.4, &p).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn ode_residual_small() {
        let r = xi_ode_residual(1.3, 2.7, 1e-4, &prec()).unwrap();
        assert!(r.abs() < 1e-7, "residual {r}");
    }

    #[test]
    fn ode_residual_converges_second_order() {
        // the residual is pure finite-difference error, so halving the step
        // should shrink it by about 4
        let r1 = xi_ode_residual(1.0, 1.7, 2e-3, &prec()).unwrap();
        let r2 = xi_ode_residual(1.0, 1.7, 1e-3, &prec()).unwrap();
        let ratio = r1 / r2;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rejects_negative_u() {
        assert!(spherical_xi(1.0, -0.1, &prec()).is_err());
    }
}
