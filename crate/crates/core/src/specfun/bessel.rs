//! K-Bessel function of purely imaginary order, `K_{it}(x)` for real t and
//! x > 0, by two independent routes:
//!
//! * the ascending power series, with the exponentially small output scale
//!   `e^{-pi |t| / 2}` removed analytically through `|Gamma(1 - it)|`, run in
//!   double precision while the series cancellation stays below a couple of
//!   digits and in MPFR floats beyond that;
//! * trapezoidal quadrature of `int_0^inf e^{-x cosh u} cos(t u) du` in MPFR
//!   floats, whose working precision absorbs the `e^{-pi|t|/2}` cancellation.
//!
//! The two paths share no code and act as mutual oracles on their overlap.

use super::{Precision, SpecFunError};
use crate::mp::{arg_gamma_one_plus_it, bits_for_digits, small_vs};
use rug::Float;

const PI: f64 = std::f64::consts::PI;

/// `e^{pi |t| / 2} K_{it}(x)`.
pub fn bessel_k_imag_scaled(t: f64, x: f64, prec: &Precision) -> Result<f64, SpecFunError> {
    if !(x > 0.0) || !x.is_finite() || !t.is_finite() {
        return Err(SpecFunError::Domain(format!(
            "bessel_k_imag requires finite t and x > 0, got t = {t}, x = {x}"
        )));
    }
    let t = t.abs();
    if t == 0.0 {
        if x <= 4.0 {
            Ok(k0_series_f64(x))
        } else {
            Ok(k0_series_mp(x, series_digits(prec, x)))
        }
    } else if x <= 4.0 {
        Ok(series_scaled_f64(t, x))
    } else {
        Ok(series_scaled_mp(t, x, series_digits(prec, x)))
    }
}

/// `K_{it}(x)`; underflows to zero for very large |t| as the scale factor
/// does.
pub fn bessel_k_imag(t: f64, x: f64, prec: &Precision) -> Result<f64, SpecFunError> {
    Ok(bessel_k_imag_scaled(t, x, prec)? * (-PI * t.abs() / 2.0).exp())
}

/// Evaluates both internal paths and fails loudly when they disagree beyond
/// the requested tolerance. Returns the series-path value.
pub fn bessel_k_imag_checked(t: f64, x: f64, prec: &Precision) -> Result<f64, SpecFunError> {
    let a = bessel_k_imag_scaled(t, x, prec)?;
    let b = quad_scaled_mp(t.abs(), x, quad_digits(prec, t));
    let scale = a.abs().max(b.abs()).max(1e-300);
    let rel = (a - b).abs() / scale;
    let tol = prec.target_rel_tol().max(1e-12);
    if rel > tol {
        return Err(SpecFunError::PrecisionUnachievable {
            what: format!("K_it dual path at t = {t}, x = {x}"),
            path_a: a,
            path_b: b,
            rel_diff: rel,
            tol,
        });
    }
    Ok(a * (-PI * t.abs() / 2.0).exp())
}

fn series_digits(prec: &Precision, x: f64) -> u32 {
    // series cancellation costs ~ 2x/ln(10) digits at worst (small t)
    let cancel = (2.0 * (x / 2.0).max(0.0) * 2.0 / std::f64::consts::LN_10).ceil() as u32;
    prec.working_digits().max(18 + cancel)
}

fn quad_digits(prec: &Precision, t: f64) -> u32 {
    let cancel = (PI * t.abs() / (2.0 * std::f64::consts::LN_10)).ceil() as u32 + 20;
    prec.working_digits().max(cancel)
}

// ---------------------------------------------------------------------------
// power series path

/// Complex ln Gamma by the Lanczos approximation (g = 7), for Re z > 1/2.
fn ln_gamma_lanczos(re: f64, im: f64) -> (f64, f64) {
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let (zr, zi) = (re - 1.0, im);
    let (mut xr, mut xi) = (C[0], 0.0);
    for (i, &c) in C.iter().enumerate().skip(1) {
        let dr = zr + i as f64;
        let den = dr * dr + zi * zi;
        xr += c * dr / den;
        xi -= c * zi / den;
    }
    let tr = zr + 7.5;
    // (z + 1/2) ln t - t + ln(sqrt(2 pi) x)
    let ln_t_re = 0.5 * (tr * tr + zi * zi).ln();
    let ln_t_im = zi.atan2(tr);
    let ar = zr + 0.5;
    let re_out = ar * ln_t_re - zi * ln_t_im - tr + 0.5 * (2.0 * PI).ln() + 0.5 * (xr * xr + xi * xi).ln();
    let im_out = ar * ln_t_im + zi * ln_t_re - zi + xi.atan2(xr);
    (re_out, im_out)
}

/// Prefactor `e^{pi t/2} * pi / sinh(pi t) * 1/|Gamma(1 - it)|`, written so
/// nothing overflows: `sqrt(2 pi / (t (1 - e^{-2 pi t})))`.
fn prefactor_f64(t: f64) -> f64 {
    (2.0 * PI / (t * (1.0 - (-2.0 * PI * t).exp()))).sqrt()
}

fn series_scaled_f64(t: f64, x: f64) -> f64 {
    let psi = ln_gamma_lanczos(1.0, t).1; // arg Gamma(1 + it)
    let phase = psi - t * (x / 2.0).ln();
    let (mut ur, mut ui) = (phase.cos(), phase.sin());
    let q = x * x / 4.0;
    let mut sum = 0.0f64;
    let mut max_abs = 0.0f64;
    for m in 0..500 {
        sum += ui;
        let a = ui.abs().max(ur.abs());
        max_abs = max_abs.max(a);
        let mp1 = (m + 1) as f64;
        let den = mp1 * (mp1 * mp1 + t * t);
        // u *= q (m+1+it) / den
        let nr = q * (ur * mp1 - ui * t) / den;
        let ni = q * (ui * mp1 + ur * t) / den;
        ur = nr;
        ui = ni;
        if a < 1e-22 * max_abs.max(1e-300) && q / den < 0.5 {
            break;
        }
    }
    prefactor_f64(t) * sum
}

fn series_scaled_mp(t: f64, x: f64, digits: u32) -> f64 {
    let bits = bits_for_digits(digits);
    let f = |v: f64| Float::with_val(bits, v);
    let tf = f(t);
    let psi = arg_gamma_one_plus_it(t, digits);
    let half_x = f(x / 2.0); // x/2 is exact in binary
    let phase = psi - tf.clone() * half_x.clone().ln();
    let mut ur = phase.clone().cos();
    let mut ui = phase.sin();
    let q = half_x.square();
    let t2 = tf.clone().square();
    let mut sum = Float::new(bits);
    let mut max_abs = Float::new(bits);
    let stop_exp = -(digits as i32) - 6;
    for m in 0..100_000u32 {
        sum += &ui;
        let a = ui.clone().abs().max(&ur.clone().abs());
        if a > max_abs {
            max_abs = a.clone();
        }
        let mp1 = f((m + 1) as f64);
        let den = mp1.clone() * (mp1.clone().square() + &t2);
        let nr = q.clone() * (ur.clone() * &mp1 - ui.clone() * &tf) / &den;
        let ni = q.clone() * (ui.clone() * &mp1 + ur.clone() * &tf) / &den;
        ur = nr;
        ui = ni;
        let ratio_small = (x / 2.0) * (x / 2.0)
            / ((m + 1) as f64 * (((m + 1) as f64).powi(2) + t * t).sqrt())
            < 0.5;
        if ratio_small && small_vs(&a, &max_abs, stop_exp) {
            break;
        }
    }
    let one = f(1.0);
    let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    let decay = (-(two_pi.clone() * &tf)).exp();
    let pref = (two_pi / (tf * (one - decay))).sqrt();
    (pref * sum).to_f64()
}


fn k0_series_f64(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let l = -(x / 2.0).ln() - EULER; // psi(1) - ln(x/2)
    let q = x * x / 4.0;
    let mut term = 1.0f64;
    let mut harmonic = 0.0f64;
    let mut sum = 0.0f64;
    for m in 0..200 {
        sum += term * (l + harmonic);
        let mp1 = (m + 1) as f64;
        term *= q / (mp1 * mp1);
        harmonic += 1.0 / mp1;
        if term * (l.abs() + harmonic + 1.0) < 1e-20 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

fn k0_series_mp(x: f64, digits: u32) -> f64 {
    let bits = bits_for_digits(digits);
    let euler = Float::with_val(bits, rug::float::Constant::Euler);
    let half_x = Float::with_val(bits, x / 2.0);
    let l = -half_x.clone().ln() - euler;
    let q = half_x.square();
    let mut term = Float::with_val(bits, 1);
    let mut harmonic = Float::new(bits);
    let mut sum = Float::new(bits);
    let mut max_term = Float::new(bits);
    let stop_exp = -(digits as i32) - 6;
    for m in 0..100_000u32 {
        sum += term.clone() * (l.clone() + &harmonic);
        let a = term.clone().abs();
        if a > max_term {
            max_term = a.clone();
        }
        let mp1 = Float::with_val(bits, m + 1);
        term = term * &q / mp1.clone().square();
        harmonic += mp1.recip();
        if small_vs(&a, &max_term, stop_exp) && m as f64 > x {
            break;
        }
    }
    sum.to_f64()
}

// ---------------------------------------------------------------------------
// cosh-integral quadrature path

/// `e^{pi t / 2} K_{it}(x)` by trapezoidal quadrature of
/// `int_0^inf e^{-x cosh u} cos(t u) du` in MPFR floats.
///
/// The trapezoid step is chosen from the analyticity strip of the integrand
/// (width ~1 before `cos(t u)` growth overwhelms the decay), the truncation
/// point from the double-exponential decay of `e^{-x cosh u}`.
pub(crate) fn quad_scaled_mp(t: f64, x: f64, digits: u32) -> f64 {
    let bits = bits_for_digits(digits + 8);
    let need = digits as f64 * std::f64::consts::LN_10 + 30.0;
    let h = 2.0 * PI / (t.abs() + need + PI * t.abs() / 2.0);
    let u_max = ((need + PI * t.abs() / 2.0) / x + 1.0).acosh() + 1.0;
    let n = (u_max / h).ceil() as usize + 1;
    let xf = Float::with_val(bits, x);
    let tf = Float::with_val(bits, t);
    let hf = Float::with_val(bits, h);
    let mut sum = Float::new(bits);
    for j in 0..=n {
        let u = hf.clone() * Float::with_val(bits, j as u32);
        let term = (-(xf.clone() * u.clone().cosh())).exp() * (tf.clone() * u).cos();
        if j == 0 {
            sum += term / 2u32;
        } else {
            sum += term;
        }
    }
    sum *= &hf;
    let half_pi_t = Float::with_val(bits, rug::float::Constant::Pi) * &tf / 2u32;
    (sum * half_pi_t.exp()).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::new(1e-10, 20).unwrap()
    }

    /// Independent oracle for K_0: plain Simpson quadrature of
    /// `int_0^U e^{-x cosh u} du` in double precision.
    fn k0_oracle(x: f64) -> f64 {
        let u_max = (50.0 / x + 1.0).acosh() + 1.0;
        let n = 20_000usize;
        let h = u_max / n as f64;
        let f = |u: f64| (-x * u.cosh()).exp();
        let mut s = f(0.0) + f(u_max);
        for j in 1..n {
            s += f(j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn k0_at_one_matches_oracle() {
        // frozen from the Simpson oracle: K_0(1) = 0.4210244382...
        let v = bessel_k_imag(0.0, 1.0, &prec()).unwrap();
        assert!((v - 0.4210244382).abs() < 1e-9);
        assert!((v - k0_oracle(1.0)).abs() < 1e-11);
    }

    #[test]
    fn k0_large_argument_uses_mp_series() {
        let x = 25.0;
        let v = bessel_k_imag(0.0, x, &prec()).unwrap();
        let w = k0_oracle(x);
        assert!((v - w).abs() < 1e-10 * w.abs());
    }

    #[test]
    fn even_in_order() {
        let p = prec();
        let a = bessel_k_imag(2.0, 1.0, &p).unwrap();
        let b = bessel_k_imag(-2.0, 1.0, &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dual_paths_agree_on_overlap() {
        let p = prec();
        for &t in &[0.5f64, 2.0, 5.0, 10.0] {
            for &x in &[0.5f64, 1.0, 2.0] {
                bessel_k_imag_checked(t, x, &p).unwrap();
            }
        }
    }

    #[test]
    fn f64_and_mp_series_agree() {
        for &t in &[0.3f64, 1.0, 7.5, 40.0] {
            for &x in &[0.1f64, 1.0, 3.5] {
                let a = series_scaled_f64(t, x);
                let b = series_scaled_mp(t, x, 30);
                assert!(
                    (a - b).abs() < 1e-11 * a.abs().max(b.abs()),
                    "t={t} x={x}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn scaled_value_stays_finite_for_large_orders() {
        let p = prec();
        for &t in &[50.0f64, 120.0, 200.0] {
            for &x in &[1e-3f64, 1.0, 50.0] {
                let v = bessel_k_imag_scaled(t, x, &p).unwrap();
                assert!(v.is_finite() && v != 0.0, "t={t}, x={x} gave {v}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(bessel_k_imag(1.0, 0.0, &prec()).is_err());
        assert!(bessel_k_imag(1.0, -2.0, &prec()).is_err());
    }
}
