//! Extended-precision helpers backed by MPFR floats.
//!
//! Only a handful of primitives are needed: precision conversion, the
//! argument of Gamma(1 + it) to arbitrary accuracy (for the K-Bessel power
//! series phase), and Bernoulli numbers for the Stirling tail.

use rug::{Complete, Float, Rational};
use std::sync::LazyLock;

pub fn bits_for_digits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LN_10 / std::f64::consts::LN_2).ceil() as u32 + 16
}

pub fn mpf(bits: u32, x: f64) -> Float {
    Float::with_val(bits, x)
}

/// `|a| < 10^exp10 * |m|`, compared through binary exponents so that very
/// small thresholds never underflow.
pub(crate) fn small_vs(a: &Float, m: &Float, exp10: i32) -> bool {
    if m.is_zero() {
        return a.is_zero();
    }
    let (Some(ea), Some(em)) = (a.get_exp(), m.get_exp()) else {
        return a.is_zero();
    };
    (ea as f64) < em as f64 + exp10 as f64 * std::f64::consts::LOG2_10 + 1.0
}

/// Exact Bernoulli numbers B_0 .. B_{MAX_BERNOULLI_INDEX} via the defining
/// recurrence sum_{k <= n} C(n+1, k) B_k = 0.
const MAX_BERNOULLI_INDEX: usize = 120;

static BERNOULLI: LazyLock<Vec<Rational>> = LazyLock::new(|| {
    let n_max = MAX_BERNOULLI_INDEX;
    let mut b: Vec<Rational> = Vec::with_capacity(n_max + 1);
    b.push(Rational::from(1));
    for n in 1..=n_max {
        let mut sum = Rational::new();
        let mut binom = Rational::from(1); // C(n+1, 0)
        for (k, bk) in b.iter().enumerate() {
            sum += (bk * &binom).complete();
            binom *= n as i64 + 1 - k as i64;
            binom /= k as i64 + 1;
        }
        sum /= -(n as i64 + 1);
        b.push(sum);
    }
    b
});

/// arg Gamma(1 + i t) for real t, accurate to roughly `digits` decimal
/// digits. Uses the Stirling series after an upward recurrence shift.
pub fn arg_gamma_one_plus_it(t: f64, digits: u32) -> Float {
    let bits = bits_for_digits(digits + 10);
    if t == 0.0 {
        return Float::new(bits);
    }
    let sign = t.signum();
    let t = t.abs();
    let tt = Float::with_val(bits, t);

    // Shift z = 1 + it upward by k so |z + k| is large enough for the
    // Stirling tail with NB Bernoulli terms to reach the target accuracy.
    let nb: usize = 55;
    // remainder ~ |B_{2nb+2}| / |z|^{2nb+1}; solve for the needed radius
    let ln_b = ln_abs_bernoulli(2 * nb + 2);
    let need = digits as f64 * std::f64::consts::LN_10 + 10.0;
    let radius = ((ln_b + need) / (2.0 * nb as f64 + 1.0)).exp().max(10.0);
    let k = if t >= radius {
        0
    } else {
        (radius - 1.0).ceil() as usize + 1
    };

    // arg Gamma(1+it) = Im ln Gamma(1+k+it) - sum_{j=1}^{k} atan(t / (1+j-1))
    let sigma = Float::with_val(bits, 1 + k as u32);
    let im_lngamma = im_ln_gamma_stirling(&sigma, &tt, nb, bits);
    let mut shift_sum = Float::new(bits);
    for j in 1..=k {
        let a = Float::with_val(bits, &tt / &Float::with_val(bits, j as u32)).atan();
        shift_sum += a;
    }
    let mut out = im_lngamma - shift_sum;
    if sign < 0.0 {
        out = -out;
    }
    out
}

fn ln_abs_bernoulli(n: usize) -> f64 {
    let b = &BERNOULLI[n];
    let num = b.numer().to_f64().abs();
    let den = b.denom().to_f64();
    if num == 0.0 {
        return f64::NEG_INFINITY;
    }
    num.ln() - den.ln()
}

/// Im ln Gamma(sigma + i t) by the Stirling series with `nb` Bernoulli terms;
/// valid once |sigma + i t| is large enough.
fn im_ln_gamma_stirling(sigma: &Float, t: &Float, nb: usize, bits: u32) -> Float {
    let f = |x: f64| Float::with_val(bits, x);
    // z = sigma + i t
    let r2 = Float::with_val(bits, sigma * sigma) + Float::with_val(bits, t * t);
    let ln_r = Float::with_val(bits, r2.clone().ln() / 2u32);
    let theta = Float::with_val(bits, t.clone()).atan2(sigma);

    // Im[(z - 1/2) ln z - z] = (sigma - 1/2) theta + t ln r - t
    let mut im = (sigma.clone() - f(0.5)) * &theta + t.clone() * &ln_r - t.clone();

    // Im sum B_{2n} / (2n (2n-1) z^{2n-1}); track w = z^{-(2n-1)}
    let inv_r2 = f(1.0) / &r2;
    // 1/z = conj(z)/|z|^2
    let zr = sigma.clone() * &inv_r2;
    let zi = -(t.clone() * &inv_r2);
    // inv2 = (1/z)^2
    let inv2_r = zr.clone() * &zr - Float::with_val(bits, &zi * &zi);
    let inv2_i = f(2.0) * &zr * &zi;
    let mut wr = zr;
    let mut wi = zi;
    for n in 1..=nb {
        let b2n = Float::with_val(bits, &BERNOULLI[2 * n]);
        let denom = f((2 * n * (2 * n - 1)) as f64);
        im += b2n / denom * &wi;
        // w *= inv2
        let nr = wr.clone() * &inv2_r - Float::with_val(bits, &wi * &inv2_i);
        let ni = wr.clone() * &inv2_i + Float::with_val(bits, &wi * &inv2_r);
        wr = nr;
        wi = ni;
    }
    im
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(BERNOULLI[0], Rational::from(1));
        assert_eq!(BERNOULLI[1], Rational::from((-1, 2)));
        assert_eq!(BERNOULLI[2], Rational::from((1, 6)));
        assert_eq!(BERNOULLI[4], Rational::from((-1, 30)));
        assert_eq!(BERNOULLI[12], Rational::from((-691, 2730)));
        assert_eq!(BERNOULLI[3], Rational::new());
    }

    #[test]
    fn arg_gamma_matches_product_formula() {
        // independent slowly-converging reference:
        // arg Gamma(1+it) = -gamma t + sum_k (t/k - atan(t/k))
        let t = 0.5f64;
        let mut want = -0.577_215_664_901_532_9 * t;
        for k in 1..2_000_000u64 {
            want += t / k as f64 - (t / k as f64).atan();
        }
        let got = arg_gamma_one_plus_it(t, 30).to_f64();
        assert!((got - want).abs() < 1e-10, "got {got}, reference {want}");
    }

    #[test]
    fn arg_gamma_odd_in_t() {
        let a = arg_gamma_one_plus_it(3.7, 30).to_f64();
        let b = arg_gamma_one_plus_it(-3.7, 30).to_f64();
        assert!((a + b).abs() < 1e-25);
    }

    #[test]
    fn arg_gamma_large_t_finite() {
        let v = arg_gamma_one_plus_it(250.0, 200).to_f64();
        assert!(v.is_finite());
    }
}
