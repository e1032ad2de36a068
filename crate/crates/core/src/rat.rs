//! Exact rational scalars used throughout the lattice layer.
//!
//! All lattice data is held as `Ratio<i128>`. The acceptance grids keep
//! numerators far below the i128 range; conversions from `f64` are exact
//! (every finite double is a dyadic rational) and refuse inputs whose dyadic
//! exponent is too large to be a plausible threshold.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rat = Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Rat {
    Ratio::new(num, den)
}

pub fn rat_int(num: i128) -> Rat {
    Ratio::from_integer(num)
}

/// Exact dyadic rational equal to the given finite double.
///
/// Returns `None` for non-finite inputs or when the binary exponent falls
/// outside `[-96, 96]`; thresholds beyond that range are rejected rather than
/// silently rounded.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(Rat::zero());
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i128 } else { 1i128 };
    let exp_raw = ((bits >> 52) & 0x7ff) as i64;
    let mant_raw = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp_raw == 0 {
        (mant_raw as i128, -1074i64)
    } else {
        ((mant_raw | (1u64 << 52)) as i128, exp_raw - 1075)
    };
    // strip trailing zero bits so the exponent test reflects the reduced form
    let tz = (mant.trailing_zeros() as i64).min(52);
    let mant = mant >> tz;
    let exp = exp + tz;
    if !(-96..=96).contains(&exp) {
        return None;
    }
    if exp >= 0 {
        Some(rat_int(sign * (mant << exp)))
    } else {
        Some(rat(sign * mant, 1i128 << (-exp)))
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip_is_exact() {
        for &x in &[0.0, 1.0, -3.5, 0.1, 1.0 / 3.0, 2.5e-8, 1234.5678] {
            let r = rat_from_f64(x).unwrap();
            assert_eq!(rat_to_f64(&r), x);
        }
    }

    #[test]
    fn rejects_extreme_exponents() {
        assert!(rat_from_f64(1e-300).is_none());
        assert!(rat_from_f64(f64::INFINITY).is_none());
        assert!(rat_from_f64(f64::NAN).is_none());
    }

    #[test]
    fn dyadic_values_reduce() {
        assert_eq!(rat_from_f64(0.25).unwrap(), rat(1, 4));
        assert_eq!(rat_from_f64(-1.5).unwrap(), rat(-3, 2));
    }
}
