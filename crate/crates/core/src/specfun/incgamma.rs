//! Normalised incomplete gamma `Q(s, x) = Gamma(s, x) / Gamma(s)` for the
//! small integer orders the long-window tail estimates use. Closed forms:
//! `Q(1,x) = e^{-x}`, `Q(2,x) = (1+x) e^{-x}`, `Q(3,x) = (1+x+x^2/2) e^{-x}`.

use super::SpecFunError;

pub fn incomplete_gamma_q(s: u32, x: f64) -> Result<f64, SpecFunError> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain(format!(
            "incomplete_gamma_q requires x >= 0, got {x}"
        )));
    }
    let e = (-x).exp();
    match s {
        1 => Ok(e),
        2 => Ok((1.0 + x) * e),
        3 => Ok((1.0 + x
            + 0.5 * x * x) * e),
        other => Err(SpecFunError::UnsupportedGammaOrder(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(incomplete_gamma_q(1, 2.0).unwrap(), (-2.0f64).exp());
        for s in 1..=3 {
            assert_eq!(incomplete_gamma_q(s, 0.0).unwrap(), 1.0);
        }
        // Q(2, 1) = 2/e, one integration by parts
        let v = incomplete_gamma_q(2, 1.0).unwrap();
        assert!((v - 2.0 / std::f64::consts::E).abs() < 1e-15);
        assert!((v - 0.7357588823).abs() < 1e-10);
    }

    #[test]
    fn monotone_decreasing_in_unit_interval() {
        for s in 1..=3 {
            let mut prev = 1.0f64;
            for k in 1..=60 {
                let x = k as f64 * 0.5;
                let q = incomplete_gamma_q(s, x).unwrap();
                assert!(q <= prev && (0.0..=1.0).contains(&q));
                prev = q;
            }
        }
    }

    #[test]
    fn rejects_unsupported_order() {
        assert!(incomplete_gamma_q(4, 1.0).is_err());
        assert!(incomplete_gamma_q(0, 1.0).is_err());
        assert!(incomplete_gamma_q(1, -1.0).is_err());
    }
}
