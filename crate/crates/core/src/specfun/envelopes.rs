//! Envelope-ratio sweeps for the K-Bessel and spherical-function derivative
//! bounds. For j = 0, 1, 2 the sweep compares central-difference derivatives
//! against the envelopes
//!
//! * `(1 + |log x|) ((1+|t|)/x)^j e^{-pi |t|/2}` for `d^j/dx^j K_{it}(x)`, and
//! * `(1+t^2)^{min(j,1)} * {1 | log(u) u^{-1/2 - j}}`-type branches for
//!   `d^j/du^j Xi_{1/2+it}(u)`,
//!
//! recording the largest ratio over a finite grid.

use super::{bessel_k_imag_scaled, spherical_xi, Precision, SpecFunError};

#[derive(Debug, Clone)]
pub struct AppendixGrid {
    pub t_values: Vec<f64>,
    pub x_values: Vec<f64>,
    pub u_values: Vec<f64>,
}

impl Default for AppendixGrid {
    fn default() -> Self {
        Self {
            t_values: vec![0.0, 0.5, 1.0, 2.0, 5.0, 10.0],
            x_values: vec![0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0],
            u_values: vec![0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0, 1000.0],
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnvelopeRow {
    pub family: &'static str,
    pub j: usize,
    pub t: f64,
    pub arg: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct EnvelopeReport {
    pub max_ratio_bessel: [f64; 3],
    pub max_ratio_xi: [f64; 3],
    pub rows: Vec<EnvelopeRow>,
}

fn bessel_envelope(t: f64, x: f64, j: usize) -> f64 {
    (1.0 + x.ln().abs()) * ((1.0 + t.abs()) / x).powi(j as i32)
}

fn xi_envelope(t: f64, u: f64, j: usize) -> f64 {
    let t_fac: f64 = if j == 0 { 1.0 } else { 1.0 + t * t };
    if u <= 2.0 {
        match j {
            0 | 1 => t_fac,
            _ => t_fac / u,
        }
    } else {
        t_fac * u.ln() * u.powf(-0.5 - j as f64)
    }
}

pub fn verify_appendix_bounds(
    grid: &AppendixGrid,
    prec: &Precision,
) -> Result<EnvelopeReport, SpecFunError> {
    let mut rows = Vec::new();
    let mut max_b = [0.0f64; 3];
    let mut max_x = [0.0f64; 3];

    for &t in &grid.t_values {
        for &x in &grid.x_values {
            let h = 1e-3 * x;
            let fm = bessel_k_imag_scaled(t, x - h, prec)?;
            let f0 = bessel_k_imag_scaled(t, x, prec)?;
            let fp = bessel_k_imag_scaled(t, x + h, prec)?;
            // scaled K differences; e^{-pi|t|/2} cancels against the envelope
            let d = [f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)];
            for j in 0..3 {
                let env = bessel_envelope(t, x, j);
                debug_assert!(env > 0.0);
                let ratio = d[j].abs() / env;
                max_b[j] = max_b[j].max(ratio);
                rows.push(EnvelopeRow {
                    family: "bessel",
                    j,
                    t,
                    arg: x,
                    ratio,
                });
            }
        }
        for &u in &grid.u_values {
            let h = 1e-4 * u.max(1.0);
            let fm = spherical_xi(t, u - h, prec)?;
            let f0 = spherical_xi(t, u, prec)?;
            let fp = spherical_xi(t, u + h, prec)?;
            let d = [f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)];
            for j in 0..3 {
                let env = xi_envelope(t, u, j);
                debug_assert!(env > 0.0);
                let ratio = d[j].abs() / env;
                max_x[j] = max_x[j].max(ratio);
                rows.push(EnvelopeRow {
                    family: "xi",
                    j,
                    t,
                    arg: u,
                    ratio,
                });
            }
        }
    }

    Ok(EnvelopeReport {
        max_ratio_bessel: max_b,
        max_ratio_xi: max_x,
        rows,
    })
}
