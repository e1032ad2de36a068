//! Truncated theta-kernel sums over the conjugated lattices, the L^2
//! integrand grouped by determinant, and the geometric fourth-moment bound
//! wrapper.
//!
//! `theta(z) = y * sum_gamma Phi(y^{1/2} gamma') e(x det gamma)`, where the
//! sum runs over the conjugated lattice and `Phi(y^{1/2} gamma')` only needs
//! the scaled invariants `(y P', y tau')`. Truncation keeps `y P' <= p_cut`
//! and certifies the tail with the frozen decay envelope times dyadic shell
//! counts from the minima product, then additionally demands that doubling
//! `p_cut` moves the value by less than the tolerance.

use crate::algebra::{GroupElement, HalfPlanePoint, LatticeSpec};
use crate::counting::{
    enumerate_region, pair_count, successive_minima, EnumerationLimits, PairConstraint, Region,
    RegionKind, RegionSelector, SublatticeKind,
};
use crate::rat::rat_to_f64;
use crate::report::{config_hash, CountReport, CountRow, ReportMeta};
use crate::specfun::Precision;
use crate::testfn::{phi_abel, phi_decay_constant, SpectralWindow, TestFnError};
use std::collections::HashMap;

#[derive(Debug, thiserror::Error)]
pub enum ThetaError {
    #[error(transparent)]
    Count(#[from] crate::counting::CountError),
    #[error(transparent)]
    TestFn(#[from] TestFnError),
    #[error("truncation did not converge: {0}")]
    NonConvergent(String),
}

#[derive(Debug, Clone)]
pub struct ThetaConfig {
    pub spec: LatticeSpec,
    pub window: SpectralWindow,
    pub prec: Precision,
    pub tol: f64,
    /// Initial truncation threshold on `P(y^{1/2} gamma')`; grown until the
    /// doubling certificate passes.
    pub p_cut: f64,
    pub limits: EnumerationLimits,
}

impl ThetaConfig {
    pub fn new(spec: LatticeSpec, window: SpectralWindow, tol: f64) -> Self {
        Self {
            spec,
            window,
            prec: Precision::default(),
            tol,
            p_cut: 6.0,
            limits: EnumerationLimits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ThetaValue {
    pub re: f64,
    pub im: f64,
    /// Contribution of the determinant-zero terms (tau-floored), tracked
    /// separately so the continuous-extension modelling stays auditable.
    pub det0_re: f64,
    pub det0_im: f64,
    pub p_cut_used: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Certified tail bound: sum over dyadic shells of the frozen decay envelope
/// times the Minkowski-product shell-count bound.
fn tail_bound(
    spec: &LatticeSpec,
    window: &SpectralWindow,
    y: f64,
    p_cut: f64,
) -> Result<f64, ThetaError> {
    let c_phi = phi_decay_constant(window, 8);
    let minima = successive_minima(spec, RegionKind::Omega, 1.0, SublatticeKind::Full)?;
    let mut bound = 0.0;
    let mut shell_lo = p_cut;
    for _ in 0..60 {
        let shell_hi = 2.0 * shell_lo;
        // count(P' <= R^2) <= MINKOWSKI_RATIO * prod (1 + R / lambda_i)
        let r = (shell_hi / y).sqrt();
        let count: f64 = crate::constants::MINKOWSKI_RATIO
            * minima.iter().map(|l| 1.0 + r / l).product::<f64>();
        bound += c_phi * (1.0 + shell_lo).powi(-8) * count;
        shell_lo = shell_hi;
        if c_phi * (1.0 + shell_lo).powi(-8) * count < 1e-300 {
            break;
        }
    }
    Ok(bound)
}

fn theta_partial(
    cfg: &ThetaConfig,
    z: HalfPlanePoint,
    p_cut: f64,
    phi_cache: &mut HashMap<(u64, u64), f64>,
) -> Result<ThetaValue, ThetaError> {
    let y = z.y;
    let region = Region::new(RegionKind::Omega, 1.0, (p_cut / y).sqrt(), false)?;
    let elements = enumerate_region(&cfg.spec, &region, &cfg.limits)?;
    let mut re = 0.0;
    let mut im = 0.0;
    let mut det0_re = 0.0;
    let mut det0_im = 0.0;
    for el in &elements {
        let p_scaled = y * el.conj_p;
        let tau_scaled = y * rat_to_f64(&el.det);
        let key = (p_scaled.to_bits(), tau_scaled.to_bits());
        let phi = match phi_cache.get(&key) {
            Some(v) => *v,
            None => {
                let v = phi_abel(p_scaled, tau_scaled, &cfg.window, &cfg.prec)?.value;
                phi_cache.insert(key, v);
                v
            }
        };
        let det_f = rat_to_f64(&el.det);
        let angle = 2.0 * std::f64::consts::PI * z.x * det_f;
        let (s, c) = angle.sin_cos();
        re += phi * c;
        im += phi * s;
        if det_f == 0.0 {
            det0_re += phi * c;
            det0_im += phi * s;
        }
    }
    let tb = tail_bound(&cfg.spec, &cfg.window, y, p_cut)?;
    Ok(ThetaValue {
        re: y * re,
        im: y * im,
        det0_re: y * det0_re,
        det0_im: y * det0_im,
        p_cut_used: p_cut,
        tail_bound: y * tb,
        terms: elements.len(),
    })
}

/// `theta_{g,ell}(z)` with certified truncation.
pub fn theta_eval(cfg: &ThetaConfig, z: HalfPlanePoint) -> Result<ThetaValue, ThetaError> {
    let mut p_cut = cfg.p_cut;
    let mut cache = HashMap::new();
    let mut prev = theta_partial(cfg, z, p_cut, &mut cache)?;
    for _ in 0..8 {
        let next = theta_partial(cfg, z, 2.0 * p_cut, &mut cache)?;
        let moved = ((next.re - prev.re).powi(2) + (next.im - prev.im).powi(2)).sqrt();
        let scale = (next.re * next.re + next.im * next.im).sqrt().max(1e-30);
        if moved <= cfg.tol * scale && next.tail_bound <= cfg.tol * scale {
            return Ok(next);
        }
        prev = next;
        p_cut *= 2.0;
    }
    Err(ThetaError::NonConvergent(format!(
        "p_cut reached {p_cut} without meeting tol {}",
        cfg.tol
    )))
}

#[derive(Debug, Clone)]
pub struct L2Integrand {
    pub value: f64,
    pub det0_class_sum: f64,
    pub p_cut_used: f64,
    pub tail_bound: f64,
}

/// `sum_n |sum_{0 != gamma, det = n} Phi(y^{1/2} gamma')|^2`, determinants
/// keyed exactly by `ell * det`.
pub fn l2_integrand(cfg: &ThetaConfig, y: f64) -> Result<L2Integrand, ThetaError> {
    if !(y > 0.0) {
        return Err(ThetaError::NonConvergent(format!(
            "l2_integrand requires y > 0, got {y}"
        )));
    }
    let mut p_cut = cfg.p_cut;
    let mut prev: Option<L2Integrand> = None;
    for _ in 0..9 {
        let region = Region::new(RegionKind::Omega, 1.0, (p_cut / y).sqrt(), true)?;
        let elements = enumerate_region(&cfg.spec, &region, &cfg.limits)?;
        let mut class_sums: HashMap<i64, f64> = HashMap::new();
        let ell = cfg.spec.ell as f64;
        let mut cache: HashMap<(u64, u64), f64> = HashMap::new();
        for el in &elements {
            let det_f = rat_to_f64(&el.det);
            let detk = (det_f * ell).round() as i64;
            let p_scaled = y * el.conj_p;
            let tau_scaled = y * det_f;
            let key = (p_scaled.to_bits(), tau_scaled.to_bits());
            let phi = match cache.get(&key) {
                Some(v) => *v,
                None => {
                    let v = phi_abel(p_scaled, tau_scaled, &cfg.window, &cfg.prec)?.value;
                    cache.insert(key, v);
                    v
                }
            };
            *class_sums.entry(detk).or_insert(0.0) += phi;
        }
        let value: f64 = class_sums.values().map(|s| s * s).sum();
        let det0 = class_sums.get(&0).copied().unwrap_or(0.0);
        let tb = tail_bound(&cfg.spec, &cfg.window, y, p_cut)?;
        let cur = L2Integrand {
            value,
            det0_class_sum: det0,
            p_cut_used: p_cut,
            tail_bound: tb,
        };
        if let Some(p) = prev {
            if (cur.value - p.value).abs() <= cfg.tol * cur.value.abs().max(1e-30) {
                return Ok(cur);
            }
        }
        prev = Some(cur);
        p_cut *= 2.0;
    }
    Err(ThetaError::NonConvergent(
        "l2 integrand truncation did not settle".into(),
    ))
}

/// Report for the long-window reduction: `(ell L^2 heart)^{-1}` times the
/// constrained pair count over the paper-prescribed (ell, L, delta, heart)
/// ranges, for both base points; the headline value is the maximum.
#[derive(Debug, Clone)]
pub struct FourthMomentBound {
    pub report: CountReport,
    pub max_value: f64,
}

pub fn geometric_fourth_moment_bound(
    g1: &GroupElement,
    g2: &GroupElement,
    n_level: u32,
    t_scale: f64,
    limits: &EnumerationLimits,
) -> Result<FourthMomentBound, ThetaError> {
    if t_scale < 3.0 {
        return Err(ThetaError::NonConvergent(format!(
            "fourth-moment bound needs T >= 3, got {t_scale}"
        )));
    }
    let mut rows = Vec::new();
    let mut max_value = 0.0f64;
    for ell in crate::algebra::divisors(n_level) {
        // L runs dyadically up to (N T)^{1/2} / ell
        let l_top = (n_level as f64 * t_scale).sqrt() / ell as f64;
        let mut l = 1.0;
        let mut l_values = Vec::new();
        while l <= l_top {
            l_values.push(l);
            l *= 2.0;
        }
        if l_values.is_empty() {
            l_values.push(l_top.max(0.5));
        }
        // delta dyadic in [T^{-2}, 1]
        let mut delta_values = Vec::new();
        let mut d = 1.0;
        while d >= 1.0 / (t_scale * t_scale) {
            delta_values.push(d);
            d /= 4.0;
        }
        for &l in &l_values {
            for &delta in &delta_values {
                // heart dyadic in [sqrt(delta)/T, delta]
                let mut hearts = Vec::new();
                let mut hv = delta;
                while hv >= delta.sqrt() / t_scale {
                    hearts.push(hv);
                    hv /= 4.0;
                }
                if hearts.is_empty() {
                    hearts.push(delta);
                }
                for &heart in &hearts {
                    for (gi, g) in [g1, g2].into_iter().enumerate() {
                        let spec = LatticeSpec::new(n_level, ell, g.clone())
                            .map_err(crate::counting::CountError::Algebra)?;
                        let sel = RegionSelector::UnionStar { delta, l };
                        let pc =
                            pair_count(&spec, &sel, &PairConstraint::with_heart(heart), limits)?;
                        let value = pc.count as f64 / (ell as f64 * l * l * heart);
                        max_value = max_value.max(value);
                        rows.push(CountRow {
                            n_level,
                            ell,
                            delta,
                            l,
                            heart: Some(heart),
                            g_desc: format!("g{}:{}", gi + 1, g.descriptor()),
                            count: pc.count,
                            rhs: ell as f64 * l * l * heart,
                            ratio: value,
                            flag: false,
                        });
                    }
                }
            }
        }
    }
    let cfg = format!("bound;N={n_level};T={t_scale}");
    Ok(FourthMomentBound {
        report: CountReport::new(
            rows,
            ReportMeta {
                tool: "bound".into(),
                config_hash: config_hash(&cfg),
                timestamp: String::new(),
                runtime_ms: 0,
            },
        ),
        max_value,
    })
}
