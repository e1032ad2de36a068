//! Ratio sweeps: exact pair counts (or trace-free single counts) against the
//! closed-form right-hand sides of the counting bounds, with epsilon-powers
//! set to zero, the split term `H(g)` included, and one explicit constant per
//! bound doing the work of the suppressed factors.

use super::enumerate::{
    approx_selector_contains_kind, enumerate_p_ball, ApproxInv, ConjCtx, EnumerationLimits,
    ExactInv, ExactThresholds, FLAG_TRACE_FREE,
};
use super::pairs::{count_sorted_pairs_approx, count_sorted_pairs_exact, exact_window};
use super::{CountError, RegionKind};
use crate::algebra::{height_of_g, GroupElement, LatticeSpec};
use crate::constants;
use crate::report::{config_hash, CountReport, CountRow, ReportMeta};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposition {
    /// Ordered pairs in the rotation-bounded starred region, equal dets.
    Omega,
    /// Ordered pairs in the dilation-bounded starred region, equal dets.
    Psi,
    /// Single count of the trace-free lattice inside the dilation-bounded
    /// region (zero included).
    TraceFree,
    /// Ordered pairs in the union of the starred regions with the diamond
    /// window; report-only scan.
    Heart,
}

impl Proposition {
    pub fn default_flag_threshold(self) -> f64 {
        match self {
            Proposition::Omega => constants::OMEGA_PROP_RATIO_MAX,
            Proposition::Psi => constants::PSI_PROP_RATIO_MAX,
            Proposition::TraceFree => constants::TRACEFREE_PROP_RATIO_MAX,
            Proposition::Heart => constants::HEART_SCAN_RATIO_FLAG,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Proposition::Omega => "omega",
            Proposition::Psi => "psi",
            Proposition::TraceFree => "tracefree",
            Proposition::Heart => "heart",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllChoice {
    /// ell in {1, N}.
    OneAndN,
    /// every divisor of N.
    All,
}

#[derive(Debug, Clone)]
pub struct GridSpec {
    pub n_values: Vec<u32>,
    pub ell_choice: EllChoice,
    pub l_values: Vec<f64>,
    pub delta_values: Vec<f64>,
    /// Only consulted by the windowed scan.
    pub heart_values: Vec<f64>,
    pub g_elements: Vec<GroupElement>,
}

impl GridSpec {
    /// The acceptance grid: squarefree N up to `n_max`, ell in {1, N},
    /// L in 1..=16, delta in {1, 1/4, 1/16}, conjugators I and diag at y = 4.
    pub fn acceptance(n_max: u32) -> Self {
        Self {
            n_values: (1..=n_max).filter(|&n| crate::algebra::is_squarefree(n)).collect(),
            ell_choice: EllChoice::OneAndN,
            l_values: (1..=16).map(|l| l as f64).collect(),
            delta_values: vec![1.0, 0.25, 0.0625],
            heart_values: vec![1.0, 0.25, 0.0625, 0.015625],
            g_elements: vec![
                GroupElement::identity(),
                GroupElement::diag_scaling(4.0).expect("y = 4 is valid"),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BoundOptions {
    /// Overrides the per-proposition frozen constant when set.
    pub flag_threshold: Option<f64>,
    pub limits: EnumerationLimits,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            flag_threshold: None,
            limits: EnumerationLimits::default(),
        }
    }
}

/// The certified emptiness radius: the starred enumeration is provably empty
/// for `L < min(C1 / sqrt(ell), C2 / (ell H sqrt(delta)))`.
pub fn emptiness_threshold(ell: u32, h_g: f64, delta: f64) -> f64 {
    let e = ell as f64;
    (constants::EMPTY_C1 / e.sqrt()).min(constants::EMPTY_C2 / (e * h_g * delta.sqrt()))
}

// ---------------------------------------------------------------------------
// right-hand sides (epsilon = 0, split case)

pub fn rhs_omega(n: u32, ell: u32, h: f64, delta: f64, l: f64) -> f64 {
    let (e, nn) = (ell as f64, n as f64);
    let f1 = 1.0 + e.sqrt() * h * delta.sqrt() + e.sqrt() * h * delta * l + e * e / nn * delta * l * l;
    let f2 =
        1.0 + e.sqrt() * h * delta.sqrt() + e.sqrt() * h * delta.sqrt() * l + e * e / nn * delta * l * l;
    e * l * l * f1 * f2
}

pub fn rhs_psi(n: u32, ell: u32, h: f64, delta: f64, l: f64) -> f64 {
    let (e, nn) = (ell as f64, n as f64);
    let f = 1.0
        + e.sqrt() * h * delta.sqrt()
        + e / nn.sqrt() * l
        + e * h * delta.sqrt() * l
        + e * e / nn * delta.sqrt() * l * l;
    e * l * l * f * f
}

pub fn rhs_trace_free(n: u32, ell: u32, h: f64, delta: f64, l: f64) -> f64 {
    let (e, nn) = (ell as f64, n as f64);
    1.0 + (e.sqrt() + e * h * delta.sqrt()) * l
        + (e.powf(1.5) / nn.sqrt() + e.powf(1.5) * h * delta.sqrt()) * l * l
        + e * e / nn * delta.sqrt() * l * l * l
}

pub fn rhs_heart(n: u32, ell: u32, h: f64, delta: f64, heart: f64, l: f64) -> f64 {
    let (e, nn) = (ell as f64, n as f64);
    e * l
        * l
        * (1.0
            + e * e / nn * delta.sqrt() * l * l
            + e.powi(4) / (nn * nn) * heart.min(delta) * l.powi(4)
            + e * h * h
            + e.powf(1.5) * h * h * delta.powf(0.25) * l
            + e * e * h * h * delta.sqrt() * l * l)
}

pub fn rhs_upper_triangular(ell: u32, h: f64, delta: f64, l: f64) -> f64 {
    let e = ell as f64;
    e * l
        * l
        * (1.0 + e * h * h * delta + e * h * h * delta * l + e * h * h * delta.powf(1.5) * l * l)
}

// ---------------------------------------------------------------------------
// sweep driver

enum Master {
    Exact { scale_m: i128, pts: Vec<ExactInv> },
    Approx { pts: Vec<ApproxInv> },
}

fn build_master(
    spec: &LatticeSpec,
    l_max: f64,
    limits: &EnumerationLimits,
) -> Result<Master, CountError> {
    let ctx = ConjCtx::new(spec);
    let coeffs = enumerate_p_ball(spec, l_max * l_max, limits)?;
    match ctx {
        ConjCtx::Exact(e) => {
            let mut pts = Vec::with_capacity(coeffs.len());
            for x in &coeffs {
                pts.push(e.invariants(x)?);
            }
            pts.sort_unstable_by_key(|p| p.phat);
            Ok(Master::Exact {
                scale_m: e.scale_m,
                pts,
            })
        }
        ConjCtx::Approx(a) => {
            let mut pts: Vec<ApproxInv> = coeffs.iter().map(|x| a.invariants(x)).collect();
            pts.sort_unstable_by(|x, y| x.p.total_cmp(&y.p));
            Ok(Master::Approx { pts })
        }
    }
}

struct CellCount {
    count: u64,
}

fn cell_count(
    master: &Master,
    prop: Proposition,
    delta: f64,
    l: f64,
    heart: Option<f64>,
) -> Result<CellCount, CountError> {
    match master {
        Master::Exact { scale_m, pts } => {
            let thr_region = ExactThresholds::new(delta, l, *scale_m)?;
            let p_cut = ExactThresholds::new(1.0, l, *scale_m)?;
            let end = pts.partition_point(|p| p_cut.contains_p_only(p.phat));
            let pts = &pts[..end];
            match prop {
                Proposition::TraceFree => {
                    let mut count = 0u64;
                    for p in pts {
                        if p.flags & FLAG_TRACE_FREE != 0 && thr_region.contains(RegionKind::Psi, p)
                        {
                            count += 1;
                        }
                    }
                    Ok(CellCount { count })
                }
                Proposition::Omega | Proposition::Psi => {
                    let kind = if prop == Proposition::Omega {
                        RegionKind::Omega
                    } else {
                        RegionKind::Psi
                    };
                    let mut keys: Vec<(i64, i64)> = Vec::new();
                    for p in pts {
                        if p.phat != 0 && thr_region.contains(kind, p) {
                            keys.push((p.detk, p.diamhat));
                        }
                    }
                    Ok(CellCount {
                        count: count_sorted_pairs_exact(&mut keys, None),
                    })
                }
                Proposition::Heart => {
                    let mut keys: Vec<(i64, i64)> = Vec::new();
                    for p in pts {
                        if p.phat != 0
                            && (thr_region.contains(RegionKind::Omega, p)
                                || thr_region.contains(RegionKind::Psi, p))
                        {
                            keys.push((p.detk, p.diamhat));
                        }
                    }
                    let w = exact_window(heart.expect("heart grid supplies a window"), l, *scale_m)?;
                    Ok(CellCount {
                        count: count_sorted_pairs_exact(&mut keys, Some(w)),
                    })
                }
            }
        }
        Master::Approx { pts } => {
            let l2 = l * l * (1.0 + 1e-9) + 1e-9;
            let end = pts.partition_point(|p| p.p <= l2);
            let pts = &pts[..end];
            match prop {
                Proposition::TraceFree => {
                    let mut count = 0u64;
                    for p in pts {
                        if p.flags & FLAG_TRACE_FREE != 0
                            && approx_selector_contains_kind(RegionKind::Psi, delta, l, p, true)
                        {
                            count += 1;
                        }
                    }
                    Ok(CellCount { count })
                }
                Proposition::Omega | Proposition::Psi => {
                    let kind = if prop == Proposition::Omega {
                        RegionKind::Omega
                    } else {
                        RegionKind::Psi
                    };
                    let mut keys: Vec<(i64, f64)> = Vec::new();
                    for p in pts {
                        if p.p > 1e-18 && approx_selector_contains_kind(kind, delta, l, p, true) {
                            keys.push((p.detk, p.diam));
                        }
                    }
                    Ok(CellCount {
                        count: count_sorted_pairs_approx(&mut keys, None),
                    })
                }
                Proposition::Heart => {
                    let mut keys: Vec<(i64, f64)> = Vec::new();
                    for p in pts {
                        if p.p > 1e-18
                            && (approx_selector_contains_kind(RegionKind::Omega, delta, l, p, true)
                                || approx_selector_contains_kind(
                                    RegionKind::Psi,
                                    delta,
                                    l,
                                    p,
                                    true,
                                ))
                        {
                            keys.push((p.detk, p.diam));
                        }
                    }
                    let w = heart.expect("heart grid supplies a window") * l.powi(4);
                    Ok(CellCount {
                        count: count_sorted_pairs_approx(&mut keys, Some(w * (1.0 + 1e-9))),
                    })
                }
            }
        }
    }
}

/// Runs the ratio sweep for one proposition over the grid. Rows appear in
/// grid order regardless of the parallel execution schedule.
pub fn verify_bound(
    prop: Proposition,
    grid: &GridSpec,
    opts: &BoundOptions,
) -> Result<CountReport, CountError> {
    let threshold = opts
        .flag_threshold
        .unwrap_or_else(|| prop.default_flag_threshold());
    let l_max = grid.l_values.iter().cloned().fold(0.0, f64::max);

    // one block per (N, ell, g): a single enumeration reused by all cells
    let mut blocks = Vec::new();
    for &n in &grid.n_values {
        let ells: Vec<u32> = match grid.ell_choice {
            EllChoice::OneAndN => {
                let mut v = vec![1u32];
                if n != 1 {
                    v.push(n);
                }
                v
            }
            EllChoice::All => crate::algebra::divisors(n),
        };
        for ell in ells {
            for g in &grid.g_elements {
                blocks.push((n, ell, g.clone()));
            }
        }
    }

    let results: Vec<Result<Vec<CountRow>, CountError>> = blocks
        .par_iter()
        .map(|(n, ell, g)| -> Result<Vec<CountRow>, CountError> {
            let spec = LatticeSpec::new(*n, *ell, g.clone())?;
            let h = height_of_g(g, *n)?;
            let master = build_master(&spec, l_max, &opts.limits)?;
            let g_desc = g.descriptor();
            let mut rows = Vec::new();
            for &l in &grid.l_values {
                for &delta in &grid.delta_values {
                    let hearts: Vec<Option<f64>> = if prop == Proposition::Heart {
                        grid.heart_values
                            .iter()
                            .filter(|&&hv| hv <= delta + 1e-15)
                            .map(|&hv| Some(hv))
                            .collect()
                    } else {
                        vec![None]
                    };
                    for heart in hearts {
                        let cell = cell_count(&master, prop, delta, l, heart)?;
                        let rhs = match prop {
                            Proposition::Omega => rhs_omega(*n, *ell, h, delta, l),
                            Proposition::Psi => rhs_psi(*n, *ell, h, delta, l),
                            Proposition::TraceFree => rhs_trace_free(*n, *ell, h, delta, l),
                            Proposition::Heart => {
                                rhs_heart(*n, *ell, h, delta, heart.unwrap(), l)
                            }
                        };
                        let ratio = if rhs > 0.0 { cell.count as f64 / rhs } else { 0.0 };
                        rows.push(CountRow {
                            n_level: *n,
                            ell: *ell,
                            delta,
                            l,
                            heart,
                            g_desc: g_desc.clone(),
                            count: cell.count,
                            rhs,
                            ratio,
                            flag: ratio > threshold,
                        });
                    }
                }
            }
            Ok(rows)
        })
        .collect();

    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }

    let cfg = format!(
        "prop={};N={:?};ell={:?};L={:?};delta={:?};heart={:?};g={}",
        prop.name(),
        grid.n_values,
        grid.ell_choice,
        grid.l_values,
        grid.delta_values,
        grid.heart_values,
        grid.g_elements.len()
    );
    Ok(CountReport::new(
        rows,
        ReportMeta {
            tool: format!("verify-bound/{}", prop.name()),
            config_hash: config_hash(&cfg),
            timestamp: String::new(),
            runtime_ms: 0,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_rhs_corner_value() {
        // (N=1, ell=1, delta=1, L=1, H=1): both factors are 4, RHS = 16
        assert!((rhs_omega(1, 1, 1.0, 1.0, 1.0) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn omega_sweep_corner_ratio() {
        let grid = GridSpec {
            n_values: vec![1],
            ell_choice: EllChoice::OneAndN,
            l_values: vec![1.0],
            delta_values: vec![1.0],
            heart_values: vec![],
            g_elements: vec![GroupElement::identity()],
        };
        let report = verify_bound(Proposition::Omega, &grid, &BoundOptions::default()).unwrap();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert_eq!(row.count, 608);
        assert!((row.ratio - 38.0).abs() < 1e-9);
        assert!(!row.flag);
    }

    #[test]
    fn zero_count_rows_are_unflagged() {
        let grid = GridSpec {
            n_values: vec![5],
            ell_choice: EllChoice::OneAndN,
            l_values: vec![0.25],
            delta_values: vec![0.0625],
            heart_values: vec![],
            g_elements: vec![GroupElement::identity()],
        };
        let report = verify_bound(Proposition::Psi, &grid, &BoundOptions::default()).unwrap();
        for row in &report.rows {
            assert_eq!(row.count, 0);
            assert_eq!(row.ratio, 0.0);
            assert!(!row.flag);
        }
    }

    #[test]
    fn emptiness_threshold_formula() {
        let t = emptiness_threshold(1, 1.0, 1.0);
        assert!((t - 0.4472135954999579).abs() < 1e-15);
        assert!(emptiness_threshold(4, 1.0, 1.0) < t);
    }

    #[test]
    fn heart_rows_respect_window_grid() {
        let grid = GridSpec {
            n_values: vec![1],
            ell_choice: EllChoice::OneAndN,
            l_values: vec![1.0, 2.0],
            delta_values: vec![0.25],
            heart_values: vec![1.0, 0.25, 0.0625],
            g_elements: vec![GroupElement::identity()],
        };
        let report = verify_bound(Proposition::Heart, &grid, &BoundOptions::default()).unwrap();
        // hearts are clipped at delta
        assert!(report.rows.iter().all(|r| r.heart.unwrap() <= 0.25));
        assert_eq!(report.rows.len(), 2 * 2);
    }
}
