//! Ordered pair counts with exact determinant matching and the optional
//! diamond window.
//!
//! Counting never materialises pairs: elements are grouped by the exact
//! integer determinant key `ell * det`, and within a class the no-window
//! count is the squared class size while the windowed count is a two-pointer
//! sweep over the sorted diamond values.

use super::enumerate::{
    approx_contains, enumerate_p_ball, ApproxInv, ConjCtx, EnumerationLimits, ExactInv,
    ExactThresholds, FLAG_UPPER_TRIANGULAR,
};
use super::{CountError, Region, RegionKind};
use crate::algebra::LatticeSpec;
use crate::rat::rat_from_f64;

/// Pair constraint: determinants always matched exactly; `heart`, when
/// present, additionally demands `|diamond_1 - diamond_2| <= heart * L^4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConstraint {
    pub heart: Option<f64>,
}

impl PairConstraint {
    pub fn det_only() -> Self {
        Self { heart: None }
    }

    pub fn with_heart(heart: f64) -> Self {
        Self {
            heart: Some(heart),
        }
    }
}

/// Region selection for pair counts: a single starred region, or the union
/// of the two starred regions at shared (delta, L).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionSelector {
    Single(Region),
    UnionStar { delta: f64, l: f64 },
}

impl RegionSelector {
    pub fn l(&self) -> f64 {
        match self {
            RegionSelector::Single(r) => r.l,
            RegionSelector::UnionStar { l, .. } => *l,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PairCountResult {
    /// Ordered-pair count (diagonal included). For irrational conjugators
    /// this is the slack-inclusive count.
    pub count: u64,
    /// Strict-inequality count, reported when float membership was used.
    pub count_strict: Option<u64>,
    /// Number of lattice elements that entered the count.
    pub elements: u64,
}

pub fn pair_count(
    spec: &LatticeSpec,
    sel: &RegionSelector,
    constraint: &PairConstraint,
    limits: &EnumerationLimits,
) -> Result<PairCountResult, CountError> {
    pair_count_filtered(spec, sel, constraint, limits, 0)
}

/// Pair count restricted to upper-triangular elements (`m21 = 0`).
pub fn upper_triangular_pair_count(
    spec: &LatticeSpec,
    sel: &RegionSelector,
    constraint: &PairConstraint,
    limits: &EnumerationLimits,
) -> Result<PairCountResult, CountError> {
    pair_count_filtered(spec, sel, constraint, limits, FLAG_UPPER_TRIANGULAR)
}

fn pair_count_filtered(
    spec: &LatticeSpec,
    sel: &RegionSelector,
    constraint: &PairConstraint,
    limits: &EnumerationLimits,
    required_flags: u8,
) -> Result<PairCountResult, CountError> {
    let l = sel.l();
    let ctx = ConjCtx::new(spec);
    let coeffs = enumerate_p_ball(spec, l * l, limits)?;

    match &ctx {
        ConjCtx::Exact(e) => {
            let mut keys: Vec<(i64, i64)> = Vec::new();
            let thr = exact_selector_thresholds(sel, e.scale_m)?;
            for x in &coeffs {
                if *x == [0, 0, 0, 0] {
                    continue;
                }
                let inv = e.invariants(x)?;
                if inv.flags & required_flags == required_flags && thr.contains(&inv) {
                    keys.push((inv.detk, inv.diamhat));
                }
            }
            let window = match constraint.heart {
                None => None,
                Some(h) => Some(exact_window(h, l, e.scale_m)?),
            };
            let count = count_sorted_pairs_exact(&mut keys, window);
            Ok(PairCountResult {
                count,
                count_strict: None,
                elements: keys.len() as u64,
            })
        }
        ConjCtx::Approx(a) => {
            let run = |slack: bool| -> (u64, u64) {
                let mut keys: Vec<(i64, f64)> = Vec::new();
                for x in &coeffs {
                    if *x == [0, 0, 0, 0] {
                        continue;
                    }
                    let inv = a.invariants(x);
                    if inv.flags & required_flags == required_flags
                        && approx_selector_contains(sel, &inv, slack)
                    {
                        keys.push((inv.detk, inv.diam));
                    }
                }
                let window = constraint.heart.map(|h| {
                    let w = h * l.powi(4);
                    if slack {
                        w * (1.0 + 1e-9) + 1e-9
                    } else {
                        w
                    }
                });
                let n = keys.len() as u64;
                (count_sorted_pairs_approx(&mut keys, window), n)
            };
            let (count, elements) = run(true);
            let (strict, _) = run(false);
            Ok(PairCountResult {
                count,
                count_strict: Some(strict),
                elements,
            })
        }
    }
}

/// Class sizes by exact determinant key `ell * det` for the elements of the
/// selector; used by the decomposition checks.
pub fn det_class_sizes(
    spec: &LatticeSpec,
    sel: &RegionSelector,
    limits: &EnumerationLimits,
) -> Result<Vec<(i64, u64)>, CountError> {
    let l = sel.l();
    let ctx = ConjCtx::new(spec);
    let coeffs = enumerate_p_ball(spec, l * l, limits)?;
    let mut dets: Vec<i64> = Vec::new();
    for x in &coeffs {
        if *x == [0, 0, 0, 0] {
            continue;
        }
        match &ctx {
            ConjCtx::Exact(e) => {
                let inv = e.invariants(x)?;
                let thr = exact_selector_thresholds(sel, e.scale_m)?;
                if thr.contains(&inv) {
                    dets.push(inv.detk);
                }
            }
            ConjCtx::Approx(a) => {
                let inv = a.invariants(x);
                if approx_selector_contains(sel, &inv, true) {
                    dets.push(inv.detk);
                }
            }
        }
    }
    dets.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < dets.len() {
        let mut j = i;
        while j < dets.len() && dets[j] == dets[i] {
            j += 1;
        }
        out.push((dets[i], (j - i) as u64));
        i = j;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// selector predicates

pub(crate) struct ExactSelector {
    single: Option<(RegionKind, ExactThresholds)>,
    union: Option<(ExactThresholds, ExactThresholds)>,
}

impl ExactSelector {
    pub(crate) fn contains(&self, inv: &ExactInv) -> bool {
        if let Some((kind, thr)) = &self.single {
            return thr.contains(*kind, inv);
        }
        let (om, ps) = self.union.as_ref().expect("selector is single or union");
        om.contains(RegionKind::Omega, inv) || ps.contains(RegionKind::Psi, inv)
    }
}

pub(crate) fn exact_selector_thresholds(
    sel: &RegionSelector,
    scale_m: i128,
) -> Result<ExactSelector, CountError> {
    match sel {
        RegionSelector::Single(r) => Ok(ExactSelector {
            single: Some((r.kind, ExactThresholds::new(r.delta, r.l, scale_m)?)),
            union: None,
        }),
        RegionSelector::UnionStar { delta, l } => Ok(ExactSelector {
            single: None,
            union: Some((
                ExactThresholds::new(*delta, *l, scale_m)?,
                ExactThresholds::new(*delta, *l, scale_m)?,
            )),
        }),
    }
}

pub(crate) fn approx_selector_contains(sel: &RegionSelector, inv: &ApproxInv, slack: bool) -> bool {
    match sel {
        RegionSelector::Single(r) => approx_contains(r.kind, r.delta, r.l, inv, slack),
        RegionSelector::UnionStar { delta, l } => {
            approx_contains(RegionKind::Omega, *delta, *l, inv, slack)
                || approx_contains(RegionKind::Psi, *delta, *l, inv, slack)
        }
    }
}

// ---------------------------------------------------------------------------
// pair counting over sorted keys

/// Exact diamond window `|d1 - d2| * den <= num` in the scaled coordinates.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ExactWindow {
    pub num: i128,
    pub den: i128,
}

pub(crate) fn exact_window(heart: f64, l: f64, scale_m: i128) -> Result<ExactWindow, CountError> {
    let hr = rat_from_f64(heart)
        .ok_or_else(|| CountError::BadRegion(format!("heart = {heart} is not a small dyadic")))?;
    let lr = rat_from_f64(l)
        .ok_or_else(|| CountError::BadRegion(format!("L = {l} is not a small dyadic")))?;
    let l4 = lr.clone() * lr.clone() * lr.clone() * lr;
    let w = hr * l4;
    let m4 = scale_m
        .checked_mul(scale_m)
        .and_then(|v| v.checked_mul(v))
        .ok_or_else(|| CountError::Overflow("scale^4".into()))?;
    let num = w
        .numer()
        .checked_mul(m4)
        .ok_or_else(|| CountError::Overflow("window numerator".into()))?;
    Ok(ExactWindow {
        num,
        den: *w.denom(),
    })
}

pub(crate) fn count_sorted_pairs_exact(
    keys: &mut Vec<(i64, i64)>,
    window: Option<ExactWindow>,
) -> u64 {
    keys.sort_unstable();
    let mut total: u64 = 0;
    let mut i = 0;
    while i < keys.len() {
        let mut j = i;
        while j < keys.len() && keys[j].0 == keys[i].0 {
            j += 1;
        }
        let class = &keys[i..j];
        match window {
            None => {
                let m = (j - i) as u64;
                total += m * m;
            }
            Some(w) => {
                let mut lo = 0usize;
                let mut hi = 0usize;
                for k in 0..class.len() {
                    while (class[k].1 - class[lo].1) as i128 * w.den > w.num {
                        lo += 1;
                    }
                    while hi < class.len() && (class[hi].1 - class[k].1) as i128 * w.den <= w.num {
                        hi += 1;
                    }
                    total += (hi - lo) as u64;
                }
            }
        }
        i = j;
    }
    total
}

pub(crate) fn count_sorted_pairs_approx(keys: &mut Vec<(i64, f64)>, window: Option<f64>) -> u64 {
    keys.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut total: u64 = 0;
    let mut i = 0;
    while i < keys.len() {
        let mut j = i;
        while j < keys.len() && keys[j].0 == keys[i].0 {
            j += 1;
        }
        let class = &keys[i..j];
        match window {
            None => {
                let m = (j - i) as u64;
                total += m * m;
            }
            Some(w) => {
                let mut lo = 0usize;
                let mut hi = 0usize;
                for k in 0..class.len() {
                    while class[k].1 - class[lo].1 > w {
                        lo += 1;
                    }
                    while hi < class.len() && class[hi].1 - class[k].1 <= w {
                        hi += 1;
                    }
                    total += (hi - lo) as u64;
                }
            }
        }
        i = j;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupElement;

    fn spec_id(n: u32, ell: u32) -> LatticeSpec {
        LatticeSpec::new(n, ell, GroupElement::identity()).unwrap()
    }

    fn omega_sel(delta: f64, l: f64) -> RegionSelector {
        RegionSelector::Single(Region::omega_star(delta, l).unwrap())
    }

    #[test]
    fn golden_pair_counts() {
        let limits = EnumerationLimits::default();
        let spec = spec_id(1, 1);
        let sel = omega_sel(1.0, 1.0);
        let v = pair_count(&spec, &sel, &PairConstraint::det_only(), &limits).unwrap();
        assert_eq!(v.count, 608);
        assert_eq!(v.elements, 32);
        let v0 = pair_count(&spec, &sel, &PairConstraint::with_heart(0.0), &limits).unwrap();
        assert_eq!(v0.count, 352);
    }

    #[test]
    fn det_class_decomposition() {
        let limits = EnumerationLimits::default();
        let spec = spec_id(1, 1);
        let sel = omega_sel(1.0, 1.0);
        let classes = det_class_sizes(&spec, &sel, &limits).unwrap();
        let sizes: Vec<u64> = classes.iter().map(|&(_, m)| m).collect();
        // det classes -1, 0, 1 have sizes 4, 24, 4
        assert_eq!(sizes, vec![4, 24, 4]);
        let sum_sq: u64 = sizes.iter().map(|m| m * m).sum();
        let v = pair_count(&spec, &sel, &PairConstraint::det_only(), &limits).unwrap();
        assert_eq!(v.count, sum_sq);
    }

    #[test]
    fn empty_region_counts_zero() {
        let limits = EnumerationLimits::default();
        let v = pair_count(
            &spec_id(1, 1),
            &omega_sel(1.0, 0.4),
            &PairConstraint::det_only(),
            &limits,
        )
        .unwrap();
        assert_eq!(v.count, 0);
    }

    #[test]
    fn upper_triangular_subset_property() {
        let limits = EnumerationLimits::default();
        for l in [1.0, 2.0] {
            let sel = omega_sel(1.0, l);
            let full = pair_count(&spec_id(1, 1), &sel, &PairConstraint::det_only(), &limits)
                .unwrap()
                .count;
            let ut = upper_triangular_pair_count(
                &spec_id(1, 1),
                &sel,
                &PairConstraint::det_only(),
                &limits,
            )
            .unwrap()
            .count;
            assert!(ut <= full, "L={l}: {ut} > {full}");
        }
    }

    #[test]
    fn upper_triangular_golden() {
        // confirmed against the brute-force pair oracle in the integration
        // tests: 18 upper-triangular elements, det classes 14 / 2 / 2
        let limits = EnumerationLimits::default();
        let v = upper_triangular_pair_count(
            &spec_id(1, 1),
            &omega_sel(1.0, 1.0),
            &PairConstraint::det_only(),
            &limits,
        )
        .unwrap();
        assert_eq!(v.elements, 18);
        assert_eq!(v.count, 14 * 14 + 2 * 2 + 2 * 2);
    }

    #[test]
    fn heart_window_matches_quadratic_oracle() {
        // two-pointer window count vs the O(m^2) pair scan
        let limits = EnumerationLimits::default();
        let spec = spec_id(2, 1);
        let sel = RegionSelector::UnionStar { delta: 0.5, l: 2.0 };
        for heart in [0.0, 0.03125, 0.25, 1.0] {
            let fast = pair_count(&spec, &sel, &PairConstraint::with_heart(heart), &limits)
                .unwrap()
                .count;
            // oracle over the enumerated elements
            let om = super::super::enumerate_region(
                &spec,
                &Region::omega_star(0.5, 2.0).unwrap(),
                &limits,
            )
            .unwrap();
            let ps = super::super::enumerate_region(
                &spec,
                &Region::psi_star(0.5, 2.0).unwrap(),
                &limits,
            )
            .unwrap();
            let mut all = om;
            for e in ps {
                if !all.iter().any(|a| a.coeffs == e.coeffs) {
                    all.push(e);
                }
            }
            let w = heart * 16.0;
            let mut slow = 0u64;
            for e1 in &all {
                for e2 in &all {
                    if e1.det == e2.det && (e1.conj_diamond - e2.conj_diamond).abs() <= w + 1e-12 {
                        slow += 1;
                    }
                }
            }
            assert_eq!(fast, slow, "heart = {heart}");
        }
    }

    #[test]
    fn pair_count_symmetric_under_swap() {
        // the ordered-pair set is closed under swapping, so counting with the
        // roles of the two elements exchanged gives the same number; checked
        // via the quadratic scan with reversed comparison order
        let limits = EnumerationLimits::default();
        let spec = spec_id(3, 3);
        let sel = omega_sel(0.25, 2.0);
        let els = super::super::enumerate_region(
            &spec,
            &Region::omega_star(0.25, 2.0).unwrap(),
            &limits,
        )
        .unwrap();
        let w = 0.125 * 16.0;
        let mut forward = 0u64;
        let mut swapped = 0u64;
        for e1 in &els {
            for e2 in &els {
                if e1.det == e2.det {
                    if (e1.conj_diamond - e2.conj_diamond).abs() <= w {
                        forward += 1;
                    }
                    if (e2.conj_diamond - e1.conj_diamond).abs() <= w {
                        swapped += 1;
                    }
                }
            }
        }
        assert_eq!(forward, swapped);
        let fast = pair_count(&spec, &sel, &PairConstraint::with_heart(0.125), &limits)
            .unwrap()
            .count;
        assert_eq!(fast, forward);
    }
}
