//! Successive minima of the archimedean bodies on the conjugated lattices.
//!
//! Candidates are enumerated inside a growing `P`-ball, each gets its exact
//! body scale `rho^2 = max(P', part'/delta)` as a rational, and a greedy
//! sweep over the sorted scales with an exact integer rank check produces the
//! minima directly: `lambda_i` is the scale of the i-th independent vector,
//! which is precisely the smallest s for which `s * body` holds i independent
//! lattice vectors.

use super::enumerate::{enumerate_p_ball, ConjCtx, EnumerationLimits};
use super::{CountError, RegionKind};
use crate::algebra::LatticeSpec;
use crate::rat::rat_from_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SublatticeKind {
    Full,
    /// Elements of trace zero (a rank-3 sublattice).
    TraceFree,
}

/// Exact rank of a set of integer vectors via fraction-free elimination.
fn rank_with(rows: &mut Vec<[i128; 4]>, candidate: [i64; 4]) -> bool {
    let mut m: Vec<[i128; 4]> = rows.clone();
    m.push([
        candidate[0] as i128,
        candidate[1] as i128,
        candidate[2] as i128,
        candidate[3] as i128,
    ]);
    let full = gauss_rank(&mut m.clone());
    if full > gauss_rank(&mut rows.clone()) {
        rows.push([
            candidate[0] as i128,
            candidate[1] as i128,
            candidate[2] as i128,
            candidate[3] as i128,
        ]);
        true
    } else {
        false
    }
}

fn gauss_rank(m: &mut Vec<[i128; 4]>) -> usize {
    let mut rank = 0;
    for col in 0..4 {
        let piv = (rank..m.len()).find(|&r| m[r][col] != 0);
        let Some(piv) = piv else { continue };
        m.swap(rank, piv);
        for r in rank + 1..m.len() {
            if m[r][col] != 0 {
                let a = m[rank][col];
                let b = m[r][col];
                for c in 0..4 {
                    m[r][c] = m[r][c] * a - m[rank][c] * b;
                }
                // keep the entries from exploding
                let g = m[r].iter().fold(0i128, |acc, &v| gcd_i128(acc, v));
                if g > 1 {
                    for c in 0..4 {
                        m[r][c] /= g;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Successive minima `lambda_1 <= ... <= lambda_n` of the body
/// `Region(kind, delta, L = 1)` on the (possibly trace-free) lattice.
pub fn successive_minima(
    spec: &LatticeSpec,
    kind: RegionKind,
    delta: f64,
    sublattice: SublatticeKind,
) -> Result<Vec<f64>, CountError> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(CountError::BadRegion(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    let target_rank = match sublattice {
        SublatticeKind::Full => 4usize,
        SublatticeKind::TraceFree => 3usize,
    };
    let ctx = ConjCtx::new(spec);
    let limits = EnumerationLimits::default();
    let delta_rat = rat_from_f64(delta)
        .ok_or_else(|| CountError::BadRegion(format!("delta = {delta} is not a small dyadic")))?;
    let (dn, dd) = (*delta_rat.numer(), *delta_rat.denom());

    let mut radius = 2.0f64;
    for _ in 0..40 {
        let coeffs = enumerate_p_ball(spec, radius * radius, &limits)?;
        // (rho^2 numerator, denominator, coeffs) per usable vector
        let mut cands: Vec<(i128, i128, [i64; 4])> = Vec::new();
        for x in &coeffs {
            if *x == [0, 0, 0, 0] {
                continue;
            }
            if sublattice == SublatticeKind::TraceFree && x[0] + x[3] != 0 {
                continue;
            }
            // rho^2 = max(P', part'/delta) as an exact (or float-dyadic)
            // rational num/den
            let (num, den) = match &ctx {
                ConjCtx::Exact(e) => {
                    let inv = e.invariants(x)?;
                    let m2 = e.scale_m * e.scale_m;
                    let part = match kind {
                        RegionKind::Omega => inv.bchat,
                        RegionKind::Psi => inv.phat - inv.bchat,
                    } as i128;
                    // max(phat/m2, part*dd/(dn*m2))
                    let a = (inv.phat as i128) * dn;
                    let b = part * dd;
                    if a >= b {
                        (inv.phat as i128, m2)
                    } else {
                        (
                            part.checked_mul(dd)
                                .ok_or_else(|| CountError::Overflow("rho^2".into()))?,
                            m2.checked_mul(dn)
                                .ok_or_else(|| CountError::Overflow("rho^2 denom".into()))?,
                        )
                    }
                }
                ConjCtx::Approx(a) => {
                    let inv = a.invariants(x);
                    let part = match kind {
                        RegionKind::Omega => inv.bc,
                        RegionKind::Psi => inv.p - inv.bc,
                    };
                    let rho2 = inv.p.max(part / delta);
                    let r = rat_from_f64(rho2).ok_or_else(|| {
                        CountError::BadRegion("rho^2 out of dyadic range".into())
                    })?;
                    (*r.numer(), *r.denom())
                }
            };
            cands.push((num, den, *x));
        }
        // sort by exact rho^2 (cross-multiplied), tie-break on coefficients
        cands.sort_unstable_by(|a, b| {
            (a.0 * b.1).cmp(&(b.0 * a.1)).then(a.2.cmp(&b.2))
        });

        let mut basis: Vec<[i128; 4]> = Vec::new();
        let mut minima = Vec::new();
        for (num, den, x) in &cands {
            if rank_with(&mut basis, *x) {
                minima.push((*num as f64 / *den as f64).sqrt());
                if minima.len() == target_rank {
                    break;
                }
            }
        }
        if minima.len() == target_rank {
            // certified complete iff every vector of scale <= lambda_max was
            // inside the enumerated P-ball
            if minima[target_rank - 1] <= radius {
                return Ok(minima);
            }
        }
        radius *= 2.0;
    }
    Err(CountError::NonConvergent(
        "successive minima search did not close after 40 radius doublings".into(),
    ))
}
