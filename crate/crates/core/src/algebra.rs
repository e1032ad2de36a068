//! Exact arithmetic for 2x2 matrices in tailored coordinates, the split
//! level-N order with its partial duals, conjugation, and the Atkin-Lehner
//! height function on the upper half plane.
//!
//! Tailored coordinates write a real 2x2 matrix as `[a,b,c]+d`, meaning
//!
//! ```text
//! [a,b,c]+d  =  ( d+c  b+a )
//!               ( b-a  d-c )
//! ```
//!
//! so that `P = a^2+b^2+c^2+d^2` is half the squared Frobenius norm,
//! `tau = a^2-b^2-c^2+d^2` is the determinant, and the discriminant-like
//! quantity `diamond = P^2 - tau^2 = 4(a^2+d^2)(b^2+c^2)` factors exactly.

use crate::rat::{rat, rat_from_f64, rat_int, rat_to_f64, Rat};
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type RatMat2 = [[Rat; 2]; 2];
pub type F64Mat2 = [[f64; 2]; 2];

#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error("level must be a squarefree positive integer, got {0}")]
    NotSquarefree(u32),
    #[error("ell = {ell} does not divide N = {n}")]
    BadDivisor { ell: u32, n: u32 },
    #[error("matrix determinant {det} differs from 1 by more than 1e-12")]
    NotUnimodular { det: f64 },
    #[error("point must lie in the upper half plane (Im = {0})")]
    NotUpperHalfPlane(f64),
    #[error("height reduction exceeded {0} steps without reaching a fixpoint")]
    HeightNoFixpoint(usize),
}

// ---------------------------------------------------------------------------
// small exact matrix helpers

pub fn rmat_identity() -> RatMat2 {
    [[rat_int(1), rat_int(0)], [rat_int(0), rat_int(1)]]
}

pub fn rmat_mul(a: &RatMat2, b: &RatMat2) -> RatMat2 {
    let mut out = [[Rat::zero(), Rat::zero()], [Rat::zero(), Rat::zero()]];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
        }
    }
    out
}

pub fn rmat_det(m: &RatMat2) -> Rat {
    m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
}

/// Adjugate, so that `m * adj = det * I`.
pub fn rmat_adj(m: &RatMat2) -> RatMat2 {
    [
        [m[1][1].clone(), -m[0][1].clone()],
        [-m[1][0].clone(), m[0][0].clone()],
    ]
}

pub fn rmat_to_f64(m: &RatMat2) -> F64Mat2 {
    [
        [rat_to_f64(&m[0][0]), rat_to_f64(&m[0][1])],
        [rat_to_f64(&m[1][0]), rat_to_f64(&m[1][1])],
    ]
}

pub fn fmat_mul(a: &F64Mat2, b: &F64Mat2) -> F64Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn fmat_det(m: &F64Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

// ---------------------------------------------------------------------------
// squarefree levels

pub fn is_squarefree(n: u32) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u32;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn prime_divisors(n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u32;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn divisors(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// Co-volume of the level-N Fuchsian group: (pi/3) N prod_{p|N} (1 + 1/p).
pub fn covolume_gamma0(n: u32) -> Result<f64, AlgebraError> {
    if !is_squarefree(n) {
        return Err(AlgebraError::NotSquarefree(n));
    }
    let mut v = std::f64::consts::PI / 3.0 * n as f64;
    for p in prime_divisors(n) {
        v *= 1.0 + 1.0 / p as f64;
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// tailored coordinates

/// Exact 2x2 matrix in tailored coordinates `[a,b,c]+d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailoredMatrix {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

/// The invariants `(P, tau, diamond)` plus `u = (P-|tau|)/(2|tau|)` when
/// `tau != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub p: Rat,
    pub tau: Rat,
    pub diamond: Rat,
    pub u: Option<Rat>,
}

impl TailoredMatrix {
    pub fn from_coords(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_entries(m11: Rat, m12: Rat, m21: Rat, m22: Rat) -> Self {
        let two = rat_int(2);
        Self {
            a: (m12.clone() - m21.clone()) / two.clone(),
            b: (m12 + m21) / two.clone(),
            c: (m11.clone() - m22.clone()) / two.clone(),
            d: (m11 + m22) / two,
        }
    }

    pub fn zero() -> Self {
        Self::from_coords(Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    /// Matrix entries `(m11, m12, m21, m22)`.
    pub fn entries(&self) -> (Rat, Rat, Rat, Rat) {
        (
            self.d.clone() + self.c.clone(),
            self.b.clone() + self.a.clone(),
            self.b.clone() - self.a.clone(),
            self.d.clone() - self.c.clone(),
        )
    }

    pub fn p(&self) -> Rat {
        let Self { a, b, c, d } = self;
        a.clone() * a.clone() + b.clone() * b.clone() + c.clone() * c.clone() + d.clone() * d.clone()
    }

    /// Determinant.
    pub fn tau(&self) -> Rat {
        let Self { a, b, c, d } = self;
        a.clone() * a.clone() - b.clone() * b.clone() - c.clone() * c.clone() + d.clone() * d.clone()
    }

    /// `P^2 - tau^2`.
    pub fn diamond(&self) -> Rat {
        let p = self.p();
        let t = self.tau();
        p.clone() * p - t.clone() * t
    }

    /// The factored form `4 (a^2+d^2)(b^2+c^2)`; agrees with [`Self::diamond`]
    /// exactly.
    pub fn diamond_factored(&self) -> Rat {
        let Self { a, b, c, d } = self;
        let ad = a.clone() * a.clone() + d.clone() * d.clone();
        let bc = b.clone() * b.clone() + c.clone() * c.clone();
        rat_int(4) * ad * bc
    }

    pub fn u(&self) -> Option<Rat> {
        let t = self.tau();
        if t.is_zero() {
            None
        } else {
            let t_abs = t.abs();
            Some((self.p() - t_abs.clone()) / (rat_int(2) * t_abs))
        }
    }

    pub fn invariants(&self) -> Invariants {
        Invariants {
            p: self.p(),
            tau: self.tau(),
            diamond: self.diamond(),
            u: self.u(),
        }
    }

    pub fn coords_f64(&self) -> [f64; 4] {
        [
            rat_to_f64(&self.a),
            rat_to_f64(&self.b),
            rat_to_f64(&self.c),
            rat_to_f64(&self.d),
        ]
    }

    pub fn entries_f64(&self) -> F64Mat2 {
        let (m11, m12, m21, m22) = self.entries();
        [
            [rat_to_f64(&m11), rat_to_f64(&m12)],
            [rat_to_f64(&m21), rat_to_f64(&m22)],
        ]
    }

    pub fn entries_rat(&self) -> RatMat2 {
        let (m11, m12, m21, m22) = self.entries();
        [[m11, m12], [m21, m22]]
    }
}

// ---------------------------------------------------------------------------
// upper half plane

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self, AlgebraError> {
        if !(y > 0.0) || !y.is_finite() || !x.is_finite() {
            return Err(AlgebraError::NotUpperHalfPlane(y));
        }
        Ok(Self { x, y })
    }
}

/// The point-pair invariant `u(z,w) = |z-w|^2 / (4 Im z Im w)`.
pub fn hyperbolic_u(z: HalfPlanePoint, w: HalfPlanePoint) -> f64 {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    (dx * dx + dy * dy) / (4.0 * z.y * w.y)
}

/// Moebius action of a real matrix with positive determinant.
pub fn mobius(m: &F64Mat2, z: HalfPlanePoint) -> HalfPlanePoint {
    let det = fmat_det(m);
    debug_assert!(det > 0.0, "mobius action needs positive determinant");
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let den = (c * z.x + d) * (c * z.x + d) + c * c * z.y * z.y;
    let x = ((a * z.x + b) * (c * z.x + d) + a * c * z.y * z.y) / den;
    let y = det * z.y / den;
    HalfPlanePoint { x, y }
}

// ---------------------------------------------------------------------------
// group elements

/// Real 2x2 matrix of determinant 1, with an exact rational form attached
/// whenever the entries happen to be (small) dyadic rationals of exact unit
/// determinant. Exactness is what lets the counting layer keep boundary
/// membership decisions exact for rational conjugators.
#[derive(Debug, Clone)]
pub struct GroupElement {
    m: F64Mat2,
    exact: Option<RatMat2>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iwasawa {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0], [0.0, 1.0]],
            exact: Some(rmat_identity()),
        }
    }

    pub fn from_entries(m: F64Mat2) -> Result<Self, AlgebraError> {
        let det = fmat_det(&m);
        if (det - 1.0).abs() > 1e-12 {
            return Err(AlgebraError::NotUnimodular { det });
        }
        let exact = Self::try_exactify(&m);
        Ok(Self { m, exact })
    }

    pub fn from_rational(rm: RatMat2) -> Result<Self, AlgebraError> {
        if rmat_det(&rm) != rat_int(1) {
            return Err(AlgebraError::NotUnimodular {
                det: rat_to_f64(&rmat_det(&rm)),
            });
        }
        Ok(Self {
            m: rmat_to_f64(&rm),
            exact: Some(rm),
        })
    }

    /// `n(x) a(y) k(theta)` with `y > 0`.
    pub fn from_iwasawa(x: f64, y: f64, theta: f64) -> Result<Self, AlgebraError> {
        if !(y > 0.0) {
            return Err(AlgebraError::NotUpperHalfPlane(y));
        }
        let s = y.sqrt();
        let (cs, sn) = (theta.cos(), theta.sin());
        let na = [[s, x / s], [0.0, 1.0 / s]];
        let k = [[cs, sn], [-sn, cs]];
        let m = fmat_mul(&na, &k);
        let exact = Self::try_exactify(&m);
        Ok(Self { m, exact })
    }

    /// `diag(sqrt(y), 1/sqrt(y))`.
    pub fn diag_scaling(y: f64) -> Result<Self, AlgebraError> {
        Self::from_iwasawa(0.0, y, 0.0)
    }

    fn try_exactify(m: &F64Mat2) -> Option<RatMat2> {
        let e = |x: f64| -> Option<Rat> {
            let r = rat_from_f64(x)?;
            if r.denom().abs() <= 1 << 30 && r.numer().abs() <= 1 << 30 {
                Some(r)
            } else {
                None
            }
        };
        let rm = [[e(m[0][0])?, e(m[0][1])?], [e(m[1][0])?, e(m[1][1])?]];
        if rmat_det(&rm) == rat_int(1) {
            Some(rm)
        } else {
            None
        }
    }

    pub fn matrix(&self) -> &F64Mat2 {
        &self.m
    }

    pub fn exact(&self) -> Option<&RatMat2> {
        self.exact.as_ref()
    }

    pub fn det(&self) -> f64 {
        fmat_det(&self.m)
    }

    pub fn inverse_f64(&self) -> F64Mat2 {
        let (a, b, c, d) = (self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]);
        [[d, -b], [-c, a]]
    }

    /// The base point `g i`.
    pub fn base_point(&self) -> HalfPlanePoint {
        mobius(
            &self.m,
            HalfPlanePoint { x: 0.0, y: 1.0 },
        )
    }

    /// Iwasawa parameters `(x, y, theta)` with `g = n(x) a(y) k(theta)`.
    pub fn iwasawa(&self) -> Iwasawa {
        let z = self.base_point();
        let (c, d) = (self.m[1][0], self.m[1][1]);
        let s = z.y.sqrt();
        // k = a(y)^{-1} n(x)^{-1} g has bottom row (c*s, d*s)
        let k10 = c * s;
        let k11 = d * s;
        // k = (cos t, sin t; -sin t, cos t) => theta = atan2(-k10, k11)
        let theta = f64::atan2(-k10, k11);
        Iwasawa { x: z.x, y: z.y, theta }
    }

    pub fn act(&self, z: HalfPlanePoint) -> HalfPlanePoint {
        mobius(&self.m, z)
    }

    /// Short descriptor for report rows; never contains a comma.
    pub fn descriptor(&self) -> String {
        if self.m == [[1.0, 0.0], [0.0, 1.0]] {
            return "I".to_string();
        }
        let iw = self.iwasawa();
        if iw.x.abs() < 1e-12 && iw.theta.abs() < 1e-12 {
            return format!("diag(y={})", iw.y);
        }
        format!("g(x={};y={};th={:.4})", iw.x, iw.y, iw.theta)
    }
}

// ---------------------------------------------------------------------------
// lattice specification

/// The split order of level N, partially dualised at the divisor `ell`,
/// conjugated by `g`. Entrywise the lattice is
/// `m11 in Z, m12 in (1/ell) Z, m21 in (N/ell) Z, m22 in Z`.
#[derive(Debug, Clone)]
pub struct LatticeSpec {
    pub n_level: u32,
    pub ell: u32,
    pub g: GroupElement,
}

impl LatticeSpec {
    pub fn new(n_level: u32, ell: u32, g: GroupElement) -> Result<Self, AlgebraError> {
        if !is_squarefree(n_level) {
            return Err(AlgebraError::NotSquarefree(n_level));
        }
        if ell == 0 || n_level % ell != 0 {
            return Err(AlgebraError::BadDivisor { ell, n: n_level });
        }
        Ok(Self { n_level, ell, g })
    }
}

/// Ordered basis of the (unconjugated) lattice together with the Gram matrix
/// of `P` composed with conjugation by `g`.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    pub vectors: [TailoredMatrix; 4],
    pub gram: [[f64; 4]; 4],
    /// Covolume in entry coordinates; equals `N / ell^2` exactly.
    pub covolume: Rat,
}

pub fn lattice_basis(spec: &LatticeSpec) -> LatticeBasis {
    let n = spec.n_level as i128;
    let ell = spec.ell as i128;
    let e = |m11: Rat, m12: Rat, m21: Rat, m22: Rat| TailoredMatrix::from_entries(m11, m12, m21, m22);
    let z = Rat::zero;
    let vectors = [
        e(rat_int(1), z(), z(), z()),
        e(z(), rat(1, ell), z(), z()),
        e(z(), z(), rat_int(n / ell), z()),
        e(z(), z(), z(), rat_int(1)),
    ];

    let ginv = spec.g.inverse_f64();
    let gm = *spec.g.matrix();
    let conj: Vec<F64Mat2> = vectors
        .iter()
        .map(|v| fmat_mul(&fmat_mul(&ginv, &v.entries_f64()), &gm))
        .collect();
    let mut gram = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for r in 0..2 {
                for c in 0..2 {
                    s += conj[i][r][c] * conj[j][r][c];
                }
            }
            gram[i][j] = 0.5 * s;
        }
    }

    LatticeBasis {
        vectors,
        gram,
        covolume: rat(n, ell * ell),
    }
}

// ---------------------------------------------------------------------------
// Atkin-Lehner height

#[derive(Debug, Clone)]
pub struct HeightResult {
    pub height: f64,
    /// Element of the extended group with `Im(witness z) = height`.
    pub witness: RatMat2,
    /// The reduced point `witness z`.
    pub reduced: HalfPlanePoint,
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return (a, 1, 0);
    }
    let (g, s, t) = extended_gcd(b, a.rem_euclid(b));
    (g, t, s - (a.div_euclid(b)) * t)
}

/// Integer matrix of determinant Q representing the Atkin-Lehner operator
/// W_Q at level N, for Q || N.
pub fn atkin_lehner_matrix(q: u32, n: u32) -> RatMat2 {
    assert!(q >= 1 && n % q == 0);
    let qq = q as i128;
    let m = (n / q) as i128;
    assert_eq!(qq.gcd(&m), 1, "Q must exactly divide N");
    // Solve Q s + M t = 1; then (Qs, -t; N, Q) has determinant Q.
    let (g, s, t) = extended_gcd(qq, m);
    assert_eq!(g, 1);
    [
        [rat_int(qq * s), rat_int(-t)],
        [rat_int(n as i128), rat_int(qq)],
    ]
}

/// Completes a coprime bottom row (c, d) with N | c to a determinant-one
/// integer matrix (a, b; c, d).
fn complete_bottom_row(c: i128, d: i128) -> RatMat2 {
    let (g, s, t) = extended_gcd(d, -c);
    assert_eq!(g.abs(), 1, "bottom row must be coprime");
    // a d - b c = 1 with (a, b) = sign * (s, t)
    let (a, b) = if g == 1 { (s, t) } else { (-s, -t) };
    debug_assert_eq!(a * d - b * c, 1);
    [[rat_int(a), rat_int(b)], [rat_int(c), rat_int(d)]]
}

/// One full level-N reduction pass: repeatedly translate x into [-1/2, 1/2]
/// and apply the best bottom row (c, d), N | c, gcd(c, d) = 1 with
/// |c z + d| < 1, until no such row exists.
fn gamma0_reduce(
    mut z: HalfPlanePoint,
    n: u32,
    witness: &mut RatMat2,
    steps: &mut usize,
) -> Result<HalfPlanePoint, AlgebraError> {
    const MAX_STEPS: usize = 20_000;
    loop {
        *steps += 1;
        if *steps > MAX_STEPS {
            return Err(AlgebraError::HeightNoFixpoint(MAX_STEPS));
        }
        // translation part
        let shift = z.x.round();
        if shift != 0.0 {
            let t = [
                [rat_int(1), rat_from_f64(-shift).unwrap()],
                [rat_int(0), rat_int(1)],
            ];
            *witness = rmat_mul(&t, witness);
            z.x -= shift;
        }
        // best coprime (c, d) with N | c minimising |cz + d|
        let mut best: Option<(f64, i128, i128)> = None;
        let c_max = (1.0 / (n as f64 * z.y) + 1.0).floor() as i128 + 1;
        for k in -c_max..=c_max {
            if k == 0 {
                continue;
            }
            let c = k * n as i128;
            let d0 = (-(c as f64) * z.x).round() as i128;
            for d in (d0 - 2)..=(d0 + 2) {
                if c.gcd(&d) != 1 {
                    continue;
                }
                let re = c as f64 * z.x + d as f64;
                let norm = re * re + (c as f64 * z.y) * (c as f64 * z.y);
                if norm < best.map_or(1.0 - 1e-15, |b| b.0) {
                    best = Some((norm, c, d));
                }
            }
        }
        match best {
            Some((_, c, d)) => {
                let gmat = complete_bottom_row(c, d);
                z = mobius(&rmat_to_f64(&gmat), z);
                *witness = rmat_mul(&gmat, witness);
            }
            None => return Ok(z),
        }
    }
}

/// Height `H(z) = max Im over the orbit of z under the group generated by
/// the level-N Fuchsian group and all Atkin-Lehner operators`, together with
/// a witness matrix realising the maximum.
pub fn height(z: HalfPlanePoint, n: u32) -> Result<HeightResult, AlgebraError> {
    if !is_squarefree(n) {
        return Err(AlgebraError::NotSquarefree(n));
    }
    let mut steps = 0usize;
    let mut witness = rmat_identity();
    let mut cur = gamma0_reduce(z, n, &mut witness, &mut steps)?;

    let al_divs: Vec<u32> = divisors(n).into_iter().filter(|&q| q > 1).collect();
    loop {
        let mut improved = false;
        for &q in &al_divs {
            let w = atkin_lehner_matrix(q, n);
            let wf = rmat_to_f64(&w);
            let mut cand_witness = rmat_mul(&w, &witness);
            let cand = mobius(&wf, cur);
            let cand = gamma0_reduce(cand, n, &mut cand_witness, &mut steps)?;
            if cand.y > cur.y * (1.0 + 1e-13) {
                cur = cand;
                witness = cand_witness;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }

    Ok(HeightResult {
        height: cur.y,
        witness,
        reduced: cur,
    })
}

/// Height of the base point of a group element.
pub fn height_of_g(g: &GroupElement, n: u32) -> Result<f64, AlgebraError> {
    Ok(height(g.base_point(), n)?.height)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tm_entries(m11: i128, m12: i128, m21: i128, m22: i128) -> TailoredMatrix {
        TailoredMatrix::from_entries(rat_int(m11), rat_int(m12), rat_int(m21), rat_int(m22))
    }

    #[test]
    fn identity_invariants() {
        let id = TailoredMatrix::from_coords(rat_int(0), rat_int(0), rat_int(0), rat_int(1));
        let inv = id.invariants();
        assert_eq!(inv.p, rat_int(1));
        assert_eq!(inv.tau, rat_int(1));
        assert_eq!(inv.diamond, rat_int(0));
        assert_eq!(inv.u, Some(rat_int(0)));
    }

    #[test]
    fn unipotent_invariants() {
        // (1 1; 0 1): P = 3/2, tau = 1, diamond = 5/4, u = 1/4
        let m = tm_entries(1, 1, 0, 1);
        let inv = m.invariants();
        assert_eq!(inv.p, rat(3, 2));
        assert_eq!(inv.tau, rat_int(1));
        assert_eq!(inv.diamond, rat(5, 4));
        assert_eq!(m.diamond_factored(), rat(5, 4));
        assert_eq!(inv.u, Some(rat(1, 4)));
    }

    #[test]
    fn nilpotent_boundary() {
        // (0 1; 0 0): P = 1/2, tau = 0, diamond = 1/4, u absent
        let m = tm_entries(0, 1, 0, 0);
        let inv = m.invariants();
        assert_eq!(inv.p, rat(1, 2));
        assert_eq!(inv.tau, rat_int(0));
        assert_eq!(inv.diamond, rat(1, 4));
        assert_eq!(inv.u, None);
    }

    #[test]
    fn entry_coordinate_round_trip() {
        let m = tm_entries(3, -2, 5, 7);
        let (m11, m12, m21, m22) = m.entries();
        assert_eq!(
            (m11, m12, m21, m22),
            (rat_int(3), rat_int(-2), rat_int(5), rat_int(7))
        );
        // P equals half the entry square sum
        assert_eq!(m.p(), rat(9 + 4 + 25 + 49, 2));
        // tau equals the determinant
        assert_eq!(m.tau(), rat_int(3 * 7 - (-2) * 5));
    }

    #[test]
    fn hyperbolic_u_examples() {
        let i = HalfPlanePoint::new(0.0, 1.0).unwrap();
        assert_eq!(hyperbolic_u(i, i), 0.0);
        let w = HalfPlanePoint::new(1.0, 1.0).unwrap();
        assert!((hyperbolic_u(i, w) - 0.25).abs() < 1e-15);
        let v = HalfPlanePoint::new(0.0, 4.0).unwrap();
        assert!((hyperbolic_u(i, v) - 9.0 / 16.0).abs() < 1e-15);
        // symmetry
        assert_eq!(hyperbolic_u(i, w), hyperbolic_u(w, i));
    }

    #[test]
    fn covolume_values() {
        assert!((covolume_gamma0(1).unwrap() - std::f64::consts::PI / 3.0).abs() < 1e-14);
        assert!((covolume_gamma0(2).unwrap() - std::f64::consts::PI).abs() < 1e-14);
        assert!((covolume_gamma0(6).unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-13);
        assert!(covolume_gamma0(4).is_err());
    }

    #[test]
    fn lattice_basis_covolume() {
        for (n, ell, want) in [(1u32, 1u32, rat_int(1)), (6, 1, rat_int(6)), (6, 6, rat(1, 6))] {
            let spec = LatticeSpec::new(n, ell, GroupElement::identity()).unwrap();
            let basis = lattice_basis(&spec);
            assert_eq!(basis.covolume, want);
        }
    }

    #[test]
    fn gram_identity_case() {
        let spec = LatticeSpec::new(1, 1, GroupElement::identity()).unwrap();
        let basis = lattice_basis(&spec);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.5 } else { 0.0 };
                assert!((basis.gram[i][j] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gram_determinant_matches_covolume() {
        // det Gram = (covolume)^2 / 16 for any conjugator of determinant one
        let g = GroupElement::from_iwasawa(0.3, 2.7, 0.4).unwrap();
        let spec = LatticeSpec::new(6, 2, g).unwrap();
        let basis = lattice_basis(&spec);
        let m = basis.gram;
        let det = det4(&m);
        let covol = rat_to_f64(&basis.covolume);
        assert!((det - covol * covol / 16.0).abs() < 1e-10 * det.abs().max(1.0));
    }

    fn det4(m: &[[f64; 4]; 4]) -> f64 {
        // Laplace expansion is fine for 4x4 test use
        let mut a = *m;
        let mut det = 1.0;
        for i in 0..4 {
            let mut piv = i;
            for r in i + 1..4 {
                if a[r][i].abs() > a[piv][i].abs() {
                    piv = r;
                }
            }
            if a[piv][i] == 0.0 {
                return 0.0;
            }
            if piv != i {
                a.swap(piv, i);
                det = -det;
            }
            det *= a[i][i];
            for r in i + 1..4 {
                let f = a[r][i] / a[i][i];
                for c in i..4 {
                    a[r][c] -= f * a[i][c];
                }
            }
        }
        det
    }

    #[test]
    fn iwasawa_round_trip() {
        let g = GroupElement::from_iwasawa(0.7, 3.1, -0.9).unwrap();
        let iw = g.iwasawa();
        assert!((iw.x - 0.7).abs() < 1e-12);
        assert!((iw.y - 3.1).abs() < 1e-12);
        assert!((iw.theta + 0.9).abs() < 1e-12);
        let g2 = GroupElement::from_iwasawa(iw.x, iw.y, iw.theta).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.matrix()[i][j] - g2.matrix()[i][j]).abs() < 1e-12);
            }
        }
        assert!((g.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diag_scaling_is_exact_for_square_y() {
        let g = GroupElement::diag_scaling(4.0).unwrap();
        assert!(g.exact().is_some());
        let g2 = GroupElement::diag_scaling(2.0).unwrap();
        assert!(g2.exact().is_none());
    }

    #[test]
    fn height_examples() {
        let i = HalfPlanePoint::new(0.0, 1.0).unwrap();
        let h = height(i, 1).unwrap();
        assert!((h.height - 1.0).abs() < 1e-12);

        let z = HalfPlanePoint::new(7.0, 1.0).unwrap();
        let h = height(z, 1).unwrap();
        assert!((h.height - 1.0).abs() < 1e-12);
        // the witness actually realises the height
        let img = mobius(&rmat_to_f64(&h.witness), z);
        assert!((img.y - h.height).abs() < 1e-12);

        // fixed point of the level-2 Fricke involution
        let z = HalfPlanePoint::new(0.0, std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let h = height(z, 2).unwrap();
        assert!((h.height - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn height_spacing_bound() {
        // reduced points satisfy Im z >= sqrt(3)/(2N)
        for n in [1u32, 2, 3, 5, 6] {
            let z = HalfPlanePoint::new(0.123, 0.017).unwrap();
            let h = height(z, n).unwrap();
            assert!(h.reduced.y >= 3f64.sqrt() / (2.0 * n as f64) - 1e-12);
        }
    }

    #[test]
    fn atkin_lehner_determinant() {
        for (q, n) in [(2u32, 6u32), (3, 6), (6, 6), (5, 10), (7, 14)] {
            let w = atkin_lehner_matrix(q, n);
            assert_eq!(rmat_det(&w), rat_int(q as i128));
        }
    }
}
