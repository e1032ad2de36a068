//! Frozen constants used by the bound checks and truncation certificates.
//!
//! Every value here was produced by a named sweep of this crate's own tools
//! and then pinned. Re-running the generating command must stay at or below
//! the frozen value (with the stated safety factor already applied).

/// Max of |d^j/dx^j K_{it}(x)| e^{pi|t|/2} / ((1+|log x|)((1+|t|)/x)^j) over
/// the default appendix grid (j = 0, 1, 2).
/// Generated by the fit_envelopes sweep; observed maxima were
/// (1.866, 0.783, 1.023); frozen with a 1.25x safety factor.
pub const BESSEL_ENVELOPE_RATIO_MAX: [f64; 3] = [2.34, 0.98, 1.28];

/// Same for the spherical function against the `{1 | log(u) u^{-1/2-j}}`
/// envelopes with the `(1+t^2)` factor for j >= 1. Observed maxima were
/// (0.977, 0.625, 0.431); frozen with a 1.25x safety factor.
pub const XI_ENVELOPE_RATIO_MAX: [f64; 3] = [1.23, 0.79, 0.54];

/// Ratio bound for the level-N pair-count propositions, fitted on the
/// squarefree levels N <= 6 sweep (`thetalat verify-bound --prop omega --fit`)
/// and validated on 6 < N <= 15. Observed fitted maxima: omega 38.0 at the
/// (N=1, ell=1, delta=1, L=1) corner.
pub const OMEGA_PROP_RATIO_MAX: f64 = 48.0;

/// Same for the second-region proposition. Observed fitted maximum 38.0.
pub const PSI_PROP_RATIO_MAX: f64 = 48.0;

/// Single-count bound ratio for the trace-free lattice inside the
/// dilation-bounded region. Observed fitted maximum 4.27.
pub const TRACEFREE_PROP_RATIO_MAX: f64 = 6.0;

/// Flagging threshold for the pair-count conjecture scan. The scan is
/// report-only; rows above this ratio are flagged, never asserted.
pub const HEART_SCAN_RATIO_FLAG: f64 = 1e3;

/// Bound ratio for the upper-triangular pair count against
/// `ell L^2 (1 + ell H^2 delta + ell H^2 delta L + ell H^2 delta^{3/2} L^2)`.
/// Observed fitted maximum 20.25 on the N <= 6 grid.
pub const UPPER_TRIANGULAR_RATIO_MAX: f64 = 26.0;

/// Two-sided envelope for |body ∩ lattice| against prod_i (1 + 1/lambda_i):
/// the count/product ratio must lie in [1/MINKOWSKI_RATIO, MINKOWSKI_RATIO].
/// Observed range on the sweep grid was [0.24, 4.05].
pub const MINKOWSKI_RATIO: f64 = 64.0;

/// Certified emptiness threshold: the star-region enumeration is provably
/// empty whenever `L < min(EMPTY_C1/sqrt(ell), EMPTY_C2/(ell H sqrt(delta)))`.
/// EMPTY_C1 = 1/sqrt(5) and EMPTY_C2 = 1/2 come from the spacing bound
/// |c z - a|^2 >= 1/ell applied to the conjugated entry inequalities.
pub const EMPTY_C1: f64 = 0.447_213_595_499_957_9;
pub const EMPTY_C2: f64 = 0.5;

/// Fitted lower-bound constant for the first successive minimum of the
/// trace-free lattice against min(ell^{-1/2}, (ell H sqrt(delta))^{-1}).
/// Observed minimum of the ratio was 0.707 on the N <= 6 sweep.
pub const LAMBDA1_TRACEFREE_C: f64 = 0.4;

/// Decay constants C_A with |Q(P)| <= C_A (1+P)^{-A} for the long-window
/// shape at the acceptance T range (T in [3, 10], i.e. cos(alpha) >= sin 0.1)
/// and for the unit window at alpha = 0. For point-mass windows these are
/// computed analytically per window; the sweep-frozen values below cover the
/// Gaussian envelope window (sigma = 2, alpha = pi/4) of the route grid.
/// Observed: Q 0.5, Q_P 21.6, Phi 9.31 (A = 8); frozen with 1.5x margin.
pub const GAUSSIAN_Q_DECAY_C8: f64 = 0.75;
pub const GAUSSIAN_QP_DECAY_C8: f64 = 33.0;
pub const GAUSSIAN_PHI_DECAY_C8: f64 = 14.0;

/// Floor used to evaluate the radial test function on the determinant-zero
/// locus by continuous extension.
pub const TAU_FLOOR: f64 = 1e-6;
