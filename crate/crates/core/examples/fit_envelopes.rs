// Dev sweep: observed maxima of the appendix envelope ratios.
use thetalat_core::specfun::{verify_appendix_bounds, AppendixGrid, Precision};

fn main() {
    let prec = Precision::new(1e-10, 20).unwrap();
    let report = verify_appendix_bounds(&AppendixGrid::default(), &prec).unwrap();
    println!("bessel max ratios: {:?}", report.max_ratio_bessel);
    println!("xi     max ratios: {:?}", report.max_ratio_xi);
    let mut worst: Vec<_> = report.rows.iter().collect();
    worst.sort_by(|a, b| b.ratio.total_cmp(&a.ratio));
    for r in worst.iter().take(8) {
        println!("{} j={} t={} arg={} ratio={:.4}", r.family, r.j, r.t, r.arg, r.ratio);
    }
}
