use thetalat_core::specfun::{spherical_xi, xi_ode_residual, Precision};
fn main() {
    let p = Precision::new(1e-10, 20).unwrap();
    let (t, u) = (1.3, 2.7);
    for h in [1e-3f64, 5e-4, 2e-4, 1e-4] {
        let r = xi_ode_residual(t, u, h, &p).unwrap();
        println!("h={h:.0e} residual={r:.6e} r/h^2={:.4}", r / (h * h));
    }
    // derivative of xi vs step
    for h in [1e-3f64, 1e-4, 1e-5] {
        let fm = spherical_xi(t, u - h, &p).unwrap();
        let f0 = spherical_xi(t, u, &p).unwrap();
        let fp = spherical_xi(t, u + h, &p).unwrap();
        println!("h={h:.0e} f0={f0:.15} d1={:.10} d2={:.8}", (fp-fm)/(2.0*h), (fp-2.0*f0+fm)/(h*h));
    }
}
