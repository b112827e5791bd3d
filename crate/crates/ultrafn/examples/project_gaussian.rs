//! Projecting functions onto the level spaces: spectral fidelity for the
//! Gaussian, slow pointwise convergence for the kinked exp(-|x|), and the
//! beating of an off-lattice sinusoid.
//!
//! ```bash
//! cargo run --example project_gaussian
//! ```

use ultrafn::{project_function, GridParams, QuadratureConfig, SlowFunction};

fn main() {
    let cfg = QuadratureConfig::default();

    // Gaussian: the spectrum is far below machine precision beyond the band
    // at level 8, so the projection reproduces the function pointwise
    let gauss = SlowFunction::parse_src("exp(-x^2/2)", 0).unwrap();
    println!("max |gauss_proj(x) - gauss(x)| over [-3, 3]:");
    for n in [4u32, 8, 16] {
        let params = GridParams::new(n).unwrap();
        let (u, warns) = project_function(&gauss, params, &cfg).unwrap();
        let mut worst = 0.0f64;
        for j in 0..=600 {
            let x = -3.0 + 0.01 * j as f64;
            worst = worst.max((u.eval(x).re - (-x * x / 2.0f64).exp()).abs());
        }
        println!("  n = {n:2}: {worst:.3e}   warnings: {}", warns.len());
    }

    // exp(-|x|) has a kink: the spectrum decays like 1/k^2 and the error
    // shrinks with the bandwidth beta_n
    let kinked = SlowFunction::parse_src("exp(-abs(x))", 0).unwrap();
    println!("\nexp(-|x|) pointwise error at the kink and at x = 1:");
    for n in [8u32, 16, 32] {
        let params = GridParams::new(n).unwrap();
        let (u, _) = project_function(&kinked, params, &cfg).unwrap();
        println!(
            "  n = {n:2}: |err(0)| = {:.3e}, |err(1)| = {:.3e}",
            (u.eval(0.0).re - 1.0).abs(),
            (u.eval(1.0).re - (-1.0f64).exp()).abs()
        );
    }

    // sin(x): frequency 1 is never on the lattice, so the projection beats
    // against the two nearest lattice waves and converges only linearly
    let sine = SlowFunction::parse_src("sin(x)", 0).unwrap();
    println!("\nmax |sin_proj(x) - sin(x)| over [-3, 3]:");
    for n in [8u32, 16, 32] {
        let params = GridParams::new(n).unwrap();
        let (u, _) = project_function(&sine, params, &cfg).unwrap();
        let mut worst = 0.0f64;
        for j in 0..=120 {
            let x = -3.0 + 0.05 * j as f64;
            worst = worst.max((u.eval(x).re - x.sin()).abs());
        }
        println!("  n = {n:2}: {worst:.3e}");
    }

    // the identity function becomes a sawtooth on the period; near the
    // origin the truncated series still tracks x
    let ident = SlowFunction::parse_src("x", 1).unwrap();
    let params = GridParams::new(16).unwrap();
    let (u, _) = project_function(&ident, params, &cfg).unwrap();
    println!("\nsawtooth projection of x at level 16, near the origin:");
    for l in [-4i64, -1, 1, 4] {
        let q = params.point(l);
        println!("  x = {q:+.4}: projected {:+.4}", u.eval(q).re);
    }
}
