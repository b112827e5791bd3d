//! Nonlinear images of the delta kernel: delta^2 and sqrt(delta) are
//! honest functions here, living in the lattice-sample representation, and
//! their integrals form level families with measurable growth.
//!
//! ```bash
//! cargo run --example nonlinear_delta
//! ```

use ultrafn::{
    classify_growth, delta, grid_pow, grid_sqrt, to_samples, GridParams, GrowthTag, HyperScalar,
    LevelLadder,
};

fn main() {
    let ladder = LevelLadder::default();

    println!("integral of delta_0^2 per level (equals 1/eta = n/sqrt(pi)):");
    for &n in ladder.levels() {
        let params = GridParams::new(n).unwrap();
        let squared = grid_pow(&to_samples(&delta(params, 0.0).unwrap()), 2.0);
        println!(
            "  n = {n:2}: {:12.8}   (1/eta = {:12.8})",
            squared.riemann_integral().re,
            1.0 / params.eta()
        );
    }

    // the family n -> integral of delta^2 is an infinite hyperreal with
    // polynomial growth of exponent 1
    let family = HyperScalar::new(|n| {
        let params = GridParams::new(n)?;
        let d = delta(params, 0.0)?;
        Ok(grid_pow(&to_samples(&d), 2.0).riemann_integral())
    });
    let g = classify_growth(&family, &ladder).unwrap();
    assert_eq!(g.tag, GrowthTag::SlowlyIncreasing);
    println!(
        "\ngrowth of the family: {:?}, fitted exponent {:.6}",
        g.tag, g.witness
    );

    println!("\nintegral of sqrt(delta_0) per level (eta * sqrt(1/eta) = sqrt(eta)):");
    for &n in ladder.levels() {
        let params = GridParams::new(n).unwrap();
        let root = grid_sqrt(&to_samples(&delta(params, 0.0).unwrap()));
        println!(
            "  n = {n:2}: {:12.8}   (sqrt(eta) = {:12.8})",
            root.riemann_integral().re,
            params.eta().sqrt()
        );
    }
    let root_family = HyperScalar::new(|n| {
        let params = GridParams::new(n)?;
        let d = delta(params, 0.0)?;
        Ok(grid_sqrt(&to_samples(&d)).riemann_integral())
    });
    let g = classify_growth(&root_family, &ladder).unwrap();
    println!(
        "growth of the sqrt family: {:?}, fitted exponent {:.6} (an infinitesimal)",
        g.tag, g.witness
    );

    // the exact product in the extended representation keeps the corner
    // anomaly visible: on the paper lattice the bilinear integral of
    // delta*delta is 1/eta - 1/period, not 1/eta
    let params = GridParams::new(8).unwrap();
    let d = delta(params, 0.0).unwrap();
    let exact = ultrafn::pointwise_product(&d, &d).unwrap().integral().re;
    println!(
        "\nbilinear integral of delta*delta at n = 8: {exact:.8} = 1/eta - 1/period = {:.8}",
        1.0 / params.eta() - 1.0 / params.period()
    );
}
