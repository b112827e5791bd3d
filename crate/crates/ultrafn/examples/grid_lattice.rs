//! The level lattice: constants, points, CSV export, and hyperfinite sums.
//!
//! ```bash
//! cargo run --example grid_lattice
//! ```

use num_complex::Complex64;
use ultrafn::{hyperfinite_sum, sigma_grid, GridKind, GridParams, HyperfiniteFamily, SigmaGrid};

fn main() {
    println!("level constants (beta = n sqrt(pi), eta = sqrt(pi)/n, beta*eta = pi):");
    for n in [1u32, 2, 4, 8, 16, 32] {
        let p = GridParams::new(n).unwrap();
        println!(
            "  n = {n:2}: beta = {:9.5}  eta = {:8.5}  points = {:4}  beta*eta - pi = {:+.2e}",
            p.beta(),
            p.eta(),
            p.len(),
            p.beta() * p.eta() - std::f64::consts::PI,
        );
    }

    let grid = sigma_grid(2).unwrap();
    println!("\nthe 8 lattice points of level 2 (CSV columns l,q):");
    let mut csv = Vec::new();
    grid.write_csv(&mut csv).unwrap();
    print!("{}", String::from_utf8(csv).unwrap());

    let sym = SigmaGrid::new(GridParams::with_kind(2, GridKind::Symmetric).unwrap());
    println!(
        "\nsymmetric variant of level 2 has {} points; both endpoints present: [{:.5}, {:.5}]",
        sym.len(),
        sym.points.first().unwrap(),
        sym.points.last().unwrap()
    );

    // hyperfinite sums: per-level finite sums forming a level family
    let count_eta = HyperfiniteFamily::over_grid(GridKind::Paper, |n, _| {
        Complex64::new(std::f64::consts::PI.sqrt() / n as f64, 0.0)
    });
    let total_length = hyperfinite_sum(&count_eta);
    println!("\nsum of eta over all lattice points (= 2 beta, grows without bound):");
    for n in [4u32, 8, 16, 32] {
        println!("  n = {n:2}: {:10.5}", total_length.eval(n).unwrap().re);
    }

    let moment = HyperfiniteFamily::over_grid(GridKind::Paper, |n, q| {
        Complex64::new(q * std::f64::consts::PI.sqrt() / n as f64, 0.0)
    });
    let first_moment = hyperfinite_sum(&moment);
    println!("\nsum of eta*q over the paper lattice (the unpaired left endpoint gives -pi):");
    for n in [4u32, 8, 16, 32] {
        println!("  n = {n:2}: {:+.12}", first_moment.eval(n).unwrap().re);
    }
}
