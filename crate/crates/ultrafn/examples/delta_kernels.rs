//! Delta kernels: Kronecker sampling, orthogonality, the reproducing
//! property, and the corner-mode realness defect of the paper lattice.
//!
//! ```bash
//! cargo run --example delta_kernels
//! ```

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ultrafn::{delta, delta_at_index, delta_off_grid, to_samples, GridKind, GridParams, TrigElement};

fn main() {
    let params = GridParams::new(4).unwrap();
    let eta = params.eta();
    let inv_eta = 1.0 / eta;
    println!(
        "level 4: eta = {eta:.5}, kernel peak 1/eta = {inv_eta:.5}, dimension {}",
        params.len()
    );

    // Kronecker sampling: delta_q is 1/eta at q and 0 at every other point
    let d = delta(params, 0.0).unwrap();
    println!("\nsamples of delta_0 near the origin (q, value):");
    for l in -3i64..=3 {
        let v = d.eval(params.point(l));
        println!("  {:+.5}  {:+.6e} {:+.6e}i", params.point(l), v.re, v.im);
    }

    // Gram matrix: inner(delta_a, delta_b) = kronecker / eta
    let kernels: Vec<TrigElement> = (params.l_min()..=params.l_max())
        .map(|l| delta_at_index(params, l))
        .collect();
    let mut worst = 0.0f64;
    for (i, a) in kernels.iter().enumerate() {
        for (j, b) in kernels.iter().enumerate() {
            let expect = if i == j { inv_eta } else { 0.0 };
            worst = worst.max((a.inner(b).unwrap() - Complex64::new(expect, 0.0)).norm());
        }
    }
    println!("\nfull 32x32 Gram matrix deviation from (1/eta) I: {worst:.2e}");

    // reproducing property: the bilinear pairing against delta_q reads off u(q)
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coeffs = (0..params.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut u = TrigElement::from_coeffs(params, coeffs).unwrap();
    u.zero_corner();
    let q = params.point(5);
    let paired = u.pairing(&delta(params, q).unwrap()).unwrap();
    println!(
        "\nreproducing property at q = {q:.5}: pairing = {paired:.12}, eval = {:.12}",
        u.eval(q)
    );

    // off-lattice kernels reproduce too, but do not sample to a spike
    let q = 0.3;
    let d_off = delta_off_grid(params, q);
    println!(
        "off-lattice q = {q}: pairing residual {:.2e}, but max off-peak sample {:.3}",
        (u.pairing(&d_off).unwrap() - u.eval(q)).norm(),
        to_samples(&d_off)
            .values()
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
            * params.eta()
    );

    // realness: on the paper lattice the kernel has an imaginary ripple of
    // amplitude 1/period from the unpaired corner frequency; the symmetric
    // lattice removes it
    let defect = d.max_imag_on_fine_grid(8);
    println!(
        "\nmax |Im delta_0| off-lattice: {defect:.6e} (1/period = {:.6e})",
        1.0 / params.period()
    );
    let sym = GridParams::with_kind(4, GridKind::Symmetric).unwrap();
    let d_sym = delta(sym, 0.0).unwrap();
    println!(
        "same diagnostic on the symmetric lattice: {:.2e}",
        d_sym.max_imag_on_fine_grid(8)
    );
}
