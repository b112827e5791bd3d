//! The hyperfinite Fourier transform: basis exchange, unitarity, the
//! derivative/position intertwining relations, and the fast path against
//! the direct quadratic sum.
//!
//! ```bash
//! cargo run --example fourier_unitarity
//! ```

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ultrafn::{
    check_intertwining, delta, delta_at_index, exp_wave_index, fourier, fourier_samples,
    fourier_samples_direct, inverse_fourier, GridParams, TrigElement,
};

fn random_element(params: GridParams, seed: u64) -> TrigElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..params.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    TrigElement::from_coeffs(params, coeffs).unwrap()
}

fn main() {
    let params = GridParams::new(8).unwrap();
    let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();

    // F[exp(iqx)] = sqrt(2 pi) delta_q: trigonometric basis -> canonical basis
    let lq = 17i64;
    let w = exp_wave_index(params, lq);
    let fw = fourier(&w);
    let expect = delta_at_index(params.dual(), lq).scale(Complex64::new(sqrt_2pi, 0.0));
    println!(
        "basis exchange: ||F[wave] - sqrt(2pi) delta||_max = {:.2e} (peak {:.4})",
        fw.max_coeff_diff(&expect),
        sqrt_2pi / params.eta()
    );

    // F[delta_q](k) = exp(-ikq)/sqrt(2 pi): constant modulus across k
    let q = params.point(-9);
    let fd = fourier_samples(&delta(params, q).unwrap());
    let flat = fd
        .values()
        .iter()
        .map(|v| (v.norm() - 1.0 / sqrt_2pi).abs())
        .fold(0.0, f64::max);
    println!("kernel transform modulus deviation from 1/sqrt(2pi): {flat:.2e}");

    // unitarity
    let u = random_element(params, 1);
    let v = random_element(params, 2);
    let lhs = u.inner(&v).unwrap();
    let rhs = fourier(&u).inner(&fourier(&v)).unwrap();
    println!(
        "parseval: (u|v) = {lhs:.6}, (Fu|Fv) = {rhs:.6}, diff {:.2e}",
        (lhs - rhs).norm()
    );
    let back = inverse_fourier(&fourier(&u));
    println!("round trip max coefficient error: {:.2e}", back.max_coeff_diff(&u));

    // intertwining: F[Du] = i k F[u] and F[xu] = i D F[u]
    let mut cf = random_element(params, 3);
    cf.zero_corner();
    let rep = check_intertwining(&cf);
    println!(
        "intertwining residuals: r1 = {:.2e}, r2 = {:.2e} (||u|| = {:.3})",
        rep.r1, rep.r2, rep.norm
    );

    // fast transform against the direct O(N^2) sum at small levels
    for n in [2u32, 4] {
        let p = GridParams::new(n).unwrap();
        let u = random_element(p, 40 + n as u64);
        let fast = fourier_samples(&u);
        let direct = fourier_samples_direct(&u);
        let err = fast
            .values()
            .iter()
            .zip(direct.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        println!("fast vs direct at n = {n}: max diff {err:.2e}");
    }
}
