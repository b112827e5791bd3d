//! The hyperfinite Fourier transform as a unitary change of basis.
//!
//! For an element u of the level space, the transform samples are
//! u_hat(k) = (eta / sqrt(2 pi)) * sum over lattice x of u(x) exp(-i k x),
//! taken at every frequency k of the conjugate lattice. Because
//! k_l * x_m = 2 pi l m / N exactly, this is an order-N discrete Fourier
//! transform after the signed-to-cyclic index shift; the shift convention is
//! fixed here once and covered by round-trip tests. The sampled transform is
//! resynthesized as an element of the conjugate-lattice space.

use std::sync::Arc;

use num_complex::Complex64;

use crate::delta::{from_samples, to_samples};
use crate::fft::{self, Fft};
use crate::grid::GridParams;
use crate::vspace::{position_op, GridSamples, TrigElement};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn inv_sqrt_2pi() -> f64 {
    1.0 / (2.0 * std::f64::consts::PI).sqrt()
}

/// Cached transform data for one level.
pub struct FourierPlan {
    params: GridParams,
    fft: Arc<Fft>,
}

impl FourierPlan {
    pub fn new(params: GridParams) -> Self {
        FourierPlan {
            params,
            fft: fft::plan(params.len()),
        }
    }

    pub fn params(&self) -> GridParams {
        self.params
    }

    pub fn forward(&self, u: &TrigElement) -> TrigElement {
        fourier(u)
    }

    pub fn inverse(&self, v: &TrigElement) -> TrigElement {
        inverse_fourier(v)
    }

    pub fn size(&self) -> usize {
        self.fft.size()
    }
}

/// Cyclic DFT of signed-index data: out_l = sum_m in_m exp(-+ 2 pi i lm / N)
/// with both l and m running over the lattice index range.
fn dft_shifted(values: &[Complex64], params: GridParams, inverse: bool) -> Vec<Complex64> {
    let n = params.len();
    let plan = fft::plan(n);
    let mut buf = vec![ZERO; n];
    for (slot, v) in values.iter().enumerate() {
        buf[params.index(slot).rem_euclid(n as i64) as usize] = *v;
    }
    let mut out = vec![ZERO; n];
    plan.process(&buf, &mut out, inverse);
    (0..n)
        .map(|slot| out[params.index(slot).rem_euclid(n as i64) as usize])
        .collect()
}

/// Transform samples on the conjugate lattice, fast path.
pub fn fourier_samples(u: &TrigElement) -> GridSamples {
    let params = u.params();
    let s = to_samples(u);
    let scale = params.eta() * inv_sqrt_2pi();
    let spec: Vec<Complex64> = dft_shifted(s.values(), params, false)
        .into_iter()
        .map(|z| z * scale)
        .collect();
    GridSamples::new(params.dual(), spec).expect("dual grid has same size")
}

/// Reference transform by direct summation: element values from Horner
/// evaluation, then the O(N^2) sum with explicitly computed phases. Used to
/// validate the fast path.
pub fn fourier_samples_direct(u: &TrigElement) -> GridSamples {
    let params = u.params();
    let n = params.len();
    let scale = params.eta() * inv_sqrt_2pi();
    let samples: Vec<Complex64> = (params.l_min()..=params.l_max())
        .map(|m| u.eval(params.point(m)))
        .collect();
    let dual = params.dual();
    let values: Vec<Complex64> = (params.l_min()..=params.l_max())
        .map(|l| {
            let k = dual.point(l);
            let mut acc = ZERO;
            for (slot, s) in samples.iter().enumerate() {
                let x = params.point(params.index(slot));
                let angle = -k * x;
                acc += s * Complex64::new(angle.cos(), angle.sin());
            }
            acc * scale
        })
        .collect();
    debug_assert_eq!(values.len(), n);
    GridSamples::new(dual, values).expect("dual grid has same size")
}

/// The Fourier transform of a level element, as an element over the
/// conjugate lattice.
pub fn fourier(u: &TrigElement) -> TrigElement {
    from_samples(&fourier_samples(u))
}

/// Inverse transform; `inverse_fourier(fourier(u)) == u` up to rounding.
pub fn inverse_fourier(v: &TrigElement) -> TrigElement {
    let params = v.params();
    let s = to_samples(v);
    let scale = params.eta() * inv_sqrt_2pi();
    let spec: Vec<Complex64> = dft_shifted(s.values(), params, true)
        .into_iter()
        .map(|z| z * scale)
        .collect();
    from_samples(&GridSamples::new(params.dual(), spec).expect("dual grid has same size"))
}

/// Residuals of the derivative/position intertwining relations.
#[derive(Debug, Clone, Copy)]
pub struct IntertwiningReport {
    /// max-norm of F\[Du\] - i k F\[u\] over non-corner coefficients
    pub r1: f64,
    /// max-norm of F\[xu\] - i D F\[u\] over non-corner coefficients
    pub r2: f64,
    pub norm: f64,
}

/// Check F\[D_x u\](k) = i k u_hat(k) and F\[x u\](k) = i D_k u_hat(k).
///
/// The comparison zeroes the corner coefficient of the transformed sides:
/// on the paper grid that single mode aliases the sample at -beta and the
/// relations are only claimed on the corner-free subspace.
pub fn check_intertwining(u: &TrigElement) -> IntertwiningReport {
    let i = Complex64::new(0.0, 1.0);
    let fu = fourier(u);

    let mut a1 = fourier(&u.derivative());
    let mut b1 = position_op(&fu).scale(i);
    a1.zero_corner();
    b1.zero_corner();

    let mut a2 = fourier(&position_op(u));
    let mut b2 = fu.derivative().scale(i);
    a2.zero_corner();
    b2.zero_corner();

    IntertwiningReport {
        r1: a1.max_coeff_diff(&b1),
        r2: a2.max_coeff_diff(&b2),
        norm: u.norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::{delta, delta_at_index};
    use crate::grid::GridKind;
    use crate::vspace::exp_wave_index;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(n: u32) -> GridParams {
        GridParams::new(n).unwrap()
    }

    fn random_element(params: GridParams, seed: u64, corner_free: bool) -> TrigElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..params.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut u = TrigElement::from_coeffs(params, coeffs).unwrap();
        if corner_free {
            u.zero_corner();
        }
        u
    }

    #[test]
    fn transform_of_delta_is_flat_wave() {
        let params = p(4);
        let q = 3.0 * params.eta();
        let d = delta(params, q).unwrap();
        let s = fourier_samples(&d);
        let c = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        for l in [-16i64, -7, 0, 5, 15] {
            let k = s.params().point(l);
            let expect = Complex64::new((k * q).cos(), -(k * q).sin()) * c;
            assert!((s.value_at(l) - expect).norm() < 1e-12, "l={l}");
        }
    }

    #[test]
    fn transform_of_wave_is_scaled_delta() {
        let params = p(8);
        let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
        for lq in [-64i64, -9, 0, 17, 63] {
            let w = exp_wave_index(params, lq);
            let fw = fourier(&w);
            let expect = delta_at_index(params.dual(), lq).scale(Complex64::new(sqrt_2pi, 0.0));
            let tol = 1e-9 * sqrt_2pi / params.eta();
            assert!(fw.max_coeff_diff(&expect) <= tol, "lq={lq}");
        }
    }

    #[test]
    fn basis_exchange_trig_to_canonical() {
        // exp(ikx)/sqrt(period) maps to sqrt(eta) * delta_k
        let params = p(4);
        let lq = 5i64;
        let w = exp_wave_index(params, lq).scale(Complex64::new(
            1.0 / params.period().sqrt(),
            0.0,
        ));
        let fw = fourier(&w);
        let expect =
            delta_at_index(params.dual(), lq).scale(Complex64::new(params.eta().sqrt(), 0.0));
        assert!(fw.max_coeff_diff(&expect) <= 1e-10 * expect.max_coeff());
    }

    #[test]
    fn round_trips() {
        for kind in [GridKind::Paper, GridKind::Symmetric] {
            let params = GridParams::with_kind(6, kind).unwrap();
            let u = random_element(params, 3, false);
            let back = inverse_fourier(&fourier(&u));
            assert!(
                back.max_coeff_diff(&u) <= 1e-11 * u.max_coeff(),
                "{kind:?}"
            );
            let fwd = fourier(&inverse_fourier(&u));
            assert!(fwd.max_coeff_diff(&u) <= 1e-11 * u.max_coeff());
        }
    }

    #[test]
    fn inverse_of_delta_transform() {
        let params = p(4);
        let d = delta(params, 0.0).unwrap();
        let back = inverse_fourier(&fourier(&d));
        assert!(back.max_coeff_diff(&d) <= 1e-12 / params.eta());
    }

    #[test]
    fn inverse_of_zero_is_zero() {
        let z = TrigElement::zero(p(4));
        assert_eq!(inverse_fourier(&z).max_coeff(), 0.0);
    }

    #[test]
    fn parseval_identity() {
        for n in [4u32, 8] {
            let params = p(n);
            for seed in 0..10 {
                let u = random_element(params, 500 + seed, false);
                let v = random_element(params, 900 + seed, false);
                let lhs = u.inner(&v).unwrap();
                let rhs = fourier(&u).inner(&fourier(&v)).unwrap();
                assert!(
                    (lhs - rhs).norm() <= 1e-10 * u.norm() * v.norm(),
                    "n={n} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn fast_path_matches_direct_sum() {
        for n in [2u32, 3, 4] {
            for kind in [GridKind::Paper, GridKind::Symmetric] {
                let params = GridParams::with_kind(n, kind).unwrap();
                let u = random_element(params, n as u64 + 70, false);
                let fast = fourier_samples(&u);
                let direct = fourier_samples_direct(&u);
                let scale = direct.max_abs();
                let worst = fast
                    .values()
                    .iter()
                    .zip(direct.values())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(worst <= 1e-11 * scale, "n={n} {kind:?} worst={worst}");
            }
        }
    }

    #[test]
    fn intertwining_examples() {
        let params = p(4);

        let w = exp_wave_index(params, 6);
        let rep = check_intertwining(&w);
        assert!(rep.r1 <= 1e-10 * rep.norm && rep.r2 <= 1e-10 * rep.norm);

        let d = delta(params, 0.0).unwrap();
        let rep = check_intertwining(&d);
        assert!(rep.r1 <= 1e-9 * rep.norm && rep.r2 <= 1e-9 * rep.norm);

        let z = TrigElement::zero(params);
        let rep = check_intertwining(&z);
        assert_eq!((rep.r1, rep.r2), (0.0, 0.0));
    }

    #[test]
    fn intertwining_for_random_corner_free_elements() {
        for n in [4u32, 8] {
            for seed in 0..5 {
                let u = random_element(p(n), 40 + seed, true);
                let rep = check_intertwining(&u);
                assert!(
                    rep.r1 <= 1e-9 * rep.norm && rep.r2 <= 1e-9 * rep.norm,
                    "n={n} seed={seed} r1={} r2={}",
                    rep.r1,
                    rep.r2
                );
            }
        }
    }

    #[test]
    fn plan_reuse() {
        let plan = FourierPlan::new(p(4));
        let u = random_element(p(4), 8, false);
        let a = plan.forward(&u);
        let b = fourier(&u);
        assert_eq!(a.max_coeff_diff(&b), 0.0);
        assert!(plan.inverse(&a).max_coeff_diff(&u) <= 1e-11 * u.max_coeff());
        assert_eq!(plan.size(), 32);
        assert_eq!(plan.params(), p(4));
    }
}
