//! Delta kernels, the canonical basis, and the conversions between the
//! trigonometric basis and lattice samples.
//!
//! The kernel concentrated at a lattice point q has coefficients
//! a_l = exp(-i k_l q) / period. Against the bilinear pairing it reproduces
//! point values of corner-free elements, it samples to a Kronecker spike of
//! height 1/eta, and sqrt(eta)-scaled kernels form an orthonormal family
//! under the Hermitian product. On the paper grid the kernel picks up an
//! imaginary part of amplitude 1/period from the unpaired corner frequency;
//! the symmetric grid removes it.

use num_complex::Complex64;

use crate::error::UfResult;
use crate::fft;
use crate::grid::GridParams;
use crate::vspace::{GridSamples, TrigElement};

/// The delta kernel at a lattice point. Off-lattice q is an error; see
/// [`delta_off_grid`] for the non-canonical synthesis.
pub fn delta(params: GridParams, q: f64) -> UfResult<TrigElement> {
    let l = params.index_of(q, params.eta() * 1e-9)?;
    Ok(delta_at_index(params, l))
}

/// The delta kernel at lattice index l.
pub fn delta_at_index(params: GridParams, l: i64) -> TrigElement {
    kernel(params, params.point(l))
}

/// Delta kernel synthesized at an arbitrary point. It satisfies the
/// reproducing property against corner-free elements but not the Kronecker
/// sampling property.
pub fn delta_off_grid(params: GridParams, q: f64) -> TrigElement {
    kernel(params, q)
}

fn kernel(params: GridParams, q: f64) -> TrigElement {
    let period = params.period();
    let coeffs = (params.l_min()..=params.l_max())
        .map(|l| {
            let angle = -params.freq(l) * q;
            Complex64::new(angle.cos(), angle.sin()) / period
        })
        .collect();
    TrigElement::from_coeffs(params, coeffs).expect("kernel length matches dimension")
}

/// Lattice samples of an element via one inverse fast transform.
pub fn to_samples(u: &TrigElement) -> GridSamples {
    let params = u.params();
    let n = params.len();
    let plan = fft::plan(n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (slot, a) in u.coeffs().iter().enumerate() {
        buf[params.index(slot).rem_euclid(n as i64) as usize] = *a;
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    plan.process(&buf, &mut out, true);
    let values = (0..n)
        .map(|slot| out[params.index(slot).rem_euclid(n as i64) as usize])
        .collect();
    GridSamples::new(params, values).expect("sample length matches grid")
}

/// The unique element of the level space with the given lattice samples:
/// a_l = (1/N) sum_q s(q) exp(-i k_l q), one forward fast transform.
pub fn from_samples(s: &GridSamples) -> TrigElement {
    let params = s.params();
    let n = params.len();
    let plan = fft::plan(n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (slot, v) in s.values().iter().enumerate() {
        buf[params.index(slot).rem_euclid(n as i64) as usize] = *v;
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    plan.process(&buf, &mut out, false);
    let scale = 1.0 / n as f64;
    let coeffs = (0..n)
        .map(|slot| out[params.index(slot).rem_euclid(n as i64) as usize] * scale)
        .collect();
    TrigElement::from_coeffs(params, coeffs).expect("coefficient length matches dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridKind;
    use crate::vspace::{exp_wave, exp_wave_index, TrigElement};
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
    fn kernel_coefficients_match_definition() {
        let params = p(4);
        let q = 3.0 * params.eta();
        let d = delta(params, q).unwrap();
        for l in params.l_min()..=params.l_max() {
            let angle = -(l as f64) * params.freq_step() * q;
            let expect = Complex64::new(angle.cos(), angle.sin()) / params.period();
            assert!((d.coeff(l) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn kronecker_sampling() {
        for kind in [GridKind::Paper, GridKind::Symmetric] {
            let params = GridParams::with_kind(4, kind).unwrap();
            let inv_eta = 1.0 / params.eta();
            let d = delta(params, 0.0).unwrap();
            for l in params.l_min()..=params.l_max() {
                let v = d.eval(params.point(l));
                let expect = if l == 0 { inv_eta } else { 0.0 };
                assert!(
                    (v.re - expect).abs() < 1e-10 * inv_eta && v.im.abs() < 1e-10 * inv_eta,
                    "{kind:?} l={l} v={v}"
                );
            }
        }
    }

    #[test]
    fn gram_matrix_is_identity_over_eta() {
        let params = p(3);
        let inv_eta = 1.0 / params.eta();
        let kernels: Vec<TrigElement> = (params.l_min()..=params.l_max())
            .map(|l| delta_at_index(params, l))
            .collect();
        for (i, a) in kernels.iter().enumerate() {
            for (j, b) in kernels.iter().enumerate() {
                let g = a.inner(b).unwrap();
                let expect = if i == j { inv_eta } else { 0.0 };
                assert!(
                    (g - Complex64::new(expect, 0.0)).norm() <= 1e-10 * inv_eta,
                    "i={i} j={j} g={g}"
                );
            }
        }
    }

    #[test]
    fn kernel_symmetry_on_lattice() {
        let params = p(4);
        let a = params.point(-5);
        let b = params.point(11);
        let da = delta(params, a).unwrap();
        let db = delta(params, b).unwrap();
        assert!((da.eval(b) - db.eval(a)).norm() < 1e-10 / params.eta());
    }

    #[test]
    fn norm_squared_equals_peak_value() {
        let params = p(8);
        let q = -2.0 * params.eta();
        let d = delta(params, q).unwrap();
        let n2 = d.inner(&d).unwrap().re;
        let peak = d.eval(q).re;
        assert!((n2 - peak).abs() < 1e-9);
        assert!((n2 - 1.0 / params.eta()).abs() < 1e-9);
    }

    #[test]
    fn reproducing_property_for_corner_free_elements() {
        let params = p(4);
        let v = random_element(params, 9, true);
        for l in [params.l_min(), -3, 0, 7, params.l_max()] {
            let q = params.point(l);
            let d = delta(params, q).unwrap();
            let paired = v.pairing(&d).unwrap();
            assert!((paired - v.eval(q)).norm() <= 1e-10 * v.norm(), "l={l}");
        }
    }

    #[test]
    fn off_grid_delta_reproduces_but_does_not_sample() {
        let params = p(4);
        let q = 0.3; // not a lattice point
        let d = delta_off_grid(params, q);
        let v = random_element(params, 10, true);
        assert!((v.pairing(&d).unwrap() - v.eval(q)).norm() <= 1e-10 * v.norm());
        // on-grid request at the same point errors instead
        assert!(delta(params, q).is_err());
    }

    #[test]
    fn canonical_basis_is_orthonormal() {
        let params = p(3);
        let scale = params.eta();
        for l in [params.l_min(), 0, 4] {
            for m in [params.l_min(), 0, 4] {
                let a = delta_at_index(params, l);
                let b = delta_at_index(params, m);
                let g = a.inner(&b).unwrap() * scale;
                let expect = if l == m { 1.0 } else { 0.0 };
                assert!((g - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sample_conversion_examples() {
        let params = p(4);
        let one = exp_wave(params, 0.0).unwrap();
        let s = to_samples(&one);
        assert!(s
            .values()
            .iter()
            .all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-13));

        let d = delta(params, 0.0).unwrap();
        let s = to_samples(&d);
        let inv_eta = 1.0 / params.eta();
        for l in params.l_min()..=params.l_max() {
            let expect = if l == 0 { inv_eta } else { 0.0 };
            assert!((s.value_at(l) - Complex64::new(expect, 0.0)).norm() < 1e-11 * inv_eta);
        }

        let k = 2.0 * params.eta();
        let w = exp_wave(params, k).unwrap();
        let s = to_samples(&w);
        for l in [-16i64, -1, 0, 3, 15] {
            let q = params.point(l);
            let expect = Complex64::new((k * q).cos(), (k * q).sin());
            assert!((s.value_at(l) - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn from_samples_examples() {
        let params = p(4);
        // round trip
        let u = random_element(params, 12, false);
        let back = from_samples(&to_samples(&u));
        assert!(u.max_coeff_diff(&back) <= 1e-12 * u.max_coeff());
        // zero samples give the zero element
        let z = from_samples(&GridSamples::new(params, vec![Complex64::new(0.0, 0.0); 32]).unwrap());
        assert_eq!(z.max_coeff(), 0.0);
        // a Kronecker spike of height 1/eta is the delta kernel
        let mut vals = vec![Complex64::new(0.0, 0.0); 32];
        let slot = params.slot(5);
        vals[slot] = Complex64::new(1.0 / params.eta(), 0.0);
        let d = from_samples(&GridSamples::new(params, vals).unwrap());
        let expect = delta_at_index(params, 5);
        assert!(d.max_coeff_diff(&expect) <= 1e-13 / params.period());
    }

    #[test]
    fn realness_defect_is_one_over_period_on_paper_grid() {
        let params = p(4);
        let d = delta(params, 0.0).unwrap();
        let defect = d.max_imag_on_fine_grid(8);
        let expect = 1.0 / params.period();
        assert!((defect - expect).abs() < 1e-6 * expect, "defect={defect}");

        let sym = GridParams::with_kind(4, GridKind::Symmetric).unwrap();
        let d = delta(sym, 0.0).unwrap();
        assert!(d.max_imag_on_fine_grid(8) < 1e-12 / sym.eta());
    }

    #[test]
    fn symmetric_grid_gives_full_reproducing_property() {
        // no corner: the pairing reproduces every element, including l = +-n^2
        let params = GridParams::with_kind(3, GridKind::Symmetric).unwrap();
        let v = random_element(params, 14, false);
        for l in [params.l_min(), 0, params.l_max()] {
            let q = params.point(l);
            let d = delta(params, q).unwrap();
            assert!((v.pairing(&d).unwrap() - v.eval(q)).norm() <= 1e-10 * v.norm());
        }
        // and the corner wave itself is reproduced
        let w = exp_wave_index(params, params.l_max());
        let q = params.point(2);
        let d = delta(params, q).unwrap();
        assert!((w.pairing(&d).unwrap() - w.eval(q)).norm() <= 1e-10 * w.norm());
    }
}
