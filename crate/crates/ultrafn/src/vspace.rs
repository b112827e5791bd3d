//! Elements of the level-n trigonometric space: coefficient arrays over the
//! frequency lattice, with evaluation, arithmetic, derivative, position
//! operator, inner product, bilinear pairing, and integration.
//!
//! An element is u(x) = sum_l a_l exp(i k_l x) with k_l = l * freq_step and
//! l running over the lattice index range. Products of two elements leave
//! the space; they are kept exactly in an extended coefficient array and
//! only projected back on request.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{UfError, UfResult};
use crate::grid::{GridKind, GridParams};
use crate::levels::HyperScalar;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A trigonometric element of one level space.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigElement {
    params: GridParams,
    coeffs: Vec<Complex64>,
}

impl TrigElement {
    pub fn zero(params: GridParams) -> Self {
        TrigElement {
            params,
            coeffs: vec![ZERO; params.len()],
        }
    }

    pub fn from_coeffs(params: GridParams, coeffs: Vec<Complex64>) -> UfResult<Self> {
        if coeffs.len() != params.len() {
            return Err(UfError::LevelMismatch {
                left: format!("{} coefficients", coeffs.len()),
                right: format!("dimension {}", params.len()),
            });
        }
        Ok(TrigElement { params, coeffs })
    }

    pub fn params(&self) -> GridParams {
        self.params
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient of frequency index l.
    pub fn coeff(&self, l: i64) -> Complex64 {
        if l < self.params.l_min() || l > self.params.l_max() {
            ZERO
        } else {
            self.coeffs[self.params.slot(l)]
        }
    }

    pub fn set_coeff(&mut self, l: i64, value: Complex64) {
        let slot = self.params.slot(l);
        self.coeffs[slot] = value;
    }

    /// Zero the unpaired corner coefficient, if this grid has one.
    pub fn zero_corner(&mut self) {
        if let Some(slot) = self.params.corner_slot() {
            self.coeffs[slot] = ZERO;
        }
    }

    /// Evaluate at any real x by Horner summation in z = exp(i freq_step x).
    /// Periodic extension is automatic.
    pub fn eval(&self, x: f64) -> Complex64 {
        let theta = self.params.freq_step() * x;
        let z = Complex64::new(theta.cos(), theta.sin());
        let mut acc = ZERO;
        for a in self.coeffs.iter().rev() {
            acc = acc * z + a;
        }
        let lead = self.params.l_min() as f64 * theta;
        acc * Complex64::new(lead.cos(), lead.sin())
    }

    /// d/dx: multiply coefficient l by i k_l.
    pub fn derivative(&self) -> TrigElement {
        let step = self.params.freq_step();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(slot, a)| a * Complex64::new(0.0, self.params.index(slot) as f64 * step))
            .collect();
        TrigElement {
            params: self.params,
            coeffs,
        }
    }

    /// Integral over one period: period * a_0.
    pub fn integral(&self) -> Complex64 {
        self.coeff(0) * self.params.period()
    }

    /// Hermitian inner product (u|v) = period * sum a_l conj(b_l).
    pub fn inner(&self, other: &TrigElement) -> UfResult<Complex64> {
        self.params.check_same(&other.params)?;
        let s: Complex64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.params.period())
    }

    /// Bilinear pairing (no conjugate): the exact integral of the product,
    /// period * sum over paired frequencies of a_l b_{-l}. On the paper grid
    /// the corner frequency has no partner and drops out.
    pub fn pairing(&self, other: &TrigElement) -> UfResult<Complex64> {
        self.params.check_same(&other.params)?;
        let mut s = ZERO;
        for l in self.params.l_min()..=self.params.l_max() {
            if -l >= other.params.l_min() && -l <= other.params.l_max() {
                s += self.coeff(l) * other.coeff(-l);
            }
        }
        Ok(s * self.params.period())
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self.coeffs.iter().map(|a| a.norm_sqr()).sum();
        (s * self.params.period()).sqrt()
    }

    pub fn add(&self, other: &TrigElement) -> UfResult<TrigElement> {
        self.params.check_same(&other.params)?;
        Ok(TrigElement {
            params: self.params,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &TrigElement) -> UfResult<TrigElement> {
        self.params.check_same(&other.params)?;
        Ok(TrigElement {
            params: self.params,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> TrigElement {
        TrigElement {
            params: self.params,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn max_coeff_diff(&self, other: &TrigElement) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Largest |Im u(x)| over an `oversample`-times finer lattice. Reports
    /// the realness defect of nominally real elements such as delta kernels
    /// (amplitude 1/period on the paper grid, ~0 on the symmetric grid).
    pub fn max_imag_on_fine_grid(&self, oversample: usize) -> f64 {
        let fine = self.params.len() * oversample.max(1);
        let plan = crate::fft::plan(fine);
        let mut buf = vec![ZERO; fine];
        for (slot, a) in self.coeffs.iter().enumerate() {
            let l = self.params.index(slot);
            buf[l.rem_euclid(fine as i64) as usize] = *a;
        }
        let mut out = vec![ZERO; fine];
        plan.process(&buf, &mut out, true);
        out.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// CSV of the coefficient table: columns l, k, re, im.
    pub fn write_coeffs_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "l,k,re,im")?;
        for (slot, a) in self.coeffs.iter().enumerate() {
            let l = self.params.index(slot);
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e}",
                l,
                self.params.freq(l),
                a.re,
                a.im
            )?;
        }
        Ok(())
    }
}

/// The basis wave exp(i k x) for an on-lattice frequency k.
pub fn exp_wave(params: GridParams, k: f64) -> UfResult<TrigElement> {
    let tol = params.freq_step() * 1e-9;
    let l = params.freq_index_of(k, tol)?;
    Ok(exp_wave_index(params, l))
}

/// The basis wave with frequency index l (must be in range).
pub fn exp_wave_index(params: GridParams, l: i64) -> TrigElement {
    let mut u = TrigElement::zero(params);
    u.set_coeff(l, Complex64::new(1.0, 0.0));
    u
}

/// Multiplication by the grid coordinate inside the level space: sample,
/// scale each sample by its lattice point, resynthesize. The result is the
/// interpolant of x*u(x) from the lattice, which may differ from x*u(x)
/// off the lattice.
pub fn position_op(u: &TrigElement) -> TrigElement {
    let mut s = crate::delta::to_samples(u);
    let params = s.params();
    for (slot, v) in s.values_mut().iter_mut().enumerate() {
        *v *= params.point(params.index(slot));
    }
    crate::delta::from_samples(&s)
}

/// Values of an element (or any function) on the lattice of one level. Also
/// the home of nonlinear images such as delta^2 that leave the level space.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    params: GridParams,
    values: Vec<Complex64>,
}

impl GridSamples {
    pub fn new(params: GridParams, values: Vec<Complex64>) -> UfResult<Self> {
        if values.len() != params.len() {
            return Err(UfError::LevelMismatch {
                left: format!("{} samples", values.len()),
                right: format!("grid size {}", params.len()),
            });
        }
        Ok(GridSamples { params, values })
    }

    pub fn params(&self) -> GridParams {
        self.params
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Value at lattice index l.
    pub fn value_at(&self, l: i64) -> Complex64 {
        self.values[self.params.slot(l)]
    }

    /// The Riemann sum eta * sum of the samples; for elements of the level
    /// space this equals the integral.
    pub fn riemann_integral(&self) -> Complex64 {
        let s: Complex64 = self.values.iter().sum();
        s * self.params.eta()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// CSV with columns q, re, im.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "q,re,im")?;
        for (slot, v) in self.values.iter().enumerate() {
            let q = self.params.point(self.params.index(slot));
            writeln!(w, "{:.16e},{:.16e},{:.16e}", q, v.re, v.im)?;
        }
        Ok(())
    }
}

/// Principal-branch pointwise square root of the samples.
pub fn grid_sqrt(s: &GridSamples) -> GridSamples {
    GridSamples {
        params: s.params,
        values: s.values.iter().map(|z| z.sqrt()).collect(),
    }
}

/// Principal-branch pointwise power of the samples.
pub fn grid_pow(s: &GridSamples, exponent: f64) -> GridSamples {
    GridSamples {
        params: s.params,
        values: s.values.iter().map(|z| z.powf(exponent)).collect(),
    }
}

/// Exact product of two level elements: convolution of the coefficient
/// arrays. The frequencies run over the doubled index range, outside the
/// level space.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedElement {
    params: GridParams,
    l_lo: i64,
    coeffs: Vec<Complex64>,
}

impl ExtendedElement {
    pub fn params(&self) -> GridParams {
        self.params
    }

    pub fn l_lo(&self) -> i64 {
        self.l_lo
    }

    pub fn l_hi(&self) -> i64 {
        self.l_lo + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, l: i64) -> Complex64 {
        if l < self.l_lo || l > self.l_hi() {
            ZERO
        } else {
            self.coeffs[(l - self.l_lo) as usize]
        }
    }

    /// A level element viewed in the extended representation.
    pub fn from_trig(u: &TrigElement) -> ExtendedElement {
        ExtendedElement {
            params: u.params,
            l_lo: u.params.l_min(),
            coeffs: u.coeffs.clone(),
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let theta = self.params.freq_step() * x;
        let z = Complex64::new(theta.cos(), theta.sin());
        let mut acc = ZERO;
        for a in self.coeffs.iter().rev() {
            acc = acc * z + a;
        }
        let lead = self.l_lo as f64 * theta;
        acc * Complex64::new(lead.cos(), lead.sin())
    }

    /// Exact integral over one period: only the zero frequency survives.
    pub fn integral(&self) -> Complex64 {
        self.coeff(0) * self.params.period()
    }

    pub fn derivative(&self) -> ExtendedElement {
        let step = self.params.freq_step();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, a)| a * Complex64::new(0.0, (self.l_lo + j as i64) as f64 * step))
            .collect();
        ExtendedElement {
            params: self.params,
            l_lo: self.l_lo,
            coeffs,
        }
    }

    pub fn add(&self, other: &ExtendedElement) -> UfResult<ExtendedElement> {
        self.params.check_same(&other.params)?;
        let lo = self.l_lo.min(other.l_lo);
        let hi = self.l_hi().max(other.l_hi());
        let mut coeffs = vec![ZERO; (hi - lo + 1) as usize];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let l = lo + j as i64;
            *c = self.coeff(l) + other.coeff(l);
        }
        Ok(ExtendedElement {
            params: self.params,
            l_lo: lo,
            coeffs,
        })
    }

    pub fn max_coeff_diff(&self, other: &ExtendedElement) -> f64 {
        let lo = self.l_lo.min(other.l_lo);
        let hi = self.l_hi().max(other.l_hi());
        (lo..=hi)
            .map(|l| (self.coeff(l) - other.coeff(l)).norm())
            .fold(0.0, f64::max)
    }

    /// Orthogonal projection back onto the level space: truncation of the
    /// out-of-range frequencies.
    pub fn project_to_level(&self) -> TrigElement {
        let params = self.params;
        let coeffs = (params.l_min()..=params.l_max())
            .map(|l| self.coeff(l))
            .collect();
        TrigElement { params, coeffs }
    }
}

/// Exact pointwise product via coefficient convolution.
pub fn pointwise_product(u: &TrigElement, v: &TrigElement) -> UfResult<ExtendedElement> {
    u.params.check_same(&v.params)?;
    let n = u.coeffs.len();
    let mut coeffs = vec![ZERO; 2 * n - 1];
    for (i, a) in u.coeffs.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for (j, b) in v.coeffs.iter().enumerate() {
            coeffs[i + j] += a * b;
        }
    }
    Ok(ExtendedElement {
        params: u.params,
        l_lo: 2 * u.params.l_min(),
        coeffs,
    })
}

/// One level of a sigma-limit function: an element of the level space, or
/// bare lattice samples for functions outside it.
#[derive(Debug, Clone)]
pub enum LevelElement {
    Trig(TrigElement),
    Samples(GridSamples),
}

/// A level family of elements, the finite-side surrogate of a sigma-limit
/// function.
#[derive(Clone)]
pub struct UltraFunction {
    gen: Arc<dyn Fn(u32) -> UfResult<LevelElement> + Send + Sync>,
}

impl UltraFunction {
    pub fn new(gen: impl Fn(u32) -> UfResult<LevelElement> + Send + Sync + 'static) -> Self {
        UltraFunction { gen: Arc::new(gen) }
    }

    pub fn from_trig_fn(f: impl Fn(u32) -> UfResult<TrigElement> + Send + Sync + 'static) -> Self {
        UltraFunction::new(move |n| Ok(LevelElement::Trig(f(n)?)))
    }

    pub fn level(&self, n: u32) -> UfResult<LevelElement> {
        (self.gen)(n)
    }

    /// The value family at a fixed point. Sample-represented levels only
    /// carry lattice values, so x must lie on the lattice there.
    pub fn eval_family(&self, x: f64) -> HyperScalar {
        let gen = self.gen.clone();
        HyperScalar::new(move |n| match gen(n)? {
            LevelElement::Trig(u) => Ok(u.eval(x)),
            LevelElement::Samples(s) => {
                let l = s.params().index_of(x, s.params().eta() * 1e-9)?;
                Ok(s.value_at(l))
            }
        })
    }

    /// The integral family: exact integrals for elements of the level space,
    /// Riemann sums for bare samples.
    pub fn integral_family(&self) -> HyperScalar {
        let gen = self.gen.clone();
        HyperScalar::new(move |n| match gen(n)? {
            LevelElement::Trig(u) => Ok(u.integral()),
            LevelElement::Samples(s) => Ok(s.riemann_integral()),
        })
    }
}

// --- serialization -------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    n: u32,
    #[serde(default, skip_serializing_if = "is_paper")]
    grid: GridKind,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    dual: bool,
    coeffs: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct SamplesRepr {
    n: u32,
    #[serde(default, skip_serializing_if = "is_paper")]
    grid: GridKind,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    dual: bool,
    values: Vec<[f64; 2]>,
}

fn is_paper(k: &GridKind) -> bool {
    *k == GridKind::Paper
}

fn repr_params(n: u32, grid: GridKind, dual: bool) -> UfResult<GridParams> {
    let p = GridParams::with_kind(n, grid)?;
    Ok(if dual { p.dual() } else { p })
}

impl Serialize for TrigElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementRepr {
            n: self.params.n(),
            grid: self.params.kind(),
            dual: self.params.is_dual(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(d)?;
        let params = repr_params(repr.n, repr.grid, repr.dual).map_err(D::Error::custom)?;
        let coeffs = repr
            .coeffs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        TrigElement::from_coeffs(params, coeffs).map_err(D::Error::custom)
    }
}

impl Serialize for GridSamples {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SamplesRepr {
            n: self.params.n(),
            grid: self.params.kind(),
            dual: self.params.is_dual(),
            values: self.values.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridSamples {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SamplesRepr::deserialize(d)?;
        let params = repr_params(repr.n, repr.grid, repr.dual).map_err(D::Error::custom)?;
        let values = repr
            .values
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        GridSamples::new(params, values).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::{delta, to_samples};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_element(params: GridParams, seed: u64, corner_free: bool) -> TrigElement {
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

    fn p(n: u32) -> GridParams {
        GridParams::new(n).unwrap()
    }

    #[test]
    fn constant_evaluates_to_one_everywhere() {
        let u = exp_wave(p(4), 0.0).unwrap();
        let v = u.eval(0.37);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn unit_wave_at_beta_is_minus_one() {
        // k = eta, x = beta: k*x = eta*beta = pi for every level
        for n in [2u32, 4, 8] {
            let params = p(n);
            let u = exp_wave(params, params.eta()).unwrap();
            let v = u.eval(params.beta());
            assert!(
                (v - Complex64::new(-1.0, 0.0)).norm() < 1e-12,
                "n={n}, got {v}"
            );
        }
    }

    #[test]
    fn delta_peak_height() {
        let params = p(4);
        let d = delta(params, 0.0).unwrap();
        let expect = 4.0 / std::f64::consts::PI.sqrt(); // 1/eta_4 = 2.2568
        assert!((d.eval(0.0).re - expect).abs() < 1e-12);
        assert!((expect - 2.256_758_334_191_025).abs() < 1e-12);
    }

    #[test]
    fn exp_wave_examples() {
        let params = p(3);
        let one = exp_wave(params, 0.0).unwrap();
        assert_eq!(one.coeff(0), Complex64::new(1.0, 0.0));
        let w = exp_wave(params, params.eta()).unwrap();
        assert_eq!(w.coeff(1), Complex64::new(1.0, 0.0));
        assert!(matches!(
            exp_wave(params, params.beta()),
            Err(UfError::FrequencyNotOnGrid { .. })
        ));
    }

    #[test]
    fn derivative_is_eigen_on_waves() {
        let params = p(4);
        let k = 3.0 * params.eta();
        let u = exp_wave(params, k).unwrap();
        let du = u.derivative();
        let expect = u.scale(Complex64::new(0.0, k));
        assert!(du.max_coeff_diff(&expect) < 1e-15);
        let one = exp_wave(params, 0.0).unwrap();
        assert_eq!(one.derivative().max_coeff(), 0.0);
    }

    #[test]
    fn integral_of_derivative_vanishes() {
        let u = random_element(p(4), 7, false);
        assert_eq!(u.derivative().integral(), ZERO);
    }

    #[test]
    fn integral_examples() {
        let params = p(4);
        let one = exp_wave(params, 0.0).unwrap();
        let expect = 8.0 * std::f64::consts::PI.sqrt(); // 2*beta_4 = 14.1796...
        assert!((one.integral().re - expect).abs() < 1e-12);
        assert!((expect - 14.179630807244127).abs() < 1e-10);
        let w = exp_wave(params, 2.0 * params.eta()).unwrap();
        assert_eq!(w.integral(), ZERO);
        let d = delta(params, params.eta()).unwrap();
        assert!((d.integral().re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn inner_product_examples() {
        let params = p(4);
        let u = exp_wave(params, params.eta()).unwrap();
        let v = exp_wave(params, 2.0 * params.eta()).unwrap();
        let period = params.period();
        assert!((u.inner(&u).unwrap().re - period).abs() < 1e-12);
        assert_eq!(u.inner(&v).unwrap(), ZERO);
        let a = delta(params, 0.0).unwrap();
        let b = delta(params, params.eta()).unwrap();
        let inv_eta = 1.0 / params.eta();
        assert!((a.inner(&a).unwrap().re - inv_eta).abs() < 1e-10 * inv_eta);
        assert!(a.inner(&b).unwrap().norm() < 1e-10 * inv_eta);
    }

    #[test]
    fn inner_is_hermitian() {
        let u = random_element(p(4), 1, false);
        let v = random_element(p(4), 2, false);
        let a = u.inner(&v).unwrap();
        let b = v.inner(&u).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * u.norm() * v.norm());
    }

    #[test]
    fn level_mismatch_is_reported() {
        let u = TrigElement::zero(p(4));
        let v = TrigElement::zero(p(8));
        assert!(matches!(u.inner(&v), Err(UfError::LevelMismatch { .. })));
    }

    #[test]
    fn antisymmetry_of_derivative_pairing() {
        // exact at coefficient level for all elements: the corner cannot pair
        for seed in 0..5 {
            let u = random_element(p(4), 100 + seed, false);
            let v = random_element(p(4), 200 + seed, false);
            let lhs = u.derivative().pairing(&v).unwrap();
            let rhs = u.pairing(&v.derivative()).unwrap();
            let scale = u.norm() * v.norm();
            assert!((lhs + rhs).norm() <= 1e-12 * scale, "seed={seed}");
        }
    }

    #[test]
    fn quadrature_identity_for_corner_free_elements() {
        for n in [4u32, 8, 16] {
            let params = p(n);
            let u = random_element(params, n as u64, true);
            let v = random_element(params, 1000 + n as u64, true);
            // integral identity
            let riemann = to_samples(&u).riemann_integral();
            let exact = u.integral();
            assert!((riemann - exact).norm() <= 1e-10 * u.norm(), "n={n}");
            // product identity
            let su = to_samples(&u);
            let sv = to_samples(&v);
            let prod_riemann: Complex64 = su
                .values()
                .iter()
                .zip(sv.values())
                .map(|(a, b)| a * b)
                .sum::<Complex64>()
                * params.eta();
            let prod_exact = pointwise_product(&u, &v).unwrap().integral();
            assert!(
                (prod_riemann - prod_exact).norm() <= 1e-10 * u.norm() * v.norm(),
                "n={n}"
            );
        }
    }

    #[test]
    fn corner_mode_breaks_product_quadrature_on_paper_grid() {
        // u = v = corner wave: Riemann sum aliases the -2n^2 frequency onto 0
        let params = p(4);
        let u = exp_wave_index(params, params.l_min());
        let s = to_samples(&u);
        let riemann: Complex64 = s
            .values()
            .iter()
            .map(|a| a * a)
            .sum::<Complex64>()
            * params.eta();
        let exact = pointwise_product(&u, &u).unwrap().integral();
        assert_eq!(exact, ZERO);
        assert!((riemann.re - params.period()).abs() < 1e-10);
    }

    #[test]
    fn symmetric_grid_restores_product_quadrature() {
        let params = GridParams::with_kind(4, GridKind::Symmetric).unwrap();
        let u = random_element(params, 31, false);
        let v = random_element(params, 32, false);
        let su = to_samples(&u);
        let sv = to_samples(&v);
        let riemann: Complex64 = su
            .values()
            .iter()
            .zip(sv.values())
            .map(|(a, b)| a * b)
            .sum::<Complex64>()
            * params.eta();
        let exact = pointwise_product(&u, &v).unwrap().integral();
        assert!((riemann - exact).norm() <= 1e-10 * u.norm() * v.norm());
    }

    #[test]
    fn position_op_examples() {
        let params = p(4);
        let q = 2.0 * params.eta();
        let d = delta(params, q).unwrap();
        let xd = position_op(&d);
        assert!(xd.max_coeff_diff(&d.scale(Complex64::new(q, 0.0))) < 1e-12 / params.eta());

        let one = exp_wave(params, 0.0).unwrap();
        let xone = position_op(&one);
        for l in [-3i64, 0, 5] {
            let x = params.point(l);
            assert!((xone.eval(x).re - x).abs() < 1e-11, "l={l}");
        }
        // off the lattice the interpolant differs from x*u(x)
        let x = 0.4 * params.eta();
        assert!((xone.eval(x) - Complex64::new(x, 0.0)).norm() > 1e-4);
    }

    #[test]
    fn product_of_waves_adds_exponents() {
        let params = p(3);
        let u = exp_wave(params, 2.0 * params.eta()).unwrap();
        let v = exp_wave(params, 5.0 * params.eta()).unwrap();
        let w = pointwise_product(&u, &v).unwrap();
        assert!((w.coeff(7) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((w.eval(0.3) - u.eval(0.3) * v.eval(0.3)).norm() < 1e-12);
    }

    #[test]
    fn product_with_one_embeds() {
        let params = p(3);
        let one = exp_wave(params, 0.0).unwrap();
        let u = random_element(params, 5, false);
        let w = pointwise_product(&one, &u).unwrap();
        assert!(w.max_coeff_diff(&ExtendedElement::from_trig(&u)) < 1e-15);
        // truncating back to the level space recovers u exactly here
        assert!(w.project_to_level().max_coeff_diff(&u) < 1e-15);
    }

    #[test]
    fn projection_of_extended_product_truncates() {
        let params = p(2);
        let hi = exp_wave_index(params, 3);
        let w = pointwise_product(&hi, &hi).unwrap();
        // frequency 6 is outside the level range [-4, 3]
        assert!((w.coeff(6) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(w.project_to_level().max_coeff(), 0.0);
    }

    #[test]
    fn delta_squared_integral_on_paper_grid() {
        // the exact bilinear value carries the realness defect 1/period
        for n in [4u32, 8] {
            let params = p(n);
            let d = delta(params, 0.0).unwrap();
            let got = pointwise_product(&d, &d).unwrap().integral().re;
            let expect = 1.0 / params.eta() - 1.0 / params.period();
            assert!((got - expect).abs() < 1e-10 * expect, "n={n}");
        }
        // with the symmetric lattice the defect vanishes
        let params = GridParams::with_kind(4, GridKind::Symmetric).unwrap();
        let d = delta(params, 0.0).unwrap();
        let got = pointwise_product(&d, &d).unwrap().integral().re;
        let expect = 1.0 / params.eta();
        assert!((got - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn grid_power_examples() {
        let params = p(4);
        let d = to_samples(&delta(params, 0.0).unwrap());
        let sq = grid_pow(&d, 2.0);
        let expect = 16.0 / std::f64::consts::PI; // (4/sqrt(pi))^2 = 5.0930
        assert!((sq.value_at(0).re - expect).abs() < 1e-9);
        assert!((expect - 5.092958178940651).abs() < 1e-12);

        let ones = GridSamples::new(params, vec![Complex64::new(1.0, 0.0); params.len()]).unwrap();
        let r = grid_sqrt(&ones);
        assert!(r.values().iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));

        let rd = grid_sqrt(&d);
        assert!(rd.value_at(2).norm() < 1e-7); // sqrt of ~0 stays ~0
    }

    #[test]
    fn leibnitz_rule_in_extended_representation() {
        let u = random_element(p(4), 11, false);
        let v = random_element(p(4), 12, false);
        let lhs = pointwise_product(&u, &v).unwrap().derivative();
        let rhs = pointwise_product(&u.derivative(), &v)
            .unwrap()
            .add(&pointwise_product(&u, &v.derivative()).unwrap())
            .unwrap();
        let scale = u.norm() * v.norm() / p(4).eta();
        assert!(lhs.max_coeff_diff(&rhs) <= 1e-12 * scale);
    }

    #[test]
    fn linearity_is_exact() {
        let u = random_element(p(4), 21, false);
        let v = random_element(p(4), 22, false);
        let c = Complex64::new(0.7, -1.3);
        let lhs = u.scale(c).add(&v).unwrap().derivative();
        let rhs = u.derivative().scale(c).add(&v.derivative()).unwrap();
        assert!(lhs.max_coeff_diff(&rhs) < 1e-14 / p(4).eta());
        let li = u.scale(c).add(&v).unwrap().integral();
        let ri = u.integral() * c + v.integral();
        assert!((li - ri).norm() < 1e-12 * u.norm());
    }

    #[test]
    fn spectral_formula_reproduces_corner_free_elements() {
        // u(x) = (1/period) sum_k (pairing of u with exp(-ikt)) exp(ikx)
        let params = p(4);
        let u = random_element(params, 40, true);
        let mut rebuilt = TrigElement::zero(params);
        for l in params.l_min()..=params.l_max() {
            if -l > params.l_max() || -l < params.l_min() {
                continue; // corner frequency: exp(-ikt) leaves the space
            }
            let conj_wave = exp_wave_index(params, -l);
            let c = u.pairing(&conj_wave).unwrap() / params.period();
            rebuilt.set_coeff(l, c);
        }
        assert!(u.max_coeff_diff(&rebuilt) <= 1e-10 * u.max_coeff());
    }

    #[test]
    fn eval_agrees_with_fast_samples() {
        for n in [2u32, 4, 8, 32] {
            let params = p(n);
            let u = random_element(params, n as u64 + 55, false);
            let s = to_samples(&u);
            let mut worst = 0.0f64;
            for l in params.l_min()..=params.l_max() {
                let direct = u.eval(params.point(l));
                worst = worst.max((direct - s.value_at(l)).norm());
            }
            assert!(worst <= 1e-12 * u.norm(), "n={n} worst={worst}");
        }
    }

    #[test]
    fn hyperfinite_sum_commutes_with_integration() {
        let params = p(4);
        let members: Vec<TrigElement> =
            (0..5).map(|j| random_element(params, 300 + j, false)).collect();
        let sum_of_integrals: Complex64 = members.iter().map(|u| u.integral()).sum();
        let mut total = TrigElement::zero(params);
        for u in &members {
            total = total.add(u).unwrap();
        }
        assert!((total.integral() - sum_of_integrals).norm() < 1e-13 * total.norm().max(1.0));
    }

    #[test]
    fn ultrafunction_families() {
        let f = UltraFunction::from_trig_fn(|n| delta(GridParams::new(n)?, 0.0));
        let heights = f.eval_family(0.0);
        for n in [2u32, 4, 8] {
            let expect = n as f64 / std::f64::consts::PI.sqrt();
            assert!((heights.eval(n).unwrap().re - expect).abs() < 1e-10);
        }
        let ints = f.integral_family();
        assert!((ints.eval(4).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn serde_roundtrip() {
        let u = random_element(p(3), 77, false);
        let text = serde_json::to_string(&u).unwrap();
        assert!(text.starts_with("{\"n\":3,\"coeffs\":"));
        let back: TrigElement = serde_json::from_str(&text).unwrap();
        assert_eq!(u, back);

        let s = to_samples(&u);
        let text = serde_json::to_string(&s).unwrap();
        let back: GridSamples = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
    }

    proptest::proptest! {
        #[test]
        fn sample_conversion_round_trips(
            n in 1u32..5,
            symmetric in proptest::bool::ANY,
            seed in 0u64..500,
        ) {
            let kind = if symmetric { GridKind::Symmetric } else { GridKind::Paper };
            let params = GridParams::with_kind(n, kind).unwrap();
            let u = random_element(params, seed, false);
            let back = crate::delta::from_samples(&to_samples(&u));
            let err = back.max_coeff_diff(&u);
            proptest::prop_assert!(err <= 1e-12 * u.max_coeff().max(1e-6));
        }
    }

    #[test]
    fn samples_csv_format() {
        let params = p(1);
        let s = GridSamples::new(params, vec![ZERO; 2]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("q,re,im\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
