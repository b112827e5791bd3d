//! Projection of continuous slowly increasing functions onto the level
//! spaces, its extension to tempered distributions, pairings, and
//! distributional Fourier transforms.
//!
//! The projection coefficients are c_k = integral over one period of
//! f(y) exp(-i k y) dy for every lattice frequency k, computed by uniform
//! oversampling and one fast transform, refined by doubling the sampling
//! rate until the coefficient vector stops moving. A distribution enters as
//! an explicit pair (m, f) with T = D^m f; its projection is the m-th
//! derivative of the projection of f.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ExprError, UfError, UfResult};
use crate::expr::{parse, FuncExpr};
use crate::fft;
use crate::grid::{GridKind, GridParams};
use crate::vspace::{GridSamples, TrigElement};

/// A user-supplied continuous function with a declared growth order k,
/// claiming |f(x)| <= C + |x|^k.
#[derive(Debug, Clone)]
pub struct SlowFunction {
    src: String,
    expr: FuncExpr,
    pub declared_order: u32,
}

impl SlowFunction {
    pub fn parse_src(src: &str, declared_order: u32) -> Result<Self, ExprError> {
        let expr = parse(src)?;
        Ok(SlowFunction {
            src: src.to_string(),
            expr,
            declared_order,
        })
    }

    pub fn from_expr(expr: FuncExpr, declared_order: u32) -> Self {
        SlowFunction {
            src: expr.to_string(),
            expr,
            declared_order,
        }
    }

    pub fn src(&self) -> &str {
        &self.src
    }

    pub fn expr(&self) -> &FuncExpr {
        &self.expr
    }

    pub fn eval(&self, x: f64) -> UfResult<Complex64> {
        self.expr
            .eval(x)
            .map_err(|source| UfError::EvaluationFailure { x, source })
    }

    /// Symbolic derivative with the same declared order.
    pub fn derivative(&self) -> UfResult<SlowFunction> {
        let d = self.expr.derivative()?;
        Ok(SlowFunction::from_expr(d, self.declared_order))
    }
}

/// A tempered distribution in Schwartz form T = D^m f.
#[derive(Debug, Clone)]
pub struct DistributionSpec {
    pub order: u32,
    pub base: SlowFunction,
    pub label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct DistributionRepr {
    order: u32,
    base: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default = "default_base_order", skip_serializing_if = "is_default_base_order")]
    base_order: u32,
}

fn default_base_order() -> u32 {
    3
}

fn is_default_base_order(k: &u32) -> bool {
    *k == default_base_order()
}

impl Serialize for DistributionSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DistributionRepr {
            order: self.order,
            base: self.base.src.clone(),
            label: self.label.clone(),
            base_order: self.base.declared_order,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DistributionSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = DistributionRepr::deserialize(d)?;
        let base = SlowFunction::parse_src(&repr.base, repr.base_order)
            .map_err(serde::de::Error::custom)?;
        Ok(DistributionSpec {
            order: repr.order,
            base,
            label: repr.label,
        })
    }
}

/// Built-in Schwartz representations. The ramp x+ = max(0, x) carries the
/// Dirac family: D^2 x+ = delta, D x+ = Heaviside; D |x| = sign.
pub fn catalog(name: &str) -> UfResult<DistributionSpec> {
    let (order, base, base_order) = match name {
        "dirac" => (2, "ramp(x)", 1),
        "heaviside" => (1, "ramp(x)", 1),
        "sign" => (1, "abs(x)", 1),
        "delta_prime" => (3, "ramp(x)", 1),
        _ => return Err(UfError::UnknownCatalogEntry(name.to_string())),
    };
    Ok(DistributionSpec {
        order,
        base: SlowFunction::parse_src(base, base_order).expect("catalog entries parse"),
        label: Some(name.to_string()),
    })
}

pub const CATALOG_NAMES: [&str; 4] = ["dirac", "heaviside", "sign", "delta_prime"];

/// Oversampled-quadrature settings for the projection coefficients.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Initial samples per lattice cell.
    pub oversampling: u32,
    /// Relative max-norm change between refinements at which to stop.
    pub refine_tol: f64,
    /// Number of times the sampling rate may double.
    pub max_doublings: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            oversampling: 8,
            refine_tol: 1e-10,
            max_doublings: 6,
        }
    }
}

/// Non-fatal findings attached to projection results.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjWarning {
    /// Refinement hit max_doublings with the coefficients still moving.
    RefinementExhausted { level: u32, last_change: f64 },
    /// Test function is not negligible at the period boundary.
    TailMagnitude { level: u32, ratio: f64 },
    /// Sampled growth exceeds the declared order across the ladder.
    GrowthBound { declared_order: u32, ratio: f64 },
}

impl std::fmt::Display for ProjWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProjWarning::RefinementExhausted { level, last_change } => write!(
                f,
                "quadrature refinement exhausted at level {level}; last relative change {last_change:.3e}"
            ),
            ProjWarning::TailMagnitude { level, ratio } => write!(
                f,
                "test function is not small at the boundary of level {level} (|phi(beta)|/max = {ratio:.3e})"
            ),
            ProjWarning::GrowthBound {
                declared_order,
                ratio,
            } => write!(
                f,
                "sampled growth exceeds declared order {declared_order} (bound ratio {ratio:.3})"
            ),
        }
    }
}

/// Midpoint sampling: cells of width h centered away from the period seam,
/// so functions with a seam jump (ramp, the sawtooth) or a kink at 0 are
/// never sampled on the singularity and the alias error stays second order.
fn sample_uniform(f: &SlowFunction, params: GridParams, count: usize) -> UfResult<Vec<Complex64>> {
    let period = params.period();
    let h = period / count as f64;
    let start = -period / 2.0;
    (0..count)
        .map(|p| f.eval(start + (p as f64 + 0.5) * h))
        .collect()
}

fn coefficients_at_rate(
    f: &SlowFunction,
    params: GridParams,
    m: usize,
) -> UfResult<Vec<Complex64>> {
    let n = params.len();
    let count = m * n;
    let samples = sample_uniform(f, params, count)?;
    let plan = fft::plan(count);
    let spec = plan.forward(&samples);
    let h = params.period() / count as f64;
    let coeffs = (params.l_min()..=params.l_max())
        .map(|l| {
            // phases from the -period/2 start and the half-cell offset
            let sign = if l.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let angle = -std::f64::consts::PI * l as f64 / count as f64;
            let twiddle = Complex64::new(angle.cos(), angle.sin()) * (h * sign);
            spec[l.rem_euclid(count as i64) as usize] * twiddle
        })
        .collect();
    Ok(coeffs)
}

/// The projection coefficients c_k for every lattice frequency, plus any
/// refinement warning.
pub fn trig_coefficients(
    f: &SlowFunction,
    params: GridParams,
    cfg: &QuadratureConfig,
) -> UfResult<(Vec<Complex64>, Vec<ProjWarning>)> {
    let mut m = cfg.oversampling.max(2) as usize;
    let mut prev = coefficients_at_rate(f, params, m)?;
    let mut warnings = Vec::new();
    for _ in 0..cfg.max_doublings {
        m *= 2;
        let next = coefficients_at_rate(f, params, m)?;
        let scale = next.iter().map(|c| c.norm()).fold(f64::MIN_POSITIVE, f64::max);
        let change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if change <= cfg.refine_tol * scale {
            return Ok((next, warnings));
        }
        prev = next;
    }
    let scale = prev.iter().map(|c| c.norm()).fold(f64::MIN_POSITIVE, f64::max);
    let half = coefficients_at_rate(f, params, m / 2)?;
    let last_change = prev
        .iter()
        .zip(&half)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale;
    warnings.push(ProjWarning::RefinementExhausted {
        level: params.n(),
        last_change,
    });
    Ok((prev, warnings))
}

/// The orthogonal projection of f onto the level space: a_k = c_k / period.
pub fn project_function(
    f: &SlowFunction,
    params: GridParams,
    cfg: &QuadratureConfig,
) -> UfResult<(TrigElement, Vec<ProjWarning>)> {
    let (coeffs, warnings) = trig_coefficients(f, params, cfg)?;
    let period = params.period();
    let scaled = coeffs.into_iter().map(|c| c / period).collect();
    Ok((TrigElement::from_coeffs(params, scaled)?, warnings))
}

/// Projection of T = D^m f: the m-th derivative of the projection of f.
pub fn project_distribution(
    t: &DistributionSpec,
    params: GridParams,
    cfg: &QuadratureConfig,
) -> UfResult<(TrigElement, Vec<ProjWarning>)> {
    let (mut u, warnings) = project_function(&t.base, params, cfg)?;
    for _ in 0..t.order {
        u = u.derivative();
    }
    Ok((u, warnings))
}

fn tail_warning(phi: &SlowFunction, params: GridParams) -> UfResult<Option<ProjWarning>> {
    let half = params.period() / 2.0;
    let mut max_abs = 0.0f64;
    for p in 0..=256 {
        let x = -half + p as f64 * (2.0 * half / 256.0);
        max_abs = max_abs.max(phi.eval(x)?.norm());
    }
    let edge = phi.eval(-half)?.norm().max(phi.eval(half)?.norm());
    if max_abs > 0.0 && edge > 1e-12 * max_abs {
        Ok(Some(ProjWarning::TailMagnitude {
            level: params.n(),
            ratio: edge / max_abs,
        }))
    } else {
        Ok(None)
    }
}

/// The pairing integral of T and a (rapidly decreasing) test function:
/// the exact bilinear integral of the two projections, computed from
/// coefficients. Converges on <T, phi> as the level grows.
pub fn pair(
    t: &DistributionSpec,
    phi: &SlowFunction,
    params: GridParams,
    cfg: &QuadratureConfig,
) -> UfResult<(Complex64, Vec<ProjWarning>)> {
    let (tu, mut warnings) = project_distribution(t, params, cfg)?;
    let (pu, w2) = project_function(phi, params, cfg)?;
    warnings.extend(w2);
    if let Some(w) = tail_warning(phi, params)? {
        warnings.push(w);
    }
    Ok((tu.pairing(&pu)?, warnings))
}

/// The distributional Fourier transform sampled on the frequency lattice:
/// F\[T\](k) = (1/sqrt(2 pi)) * integral of T's projection against exp(-ikx),
/// which reduces to (period/sqrt(2 pi)) * a_k of the projection. This is the
/// same kernel as the element-level transform, so the transform of the wave
/// exp(iqx) spikes at k = +q.
pub fn distributional_fourier(
    t: &DistributionSpec,
    params: GridParams,
    cfg: &QuadratureConfig,
) -> UfResult<(GridSamples, Vec<ProjWarning>)> {
    let (tu, warnings) = project_distribution(t, params, cfg)?;
    let scale = params.period() / (2.0 * std::f64::consts::PI).sqrt();
    let values = (params.l_min()..=params.l_max())
        .map(|l| tu.coeff(l) * scale)
        .collect();
    Ok((GridSamples::new(params.dual(), values)?, warnings))
}

/// Both sides of the integral identity for rapidly decreasing f: the exact
/// integral of the projection, and adaptive quadrature of f itself over a
/// truncated line.
#[derive(Debug, Clone, Copy)]
pub struct IntegralCheck {
    /// Integral of the projected element (period * a_0).
    pub projected: Complex64,
    /// Adaptive Simpson value of the integral of f over [-bound, bound].
    pub quadrature: Complex64,
    pub gap: f64,
    /// Truncation bound actually used.
    pub bound: f64,
    /// |f(-bound)| + |f(bound)|, a crude tail indicator.
    pub tail_magnitude: f64,
}

pub fn integral_check(
    f: &SlowFunction,
    params: GridParams,
    cfg: &QuadratureConfig,
) -> UfResult<(IntegralCheck, Vec<ProjWarning>)> {
    let (u, warnings) = project_function(f, params, cfg)?;
    let projected = u.integral();
    let bound = (params.period() / 2.0).max(24.0);
    let quadrature = adaptive_simpson(&|x| f.eval(x), -bound, bound, 1e-12)?;
    let tail_magnitude = f.eval(-bound)?.norm() + f.eval(bound)?.norm();
    Ok((
        IntegralCheck {
            projected,
            quadrature,
            gap: (projected - quadrature).norm(),
            bound,
            tail_magnitude,
        },
        warnings,
    ))
}

/// Adaptive Simpson quadrature for complex-valued integrands.
pub fn adaptive_simpson(
    f: &dyn Fn(f64) -> UfResult<Complex64>,
    a: f64,
    b: f64,
    tol: f64,
) -> UfResult<Complex64> {
    fn simpson(a: f64, fa: Complex64, b: f64, fb: Complex64, fm: Complex64) -> Complex64 {
        (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> UfResult<Complex64>,
        a: f64,
        fa: Complex64,
        b: f64,
        fb: Complex64,
        m: f64,
        fm: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> UfResult<Complex64> {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        let l = rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)?;
        let r = rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)?;
        Ok(l + r)
    }

    let m = 0.5 * (a + b);
    let (fa, fb, fm) = (f(a)?, f(b)?, f(m)?);
    let whole = simpson(a, fa, b, fb, fm);
    rec(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// Sampled growth validation over a ladder of levels: the maximum of
/// |f(q)| / (1 + |q|^k) should stay bounded as the level grows. Returns a
/// warning when the bound at the top level clearly exceeds the bound at the
/// bottom one.
pub fn validate_growth(
    f: &SlowFunction,
    levels: &[u32],
    kind: GridKind,
) -> UfResult<Option<ProjWarning>> {
    let mut bounds = Vec::with_capacity(levels.len());
    for &n in levels {
        let params = GridParams::with_kind(n, kind)?;
        let mut worst = 0.0f64;
        for l in params.l_min()..=params.l_max() {
            let q = params.point(l);
            let denom = 1.0 + q.abs().powi(f.declared_order as i32);
            worst = worst.max(f.eval(q)?.norm() / denom);
        }
        bounds.push(worst);
    }
    let (first, last) = (bounds[0], bounds[bounds.len() - 1]);
    if last > 2.0 * first + 1e-9 {
        Ok(Some(ProjWarning::GrowthBound {
            declared_order: f.declared_order,
            ratio: if first > 0.0 { last / first } else { f64::INFINITY },
        }))
    } else {
        Ok(None)
    }
}
