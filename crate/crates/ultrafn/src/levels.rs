//! Level families standing in for tempered hyperreal and hypercomplex
//! numbers: lazy per-level values, pointwise arithmetic, growth
//! classification, shadow (standard part) extraction, and infinitesimal
//! closeness.
//!
//! The non-constructive ultrafilter of the underlying theory is replaced by a
//! finite ladder of levels; "almost everywhere" becomes "at every level of
//! the configured ladder". Identities that hold level-wise are therefore
//! checked level-wise.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::error::{UfError, UfResult};

/// Strictly increasing list of levels used for classification and limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelLadder(Vec<u32>);

impl LevelLadder {
    pub fn new(levels: Vec<u32>) -> UfResult<Self> {
        if levels.is_empty() {
            return Err(UfError::InvalidLadder("ladder is empty".into()));
        }
        if levels[0] < 2 {
            return Err(UfError::InvalidLadder(format!(
                "levels must be >= 2, got {}",
                levels[0]
            )));
        }
        if levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(UfError::InvalidLadder(
                "levels must be strictly increasing".into(),
            ));
        }
        Ok(LevelLadder(levels))
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    pub fn top(&self) -> u32 {
        *self.0.last().expect("ladder nonempty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for LevelLadder {
    /// The default ladder {4, 8, 16, 32}; the top level has dimension 2048.
    fn default() -> Self {
        LevelLadder(vec![4, 8, 16, 32])
    }
}

type Generator = Arc<dyn Fn(u32) -> UfResult<Complex64> + Send + Sync>;

/// A level-indexed family of complex values. Evaluation is lazy and cached
/// per level; the generator must be deterministic.
#[derive(Clone)]
pub struct HyperScalar {
    gen: Generator,
    cache: Arc<Mutex<HashMap<u32, Complex64>>>,
}

impl std::fmt::Debug for HyperScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HyperScalar").finish_non_exhaustive()
    }
}

impl HyperScalar {
    pub fn new(gen: impl Fn(u32) -> UfResult<Complex64> + Send + Sync + 'static) -> Self {
        HyperScalar {
            gen: Arc::new(gen),
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn from_fn(f: impl Fn(u32) -> Complex64 + Send + Sync + 'static) -> Self {
        HyperScalar::new(move |n| Ok(f(n)))
    }

    pub fn from_real_fn(f: impl Fn(u32) -> f64 + Send + Sync + 'static) -> Self {
        HyperScalar::new(move |n| Ok(Complex64::new(f(n), 0.0)))
    }

    /// The embedding of a constant; reals embed as constant families.
    pub fn constant(c: Complex64) -> Self {
        HyperScalar::new(move |_| Ok(c))
    }

    pub fn constant_real(c: f64) -> Self {
        HyperScalar::constant(Complex64::new(c, 0.0))
    }

    pub fn eval(&self, n: u32) -> UfResult<Complex64> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(&n) {
            return Ok(*v);
        }
        let v = (self.gen)(n)?;
        self.cache.lock().expect("cache lock").insert(n, v);
        Ok(v)
    }

    pub fn add(&self, other: &HyperScalar) -> HyperScalar {
        let (a, b) = (self.gen.clone(), other.gen.clone());
        HyperScalar::new(move |n| Ok(a(n)? + b(n)?))
    }

    pub fn sub(&self, other: &HyperScalar) -> HyperScalar {
        let (a, b) = (self.gen.clone(), other.gen.clone());
        HyperScalar::new(move |n| Ok(a(n)? - b(n)?))
    }

    pub fn mul(&self, other: &HyperScalar) -> HyperScalar {
        let (a, b) = (self.gen.clone(), other.gen.clone());
        HyperScalar::new(move |n| Ok(a(n)? * b(n)?))
    }

    /// Pointwise division; evaluating at a level where the divisor vanishes
    /// reports DivisionByZeroAtLevel.
    pub fn div(&self, other: &HyperScalar) -> HyperScalar {
        let (a, b) = (self.gen.clone(), other.gen.clone());
        HyperScalar::new(move |n| {
            let d = b(n)?;
            if d.norm() == 0.0 {
                Err(UfError::DivisionByZeroAtLevel(n))
            } else {
                Ok(a(n)? / d)
            }
        })
    }
}

pub fn hyper_add(a: &HyperScalar, b: &HyperScalar) -> HyperScalar {
    a.add(b)
}

pub fn hyper_sub(a: &HyperScalar, b: &HyperScalar) -> HyperScalar {
    a.sub(b)
}

pub fn hyper_mul(a: &HyperScalar, b: &HyperScalar) -> HyperScalar {
    a.mul(b)
}

pub fn hyper_div(a: &HyperScalar, b: &HyperScalar) -> HyperScalar {
    a.div(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthTag {
    SlowlyIncreasing,
    RapidlyIncreasingPos,
    RapidlyIncreasingNeg,
    RapidlyDecreasing,
    Indeterminate,
}

/// Classification result: the tag plus the fitted log-log exponent.
#[derive(Debug, Clone, Copy)]
pub struct GrowthClass {
    pub tag: GrowthTag,
    /// Least-squares slope of log|h(n)| against log n over the ladder, or the
    /// last local slope for the rapid classes. NaN when no finite fit exists.
    pub witness: f64,
}

impl GrowthClass {
    fn indeterminate() -> Self {
        GrowthClass {
            tag: GrowthTag::Indeterminate,
            witness: f64::NAN,
        }
    }
}

/// Drift of the local log-log slope beyond which a family counts as rapidly
/// increasing or decreasing. One octave = one doubling of the level.
const DRIFT_PER_OCTAVE_CUT: f64 = 1.0;

/// Least-squares slope of y against x.
fn lsq_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / k;
    let ym = ys.iter().sum::<f64>() / k;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - xm) * (y - ym);
        den += (x - xm) * (x - xm);
    }
    num / den
}

fn consistent_real_sign(vals: &[Complex64]) -> Option<f64> {
    let mut sign = 0.0;
    for v in vals {
        if v.im.abs() > 1e-9 * (1.0 + v.re.abs()) {
            return None;
        }
        let s = if v.re > 0.0 {
            1.0
        } else if v.re < 0.0 {
            -1.0
        } else {
            return None;
        };
        if sign == 0.0 {
            sign = s;
        } else if sign != s {
            return None;
        }
    }
    Some(sign)
}

/// Fit the growth of |h(n)| over the ladder.
///
/// A bounded log-log slope gives SlowlyIncreasing with the slope as witness.
/// A slope that keeps drifting by more than one unit per octave marks a
/// rapidly increasing (sign-consistent real values) or rapidly decreasing
/// family. Ladders with fewer than three levels, vanishing or non-finite
/// values, and sign-inconsistent divergence all come back Indeterminate.
pub fn classify_growth(h: &HyperScalar, ladder: &LevelLadder) -> UfResult<GrowthClass> {
    let ns = ladder.levels();
    if ns.len() < 3 {
        return Ok(GrowthClass::indeterminate());
    }
    let mut vals = Vec::with_capacity(ns.len());
    for &n in ns {
        vals.push(h.eval(n)?);
    }
    if vals.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Ok(GrowthClass::indeterminate());
    }
    let mags: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
    if mags.iter().all(|&m| m == 0.0) {
        // identically zero along the ladder: collapses into the ideal
        return Ok(GrowthClass {
            tag: GrowthTag::RapidlyDecreasing,
            witness: f64::NEG_INFINITY,
        });
    }
    if mags.contains(&0.0) {
        return Ok(GrowthClass::indeterminate());
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = mags.iter().map(|m| m.ln()).collect();
    let slope = lsq_slope(&xs, &ys);

    // local slopes and their drift per octave
    let local: Vec<f64> = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
        .collect();
    let mut drifts = Vec::new();
    for i in 0..local.len() - 1 {
        let octaves = (xs[i + 2] - xs[i]) / (2.0 * std::f64::consts::LN_2);
        drifts.push((local[i + 1] - local[i]) / octaves);
    }
    let last_local = *local.last().expect(">= 2 local slopes");

    if drifts.iter().all(|&d| d > DRIFT_PER_OCTAVE_CUT) {
        // accelerating growth: faster than every power of n
        return Ok(match consistent_real_sign(&vals) {
            Some(s) if s > 0.0 => GrowthClass {
                tag: GrowthTag::RapidlyIncreasingPos,
                witness: last_local,
            },
            Some(_) => GrowthClass {
                tag: GrowthTag::RapidlyIncreasingNeg,
                witness: last_local,
            },
            None => GrowthClass::indeterminate(),
        });
    }
    if drifts.iter().all(|&d| d < -DRIFT_PER_OCTAVE_CUT) {
        // accelerating decay: below every n^{-k} eventually
        return Ok(GrowthClass {
            tag: GrowthTag::RapidlyDecreasing,
            witness: last_local,
        });
    }
    if drifts.iter().any(|&d| d.abs() > DRIFT_PER_OCTAVE_CUT) {
        return Ok(GrowthClass::indeterminate());
    }
    Ok(GrowthClass {
        tag: GrowthTag::SlowlyIncreasing,
        witness: slope,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShadowValue {
    Finite(Complex64),
    PlusInfinity,
    MinusInfinity,
    Indeterminate,
}

/// Shadow estimate: the value plus the magnitude of the last inter-level
/// difference that justified it.
#[derive(Debug, Clone, Copy)]
pub struct ShadowResult {
    pub value: ShadowValue,
    pub residual: f64,
}

fn divergence(vals: &[Complex64], ladder: &LevelLadder) -> Option<ShadowValue> {
    let mags: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
    if !mags.windows(2).all(|w| w[1] > w[0]) {
        return None;
    }
    if mags.contains(&0.0) {
        return None;
    }
    let xs: Vec<f64> = ladder.levels().iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = mags.iter().map(|m| m.ln()).collect();
    if lsq_slope(&xs, &ys) < 0.5 {
        return None;
    }
    match consistent_real_sign(vals) {
        Some(s) if s > 0.0 => Some(ShadowValue::PlusInfinity),
        Some(_) => Some(ShadowValue::MinusInfinity),
        None => Some(ShadowValue::Indeterminate),
    }
}

fn shadow_from_sequence(vals: &[Complex64], ladder: &LevelLadder, tol: f64) -> ShadowResult {
    let l = vals.len() - 1;
    let residual = (vals[l] - vals[l - 1]).norm();
    if residual <= tol {
        return ShadowResult {
            value: ShadowValue::Finite(vals[l]),
            residual,
        };
    }
    // No convergence within tol: an unboundedly growing family shadows to
    // +-infinity, anything else cannot be certified.
    if let Some(v) = divergence(vals, ladder) {
        return ShadowResult { value: v, residual };
    }
    ShadowResult {
        value: ShadowValue::Indeterminate,
        residual,
    }
}

/// Standard part by last-two-level agreement.
pub fn shadow(h: &HyperScalar, ladder: &LevelLadder, tol: f64) -> UfResult<ShadowResult> {
    assert!(tol > 0.0, "tol must be positive");
    let mut vals = Vec::with_capacity(ladder.len());
    for &n in ladder.levels() {
        vals.push(h.eval(n)?);
    }
    if vals.len() < 2 {
        // a single level cannot certify agreement
        return Ok(ShadowResult {
            value: ShadowValue::Indeterminate,
            residual: f64::NAN,
        });
    }
    Ok(shadow_from_sequence(&vals, ladder, tol))
}

/// Standard part with one step of Richardson extrapolation (assumes an
/// error term of order 1/n). Opt-in; the plain estimate makes no rate
/// assumption.
pub fn shadow_extrapolated(
    h: &HyperScalar,
    ladder: &LevelLadder,
    tol: f64,
) -> UfResult<ShadowResult> {
    assert!(tol > 0.0, "tol must be positive");
    let ns = ladder.levels();
    if ns.len() < 3 {
        return shadow(h, ladder, tol);
    }
    let mut vals = Vec::with_capacity(ns.len());
    for &n in ns {
        vals.push(h.eval(n)?);
    }
    if let Some(v) = divergence(&vals, ladder) {
        let l = vals.len() - 1;
        return Ok(ShadowResult {
            value: v,
            residual: (vals[l] - vals[l - 1]).norm(),
        });
    }
    let mut extrap = Vec::with_capacity(ns.len() - 1);
    for i in 1..ns.len() {
        let rho = ns[i] as f64 / ns[i - 1] as f64;
        extrap.push((vals[i] * rho - vals[i - 1]) / (rho - 1.0));
    }
    Ok(shadow_from_sequence(&extrap, ladder, tol))
}

/// Monad-membership predicate at ladder resolution: true when a - b is
/// certified infinitesimal, either by rapid decay of the difference or by
/// tolerance agreement with shrinking inter-level differences.
pub fn infinitely_close(
    a: &HyperScalar,
    b: &HyperScalar,
    ladder: &LevelLadder,
    tol: f64,
) -> UfResult<bool> {
    assert!(tol > 0.0, "tol must be positive");
    let d = a.sub(b);
    if classify_growth(&d, ladder)?.tag == GrowthTag::RapidlyDecreasing {
        return Ok(true);
    }
    let mut mags = Vec::with_capacity(ladder.len());
    for &n in ladder.levels() {
        mags.push(d.eval(n)?.norm());
    }
    let last = *mags.last().expect("ladder nonempty");
    Ok(last <= tol && mags.windows(2).all(|w| w[1] <= w[0]))
}
