//! The level-n lattice, its constants, and hyperfinite index sets and sums.
//!
//! Level n carries the spacing `eta = sqrt(pi)/n` and the half-width
//! `beta = n*sqrt(pi)`, so `beta * eta = pi`. The default ("paper") lattice
//! holds the 2n^2 points `l*eta` for `l = -n^2 .. n^2-1`; the left endpoint
//! `-beta` is included and the right endpoint excluded, which leaves the
//! single frequency `l = -n^2` without a mirror partner (the "corner mode").
//! The symmetric variant adds the point `+n^2*eta` and treats the lattice as
//! one period of length `(2n^2+1)*eta`, which removes the corner mode at the
//! cost of a slightly different fundamental frequency.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{UfError, UfResult};
use crate::levels::HyperScalar;

/// Lattice variant: the asymmetric 2n^2-point lattice, or the symmetric
/// (2n^2+1)-point lattice that includes both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    #[default]
    Paper,
    Symmetric,
}

/// Level constants plus the index range of the lattice.
///
/// `dual` marks the frequency-side lattice produced by the Fourier transform.
/// On the paper grid the lattice is self-dual (`eta == freq_step`), so the
/// flag only matters for the symmetric variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridParams {
    n: u32,
    kind: GridKind,
    dual: bool,
}

impl GridParams {
    /// Paper-grid parameters for level n.
    pub fn new(n: u32) -> UfResult<Self> {
        Self::with_kind(n, GridKind::Paper)
    }

    pub fn with_kind(n: u32, kind: GridKind) -> UfResult<Self> {
        if n == 0 {
            return Err(UfError::InvalidLevel(n));
        }
        Ok(GridParams {
            n,
            kind,
            dual: false,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Number of lattice points (and the dimension of the level space).
    pub fn len(&self) -> usize {
        let n2 = (self.n as usize) * (self.n as usize);
        match self.kind {
            GridKind::Paper => 2 * n2,
            GridKind::Symmetric => 2 * n2 + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// beta = n * sqrt(pi).
    pub fn beta(&self) -> f64 {
        self.n as f64 * std::f64::consts::PI.sqrt()
    }

    fn base_step(&self) -> f64 {
        std::f64::consts::PI.sqrt() / self.n as f64
    }

    fn base_freq_step(&self) -> f64 {
        match self.kind {
            GridKind::Paper => self.base_step(),
            GridKind::Symmetric => {
                2.0 * std::f64::consts::PI / (self.len() as f64 * self.base_step())
            }
        }
    }

    /// Lattice spacing of this grid (eta = sqrt(pi)/n on the primal grid).
    pub fn eta(&self) -> f64 {
        if self.dual {
            self.base_freq_step()
        } else {
            self.base_step()
        }
    }

    /// Spacing of the conjugate (frequency) lattice. Equal to `eta` on the
    /// paper grid.
    pub fn freq_step(&self) -> f64 {
        if self.dual {
            self.base_step()
        } else {
            self.base_freq_step()
        }
    }

    /// Length of one period, `len * eta`. On the paper grid this is 2*beta.
    pub fn period(&self) -> f64 {
        self.len() as f64 * self.eta()
    }

    /// Smallest lattice index, always -n^2.
    pub fn l_min(&self) -> i64 {
        -((self.n as i64) * (self.n as i64))
    }

    /// Largest lattice index: n^2 - 1 on the paper grid, n^2 on the symmetric.
    pub fn l_max(&self) -> i64 {
        let n2 = (self.n as i64) * (self.n as i64);
        match self.kind {
            GridKind::Paper => n2 - 1,
            GridKind::Symmetric => n2,
        }
    }

    /// Coefficient slot of the unpaired corner frequency, if the grid has one.
    pub fn corner_slot(&self) -> Option<usize> {
        match self.kind {
            GridKind::Paper => Some(0),
            GridKind::Symmetric => None,
        }
    }

    /// The lattice point l * eta.
    pub fn point(&self, l: i64) -> f64 {
        l as f64 * self.eta()
    }

    /// The frequency l * freq_step.
    pub fn freq(&self, l: i64) -> f64 {
        l as f64 * self.freq_step()
    }

    pub fn slot(&self, l: i64) -> usize {
        debug_assert!(l >= self.l_min() && l <= self.l_max());
        (l - self.l_min()) as usize
    }

    pub fn index(&self, slot: usize) -> i64 {
        self.l_min() + slot as i64
    }

    /// Parameters of the conjugate lattice the Fourier transform maps onto.
    pub fn dual(&self) -> GridParams {
        match self.kind {
            GridKind::Paper => *self,
            GridKind::Symmetric => GridParams {
                dual: !self.dual,
                ..*self
            },
        }
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    /// Nearest lattice index to q, or NotOnGrid if no point lies within tol.
    pub fn index_of(&self, q: f64, tol: f64) -> UfResult<i64> {
        let step = self.eta();
        let l = (q / step).round() as i64;
        if (q - l as f64 * step).abs() <= tol && l >= self.l_min() && l <= self.l_max() {
            Ok(l)
        } else {
            Err(UfError::NotOnGrid {
                q,
                spacing: step,
                tol,
            })
        }
    }

    /// Nearest frequency index to k, or FrequencyNotOnGrid.
    pub fn freq_index_of(&self, k: f64, tol: f64) -> UfResult<i64> {
        let step = self.freq_step();
        let l = (k / step).round() as i64;
        if (k - l as f64 * step).abs() <= tol && l >= self.l_min() && l <= self.l_max() {
            Ok(l)
        } else {
            Err(UfError::FrequencyNotOnGrid { k, spacing: step })
        }
    }

    pub(crate) fn check_same(&self, other: &GridParams) -> UfResult<()> {
        if self == other {
            Ok(())
        } else {
            Err(UfError::LevelMismatch {
                left: format!("{self:?}"),
                right: format!("{other:?}"),
            })
        }
    }
}

/// The materialized lattice of one level.
#[derive(Debug, Clone)]
pub struct SigmaGrid {
    pub params: GridParams,
    pub points: Vec<f64>,
}

impl SigmaGrid {
    pub fn new(params: GridParams) -> Self {
        let points = (params.l_min()..=params.l_max())
            .map(|l| params.point(l))
            .collect();
        SigmaGrid { params, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, q: f64, tol: f64) -> UfResult<i64> {
        self.params.index_of(q, tol)
    }

    /// CSV export with columns l, q.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "l,q")?;
        for (slot, q) in self.points.iter().enumerate() {
            writeln!(w, "{},{:.16e}", self.params.index(slot), q)?;
        }
        Ok(())
    }
}

/// Paper-grid lattice of level n.
pub fn sigma_grid(n: u32) -> UfResult<SigmaGrid> {
    Ok(SigmaGrid::new(GridParams::new(n)?))
}

/// A level family of finite index sets with complex values attached, the
/// finite-side data of a hyperfinite sum.
#[derive(Clone)]
pub struct HyperfiniteFamily {
    values: Arc<dyn Fn(u32) -> Vec<Complex64> + Send + Sync>,
}

impl HyperfiniteFamily {
    pub fn new(values: impl Fn(u32) -> Vec<Complex64> + Send + Sync + 'static) -> Self {
        HyperfiniteFamily {
            values: Arc::new(values),
        }
    }

    /// Family whose level-n index set is the lattice of level n, with values
    /// given by a function of the lattice point.
    pub fn over_grid(
        kind: GridKind,
        f: impl Fn(u32, f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        HyperfiniteFamily::new(move |n| {
            let params = GridParams::with_kind(n, kind).expect("level >= 1");
            (params.l_min()..=params.l_max())
                .map(|l| f(n, params.point(l)))
                .collect()
        })
    }

    pub fn values_at(&self, n: u32) -> Vec<Complex64> {
        (self.values)(n)
    }
}

/// The hyperfinite sum: per level, the plain finite sum of the family values.
pub fn hyperfinite_sum(fam: &HyperfiniteFamily) -> HyperScalar {
    let fam = fam.clone();
    HyperScalar::from_fn(move |n| fam.values_at(n).into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn constants_multiply_to_pi() {
        for n in [1u32, 2, 3, 4, 8, 16, 32, 100] {
            let p = GridParams::new(n).unwrap();
            let err = (p.beta() * p.eta() - std::f64::consts::PI).abs();
            assert!(err <= 4.0 * f64::EPSILON * std::f64::consts::PI, "n={n}");
        }
    }

    #[test]
    fn level_one_grid() {
        let g = sigma_grid(1).unwrap();
        assert_eq!(g.len(), 2);
        assert!((g.points[0] + SQRT_PI).abs() < 1e-15);
        assert!(g.points[1].abs() < 1e-15);
    }

    #[test]
    fn level_two_grid() {
        let g = sigma_grid(2).unwrap();
        assert_eq!(g.len(), 8);
        let eta = SQRT_PI / 2.0;
        assert!((g.points[1] - g.points[0] - eta).abs() < 1e-15);
        assert!((g.points[0] + 2.0 * SQRT_PI).abs() < 1e-14);
        assert!((g.points[7] - (2.0 * SQRT_PI - eta)).abs() < 1e-14);
    }

    #[test]
    fn level_four_grid() {
        let g = sigma_grid(4).unwrap();
        assert_eq!(g.len(), 32);
        assert!((g.params.beta() - 4.0 * SQRT_PI).abs() < 1e-14);
        assert!(g.points.contains(&0.0));
    }

    #[test]
    fn rejects_level_zero() {
        assert!(matches!(
            GridParams::new(0),
            Err(UfError::InvalidLevel(0))
        ));
    }

    #[test]
    fn uniform_spacing_and_nesting() {
        for n in [2u32, 4, 8] {
            let g = sigma_grid(n).unwrap();
            let eta = g.params.eta();
            for w in g.points.windows(2) {
                assert!((w[1] - w[0] - eta).abs() < 1e-13);
            }
            assert!(g.points.contains(&0.0));
            assert!((g.points[0] + g.params.beta()).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_grid_includes_right_endpoint() {
        let p = GridParams::with_kind(4, GridKind::Symmetric).unwrap();
        let g = SigmaGrid::new(p);
        assert_eq!(g.len(), 33);
        assert!((g.points[32] - p.beta()).abs() < 1e-13);
    }

    #[test]
    fn index_of_examples() {
        let g = sigma_grid(2).unwrap();
        assert_eq!(g.index_of(0.0, 1e-12).unwrap(), 0);
        assert_eq!(g.index_of(SQRT_PI / 2.0, 1e-12).unwrap(), 1);
        assert!(matches!(
            g.index_of(0.1, 1e-9),
            Err(UfError::NotOnGrid { .. })
        ));
    }

    #[test]
    fn hyperfinite_sum_of_constant_eta() {
        let fam = HyperfiniteFamily::over_grid(GridKind::Paper, |n, _| {
            Complex64::new(SQRT_PI / n as f64, 0.0)
        });
        let s = hyperfinite_sum(&fam);
        for n in [2u32, 4, 8] {
            let expect = 2.0 * n as f64 * SQRT_PI; // 2n^2 * eta = 2 beta
            assert!((s.eval(n).unwrap().re - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn hyperfinite_sum_of_eta_times_point() {
        // sum over the paper grid of eta * q = eta^2 * sum(l) = -pi per level
        let fam = HyperfiniteFamily::over_grid(GridKind::Paper, |n, q| {
            Complex64::new(q * SQRT_PI / n as f64, 0.0)
        });
        let s = hyperfinite_sum(&fam);
        for n in [2u32, 4, 8, 16] {
            let v = s.eval(n).unwrap().re;
            assert!(
                (v + std::f64::consts::PI).abs() < 1e-9,
                "n={n} sum={v}"
            );
        }
    }

    #[test]
    fn hyperfinite_sum_singleton() {
        let fam = HyperfiniteFamily::new(|_| vec![Complex64::new(7.0, 0.0)]);
        let s = hyperfinite_sum(&fam);
        assert_eq!(s.eval(5).unwrap(), Complex64::new(7.0, 0.0));
    }

    #[test]
    fn grid_csv_has_index_and_point() {
        let g = sigma_grid(1).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("l,q"));
        assert!(lines.next().unwrap().starts_with("-1,"));
    }
}
