//! Discretely observed functional data: sampling grids, curve matrices, and
//! grid-level quadrature.

use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered set of observation points with the closed domain they live in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid<F: Scalar> {
    points: Vec<F>,
    domain: (F, F),
}

impl<F: Scalar> SamplingGrid<F> {
    /// Grid whose domain is the span of its points.
    pub fn new(points: Vec<F>) -> Result<Self, F> {
        if points.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least 2 points, got {}",
                points.len()
            )));
        }
        let lo = points[0];
        let hi = points[points.len() - 1];
        Self::with_domain(points, lo, hi)
    }

    /// Grid with an explicit enclosing domain.
    pub fn with_domain(points: Vec<F>, lo: F, hi: F) -> Result<Self, F> {
        if points.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least 2 points, got {}",
                points.len()
            )));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "degenerate domain [{lo}, {hi}]"
            )));
        }
        for w in points.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidConfig(
                    "grid points must be strictly increasing".into(),
                ));
            }
        }
        for &p in &points {
            if !p.is_finite() || p < lo || p > hi {
                return Err(Error::OutOfDomain { point: p, lo, hi });
            }
        }
        Ok(Self {
            points,
            domain: (lo, hi),
        })
    }

    /// `n` equally spaced points spanning `[lo, hi]`.
    pub fn equally_spaced(lo: F, hi: F, n: usize) -> Result<Self, F> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least 2 points, got {n}"
            )));
        }
        let step = (hi - lo) / F::c((n - 1) as f64);
        let mut points = Vec::with_capacity(n);
        for i in 0..n {
            points.push(lo + step * F::c(i as f64));
        }
        // Pin the endpoint exactly.
        points[n - 1] = hi;
        Self::with_domain(points, lo, hi)
    }

    pub fn points(&self) -> &[F] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn domain(&self) -> (F, F) {
        self.domain
    }
}

/// `n` curves observed on a common grid, optionally with binary labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionalDataset<F: Scalar> {
    values: Array2<F>,
    grid: SamplingGrid<F>,
    labels: Option<Vec<u8>>,
}

impl<F: Scalar> FunctionalDataset<F> {
    pub fn new(values: Array2<F>, grid: SamplingGrid<F>, labels: Option<Vec<u8>>) -> Result<Self, F> {
        if values.ncols() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "curve matrix has {} columns but grid has {} points",
                values.ncols(),
                grid.len()
            )));
        }
        if let Some((i, j)) = values
            .indexed_iter()
            .find(|(_, v)| !v.is_finite())
            .map(|((i, j), _)| (i, j))
        {
            return Err(Error::Data {
                line: i,
                column: j,
                message: "non-finite curve value".into(),
            });
        }
        if let Some(labels) = &labels {
            if labels.len() != values.nrows() {
                return Err(Error::DimensionMismatch(format!(
                    "{} labels for {} curves",
                    labels.len(),
                    values.nrows()
                )));
            }
            if let Some(pos) = labels.iter().position(|&y| y > 1) {
                return Err(Error::Data {
                    line: pos,
                    column: 0,
                    message: format!("label {} is not binary", labels[pos]),
                });
            }
        }
        Ok(Self {
            values,
            grid,
            labels,
        })
    }

    pub fn n_curves(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_points(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<F> {
        &self.values
    }

    pub fn grid(&self) -> &SamplingGrid<F> {
        &self.grid
    }

    pub fn labels(&self) -> Option<&[u8]> {
        self.labels.as_deref()
    }

    /// Labels as a float vector (0.0 / 1.0).
    pub fn labels_as_scalar(&self) -> Option<Array1<F>> {
        self.labels
            .as_ref()
            .map(|l| Array1::from_iter(l.iter().map(|&y| F::c(f64::from(y)))))
    }

    /// Keep only the listed rows (in the given order).
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self, F> {
        let m = self.n_points();
        let mut values = Array2::<F>::zeros((rows.len(), m));
        for (out_i, &r) in rows.iter().enumerate() {
            if r >= self.n_curves() {
                return Err(Error::DimensionMismatch(format!(
                    "row index {r} out of range for {} curves",
                    self.n_curves()
                )));
            }
            values.row_mut(out_i).assign(&self.values.row(r));
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| rows.iter().map(|&r| l[r]).collect());
        Self::new(values, self.grid.clone(), labels)
    }
}

/// Composite-trapezoid approximation of `∫ f(t) g(t) dt` over the grid.
pub fn integrate_product<F: Scalar>(
    f: ArrayView1<F>,
    g: ArrayView1<F>,
    grid: &SamplingGrid<F>,
) -> Result<F, F> {
    if f.len() != g.len() || f.len() != grid.len() {
        return Err(Error::DimensionMismatch(format!(
            "integrate_product lengths: f={}, g={}, grid={}",
            f.len(),
            g.len(),
            grid.len()
        )));
    }
    let t = grid.points();
    let half = F::c(0.5);
    let mut acc = F::zero();
    for j in 0..t.len() - 1 {
        let h = t[j + 1] - t[j];
        acc += half * h * (f[j] * g[j] + f[j + 1] * g[j + 1]);
    }
    Ok(acc)
}
