//! Robust location and scale: spatial (L1) median, MAD column scales, and
//! the column standardizer used to center/scale design matrices.

use ndarray::{Array1, Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Median of a sample (average of the middle pair for even lengths).
pub fn median<F: Scalar>(xs: &[F]) -> F {
    debug_assert!(!xs.is_empty());
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / F::c(2.0)
    }
}

/// Consistency-scaled median absolute deviation `1.4826 * median|x - med(x)|`.
pub fn mad<F: Scalar>(xs: &[F]) -> F {
    let med = median(xs);
    let devs: Vec<F> = xs.iter().map(|&x| (x - med).abs()).collect();
    F::c(1.4826) * median(&devs)
}

/// Outcome of the Weiszfeld iteration.
#[derive(Debug, Clone)]
pub struct L1Median<F: Scalar> {
    pub point: Array1<F>,
    pub converged: bool,
    pub n_iter: usize,
}

/// Spatial median of the rows of `x`: the point minimizing the sum of
/// Euclidean distances to all rows.
///
/// Weiszfeld iteration with the Vardi-Zhang safeguard for iterates that
/// coincide with a data row. Non-convergence returns the best iterate with
/// `converged = false`.
pub fn l1_median<F: Scalar>(x: ArrayView2<F>, tol: F, max_iter: usize) -> L1Median<F> {
    let n = x.nrows();
    let k = x.ncols();
    if n == 1 {
        return L1Median {
            point: x.row(0).to_owned(),
            converged: true,
            n_iter: 0,
        };
    }
    // Coordinate-wise median start.
    let mut mu = Array1::<F>::zeros(k);
    for j in 0..k {
        let col: Vec<F> = x.column(j).to_vec();
        mu[j] = median(&col);
    }

    let tiny = F::c(1e-12);
    for iter in 0..max_iter {
        // Weighted mean over non-coincident rows plus the Vardi-Zhang pull
        // toward mu when some row coincides with the iterate.
        let mut t = Array1::<F>::zeros(k);
        let mut weight_sum = F::zero();
        let mut r_vec = Array1::<F>::zeros(k);
        let mut coincident = 0usize;
        for i in 0..n {
            let mut d2 = F::zero();
            for j in 0..k {
                let diff = x[(i, j)] - mu[j];
                d2 += diff * diff;
            }
            let d = d2.sqrt();
            if d <= tiny {
                coincident += 1;
                continue;
            }
            let w = F::one() / d;
            weight_sum += w;
            for j in 0..k {
                t[j] += x[(i, j)] * w;
                r_vec[j] += (x[(i, j)] - mu[j]) * w;
            }
        }
        if weight_sum == F::zero() {
            // All rows coincide with the iterate.
            return L1Median {
                point: mu,
                converged: true,
                n_iter: iter,
            };
        }
        let t_point = t.mapv(|v| v / weight_sum);
        let next = if coincident == 0 {
            t_point
        } else {
            let r_norm = r_vec.iter().map(|&v| v * v).sum::<F>().sqrt();
            let eta = F::c(coincident as f64);
            if r_norm <= eta {
                // The coincident point dominates: it is the median.
                return L1Median {
                    point: mu,
                    converged: true,
                    n_iter: iter,
                };
            }
            let lambda = eta / r_norm;
            let one_minus = F::one() - lambda;
            let mut blend = Array1::<F>::zeros(k);
            for j in 0..k {
                blend[j] = one_minus * t_point[j] + lambda * mu[j];
            }
            blend
        };
        let step = next
            .iter()
            .zip(mu.iter())
            .map(|(a, b)| (*a - *b) * (*a - *b))
            .sum::<F>()
            .sqrt();
        mu = next;
        if step < tol {
            return L1Median {
                point: mu,
                converged: true,
                n_iter: iter + 1,
            };
        }
    }
    L1Median {
        point: mu,
        converged: false,
        n_iter: max_iter,
    }
}

/// Per-column consistency-scaled MAD of a matrix.
///
/// Fails with [`Error::DegenerateColumn`] when a column has zero MAD.
pub fn mad_scale<F: Scalar>(x: ArrayView2<F>) -> Result<Array1<F>, F> {
    let mut out = Array1::<F>::zeros(x.ncols());
    for j in 0..x.ncols() {
        let col: Vec<F> = x.column(j).to_vec();
        let s = mad(&col);
        if s <= F::zero() {
            return Err(Error::DegenerateColumn {
                index: j,
                reason: "zero median absolute deviation".into(),
            });
        }
        out[j] = s;
    }
    Ok(out)
}

/// Which location/scale pair a [`Standardizer`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalerKind {
    /// Spatial median center, MAD scale.
    Robust,
    /// Mean center, standard-deviation scale.
    Classical,
}

/// Column-wise standardization state (center and positive scale per column).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Standardizer<F: Scalar> {
    pub kind: ScalerKind,
    pub center: Array1<F>,
    pub scale: Array1<F>,
}

impl<F: Scalar> Standardizer<F> {
    /// Robust standardizer: L1 median center, per-column MAD scale.
    pub fn robust(x: ArrayView2<F>, tol: F, max_iter: usize) -> Result<Self, F> {
        let med = l1_median(x, tol, max_iter);
        let scale = mad_scale(x)?;
        Ok(Self {
            kind: ScalerKind::Robust,
            center: med.point,
            scale,
        })
    }

    /// Classical standardizer: mean center, sample SD scale.
    pub fn classical(x: ArrayView2<F>) -> Result<Self, F> {
        let n = x.nrows();
        if n < 2 {
            return Err(Error::InvalidConfig(
                "classical standardizer needs at least 2 rows".into(),
            ));
        }
        let nf = F::c(n as f64);
        let mut center = Array1::<F>::zeros(x.ncols());
        let mut scale = Array1::<F>::zeros(x.ncols());
        for j in 0..x.ncols() {
            let mean = x.column(j).iter().copied().sum::<F>() / nf;
            let ss = x
                .column(j)
                .iter()
                .map(|&v| (v - mean) * (v - mean))
                .sum::<F>();
            let sd = (ss / F::c((n - 1) as f64)).sqrt();
            if sd <= F::zero() {
                return Err(Error::DegenerateColumn {
                    index: j,
                    reason: "zero standard deviation".into(),
                });
            }
            center[j] = mean;
            scale[j] = sd;
        }
        Ok(Self {
            kind: ScalerKind::Classical,
            center,
            scale,
        })
    }

    /// `(x - center) / scale`, column-wise.
    pub fn apply(&self, x: ArrayView2<F>) -> Result<Array2<F>, F> {
        if x.ncols() != self.center.len() {
            return Err(Error::DimensionMismatch(format!(
                "standardizer has {} columns, matrix has {}",
                self.center.len(),
                x.ncols()
            )));
        }
        let mut out = x.to_owned();
        for j in 0..out.ncols() {
            let c = self.center[j];
            let s = self.scale[j];
            out.column_mut(j).mapv_inplace(|v| (v - c) / s);
        }
        Ok(out)
    }

    /// Inverse of [`Standardizer::apply`].
    pub fn invert(&self, x: ArrayView2<F>) -> Result<Array2<F>, F> {
        if x.ncols() != self.center.len() {
            return Err(Error::DimensionMismatch(format!(
                "standardizer has {} columns, matrix has {}",
                self.center.len(),
                x.ncols()
            )));
        }
        let mut out = x.to_owned();
        for j in 0..out.ncols() {
            let c = self.center[j];
            let s = self.scale[j];
            out.column_mut(j).mapv_inplace(|v| v * s + c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn median_and_mad_basics() {
        assert_eq!(median(&[3.0f64, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0f64, 1.0, 2.0, 3.0]), 2.5);
        let m = mad(&[1.0f64, 2.0, 3.0, 4.0, 5.0]);
        assert!((m - 1.4826).abs() < 1e-12);
    }

    #[test]
    fn l1_median_single_row_is_that_row() {
        let x = array![[2.0f64, -1.0, 3.5]];
        let r = l1_median(x.view(), 1e-10, 100);
        assert!(r.converged);
        assert_eq!(r.point.to_vec(), vec![2.0, -1.0, 3.5]);
    }

    #[test]
    fn l1_median_of_symmetric_cloud_is_center() {
        // Pairs x and 2c - x are symmetric about c.
        let c = [1.0f64, -2.0];
        let base = [
            [3.0, 0.5],
            [-1.0, -4.0],
            [2.0, 1.0],
            [0.0, -2.5],
            [5.0, -1.0],
        ];
        let mut rows = Vec::new();
        for p in base {
            rows.push([p[0], p[1]]);
            rows.push([2.0 * c[0] - p[0], 2.0 * c[1] - p[1]]);
        }
        let x = Array2::from_shape_vec((10, 2), rows.concat()).unwrap();
        let r = l1_median(x.view(), 1e-10, 500);
        assert!(r.converged);
        assert!((r.point[0] - c[0]).abs() < 1e-8);
        assert!((r.point[1] - c[1]).abs() < 1e-8);
    }

    #[test]
    fn l1_median_handles_coincident_data_row() {
        // The middle point of a 3-point collinear configuration is the median
        // and coincides with a data row.
        let x = array![[0.0f64, 0.0], [1.0, 0.0], [5.0, 0.0]];
        let r = l1_median(x.view(), 1e-12, 500);
        assert!(r.converged);
        assert!((r.point[0] - 1.0).abs() < 1e-9);
        assert!(r.point[1].abs() < 1e-9);
    }

    #[test]
    fn l1_median_beats_random_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 50;
        let k = 3;
        let x = Array2::from_shape_fn((n, k), |_| {
            let v: f64 = rng.sample(StandardNormal);
            v * 2.0 + 0.3
        });
        let r = l1_median(x.view(), 1e-12, 1000);
        assert!(r.converged);
        let objective = |p: &Array1<f64>| -> f64 {
            (0..n)
                .map(|i| {
                    (0..k)
                        .map(|j| (x[(i, j)] - p[j]).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .sum()
        };
        let best = objective(&r.point);
        for _ in 0..1000 {
            let scale: f64 = rng.gen_range(1e-4..1.0);
            let probe = Array1::from_shape_fn(k, |j| {
                r.point[j] + scale * rng.sample::<f64, _>(StandardNormal)
            });
            assert!(objective(&probe) >= best - 1e-9);
        }
    }

    #[test]
    fn mad_scale_of_simple_column() {
        let x = array![[1.0f64], [2.0], [3.0], [4.0], [5.0]];
        let s = mad_scale(x.view()).unwrap();
        assert!((s[0] - 1.4826).abs() < 1e-12);
    }

    #[test]
    fn mad_scale_rejects_constant_column() {
        let x = array![[1.0f64, 7.0], [2.0, 7.0], [3.0, 7.0]];
        match mad_scale(x.view()) {
            Err(Error::DegenerateColumn { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected degenerate column, got {other:?}"),
        }
    }

    #[test]
    fn gaussian_mad_tracks_standard_deviation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..10_000)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * 2.5)
            .collect();
        let x = Array2::from_shape_vec((10_000, 1), xs.clone()).unwrap();
        let s = mad_scale(x.view()).unwrap()[0];
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let sd = (xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64)
            .sqrt();
        assert!((s - sd).abs() / sd < 0.1, "mad {s} vs sd {sd}");
    }

    #[test]
    fn standardizer_round_trip_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = Array2::from_shape_fn((40, 5), |_| {
            rng.sample::<f64, _>(StandardNormal) * 3.0 + 1.0
        });
        for std in [
            Standardizer::robust(x.view(), 1e-10, 1000).unwrap(),
            Standardizer::classical(x.view()).unwrap(),
        ] {
            let z = std.apply(x.view()).unwrap();
            let back = std.invert(z.view()).unwrap();
            for (a, b) in back.iter().zip(x.iter()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
