//! Cubic (or general order) B-spline bases: construction, evaluation,
//! least-squares coefficient fitting, and the Gram matrix of basis inner
//! products.

use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdata::{FunctionalDataset, SamplingGrid};
use crate::linalg;
use crate::scalar::Scalar;

/// B-spline basis of `n_basis` functions on a closed domain.
///
/// Interior knots are equally spaced; boundary knots are repeated `order`
/// times, so the basis interpolates at the domain endpoints and forms a
/// partition of unity everywhere in between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BSplineBasis<F: Scalar> {
    order: usize,
    n_basis: usize,
    interior_knots: Vec<F>,
    domain: (F, F),
}

impl<F: Scalar> BSplineBasis<F> {
    /// Basis with `n_basis - order` equally spaced interior knots.
    pub fn new(domain: (F, F), n_basis: usize, order: usize) -> Result<Self, F> {
        let (lo, hi) = domain;
        if order == 0 {
            return Err(Error::InvalidConfig("order must be at least 1".into()));
        }
        if n_basis < order {
            return Err(Error::InvalidConfig(format!(
                "n_basis ({n_basis}) must be at least the order ({order})"
            )));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "degenerate domain [{lo}, {hi}]"
            )));
        }
        let n_interior = n_basis - order;
        let spans = F::c((n_interior + 1) as f64);
        let width = hi - lo;
        let interior_knots = (1..=n_interior)
            .map(|i| lo + width * F::c(i as f64) / spans)
            .collect();
        Ok(Self {
            order,
            n_basis,
            interior_knots,
            domain,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_basis(&self) -> usize {
        self.n_basis
    }

    pub fn interior_knots(&self) -> &[F] {
        &self.interior_knots
    }

    pub fn domain(&self) -> (F, F) {
        self.domain
    }

    /// Full knot vector with boundary knots at multiplicity `order`.
    fn full_knots(&self) -> Vec<F> {
        let (lo, hi) = self.domain;
        let mut knots = Vec::with_capacity(self.n_basis + self.order);
        knots.extend(std::iter::repeat_n(lo, self.order));
        knots.extend(self.interior_knots.iter().copied());
        knots.extend(std::iter::repeat_n(hi, self.order));
        knots
    }

    /// All `n_basis` function values at `t`.
    pub fn evaluate_point(&self, t: F) -> Result<Array1<F>, F> {
        let (lo, hi) = self.domain;
        if !t.is_finite() || t < lo || t > hi {
            return Err(Error::OutOfDomain { point: t, lo, hi });
        }
        let knots = self.full_knots();
        let degree = self.order - 1;
        // Knot span index mu with knots[mu] <= t < knots[mu+1]; the right
        // endpoint belongs to the last nonvanishing span.
        let mut mu = self.n_basis - 1;
        if t < hi {
            // Spans run from index degree to n_basis - 1.
            let mut k = degree;
            while k + 1 < self.n_basis && t >= knots[k + 1] {
                k += 1;
            }
            mu = k;
        }

        // Cox-de Boor triangular scheme for the `order` nonzero functions.
        let mut values = vec![F::zero(); self.order];
        let mut left = vec![F::zero(); self.order];
        let mut right = vec![F::zero(); self.order];
        values[0] = F::one();
        for j in 1..self.order {
            left[j] = t - knots[mu + 1 - j];
            right[j] = knots[mu + j] - t;
            let mut saved = F::zero();
            for r in 0..j {
                let denom = right[r + 1] + left[j - r];
                let temp = values[r] / denom;
                values[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            values[j] = saved;
        }

        let mut out = Array1::<F>::zeros(self.n_basis);
        let first = mu + 1 - self.order;
        for (offset, v) in values.into_iter().enumerate() {
            out[first + offset] = v;
        }
        Ok(out)
    }

    /// Evaluation matrix: entry `(j, k)` is the k-th basis function at the
    /// j-th grid point.
    pub fn evaluate_matrix(&self, grid: &SamplingGrid<F>) -> Result<Array2<F>, F> {
        let mut out = Array2::<F>::zeros((grid.len(), self.n_basis));
        for (j, &t) in grid.points().iter().enumerate() {
            out.row_mut(j).assign(&self.evaluate_point(t)?);
        }
        Ok(out)
    }

    /// Gram matrix of basis inner products by composite Simpson quadrature
    /// with `resolution` subintervals.
    pub fn gram_matrix(&self, resolution: usize) -> Result<GramMatrix<F>, F> {
        if resolution < 10 * self.n_basis {
            return Err(Error::InvalidConfig(format!(
                "gram resolution {} below 10 * n_basis = {}",
                resolution,
                10 * self.n_basis
            )));
        }
        let panels = if resolution.is_multiple_of(2) {
            resolution
        } else {
            resolution + 1
        };
        let (lo, hi) = self.domain;
        let h = (hi - lo) / F::c(panels as f64);
        let k = self.n_basis;
        let mut psi = Array2::<F>::zeros((k, k));
        let third = h / F::c(3.0);
        for i in 0..=panels {
            let t = if i == panels {
                hi
            } else {
                lo + h * F::c(i as f64)
            };
            let w = if i == 0 || i == panels {
                third
            } else if i % 2 == 1 {
                F::c(4.0) * third
            } else {
                F::c(2.0) * third
            };
            let row = self.evaluate_point(t)?;
            // Rank-one accumulation; rows are sparse but K is small.
            for a in 0..k {
                if row[a] == F::zero() {
                    continue;
                }
                let wa = w * row[a];
                for b in 0..k {
                    psi[(a, b)] += wa * row[b];
                }
            }
        }
        // Exact symmetrization.
        for a in 0..k {
            for b in (a + 1)..k {
                let avg = (psi[(a, b)] + psi[(b, a)]) / F::c(2.0);
                psi[(a, b)] = avg;
                psi[(b, a)] = avg;
            }
        }
        Ok(GramMatrix { psi })
    }

    /// Gram matrix at the default resolution of `10 * n_basis * order`
    /// subintervals.
    pub fn gram_matrix_default(&self) -> Result<GramMatrix<F>, F> {
        self.gram_matrix(10 * self.n_basis * self.order)
    }
}

/// Inner-product matrix `Ψ` of the basis functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix<F: Scalar> {
    psi: Array2<F>,
}

impl<F: Scalar> GramMatrix<F> {
    pub fn psi(&self) -> &Array2<F> {
        &self.psi
    }

    pub fn size(&self) -> usize {
        self.psi.nrows()
    }
}

/// Per-curve basis expansion coefficients (row i = coefficients of curve i).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientMatrix<F: Scalar> {
    a: Array2<F>,
}

impl<F: Scalar> CoefficientMatrix<F> {
    pub fn new(a: Array2<F>) -> Result<Self, F> {
        if let Some(((i, j), _)) = a.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Data {
                line: i,
                column: j,
                message: "non-finite basis coefficient".into(),
            });
        }
        Ok(Self { a })
    }

    pub fn values(&self) -> &Array2<F> {
        &self.a
    }

    pub fn n_curves(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_basis(&self) -> usize {
        self.a.ncols()
    }
}

/// Least-squares fit of every curve onto the basis evaluation matrix.
pub fn fit_coefficients<F: Scalar>(
    dataset: &FunctionalDataset<F>,
    basis: &BSplineBasis<F>,
) -> Result<CoefficientMatrix<F>, F> {
    let m = dataset.n_points();
    let k = basis.n_basis();
    if m < k {
        return Err(Error::InvalidConfig(format!(
            "need at least as many grid points ({m}) as basis functions ({k})"
        )));
    }
    let phi = basis.evaluate_matrix(dataset.grid())?;
    let gram = phi.t().dot(&phi);
    let gram_inv = linalg::inverse(&gram).map_err(|_| {
        Error::SingularFit("rank-deficient basis evaluation matrix".into())
    })?;
    // a_i solves (Φ'Φ) a = Φ' x_i for every curve; batched as X Φ (Φ'Φ)^-1.
    let a = dataset.values().dot(&phi).dot(&gram_inv);
    CoefficientMatrix::new(a)
}

/// A function expressed by its coefficients in a B-spline basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFunction<F: Scalar> {
    coefs: Array1<F>,
    basis: BSplineBasis<F>,
}

impl<F: Scalar> CoefficientFunction<F> {
    pub fn new(coefs: Array1<F>, basis: BSplineBasis<F>) -> Result<Self, F> {
        if coefs.len() != basis.n_basis() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a basis of size {}",
                coefs.len(),
                basis.n_basis()
            )));
        }
        Ok(Self { coefs, basis })
    }

    pub fn coefs(&self) -> ArrayView1<'_, F> {
        self.coefs.view()
    }

    pub fn basis(&self) -> &BSplineBasis<F> {
        &self.basis
    }

    /// Pointwise values of the expansion on a grid.
    pub fn evaluate(&self, grid: &SamplingGrid<F>) -> Result<Array1<F>, F> {
        let phi = self.basis.evaluate_matrix(grid)?;
        Ok(phi.dot(&self.coefs))
    }
}
