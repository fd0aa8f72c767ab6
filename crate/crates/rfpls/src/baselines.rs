//! Classical comparison estimators: functional PLS with maximum-likelihood
//! fits and mean/SD scaling, and functional principal component regression.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::basis::{BSplineBasis, CoefficientFunction, CoefficientMatrix, GramMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pls::{fit_pipeline, StopReason};
use crate::rfpls::{predict_from_parts, RfplsConfig};
use crate::robust::{ScalerKind, Standardizer};
use crate::scalar::Scalar;
use crate::wle::{fit_mle_logit, DesignMatrix, Estimator, WleConfig};

/// Classical functional PLS model: the robust pipeline with mean/SD scaling,
/// unit observation weights, and maximum-likelihood fits everywhere.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FplsModel<F: Scalar> {
    pub v: Array2<F>,
    pub theta: Array1<F>,
    pub alpha_hat: F,
    pub beta_coefs: Array1<F>,
    pub alpha_std: F,
    pub beta_std: Array1<F>,
    pub scaler: Standardizer<F>,
    pub basis: BSplineBasis<F>,
    pub n_components: usize,
    pub stop_reason: StopReason,
    pub fallback: bool,
    pub config: RfplsConfig<F>,
}

/// Fit the classical FPLS logistic model.
pub fn fit_fpls<F: Scalar>(
    a: &CoefficientMatrix<F>,
    psi: &GramMatrix<F>,
    y: &[u8],
    basis: &BSplineBasis<F>,
    config: &RfplsConfig<F>,
) -> Result<FplsModel<F>, F> {
    config.validate()?;
    if a.n_basis() != psi.size() || a.n_basis() != basis.n_basis() {
        return Err(Error::DimensionMismatch(format!(
            "coefficients ({}), gram ({}), basis ({}) disagree",
            a.n_basis(),
            psi.size(),
            basis.n_basis()
        )));
    }
    let h = a.values().dot(psi.psi());
    let ones = Array1::<F>::ones(a.n_curves());
    let pipeline = fit_pipeline(&h, y, ones, ScalerKind::Classical, Estimator::Mle, config)?;
    Ok(FplsModel {
        v: pipeline.v,
        theta: pipeline.theta,
        alpha_hat: pipeline.alpha_hat,
        beta_coefs: pipeline.beta_coefs,
        alpha_std: pipeline.alpha_std,
        beta_std: pipeline.beta_std,
        scaler: pipeline.scaler,
        basis: basis.clone(),
        n_components: pipeline.n_components,
        stop_reason: pipeline.stop_reason,
        fallback: pipeline.fallback,
        config: *config,
    })
}

impl<F: Scalar> FplsModel<F> {
    pub fn predict(
        &self,
        a_new: &CoefficientMatrix<F>,
        psi: &GramMatrix<F>,
    ) -> Result<Array1<F>, F> {
        predict_from_parts(self.alpha_hat, self.beta_coefs.view(), a_new, psi)
    }

    pub fn coefficient_function(&self) -> Result<CoefficientFunction<F>, F> {
        CoefficientFunction::new(self.beta_coefs.clone(), self.basis.clone())
    }
}

/// Functional principal component regression model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FpcModel<F: Scalar> {
    /// Ψ-orthonormal eigenfunction coefficients, one column per component.
    pub component_basis: Array2<F>,
    /// Mean basis coefficients used to center the scores.
    pub coef_mean: Array1<F>,
    /// Intercept followed by the score regression slopes.
    pub logit_coefs: Array1<F>,
    /// Intercept of the original-scale prediction path.
    pub alpha_hat: F,
    pub beta_coefs: Array1<F>,
    /// All K eigenvalues of the Ψ-weighted coefficient covariance,
    /// nonincreasing.
    pub explained_variance: Array1<F>,
    pub n_components: usize,
    pub basis: BSplineBasis<F>,
    /// Whether the Gram square root needed eigenvalue flooring.
    pub regularized_sqrt: bool,
}

/// Fit functional principal component regression with `n_components` scores.
///
/// The principal components come from the eigendecomposition of
/// `Ψ^(1/2) Cov(A) Ψ^(1/2)`, mapped back through `Ψ^(-1/2)` so the component
/// functions are Ψ-orthonormal; the binary response is then regressed on the
/// leading component scores by maximum likelihood.
pub fn fit_fpc<F: Scalar>(
    a: &CoefficientMatrix<F>,
    psi: &GramMatrix<F>,
    y: &[u8],
    basis: &BSplineBasis<F>,
    n_components: usize,
) -> Result<FpcModel<F>, F> {
    let k = a.n_basis();
    let n = a.n_curves();
    if k != psi.size() || k != basis.n_basis() {
        return Err(Error::DimensionMismatch(format!(
            "coefficients ({}), gram ({}), basis ({}) disagree",
            k,
            psi.size(),
            basis.n_basis()
        )));
    }
    if n_components == 0 || n_components > k {
        return Err(Error::InvalidConfig(format!(
            "n_components must be in 1..={k}, got {n_components}"
        )));
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {} curves",
            y.len(),
            n
        )));
    }

    let coef_mean = linalg::column_means(a.values());
    let mut centered = a.values().clone();
    for mut row in centered.rows_mut() {
        for j in 0..k {
            row[j] -= coef_mean[j];
        }
    }
    let denom = F::c((n - 1) as f64);
    let cov = centered.t().dot(&centered).mapv(|v| v / denom);

    let jitter = F::c(1e-10);
    let (sqrt_psi, inv_sqrt_psi, regularized) = sym_sqrt_pair(psi.psi(), jitter)?;
    let s = sqrt_psi.dot(&cov).dot(&sqrt_psi);
    let (eigvals, eigvecs) = linalg::sym_eigen(&s)?;

    // Component functions in basis coordinates, Ψ-orthonormal by
    // construction.
    let mut component_basis = Array2::<F>::zeros((k, n_components));
    for l in 0..n_components {
        let u = eigvecs.column(l);
        let b = inv_sqrt_psi.dot(&u);
        component_basis.column_mut(l).assign(&b);
    }

    let scores = centered.dot(psi.psi()).dot(&component_basis);
    let design = DesignMatrix::with_intercept(&scores)?;
    let fit = match fit_mle_logit(&design, y, &WleConfig::default()) {
        Ok(fit) => fit,
        // Perfectly separated scores: keep the last stable iterate.
        Err(Error::Separation { last_fit, .. }) => *last_fit,
        Err(e) => return Err(e),
    };
    let gamma = fit.coefficients.slice(ndarray::s![1..]).to_owned();
    let beta_coefs = component_basis.dot(&gamma);
    let alpha_hat = fit.coefficients[0]
        - coef_mean.dot(&psi.psi().dot(&beta_coefs));

    Ok(FpcModel {
        component_basis,
        coef_mean,
        logit_coefs: fit.coefficients,
        alpha_hat,
        beta_coefs,
        explained_variance: eigvals,
        n_components,
        basis: basis.clone(),
        regularized_sqrt: regularized,
    })
}

/// Symmetric square root and inverse square root from one eigendecomposition,
/// flooring eigenvalues at `jitter`.
fn sym_sqrt_pair<F: Scalar>(
    a: &Array2<F>,
    jitter: F,
) -> Result<(Array2<F>, Array2<F>, bool), F> {
    let (vals, vecs) = linalg::sym_eigen(a)?;
    let n = a.nrows();
    let mut regularized = false;
    let mut sqrt = Array2::<F>::zeros((n, n));
    let mut inv_sqrt = Array2::<F>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let mut s = F::zero();
            let mut si = F::zero();
            for m in 0..n {
                let v = if vals[m] < jitter {
                    regularized = true;
                    jitter
                } else {
                    vals[m]
                };
                let r = v.sqrt();
                s += vecs[(i, m)] * r * vecs[(j, m)];
                si += vecs[(i, m)] * (F::one() / r) * vecs[(j, m)];
            }
            sqrt[(i, j)] = s;
            inv_sqrt[(i, j)] = si;
        }
    }
    Ok((sqrt, inv_sqrt, regularized))
}

impl<F: Scalar> FpcModel<F> {
    pub fn predict(
        &self,
        a_new: &CoefficientMatrix<F>,
        psi: &GramMatrix<F>,
    ) -> Result<Array1<F>, F> {
        predict_from_parts(self.alpha_hat, self.beta_coefs.view(), a_new, psi)
    }

    pub fn coefficient_function(&self) -> Result<CoefficientFunction<F>, F> {
        CoefficientFunction::new(self.beta_coefs.clone(), self.basis.clone())
    }

    /// Fraction of total variance captured by the first `n_components`.
    pub fn variance_fraction(&self) -> F {
        let total: F = self.explained_variance.iter().copied().sum();
        if total <= F::zero() {
            return F::zero();
        }
        let used: F = self
            .explained_variance
            .iter()
            .take(self.n_components)
            .copied()
            .sum();
        used / total
    }
}
