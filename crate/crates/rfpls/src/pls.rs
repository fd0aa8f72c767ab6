//! Sequential logit-PLS component extraction with Wald pruning and
//! regression deflation, plus the fitting pipeline shared by the robust and
//! classical estimators.
//!
//! Each round fits one univariate logistic regression per design column,
//! normalizes the slope vector, zeroes the slopes that fail the Wald test,
//! forms the component as the corresponding linear combination, and replaces
//! every column by its residual from the regression on that component.
//! Loadings are composed through the deflation steps so that the returned
//! score matrix is exactly `input * V`.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rfpls::RfplsConfig;
use crate::robust::{ScalerKind, Standardizer};
use crate::scalar::Scalar;
use crate::special::normal_quantile;
use crate::wle::{DesignMatrix, Estimator, LogitFit};

/// Why component extraction stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Every slope of the next round failed the Wald test.
    AllPruned,
    /// The configured component cap was reached.
    MaxComponents,
    /// The next component had zero variance.
    DegenerateComponent,
}

/// Result of the extraction loop.
#[derive(Debug, Clone)]
pub struct Extraction<F: Scalar> {
    /// Loadings against the input matrix columns, one column per component.
    pub v: Array2<F>,
    /// Component scores, exactly `input * v`.
    pub scores: Array2<F>,
    pub stop_reason: StopReason,
    /// Normalized unpruned slope direction of round 1, for the fallback
    /// path when everything is pruned immediately.
    pub round1_direction: Option<Array1<F>>,
}

impl<F: Scalar> Extraction<F> {
    pub fn n_components(&self) -> usize {
        self.v.ncols()
    }
}

fn sample_var<F: Scalar>(x: &[F]) -> F {
    let n = x.len();
    let nf = F::c(n as f64);
    let mean = x.iter().copied().sum::<F>() / nf;
    x.iter().map(|&v| (v - mean) * (v - mean)).sum::<F>() / F::c((n - 1) as f64)
}

/// Univariate slope and its standard error from `y ~ intercept + column`,
/// or `None` when the column is degenerate or the fit fails.
fn column_slope<F: Scalar>(
    col: &Array1<F>,
    y: &[u8],
    estimator: Estimator,
    config: &RfplsConfig<F>,
) -> Option<(F, F)> {
    let first = col[0];
    if col.iter().all(|&v| v == first) {
        return None;
    }
    let x = col.view().insert_axis(ndarray::Axis(1)).to_owned();
    let design = DesignMatrix::with_intercept(&x).ok()?;
    match estimator.fit(&design, y, &config.wle) {
        Ok(fit) => Some((fit.coefficients[1], fit.standard_errors[1])),
        Err(_) => None,
    }
}

/// Extract logit-PLS components from `h_tilde`.
///
/// `h_tilde` must already be standardized (no zero-variance columns).
pub fn extract_components<F: Scalar>(
    h_tilde: &Array2<F>,
    y: &[u8],
    estimator: Estimator,
    config: &RfplsConfig<F>,
) -> Result<Extraction<F>, F> {
    config.validate()?;
    let n = h_tilde.nrows();
    let k = h_tilde.ncols();
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} responses for {} rows",
            y.len(),
            n
        )));
    }
    for j in 0..k {
        let col = h_tilde.column(j);
        let first = col[0];
        if col.iter().all(|&v| v == first) {
            return Err(Error::DegenerateColumn {
                index: j,
                reason: "zero variance entering extraction".into(),
            });
        }
    }
    let half = F::c(0.5);
    let z_crit = normal_quantile(F::one() - config.wald_alpha * half)?;
    let max_components = config.max_components.min(k);

    // Current (deflated) matrix and the composition of deflations, so that
    // loadings stay expressed against the original columns.
    let mut x = h_tilde.clone();
    let mut compose = Array2::<F>::eye(k);
    let mut loadings: Vec<Array1<F>> = Vec::new();
    let mut stop_reason = StopReason::MaxComponents;
    let mut round1_direction = None;

    for round in 0..max_components {
        // (a) per-column univariate fits.
        let mut slopes = Array1::<F>::zeros(k);
        let mut ses = Array1::<F>::zeros(k);
        let mut usable = vec![false; k];
        for j in 0..k {
            let col = x.column(j).to_owned();
            if let Some((slope, se)) = column_slope(&col, y, estimator, config) {
                slopes[j] = slope;
                ses[j] = se;
                usable[j] = true;
            }
        }
        let norm = slopes.iter().map(|&v| v * v).sum::<F>().sqrt();
        if norm == F::zero() {
            stop_reason = StopReason::AllPruned;
            break;
        }
        // (b) normalize, then zero out insignificant entries.
        let mut v = slopes.mapv(|s| s / norm);
        if round == 0 {
            round1_direction = Some(v.clone());
        }
        let mut kept = 0usize;
        for j in 0..k {
            let significant = usable[j]
                && (ses[j] == F::zero() || (slopes[j] / ses[j]).abs() > z_crit);
            if !significant {
                v[j] = F::zero();
            } else {
                kept += 1;
            }
        }
        if kept == 0 {
            stop_reason = StopReason::AllPruned;
            break;
        }
        // (c) component scores on the deflated matrix. Columns enter with
        // unit-ish scale, so an absolute variance floor separates real
        // components from deflation residue.
        let t = x.dot(&v);
        let var_t = sample_var(t.as_slice().unwrap());
        if !(var_t > F::c(1e-10)) {
            stop_reason = StopReason::DegenerateComponent;
            break;
        }
        loadings.push(compose.dot(&v));
        // (d) replace every column by its residual from the regression on t.
        let nf = F::c(n as f64);
        let mean_t = t.iter().copied().sum::<F>() / nf;
        let denom = F::c((n - 1) as f64);
        let mut b = Array1::<F>::zeros(k);
        for j in 0..k {
            let col = x.column(j);
            let mean_j = col.iter().copied().sum::<F>() / nf;
            let mut cov = F::zero();
            for i in 0..n {
                cov += (col[i] - mean_j) * (t[i] - mean_t);
            }
            b[j] = (cov / denom) / var_t;
        }
        for j in 0..k {
            let bj = b[j];
            let mean_j = x.column(j).iter().copied().sum::<F>() / nf;
            for i in 0..n {
                x[(i, j)] -= mean_j + bj * (t[i] - mean_t);
            }
        }
        // Keep the loading composition in sync with the deflation:
        // X_new = X (I - v b') plus column constants that the per-fit
        // intercepts absorb.
        let w = compose.dot(&v);
        for a in 0..k {
            for c in 0..k {
                compose[(a, c)] -= w[a] * b[c];
            }
        }

        if loadings.len() == max_components {
            stop_reason = StopReason::MaxComponents;
        }
    }

    let l = loadings.len();
    let mut v = Array2::<F>::zeros((k, l));
    for (idx, w) in loadings.iter().enumerate() {
        v.column_mut(idx).assign(w);
    }
    let scores = h_tilde.dot(&v);
    Ok(Extraction {
        v,
        scores,
        stop_reason,
        round1_direction,
    })
}

/// Everything the robust and classical PLS fits share.
#[derive(Debug, Clone)]
pub struct PipelineFit<F: Scalar> {
    pub scaler: Standardizer<F>,
    pub obs_weights: Array1<F>,
    pub v: Array2<F>,
    pub theta: Array1<F>,
    /// Intercept on the standardized scale.
    pub alpha_std: F,
    pub beta_std: Array1<F>,
    /// Intercept and coefficients mapped back to the original column scale.
    pub alpha_hat: F,
    pub beta_coefs: Array1<F>,
    pub n_components: usize,
    pub stop_reason: StopReason,
    pub fallback: bool,
    pub component_fit: LogitFit<F>,
}

/// Shared pipeline: standardize, optionally row-weight, extract components,
/// refit on the components, and map the coefficients back.
///
/// `obs_weights` of length n scales row i by sqrt(w_i) before extraction;
/// pass all ones for the classical fit.
pub fn fit_pipeline<F: Scalar>(
    h: &Array2<F>,
    y: &[u8],
    obs_weights: Array1<F>,
    scaler_kind: ScalerKind,
    estimator: Estimator,
    config: &RfplsConfig<F>,
) -> Result<PipelineFit<F>, F> {
    let scaler = match scaler_kind {
        ScalerKind::Robust => {
            Standardizer::robust(h.view(), config.weiszfeld_tol, config.weiszfeld_max_iter)?
        }
        ScalerKind::Classical => Standardizer::classical(h.view())?,
    };
    let h_std = scaler.apply(h.view())?;
    let h_tilde = crate::rfpls::weight_rows(&h_std, obs_weights.view())?;

    let extraction = extract_components(&h_tilde, y, estimator, config)?;
    let (v, scores, fallback) = if extraction.n_components() == 0 {
        // Degenerate first round: fall back to the unpruned normalized slope
        // direction so downstream consumers still get a usable model.
        let direction = extraction.round1_direction.ok_or_else(|| {
            Error::Estimation("no usable direction in the first extraction round".into())
        })?;
        let scores = h_tilde.dot(&direction);
        if !(sample_var(scores.as_slice().unwrap()) > F::zero()) {
            return Err(Error::Estimation(
                "fallback component has zero variance".into(),
            ));
        }
        let mut v = Array2::<F>::zeros((h.ncols(), 1));
        v.column_mut(0).assign(&direction);
        let scores = scores.insert_axis(ndarray::Axis(1));
        (v, scores, true)
    } else {
        (extraction.v, extraction.scores, false)
    };

    // Trailing components can be numerically collinear with earlier ones
    // after heavy row downweighting; drop them until the joint fit is
    // well-posed.
    let mut n_keep = v.ncols();
    let (component_fit, v) = loop {
        let v_kept = v.slice(ndarray::s![.., ..n_keep]).to_owned();
        let scores_kept = scores.slice(ndarray::s![.., ..n_keep]).to_owned();
        let design = DesignMatrix::with_intercept(&scores_kept)?;
        match estimator.fit(&design, y, &config.wle) {
            Ok(fit) => break (fit, v_kept),
            // The components can classify the training sample perfectly; the
            // last stable iterate still carries the right direction, only the
            // magnitude is unsettled.
            Err(Error::Separation { last_fit, .. }) => break (*last_fit, v_kept),
            Err(Error::SingularFit(_)) | Err(Error::DegenerateColumn { .. }) if n_keep > 1 => {
                n_keep -= 1;
            }
            Err(e) => return Err(e),
        }
    };
    let alpha_std = component_fit.coefficients[0];
    let theta = component_fit.coefficients.slice(ndarray::s![1..]).to_owned();

    let beta_std = v.dot(&theta);
    let beta_coefs = Array1::from_iter(
        beta_std
            .iter()
            .zip(scaler.scale.iter())
            .map(|(&b, &s)| b / s),
    );
    let alpha_hat = alpha_std
        - beta_coefs
            .iter()
            .zip(scaler.center.iter())
            .map(|(&b, &c)| b * c)
            .sum::<F>();

    Ok(PipelineFit {
        scaler,
        obs_weights,
        n_components: v.ncols(),
        v,
        theta,
        alpha_std,
        beta_std,
        alpha_hat,
        beta_coefs,
        stop_reason: extraction.stop_reason,
        fallback,
        component_fit,
    })
}
