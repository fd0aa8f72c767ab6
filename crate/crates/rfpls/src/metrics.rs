//! Classification and estimation quality measures: correct classification
//! ratio, rank-based AUC, and integrated squared error of coefficient
//! functions.

use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdata::{integrate_product, SamplingGrid};
use crate::scalar::Scalar;

/// Classification report at a fixed probability cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport<F: Scalar> {
    pub ccr: F,
    pub auc: F,
    /// Counts indexed as `confusion[actual][predicted]`.
    pub confusion: [[usize; 2]; 2],
    pub n: usize,
}

/// Correct classification ratio: fraction of observations where
/// `p >= cut` matches the label (ties predict class 1).
pub fn ccr<F: Scalar>(y: &[u8], p: ArrayView1<F>, cut: F) -> Result<F, F> {
    if y.is_empty() {
        return Err(Error::UndefinedMetric("CCR of an empty sample".into()));
    }
    if y.len() != p.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {} probabilities",
            y.len(),
            p.len()
        )));
    }
    if !(cut > F::zero() && cut < F::one()) {
        return Err(Error::InvalidConfig(format!(
            "cutoff must be inside (0, 1), got {cut}"
        )));
    }
    let correct = y
        .iter()
        .zip(p.iter())
        .filter(|(&yi, &pi)| u8::from(pi >= cut) == yi)
        .count();
    Ok(F::c(correct as f64) / F::c(y.len() as f64))
}

/// Area under the ROC curve by the Mann-Whitney rank statistic; ties count
/// one half. Needs both classes present.
pub fn auc<F: Scalar>(y: &[u8], p: ArrayView1<F>) -> Result<F, F> {
    if y.len() != p.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {} probabilities",
            y.len(),
            p.len()
        )));
    }
    let n_pos = y.iter().filter(|&&v| v == 1).count();
    let n_neg = y.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric(
            "AUC needs both classes present".into(),
        ));
    }
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| p[a].partial_cmp(&p[b]).unwrap_or(std::cmp::Ordering::Equal));

    // Average ranks within tie groups, then sum the positive-class ranks.
    let n = y.len();
    let mut rank_sum_pos = F::zero();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && p[order[j]] == p[order[i]] {
            j += 1;
        }
        let avg_rank = F::c((i + 1 + j) as f64) / F::c(2.0);
        for &idx in &order[i..j] {
            if y[idx] == 1 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j;
    }
    let n_pos_f = F::c(n_pos as f64);
    let n_neg_f = F::c(n_neg as f64);
    let u = rank_sum_pos - n_pos_f * (n_pos_f + F::one()) / F::c(2.0);
    Ok(u / (n_pos_f * n_neg_f))
}

/// Integrated squared error `∫ (beta - beta_hat)^2 dt` by trapezoid
/// quadrature on the grid.
pub fn imse<F: Scalar>(
    beta_true: ArrayView1<F>,
    beta_hat: ArrayView1<F>,
    grid: &SamplingGrid<F>,
) -> Result<F, F> {
    if beta_true.len() != beta_hat.len() || beta_true.len() != grid.len() {
        return Err(Error::DimensionMismatch(format!(
            "imse lengths: true={}, hat={}, grid={}",
            beta_true.len(),
            beta_hat.len(),
            grid.len()
        )));
    }
    let diff = ndarray::Array1::from_iter(
        beta_true
            .iter()
            .zip(beta_hat.iter())
            .map(|(&a, &b)| a - b),
    );
    integrate_product(diff.view(), diff.view(), grid)
}

/// Full classification report (CCR, AUC, confusion counts) at a cutoff.
pub fn evaluate<F: Scalar>(y: &[u8], p: ArrayView1<F>, cut: F) -> Result<EvalReport<F>, F> {
    let ccr_v = ccr(y, p, cut)?;
    let auc_v = auc(y, p)?;
    let mut confusion = [[0usize; 2]; 2];
    for (&yi, &pi) in y.iter().zip(p.iter()) {
        let pred = usize::from(pi >= cut);
        confusion[usize::from(yi)][pred] += 1;
    }
    Ok(EvalReport {
        ccr: ccr_v,
        auc: auc_v,
        confusion,
        n: y.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array1};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ccr_basics() {
        let y = [1u8, 0, 1, 0];
        let p = array![0.9, 0.1, 0.8, 0.2];
        assert_eq!(ccr(&y, p.view(), 0.5).unwrap(), 1.0);

        // All probabilities at the cutoff predict class 1.
        let p_tie = array![0.5, 0.5, 0.5, 0.5];
        let frac_ones = 0.5;
        assert_eq!(ccr(&y, p_tie.view(), 0.5).unwrap(), frac_ones);

        assert!(ccr(&[], array![].view(), 0.5f64).is_err());
        assert!(ccr(&y, p.view(), 0.0).is_err());
    }

    #[test]
    fn ccr_matches_brute_force_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y: Vec<u8> = (0..200).map(|_| u8::from(rng.gen::<f64>() < 0.4)).collect();
        let p = Array1::from_shape_fn(200, |_| rng.gen::<f64>());
        let fast = ccr(&y, p.view(), 0.5).unwrap();
        let mut correct = 0;
        for i in 0..200 {
            let pred = if p[i] >= 0.5 { 1u8 } else { 0u8 };
            if pred == y[i] {
                correct += 1;
            }
        }
        assert_eq!(fast, correct as f64 / 200.0);
        // CCR + misclassification rate = 1.
        let miss = 1.0 - fast;
        assert!((fast + miss - 1.0).abs() < 1e-15);
    }

    /// O(n^2) all-pairs AUC oracle with half-credit ties.
    fn auc_all_pairs(y: &[u8], p: &Array1<f64>) -> f64 {
        let mut num = 0.0;
        let mut pairs = 0.0;
        for i in 0..y.len() {
            for j in 0..y.len() {
                if y[i] == 1 && y[j] == 0 {
                    pairs += 1.0;
                    if p[i] > p[j] {
                        num += 1.0;
                    } else if p[i] == p[j] {
                        num += 0.5;
                    }
                }
            }
        }
        num / pairs
    }

    #[test]
    fn auc_extremes_and_oracle() {
        let y = [0u8, 0, 1, 1];
        assert_eq!(auc(&y, array![0.1, 0.2, 0.8, 0.9].view()).unwrap(), 1.0);
        assert_eq!(auc(&y, array![0.5, 0.5, 0.5, 0.5].view()).unwrap(), 0.5);
        assert!(auc(&[1, 1], array![0.1, 0.2].view()).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for round in 0..100 {
            let n = 50;
            let y: Vec<u8> = (0..n).map(|i| u8::from(i % 3 == 0 || rng.gen::<f64>() < 0.3)).collect();
            if y.iter().all(|&v| v == 1) || y.iter().all(|&v| v == 0) {
                continue;
            }
            // Quantize some probabilities to force ties.
            let p = Array1::from_shape_fn(n, |_| {
                let v: f64 = rng.gen();
                if rng.gen::<f64>() < 0.3 {
                    (v * 10.0).round() / 10.0
                } else {
                    v
                }
            });
            let fast = auc(&y, p.view()).unwrap();
            let slow = auc_all_pairs(&y, &p);
            assert_eq!(fast, slow, "round {round}");
        }
    }

    #[test]
    fn auc_is_invariant_under_monotone_transforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 80;
        let y: Vec<u8> = (0..n).map(|_| u8::from(rng.gen::<f64>() < 0.5)).collect();
        if y.iter().all(|&v| v == y[0]) {
            return;
        }
        let p = Array1::from_shape_fn(n, |_| rng.gen_range(0.01..0.99));
        let base = auc(&y, p.view()).unwrap();
        let logit = p.mapv(|v: f64| (v / (1.0 - v)).ln());
        let expv = p.mapv(|v: f64| v.exp());
        assert_eq!(base, auc(&y, logit.view()).unwrap());
        assert_eq!(base, auc(&y, expv.view()).unwrap());
    }

    #[test]
    fn imse_basics_and_closed_form() {
        let grid = SamplingGrid::equally_spaced(0.0, 10.0, 256).unwrap();
        let zero = Array1::<f64>::zeros(256);
        let one = Array1::<f64>::ones(256);
        assert_eq!(imse(zero.view(), zero.view(), &grid).unwrap(), 0.0);
        let v = imse(zero.view(), one.view(), &grid).unwrap();
        assert!((v - 10.0).abs() < 1e-10);
        // Symmetry.
        let w = imse(one.view(), zero.view(), &grid).unwrap();
        assert_eq!(v, w);

        let sine = Array1::from_iter(
            grid.points()
                .iter()
                .map(|&t| (t * std::f64::consts::PI / 3.0).sin()),
        );
        let exact = 5.0
            - 3.0 / (4.0 * std::f64::consts::PI) * (20.0 * std::f64::consts::PI / 3.0).sin();
        let got = imse(sine.view(), zero.view(), &grid).unwrap();
        assert!((got - exact).abs() < 1e-3, "{got} vs {exact}");

        assert!(imse(zero.view(), one.slice(ndarray::s![..100]), &grid).is_err());
    }

    #[test]
    fn evaluate_confusion_sums() {
        let y = [1u8, 0, 1, 0, 1];
        let p = array![0.9, 0.6, 0.4, 0.2, 0.7];
        let rep = evaluate(&y, p.view(), 0.5).unwrap();
        let total: usize = rep.confusion.iter().flatten().sum();
        assert_eq!(total, 5);
        assert_eq!(rep.n, 5);
        let correct = rep.confusion[0][0] + rep.confusion[1][1];
        assert!((rep.ccr - correct as f64 / 5.0).abs() < 1e-15);
    }
}
