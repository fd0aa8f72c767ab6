//! Reproducible Monte Carlo generators for the two simulation designs,
//! with contamination injection and the split-then-contaminate protocol.
//!
//! Case 1 draws smooth curves from a random B-spline coefficient model and
//! labels them through the logistic functional of `sin(tπ/3)`; outliers are
//! regenerated with amplified coefficients and an oscillating coefficient
//! function, then label-flipped. Case 2 builds two classes from shifted
//! triangular bumps; outliers lose the common bump and gain a mean-5 noise
//! floor, then flip class.

use ndarray::{Array1, Array2};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::BSplineBasis;
use crate::error::{Error, Result};
use crate::fdata::{integrate_product, FunctionalDataset, SamplingGrid};
use crate::scalar::Scalar;
use crate::wle::logistic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimCase {
    Case1,
    Case2,
}

/// How labels are drawn from the linear functional in Case 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelRule {
    /// `Y ~ Bernoulli(logistic(l))` (default).
    Bernoulli,
    /// Deterministic `Y = 1{l >= 0}`, for sensitivity runs.
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig<F: Scalar> {
    pub case: SimCase,
    pub n: usize,
    pub contamination_rate: F,
    pub seed: u64,
    pub n_grid: usize,
    pub label_rule: LabelRule,
}

impl<F: Scalar> SimConfig<F> {
    pub fn case1(n: usize, contamination_rate: F, seed: u64) -> Self {
        Self {
            case: SimCase::Case1,
            n,
            contamination_rate,
            seed,
            n_grid: 256,
            label_rule: LabelRule::Bernoulli,
        }
    }

    pub fn case2(n: usize, contamination_rate: F, seed: u64) -> Self {
        Self {
            case: SimCase::Case2,
            n,
            contamination_rate,
            seed,
            n_grid: 101,
            label_rule: LabelRule::Bernoulli,
        }
    }

    pub fn validate(&self) -> Result<(), F> {
        if self.n < 10 {
            return Err(Error::InvalidConfig(format!(
                "need at least 10 curves, got {}",
                self.n
            )));
        }
        if self.n_grid < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 grid points, got {}",
                self.n_grid
            )));
        }
        let r = self.contamination_rate;
        if !(r >= F::zero() && r < F::one()) {
            return Err(Error::InvalidConfig(format!(
                "contamination rate must be in [0, 1), got {r}"
            )));
        }
        Ok(())
    }

    fn domain(&self) -> (F, F) {
        match self.case {
            SimCase::Case1 => (F::zero(), F::c(10.0)),
            SimCase::Case2 => (F::one(), F::c(21.0)),
        }
    }

    pub fn grid(&self) -> Result<SamplingGrid<F>, F> {
        let (lo, hi) = self.domain();
        SamplingGrid::equally_spaced(lo, hi, self.n_grid)
    }
}

/// Generated curves with labels, the generating coefficient function (Case 1),
/// and the indices of contaminated rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulatedDataset<F: Scalar> {
    pub data: FunctionalDataset<F>,
    pub true_beta: Option<Array1<F>>,
    pub outlier_indices: Vec<usize>,
    pub config: SimConfig<F>,
}

/// `beta(t) = sin(t pi / 3)` on the Case-1 domain.
pub fn true_beta_case1<F: Scalar>(grid: &SamplingGrid<F>) -> Array1<F> {
    let third_pi = F::c(std::f64::consts::PI / 3.0);
    Array1::from_iter(grid.points().iter().map(|&t| (t * third_pi).sin()))
}

/// Outlier coefficient function `2 sin(4 t pi / 3)` of Case 1.
pub fn true_beta_out_case1<F: Scalar>(grid: &SamplingGrid<F>) -> Array1<F> {
    let four_thirds_pi = F::c(4.0 * std::f64::consts::PI / 3.0);
    let two = F::c(2.0);
    Array1::from_iter(grid.points().iter().map(|&t| two * (t * four_thirds_pi).sin()))
}

/// The three Case-2 bump functions `(h1, h2, h3)(t)`:
/// `h1(t) = max(6 - |t - 11|, 0)`, `h2(t) = h1(t - 4)`, `h3(t) = h1(t + 4)`.
pub fn case2_bumps<F: Scalar>(t: F) -> (F, F, F) {
    let bump = |x: F| (F::c(6.0) - (x - F::c(11.0)).abs()).max(F::zero());
    (bump(t), bump(t - F::c(4.0)), bump(t + F::c(4.0)))
}

fn draw_label<F: Scalar>(l: F, rule: LabelRule, rng: &mut ChaCha8Rng) -> u8 {
    match rule {
        LabelRule::Bernoulli => {
            let p = logistic(l).as_f64();
            u8::from(rng.gen::<f64>() < p)
        }
        LabelRule::Threshold => u8::from(l >= F::zero()),
    }
}

fn standard_normal<F: Scalar>(rng: &mut ChaCha8Rng) -> F {
    F::c(rng.sample::<f64, _>(rand_distr::StandardNormal))
}

struct Case1Machinery<F: Scalar> {
    grid: SamplingGrid<F>,
    /// Basis evaluation matrix, grid points by 13 basis functions.
    phi: Array2<F>,
    beta: Array1<F>,
    beta_out: Array1<F>,
}

fn case1_machinery<F: Scalar>(config: &SimConfig<F>) -> Result<Case1Machinery<F>, F> {
    let grid = config.grid()?;
    let basis = BSplineBasis::new((F::zero(), F::c(10.0)), 13, 4)?;
    let phi = basis.evaluate_matrix(&grid)?;
    let beta = true_beta_case1(&grid);
    let beta_out = true_beta_out_case1(&grid);
    Ok(Case1Machinery {
        grid,
        phi,
        beta,
        beta_out,
    })
}

/// Regenerate the listed rows with the Case-1 outlier scheme (amplified
/// coefficients, oscillating coefficient function) and flip their labels.
fn contaminate_case1_rows<F: Scalar>(
    values: &mut Array2<F>,
    labels: &mut [u8],
    rows: &[usize],
    machinery: &Case1Machinery<F>,
    rule: LabelRule,
    rng: &mut ChaCha8Rng,
) -> Result<(), F> {
    if rows.is_empty() {
        return Ok(());
    }
    let five = F::c(5.0);
    let mut u_out = Array2::<F>::zeros((13, 13));
    for i in 0..13 {
        for j in 0..13 {
            u_out[(i, j)] = F::c(rng.gen::<f64>()) * five;
        }
    }
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    for &row in &sorted {
        let z = Array1::from_shape_fn(13, |_| standard_normal::<F>(rng));
        let coefs = u_out.t().dot(&z);
        let curve = machinery.phi.dot(&coefs);
        let l = integrate_product(curve.view(), machinery.beta_out.view(), &machinery.grid)?;
        let fresh = draw_label(l, rule, rng);
        values.row_mut(row).assign(&curve);
        labels[row] = 1 - fresh;
    }
    Ok(())
}

/// Regenerate the listed rows with the Case-2 outlier scheme (no common
/// bump, N(5,1) noise) and flip their labels.
fn contaminate_case2_rows<F: Scalar>(
    values: &mut Array2<F>,
    labels: &mut [u8],
    rows: &[usize],
    grid: &SamplingGrid<F>,
    rng: &mut ChaCha8Rng,
) {
    let five = F::c(5.0);
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    for &row in &sorted {
        let u = F::c(rng.gen::<f64>());
        let keep = F::one() - u;
        let original = labels[row];
        for (j, &t) in grid.points().iter().enumerate() {
            let (_, h2, h3) = case2_bumps(t);
            // h4(t) = h1(t + 50) vanishes on the observation window.
            let shape = if original == 0 { h2 } else { h3 };
            let noise = standard_normal::<F>(rng) + five;
            values[(row, j)] = keep * shape + noise;
        }
        labels[row] = 1 - original;
    }
}

/// Proportional-by-class selection of `count` rows (Case 1 contamination).
fn stratified_selection(
    labels: &[u8],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let mut ones: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 1).collect();
    let mut zeros: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 0).collect();
    ones.shuffle(rng);
    zeros.shuffle(rng);
    let count = count.min(labels.len());
    let share_ones =
        ((count as f64) * (ones.len() as f64) / (labels.len() as f64)).round() as usize;
    let take_ones = share_ones.min(ones.len()).min(count);
    let take_zeros = (count - take_ones).min(zeros.len());
    // Spill back if one class was too small.
    let take_ones = take_ones + (count - take_ones - take_zeros).min(ones.len() - take_ones);
    let mut out: Vec<usize> = ones[..take_ones].to_vec();
    out.extend_from_slice(&zeros[..take_zeros]);
    out
}

fn uniform_selection(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx.truncate(count.min(n));
    idx
}

fn generate_case1<F: Scalar>(
    config: &SimConfig<F>,
    contaminate: bool,
) -> Result<SimulatedDataset<F>, F> {
    let machinery = case1_machinery(config)?;
    let n = config.n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // One shared mixing matrix per dataset.
    let mut u = Array2::<F>::zeros((13, 13));
    for i in 0..13 {
        for j in 0..13 {
            u[(i, j)] = F::c(rng.gen::<f64>());
        }
    }
    let z = Array2::from_shape_fn((n, 13), |_| standard_normal::<F>(&mut rng));
    let coefs = z.dot(&u);
    let mut values = coefs.dot(&machinery.phi.t());
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let l = integrate_product(values.row(i), machinery.beta.view(), &machinery.grid)?;
        labels.push(draw_label(l, config.label_rule, &mut rng));
    }

    let mut outlier_indices = Vec::new();
    if contaminate && config.contamination_rate > F::zero() {
        let count = (config.contamination_rate.as_f64() * n as f64).round() as usize;
        outlier_indices = stratified_selection(&labels, count, &mut rng);
        contaminate_case1_rows(
            &mut values,
            &mut labels,
            &outlier_indices,
            &machinery,
            config.label_rule,
            &mut rng,
        )?;
        outlier_indices.sort_unstable();
    }

    let data = FunctionalDataset::new(values, machinery.grid.clone(), Some(labels))?;
    Ok(SimulatedDataset {
        data,
        true_beta: Some(machinery.beta),
        outlier_indices,
        config: *config,
    })
}

fn generate_case2<F: Scalar>(
    config: &SimConfig<F>,
    contaminate: bool,
) -> Result<SimulatedDataset<F>, F> {
    let grid = config.grid()?;
    let n = config.n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n_zero = n / 2;

    let mut values = Array2::<F>::zeros((n, grid.len()));
    let mut labels = vec![0u8; n];
    for i in 0..n {
        let class1 = i >= n_zero;
        labels[i] = u8::from(class1);
        let u = F::c(rng.gen::<f64>());
        for (j, &t) in grid.points().iter().enumerate() {
            let (h1, h2, h3) = case2_bumps(t);
            let shape = if class1 { h3 } else { h2 };
            let noise = standard_normal::<F>(&mut rng);
            values[(i, j)] = u * h1 + (F::one() - u) * shape + noise;
        }
    }

    let mut outlier_indices = Vec::new();
    if contaminate && config.contamination_rate > F::zero() {
        let count = (config.contamination_rate.as_f64() * n as f64).round() as usize;
        outlier_indices = uniform_selection(n, count, &mut rng);
        contaminate_case2_rows(&mut values, &mut labels, &outlier_indices, &grid, &mut rng);
        outlier_indices.sort_unstable();
    }

    let data = FunctionalDataset::new(values, grid, Some(labels))?;
    Ok(SimulatedDataset {
        data,
        true_beta: None,
        outlier_indices,
        config: *config,
    })
}

/// Generate a dataset, contaminating the whole sample when the configured
/// rate is positive.
pub fn generate<F: Scalar>(config: &SimConfig<F>) -> Result<SimulatedDataset<F>, F> {
    config.validate()?;
    match config.case {
        SimCase::Case1 => generate_case1(config, true),
        SimCase::Case2 => generate_case2(config, true),
    }
}

/// Generate a clean dataset, keeping the configured contamination rate in
/// the echo for a later [`train_test_split`].
pub fn generate_clean<F: Scalar>(config: &SimConfig<F>) -> Result<SimulatedDataset<F>, F> {
    config.validate()?;
    match config.case {
        SimCase::Case1 => generate_case1(config, false),
        SimCase::Case2 => generate_case2(config, false),
    }
}

/// Split a clean dataset and contaminate only the training partition at the
/// rate carried by the dataset's config. The test partition stays clean.
pub fn train_test_split<F: Scalar>(
    ds: &SimulatedDataset<F>,
    n_train: usize,
    n_test: usize,
    seed: u64,
) -> Result<(SimulatedDataset<F>, SimulatedDataset<F>), F> {
    let n = ds.data.n_curves();
    if n_train == 0 || n_test == 0 || n_train + n_test > n {
        return Err(Error::InvalidConfig(format!(
            "cannot split {n} curves into {n_train} train + {n_test} test"
        )));
    }
    if !ds.outlier_indices.is_empty() {
        return Err(Error::InvalidConfig(
            "split requires a clean source dataset; contamination happens after splitting".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng);
    let train_rows = &idx[..n_train];
    let test_rows = &idx[n_train..n_train + n_test];

    let train_data = ds.data.select_rows(train_rows)?;
    let test_data = ds.data.select_rows(test_rows)?;

    let mut values = train_data.values().clone();
    let mut labels = train_data
        .labels()
        .ok_or_else(|| Error::InvalidConfig("split needs labeled data".into()))?
        .to_vec();

    let mut outlier_indices = Vec::new();
    let rate = ds.config.contamination_rate;
    if rate > F::zero() {
        let count = (rate.as_f64() * n_train as f64).round() as usize;
        match ds.config.case {
            SimCase::Case1 => {
                let machinery = case1_machinery(&ds.config)?;
                outlier_indices = stratified_selection(&labels, count, &mut rng);
                contaminate_case1_rows(
                    &mut values,
                    &mut labels,
                    &outlier_indices,
                    &machinery,
                    ds.config.label_rule,
                    &mut rng,
                )?;
            }
            SimCase::Case2 => {
                outlier_indices = uniform_selection(n_train, count, &mut rng);
                contaminate_case2_rows(
                    &mut values,
                    &mut labels,
                    &outlier_indices,
                    train_data.grid(),
                    &mut rng,
                );
            }
        }
        outlier_indices.sort_unstable();
    }

    let train = SimulatedDataset {
        data: FunctionalDataset::new(values, train_data.grid().clone(), Some(labels))?,
        true_beta: ds.true_beta.clone(),
        outlier_indices,
        config: ds.config,
    };
    let mut test_config = ds.config;
    test_config.contamination_rate = F::zero();
    let test = SimulatedDataset {
        data: test_data,
        true_beta: ds.true_beta.clone(),
        outlier_indices: Vec::new(),
        config: test_config,
    };
    Ok((train, test))
}
