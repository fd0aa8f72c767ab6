//! Robust functional partial least squares (RFPLS) for scalar-on-function
//! logistic regression.
//!
//! A binary outcome is regressed on a curve-valued predictor observed on a
//! discrete grid. Curves are projected onto a cubic B-spline basis, the
//! resulting coefficient matrix is reduced to a handful of partial least
//! squares components, and the component model is fitted by logistic
//! regression. The robust variant replaces every least-squares ingredient
//! with its weighted-likelihood counterpart: the design matrix is centered
//! by the spatial median and scaled by the MAD, observations are downweighted
//! according to Pearson residuals built from Anscombe residuals, and each
//! univariate component fit uses the weighted likelihood estimator.
//!
//! The crate also provides classical FPLS and functional principal component
//! baselines, reproducible Monte Carlo data generators, and classification /
//! estimation metrics (CCR, AUC, IMSE), so that full benchmark experiments
//! can be scripted on top of it.
//!
//! Core numerics are generic over the scalar type through [`Scalar`]
//! (effectively `f32` / `f64`); concrete aliases for the common `f64`
//! instantiation live at the crate root.
// Negated comparisons like `!(x > 0)` are deliberate: they reject NaN along
// with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod basis;
pub mod error;
pub mod fdata;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod model_io;
pub mod pls;
pub mod rfpls;
pub mod robust;
pub mod scalar;
pub mod simgen;
pub mod special;
pub mod wle;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` aliases for the main public types.
pub type SamplingGrid64 = fdata::SamplingGrid<f64>;
pub type FunctionalDataset64 = fdata::FunctionalDataset<f64>;
pub type BSplineBasis64 = basis::BSplineBasis<f64>;
pub type GramMatrix64 = basis::GramMatrix<f64>;
pub type CoefficientMatrix64 = basis::CoefficientMatrix<f64>;
pub type CoefficientFunction64 = basis::CoefficientFunction<f64>;
pub type LogitFit64 = wle::LogitFit<f64>;
pub type WleConfig64 = wle::WleConfig<f64>;
pub type RfplsConfig64 = rfpls::RfplsConfig<f64>;
pub type RfplsModel64 = rfpls::RfplsModel<f64>;
pub type FplsModel64 = baselines::FplsModel<f64>;
pub type FpcModel64 = baselines::FpcModel<f64>;
pub type SimConfig64 = simgen::SimConfig<f64>;
pub type SimulatedDataset64 = simgen::SimulatedDataset<f64>;
pub type EvalReport64 = metrics::EvalReport<f64>;
