//! Versioned JSON serialization for fitted models.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baselines::{FpcModel, FplsModel};
use crate::error::{Error, Result};
use crate::rfpls::RfplsModel;
use crate::scalar::Scalar;

pub const FORMAT_VERSION: u32 = 1;

/// Any fitted model, tagged by estimator kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SavedModel<F: Scalar> {
    Rfpls(RfplsModel<F>),
    Fpls(FplsModel<F>),
    Fpc(FpcModel<F>),
}

impl<F: Scalar> SavedModel<F> {
    pub fn kind(&self) -> &'static str {
        match self {
            SavedModel::Rfpls(_) => "rfpls",
            SavedModel::Fpls(_) => "fpls",
            SavedModel::Fpc(_) => "fpc",
        }
    }

    pub fn basis(&self) -> &crate::basis::BSplineBasis<F> {
        match self {
            SavedModel::Rfpls(m) => &m.basis,
            SavedModel::Fpls(m) => &m.basis,
            SavedModel::Fpc(m) => &m.basis,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(
    serialize = "F: serde::Serialize",
    deserialize = "F: serde::de::DeserializeOwned"
))]
struct ModelFile<F: Scalar> {
    format_version: u32,
    model: SavedModel<F>,
}

/// Serialize a model to a pretty JSON string with a format-version field.
pub fn model_to_json<F: Scalar + Serialize>(model: &SavedModel<F>) -> Result<String, F> {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        model: model.clone(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Parse a model from its JSON representation, checking the format version.
pub fn model_from_json<F: Scalar + serde::de::DeserializeOwned>(
    json: &str,
) -> Result<SavedModel<F>, F> {
    let file: ModelFile<F> = serde_json::from_str(json)?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Incompatible(format!(
            "model format version {} (this build reads {})",
            file.format_version, FORMAT_VERSION
        )));
    }
    Ok(file.model)
}

pub fn save_model<F: Scalar + Serialize>(
    path: &Path,
    model: &SavedModel<F>,
) -> Result<(), F> {
    fs::write(path, model_to_json(model)?)?;
    Ok(())
}

pub fn load_model<F: Scalar + serde::de::DeserializeOwned>(
    path: &Path,
) -> Result<SavedModel<F>, F> {
    let json = fs::read_to_string(path)?;
    model_from_json(&json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BSplineBasis, CoefficientMatrix};
    use crate::rfpls::{fit_rfpls, RfplsConfig};
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn rfpls_model_round_trips_through_json() {
        let basis = BSplineBasis::new((0.0, 1.0), 6, 4).unwrap();
        let psi = basis.gram_matrix_default().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = Array2::from_shape_fn((120, 6), |_| rng.sample::<f64, _>(StandardNormal));
        let h = a.dot(psi.psi());
        let y: Vec<u8> = (0..120)
            .map(|i| u8::from(rng.gen::<f64>() < crate::wle::logistic(2.0 * h[(i, 0)])))
            .collect();
        let a = CoefficientMatrix::new(a).unwrap();
        let model = fit_rfpls(&a, &psi, &y, &basis, &RfplsConfig::default()).unwrap();

        let json = model_to_json(&SavedModel::Rfpls(model.clone())).unwrap();
        assert!(json.contains("\"format_version\": 1"));
        assert!(json.contains("\"kind\": \"rfpls\""));
        let back = model_from_json::<f64>(&json).unwrap();
        match back {
            SavedModel::Rfpls(m) => {
                assert_eq!(m.beta_coefs, model.beta_coefs);
                assert_eq!(m.alpha_hat, model.alpha_hat);
                assert_eq!(m.v, model.v);
                assert_eq!(m.obs_weights, model.obs_weights);
                assert_eq!(m.basis, model.basis);
            }
            other => panic!("wrong kind: {}", other.kind()),
        }
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let json = r#"{"format_version": 99, "model": {"kind": "fpc"}}"#;
        assert!(matches!(
            model_from_json::<f64>(json),
            Err(Error::Incompatible(_)) | Err(Error::Serde(_))
        ));
    }
}
