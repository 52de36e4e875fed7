//! Binary classifiers behind the greedy loop.
//!
//! Everything the selection code needs from a model is the [`Classifier`] /
//! [`Fitted`] pair: fit deterministically under a seed, predict ±1 labels.
//! Two implementations ship here (an RBF-kernel SVM trained by SMO and a
//! compact feed-forward network); anything else that satisfies the contract
//! plugs into the greedy loop unchanged.

mod mlp;
mod search;
mod svm;

pub use mlp::{gradient_check, train_mlp, MlpConfig, MlpModel};
pub use search::{cv_mean_score, random_search_cv, HyperSearchSpec};
pub use svm::{train_svm_smo, SvmConfig, SvmModel};

use crate::data::{Dataset, Scaler};
use crate::error::{Error, Result};
use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A trainable classifier configuration. `fit` must be a pure function of
/// (train, seed): the seed overrides whatever seed the configuration holds,
/// which is how the greedy loop hands every candidate fit its own stream.
pub trait Classifier: Sync {
    type Model: Fitted + Send;

    fn fit(&self, train: &Dataset, seed: u64) -> Result<Self::Model>;

    /// Human-readable description for traces and logs.
    fn describe(&self) -> String;
}

/// A fitted model: predicts one ±1 label per input row.
pub trait Fitted {
    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<i8>>;
}

impl<C: Classifier> Classifier for &C {
    type Model = C::Model;

    fn fit(&self, train: &Dataset, seed: u64) -> Result<Self::Model> {
        (**self).fit(train, seed)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// The classifiers the CLI can construct, as one serializable value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Svm(SvmConfig),
    Mlp(MlpConfig),
}

impl Classifier for ModelSpec {
    type Model = TrainedModel;

    fn fit(&self, train: &Dataset, seed: u64) -> Result<TrainedModel> {
        match self {
            ModelSpec::Svm(cfg) => {
                let cfg = SvmConfig { seed, ..cfg.clone() };
                Ok(TrainedModel::Svm(train_svm_smo(train, &cfg)?))
            }
            ModelSpec::Mlp(cfg) => {
                let cfg = MlpConfig { seed, ..cfg.clone() };
                Ok(TrainedModel::Mlp(train_mlp(train, &cfg)?))
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            ModelSpec::Svm(cfg) => format!(
                "svm(C={}, gamma={})",
                cfg.c,
                cfg.gamma
                    .map_or_else(|| "1/d".to_string(), |g| g.to_string())
            ),
            ModelSpec::Mlp(cfg) => format!("mlp(widths={:?})", cfg.hidden_widths),
        }
    }
}

/// A fitted SVM or MLP; serializes as a self-describing JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel {
    Svm(SvmModel),
    Mlp(MlpModel),
}

impl Fitted for TrainedModel {
    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<i8>> {
        match self {
            TrainedModel::Svm(m) => m.predict(x),
            TrainedModel::Mlp(m) => m.predict(x),
        }
    }
}

/// A complete reusable predictor: which original columns it consumes, the
/// standardization fitted on its training data, and the model itself. This is
/// what `rank` writes next to the trace and what `eval` loads back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineModel {
    /// Original column indices, in selection order.
    pub features: Vec<usize>,
    /// Names of those columns, used to cross-check evaluation data.
    pub feature_names: Vec<String>,
    pub scaler: Scaler,
    pub model: TrainedModel,
}

impl PipelineModel {
    /// Trains `spec` on the given columns of `ds` (standardized over all of
    /// it) and packages everything needed to predict on like-shaped data.
    pub fn fit(ds: &Dataset, features: &[usize], spec: &ModelSpec, seed: u64) -> Result<Self> {
        let projected = ds.project(features)?;
        let scaler = Scaler::fit(projected.x());
        let x = scaler.transform(projected.x())?;
        let train = Dataset::new(x, projected.y().to_vec(), projected.names().to_vec())?;
        let model = spec.fit(&train, seed)?;
        Ok(PipelineModel {
            features: features.to_vec(),
            feature_names: projected.names().to_vec(),
            scaler,
            model,
        })
    }

    /// Predicts on full-width data laid out like the training data. Column
    /// names at the consumed indices must match the ones seen at fit time.
    pub fn predict(&self, ds: &Dataset) -> Result<Vec<i8>> {
        let projected = ds.project(&self.features).map_err(|_| {
            Error::data(format!(
                "model consumes feature indices {:?} but the data has only {} columns",
                self.features,
                ds.d()
            ))
        })?;
        if projected.names() != self.feature_names.as_slice() {
            return Err(Error::data(format!(
                "feature names {:?} do not match the model's {:?}",
                projected.names(),
                self.feature_names
            )));
        }
        let x = self.scaler.transform(projected.x())?;
        self.model.predict(x.view())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::numerical(format!("model serialization: {e}")))?;
        json.push('\n');
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::data(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::generate_synthetic;

    #[test]
    fn pipeline_roundtrips_through_json() {
        let ds = generate_synthetic(40, 7, -8.0, 3).unwrap();
        let spec = ModelSpec::Svm(SvmConfig {
            c: 10.0,
            ..SvmConfig::default()
        });
        let pipe = PipelineModel::fit(&ds, &[0, 5, 2], &spec, 7).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        pipe.save(&path).unwrap();
        let back = PipelineModel::load(&path).unwrap();
        assert_eq!(back, pipe);
        assert_eq!(back.predict(&ds).unwrap(), pipe.predict(&ds).unwrap());
    }

    #[test]
    fn pipeline_rejects_mismatched_schemas() {
        let ds = generate_synthetic(30, 7, -8.0, 3).unwrap();
        let spec = ModelSpec::Svm(SvmConfig::default());
        let pipe = PipelineModel::fit(&ds, &[0, 6], &spec, 7).unwrap();

        let narrow = ds.project(&[0, 1, 2]).unwrap();
        assert!(pipe.predict(&narrow).is_err());

        let renamed = Dataset::new(
            ds.x().to_owned(),
            ds.y().to_vec(),
            (0..7).map(|j| format!("f{j}")).collect(),
        )
        .unwrap();
        assert!(pipe.predict(&renamed).is_err());
    }

    #[test]
    fn spec_fit_threads_the_seed_through() {
        let ds = generate_synthetic(30, 7, -8.0, 5).unwrap();
        let spec = ModelSpec::Svm(SvmConfig::default());
        let a = spec.fit(&ds, 1).unwrap();
        let b = spec.fit(&ds, 1).unwrap();
        assert_eq!(a, b);
    }
}
