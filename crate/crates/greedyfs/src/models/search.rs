//! Randomized, cross-validated search over SVM hyperparameters.
//!
//! Draws (C, gamma) pairs uniformly from configurable ranges and scores each
//! on the same stratified folds, so candidates see identical data. The winner
//! is the pair with the best mean validation score; exact ties keep the
//! earlier draw.

use crate::data::{standardize, stratified_kfold, Dataset};
use crate::error::{Error, Result};
use crate::metrics::{confusion, Metric};
use crate::models::svm::{train_svm_smo, SvmConfig};
use crate::rng::{mix, stream_rng, Stream};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Search space and budget for [`random_search_cv`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HyperSearchSpec {
    pub c_range: (f64, f64),
    pub gamma_range: (f64, f64),
    pub n_draws: usize,
    pub folds: usize,
    pub seed: u64,
}

impl Default for HyperSearchSpec {
    fn default() -> Self {
        HyperSearchSpec {
            c_range: (0.1, 1000.0),
            gamma_range: (0.001, 0.1),
            n_draws: 20,
            folds: 3,
            seed: 0,
        }
    }
}

impl HyperSearchSpec {
    fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("C", self.c_range), ("gamma", self.gamma_range)] {
            if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || hi < lo {
                return Err(Error::config(format!(
                    "{name} range must be positive and ordered, got [{lo}, {hi}]"
                )));
            }
        }
        if self.n_draws == 0 {
            return Err(Error::config("hyperparameter search needs n_draws >= 1"));
        }
        if self.folds < 2 {
            return Err(Error::config("cross-validation needs at least 2 folds"));
        }
        Ok(())
    }
}

fn draw(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// Mean of `metric` over stratified cross-validation folds, standardizing
/// inside each fold. Folds where the metric is undefined are skipped; `None`
/// means it was undefined everywhere.
pub fn cv_mean_score(
    train: &Dataset,
    cfg: &SvmConfig,
    folds: usize,
    seed: u64,
    metric: Metric,
) -> Result<Option<f64>> {
    let splits = stratified_kfold(train.y(), folds, seed)?;
    let mut scores = Vec::new();
    for (fold, split) in splits.iter().enumerate() {
        let fit_part = train.rows(&split.train_idx);
        let val_part = train.rows(&split.valid_idx);
        let (fit_std, mut rest, _) = standardize(&fit_part, &[&val_part])?;
        let val_std = rest.pop().expect("one transformed dataset");
        let fold_cfg = SvmConfig {
            seed: mix(seed, &[fold as u64]),
            ..cfg.clone()
        };
        let model = train_svm_smo(&fit_std, &fold_cfg)?;
        let preds = model.predict(val_std.x())?;
        if let Some(s) = metric.of(&confusion(&preds, val_std.y())?) {
            scores.push(s);
        }
    }
    if scores.is_empty() {
        return Ok(None);
    }
    Ok(Some(scores.iter().sum::<f64>() / scores.len() as f64))
}

/// Runs the randomized search and returns the winning configuration with
/// `gamma` pinned to the drawn value.
pub fn random_search_cv(
    train: &Dataset,
    spec: &HyperSearchSpec,
    metric: Metric,
) -> Result<SvmConfig> {
    spec.validate()?;
    let mut rng = stream_rng(mix(spec.seed, &[1]), Stream::Search);
    let candidates: Vec<(f64, f64)> = (0..spec.n_draws)
        .map(|_| (draw(&mut rng, spec.c_range), draw(&mut rng, spec.gamma_range)))
        .collect();

    let folds_seed = mix(spec.seed, &[2]);
    let mut best: Option<(SvmConfig, f64)> = None;
    for (c, gamma) in candidates {
        let cfg = SvmConfig {
            c,
            gamma: Some(gamma),
            seed: spec.seed,
            ..SvmConfig::default()
        };
        if let Some(score) = cv_mean_score(train, &cfg, spec.folds, folds_seed, metric)? {
            if best.as_ref().is_none_or(|(_, b)| score > *b) {
                best = Some((cfg, score));
            }
        }
    }
    match best {
        Some((cfg, _)) => Ok(cfg),
        None => Err(Error::numerical(
            "every hyperparameter candidate produced an undefined score",
        )),
    }
}
