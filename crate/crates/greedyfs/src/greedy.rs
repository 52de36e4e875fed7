//! Classifier-driven greedy feature selection.
//!
//! The loop grows a feature set one column at a time. At step k every
//! remaining feature is auditioned by training a fresh model on the selected
//! columns plus that candidate, over q train/validation splits, and the
//! candidate with the best mean validation score wins. All candidates at a
//! step see the same q splits, so the comparison is paired.
//!
//! After the second step the run watches the winners' score sequence: when
//! the change from m_k to m_{k+1} is small against the pooled spread,
//! `|m_{k+1} - m_k| / sqrt(s_{k+1}^2 + s_k^2) < tau`, the loop stops. The
//! step that triggered the stop stays in the trace for reporting, but the
//! kept prefix ends at k* = argmax of the means over the steps before it.
//! Runs that stop by exhausting features or hitting `max_features` take the
//! argmax over every recorded step instead.

use crate::data::{make_splits, standardize, Dataset, Split, SplitPlan};
use crate::error::{Error, Result};
use crate::metrics::{confusion, Metric};
use crate::models::{random_search_cv, Classifier, Fitted, HyperSearchSpec, ModelSpec, SvmConfig};
use crate::rng::mix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const TAG_SPLITS: u64 = 1;
const TAG_FIT: u64 = 2;
const TAG_SEARCH: u64 = 3;

/// Settings for [`run_greedy`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GreedyConfig {
    /// Train/validation splits scored per candidate. At least 2, because the
    /// stopping rule needs a spread estimate.
    pub q: usize,
    pub validation_fraction: f64,
    /// Stopping threshold on the normalized score change.
    pub tau: f64,
    pub metric: Metric,
    /// Cap on the number of selection steps; `None` runs until exhaustion.
    pub max_features: Option<usize>,
    /// Reuse the step-1 splits for the whole run instead of resampling
    /// (seeded) at every step.
    pub fixed_splits: bool,
    /// When and whether to tune SVM hyperparameters. Ignored for classifiers
    /// the randomized search does not apply to.
    pub search: SearchPlacement,
    pub search_spec: HyperSearchSpec,
    pub seed: u64,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            q: 7,
            validation_fraction: 1.0 / 3.0,
            tau: 9e-2,
            metric: Metric::Tss,
            max_features: None,
            fixed_splits: false,
            search: SearchPlacement::OncePerRun,
            search_spec: HyperSearchSpec::default(),
            seed: 0,
        }
    }
}

impl GreedyConfig {
    fn validate(&self, d: usize) -> Result<()> {
        if d < 2 {
            return Err(Error::config("feature ranking needs at least 2 features"));
        }
        if self.q < 2 {
            return Err(Error::config(
                "q must be at least 2 so score spreads are defined",
            ));
        }
        if self.tau <= 0.0 || !self.tau.is_finite() {
            return Err(Error::config("tau must be positive and finite"));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::config("validation fraction must lie in (0, 1)"));
        }
        if let Some(cap) = self.max_features {
            if cap == 0 || cap > d {
                return Err(Error::config(format!(
                    "max_features must lie in [1, {d}], got {cap}"
                )));
            }
        }
        Ok(())
    }
}

/// When the SVM hyperparameter search runs during a greedy run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchPlacement {
    Off,
    /// Tune once on the full feature set before the loop starts.
    OncePerRun,
    /// Re-tune at every step on the selected-so-far columns (step 1 falls
    /// back to the full set).
    PerStep,
}

/// How one candidate feature fared at a step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub feature: usize,
    /// Per-split validation scores; `None` marks a failed fit or an
    /// undefined metric on that split.
    pub scores: Vec<Option<f64>>,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    /// How many splits produced no score.
    pub skipped: usize,
}

/// One completed greedy step: the full candidate table plus the winner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based step index.
    pub step: usize,
    pub chosen: usize,
    /// Winner's mean validation score.
    pub m: f64,
    /// Winner's score spread over the splits.
    pub sigma: f64,
    pub table: Vec<CandidateScore>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Threshold,
    Exhausted,
    Cap,
}

/// Everything a greedy run produced, in selection order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyTrace {
    pub steps: Vec<StepRecord>,
    pub stop_reason: StopReason,
    /// Number of kept steps; the selected set is the first k* winners.
    pub k_star: usize,
    pub selected: Vec<usize>,
    pub feature_names: Vec<String>,
    pub classifier: String,
    pub config: GreedyConfig,
}

impl GreedyTrace {
    pub fn selected_names(&self) -> Vec<&str> {
        self.selected
            .iter()
            .map(|&j| self.feature_names[j].as_str())
            .collect()
    }

    /// Plain-text step table: one row per step with the winner's mean and
    /// spread, a rule under the kept prefix, and a short footer.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:>4}  {:<16}  {:>8}  {:>8}\n",
            "step", "feature", "mean", "std"
        ));
        for record in &self.steps {
            out.push_str(&format!(
                "{:>4}  {:<16}  {:>8.4}  {:>8.4}\n",
                record.step, self.feature_names[record.chosen], record.m, record.sigma
            ));
            if record.step == self.k_star && self.k_star < self.steps.len() {
                out.push_str(&format!("{:-<42}\n", ""));
            }
        }
        out.push_str(&format!(
            "metric: {}; stop reason: {}; k* = {}\n",
            self.config.metric,
            match self.stop_reason {
                StopReason::Threshold => "threshold",
                StopReason::Exhausted => "exhausted",
                StopReason::Cap => "cap",
            },
            self.k_star
        ));
        out.push_str(&format!("selected: {}\n", self.selected_names().join(", ")));
        out
    }
}

/// The stopping rule: true when the step-to-step change is small against the
/// pooled spread. With both spreads zero there is no scale to compare
/// against, so the rule degenerates to exact equality of the means.
pub fn should_stop(m_k: f64, sigma_k: f64, m_k1: f64, sigma_k1: f64, tau: f64) -> bool {
    let pooled = (sigma_k * sigma_k + sigma_k1 * sigma_k1).sqrt();
    if pooled == 0.0 {
        return m_k == m_k1;
    }
    (m_k1 - m_k).abs() / pooled < tau
}

/// 1-based index of the largest mean; ties go to the earliest step.
pub fn select_k_star(means: &[f64]) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &m) in means.iter().enumerate() {
        if best.is_none_or(|(_, bm)| m > bm) {
            best = Some((i + 1, m));
        }
    }
    match best {
        Some((k, _)) => Ok(k),
        None => Err(Error::config("cannot pick k* from an empty trace")),
    }
}

fn mean_std(scores: &[Option<f64>]) -> (Option<f64>, Option<f64>, usize) {
    let vals: Vec<f64> = scores.iter().flatten().copied().collect();
    let skipped = scores.len() - vals.len();
    if vals.is_empty() {
        return (None, None, skipped);
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (Some(mean), Some(var.sqrt()), skipped)
}

/// Feature index of the best-scoring candidate; ties go to the smallest
/// index because tables are ordered that way. `None` if no candidate has a
/// defined mean.
pub fn winning_feature(table: &[CandidateScore]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for c in table {
        if let Some(m) = c.mean {
            if best.is_none_or(|(_, bm)| m > bm) {
                best = Some((c.feature, m));
            }
        }
    }
    best.map(|(f, _)| f)
}

/// Scores every remaining feature alongside `selected` over the given splits
/// and returns the step record. Candidate fits are independent and run in
/// parallel; results are gathered in candidate order so the outcome does not
/// depend on scheduling.
pub fn greedy_step<C: Classifier>(
    ds: &Dataset,
    selected: &[usize],
    classifier: &C,
    splits: &[Split],
    metric: Metric,
    step: usize,
    seed: u64,
) -> Result<StepRecord> {
    if splits.len() < 2 {
        return Err(Error::config("greedy scoring needs at least 2 splits"));
    }
    let candidates: Vec<usize> = (0..ds.d()).filter(|j| !selected.contains(j)).collect();
    if candidates.is_empty() {
        return Err(Error::config("no candidate features remain"));
    }

    // Standardize each split once at full width; per-column scaling commutes
    // with column projection, so candidates can share this work.
    let mut prepared = Vec::with_capacity(splits.len());
    for sp in splits {
        let train = ds.rows(&sp.train_idx);
        let valid = ds.rows(&sp.valid_idx);
        let (train_std, mut rest, _) = standardize(&train, &[&valid])?;
        prepared.push((train_std, rest.pop().expect("one transformed dataset")));
    }

    let q = splits.len();
    let tasks: Vec<(usize, usize)> = (0..candidates.len())
        .flat_map(|ci| (0..q).map(move |si| (ci, si)))
        .collect();
    let scores: Vec<Option<f64>> = tasks
        .par_iter()
        .map(|&(ci, si)| {
            let p = candidates[ci];
            let cols: Vec<usize> = selected.iter().copied().chain([p]).collect();
            let (train_std, valid_std) = &prepared[si];
            let train = train_std.project(&cols).ok()?;
            let valid = valid_std.project(&cols).ok()?;
            let fit_seed = mix(seed, &[TAG_FIT, step as u64, p as u64, si as u64]);
            let model = classifier.fit(&train, fit_seed).ok()?;
            let preds = model.predict(valid.x()).ok()?;
            metric.of(&confusion(&preds, valid.y()).ok()?)
        })
        .collect();

    let mut table = Vec::with_capacity(candidates.len());
    for (ci, &p) in candidates.iter().enumerate() {
        let (mean, std, skipped) = mean_std(&scores[ci * q..(ci + 1) * q]);
        table.push(CandidateScore {
            feature: p,
            scores: scores[ci * q..(ci + 1) * q].to_vec(),
            mean,
            std,
            skipped,
        });
    }
    let chosen = winning_feature(&table)
        .ok_or_else(|| Error::numerical("every candidate failed on every split"))?;
    let winner = table
        .iter()
        .find(|c| c.feature == chosen)
        .expect("winner is in the table");
    let (m, sigma) = (
        winner.mean.expect("winner has a mean"),
        winner.std.expect("winner has a spread"),
    );
    Ok(StepRecord {
        step,
        chosen,
        m,
        sigma,
        table,
    })
}

fn run_with_provider<C, F>(
    ds: &Dataset,
    cfg: &GreedyConfig,
    label: String,
    mut provide: F,
) -> Result<GreedyTrace>
where
    C: Classifier,
    F: FnMut(usize, &[usize]) -> Result<C>,
{
    cfg.validate(ds.d())?;
    let cap = cfg.max_features.unwrap_or(ds.d());
    let mut selected: Vec<usize> = Vec::new();
    let mut steps: Vec<StepRecord> = Vec::new();
    let stop_reason;
    let mut k = 0usize;
    loop {
        k += 1;
        let split_tag = if cfg.fixed_splits { 1 } else { k as u64 };
        let plan = SplitPlan::new(
            cfg.q,
            cfg.validation_fraction,
            mix(cfg.seed, &[TAG_SPLITS, split_tag]),
        );
        let splits = make_splits(ds.n(), ds.y(), &plan)?;
        let classifier = provide(k, &selected)?;
        let record = greedy_step(ds, &selected, &classifier, &splits, cfg.metric, k, cfg.seed)?;
        selected.push(record.chosen);
        steps.push(record);

        if k >= 2 {
            let prev = &steps[k - 2];
            let cur = &steps[k - 1];
            if should_stop(prev.m, prev.sigma, cur.m, cur.sigma, cfg.tau) {
                stop_reason = StopReason::Threshold;
                break;
            }
        }
        if selected.len() == ds.d() {
            stop_reason = StopReason::Exhausted;
            break;
        }
        if selected.len() >= cap {
            stop_reason = StopReason::Cap;
            break;
        }
    }

    // A threshold stop means the last step only witnessed saturation, so it
    // is reported but not eligible for k*.
    let eligible = match stop_reason {
        StopReason::Threshold => steps.len() - 1,
        _ => steps.len(),
    };
    let means: Vec<f64> = steps[..eligible].iter().map(|s| s.m).collect();
    let k_star = select_k_star(&means)?;
    Ok(GreedyTrace {
        selected: selected[..k_star].to_vec(),
        steps,
        stop_reason,
        k_star,
        feature_names: ds.names().to_vec(),
        classifier: label,
        config: cfg.clone(),
    })
}

/// Runs the greedy loop with a fixed classifier configuration.
pub fn run_greedy<C: Classifier>(
    ds: &Dataset,
    classifier: &C,
    cfg: &GreedyConfig,
) -> Result<GreedyTrace> {
    run_with_provider(ds, cfg, classifier.describe(), |_, _| Ok(classifier))
}

fn tune(
    ds: &Dataset,
    cols: &[usize],
    base: &SvmConfig,
    cfg: &GreedyConfig,
    step_tag: u64,
) -> Result<SvmConfig> {
    let sub = ds.project(cols)?;
    let spec = HyperSearchSpec {
        seed: mix(cfg.seed, &[TAG_SEARCH, step_tag]),
        ..cfg.search_spec.clone()
    };
    let tuned = random_search_cv(&sub, &spec, cfg.metric)?;
    Ok(SvmConfig {
        c: tuned.c,
        gamma: tuned.gamma,
        ..base.clone()
    })
}

/// Runs the greedy loop honoring the config's hyperparameter-search
/// placement, and returns the classifier configuration a final model should
/// be trained with. Search applies to SVM classifiers; for others this is
/// [`run_greedy`] with the given [`ModelSpec`] passed through unchanged.
pub fn run_greedy_tuned(
    ds: &Dataset,
    spec: &ModelSpec,
    cfg: &GreedyConfig,
) -> Result<(GreedyTrace, ModelSpec)> {
    let base = match spec {
        ModelSpec::Svm(c) => c.clone(),
        ModelSpec::Mlp(_) => {
            let trace = run_greedy(ds, spec, cfg)?;
            return Ok((trace, spec.clone()));
        }
    };
    match cfg.search {
        SearchPlacement::Off => {
            let trace = run_greedy(ds, spec, cfg)?;
            Ok((trace, spec.clone()))
        }
        SearchPlacement::OncePerRun => {
            let all: Vec<usize> = (0..ds.d()).collect();
            let tuned_spec = ModelSpec::Svm(tune(ds, &all, &base, cfg, 0)?);
            let trace = run_greedy(ds, &tuned_spec, cfg)?;
            Ok((trace, tuned_spec))
        }
        SearchPlacement::PerStep => {
            let trace = run_with_provider(ds, cfg, "svm(per-step search)".to_string(), {
                let base = base.clone();
                move |k, selected: &[usize]| {
                    let cols: Vec<usize> = if selected.is_empty() {
                        (0..ds.d()).collect()
                    } else {
                        selected.to_vec()
                    };
                    Ok(ModelSpec::Svm(tune(ds, &cols, &base, cfg, k as u64)?))
                }
            })?;
            // Final model settings follow the same policy: tuned on what was
            // actually selected.
            let tuned = tune(ds, &trace.selected, &base, cfg, u64::MAX)?;
            Ok((trace, ModelSpec::Svm(tuned)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::generate_synthetic;
    use crate::models::SvmConfig;
    use crate::rng::{stream_rng, Stream};
    use ndarray::Array2;
    use proptest::prelude::*;
    use rand::Rng;

    fn svm_spec() -> ModelSpec {
        ModelSpec::Svm(SvmConfig::default())
    }

    /// d features of noise with the labels copied into column `label_col`.
    fn label_leak_dataset(n: usize, d: usize, label_col: usize, seed: u64) -> Dataset {
        let mut rng = stream_rng(seed, Stream::Synth);
        let y: Vec<i8> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let x = Array2::from_shape_fn((n, d), |(i, j)| {
            if j == label_col {
                f64::from(y[i])
            } else {
                rng.gen_range(-1.0..1.0)
            }
        });
        let names = (1..=d).map(|j| format!("x{j}")).collect();
        Dataset::new(x, y, names).unwrap()
    }

    fn quick_config(q: usize, seed: u64) -> GreedyConfig {
        GreedyConfig {
            q,
            search: SearchPlacement::Off,
            seed,
            ..GreedyConfig::default()
        }
    }

    #[test]
    fn stopping_rule_matches_hand_computations() {
        // 0.003 / sqrt(0.005) = 0.0424... < 0.09
        assert!(should_stop(0.9, 0.05, 0.903, 0.05, 0.09));
        // 0.4 / 0.0707... = 5.65... >= 0.09
        assert!(!should_stop(0.5, 0.05, 0.9, 0.05, 0.09));
        assert!(should_stop(0.7, 0.0, 0.7, 0.0, 0.09));
        assert!(!should_stop(0.7, 0.0, 0.7001, 0.0, 0.09));
    }

    #[test]
    fn k_star_is_the_earliest_argmax() {
        assert_eq!(select_k_star(&[0.5, 0.9, 0.95, 0.94]).unwrap(), 3);
        assert_eq!(select_k_star(&[0.8]).unwrap(), 1);
        assert_eq!(select_k_star(&[0.9, 0.9]).unwrap(), 1);
        assert!(select_k_star(&[]).is_err());
    }

    #[test]
    fn a_leaked_label_column_wins_its_step_outright() {
        let ds = label_leak_dataset(30, 2, 1, 0);
        let plan = SplitPlan::new(3, 1.0 / 3.0, 5);
        let splits = make_splits(ds.n(), ds.y(), &plan).unwrap();
        let record =
            greedy_step(&ds, &[], &svm_spec(), &splits, Metric::Tss, 1, 0).unwrap();
        assert_eq!(record.chosen, 1);
        assert_eq!(record.m, 1.0);
        assert_eq!(record.sigma, 0.0);
    }

    #[test]
    fn constant_candidates_tie_and_the_smallest_index_wins() {
        let n = 20;
        let y: Vec<i8> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let x = Array2::from_elem((n, 3), 2.5);
        let names = vec!["x1".into(), "x2".into(), "x3".into()];
        let ds = Dataset::new(x, y, names).unwrap();
        let plan = SplitPlan::new(2, 0.3, 1);
        let splits = make_splits(ds.n(), ds.y(), &plan).unwrap();
        let record =
            greedy_step(&ds, &[], &svm_spec(), &splits, Metric::Tss, 1, 0).unwrap();
        assert_eq!(record.chosen, 0);
        let means: Vec<_> = record.table.iter().map(|c| c.mean).collect();
        assert!(means.iter().all(|m| *m == means[0]));
    }

    #[test]
    fn run_stops_immediately_when_one_feature_explains_the_labels() {
        let ds = label_leak_dataset(40, 5, 3, 7);
        let cfg = quick_config(3, 11);
        let trace = run_greedy(&ds, &svm_spec(), &cfg).unwrap();
        assert_eq!(trace.steps[0].chosen, 3);
        assert_eq!(trace.k_star, 1);
        assert_eq!(trace.selected, vec![3]);
        assert_eq!(trace.stop_reason, StopReason::Threshold);
        // The saturation witness stays in the trace.
        assert_eq!(trace.steps.len(), 2);
    }

    #[test]
    fn winners_dominate_their_tables_and_selection_matches_step_order() {
        let ds = generate_synthetic(60, 7, -2.0, 9).unwrap();
        let cfg = quick_config(3, 2);
        let trace = run_greedy(&ds, &svm_spec(), &cfg).unwrap();
        for record in &trace.steps {
            let winner_mean = record.m;
            for c in &record.table {
                if let Some(m) = c.mean {
                    assert!(winner_mean >= m, "step {}: winner beaten", record.step);
                }
            }
        }
        let order: Vec<usize> = trace.steps.iter().map(|s| s.chosen).collect();
        assert_eq!(trace.selected, order[..trace.k_star].to_vec());
        let mut dedup = trace.selected.clone();
        dedup.dedup();
        assert_eq!(dedup, trace.selected);
        if trace.stop_reason == StopReason::Threshold {
            assert!(trace.k_star < trace.steps.len());
        }
    }

    #[test]
    fn reruns_are_byte_identical() {
        let ds = generate_synthetic(50, 7, -2.0, 3).unwrap();
        let cfg = quick_config(3, 6);
        let a = run_greedy(&ds, &svm_spec(), &cfg).unwrap();
        let b = run_greedy(&ds, &svm_spec(), &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn max_features_caps_the_run() {
        let ds = generate_synthetic(50, 7, -2.0, 3).unwrap();
        let cfg = GreedyConfig {
            max_features: Some(1),
            ..quick_config(3, 6)
        };
        let trace = run_greedy(&ds, &svm_spec(), &cfg).unwrap();
        assert_eq!(trace.stop_reason, StopReason::Cap);
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.k_star, 1);
    }

    #[test]
    fn exhaustion_is_reported_when_every_feature_gets_selected() {
        let ds = generate_synthetic(50, 7, -2.0, 3).unwrap();
        let two = ds.project(&[0, 1]).unwrap();
        let cfg = GreedyConfig {
            tau: 1e-12,
            ..quick_config(3, 4)
        };
        let trace = run_greedy(&two, &svm_spec(), &cfg).unwrap();
        if trace.stop_reason == StopReason::Exhausted {
            assert_eq!(trace.steps.len(), 2);
        } else {
            // A zero-spread tie can still trip the threshold; either way the
            // trace stays well formed.
            assert_eq!(trace.stop_reason, StopReason::Threshold);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let ds = generate_synthetic(50, 7, -2.0, 3).unwrap();
        let one_split = GreedyConfig {
            q: 1,
            ..quick_config(3, 0)
        };
        assert!(run_greedy(&ds, &svm_spec(), &one_split).is_err());
        let bad_tau = GreedyConfig {
            tau: 0.0,
            ..quick_config(3, 0)
        };
        assert!(run_greedy(&ds, &svm_spec(), &bad_tau).is_err());
        let cap_too_big = GreedyConfig {
            max_features: Some(8),
            ..quick_config(3, 0)
        };
        assert!(run_greedy(&ds, &svm_spec(), &cap_too_big).is_err());
        let narrow = ds.project(&[0]).unwrap();
        assert!(run_greedy(&narrow, &svm_spec(), &quick_config(3, 0)).is_err());
    }

    /// Wraps a classifier and flips every prediction.
    struct Flip<C>(C);

    struct FlipModel<M>(M);

    impl<C: Classifier> Classifier for Flip<C> {
        type Model = FlipModel<C::Model>;

        fn fit(&self, train: &Dataset, seed: u64) -> crate::error::Result<Self::Model> {
            Ok(FlipModel(self.0.fit(train, seed)?))
        }

        fn describe(&self) -> String {
            format!("flip({})", self.0.describe())
        }
    }

    impl<M: Fitted> Fitted for FlipModel<M> {
        fn predict(&self, x: ndarray::ArrayView2<'_, f64>) -> crate::error::Result<Vec<i8>> {
            Ok(self.0.predict(x)?.into_iter().map(|l| -l).collect())
        }
    }

    #[test]
    fn flipping_predictions_negates_every_candidate_mean() {
        let ds = generate_synthetic(40, 7, -2.0, 8).unwrap();
        let plan = SplitPlan::new(2, 1.0 / 3.0, 9);
        let splits = make_splits(ds.n(), ds.y(), &plan).unwrap();
        let plain =
            greedy_step(&ds, &[2], &svm_spec(), &splits, Metric::Tss, 1, 5).unwrap();
        let flipped = greedy_step(
            &ds,
            &[2],
            &Flip(svm_spec()),
            &splits,
            Metric::Tss,
            1,
            5,
        )
        .unwrap();
        for (a, b) in plain.table.iter().zip(&flipped.table) {
            assert_eq!(a.feature, b.feature);
            for (sa, sb) in a.scores.iter().zip(&b.scores) {
                match (sa, sb) {
                    (Some(va), Some(vb)) => assert!((va + vb).abs() < 1e-12),
                    (None, None) => {}
                    _ => panic!("score definedness diverged"),
                }
            }
        }
    }

    proptest! {
        #[test]
        fn winner_is_invariant_under_increasing_transforms(
            means in prop::collection::vec(-1.0f64..1.0, 2..10),
            a in 0.05f64..5.0,
            b in -2.0f64..2.0,
        ) {
            let table: Vec<CandidateScore> = means
                .iter()
                .enumerate()
                .map(|(i, &m)| CandidateScore {
                    feature: i,
                    scores: vec![Some(m), Some(m)],
                    mean: Some(m),
                    std: Some(0.0),
                    skipped: 0,
                })
                .collect();
            let affine: Vec<CandidateScore> = table
                .iter()
                .cloned()
                .map(|mut c| {
                    c.mean = c.mean.map(|m| a * m + b);
                    c
                })
                .collect();
            let atan: Vec<CandidateScore> = table
                .iter()
                .cloned()
                .map(|mut c| {
                    c.mean = c.mean.map(f64::atan);
                    c
                })
                .collect();
            prop_assert_eq!(winning_feature(&table), winning_feature(&affine));
            prop_assert_eq!(winning_feature(&table), winning_feature(&atan));
        }
    }

    #[test]
    fn rendered_table_lists_steps_and_the_selected_set() {
        let ds = label_leak_dataset(40, 5, 3, 7);
        let cfg = quick_config(3, 11);
        let trace = run_greedy(&ds, &svm_spec(), &cfg).unwrap();
        let table = trace.render_table();
        assert!(table.contains("x4"));
        assert!(table.contains("threshold"));
        assert!(table.contains("k* = 1"));
        assert!(table.contains("selected: x4"));
    }
}
