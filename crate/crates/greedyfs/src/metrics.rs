//! Confusion-matrix skill scores for ±1 classification.
//!
//! Every score is a closed-form function of the four 2×2 counts. Scores whose
//! defining ratio divides by zero are reported as undefined (`None`, `null`
//! in JSON) rather than raised as errors: small validation slices routinely
//! lack a class, and callers average over the splits that remain.
//!
//! A capacity-style diagnostic sometimes reported next to these scores is
//! the one-line closed form sqrt((s·(ln(2n/s)+1)+ln(4/δ))/n):
//!
//! ```
//! let (s, n, delta) = (3.0_f64, 100.0_f64, 0.05_f64);
//! let capacity = ((s * ((2.0 * n / s).ln() + 1.0) + (4.0 / delta).ln()) / n).sqrt();
//! assert!(capacity > 0.3 && capacity < 0.5);
//! ```

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Counts of a 2×2 contingency table with +1 as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tp: u64,
}

impl ConfusionCounts {
    pub fn new(tn: u64, fp: u64, fn_: u64, tp: u64) -> ConfusionCounts {
        ConfusionCounts { tn, fp, fn_, tp }
    }

    pub fn total(&self) -> u64 {
        self.tn + self.fp + self.fn_ + self.tp
    }

    /// TP / (TP + FN); undefined without positives in the truth.
    pub fn recall(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// TN / (TN + FP); undefined without negatives in the truth.
    pub fn specificity(&self) -> Option<f64> {
        ratio(self.tn, self.tn + self.fp)
    }

    /// TP / (TP + FP); undefined when nothing was predicted positive.
    pub fn precision(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fp)
    }

    /// recall + specificity − 1. Balanced accuracy rescaled to [-1, 1]; 0 for
    /// any constant predictor, 1 only for a perfect one.
    pub fn tss(&self) -> Option<f64> {
        Some(self.recall()? + self.specificity()? - 1.0)
    }

    /// Chance-corrected accuracy of the 2×2 table:
    /// 2(tp·tn − fp·fn) / ((tp+fn)(fn+tn) + (tp+fp)(fp+tn)).
    pub fn hss(&self) -> Option<f64> {
        let (tn, fp, fn_, tp) = self.as_f64();
        let denom = (tp + fn_) * (fn_ + tn) + (tp + fp) * (fp + tn);
        if denom == 0.0 {
            None
        } else {
            Some(2.0 * (tp * tn - fp * fn_) / denom)
        }
    }

    /// Harmonic mean of precision and recall, computed in the 2tp form so it
    /// stays defined whenever any of tp, fp, fn is nonzero.
    pub fn f1(&self) -> Option<f64> {
        let (_, fp, fn_, tp) = self.as_f64();
        let denom = 2.0 * tp + fp + fn_;
        if denom == 0.0 {
            None
        } else {
            Some(2.0 * tp / denom)
        }
    }

    /// Arithmetic mean of recall and specificity.
    pub fn balanced_accuracy(&self) -> Option<f64> {
        Some((self.recall()? + self.specificity()?) / 2.0)
    }

    fn as_f64(&self) -> (f64, f64, f64, f64) {
        (
            self.tn as f64,
            self.fp as f64,
            self.fn_ as f64,
            self.tp as f64,
        )
    }
}

fn ratio(num: u64, denom: u64) -> Option<f64> {
    if denom == 0 {
        None
    } else {
        Some(num as f64 / denom as f64)
    }
}

/// Counts prediction/truth agreement. Both vectors must be equal-length ±1.
pub fn confusion(predicted: &[i8], truth: &[i8]) -> Result<ConfusionCounts> {
    if predicted.len() != truth.len() {
        return Err(Error::config(format!(
            "{} predictions against {} truths",
            predicted.len(),
            truth.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::config("cannot score an empty prediction"));
    }
    let mut c = ConfusionCounts::new(0, 0, 0, 0);
    for (&p, &t) in predicted.iter().zip(truth) {
        if !matches!(p, -1 | 1) || !matches!(t, -1 | 1) {
            return Err(Error::config(format!("labels must be ±1, got ({p}, {t})")));
        }
        match (t, p) {
            (-1, -1) => c.tn += 1,
            (-1, 1) => c.fp += 1,
            (1, -1) => c.fn_ += 1,
            (1, 1) => c.tp += 1,
            _ => unreachable!(),
        }
    }
    Ok(c)
}

/// All seven scores of one table; undefined entries serialize as null.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub tss: Option<f64>,
    pub hss: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub specificity: Option<f64>,
    pub f1: Option<f64>,
    pub balanced_accuracy: Option<f64>,
}

pub fn score_suite(c: &ConfusionCounts) -> ScoreReport {
    ScoreReport {
        tss: c.tss(),
        hss: c.hss(),
        precision: c.precision(),
        recall: c.recall(),
        specificity: c.specificity(),
        f1: c.f1(),
        balanced_accuracy: c.balanced_accuracy(),
    }
}

impl ScoreReport {
    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Tss => self.tss,
            Metric::Hss => self.hss,
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
            Metric::Specificity => self.specificity,
            Metric::F1 => self.f1,
            Metric::BalancedAccuracy => self.balanced_accuracy,
        }
    }

    pub const NAMES: [(&'static str, Metric); 7] = [
        ("tss", Metric::Tss),
        ("hss", Metric::Hss),
        ("precision", Metric::Precision),
        ("recall", Metric::Recall),
        ("specificity", Metric::Specificity),
        ("f1", Metric::F1),
        ("balanced_accuracy", Metric::BalancedAccuracy),
    ];
}

/// A score selected by name, for ranking and search objectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Tss,
    Hss,
    Precision,
    Recall,
    Specificity,
    F1,
    BalancedAccuracy,
}

impl Metric {
    pub fn of(&self, c: &ConfusionCounts) -> Option<f64> {
        score_suite(c).get(*self)
    }

    pub fn name(&self) -> &'static str {
        ScoreReport::NAMES
            .iter()
            .find(|(_, m)| m == self)
            .map(|(n, _)| *n)
            .expect("every metric is named")
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Metric> {
        ScoreReport::NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, m)| *m)
            .ok_or_else(|| {
                Error::config(format!(
                    "unknown metric '{s}' (expected one of: {})",
                    ScoreReport::NAMES.map(|(n, _)| n).join(", ")
                ))
            })
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_hand_counts() {
        let c = confusion(&[1, -1], &[1, -1]).unwrap();
        assert_eq!(c, ConfusionCounts::new(1, 0, 0, 1));

        let c = confusion(&[1, 1], &[-1, -1]).unwrap();
        assert_eq!(c, ConfusionCounts::new(0, 2, 0, 0));

        let c = confusion(&[1, -1, -1, 1], &[1, 1, -1, -1]).unwrap();
        assert_eq!(c, ConfusionCounts::new(1, 1, 1, 1));
    }

    #[test]
    fn confusion_rejects_bad_input() {
        assert!(confusion(&[1], &[1, -1]).is_err());
        assert!(confusion(&[], &[]).is_err());
        assert!(confusion(&[2], &[1]).is_err());
    }

    #[test]
    fn tss_hand_values() {
        assert_eq!(ConfusionCounts::new(1, 0, 0, 1).tss(), Some(1.0));
        assert_eq!(ConfusionCounts::new(50, 50, 25, 25).tss(), Some(0.0));
        // recall 0.8, specificity 0.9
        let c = ConfusionCounts::new(90, 10, 5, 20);
        assert!((c.tss().unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn suite_hand_values() {
        let perfect = score_suite(&ConfusionCounts::new(1, 0, 0, 1));
        for (name, m) in ScoreReport::NAMES {
            assert_eq!(perfect.get(m), Some(1.0), "{name}");
        }

        let c = ConfusionCounts::new(90, 10, 5, 20);
        let r = score_suite(&c);
        assert!((r.precision.unwrap() - 20.0 / 30.0).abs() < 1e-12);
        assert!((r.f1.unwrap() - 2.0 * (2.0 / 3.0 * 0.8) / (2.0 / 3.0 + 0.8)).abs() < 1e-12);
        assert!((r.balanced_accuracy.unwrap() - 0.85).abs() < 1e-12);
        // 2(20·90 − 10·5) / ((20+5)(5+90) + (20+10)(10+90)) = 3500/5375 = 28/43
        assert!((r.hss.unwrap() - 28.0 / 43.0).abs() < 1e-12);
    }

    #[test]
    fn empty_negative_class_flags_the_dependent_scores() {
        let r = score_suite(&ConfusionCounts::new(0, 0, 0, 5));
        assert_eq!(r.recall, Some(1.0));
        assert_eq!(r.specificity, None);
        assert_eq!(r.tss, None);
        assert_eq!(r.balanced_accuracy, None);
        assert_eq!(r.hss, None);
        assert_eq!(r.precision, Some(1.0));
        assert_eq!(r.f1, Some(1.0));
    }

    #[test]
    fn constant_predictors_score_zero_tss() {
        let truth = [1, 1, -1, 1, -1];
        for constant in [-1i8, 1] {
            let pred = [constant; 5];
            let tss = confusion(&pred, &truth).unwrap().tss().unwrap();
            assert_eq!(tss, 0.0);
        }
    }

    #[test]
    fn class_flip_swaps_recall_and_specificity() {
        let pred = [1, -1, 1, 1, -1, -1];
        let truth = [1, 1, -1, 1, -1, 1];
        let c = confusion(&pred, &truth).unwrap();
        let flipped: Vec<i8> = pred.iter().map(|v| -v).collect();
        let truth_flipped: Vec<i8> = truth.iter().map(|v| -v).collect();
        let cf = confusion(&flipped, &truth_flipped).unwrap();
        assert_eq!(c.recall(), cf.specificity());
        assert_eq!(c.specificity(), cf.recall());
        assert_eq!(c.tss(), cf.tss());
    }

    #[test]
    fn independent_tables_have_zero_hss() {
        // tp·tn = fp·fn means predictions carry no information.
        let c = ConfusionCounts::new(6, 3, 4, 2);
        assert_eq!(c.tp * c.tn, c.fp * c.fn_);
        assert_eq!(c.hss(), Some(0.0));
    }

    #[test]
    fn serialization_uses_nulls_for_undefined() {
        let r = score_suite(&ConfusionCounts::new(0, 0, 0, 5));
        let json = serde_json::to_value(r).unwrap();
        assert_eq!(json["recall"], 1.0);
        assert!(json["tss"].is_null());
    }

    #[test]
    fn metric_names_round_trip() {
        for (name, m) in ScoreReport::NAMES {
            assert_eq!(name.parse::<Metric>().unwrap(), m);
            assert_eq!(m.name(), name);
        }
        assert!("auc".parse::<Metric>().is_err());
    }
}
