use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// How to draw train/validation splits: q independent draws, each holding
/// out ceil(n · validation_fraction) examples. Stratified draws keep both
/// classes present in both parts (and error out when that is impossible).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub q: usize,
    pub validation_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl SplitPlan {
    pub fn new(q: usize, validation_fraction: f64, seed: u64) -> SplitPlan {
        SplitPlan {
            q,
            validation_fraction,
            seed,
            stratified: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train_idx: Vec<usize>,
    pub valid_idx: Vec<usize>,
}

/// Draws the plan's q splits. Deterministic in (n, y, plan); index lists come
/// out sorted so the same split always serializes identically.
pub fn make_splits(n: usize, y: &[i8], plan: &SplitPlan) -> Result<Vec<Split>> {
    if y.len() != n {
        return Err(Error::config(format!("n={n} but {} labels", y.len())));
    }
    if plan.q < 1 {
        return Err(Error::config("q must be at least 1"));
    }
    if !(plan.validation_fraction > 0.0 && plan.validation_fraction < 1.0) {
        return Err(Error::config(format!(
            "validation fraction must be in (0,1), got {}",
            plan.validation_fraction
        )));
    }
    let v_total = (n as f64 * plan.validation_fraction).ceil() as usize;
    if v_total < 1 || n - v_total < 2 {
        return Err(Error::config(format!(
            "fraction {} of n={n} leaves {} validation / {} training rows",
            plan.validation_fraction,
            v_total,
            n - v_total
        )));
    }

    let mut rng = stream_rng(plan.seed, Stream::Splits);
    (0..plan.q)
        .map(|_| one_split(n, y, v_total, plan.stratified, &mut rng))
        .collect()
}

fn one_split(
    n: usize,
    y: &[i8],
    v_total: usize,
    stratified: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Split> {
    let mut valid = Vec::with_capacity(v_total);
    if stratified {
        let neg: Vec<usize> = (0..n).filter(|&i| y[i] == -1).collect();
        let pos: Vec<usize> = (0..n).filter(|&i| y[i] == 1).collect();
        for (class, idx) in [(-1, &neg), (1, &pos)] {
            if idx.len() < 2 {
                return Err(Error::Data(format!(
                    "stratified split needs at least 2 examples of class {class}, found {}",
                    idx.len()
                )));
            }
        }
        // Proportional allocation, then clamped so each class keeps at least
        // one example on each side.
        let quota_neg = neg.len() as f64 * v_total as f64 / n as f64;
        let mut v_neg = (quota_neg.round() as usize).clamp(1, neg.len() - 1);
        let v_pos = v_total.saturating_sub(v_neg).clamp(1, pos.len() - 1);
        v_neg = v_total.saturating_sub(v_pos);
        if v_neg < 1 || v_neg > neg.len() - 1 || v_neg + v_pos != v_total {
            return Err(Error::Data(format!(
                "cannot hold out {v_total} of {n} rows with both classes on both sides"
            )));
        }
        for (idx, take) in [(neg, v_neg), (pos, v_pos)] {
            let mut shuffled = idx;
            shuffled.shuffle(rng);
            valid.extend_from_slice(&shuffled[..take]);
        }
    } else {
        let mut all: Vec<usize> = (0..n).collect();
        all.shuffle(rng);
        valid.extend_from_slice(&all[..v_total]);
    }
    valid.sort_unstable();
    let in_valid = {
        let mut mask = vec![false; n];
        for &i in &valid {
            mask[i] = true;
        }
        mask
    };
    let train: Vec<usize> = (0..n).filter(|&i| !in_valid[i]).collect();
    Ok(Split {
        train_idx: train,
        valid_idx: valid,
    })
}

/// Stratified k-fold partition: per class, indices are shuffled and dealt
/// round-robin, so fold sizes differ by at most one per class. Fold t's
/// members form the validation part of split t.
pub fn stratified_kfold(y: &[i8], folds: usize, seed: u64) -> Result<Vec<Split>> {
    if folds < 2 {
        return Err(Error::config("k-fold needs at least 2 folds"));
    }
    let n = y.len();
    let neg: Vec<usize> = (0..n).filter(|&i| y[i] == -1).collect();
    let pos: Vec<usize> = (0..n).filter(|&i| y[i] == 1).collect();
    let minority = neg.len().min(pos.len());
    if folds > minority {
        return Err(Error::Data(format!(
            "{folds} folds but the minority class has only {minority} examples"
        )));
    }
    let mut rng = stream_rng(seed, Stream::Search);
    let mut fold_of = vec![0usize; n];
    for idx in [neg, pos] {
        let mut shuffled = idx;
        shuffled.shuffle(&mut rng);
        for (pos_in_class, &i) in shuffled.iter().enumerate() {
            fold_of[i] = pos_in_class % folds;
        }
    }
    Ok((0..folds)
        .map(|t| {
            let valid: Vec<usize> = (0..n).filter(|&i| fold_of[i] == t).collect();
            let train: Vec<usize> = (0..n).filter(|&i| fold_of[i] != t).collect();
            Split {
                train_idx: train,
                valid_idx: valid,
            }
        })
        .collect())
}
