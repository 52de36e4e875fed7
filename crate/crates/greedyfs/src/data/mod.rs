//! Datasets and the plumbing around them: the synthetic generator, CSV
//! ingestion, window aggregation, train/validation splitting, feature
//! standardization and projection.

mod csv_io;
mod splits;
mod synth;

pub use csv_io::{load_csv, write_csv};
pub use splits::{make_splits, stratified_kfold, Split, SplitPlan};
pub use synth::{eval_test_function, generate_synthetic};

use crate::error::{Error, Result};
use ndarray::{Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

/// A binary-classification sample: n rows of d features with ±1 labels.
///
/// Construction validates the invariants once (finite entries, labels exactly
/// ±1, consistent shapes), so downstream code can rely on them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Array2<f64>,
    y: Vec<i8>,
    names: Vec<String>,
}

impl Dataset {
    pub fn new(x: Array2<f64>, y: Vec<i8>, names: Vec<String>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::data(format!(
                "{} feature rows but {} labels",
                x.nrows(),
                y.len()
            )));
        }
        if x.ncols() != names.len() {
            return Err(Error::data(format!(
                "{} feature columns but {} names",
                x.ncols(),
                names.len()
            )));
        }
        if let Some(v) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::data(format!("non-finite feature value {v}")));
        }
        if let Some(l) = y.iter().find(|l| **l != 1 && **l != -1) {
            return Err(Error::data(format!("label {l} is not -1 or +1")));
        }
        Ok(Dataset { x, y, names })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn d(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> ArrayView2<'_, f64> {
        self.x.view()
    }

    pub fn y(&self) -> &[i8] {
        &self.y
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// (negatives, positives)
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.y.iter().filter(|&&l| l == 1).count();
        (self.y.len() - pos, pos)
    }

    pub fn has_both_classes(&self) -> bool {
        let (neg, pos) = self.class_counts();
        neg > 0 && pos > 0
    }

    /// Restricts (and reorders) columns to `keep`. Labels are untouched.
    /// An empty or repeating `keep` is an error: a zero-feature classifier is
    /// meaningless and a duplicated column is almost certainly a caller bug.
    pub fn project(&self, keep: &[usize]) -> Result<Dataset> {
        if keep.is_empty() {
            return Err(Error::config("cannot project onto zero features"));
        }
        let mut seen = vec![false; self.d()];
        for &j in keep {
            if j >= self.d() {
                return Err(Error::config(format!(
                    "feature index {j} out of range for d={}",
                    self.d()
                )));
            }
            if seen[j] {
                return Err(Error::config(format!("feature index {j} repeated")));
            }
            seen[j] = true;
        }
        let x = self.x.select(Axis(1), keep);
        let names = keep.iter().map(|&j| self.names[j].clone()).collect();
        Ok(Dataset {
            x,
            y: self.y.clone(),
            names,
        })
    }

    /// Restricts rows to `idx` (repeats allowed; this is plain row gathering).
    pub fn rows(&self, idx: &[usize]) -> Dataset {
        let x = self.x.select(Axis(0), idx);
        let y = idx.iter().map(|&i| self.y[i]).collect();
        Dataset {
            x,
            y,
            names: self.names.clone(),
        }
    }

    /// Collapses consecutive windows of `m` raw rows into their mean; the
    /// window's label is +1 if any raw label in it is +1. Rows past the last
    /// full window are dropped.
    pub fn aggregate_by_window(&self, m: usize) -> Result<Dataset> {
        if m == 0 {
            return Err(Error::config("window length must be at least 1"));
        }
        if m > self.n() {
            return Err(Error::data(format!(
                "window length {m} exceeds the {} available rows",
                self.n()
            )));
        }
        let n_out = self.n() / m;
        let mut x = Array2::zeros((n_out, self.d()));
        let mut y = Vec::with_capacity(n_out);
        for i in 0..n_out {
            let window = self.x.slice(ndarray::s![i * m..(i + 1) * m, ..]);
            let mean = window.mean_axis(Axis(0)).expect("window is non-empty");
            x.row_mut(i).assign(&mean);
            let any_pos = self.y[i * m..(i + 1) * m].contains(&1);
            y.push(if any_pos { 1 } else { -1 });
        }
        Dataset {
            x,
            y,
            names: self.names.clone(),
        }
        .validated()
    }

    fn validated(self) -> Result<Dataset> {
        Dataset::new(self.x, self.y, self.names)
    }
}

/// Per-feature affine map fitted on training data: v ↦ (v − mean) / std with
/// population (1/n) standard deviation. Features that are constant in
/// training (std = 0) map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Scaler {
    pub fn fit(x: ArrayView2<'_, f64>) -> Scaler {
        let n = x.nrows() as f64;
        let mut means = Vec::with_capacity(x.ncols());
        let mut stds = Vec::with_capacity(x.ncols());
        for col in x.axis_iter(Axis(1)) {
            let mean = col.sum() / n;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            means.push(mean);
            stds.push(var.sqrt());
        }
        Scaler { means, stds }
    }

    pub fn transform(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.means.len() {
            return Err(Error::config(format!(
                "scaler fitted on {} features, got {}",
                self.means.len(),
                x.ncols()
            )));
        }
        let mut out = x.to_owned();
        for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
            let (m, s) = (self.means[j], self.stds[j]);
            if s == 0.0 {
                col.fill(0.0);
            } else {
                col.mapv_inplace(|v| (v - m) / s);
            }
        }
        Ok(out)
    }
}

/// Fits a scaler on `train` and applies it to `train` and every dataset in
/// `others` (validation/test parts share the training statistics).
pub fn standardize(train: &Dataset, others: &[&Dataset]) -> Result<(Dataset, Vec<Dataset>, Scaler)> {
    let scaler = Scaler::fit(train.x());
    let train_x = scaler.transform(train.x())?;
    let train_std = Dataset::new(train_x, train.y().to_vec(), train.names().to_vec())?;
    let mut others_std = Vec::with_capacity(others.len());
    for ds in others {
        let x = scaler.transform(ds.x())?;
        others_std.push(Dataset::new(x, ds.y().to_vec(), ds.names().to_vec())?);
    }
    Ok((train_std, others_std, scaler))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn names(d: usize) -> Vec<String> {
        (1..=d).map(|j| format!("x{j}")).collect()
    }

    #[test]
    fn new_rejects_bad_labels_and_shapes() {
        let x = array![[0.0], [1.0]];
        assert!(Dataset::new(x.clone(), vec![1, 2], names(1)).is_err());
        assert!(Dataset::new(x.clone(), vec![1], names(1)).is_err());
        assert!(Dataset::new(x.clone(), vec![1, -1], names(2)).is_err());
        assert!(Dataset::new(array![[f64::NAN], [0.0]], vec![1, -1], names(1)).is_err());
        assert!(Dataset::new(x, vec![1, -1], names(1)).is_ok());
    }

    #[test]
    fn project_identity_and_reorder() {
        let ds = Dataset::new(
            array![[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]],
            vec![1, -1],
            names(3),
        )
        .unwrap();
        let same = ds.project(&[0, 1, 2]).unwrap();
        assert_eq!(same, ds);
        // Projecting twice with the identity changes nothing further.
        assert_eq!(same.project(&[0, 1, 2]).unwrap(), same);

        let swapped = ds.project(&[2, 0]).unwrap();
        assert_eq!(swapped.names(), &["x3".to_string(), "x1".to_string()]);
        assert_eq!(swapped.x()[[0, 0]], 3.0);
        assert_eq!(swapped.x()[[0, 1]], 1.0);
    }

    #[test]
    fn project_rejects_empty_dupes_and_range() {
        let ds = Dataset::new(array![[1.0, 2.0], [3.0, 4.0]], vec![1, -1], names(2)).unwrap();
        assert!(ds.project(&[]).is_err());
        assert!(ds.project(&[0, 0]).is_err());
        assert!(ds.project(&[2]).is_err());
    }

    #[test]
    fn aggregate_means_and_any_positive_labels() {
        let ds = Dataset::new(
            array![[0.0], [2.0], [4.0], [6.0]],
            vec![-1, -1, 1, -1],
            names(1),
        )
        .unwrap();
        let agg = ds.aggregate_by_window(2).unwrap();
        assert_eq!(agg.n(), 2);
        assert_eq!(agg.x()[[0, 0]], 1.0);
        assert_eq!(agg.x()[[1, 0]], 5.0);
        assert_eq!(agg.y(), &[-1, 1]);
    }

    #[test]
    fn aggregate_window_one_is_identity() {
        let ds = Dataset::new(array![[1.5, 2.5], [3.5, 4.5]], vec![1, -1], names(2)).unwrap();
        assert_eq!(ds.aggregate_by_window(1).unwrap(), ds);
    }

    #[test]
    fn aggregate_constant_rows_stay_constant() {
        let ds = Dataset::new(
            Array2::from_elem((6, 2), 3.25),
            vec![1, 1, 1, -1, -1, -1],
            names(2),
        )
        .unwrap();
        let agg = ds.aggregate_by_window(3).unwrap();
        assert!(agg.x().iter().all(|&v| v == 3.25));
    }

    #[test]
    fn aggregate_rejects_oversized_window() {
        let ds = Dataset::new(array![[1.0], [2.0]], vec![1, -1], names(1)).unwrap();
        assert!(ds.aggregate_by_window(3).is_err());
        assert!(ds.aggregate_by_window(0).is_err());
    }

    #[test]
    fn standardize_matches_hand_computation() {
        // Column (1, 3): mean 2, population std 1, so values map to (-1, 1).
        let train = Dataset::new(array![[1.0], [3.0]], vec![1, -1], names(1)).unwrap();
        let valid = Dataset::new(array![[5.0]], vec![1], names(1)).unwrap();
        let (t, v, scaler) = standardize(&train, &[&valid]).unwrap();
        assert_eq!(scaler.means, vec![2.0]);
        assert_eq!(scaler.stds, vec![1.0]);
        assert_eq!(t.x()[[0, 0]], -1.0);
        assert_eq!(t.x()[[1, 0]], 1.0);
        assert_eq!(v[0].x()[[0, 0]], 3.0);
    }

    #[test]
    fn standardize_maps_constant_columns_to_zero() {
        let train = Dataset::new(array![[7.0], [7.0]], vec![1, -1], names(1)).unwrap();
        let (t, _, scaler) = standardize(&train, &[]).unwrap();
        assert_eq!(scaler.stds, vec![0.0]);
        assert!(t.x().iter().all(|&v| v == 0.0));
    }
}
