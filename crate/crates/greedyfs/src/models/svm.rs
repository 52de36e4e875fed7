//! Soft-margin SVM with a Gaussian kernel, trained by sequential minimal
//! optimization.
//!
//! The solver is Platt's SMO with the usual working-set heuristics: sweeps
//! alternate between all points and the non-bound subset, the second index of
//! a pair is chosen to maximize |E1 - E2| among non-bound points, and two
//! randomized fallback scans (seeded, so runs are reproducible) kick in when
//! that choice makes no progress. Margins are cached and updated in O(n) per
//! step, so one pass never recomputes kernel rows.
//!
//! Training expects standardized features; callers standardize per split
//! before fitting, which keeps the default `gamma = 1/d` meaningful.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};
use ndarray::ArrayView2;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Hyperparameters for [`train_svm_smo`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmConfig {
    /// Box constraint on the dual variables.
    pub c: f64,
    /// Kernel width; `None` resolves to `1/d` at fit time.
    pub gamma: Option<f64>,
    /// KKT tolerance the solver drives violations below.
    pub tol: f64,
    /// Cap on full sweeps over the training set before giving up.
    pub max_passes: usize,
    /// Seeds the fallback pair-selection scans.
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            c: 1.0,
            gamma: None,
            tol: 1e-3,
            max_passes: 50,
            seed: 0,
        }
    }
}

/// A fitted kernel SVM. `coef[i]` is `alpha[i] * y[i]` for the i-th support
/// vector, so the decision value at x is `sum_i coef[i] k(sv_i, x) + bias`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub dim: usize,
    pub gamma: f64,
    pub c: f64,
    pub bias: f64,
    pub support: Vec<Vec<f64>>,
    pub coef: Vec<f64>,
    pub alphas: Vec<f64>,
    /// Largest KKT violation at the final iterate.
    pub kkt_violation: f64,
    /// False when the sweep cap was hit before the violations dropped
    /// below tolerance.
    pub converged: bool,
}

impl SvmModel {
    pub fn n_support(&self) -> usize {
        self.support.len()
    }

    /// Signed margin for each row of `x`.
    pub fn decision_function(&self, x: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        if x.ncols() != self.dim {
            return Err(Error::data(format!(
                "model expects {} features, got {}",
                self.dim,
                x.ncols()
            )));
        }
        let mut out = Vec::with_capacity(x.nrows());
        for row in x.rows() {
            let mut f = self.bias;
            for (sv, &w) in self.support.iter().zip(&self.coef) {
                let mut dist2 = 0.0;
                for (a, b) in sv.iter().zip(row.iter()) {
                    let d = a - b;
                    dist2 += d * d;
                }
                f += w * (-self.gamma * dist2).exp();
            }
            out.push(f);
        }
        Ok(out)
    }

    /// Labels rows of `x`; a decision value of exactly zero maps to +1.
    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<i8>> {
        Ok(self
            .decision_function(x)?
            .into_iter()
            .map(|f| if f >= 0.0 { 1 } else { -1 })
            .collect())
    }
}

/// How many refinement sweeps over the non-bound subset may run between two
/// full sweeps. Each such sweep must change at least one pair to continue, so
/// this only guards against floating-point limit cycles.
const MAX_INNER_SWEEPS: usize = 100;

struct Smo<'a> {
    gram: Vec<f64>,
    y: &'a [i8],
    n: usize,
    c: f64,
    tol: f64,
    alpha: Vec<f64>,
    /// Margin without bias: g[i] = sum_j alpha[j] y[j] K(i, j).
    g: Vec<f64>,
    b: f64,
    rng: rand_chacha::ChaCha8Rng,
}

impl Smo<'_> {
    fn k(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.n + j]
    }

    fn error(&self, i: usize) -> f64 {
        self.g[i] + self.b - f64::from(self.y[i])
    }

    fn non_bound(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.c
    }

    /// Jointly optimizes the pair (i1, i2). Returns true when either alpha
    /// actually moved.
    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1_old, a2_old) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (f64::from(self.y[i1]), f64::from(self.y[i2]));
        let s = y1 * y2;
        let (e1, e2) = (self.error(i1), self.error(i2));

        let (lo, hi) = if s < 0.0 {
            ((a2_old - a1_old).max(0.0), (self.c + a2_old - a1_old).min(self.c))
        } else {
            ((a1_old + a2_old - self.c).max(0.0), (a1_old + a2_old).min(self.c))
        };
        if lo >= hi {
            return false;
        }

        let (k11, k12, k22) = (self.k(i1, i1), self.k(i1, i2), self.k(i2, i2));
        let eta = k11 + k22 - 2.0 * k12;
        let a2 = if eta > 0.0 {
            (a2_old + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            // The objective is linear along the constraint segment, so the
            // optimum sits at one of the ends.
            let f1 = y1 * e1 - a1_old * k11 - s * a2_old * k12;
            let f2 = y2 * e2 - s * a1_old * k12 - a2_old * k22;
            let l1 = a1_old + s * (a2_old - lo);
            let h1 = a1_old + s * (a2_old - hi);
            let obj_lo =
                l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12;
            let obj_hi =
                h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if obj_lo < obj_hi - 1e-12 {
                lo
            } else if obj_lo > obj_hi + 1e-12 {
                hi
            } else {
                return false;
            }
        };
        if !a2.is_finite() || (a2 - a2_old).abs() < 1e-10 * (a2 + a2_old + 1e-10) {
            return false;
        }
        // Keep both multipliers exactly inside the box; the clamp absorbs
        // the last-ulp drift from the update arithmetic.
        let a1 = (a1_old + s * (a2_old - a2)).clamp(0.0, self.c);

        let (d1, d2) = (y1 * (a1 - a1_old), y2 * (a2 - a2_old));
        // Choose the bias that zeroes the error of a freshly free multiplier.
        let b1 = self.b - e1 - d1 * k11 - d2 * k12;
        let b2 = self.b - e2 - d1 * k12 - d2 * k22;
        self.b = if a1 > 0.0 && a1 < self.c {
            b1
        } else if a2 > 0.0 && a2 < self.c {
            b2
        } else {
            (b1 + b2) / 2.0
        };
        for j in 0..self.n {
            self.g[j] += d1 * self.k(i1, j) + d2 * self.k(i2, j);
        }
        self.alpha[i1] = a1;
        self.alpha[i2] = a2;
        true
    }

    /// Checks i2 against the KKT conditions and, when it violates them,
    /// tries pair partners in decreasing order of expected progress.
    fn examine(&mut self, i2: usize) -> bool {
        let e2 = self.error(i2);
        let r2 = e2 * f64::from(self.y[i2]);
        let violates =
            (r2 < -self.tol && self.alpha[i2] < self.c) || (r2 > self.tol && self.alpha[i2] > 0.0);
        if !violates {
            return false;
        }

        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.n {
            if j != i2 && self.non_bound(j) {
                let gap = (self.error(j) - e2).abs();
                if best.is_none_or(|(_, g)| gap > g) {
                    best = Some((j, gap));
                }
            }
        }
        if let Some((i1, _)) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }

        let start = self.rng.gen_range(0..self.n);
        for off in 0..self.n {
            let j = (start + off) % self.n;
            if j != i2 && self.non_bound(j) && self.take_step(j, i2) {
                return true;
            }
        }
        let start = self.rng.gen_range(0..self.n);
        for off in 0..self.n {
            let j = (start + off) % self.n;
            if j != i2 && self.take_step(j, i2) {
                return true;
            }
        }
        false
    }

    fn max_kkt_violation(&self, bias: f64) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            let yf = f64::from(self.y[i]) * (self.g[i] + bias);
            let v = if self.alpha[i] <= 0.0 {
                1.0 - yf
            } else if self.alpha[i] >= self.c {
                yf - 1.0
            } else {
                (yf - 1.0).abs()
            };
            worst = worst.max(v);
        }
        worst.max(0.0)
    }
}

/// Trains an RBF-kernel SVM on `train`, which must contain both classes.
pub fn train_svm_smo(train: &Dataset, cfg: &SvmConfig) -> Result<SvmModel> {
    if cfg.c <= 0.0 || cfg.c.is_nan() {
        return Err(Error::config("SVM C must be positive"));
    }
    if cfg.tol <= 0.0 || cfg.tol.is_nan() {
        return Err(Error::config("SVM tolerance must be positive"));
    }
    if cfg.max_passes == 0 {
        return Err(Error::config("SVM max_passes must be at least 1"));
    }
    let gamma = cfg.gamma.unwrap_or(1.0 / train.d() as f64);
    if gamma <= 0.0 || !gamma.is_finite() {
        return Err(Error::config("SVM gamma must be positive and finite"));
    }
    if !train.has_both_classes() {
        return Err(Error::data("SVM training data must contain both classes"));
    }

    let n = train.n();
    let x = train.x();
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        gram[i * n + i] = 1.0;
        for j in (i + 1)..n {
            let mut dist2 = 0.0;
            for (a, b) in x.row(i).iter().zip(x.row(j).iter()) {
                let d = a - b;
                dist2 += d * d;
            }
            let k = (-gamma * dist2).exp();
            gram[i * n + j] = k;
            gram[j * n + i] = k;
        }
    }

    let mut smo = Smo {
        gram,
        y: train.y(),
        n,
        c: cfg.c,
        tol: cfg.tol,
        alpha: vec![0.0; n],
        g: vec![0.0; n],
        b: 0.0,
        rng: stream_rng(cfg.seed, Stream::Model),
    };

    let mut converged = false;
    let mut full_sweeps = 0;
    loop {
        full_sweeps += 1;
        let mut changed = 0usize;
        for i in 0..n {
            changed += usize::from(smo.examine(i));
        }
        if changed == 0 {
            converged = true;
            break;
        }
        if full_sweeps >= cfg.max_passes {
            break;
        }
        let mut inner = 0;
        loop {
            let mut changed = 0usize;
            for i in 0..n {
                if smo.non_bound(i) {
                    changed += usize::from(smo.examine(i));
                }
            }
            inner += 1;
            if changed == 0 || inner >= MAX_INNER_SWEEPS {
                break;
            }
        }
    }

    // Recompute the bias from the final multipliers instead of trusting the
    // running value: average y - g over free support vectors when there are
    // any, otherwise the midpoint of the feasible interval the bound points
    // leave open.
    let free: Vec<usize> = (0..n).filter(|&i| smo.non_bound(i)).collect();
    let bias = if free.is_empty() {
        let mut b_lo = f64::NEG_INFINITY;
        let mut b_up = f64::INFINITY;
        for i in 0..n {
            let edge = f64::from(smo.y[i]) - smo.g[i];
            let at_zero = smo.alpha[i] <= 0.0;
            if (at_zero && smo.y[i] == 1) || (!at_zero && smo.y[i] == -1) {
                b_lo = b_lo.max(edge);
            } else {
                b_up = b_up.min(edge);
            }
        }
        match (b_lo.is_finite(), b_up.is_finite()) {
            (true, true) => (b_lo + b_up) / 2.0,
            (true, false) => b_lo,
            (false, true) => b_up,
            (false, false) => 0.0,
        }
    } else {
        free.iter()
            .map(|&i| f64::from(smo.y[i]) - smo.g[i])
            .sum::<f64>()
            / free.len() as f64
    };

    let kkt_violation = smo.max_kkt_violation(bias);

    let mut support = Vec::new();
    let mut coef = Vec::new();
    let mut alphas = Vec::new();
    for i in 0..n {
        if smo.alpha[i] > 0.0 {
            support.push(x.row(i).to_vec());
            coef.push(smo.alpha[i] * f64::from(smo.y[i]));
            alphas.push(smo.alpha[i]);
        }
    }

    Ok(SvmModel {
        dim: train.d(),
        gamma,
        c: cfg.c,
        bias,
        support,
        coef,
        alphas,
        kkt_violation,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::generate_synthetic;
    use crate::metrics::confusion;
    use ndarray::array;

    fn dataset(x: ndarray::Array2<f64>, y: Vec<i8>) -> Dataset {
        let names = (1..=x.ncols()).map(|j| format!("x{j}")).collect();
        Dataset::new(x, y, names).unwrap()
    }

    #[test]
    fn xor_with_rbf_kernel_fits_perfectly() {
        let ds = dataset(
            array![[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]],
            vec![1, 1, -1, -1],
        );
        let cfg = SvmConfig {
            c: 10.0,
            gamma: Some(1.0),
            ..SvmConfig::default()
        };
        let model = train_svm_smo(&ds, &cfg).unwrap();
        let preds = model.predict(ds.x()).unwrap();
        assert_eq!(preds, ds.y());
        let counts = confusion(&preds, ds.y()).unwrap();
        assert_eq!(counts.tss(), Some(1.0));
        assert!(model.converged);
        assert!(model.kkt_violation <= cfg.tol);
    }

    #[test]
    fn two_points_recover_the_analytic_solution() {
        // With one point per class the dual has a closed form: both alphas
        // equal 1 / (1 - k12) and the bias vanishes by symmetry.
        let ds = dataset(array![[-1.0], [1.0]], vec![-1, 1]);
        let cfg = SvmConfig {
            c: 10.0,
            gamma: Some(1.0),
            ..SvmConfig::default()
        };
        let model = train_svm_smo(&ds, &cfg).unwrap();
        let expected_alpha = 1.0 / (1.0 - (-4.0f64).exp());
        assert_eq!(model.n_support(), 2);
        for &a in &model.alphas {
            assert!((a - expected_alpha).abs() < 1e-9, "alpha = {a}");
        }
        assert!(model.bias.abs() < 1e-9);
        assert_eq!(model.predict(ds.x()).unwrap(), ds.y());
    }

    #[test]
    fn gamma_defaults_to_one_over_dimension() {
        let ds = generate_synthetic(30, 8, -8.0, 11).unwrap();
        let model = train_svm_smo(&ds, &SvmConfig::default()).unwrap();
        assert_eq!(model.gamma, 1.0 / 8.0);
    }

    #[test]
    fn training_is_deterministic_for_a_seed() {
        let ds = generate_synthetic(60, 7, -2.0, 4).unwrap();
        let cfg = SvmConfig {
            seed: 9,
            ..SvmConfig::default()
        };
        let a = train_svm_smo(&ds, &cfg).unwrap();
        let b = train_svm_smo(&ds, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn multipliers_stay_inside_the_box() {
        // Overlapping classes force some multipliers to the C bound.
        let ds = generate_synthetic(80, 7, -2.0, 2).unwrap();
        let cfg = SvmConfig {
            c: 0.5,
            ..SvmConfig::default()
        };
        let model = train_svm_smo(&ds, &cfg).unwrap();
        assert!(!model.alphas.is_empty());
        assert!(model.alphas.contains(&cfg.c));
        for (&a, (&w, sv)) in model
            .alphas
            .iter()
            .zip(model.coef.iter().zip(&model.support))
        {
            assert!((0.0..=cfg.c).contains(&a));
            assert_eq!(w.abs(), a);
            assert_eq!(sv.len(), 7);
        }
    }

    #[test]
    fn duplicate_points_are_handled() {
        // Identical rows make eta exactly zero, exercising the segment-end
        // branch of the pair update.
        let ds = dataset(
            array![[0.0], [0.0], [1.0], [1.0], [0.0], [1.0]],
            vec![-1, -1, 1, 1, -1, 1],
        );
        let model = train_svm_smo(&ds, &SvmConfig::default()).unwrap();
        assert!(model.bias.is_finite());
        assert_eq!(model.predict(ds.x()).unwrap(), ds.y());
    }

    #[test]
    fn zero_decision_value_maps_to_positive() {
        let model = SvmModel {
            dim: 1,
            gamma: 1.0,
            c: 1.0,
            bias: 0.0,
            support: vec![],
            coef: vec![],
            alphas: vec![],
            kkt_violation: 0.0,
            converged: true,
        };
        assert_eq!(model.predict(array![[3.0]].view()).unwrap(), vec![1]);
    }

    #[test]
    fn rejects_bad_configs_and_single_class_data() {
        let ds = dataset(array![[0.0], [1.0]], vec![1, 1]);
        assert!(train_svm_smo(&ds, &SvmConfig::default()).is_err());

        let ds = dataset(array![[0.0], [1.0]], vec![-1, 1]);
        let bad_c = SvmConfig {
            c: 0.0,
            ..SvmConfig::default()
        };
        assert!(train_svm_smo(&ds, &bad_c).is_err());
        let bad_gamma = SvmConfig {
            gamma: Some(-1.0),
            ..SvmConfig::default()
        };
        assert!(train_svm_smo(&ds, &bad_gamma).is_err());
    }

    #[test]
    fn predict_checks_the_feature_count() {
        let ds = dataset(array![[0.0, 0.0], [1.0, 1.0]], vec![-1, 1]);
        let model = train_svm_smo(&ds, &SvmConfig::default()).unwrap();
        assert!(model.predict(array![[1.0]].view()).is_err());
    }
}
