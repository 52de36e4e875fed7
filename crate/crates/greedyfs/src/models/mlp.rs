//! Compact feed-forward network for binary labels.
//!
//! ReLU hidden layers, a single sigmoid output unit, binary cross-entropy
//! loss, Adam updates. The first two weight matrices carry an L2 penalty.
//! When the training set is large enough a stratified holdout is split off
//! internally and training stops once its loss fails to improve for
//! `patience` consecutive epochs, restoring the best weights seen.

use crate::data::{make_splits, Dataset, SplitPlan};
use crate::error::{Error, Result};
use crate::rng::{mix, stream_rng, Stream};
use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;
const PROB_CLAMP: f64 = 1e-12;
/// Fraction of the training data held out for early stopping.
const HOLDOUT_FRACTION: f64 = 0.2;
/// Below this many examples no holdout is split off.
const MIN_FOR_HOLDOUT: usize = 10;

/// Hyperparameters for [`train_mlp`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MlpConfig {
    pub hidden_widths: Vec<usize>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch: usize,
    /// L2 strength applied to the first two weight matrices.
    pub l2_first_layers: f64,
    /// Epochs without holdout improvement before stopping; 0 disables
    /// early stopping.
    pub patience: usize,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden_widths: vec![16, 8],
            learning_rate: 1e-3,
            epochs: 200,
            batch: 64,
            l2_first_layers: 0.01,
            patience: 10,
            seed: 0,
        }
    }
}

/// One dense layer; `w` is stored row-per-output-unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpLayer {
    pub w: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

/// A trained network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub dim: usize,
    pub layers: Vec<MlpLayer>,
    pub epochs_run: usize,
    pub stopped_early: bool,
}

impl MlpModel {
    /// Probability of the positive class for each row.
    pub fn probabilities(&self, x: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        if x.ncols() != self.dim {
            return Err(Error::data(format!(
                "model expects {} features, got {}",
                self.dim,
                x.ncols()
            )));
        }
        let net = Net::from_layers(&self.layers);
        let acts = net.forward(x);
        Ok(acts.last().expect("forward output").column(0).to_vec())
    }

    /// Labels rows of `x`; probability exactly 0.5 maps to +1.
    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<i8>> {
        Ok(self
            .probabilities(x)?
            .into_iter()
            .map(|p| if p >= 0.5 { 1 } else { -1 })
            .collect())
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[derive(Clone)]
struct Net {
    ws: Vec<Array2<f64>>,
    bs: Vec<Array1<f64>>,
}

impl Net {
    /// Glorot-uniform weights, zero biases. `dims` runs input to output.
    fn init(dims: &[usize], rng: &mut rand_chacha::ChaCha8Rng) -> Net {
        let mut ws = Vec::new();
        let mut bs = Vec::new();
        for pair in dims.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            ws.push(Array2::from_shape_fn((fan_out, fan_in), |_| {
                rng.gen_range(-limit..limit)
            }));
            bs.push(Array1::zeros(fan_out));
        }
        Net { ws, bs }
    }

    fn from_layers(layers: &[MlpLayer]) -> Net {
        let ws = layers
            .iter()
            .map(|l| {
                let rows = l.w.len();
                let cols = l.w.first().map_or(0, Vec::len);
                Array2::from_shape_fn((rows, cols), |(i, j)| l.w[i][j])
            })
            .collect();
        let bs = layers
            .iter()
            .map(|l| Array1::from_vec(l.b.clone()))
            .collect();
        Net { ws, bs }
    }

    fn to_layers(&self) -> Vec<MlpLayer> {
        self.ws
            .iter()
            .zip(&self.bs)
            .map(|(w, b)| MlpLayer {
                w: w.rows().into_iter().map(|r| r.to_vec()).collect(),
                b: b.to_vec(),
            })
            .collect()
    }

    /// Activations per layer; index 0 is the input, the last entry holds
    /// probabilities.
    fn forward(&self, x: ArrayView2<'_, f64>) -> Vec<Array2<f64>> {
        let mut acts = Vec::with_capacity(self.ws.len() + 1);
        acts.push(x.to_owned());
        for (l, (w, b)) in self.ws.iter().zip(&self.bs).enumerate() {
            let z = acts.last().expect("non-empty").dot(&w.t()) + b;
            let a = if l + 1 == self.ws.len() {
                z.mapv(sigmoid)
            } else {
                z.mapv(|v| v.max(0.0))
            };
            acts.push(a);
        }
        acts
    }

    fn l2_penalty(&self, l2: f64) -> f64 {
        self.ws
            .iter()
            .take(2)
            .map(|w| 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>())
            .sum()
    }

    fn loss(&self, x: ArrayView2<'_, f64>, t: &Array1<f64>, l2: f64) -> f64 {
        let acts = self.forward(x);
        bce(acts.last().expect("forward output"), t) + self.l2_penalty(l2)
    }

    /// Loss and its gradient with respect to every weight and bias.
    fn grads(
        &self,
        x: ArrayView2<'_, f64>,
        t: &Array1<f64>,
        l2: f64,
    ) -> (f64, Vec<Array2<f64>>, Vec<Array1<f64>>) {
        let layers = self.ws.len();
        let acts = self.forward(x);
        let p = acts.last().expect("forward output");
        let loss = bce(p, t) + self.l2_penalty(l2);

        let n = x.nrows() as f64;
        // Sigmoid plus cross-entropy collapses to this residual.
        let mut delta = (p - &t.view().insert_axis(Axis(1))) / n;
        let mut gw = vec![Array2::zeros((0, 0)); layers];
        let mut gb = vec![Array1::zeros(0); layers];
        for l in (0..layers).rev() {
            gw[l] = delta.t().dot(&acts[l]);
            gb[l] = delta.sum_axis(Axis(0));
            if l < 2 {
                gw[l] = &gw[l] + &(l2 * &self.ws[l]);
            }
            if l > 0 {
                let mask = acts[l].mapv(|a| if a > 0.0 { 1.0 } else { 0.0 });
                delta = delta.dot(&self.ws[l]) * mask;
            }
        }
        (loss, gw, gb)
    }
}

fn bce(p: &Array2<f64>, t: &Array1<f64>) -> f64 {
    let n = p.nrows() as f64;
    p.column(0)
        .iter()
        .zip(t.iter())
        .map(|(&p, &t)| {
            let p = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
            -(t * p.ln() + (1.0 - t) * (1.0 - p).ln())
        })
        .sum::<f64>()
        / n
}

struct Adam {
    m_w: Vec<Array2<f64>>,
    v_w: Vec<Array2<f64>>,
    m_b: Vec<Array1<f64>>,
    v_b: Vec<Array1<f64>>,
    steps: i32,
    lr: f64,
}

impl Adam {
    fn new(net: &Net, lr: f64) -> Adam {
        Adam {
            m_w: net.ws.iter().map(|w| Array2::zeros(w.raw_dim())).collect(),
            v_w: net.ws.iter().map(|w| Array2::zeros(w.raw_dim())).collect(),
            m_b: net.bs.iter().map(|b| Array1::zeros(b.raw_dim())).collect(),
            v_b: net.bs.iter().map(|b| Array1::zeros(b.raw_dim())).collect(),
            steps: 0,
            lr,
        }
    }

    fn step(&mut self, net: &mut Net, gw: &[Array2<f64>], gb: &[Array1<f64>]) {
        self.steps += 1;
        let c1 = 1.0 - BETA1.powi(self.steps);
        let c2 = 1.0 - BETA2.powi(self.steps);
        for l in 0..net.ws.len() {
            self.m_w[l] = BETA1 * &self.m_w[l] + (1.0 - BETA1) * &gw[l];
            self.v_w[l] = BETA2 * &self.v_w[l] + (1.0 - BETA2) * &gw[l].mapv(|g| g * g);
            let update = &self.m_w[l] / c1 / (self.v_w[l].mapv(|v| (v / c2).sqrt() + ADAM_EPS));
            net.ws[l] = &net.ws[l] - &(self.lr * update);

            self.m_b[l] = BETA1 * &self.m_b[l] + (1.0 - BETA1) * &gb[l];
            self.v_b[l] = BETA2 * &self.v_b[l] + (1.0 - BETA2) * &gb[l].mapv(|g| g * g);
            let update = &self.m_b[l] / c1 / (self.v_b[l].mapv(|v| (v / c2).sqrt() + ADAM_EPS));
            net.bs[l] = &net.bs[l] - &(self.lr * update);
        }
    }
}

fn validate(cfg: &MlpConfig) -> Result<()> {
    if cfg.hidden_widths.contains(&0) {
        return Err(Error::config("hidden widths must be at least 1"));
    }
    if cfg.learning_rate <= 0.0 || cfg.learning_rate.is_nan() {
        return Err(Error::config("learning rate must be positive"));
    }
    if cfg.epochs == 0 {
        return Err(Error::config("epochs must be at least 1"));
    }
    if cfg.batch == 0 {
        return Err(Error::config("batch size must be at least 1"));
    }
    if cfg.l2_first_layers < 0.0 {
        return Err(Error::config("L2 strength must be non-negative"));
    }
    Ok(())
}

fn targets(y: &[i8]) -> Array1<f64> {
    Array1::from_iter(y.iter().map(|&v| f64::from(v.max(0))))
}

/// Trains the network on `train`, which must contain both classes.
pub fn train_mlp(train: &Dataset, cfg: &MlpConfig) -> Result<MlpModel> {
    validate(cfg)?;
    if !train.has_both_classes() {
        return Err(Error::data("MLP training data must contain both classes"));
    }

    // Carve out the early-stopping holdout when the data can afford one.
    let holdout = if cfg.patience > 0 && train.n() >= MIN_FOR_HOLDOUT {
        let plan = SplitPlan::new(1, HOLDOUT_FRACTION, mix(cfg.seed, &[0x686F_6C64]));
        make_splits(train.n(), train.y(), &plan)
            .ok()
            .and_then(|mut s| s.pop())
            .map(|s| (train.rows(&s.train_idx), train.rows(&s.valid_idx)))
    } else {
        None
    };
    let (fit_set, val_set) = match &holdout {
        Some((tr, va)) => (tr, Some(va)),
        None => (train, None),
    };

    let mut dims = vec![fit_set.d()];
    dims.extend_from_slice(&cfg.hidden_widths);
    dims.push(1);

    let mut rng = stream_rng(cfg.seed, Stream::Model);
    let mut net = Net::init(&dims, &mut rng);
    let mut adam = Adam::new(&net, cfg.learning_rate);

    let t_fit = targets(fit_set.y());
    let val = val_set.map(|v| (v.x(), targets(v.y())));

    let mut order: Vec<usize> = (0..fit_set.n()).collect();
    let mut best: Option<(f64, Net)> = None;
    let mut since_improvement = 0;
    let mut epochs_run = 0;
    let mut stopped_early = false;

    for _ in 0..cfg.epochs {
        epochs_run += 1;
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch) {
            let xb = fit_set.x().select(Axis(0), chunk);
            let tb = Array1::from_iter(chunk.iter().map(|&i| t_fit[i]));
            let (_, gw, gb) = net.grads(xb.view(), &tb, cfg.l2_first_layers);
            adam.step(&mut net, &gw, &gb);
        }
        if let Some((vx, vt)) = &val {
            let vl = {
                let acts = net.forward(*vx);
                bce(acts.last().expect("forward output"), vt)
            };
            let improved = best.as_ref().is_none_or(|(b, _)| vl < b - 1e-9);
            if improved {
                best = Some((vl, net.clone()));
                since_improvement = 0;
            } else {
                since_improvement += 1;
                if since_improvement >= cfg.patience {
                    stopped_early = true;
                    break;
                }
            }
        }
    }
    if let Some((_, snapshot)) = best {
        net = snapshot;
    }

    Ok(MlpModel {
        dim: train.d(),
        layers: net.to_layers(),
        epochs_run,
        stopped_early,
    })
}

/// Compares analytic gradients against central finite differences at a fresh
/// initialization and returns the global relative error
/// `|ga - gn| / (|ga| + |gn|)` over all parameters.
pub fn gradient_check(batch: &Dataset, cfg: &MlpConfig, eps: f64) -> Result<f64> {
    validate(cfg)?;
    if eps <= 0.0 || eps.is_nan() {
        return Err(Error::config("finite-difference step must be positive"));
    }

    let mut dims = vec![batch.d()];
    dims.extend_from_slice(&cfg.hidden_widths);
    dims.push(1);
    let mut rng = stream_rng(cfg.seed, Stream::Model);
    let net = Net::init(&dims, &mut rng);
    let t = targets(batch.y());
    let (_, gw, gb) = net.grads(batch.x(), &t, cfg.l2_first_layers);

    let mut analytic = Vec::new();
    let mut numeric = Vec::new();
    let mut probe = |net: &Net, l: usize, is_bias: bool, idx: (usize, usize)| {
        let mut plus = net.clone();
        let mut minus = net.clone();
        if is_bias {
            plus.bs[l][idx.0] += eps;
            minus.bs[l][idx.0] -= eps;
        } else {
            plus.ws[l][idx] += eps;
            minus.ws[l][idx] -= eps;
        }
        let f_plus = plus.loss(batch.x(), &t, cfg.l2_first_layers);
        let f_minus = minus.loss(batch.x(), &t, cfg.l2_first_layers);
        numeric.push((f_plus - f_minus) / (2.0 * eps));
    };
    for l in 0..net.ws.len() {
        for i in 0..net.ws[l].nrows() {
            for j in 0..net.ws[l].ncols() {
                analytic.push(gw[l][[i, j]]);
                probe(&net, l, false, (i, j));
            }
        }
        for (i, &g) in gb[l].iter().enumerate() {
            analytic.push(g);
            probe(&net, l, true, (i, 0));
        }
    }

    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| a - n)
        .collect();
    let denom = norm(&analytic) + norm(&numeric);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(norm(&diff) / denom)
}
