use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};
use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// The synthetic regression surface behind the generator:
///
/// f_α(x) = e^{x₁²} + e^{x₂} + 3x₃ + 2cos(x₄x₅) + 4x₆² + 10^α · Σ_{j≥7} xⱼ
///
/// Six coordinates carry structure; the remaining tail is damped by 10^α, so
/// α tunes how close the tail features are to pure noise.
pub fn eval_test_function(x: &[f64], alpha: f64) -> Result<f64> {
    if x.len() < 7 {
        return Err(Error::config(format!(
            "test function needs at least 7 features, got {}",
            x.len()
        )));
    }
    let tail: f64 = x[6..].iter().sum();
    Ok((x[0] * x[0]).exp()
        + x[1].exp()
        + 3.0 * x[2]
        + 2.0 * (x[3] * x[4]).cos()
        + 4.0 * x[5] * x[5]
        + 10f64.powf(alpha) * tail)
}

/// One uniform [0,1) draw at a fixed position of the seed's synth stream.
/// Indexing by position (instead of sequential draws) makes every entry a
/// pure function of (seed, row, col), independent of generation order.
fn uniform_at(rng: &mut ChaCha8Rng, index: u128) -> f64 {
    // A standard f64 draw consumes one u64, i.e. two 32-bit stream words.
    rng.set_word_pos(index * 2);
    rng.gen::<f64>()
}

/// Samples n points uniformly on [0,1)^d and labels each +1 exactly when
/// f_α exceeds the mean of f_α over the generated sample. Feature names are
/// "x1".."xd". Deterministic in (n, d, alpha, seed).
pub fn generate_synthetic(n: usize, d: usize, alpha: f64, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::config(format!("need at least 2 examples, got {n}")));
    }
    if d < 7 {
        return Err(Error::config(format!(
            "the test function needs at least 7 features, got d={d}"
        )));
    }
    let mut rng = stream_rng(seed, Stream::Synth);
    let mut x = Array2::zeros((n, d));
    for i in 0..n {
        for j in 0..d {
            x[[i, j]] = uniform_at(&mut rng, (i * d + j) as u128);
        }
    }
    let values: Vec<f64> = x
        .rows()
        .into_iter()
        .map(|row| eval_test_function(row.as_slice().expect("row-major layout"), alpha))
        .collect::<Result<_>>()?;
    let mean = values.iter().sum::<f64>() / n as f64;
    let y: Vec<i8> = values
        .iter()
        .map(|&v| if v > mean { 1 } else { -1 })
        .collect();
    if y.iter().all(|&l| l == y[0]) {
        return Err(Error::data(format!(
            "degenerate labeling: all {n} examples fall on the same side of the mean {mean}"
        )));
    }
    let names = (1..=d).map(|j| format!("x{j}")).collect();
    Dataset::new(x, y, names)
}
