//! Gaussian Gram matrices and kernel alignment diagnostics.
//!
//! The interesting structural fact exploited here: appending a feature can
//! only grow pairwise squared distances, so for a Gaussian kernel every Gram
//! entry is entrywise non-increasing along a feature-selection prefix, and so
//! is the Frobenius norm. `alignment_trace` reports that norm together with
//! the label alignment at every prefix, which is how the capacity/accuracy
//! trade-off of a greedy feature order is usually inspected.
//!
//! Alignment is normalized by ‖K₁‖_F · ‖K₂‖_F (the Cauchy–Schwarz bound, so
//! the value lands in [-1, 1]). A variant dividing by sqrt(‖K₁‖_F‖K₂‖_F)
//! circulates in the literature; it is available as [`alignment_sqrt_norm`]
//! for comparison but is not bounded by 1 and not used anywhere internally.

use crate::data::Dataset;
use crate::error::{Error, Result};
use ndarray::{Array2, ArrayView2};

/// A symmetric Gaussian Gram matrix K_ij = exp(−γ‖x_i − x_j‖²) together with
/// the scale that produced it. Diagonal entries are exactly 1; each unordered
/// pair is computed once and mirrored, so symmetry is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    k: Array2<f64>,
    gamma: f64,
}

impl GramMatrix {
    pub fn matrix(&self) -> ArrayView2<'_, f64> {
        self.k.view()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n(&self) -> usize {
        self.k.nrows()
    }
}

pub fn gaussian_gram(x: ArrayView2<'_, f64>, gamma: f64) -> Result<GramMatrix> {
    if gamma <= 0.0 || gamma.is_nan() {
        return Err(Error::config(format!("gamma must be positive, got {gamma}")));
    }
    if let Some(v) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::data(format!("non-finite feature value {v}")));
    }
    let n = x.nrows();
    let mut k = Array2::ones((n, n));
    for i in 0..n {
        let xi = x.row(i);
        for j in (i + 1)..n {
            let r2: f64 = xi
                .iter()
                .zip(x.row(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let v = (-gamma * r2).exp();
            k[[i, j]] = v;
            k[[j, i]] = v;
        }
    }
    Ok(GramMatrix { k, gamma })
}

/// ⟨K₁, K₂⟩_F: the entrywise-product sum.
pub fn frobenius_inner(k1: ArrayView2<'_, f64>, k2: ArrayView2<'_, f64>) -> Result<f64> {
    if k1.dim() != k2.dim() {
        return Err(Error::config(format!(
            "shape mismatch: {:?} vs {:?}",
            k1.dim(),
            k2.dim()
        )));
    }
    Ok(k1.iter().zip(k2.iter()).map(|(a, b)| a * b).sum())
}

pub fn frobenius_norm(k: ArrayView2<'_, f64>) -> f64 {
    k.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// ⟨K₁, K₂⟩_F / (‖K₁‖_F · ‖K₂‖_F), in [-1, 1] by Cauchy–Schwarz.
pub fn alignment(k1: ArrayView2<'_, f64>, k2: ArrayView2<'_, f64>) -> Result<f64> {
    let inner = frobenius_inner(k1, k2)?;
    let (n1, n2) = (frobenius_norm(k1), frobenius_norm(k2));
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::numerical("alignment of an all-zero matrix"));
    }
    Ok(inner / (n1 * n2))
}

/// The square-root-normalized variant ⟨K₁, K₂⟩_F / sqrt(‖K₁‖_F · ‖K₂‖_F).
/// Kept for comparison with reported values elsewhere; unbounded above.
pub fn alignment_sqrt_norm(k1: ArrayView2<'_, f64>, k2: ArrayView2<'_, f64>) -> Result<f64> {
    let inner = frobenius_inner(k1, k2)?;
    let (n1, n2) = (frobenius_norm(k1), frobenius_norm(k2));
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::numerical("alignment of an all-zero matrix"));
    }
    Ok(inner / (n1 * n2).sqrt())
}

/// Alignment of K with the ideal label matrix yyᵀ, computed without
/// materializing it: ⟨K, yyᵀ⟩_F = yᵀKy and ‖yyᵀ‖_F = n.
pub fn target_alignment(k: ArrayView2<'_, f64>, y: &[i8]) -> Result<f64> {
    let n = k.nrows();
    if k.ncols() != n || y.len() != n {
        return Err(Error::config(format!(
            "target alignment needs square K and matching labels ({}x{} vs {})",
            k.nrows(),
            k.ncols(),
            y.len()
        )));
    }
    if let Some(l) = y.iter().find(|l| **l != 1 && **l != -1) {
        return Err(Error::config(format!("label {l} is not -1 or +1")));
    }
    let norm = frobenius_norm(k);
    if norm == 0.0 {
        return Err(Error::numerical("alignment of an all-zero matrix"));
    }
    let mut quad = 0.0;
    for i in 0..n {
        let yi = y[i] as f64;
        let row = k.row(i);
        quad += yi * row.iter().zip(y).map(|(v, &l)| v * l as f64).sum::<f64>();
    }
    Ok(quad / (n as f64 * norm))
}

/// One prefix of an alignment trace.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AlignmentPoint {
    pub prefix_len: usize,
    pub frobenius_norm: f64,
    pub target_alignment: f64,
}

/// Walks feature prefixes of `order` and reports, for each prefix length k,
/// the Gram Frobenius norm and the label alignment on the first k features.
/// The norm column is guaranteed non-increasing; the alignment column is
/// reported for inspection, with no monotonicity promise.
pub fn alignment_trace(ds: &Dataset, order: &[usize], gamma: f64) -> Result<Vec<AlignmentPoint>> {
    if order.is_empty() {
        return Err(Error::config("alignment trace needs a non-empty order"));
    }
    let mut trace = Vec::with_capacity(order.len());
    for k in 1..=order.len() {
        let prefix = ds.project(&order[..k])?;
        let gram = gaussian_gram(prefix.x(), gamma)?;
        trace.push(AlignmentPoint {
            prefix_len: k,
            frobenius_norm: frobenius_norm(gram.matrix()),
            target_alignment: target_alignment(gram.matrix(), ds.y())?,
        });
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::generate_synthetic;
    use ndarray::array;

    #[test]
    fn gram_diagonal_is_exactly_one() {
        let x = array![[0.3, 1.7], [2.0, -0.4], [0.3, 1.7]];
        let g = gaussian_gram(x.view(), 0.8).unwrap();
        for i in 0..3 {
            assert_eq!(g.matrix()[[i, i]], 1.0);
        }
        // Duplicate rows give an off-diagonal entry of exactly 1 as well.
        assert_eq!(g.matrix()[[0, 2]], 1.0);
    }

    #[test]
    fn gram_hand_value_at_unit_distance() {
        let x = array![[0.0], [1.0]];
        let g = gaussian_gram(x.view(), 1.0).unwrap();
        assert!((g.matrix()[[0, 1]] - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(g.matrix()[[0, 1]], g.matrix()[[1, 0]]);
    }

    #[test]
    fn gram_rejects_bad_gamma() {
        let x = array![[0.0], [1.0]];
        assert!(gaussian_gram(x.view(), 0.0).is_err());
        assert!(gaussian_gram(x.view(), -1.0).is_err());
    }

    #[test]
    fn gram_entries_decrease_as_gamma_grows() {
        let x = array![[0.0, 0.5], [1.0, -0.5], [0.2, 0.2]];
        let lo = gaussian_gram(x.view(), 0.5).unwrap();
        let hi = gaussian_gram(x.view(), 2.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert_eq!(lo.matrix()[[i, j]], hi.matrix()[[i, j]]);
                } else {
                    assert!(lo.matrix()[[i, j]] > hi.matrix()[[i, j]]);
                }
            }
        }
    }

    #[test]
    fn frobenius_hand_values() {
        let eye = Array2::<f64>::eye(2);
        assert_eq!(frobenius_inner(eye.view(), eye.view()).unwrap(), 2.0);

        let ones = Array2::<f64>::ones((2, 2));
        let k2 = array![[1.0, 2.0], [3.0, 4.0]];
        assert_eq!(frobenius_inner(ones.view(), k2.view()).unwrap(), 10.0);

        let zero = Array2::<f64>::zeros((2, 2));
        assert_eq!(frobenius_inner(k2.view(), zero.view()).unwrap(), 0.0);

        assert!(frobenius_inner(eye.view(), Array2::<f64>::eye(3).view()).is_err());
    }

    #[test]
    fn alignment_hand_values() {
        let k = array![[1.0, 0.3], [0.3, 1.0]];
        assert!((alignment(k.view(), k.view()).unwrap() - 1.0).abs() < 1e-15);

        let neg = k.mapv(|v| -v);
        assert!((alignment(k.view(), neg.view()).unwrap() + 1.0).abs() < 1e-15);

        // alignment(I₂, yyᵀ) with y = (1, -1): inner 2, norms √2 and 2.
        let eye = Array2::<f64>::eye(2);
        let yyt = array![[1.0, -1.0], [-1.0, 1.0]];
        let a = alignment(eye.view(), yyt.view()).unwrap();
        assert!((a - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);

        let zero = Array2::<f64>::zeros((2, 2));
        assert!(alignment(zero.view(), k.view()).is_err());
    }

    #[test]
    fn sqrt_norm_variant_matches_its_formula() {
        let k1 = array![[1.0, 0.5], [0.5, 1.0]];
        let k2 = array![[1.0, -0.2], [-0.2, 1.0]];
        let inner = frobenius_inner(k1.view(), k2.view()).unwrap();
        let expect = inner / (frobenius_norm(k1.view()) * frobenius_norm(k2.view())).sqrt();
        assert_eq!(alignment_sqrt_norm(k1.view(), k2.view()).unwrap(), expect);
    }

    #[test]
    fn target_alignment_hand_values() {
        let y = vec![1i8, -1, 1];
        let yyt = {
            let mut m = Array2::<f64>::zeros((3, 3));
            for i in 0..3 {
                for j in 0..3 {
                    m[[i, j]] = (y[i] * y[j]) as f64;
                }
            }
            m
        };
        assert!((target_alignment(yyt.view(), &y).unwrap() - 1.0).abs() < 1e-15);

        // K = I_n aligns at 1/√n.
        let eye = Array2::<f64>::eye(3);
        let a = target_alignment(eye.view(), &y).unwrap();
        assert!((a - 1.0 / 3.0f64.sqrt()).abs() < 1e-15);

        // Flipping every label leaves yyᵀ unchanged.
        let flipped: Vec<i8> = y.iter().map(|v| -v).collect();
        assert_eq!(
            target_alignment(eye.view(), &y).unwrap(),
            target_alignment(eye.view(), &flipped).unwrap()
        );
    }

    #[test]
    fn target_alignment_matches_explicit_form() {
        let ds = generate_synthetic(12, 7, -2.0, 3).unwrap();
        let g = gaussian_gram(ds.x(), 0.7).unwrap();
        let explicit = {
            let mut yyt = Array2::<f64>::zeros((12, 12));
            for i in 0..12 {
                for j in 0..12 {
                    yyt[[i, j]] = (ds.y()[i] * ds.y()[j]) as f64;
                }
            }
            alignment(g.matrix(), yyt.view()).unwrap()
        };
        let fast = target_alignment(g.matrix(), ds.y()).unwrap();
        assert!((explicit - fast).abs() < 1e-12);
    }

    #[test]
    fn target_alignment_invariant_under_co_permutation() {
        let ds = generate_synthetic(10, 7, -1.0, 11).unwrap();
        let g = gaussian_gram(ds.x(), 0.5).unwrap();
        let before = target_alignment(g.matrix(), ds.y()).unwrap();

        let perm: Vec<usize> = vec![4, 1, 9, 0, 7, 2, 8, 3, 6, 5];
        let permuted = ds.rows(&perm);
        let gp = gaussian_gram(permuted.x(), 0.5).unwrap();
        let after = target_alignment(gp.matrix(), permuted.y()).unwrap();
        assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn trace_full_prefix_equals_full_gram() {
        let ds = generate_synthetic(15, 8, -3.0, 21).unwrap();
        let order: Vec<usize> = (0..8).collect();
        let trace = alignment_trace(&ds, &order, 0.3).unwrap();
        assert_eq!(trace.len(), 8);
        let full = gaussian_gram(ds.x(), 0.3).unwrap();
        let last = &trace[7];
        assert!((last.frobenius_norm - frobenius_norm(full.matrix())).abs() < 1e-12);
        assert!(
            (last.target_alignment - target_alignment(full.matrix(), ds.y()).unwrap()).abs()
                < 1e-12
        );
    }

    #[test]
    fn trace_norms_never_increase() {
        let ds = generate_synthetic(20, 9, -1.0, 8).unwrap();
        let order = vec![3, 0, 7, 5, 1, 8, 2, 6, 4];
        for gamma in [0.05, 0.5, 5.0] {
            let trace = alignment_trace(&ds, &order, gamma).unwrap();
            for w in trace.windows(2) {
                assert!(w[1].frobenius_norm <= w[0].frobenius_norm + 1e-12);
            }
            for p in &trace {
                assert!(p.target_alignment.abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn appending_a_constant_feature_changes_nothing() {
        let ds = generate_synthetic(10, 7, -2.0, 4).unwrap();
        let (n, d) = (ds.n(), ds.d());
        let mut wide = Array2::<f64>::from_elem((n, d + 1), 2.5);
        wide.slice_mut(ndarray::s![.., ..d]).assign(&ds.x());
        let base = gaussian_gram(ds.x(), 0.4).unwrap();
        let extended = gaussian_gram(wide.view(), 0.4).unwrap();
        assert_eq!(extended.matrix(), base.matrix());
    }
}
