//! Shattering experiments for affine threshold classifiers.
//!
//! The class under study is `x -> sign(w . x + b)` with an optional blind
//! set: coordinates the classifier is forbidden to read (their weights are
//! pinned to zero). Separability of a labeled point set is decided exactly,
//! shattering checks run over all labelings, and [`empirical_vc`] turns that
//! into a budgeted lower-bound estimate of the VC dimension.
//!
//! Blind sets use 1-based feature numbers, matching how features are named
//! (`x1` is feature 1) in the rest of the crate.

mod feas;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};
use feas::feasible_geq_one;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use rand::Rng;
use serde::Serialize;

/// Sign classifiers `sign(w . x + b)` on `dim` coordinates whose weights
/// vanish on the blind set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineThresholdClass {
    dim: usize,
    blind: Vec<usize>,
}

impl AffineThresholdClass {
    /// `blind` lists 1-based feature numbers; the empty list is the
    /// unrestricted class.
    pub fn new(dim: usize, blind: &[usize]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::config("ambient dimension must be at least 1"));
        }
        let mut blind = blind.to_vec();
        blind.sort_unstable();
        blind.dedup();
        if let Some(&bad) = blind.iter().find(|&&k| k == 0 || k > dim) {
            return Err(Error::config(format!(
                "blind feature {bad} is outside 1..={dim}"
            )));
        }
        Ok(AffineThresholdClass { dim, blind })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blind(&self) -> &[usize] {
        &self.blind
    }

    /// 0-based columns the class is allowed to read.
    fn free_columns(&self) -> Vec<usize> {
        (0..self.dim)
            .filter(|j| !self.blind.contains(&(j + 1)))
            .collect()
    }
}

/// How many points the exhaustive machinery accepts for dimension `d`.
pub fn point_cap(dim: usize) -> usize {
    2 * (dim + 2)
}

/// A finite set of points in R^d, sized for exhaustive shattering checks.
///
/// Construction rejects duplicate points; [`blind_project`] can still
/// produce coincident points, which simply make split labelings infeasible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let set = Self::allowing_duplicates(points)?;
        for i in 0..set.points.len() {
            for j in (i + 1)..set.points.len() {
                if set.points[i] == set.points[j] {
                    return Err(Error::config(format!(
                        "points {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(set)
    }

    fn allowing_duplicates(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match points.first() {
            Some(p) if !p.is_empty() => p.len(),
            _ => return Err(Error::config("a point set needs points of dimension >= 1")),
        };
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::config("points must share one dimension"));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::config("point coordinates must be finite"));
        }
        if points.len() > point_cap(dim) {
            return Err(Error::config(format!(
                "at most {} points are supported in dimension {dim}, got {}",
                point_cap(dim),
                points.len()
            )));
        }
        Ok(PointSet { points, dim })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

/// True iff some classifier in the class labels every point correctly with a
/// strict margin. Exact: no floating-point tolerance is involved.
pub fn is_separable(
    points: &PointSet,
    labels: &[i8],
    class: &AffineThresholdClass,
) -> Result<bool> {
    if class.dim() != points.dim() {
        return Err(Error::config(format!(
            "class dimension {} does not match points in dimension {}",
            class.dim(),
            points.dim()
        )));
    }
    if labels.len() != points.len() {
        return Err(Error::config(format!(
            "{} labels for {} points",
            labels.len(),
            points.len()
        )));
    }
    if labels.iter().any(|l| *l != 1 && *l != -1) {
        return Err(Error::config("labels must be -1 or +1"));
    }
    let free = class.free_columns();
    // Strict separation is scale-free, so demand a margin of 1:
    //   y_i (w . x_i + b) >= 1, unknowns z = (w_free, b).
    let rows: Vec<Vec<BigRational>> = points
        .points()
        .iter()
        .zip(labels)
        .map(|(p, &y)| {
            let y = BigRational::from_i8(y).expect("small integer");
            free.iter()
                .map(|&j| &y * BigRational::from_f64(p[j]).expect("finite"))
                .chain([y.clone()])
                .collect()
        })
        .collect();
    Ok(feasible_geq_one(&rows))
}

/// True iff every one of the 2^s labelings of `points` is separable.
pub fn shatters(points: &PointSet, class: &AffineThresholdClass) -> Result<bool> {
    let s = points.len();
    // Complementary labelings agree (flip w, b), so half the space suffices.
    for mask in 0..(1u64 << (s - 1)) {
        let labels: Vec<i8> = (0..s)
            .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
            .collect();
        if !is_separable(points, &labels, class)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replaces the k-th coordinate (1-based) of every point with `alpha`.
pub fn blind_project(points: &PointSet, k: usize, alpha: f64) -> Result<PointSet> {
    if k == 0 || k > points.dim() {
        return Err(Error::config(format!(
            "feature {k} is outside 1..={}",
            points.dim()
        )));
    }
    if !alpha.is_finite() {
        return Err(Error::config("projection value must be finite"));
    }
    let moved = points
        .points()
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p[k - 1] = alpha;
            p
        })
        .collect();
    PointSet::allowing_duplicates(moved)
}

/// Outcome of [`empirical_vc`]: a certified lower bound with its witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VcEstimate {
    pub dim: usize,
    pub blind: Vec<usize>,
    /// Largest size at which a shattered set was found.
    pub lower_bound: usize,
    /// A shattered point set of that size.
    pub witness: Vec<Vec<f64>>,
    /// The size at which the search gave up, when it did within budget.
    pub failed_at: Option<usize>,
    pub trials_per_size: usize,
}

/// Points on the moment curve restricted to the class's free coordinates.
/// These are in general position there, so they realize the true VC lower
/// bound without any luck from the random draws.
fn moment_fixture(s: usize, class: &AffineThresholdClass) -> Vec<Vec<f64>> {
    let free = class.free_columns();
    (1..=s as i64)
        .map(|t| {
            let mut p = vec![0.0; class.dim()];
            for (power, &j) in free.iter().enumerate() {
                p[j] = t.pow(power as u32 + 1) as f64;
            }
            p
        })
        .collect()
}

/// Searches for ever-larger shattered sets: at each size it tries the
/// deterministic fixture and `trials` seeded random sets, stopping at the
/// first size where everything fails. The result is a lower bound on the VC
/// dimension by construction; `failed_at` reports where the budget ran out.
pub fn empirical_vc(
    dim: usize,
    blind: &[usize],
    trials: usize,
    s_max: usize,
    seed: u64,
) -> Result<VcEstimate> {
    let class = AffineThresholdClass::new(dim, blind)?;
    let cap = s_max.min(point_cap(dim));
    if cap == 0 {
        return Err(Error::config("s_max must be at least 1"));
    }
    let mut rng = stream_rng(seed, Stream::Vc);
    // Small dyadic coordinates keep the exact arithmetic fast.
    let mut random_set = |s: usize| -> Option<Vec<Vec<f64>>> {
        let mut pts: Vec<Vec<f64>> = Vec::with_capacity(s);
        let mut attempts = 0;
        while pts.len() < s {
            let p: Vec<f64> = (0..dim)
                .map(|_| f64::from(rng.gen_range(-16i32..=16)) / 8.0)
                .collect();
            if pts.contains(&p) {
                attempts += 1;
                if attempts > 1000 {
                    return None;
                }
            } else {
                pts.push(p);
            }
        }
        Some(pts)
    };

    let mut best: Option<(usize, Vec<Vec<f64>>)> = None;
    let mut failed_at = None;
    for s in 1..=cap {
        let mut found = None;
        let fixture = moment_fixture(s, &class);
        let candidates = std::iter::once(Some(fixture)).chain((0..trials).map(|_| random_set(s)));
        for candidate in candidates.flatten() {
            // A fully blind class collapses the fixture onto one point;
            // such degenerate candidates are simply skipped.
            let Ok(set) = PointSet::new(candidate) else {
                continue;
            };
            if shatters(&set, &class)? {
                found = Some(set.points().to_vec());
                break;
            }
        }
        match found {
            Some(witness) => best = Some((s, witness)),
            None => {
                failed_at = Some(s);
                break;
            }
        }
    }
    let (lower_bound, witness) = best.ok_or_else(|| {
        Error::numerical("no shattered set found even at size 1, which cannot happen")
    })?;
    Ok(VcEstimate {
        dim,
        blind: class.blind().to_vec(),
        lower_bound,
        witness,
        failed_at,
        trials_per_size: trials,
    })
}
