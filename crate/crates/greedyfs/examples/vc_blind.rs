//! Capacity of affine threshold classes that ignore some coordinates.
//!
//! A blind feature is replaced by a constant before the rule sees it, which
//! can only remove labelings the class realizes. The example checks the
//! classical values by search: affine rules in the plane shatter 3 points
//! but not 4, and blinding one of two coordinates drops the estimate to the
//! line's value.

use greedyfs::vc::{blind_project, empirical_vc, shatters, AffineThresholdClass, PointSet};

fn main() -> greedyfs::Result<()> {
    for (dim, blind) in [(1, vec![]), (2, vec![]), (2, vec![1]), (3, vec![])] {
        let est = empirical_vc(dim, &blind, 50, 12, 0)?;
        println!(
            "dim {dim}, blind {blind:?}: empirical VC lower bound {}",
            est.lower_bound
        );
    }

    // A blinded coordinate really is invisible: rewriting it to any constant
    // changes nothing about what the blind class can do with the set.
    let triangle = PointSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.25], vec![0.5, 1.0]])?;
    let class = AffineThresholdClass::new(2, &[2])?;
    let rewritten = blind_project(&triangle, 2, -7.5)?;
    let before = shatters(&triangle, &class)?;
    let after = shatters(&rewritten, &class)?;
    println!("blind class shatters triangle: {before}, after rewriting the blind axis: {after}");
    assert_eq!(before, after);
    Ok(())
}
