//! The classic sanity check for a kernel classifier: XOR.
//!
//! No affine rule separates these four points, but the Gaussian kernel lifts
//! them into a space where the margin problem is easy. The example prints the
//! decision value at each corner and at the center of the square.

use greedyfs::data::Dataset;
use greedyfs::models::{train_svm_smo, SvmConfig};
use ndarray::array;

fn main() -> greedyfs::Result<()> {
    let x = array![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]];
    let y = vec![-1, 1, 1, -1];
    let ds = Dataset::new(x.clone(), y.clone(), vec!["a".into(), "b".into()])?;

    let cfg = SvmConfig {
        c: 10.0,
        gamma: Some(1.0),
        ..SvmConfig::default()
    };
    let model = train_svm_smo(&ds, &cfg)?;

    println!(
        "converged: {}, support vectors: {}, worst KKT violation: {:.2e}",
        model.converged,
        model.n_support(),
        model.kkt_violation
    );
    let f = model.decision_function(x.view())?;
    for (corner, (fi, yi)) in x.outer_iter().zip(f.iter().zip(&y)) {
        println!(
            "f({:.0}, {:.0}) = {fi:+.4}   label {yi:+}",
            corner[0], corner[1]
        );
    }
    let center = model.decision_function(array![[0.5, 0.5]].view())?;
    println!("f(0.5, 0.5) = {:+.4}   (on the boundary by symmetry)", center[0]);

    let preds = model.predict(x.view())?;
    assert_eq!(preds, y, "XOR should be fit exactly");
    println!("all four corners classified correctly");
    Ok(())
}
