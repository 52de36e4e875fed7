//! Dataset and model persistence.
//!
//! CSV is the interchange format for data, JSON for trained pipelines. Both
//! roundtrips are exact: floats are written with enough digits to recover
//! the same bits, and a reloaded pipeline predicts identically.

use greedyfs::data::{generate_synthetic, load_csv, write_csv};
use greedyfs::models::{ModelSpec, PipelineModel, SvmConfig};

fn main() -> greedyfs::Result<()> {
    let dir = std::env::temp_dir().join("greedyfs_roundtrip");
    std::fs::create_dir_all(&dir)?;

    let ds = generate_synthetic(120, 7, -2.0, 3)?;
    let csv_path = dir.join("data.csv");
    write_csv(&ds, &csv_path)?;
    let back = load_csv(&csv_path, "label")?;
    assert_eq!(ds.x(), back.x());
    assert_eq!(ds.y(), back.y());
    assert_eq!(ds.names(), back.names());
    println!("csv roundtrip: {} rows x {} columns, bit-exact", ds.n(), ds.d());

    let model = PipelineModel::fit(&ds, &[0, 2, 5], &ModelSpec::Svm(SvmConfig::default()), 9)?;
    let model_path = dir.join("model.json");
    model.save(&model_path)?;
    let reloaded = PipelineModel::load(&model_path)?;
    assert_eq!(model.predict(&ds)?, reloaded.predict(&ds)?);
    println!(
        "model roundtrip: predictions identical on all {} rows ({})",
        ds.n(),
        model_path.display()
    );
    Ok(())
}
