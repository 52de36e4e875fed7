//! Greedy, classifier-in-the-loop feature selection.
//!
//! The core loop ([`greedy::run_greedy`]) ranks features by how much they
//! actually help a classifier: at each step every remaining feature is
//! auditioned by training fresh models over several train/validation splits,
//! the best mean score wins, and a spread-normalized saturation rule decides
//! when adding features has stopped paying. Around that sit the supporting
//! pieces: binary classifiers with a common contract ([`models`]), skill
//! scores that stay honest about undefined denominators ([`metrics`]),
//! dataset plumbing ([`data`]), and two diagnostic labs: kernel-alignment
//! traces along a feature order ([`kernel`]) and exact shattering
//! experiments for blind affine classes ([`vc`]).
//!
//! The `examples/` directory is the front door: each file is a small,
//! runnable demonstration of one capability (ranking synthetic data, tuning
//! an SVM, checking MLP gradients, tracing kernel alignment, estimating VC
//! dimensions, round-tripping CSV data). The `greedyfs` binary exposes the
//! same capabilities as subcommands for scripted use.
//!
//! A minimal end-to-end run:
//!
//! ```
//! use greedyfs::data::generate_synthetic;
//! use greedyfs::greedy::{run_greedy, GreedyConfig, SearchPlacement};
//! use greedyfs::models::{ModelSpec, SvmConfig};
//!
//! let ds = generate_synthetic(60, 7, -8.0, 1).unwrap();
//! let cfg = GreedyConfig {
//!     q: 3,
//!     search: SearchPlacement::Off,
//!     seed: 1,
//!     ..GreedyConfig::default()
//! };
//! let trace = run_greedy(&ds, &ModelSpec::Svm(SvmConfig::default()), &cfg).unwrap();
//! assert!(!trace.selected.is_empty());
//! assert_eq!(trace.selected.len(), trace.k_star);
//! ```
//!
//! Everything stochastic flows from explicit 64-bit seeds through named
//! substreams ([`rng`]), so any result here is reproducible bit for bit.

pub mod cli;
pub mod data;
pub mod error;
pub mod greedy;
pub mod kernel;
pub mod metrics;
pub mod models;
pub mod rng;
pub mod vc;

pub use error::{Error, Result};
