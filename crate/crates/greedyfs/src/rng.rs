//! Seeded randomness plumbing.
//!
//! Every run owns a single root seed. Consumers never share a generator:
//! each draws from its own named substream, so changing how many values one
//! consumer takes (say, a different `q`) cannot shift what another sees.
//! Per-task seeds (one model fit inside a parallel loop, one trial point set)
//! are derived by hashing the structured indices into the root seed, which
//! keeps results independent of scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named substreams of the root seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Synthetic dataset entries.
    Synth = 1,
    /// Train/validation split draws.
    Splits = 2,
    /// Model initialization and internal shuffles.
    Model = 3,
    /// Hyperparameter search draws and CV folds.
    Search = 4,
    /// Random point sets for VC trials.
    Vc = 5,
    /// Evaluation subsets.
    Eval = 6,
}

/// Generator for one substream of a root seed.
pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// splitmix64 finalizer; decorrelates consecutive or structured inputs.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a task seed from the root seed and structured indices
/// (step, candidate, split, ...). Deterministic and order-free: the result
/// depends only on the values, never on when the task runs.
pub fn mix(seed: u64, parts: &[u64]) -> u64 {
    let mut state = splitmix64(seed);
    for &p in parts {
        state = splitmix64(state ^ p);
    }
    state
}
