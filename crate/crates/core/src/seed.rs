//! Stateless seed derivation.
//!
//! Every random draw in a circuit evaluation is keyed by a pure function of
//! (master seed, input combination, trial index, gate id), so results do not
//! depend on visit order or on how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for all simulation draws.
pub type SimRng = ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `parts` into `seed`, one mixing round per part.
pub fn derive(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(mix64(seed), |acc, &p| mix64(acc ^ mix64(p)))
}

/// FNV-1a over the bytes of a label; stable across platforms and releases.
pub fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub fn rng_from(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Generator for one gate's tube within one trial.
pub fn gate_rng(trial_seed: u64, gate_id: &str) -> SimRng {
    rng_from(derive(trial_seed, &[label_hash(gate_id)]))
}

/// Seed of one Monte Carlo trial.
pub fn trial_seed(master: u64, combination: u64, trial: u64) -> u64 {
    derive(master, &[combination, trial])
}
