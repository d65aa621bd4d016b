//! Input families for the benchmarks.

use ltt_core::corpus::{random_dfa, seeded};
use ltt_core::Dfa;

/// Counts occurrences of `a` up to `n - 1`; `b` is a no-op. Threshold
/// testable for every `n` (locally testable only for `n <= 2`), so the LTT
/// checker runs every phase instead of stopping at the pair test.
pub fn counter(n: usize) -> Dfa {
    let delta = (0..n).flat_map(|i| [(i + 1).min(n - 1), i]).collect();
    Dfa::from_table(2, delta).expect("counter table is valid")
}

/// `count` seeded random automata on `n` states over two letters.
pub fn random_sample(n: usize, count: usize, seed: u64) -> Vec<Dfa> {
    let mut rng = seeded(seed);
    (0..count).map(|_| random_dfa(&mut rng, n, 2)).collect()
}
