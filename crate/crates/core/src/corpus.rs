//! Test corpora: exhaustive enumeration and seeded random automata.
//!
//! Random automata come from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Each automaton draws its transition table in
//! row-major order (state, then letter), one `gen_range(0..n)` per entry.
//! Acceptance sets, when requested, are drawn afterwards with one
//! `gen_bool(0.5)` per state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dfa::{default_alphabet, Dfa};

pub type CorpusRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random complete automaton on `n` states over `m` letters.
pub fn random_dfa(rng: &mut impl Rng, n: usize, m: usize) -> Dfa {
    assert!(n >= 1 && m >= 1);
    let delta = (0..n * m).map(|_| rng.gen_range(0..n)).collect();
    Dfa::new(default_alphabet(m), n, delta, None, None).expect("random table is valid")
}

/// Random automaton with initial state 0 and a random accepting set.
pub fn random_language_dfa(rng: &mut impl Rng, n: usize, m: usize) -> Dfa {
    let dfa = random_dfa(rng, n, m);
    let accepting = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    dfa.with_language(0, accepting)
        .expect("random language data is valid")
}

/// Every complete automaton on `n` states over `m` letters, `n^(n·m)` of them,
/// in lexicographic order of the transition table.
pub fn all_dfas(n: usize, m: usize) -> impl Iterator<Item = Dfa> {
    let cells = n * m;
    let total = (n as u64).checked_pow(cells as u32).expect("corpus too large");
    (0..total).map(move |mut code| {
        let mut delta = vec![0; cells];
        for slot in delta.iter_mut().rev() {
            *slot = (code % n as u64) as usize;
            code /= n as u64;
        }
        Dfa::new(default_alphabet(m), n, delta, None, None).unwrap()
    })
}
