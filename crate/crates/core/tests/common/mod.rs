//! Test-only oracles. They share nothing with the library's decision paths
//! beyond semigroup generation.

#![allow(dead_code)]

use ltt_core::semigroup::TransitionSemigroup;

fn compose(x: &[u32], y: &[u32]) -> Vec<u32> {
    x.iter().map(|&s| y[s as usize]).collect()
}

fn product(s: &TransitionSemigroup, factors: &[usize]) -> Vec<u32> {
    let mut acc = s.image(factors[0]).to_vec();
    for &f in &factors[1..] {
        acc = compose(&acc, s.image(f));
    }
    acc
}

/// `eafuebf = ebfueaf` checked over every quintuple, no rewriting.
pub fn literal_identity(s: &TransitionSemigroup) -> bool {
    let idem = s.idempotents();
    let all: Vec<usize> = (0..s.len()).collect();
    for &e in &idem {
        for &f in &idem {
            for &a in &all {
                for &u in &all {
                    for &b in &all {
                        if product(s, &[e, a, f, u, e, b, f]) != product(s, &[e, b, f, u, e, a, f]) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Aperiodic via the functional graph: every cycle of every element is a
/// fixed point.
pub fn aperiodic_by_cycles(s: &TransitionSemigroup) -> bool {
    (0..s.len()).all(|x| {
        let img = s.image(x);
        let n = img.len();
        (0..n).all(|start| {
            // walk n steps to land on a cycle, then check it is a fixed point
            let mut v = start;
            for _ in 0..n {
                v = img[v] as usize;
            }
            img[v] as usize == v
        })
    })
}

/// Local testability of the semigroup: for every idempotent `e`, the local
/// monoid `eSe` is idempotent and commutative.
pub fn local_semilattice(s: &TransitionSemigroup) -> bool {
    for e in s.idempotents() {
        let local: Vec<Vec<u32>> = {
            let mut seen = std::collections::HashSet::new();
            (0..s.len())
                .map(|x| product(s, &[e, x, e]))
                .filter(|v| seen.insert(v.clone()))
                .collect()
        };
        for x in &local {
            if compose(x, x) != *x {
                return false;
            }
            for y in &local {
                if compose(x, y) != compose(y, x) {
                    return false;
                }
            }
        }
    }
    true
}
