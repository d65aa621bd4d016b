//! Re-checks a failure witness from scratch.
//!
//! Nothing here touches the tables the checkers build: reachability and
//! cycle membership are recomputed by plain searches over state tuples, so
//! a witness that replays is evidence independent of the checker that
//! produced it.

use std::collections::{HashSet, VecDeque};

use crate::dfa::Dfa;
use crate::profile::factor_profile;
use crate::verdict::Witness;

fn advance(dfa: &Dfa, tuple: &[usize], letter: usize) -> Vec<usize> {
    tuple.iter().map(|&s| dfa.step(s, letter)).collect()
}

/// `to` is reachable from `from` in the product graph, or equal to it.
fn reaches(dfa: &Dfa, from: &[usize], to: &[usize]) -> bool {
    if from == to {
        return true;
    }
    let mut seen = HashSet::from([from.to_vec()]);
    let mut queue = VecDeque::from([from.to_vec()]);
    while let Some(t) = queue.pop_front() {
        for a in 0..dfa.letters() {
            let next = advance(dfa, &t, a);
            if next == to {
                return true;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// Some non-empty word maps the tuple to itself.
fn on_cycle(dfa: &Dfa, tuple: &[usize]) -> bool {
    (0..dfa.letters()).any(|a| reaches(dfa, &advance(dfa, tuple, a), tuple))
}

fn equivalent(dfa: &Dfa, p: usize, q: usize) -> bool {
    reaches(dfa, &[p], &[q]) && reaches(dfa, &[q], &[p])
}

fn tscc_applicable(dfa: &Dfa, p: usize, q: usize, r: usize, r1: usize) -> bool {
    reaches(dfa, &[p], &[q])
        && reaches(dfa, &[p], &[r])
        && reaches(dfa, &[r], &[r1])
        && on_cycle(dfa, &[p, r1])
        && on_cycle(dfa, &[q, r])
}

fn in_t_set(dfa: &Dfa, p: usize, q: usize, r: usize, r1: usize, t: usize) -> bool {
    reaches(dfa, &[p, r1], &[q, t]) && on_cycle(dfa, &[q, r, t])
}

fn power_period(image: &[usize]) -> usize {
    let mut powers: Vec<Vec<usize>> = vec![image.to_vec()];
    loop {
        let last = powers.last().unwrap();
        let next: Vec<usize> = last.iter().map(|&s| image[s]).collect();
        if let Some(i) = powers.iter().position(|p| *p == next) {
            return powers.len() - i;
        }
        powers.push(next);
    }
}

/// True iff the witness demonstrates the violation it claims for `dfa`.
pub fn replay(dfa: &Dfa, witness: &Witness) -> bool {
    let n = dfa.states();
    let m = dfa.letters();
    let states_ok = |states: &[usize]| states.iter().all(|&s| s < n);
    let word_ok = |w: &[usize]| !w.is_empty() && w.iter().all(|&a| a < m);
    match witness {
        Witness::Invariant { .. } => dfa.validate().witness.as_ref() == Some(witness),
        &Witness::PairCollapse { p, q } => {
            states_ok(&[p, q]) && p != q && on_cycle(dfa, &[p, q]) && equivalent(dfa, p, q)
        }
        &Witness::TsccInconsistent {
            p,
            q,
            r,
            r1,
            t,
            t_other,
        } => {
            states_ok(&[p, q, r, r1, t, t_other])
                && tscc_applicable(dfa, p, q, r, r1)
                && in_t_set(dfa, p, q, r, r1, t)
                && in_t_set(dfa, p, q, r, r1, t_other)
                && !equivalent(dfa, t, t_other)
        }
        &Witness::TsccMismatch {
            p,
            q,
            r,
            q1,
            r1,
            t,
            t1,
        } => {
            states_ok(&[p, q, r, q1, r1, t, t1])
                && tscc_applicable(dfa, p, q, r, r1)
                && tscc_applicable(dfa, p, r, q, q1)
                && in_t_set(dfa, p, q, r, r1, t)
                && in_t_set(dfa, p, r, q, q1, t1)
                && on_cycle(dfa, &[p, q1, r1])
                && reaches(dfa, &[q, r], &[q1, r1])
                && !equivalent(dfa, t, t1)
        }
        &Witness::LocalTest { p, q, r, s, letter } => {
            states_ok(&[p, q, r, s])
                && letter < m
                && on_cycle(dfa, &[p, q])
                && reaches(dfa, &[p], &[q])
                && reaches(dfa, &[p, q], &[r, s])
                && equivalent(dfa, s, q)
                && reaches(dfa, &[dfa.step(r, letter)], &[s]) != reaches(dfa, &[dfa.step(s, letter)], &[s])
        }
        Witness::LocalTestElement { p, q, word } => {
            let (p, q) = (*p, *q);
            states_ok(&[p, q])
                && word_ok(word)
                && p != q
                && on_cycle(dfa, &[p, q])
                && reaches(dfa, &[p], &[q])
                && reaches(dfa, &[dfa.run(p, word)], &[q]) != reaches(dfa, &[dfa.run(q, word)], &[q])
        }
        Witness::Periodic { word, period } => {
            if !word_ok(word) {
                return false;
            }
            let image: Vec<usize> = (0..n).map(|s| dfa.run(s, word)).collect();
            *period > 1 && power_period(&image) == *period
        }
        Witness::Identity { e, f, a, u, b, state } => {
            if ![e, f, a, u, b].iter().all(|w| word_ok(w)) || *state >= n {
                return false;
            }
            let idempotent = |w: &[usize]| (0..n).all(|s| dfa.run(dfa.run(s, w), w) == dfa.run(s, w));
            let product =
                |x: &[usize], y: &[usize]| [e, x, f, u, e, y, f].iter().fold(*state, |s, w| dfa.run(s, w));
            idempotent(e) && idempotent(f) && product(a, b) != product(b, a)
        }
        Witness::ProfileConflict {
            k,
            l,
            profile,
            states,
            words,
        } => {
            let (Some(initial), Some(_)) = (dfa.initial(), dfa.accepting()) else {
                return false;
            };
            let accepting = dfa.accepting_mask();
            let consistent = words.iter().zip(states).all(|(w, &s)| {
                word_ok(w)
                    && s < n
                    && dfa.run(initial, w) == s
                    && factor_profile(w, *k, *l).ok().as_ref() == Some(profile)
            });
            consistent && accepting[states[0]] != accepting[states[1]]
        }
    }
}
