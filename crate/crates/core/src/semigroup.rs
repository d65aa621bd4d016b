//! Explicit transition semigroups.
//!
//! Elements are total maps on the state set, composed left to right:
//! `(x·y)[s] = y[x[s]]`, i.e. state `s` read through the word of `x`, then
//! the word of `y`. This is the ground-truth oracle for the graph checkers:
//! the automaton is locally threshold testable iff its semigroup is
//! aperiodic and satisfies `eafuebf = ebfueaf` for all idempotents `e, f`
//! and all elements `a, u, b`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::verdict::{Reason, Verdict, Witness};

/// Default element budget for [`generate_semigroup`].
pub const DEFAULT_BUDGET: usize = 50_000;

/// A semigroup element: its action on states plus a generating word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transformation {
    pub image: Vec<usize>,
    pub word: Vec<usize>,
}

impl Transformation {
    /// The action of `word` on the states of `dfa`.
    pub fn of_word(dfa: &Dfa, word: &[usize]) -> Self {
        Transformation {
            image: (0..dfa.states()).map(|s| dfa.run(s, word)).collect(),
            word: word.to_vec(),
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Transformation) -> Transformation {
        Transformation {
            image: self.image.iter().map(|&s| other.image[s]).collect(),
            word: self.word.iter().chain(&other.word).copied().collect(),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.image.iter().all(|&s| self.image[s] == s)
    }
}

/// The unique idempotent among the powers of `x`: `x^m` for the least `m`
/// with `x^m·x^m = x^m`.
pub fn idempotent_power(x: &Transformation) -> Transformation {
    let mut power = x.clone();
    while !power.is_idempotent() {
        power = power.then(x);
    }
    power
}

/// The transition semigroup, generated breadth-first from the letters.
#[derive(Debug, Clone)]
pub struct TransitionSemigroup {
    n: usize,
    images: Vec<u32>,
    // (parent element, letter); parent is u32::MAX for generators
    parents: Vec<(u32, u32)>,
    index: HashMap<Box<[u32]>, u32>,
    idempotent: Vec<bool>,
}

impl TransitionSemigroup {
    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn image(&self, x: usize) -> &[u32] {
        &self.images[x * self.n..(x + 1) * self.n]
    }

    /// Shortest, then lexicographically least, word for element `x`.
    pub fn word(&self, x: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = x as u32;
        loop {
            let (parent, letter) = self.parents[cur as usize];
            word.push(letter as usize);
            if parent == u32::MAX {
                break;
            }
            cur = parent;
        }
        word.reverse();
        word
    }

    pub fn element(&self, x: usize) -> Transformation {
        Transformation {
            image: self.image(x).iter().map(|&s| s as usize).collect(),
            word: self.word(x),
        }
    }

    pub fn lookup(&self, image: &[u32]) -> Option<usize> {
        self.index.get(image).map(|&i| i as usize)
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.idempotent[x]
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.idempotent[x]).collect()
    }

    /// Index of `x·y`.
    pub fn multiply(&self, x: usize, y: usize) -> usize {
        let image = compose(self.image(x), self.image(y));
        self.lookup(&image)
            .expect("semigroup not closed under composition")
    }
}

#[inline]
fn compose(x: &[u32], y: &[u32]) -> Vec<u32> {
    x.iter().map(|&s| y[s as usize]).collect()
}

#[inline]
fn compose_into(x: &[u32], y: &[u32], out: &mut [u32]) {
    for (o, &s) in out.iter_mut().zip(x) {
        *o = y[s as usize];
    }
}

/// Closure of the letter actions under right multiplication by letters.
pub fn generate_semigroup(dfa: &Dfa, budget: usize) -> Result<TransitionSemigroup> {
    let n = dfa.states();
    let m = dfa.letters();
    if budget < m {
        return Err(Error::Parameter(format!(
            "semigroup budget {budget} is below the alphabet size {m}"
        )));
    }
    let mut s = TransitionSemigroup {
        n,
        images: Vec::new(),
        parents: Vec::new(),
        index: HashMap::new(),
        idempotent: Vec::new(),
    };
    let push = |s: &mut TransitionSemigroup, image: Vec<u32>, parent: u32, letter: u32| -> Result<()> {
        if s.index.contains_key(image.as_slice()) {
            return Ok(());
        }
        if s.len() == budget {
            return Err(Error::SemigroupBudget { budget });
        }
        let id = s.len() as u32;
        s.images.extend_from_slice(&image);
        s.parents.push((parent, letter));
        s.index.insert(image.into_boxed_slice(), id);
        Ok(())
    };
    for a in 0..m {
        let image = (0..n).map(|q| dfa.step(q, a) as u32).collect();
        push(&mut s, image, u32::MAX, a as u32)?;
    }
    let mut next = 0;
    while next < s.len() {
        for a in 0..m {
            let image: Vec<u32> = s
                .image(next)
                .iter()
                .map(|&q| dfa.step(q as usize, a) as u32)
                .collect();
            push(&mut s, image, next as u32, a as u32)?;
        }
        next += 1;
    }
    s.idempotent = (0..s.len())
        .map(|x| {
            let img = s.image(x);
            img.iter().all(|&q| img[q as usize] == q)
        })
        .collect();
    Ok(s)
}

/// Index and period of the power sequence `x, x², x³, ...`.
pub fn power_cycle(x: &[u32]) -> (usize, usize) {
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut power = x.to_vec();
    let mut exponent = 1;
    loop {
        if let Some(&first) = seen.get(&power) {
            return (first, exponent - first);
        }
        seen.insert(power.clone(), exponent);
        power = compose(&power, x);
        exponent += 1;
    }
}

/// True iff every element's powers end in a cycle of length one.
pub fn is_aperiodic(s: &TransitionSemigroup) -> Verdict {
    let found = (0..s.len()).into_par_iter().find_map_first(|x| {
        let (_, period) = power_cycle(s.image(x));
        (period > 1).then_some((x, period))
    });
    match found {
        None => Verdict::holds(),
        Some((x, period)) => Verdict::fails(
            Reason::NotAperiodic,
            Witness::Periodic {
                word: s.word(x),
                period,
            },
        ),
    }
}

/// `eafuebf = ebfueaf` for all idempotents `e, f` and elements `a, u, b`.
///
/// Writing `x = eaf`, `y = ebf` (elements of `eSf`) and `z = fue` (of `fSe`)
/// the identity reads `xzy = yzx`, so each idempotent pair only needs the
/// distinct values of `eSf` and `fSe`.
pub fn check_identity_eq1(s: &TransitionSemigroup) -> Verdict {
    let n = s.n;
    let idempotents = s.idempotents();
    // distinct values of eS per idempotent, with one witness element each
    let right_ideals: Vec<Vec<(Vec<u32>, usize)>> = idempotents
        .par_iter()
        .map(|&e| distinct_products(s, s.image(e)))
        .collect();

    let pairs: Vec<(usize, usize)> = (0..idempotents.len())
        .flat_map(|i| (0..idempotents.len()).map(move |j| (i, j)))
        .collect();
    let found = pairs.par_iter().find_map_first(|&(i, j)| {
        let (e, f) = (idempotents[i], idempotents[j]);
        let e_s_f = project(&right_ideals[i], s.image(f));
        let f_s_e = project(&right_ideals[j], s.image(e));
        let mut xz = vec![0u32; n];
        let mut xzy = vec![0u32; n];
        let mut yz = vec![0u32; n];
        let mut yzx = vec![0u32; n];
        for (ix, (x, a)) in e_s_f.iter().enumerate() {
            for (z, u) in &f_s_e {
                compose_into(x, z, &mut xz);
                for (y, b) in &e_s_f[ix + 1..] {
                    compose_into(&xz, y, &mut xzy);
                    compose_into(y, z, &mut yz);
                    compose_into(&yz, x, &mut yzx);
                    if let Some(state) = (0..n).find(|&q| xzy[q] != yzx[q]) {
                        return Some((e, f, *a, *u, *b, state));
                    }
                }
            }
        }
        None
    });
    match found {
        None => Verdict::holds(),
        Some((e, f, a, u, b, state)) => Verdict::fails(
            Reason::IdentityViolated,
            Witness::Identity {
                e: s.word(e),
                f: s.word(f),
                a: s.word(a),
                u: s.word(u),
                b: s.word(b),
                state,
            },
        ),
    }
}

/// Distinct values of `prefix · x` over all elements `x`, each with the
/// first `x` producing it.
fn distinct_products(s: &TransitionSemigroup, prefix: &[u32]) -> Vec<(Vec<u32>, usize)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in 0..s.len() {
        let image = compose(prefix, s.image(x));
        if seen.insert(image.clone()) {
            out.push((image, x));
        }
    }
    out
}

/// Distinct values of `v · suffix`; the element that produced `v` is kept
/// as the witness.
fn project(values: &[(Vec<u32>, usize)], suffix: &[u32]) -> Vec<(Vec<u32>, usize)> {
    let mut seen = HashSet::new();
    values
        .iter()
        .filter_map(|(v, x)| {
            let image = compose(v, suffix);
            seen.insert(image.clone()).then_some((image, *x))
        })
        .collect()
}

/// Aperiodicity plus the identity; the semigroup-side answer to local
/// threshold testability.
pub fn oracle_is_ltt(dfa: &Dfa, budget: usize) -> Result<(Verdict, TransitionSemigroup)> {
    let s = generate_semigroup(dfa, budget)?;
    let aperiodic = is_aperiodic(&s);
    if !aperiodic.outcome {
        return Ok((aperiodic, s));
    }
    let identity = check_identity_eq1(&s);
    Ok((identity, s))
}
