//! (k,l)-profiles of words and the language-level testability check.
//!
//! The profile of a non-empty word `w` is its prefix and suffix of length
//! `k-1` (or `w` itself when shorter) plus the number of occurrences of each
//! length-`k` factor, capped at `l`. A language is `l`-threshold
//! `k`-testable iff words with equal profiles are either both in it or both
//! out of it. Sets of factors occurring at least `j` times, `j <= l`, are
//! recovered from the capped counts as `{ f : count(f) >= j }`.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::verdict::{Reason, Verdict, Witness};

/// Default cap on explored (profile, state) pairs.
pub const DEFAULT_PROFILE_BUDGET: usize = 200_000;

/// Largest factor table (`|Σ|^k`) a profile automaton will allocate.
const MAX_FACTORS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Profile {
    pub prefix: Vec<usize>,
    pub suffix: Vec<usize>,
    /// Length-`k` factors with their capped occurrence counts, sorted by
    /// factor; zero counts are omitted.
    pub counts: Vec<(Vec<usize>, usize)>,
}

impl Profile {
    /// Factors occurring at least `j` times.
    pub fn factors_at_least(&self, j: usize) -> Vec<&[usize]> {
        self.counts
            .iter()
            .filter(|(_, c)| *c >= j)
            .map(|(f, _)| f.as_slice())
            .collect()
    }
}

fn check_params(k: usize, l: usize) -> Result<()> {
    if k == 0 || l == 0 {
        return Err(Error::Parameter(format!(
            "k and l must be positive (k={k}, l={l})"
        )));
    }
    Ok(())
}

/// Profile of a non-empty word given as letter indices.
pub fn factor_profile(word: &[usize], k: usize, l: usize) -> Result<Profile> {
    check_params(k, l)?;
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let edge = (k - 1).min(word.len());
    let mut counts: std::collections::BTreeMap<Vec<usize>, usize> = Default::default();
    for factor in word.windows(k) {
        let c = counts.entry(factor.to_vec()).or_insert(0);
        *c = (*c + 1).min(l);
    }
    Ok(Profile {
        prefix: word[..edge].to_vec(),
        suffix: word[word.len() - edge..].to_vec(),
        counts: counts.into_iter().collect(),
    })
}

/// Deterministic automaton whose state after reading `w` is the profile of
/// `w`. States are packed keys: prefix length, prefix, suffix length,
/// suffix, then one capped count per factor code.
#[derive(Debug, Clone)]
pub struct ProfileAutomaton {
    letters: usize,
    k: usize,
    l: usize,
    factors: usize,
}

pub type ProfileKey = Box<[u16]>;

impl ProfileAutomaton {
    pub fn new(letters: usize, k: usize, l: usize) -> Result<Self> {
        check_params(k, l)?;
        if letters == 0 || letters > u16::MAX as usize || l > u16::MAX as usize {
            return Err(Error::Parameter("alphabet or threshold too large".into()));
        }
        let factors = (letters as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if factors > MAX_FACTORS as u128 {
            return Err(Error::Parameter(format!(
                "{letters}^{k} factor counters exceed the limit of {MAX_FACTORS}"
            )));
        }
        Ok(ProfileAutomaton {
            letters,
            k,
            l,
            factors: factors as usize,
        })
    }

    fn width(&self) -> usize {
        self.k - 1
    }

    /// Profile of the empty word, which no non-empty word shares.
    pub fn start(&self) -> ProfileKey {
        vec![0; 2 + 2 * self.width() + self.factors].into_boxed_slice()
    }

    pub fn step(&self, key: &[u16], letter: usize) -> ProfileKey {
        let w = self.width();
        let mut next = key.to_vec();
        let prefix_len = key[0] as usize;
        let suffix_at = 1 + w;
        let suffix_len = key[suffix_at] as usize;
        let suffix = &key[suffix_at + 1..suffix_at + 1 + suffix_len];
        let counts_at = suffix_at + 1 + w;

        if suffix_len == w {
            let code = suffix
                .iter()
                .chain(std::iter::once(&(letter as u16)))
                .fold(0usize, |acc, &a| acc * self.letters + a as usize);
            let slot = &mut next[counts_at + code];
            *slot = (*slot + 1).min(self.l as u16);
        }
        if prefix_len < w {
            next[1 + prefix_len] = letter as u16;
            next[0] += 1;
        }
        if w > 0 {
            let mut tail: Vec<u16> = suffix.to_vec();
            tail.push(letter as u16);
            if tail.len() > w {
                tail.remove(0);
            }
            next[suffix_at] = tail.len() as u16;
            next[suffix_at + 1..suffix_at + 1 + tail.len()].copy_from_slice(&tail);
        }
        next.into_boxed_slice()
    }

    pub fn run(&self, word: &[usize]) -> ProfileKey {
        word.iter().fold(self.start(), |key, &a| self.step(&key, a))
    }

    pub fn decode(&self, key: &[u16]) -> Profile {
        let w = self.width();
        let prefix_len = key[0] as usize;
        let suffix_at = 1 + w;
        let suffix_len = key[suffix_at] as usize;
        let counts_at = suffix_at + 1 + w;
        let counts = (0..self.factors)
            .filter(|&code| key[counts_at + code] > 0)
            .map(|code| {
                let mut factor = vec![0; self.k];
                let mut rest = code;
                for slot in factor.iter_mut().rev() {
                    *slot = rest % self.letters;
                    rest /= self.letters;
                }
                (factor, key[counts_at + code] as usize)
            })
            .collect();
        Profile {
            prefix: key[1..1 + prefix_len].iter().map(|&a| a as usize).collect(),
            suffix: key[suffix_at + 1..suffix_at + 1 + suffix_len]
                .iter()
                .map(|&a| a as usize)
                .collect(),
            counts,
        }
    }
}

/// Decides whether the accepted language is `l`-threshold `k`-testable by
/// exploring the reachable product of the profile automaton and `dfa`.
pub fn is_kl_testable(dfa: &Dfa, k: usize, l: usize, budget: usize) -> Result<Verdict> {
    let (Some(initial), Some(_)) = (dfa.initial(), dfa.accepting()) else {
        return Err(Error::MissingLanguageData);
    };
    let accepting = dfa.accepting_mask();
    let pa = ProfileAutomaton::new(dfa.letters(), k, l)?;

    let mut profile_ids: HashMap<ProfileKey, u32> = HashMap::new();
    let mut profiles: Vec<ProfileKey> = Vec::new();
    // first product node seen per profile id
    let mut representative: Vec<u32> = Vec::new();
    let mut node_ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut nodes: Vec<(u32, u32)> = Vec::new();
    let mut parent: Vec<(u32, u32)> = Vec::new();
    let mut queue = VecDeque::new();

    let mut intern = |key: ProfileKey, profiles: &mut Vec<ProfileKey>, representative: &mut Vec<u32>| {
        let next = profiles.len() as u32;
        match profile_ids.entry(key) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                profiles.push(e.key().clone());
                representative.push(u32::MAX);
                e.insert(next);
                next
            }
        }
    };

    let start = intern(pa.start(), &mut profiles, &mut representative);
    node_ids.insert((start, initial as u32), 0);
    nodes.push((start, initial as u32));
    parent.push((u32::MAX, u32::MAX));
    queue.push_back(0u32);

    let access_word = |parent: &[(u32, u32)], mut node: u32| {
        let mut word = Vec::new();
        while parent[node as usize].0 != u32::MAX {
            let (p, a) = parent[node as usize];
            word.push(a as usize);
            node = p;
        }
        word.reverse();
        word
    };

    while let Some(node) = queue.pop_front() {
        let (pid, state) = nodes[node as usize];
        for a in 0..dfa.letters() {
            let key = pa.step(&profiles[pid as usize], a);
            let next_pid = intern(key, &mut profiles, &mut representative);
            let next_state = dfa.step(state as usize, a) as u32;
            let id = match node_ids.entry((next_pid, next_state)) {
                Entry::Occupied(_) => continue,
                Entry::Vacant(e) => {
                    if nodes.len() >= budget {
                        return Err(Error::ProfileBudget { budget, k, l });
                    }
                    let id = nodes.len() as u32;
                    e.insert(id);
                    nodes.push((next_pid, next_state));
                    parent.push((node, a as u32));
                    id
                }
            };
            queue.push_back(id);
            let rep = representative[next_pid as usize];
            if rep == u32::MAX {
                representative[next_pid as usize] = id;
                continue;
            }
            let rep_state = nodes[rep as usize].1 as usize;
            if accepting[rep_state] != accepting[next_state as usize] {
                return Ok(Verdict::fails(
                    Reason::ProfileConflict,
                    Witness::ProfileConflict {
                        k,
                        l,
                        profile: pa.decode(&profiles[next_pid as usize]),
                        states: [rep_state, next_state as usize],
                        words: [access_word(&parent, rep), access_word(&parent, id)],
                    },
                ));
            }
        }
    }
    Ok(Verdict::holds())
}

/// Result of scanning `(k, l)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSearch {
    /// First pair for which the language is `l`-threshold `k`-testable.
    pub found: Option<(usize, usize)>,
    /// Pairs abandoned because the profile product outgrew the budget.
    pub skipped: Vec<(usize, usize)>,
    /// Always true: exhausting the bounds proves nothing.
    pub one_sided: bool,
}

/// Scans `(k, l)` in increasing `k + l`, ties broken by smaller `k`.
pub fn search_witness(dfa: &Dfa, kmax: usize, lmax: usize, budget: usize) -> Result<WitnessSearch> {
    if dfa.initial().is_none() || dfa.accepting().is_none() {
        return Err(Error::MissingLanguageData);
    }
    let mut pairs: Vec<(usize, usize)> = (1..=kmax).flat_map(|k| (1..=lmax).map(move |l| (k, l))).collect();
    pairs.sort_by_key(|&(k, l)| (k + l, k));
    let mut skipped = Vec::new();
    for (k, l) in pairs {
        match is_kl_testable(dfa, k, l, budget) {
            Ok(v) if v.outcome => {
                return Ok(WitnessSearch {
                    found: Some((k, l)),
                    skipped,
                    one_sided: true,
                })
            }
            Ok(_) => {}
            Err(e) if e.is_budget() => skipped.push((k, l)),
            Err(Error::Parameter(_)) => skipped.push((k, l)),
            Err(e) => return Err(e),
        }
    }
    Ok(WitnessSearch {
        found: None,
        skipped,
        one_sided: true,
    })
}
