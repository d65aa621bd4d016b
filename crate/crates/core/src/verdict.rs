use serde::Serialize;

use crate::profile::Profile;

/// Why a check failed, or [`Reason::Holds`] when it did not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    Holds,
    // automaton invariants
    EmptyAlphabet,
    DuplicateLetter,
    NoStates,
    TableShape,
    StateOutOfRange,
    InitialOutOfRange,
    AcceptingOutOfRange,
    // graph conditions
    PairCollapse,
    TsccInconsistent,
    TsccMismatch,
    LocalTestMismatch,
    // semigroup conditions
    NotAperiodic,
    IdentityViolated,
    // language level
    ProfileConflict,
}

/// Structured evidence for a failed check.
///
/// States and letters are dense indices into the automaton that produced the
/// verdict. Words are sequences of letter indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Invariant {
        message: String,
        state: Option<usize>,
        letter: Option<usize>,
    },
    /// `(p, q)` lies on a cycle of the pair graph while `p ~ q` and `p != q`.
    PairCollapse { p: usize, q: usize },
    /// Two members of the same T-set lie in different components.
    TsccInconsistent {
        p: usize,
        q: usize,
        r: usize,
        r1: usize,
        t: usize,
        t_other: usize,
    },
    /// `t` represents T(p,q,r,r1) and `t1` represents T(p,r,q,q1); their
    /// components differ although all side conditions hold.
    TsccMismatch {
        p: usize,
        q: usize,
        r: usize,
        q1: usize,
        r1: usize,
        t: usize,
        t1: usize,
    },
    /// From the cycle node `(p, q)` with `p ⪰ q` the pair `(r, s)` with
    /// `s ~ q` is reachable, and `letter` separates `rσ ⪰ s` from `sσ ⪰ s`.
    LocalTest {
        p: usize,
        q: usize,
        r: usize,
        s: usize,
        letter: usize,
    },
    /// Semigroup element (given by a word) separating `p·x ⪰ q` from `q·x ⪰ q`.
    LocalTestElement { p: usize, q: usize, word: Vec<usize> },
    /// An element whose powers cycle with period greater than one.
    Periodic { word: Vec<usize>, period: usize },
    /// Idempotents `e`, `f` and elements `a`, `u`, `b` with
    /// `eafuebf != ebfueaf`; the state shows where the products differ.
    Identity {
        e: Vec<usize>,
        f: Vec<usize>,
        a: Vec<usize>,
        u: Vec<usize>,
        b: Vec<usize>,
        state: usize,
    },
    /// Two non-empty words with the same (k,l)-profile, one accepted and one
    /// rejected.
    ProfileConflict {
        k: usize,
        l: usize,
        profile: Profile,
        states: [usize; 2],
        words: [Vec<usize>; 2],
    },
}

/// Outcome of a check together with evidence for a negative answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: bool,
    pub reason: Reason,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            outcome: true,
            reason: Reason::Holds,
            witness: None,
        }
    }

    pub fn fails(reason: Reason, witness: Witness) -> Self {
        debug_assert!(reason != Reason::Holds);
        Verdict {
            outcome: false,
            reason,
            witness: Some(witness),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.outcome
    }
}
