//! Decision procedures for local testability and local threshold testability
//! of deterministic finite automata.
//!
//! The graph algorithms work on the transition graph Γ of an automaton and
//! its direct powers Γ², Γ³:
//!
//! * [`ltt::is_locally_threshold_testable`] runs in O(n⁵·|Σ|);
//! * [`lt::is_locally_testable_fast`] runs in O(n²·|Σ|).
//!
//! Both are cross-checked against the transition semigroup
//! ([`semigroup`]) and, at the language level, against explicit
//! (k,l)-profiles ([`profile`]).

pub mod corpus;
pub mod dfa;
pub mod error;
pub mod graph;
pub mod lt;
pub mod ltt;
pub mod profile;
pub mod replay;
pub mod semigroup;
pub mod verdict;

use std::time::{Duration, Instant};

pub use dfa::{parse_dfa, serialize, Dfa, PartialDfa, StateNames};
pub use error::{Error, Result};
pub use graph::Limits;
pub use verdict::{Reason, Verdict, Witness};

/// Knobs shared by the graph checkers.
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub limits: Limits,
    /// Worker threads for the inner scans; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl CheckOptions {
    pub fn with_workers(workers: usize) -> Self {
        CheckOptions {
            workers: Some(workers),
            ..Self::default()
        }
    }

    /// Runs `f` on a pool with the configured number of workers.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self.workers {
            None => f(),
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .expect("failed to build worker pool")
                .install(f),
        }
    }
}

/// Wall-clock time per named phase.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhaseTimes {
    phases: Vec<(&'static str, Duration)>,
}

impl PhaseTimes {
    /// Runs `f` and records its duration under `name`.
    pub fn time<R>(&mut self, name: &'static str, f: impl FnOnce() -> R) -> R {
        let start = Instant::now();
        let out = f();
        self.phases.push((name, start.elapsed()));
        out
    }

    pub fn phases(&self) -> &[(&'static str, Duration)] {
        &self.phases
    }

    pub fn total(&self) -> Duration {
        self.phases.iter().map(|(_, d)| *d).sum()
    }
}
