//! Local threshold testability from the graphs Γ, Γ² and Γ³.
//!
//! An automaton is locally threshold testable iff
//!
//! 1. no cycle node `(p, q)` of Γ² with `p != q` has `p ~ q` in Γ, and
//! 2. for all `p, q, r, q1, r1` with non-empty `T_SCC(p,q,r,r1)` and
//!    `T_SCC(p,r,q,q1)`, `(p,q1,r1)` a cycle node of Γ³ and
//!    `(q,r) ⪰ (q1,r1)` in Γ², the two components coincide.
//!
//! `T_SCC(p,q,r,r1)` is the Γ-component holding every `t` with
//! `(p,r1) ⪰ (q,t)` in Γ² and `(q,r,t)` a cycle node of Γ³; it is only
//! defined when `p ⪰ r ⪰ r1`, `p ⪰ q` and `(p,r1)`, `(q,r)` are cycle
//! nodes of Γ². If its members straddle two components the automaton is
//! rejected on the spot.
//!
//! The scans are split over `p` and use `find_map_first`, so the reported
//! witness is the lexicographically first one regardless of worker count.

use rayon::prelude::*;

use crate::dfa::Dfa;
use crate::error::Result;
use crate::graph::{
    product_graph, reachability_closure, scc_decompose, LabeledDigraph, Limits, ReachTable, SccDecomposition,
};
use crate::verdict::{Reason, Verdict, Witness};
use crate::{CheckOptions, PhaseTimes};

/// Everything the threshold check reads: SCCs of Γ, Γ², Γ³ and
/// reachability on Γ and Γ².
#[derive(Debug, Clone)]
pub struct LttTables {
    n: usize,
    pub gamma_scc: SccDecomposition,
    pub gamma_reach: ReachTable,
    pub pair_scc: SccDecomposition,
    pub pair_reach: ReachTable,
    pub triple_scc: SccDecomposition,
}

impl LttTables {
    pub fn build(dfa: &Dfa, limits: &Limits) -> Result<Self> {
        Self::build_timed(dfa, limits, &mut PhaseTimes::default())
    }

    pub fn build_timed(dfa: &Dfa, limits: &Limits, times: &mut PhaseTimes) -> Result<Self> {
        let (gamma, pairs, triples) = times.time("products", || -> Result<_> {
            Ok((
                LabeledDigraph::of_dfa(dfa),
                product_graph(dfa, 2, limits)?,
                product_graph(dfa, 3, limits)?,
            ))
        })?;
        let (gamma_scc, pair_scc, triple_scc) = times.time("scc", || {
            (
                scc_decompose(&gamma),
                scc_decompose(&pairs),
                scc_decompose(&triples),
            )
        });
        let (gamma_reach, pair_reach) = times.time("reachability", || -> Result<_> {
            Ok((
                reachability_closure(&gamma, limits)?,
                reachability_closure(&pairs, limits)?,
            ))
        })?;
        Ok(LttTables {
            n: dfa.states(),
            gamma_scc,
            gamma_reach,
            pair_scc,
            pair_reach,
            triple_scc,
        })
    }

    pub fn states(&self) -> usize {
        self.n
    }

    #[inline]
    fn pair(&self, a: usize, b: usize) -> usize {
        a * self.n + b
    }

    #[inline]
    fn triple(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n + b) * self.n + c
    }

    #[inline]
    pub fn reaches(&self, p: usize, q: usize) -> bool {
        self.gamma_reach.reaches(p, q)
    }

    #[inline]
    pub fn pair_is_scc_node(&self, a: usize, b: usize) -> bool {
        self.pair_scc.is_scc_node(self.pair(a, b))
    }

    #[inline]
    pub fn pair_reaches(&self, from: (usize, usize), to: (usize, usize)) -> bool {
        self.pair_reach
            .reaches(self.pair(from.0, from.1), self.pair(to.0, to.1))
    }

    #[inline]
    pub fn triple_is_scc_node(&self, a: usize, b: usize, c: usize) -> bool {
        self.triple_scc.is_scc_node(self.triple(a, b, c))
    }

    /// Side conditions under which `T_SCC(p,q,r,r1)` is defined.
    #[inline]
    pub fn tscc_applicable(&self, p: usize, q: usize, r: usize, r1: usize) -> bool {
        self.reaches(p, q)
            && self.reaches(p, r)
            && self.reaches(r, r1)
            && self.pair_is_scc_node(q, r)
            && self.pair_is_scc_node(p, r1)
    }

    /// Membership of `t` in `T(p,q,r,r1)`, ignoring the side conditions.
    #[inline]
    pub fn in_t_set(&self, p: usize, q: usize, r: usize, r1: usize, t: usize) -> bool {
        self.pair_reaches((p, r1), (q, t)) && self.triple_is_scc_node(q, r, t)
    }
}

/// Any cycle node `(p, q)` of Γ² with `p != q` and `p ~ q` in Γ; shared by
/// both checkers.
pub fn check_pair_collapse(pair_scc: &SccDecomposition, gamma_reach: &ReachTable) -> Verdict {
    let n = gamma_reach.nodes();
    let found = (0..n).into_par_iter().find_map_first(|p| {
        (0..n)
            .find(|&q| p != q && pair_scc.is_scc_node(p * n + q) && gamma_reach.equivalent(p, q))
            .map(|q| (p, q))
    });
    match found {
        Some((p, q)) => Verdict::fails(Reason::PairCollapse, Witness::PairCollapse { p, q }),
        None => Verdict::holds(),
    }
}

/// One cell of the T_SCC table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsccEntry {
    NotApplicable,
    Empty,
    Scc(usize),
}

const NOT_APPLICABLE: u32 = u32::MAX;
const EMPTY: u32 = u32::MAX - 1;

/// `T_SCC` for every quadruple of states, as Γ-component ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsccTable {
    n: usize,
    cells: Vec<u32>,
}

impl TsccTable {
    #[inline]
    fn raw(&self, p: usize, q: usize, r: usize, r1: usize) -> u32 {
        self.cells[((p * self.n + q) * self.n + r) * self.n + r1]
    }

    pub fn entry(&self, p: usize, q: usize, r: usize, r1: usize) -> TsccEntry {
        match self.raw(p, q, r, r1) {
            NOT_APPLICABLE => TsccEntry::NotApplicable,
            EMPTY => TsccEntry::Empty,
            c => TsccEntry::Scc(c as usize),
        }
    }

    /// Number of quadruples with a non-empty component.
    pub fn populated(&self) -> usize {
        self.cells.iter().filter(|&&c| c < EMPTY).count()
    }
}

/// Two members of one T-set found in different Γ-components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inconsistent {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub r1: usize,
    pub t: usize,
    pub t_other: usize,
}

impl From<Inconsistent> for Witness {
    fn from(i: Inconsistent) -> Self {
        Witness::TsccInconsistent {
            p: i.p,
            q: i.q,
            r: i.r,
            r1: i.r1,
            t: i.t,
            t_other: i.t_other,
        }
    }
}

pub fn compute_tscc_table(tables: &LttTables) -> std::result::Result<TsccTable, Inconsistent> {
    let n = tables.n;
    let block = n * n * n;
    let mut cells = vec![NOT_APPLICABLE; n * block];
    let failures: Vec<Option<Inconsistent>> = cells
        .par_chunks_mut(block.max(1))
        .enumerate()
        .map(|(p, chunk)| fill_tscc_block(tables, p, chunk))
        .collect();
    match failures.into_iter().flatten().next() {
        Some(bad) => Err(bad),
        None => Ok(TsccTable { n, cells }),
    }
}

fn fill_tscc_block(tables: &LttTables, p: usize, chunk: &mut [u32]) -> Option<Inconsistent> {
    let n = tables.n;
    for q in (0..n).filter(|&q| tables.reaches(p, q)) {
        for r in (0..n).filter(|&r| tables.reaches(p, r)) {
            if !tables.pair_is_scc_node(q, r) {
                continue;
            }
            for r1 in (0..n).filter(|&r1| tables.reaches(r, r1)) {
                if !tables.pair_is_scc_node(p, r1) {
                    continue;
                }
                let mut first: Option<usize> = None;
                for t in 0..n {
                    if !tables.in_t_set(p, q, r, r1, t) {
                        continue;
                    }
                    match first {
                        None => first = Some(t),
                        Some(t0) if !tables.gamma_scc.same_component(t0, t) => {
                            return Some(Inconsistent {
                                p,
                                q,
                                r,
                                r1,
                                t: t0,
                                t_other: t,
                            })
                        }
                        Some(_) => {}
                    }
                }
                chunk[(q * n + r) * n + r1] = match first {
                    Some(t) => tables.gamma_scc.component(t) as u32,
                    None => EMPTY,
                };
            }
        }
    }
    None
}

/// First member of `T(p,q,r,r1)`, used to turn component ids back into states.
fn representative(tables: &LttTables, p: usize, q: usize, r: usize, r1: usize) -> usize {
    (0..tables.n)
        .find(|&t| tables.in_t_set(p, q, r, r1, t))
        .expect("populated T_SCC entry without members")
}

pub fn check_condition2(tscc: &TsccTable, tables: &LttTables) -> Verdict {
    let n = tables.n;
    let found = (0..n).into_par_iter().find_map_first(|p| {
        for q in 0..n {
            for r in 0..n {
                for q1 in 0..n {
                    let TsccEntry::Scc(other) = tscc.entry(p, r, q, q1) else {
                        continue;
                    };
                    for r1 in 0..n {
                        let TsccEntry::Scc(c) = tscc.entry(p, q, r, r1) else {
                            continue;
                        };
                        if c != other
                            && tables.triple_is_scc_node(p, q1, r1)
                            && tables.pair_reaches((q, r), (q1, r1))
                        {
                            return Some((p, q, r, q1, r1));
                        }
                    }
                }
            }
        }
        None
    });
    match found {
        None => Verdict::holds(),
        Some((p, q, r, q1, r1)) => Verdict::fails(
            Reason::TsccMismatch,
            Witness::TsccMismatch {
                p,
                q,
                r,
                q1,
                r1,
                t: representative(tables, p, q, r, r1),
                t1: representative(tables, p, r, q, q1),
            },
        ),
    }
}

/// Full decision: tables, pair collapse, T_SCC, then the quintuple scan.
pub fn is_locally_threshold_testable(dfa: &Dfa, opts: &CheckOptions) -> Result<Verdict> {
    Ok(is_locally_threshold_testable_timed(dfa, opts)?.0)
}

pub fn is_locally_threshold_testable_timed(dfa: &Dfa, opts: &CheckOptions) -> Result<(Verdict, PhaseTimes)> {
    opts.install(|| {
        let mut times = PhaseTimes::default();
        let tables = LttTables::build_timed(dfa, &opts.limits, &mut times)?;
        let collapse = times.time("pair-collapse", || {
            check_pair_collapse(&tables.pair_scc, &tables.gamma_reach)
        });
        if !collapse.outcome {
            return Ok((collapse, times));
        }
        let tscc = match times.time("tscc", || compute_tscc_table(&tables)) {
            Ok(t) => t,
            Err(bad) => return Ok((Verdict::fails(Reason::TsccInconsistent, bad.into()), times)),
        };
        let verdict = times.time("condition2", || check_condition2(&tscc, &tables));
        Ok((verdict, times))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_state() -> Dfa {
        Dfa::from_table(1, vec![0]).unwrap()
    }

    fn d2() -> Dfa {
        Dfa::from_table(1, vec![1, 0]).unwrap()
    }

    fn d3() -> Dfa {
        Dfa::from_table(2, vec![1, 0, 1, 1]).unwrap()
    }

    fn tables(d: &Dfa) -> LttTables {
        LttTables::build(d, &Limits::default()).unwrap()
    }

    #[test]
    fn pair_collapse_examples() {
        let t = tables(&one_state());
        assert!(check_pair_collapse(&t.pair_scc, &t.gamma_reach).outcome);

        let t = tables(&d2());
        let v = check_pair_collapse(&t.pair_scc, &t.gamma_reach);
        assert!(!v.outcome);
        assert_eq!(v.witness, Some(Witness::PairCollapse { p: 0, q: 1 }));

        let t = tables(&d3());
        assert!(check_pair_collapse(&t.pair_scc, &t.gamma_reach).outcome);
    }

    #[test]
    fn tscc_examples() {
        let t = tables(&d3());
        let table = compute_tscc_table(&t).unwrap();
        assert_eq!(table.entry(0, 0, 1, 1), TsccEntry::Scc(t.gamma_scc.component(1)));
        for q in 0..2 {
            for r1 in 0..2 {
                assert_eq!(table.entry(1, q, 0, r1), TsccEntry::NotApplicable);
            }
        }

        let t = tables(&one_state());
        let table = compute_tscc_table(&t).unwrap();
        assert_eq!(table.entry(0, 0, 0, 0), TsccEntry::Scc(t.gamma_scc.component(0)));
    }

    #[test]
    fn condition2_examples() {
        for d in [one_state(), d3()] {
            let t = tables(&d);
            let table = compute_tscc_table(&t).unwrap();
            assert!(check_condition2(&table, &t).outcome);
        }
    }

    #[test]
    fn decision_examples() {
        let opts = CheckOptions::default();
        assert!(
            is_locally_threshold_testable(&one_state(), &opts)
                .unwrap()
                .outcome
        );
        let v = is_locally_threshold_testable(&d2(), &opts).unwrap();
        assert!(!v.outcome);
        assert_eq!(v.reason, Reason::PairCollapse);
        assert!(is_locally_threshold_testable(&d3(), &opts).unwrap().outcome);
    }

    #[test]
    fn capacity_error_propagates() {
        let opts = CheckOptions {
            limits: Limits {
                max_product_nodes: 4,
                ..Limits::default()
            },
            workers: None,
        };
        assert!(is_locally_threshold_testable(&d3(), &opts)
            .unwrap_err()
            .is_budget());
    }
}
