//! Local testability.
//!
//! Three routes to the same answer:
//!
//! * [`is_locally_testable_fast`]: pruned traversal of Γ², O(n²·|Σ|);
//! * [`is_locally_testable_direct`]: literal scan of every reachable pair
//!   from every cycle node of Γ², O(n⁴·|Σ|);
//! * [`is_locally_testable_semigroup`]: quantifies over the explicit
//!   transition semigroup.
//!
//! All three first require that no cycle node `(p, q)` of Γ² with `p != q`
//! has `p ~ q`. The local condition then concerns cycle nodes `(p, q)` with
//! `p ⪰ q`: along any path `(p, q) → (r, s)` that keeps `s ~ q`, each letter
//! `σ` must satisfy `rσ ⪰ s ⟺ sσ ⪰ s`.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::dfa::Dfa;
use crate::error::Result;
use crate::graph::{
    product_graph, reachability_closure, scc_decompose, LabeledDigraph, ReachTable, SccDecomposition,
};
use crate::ltt::check_pair_collapse;
use crate::semigroup::TransitionSemigroup;
use crate::verdict::{Reason, Verdict, Witness};
use crate::{CheckOptions, PhaseTimes};

/// Γ² with the non-local edges removed, the letter marks, and a synthetic
/// super-source (index `n²`) pointing at the traversal roots.
#[derive(Debug, Clone)]
pub struct PrunedPairGraph {
    n: usize,
    pairs: LabeledDigraph,
    gamma_reach: ReachTable,
    roots: Vec<usize>,
    marked: Vec<bool>,
}

impl PrunedPairGraph {
    pub fn new(
        dfa: &Dfa,
        pairs: LabeledDigraph,
        pair_scc: &SccDecomposition,
        gamma_reach: ReachTable,
    ) -> Self {
        let n = dfa.states();
        let m = dfa.letters();
        let roots = (0..n * n)
            .filter(|&v| pair_scc.is_scc_node(v) && gamma_reach.reaches(v / n, v % n))
            .collect();
        let marked = (0..n * n)
            .map(|v| {
                let (p, q) = (v / n, v % n);
                (0..m)
                    .any(|a| gamma_reach.reaches(dfa.step(p, a), q) != gamma_reach.reaches(dfa.step(q, a), q))
            })
            .collect();
        PrunedPairGraph {
            n,
            pairs,
            gamma_reach,
            roots,
            marked,
        }
    }

    pub fn super_source(&self) -> usize {
        self.n * self.n
    }

    /// Cycle nodes `(p, q)` with `p ⪰ q`, in index order.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn is_marked(&self, node: usize) -> bool {
        self.marked[node]
    }

    /// The edge `(p,q) → (r,s)` survives unless `s ⋡ q` and `s ⋡ p`.
    #[inline]
    pub fn edge_kept(&self, from: usize, to: usize) -> bool {
        let (p, q) = (from / self.n, from % self.n);
        let s = to % self.n;
        self.gamma_reach.reaches(s, q) || self.gamma_reach.reaches(s, p)
    }

    /// Breadth-first traversal from the super-source. Marked nodes are
    /// reported but not expanded; returns the first marked node reached with
    /// the root it was reached from, and calls `on_edge` for every traversed
    /// pruned edge.
    pub fn traverse(&self, mut on_edge: impl FnMut(usize, usize)) -> (Vec<bool>, Option<(usize, usize)>) {
        let nodes = self.n * self.n;
        let mut visited = vec![false; nodes];
        let mut origin = vec![usize::MAX; nodes];
        let mut queue = VecDeque::new();
        for &root in &self.roots {
            on_edge(self.super_source(), root);
            if !visited[root] {
                visited[root] = true;
                origin[root] = root;
                queue.push_back(root);
            }
        }
        while let Some(v) = queue.pop_front() {
            if self.marked[v] {
                return (visited, Some((origin[v], v)));
            }
            for &w in self.pairs.successors(v) {
                let w = w as usize;
                if !self.edge_kept(v, w) {
                    continue;
                }
                on_edge(v, w);
                if !visited[w] {
                    visited[w] = true;
                    origin[w] = origin[v];
                    queue.push_back(w);
                }
            }
        }
        (visited, None)
    }
}

fn separating_letter(dfa: &Dfa, reach: &ReachTable, r: usize, s: usize) -> Option<usize> {
    (0..dfa.letters()).find(|&a| reach.reaches(dfa.step(r, a), s) != reach.reaches(dfa.step(s, a), s))
}

pub fn is_locally_testable_fast(dfa: &Dfa, opts: &CheckOptions) -> Result<Verdict> {
    Ok(is_locally_testable_fast_timed(dfa, opts)?.0)
}

pub fn is_locally_testable_fast_timed(dfa: &Dfa, opts: &CheckOptions) -> Result<(Verdict, PhaseTimes)> {
    opts.install(|| {
        let mut times = PhaseTimes::default();
        let n = dfa.states();
        let (gamma_reach, pairs) = times.time("tables", || -> Result<_> {
            let gamma = LabeledDigraph::of_dfa(dfa);
            Ok((
                reachability_closure(&gamma, &opts.limits)?,
                product_graph(dfa, 2, &opts.limits)?,
            ))
        })?;
        let pair_scc = times.time("scc", || scc_decompose(&pairs));
        let collapse = times.time("pair-collapse", || check_pair_collapse(&pair_scc, &gamma_reach));
        if !collapse.outcome {
            return Ok((collapse, times));
        }
        let graph = times.time("prune", || {
            PrunedPairGraph::new(dfa, pairs, &pair_scc, gamma_reach)
        });
        let (_, hit) = times.time("traverse", || graph.traverse(|_, _| {}));
        let verdict = match hit {
            None => Verdict::holds(),
            Some((root, node)) => {
                let (r, s) = (node / n, node % n);
                let letter = separating_letter(dfa, &graph.gamma_reach, r, s)
                    .expect("marked node without separating letter");
                Verdict::fails(
                    Reason::LocalTestMismatch,
                    Witness::LocalTest {
                        p: root / n,
                        q: root % n,
                        r,
                        s,
                        letter,
                    },
                )
            }
        };
        Ok((verdict, times))
    })
}

/// Literal scan: from every cycle node `(p, q)` of Γ² with `p ⪰ q`, visit
/// every `(r, s)` it reaches in Γ² with `s ~ q` and compare `rσ ⪰ s` with
/// `sσ ⪰ s` for every letter.
pub fn is_locally_testable_direct(dfa: &Dfa, opts: &CheckOptions) -> Result<Verdict> {
    opts.install(|| {
        let n = dfa.states();
        let gamma_reach = reachability_closure(&LabeledDigraph::of_dfa(dfa), &opts.limits)?;
        let pairs = product_graph(dfa, 2, &opts.limits)?;
        let pair_scc = scc_decompose(&pairs);
        let collapse = check_pair_collapse(&pair_scc, &gamma_reach);
        if !collapse.outcome {
            return Ok(collapse);
        }
        let found = (0..n * n).into_par_iter().find_map_first(|root| {
            let (p, q) = (root / n, root % n);
            if p == q || !pair_scc.is_scc_node(root) || !gamma_reach.reaches(p, q) {
                return None;
            }
            let mut seen = vec![false; n * n];
            seen[root] = true;
            let mut stack = vec![root];
            let mut hits = Vec::new();
            while let Some(v) = stack.pop() {
                let (r, s) = (v / n, v % n);
                if gamma_reach.equivalent(s, q) {
                    if let Some(letter) = separating_letter(dfa, &gamma_reach, r, s) {
                        hits.push((v, letter));
                    }
                }
                for &w in pairs.successors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w as usize);
                    }
                }
            }
            hits.into_iter().min().map(|(v, letter)| Witness::LocalTest {
                p,
                q,
                r: v / n,
                s: v % n,
                letter,
            })
        });
        Ok(match found {
            Some(w) => Verdict::fails(Reason::LocalTestMismatch, w),
            None => Verdict::holds(),
        })
    })
}

/// For every cycle node `(p, q)` of Γ² with `p ⪰ q`, `p != q`, and every
/// element `x` of the transition semigroup: `p·x ⪰ q ⟺ q·x ⪰ q`.
pub fn is_locally_testable_semigroup(
    dfa: &Dfa,
    semigroup: &TransitionSemigroup,
    opts: &CheckOptions,
) -> Result<Verdict> {
    opts.install(|| {
        let n = dfa.states();
        let gamma_reach = reachability_closure(&LabeledDigraph::of_dfa(dfa), &opts.limits)?;
        let pair_scc = scc_decompose(&product_graph(dfa, 2, &opts.limits)?);
        let collapse = check_pair_collapse(&pair_scc, &gamma_reach);
        if !collapse.outcome {
            return Ok(collapse);
        }
        let found = (0..n * n).into_par_iter().find_map_first(|root| {
            let (p, q) = (root / n, root % n);
            if p == q || !pair_scc.is_scc_node(root) || !gamma_reach.reaches(p, q) {
                return None;
            }
            (0..semigroup.len())
                .find(|&x| {
                    let image = semigroup.image(x);
                    gamma_reach.reaches(image[p] as usize, q) != gamma_reach.reaches(image[q] as usize, q)
                })
                .map(|x| Witness::LocalTestElement {
                    p,
                    q,
                    word: semigroup.word(x),
                })
        });
        Ok(match found {
            Some(w) => Verdict::fails(Reason::LocalTestMismatch, w),
            None => Verdict::holds(),
        })
    })
}
