//! Transition graphs, their direct powers, SCCs and reachability tables.

use rayon::prelude::*;

use crate::dfa::Dfa;
use crate::error::{Error, Result};

/// Resource limits for the product constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest node count allowed for a materialized product graph.
    pub max_product_nodes: u64,
    /// Largest reachability matrix, in bits.
    pub max_reach_bits: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_product_nodes: 1 << 26,
            max_reach_bits: 1 << 33,
        }
    }
}

/// A deterministic, total, letter-labelled digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDigraph {
    nodes: usize,
    letters: usize,
    succ: Vec<u32>,
}

impl LabeledDigraph {
    /// The transition graph of an automaton.
    pub fn of_dfa(dfa: &Dfa) -> Self {
        LabeledDigraph {
            nodes: dfa.states(),
            letters: dfa.letters(),
            succ: dfa.table().iter().map(|&t| t as u32).collect(),
        }
    }

    pub fn from_succ(nodes: usize, letters: usize, succ: Vec<u32>) -> Self {
        assert_eq!(succ.len(), nodes * letters);
        assert!(succ.iter().all(|&v| (v as usize) < nodes));
        LabeledDigraph { nodes, letters, succ }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    #[inline]
    pub fn succ(&self, node: usize, letter: usize) -> usize {
        self.succ[node * self.letters + letter] as usize
    }

    #[inline]
    pub fn successors(&self, node: usize) -> &[u32] {
        &self.succ[node * self.letters..(node + 1) * self.letters]
    }
}

/// Index of the tuple `(p1, .., pk)` in a product over `n` states (row-major).
#[inline]
pub fn tuple_index(n: usize, coords: &[usize]) -> usize {
    coords.iter().fold(0, |acc, &c| acc * n + c)
}

/// Inverse of [`tuple_index`].
pub fn tuple_coords(n: usize, k: usize, mut index: usize) -> Vec<usize> {
    let mut coords = vec![0; k];
    for slot in coords.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    coords
}

/// The direct product of `k` copies of the transition graph; every
/// coordinate advances by the same letter.
pub fn product_graph(dfa: &Dfa, k: u32, limits: &Limits) -> Result<LabeledDigraph> {
    if !(1..=3).contains(&k) {
        return Err(Error::Parameter(format!(
            "product power must be 1, 2 or 3, got {k}"
        )));
    }
    let n = dfa.states();
    let m = dfa.letters();
    let required = (n as u128).pow(k);
    if required > limits.max_product_nodes as u128 || required > u32::MAX as u128 {
        return Err(Error::CapacityExceeded {
            what: "product graph nodes",
            required,
            budget: limits.max_product_nodes as u128,
        });
    }
    let nodes = required as usize;
    let mut succ = vec![0u32; nodes * m];
    succ.par_chunks_mut(m).enumerate().for_each(|(node, row)| {
        for (a, slot) in row.iter_mut().enumerate() {
            let mut rest = node;
            let mut target = 0;
            let mut scale = 1;
            for _ in 0..k {
                target += dfa.step(rest % n, a) * scale;
                rest /= n;
                scale *= n;
            }
            *slot = target as u32;
        }
    });
    Ok(LabeledDigraph {
        nodes,
        letters: m,
        succ,
    })
}

/// Strongly connected components plus the lies-on-a-cycle flag per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    component: Vec<u32>,
    on_cycle: Vec<bool>,
    count: usize,
}

impl SccDecomposition {
    #[inline]
    pub fn component(&self, node: usize) -> usize {
        self.component[node] as usize
    }

    /// True iff some non-empty word leads from `node` back to itself.
    #[inline]
    pub fn is_scc_node(&self, node: usize) -> bool {
        self.on_cycle[node]
    }

    #[inline]
    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.component[u] == self.component[v]
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn nodes(&self) -> usize {
        self.component.len()
    }
}

/// Tarjan's algorithm, iterative. Components are numbered in completion
/// order, i.e. sinks of the condensation first.
pub fn scc_decompose(g: &LabeledDigraph) -> SccDecomposition {
    const UNVISITED: u32 = u32::MAX;
    let n = g.nodes();
    let m = g.letters();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNVISITED; n];
    let mut stack: Vec<u32> = Vec::new();
    // (node, next letter to explore)
    let mut frames: Vec<(u32, u32)> = Vec::new();
    let mut next_index = 0u32;
    let mut count = 0u32;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        frames.push((root as u32, 0));

        while let Some(frame) = frames.last_mut() {
            let v = frame.0 as usize;
            if (frame.1 as usize) < m {
                let w = g.succ(v, frame.1 as usize);
                frame.1 += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    frames.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(parent) = frames.last() {
                let p = parent.0 as usize;
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow") as usize;
                    on_stack[w] = false;
                    component[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }

    let mut size = vec![0u32; count as usize];
    for &c in &component {
        size[c as usize] += 1;
    }
    let on_cycle = (0..n)
        .map(|v| size[component[v] as usize] > 1 || g.successors(v).iter().any(|&w| w as usize == v))
        .collect();
    SccDecomposition {
        component,
        on_cycle,
        count: count as usize,
    }
}

/// Packed square boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    size: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(size: usize) -> Self {
        let words_per_row = size.div_ceil(64);
        BitMatrix {
            size,
            words_per_row,
            bits: vec![0; size * words_per_row],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.words_per_row + col / 64] >> (col % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words_per_row + col / 64] |= 1 << (col % 64);
    }

    pub fn row_words(&self, row: usize) -> &[u64] {
        &self.bits[row * self.words_per_row..(row + 1) * self.words_per_row]
    }
}

/// Reflexive-transitive reachability: `reaches(u, v)` is the `u ⪰ v` relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachTable {
    matrix: BitMatrix,
}

impl ReachTable {
    #[inline]
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        self.matrix.get(from, to)
    }

    /// Mutual reachability (equal nodes included).
    #[inline]
    pub fn equivalent(&self, u: usize, v: usize) -> bool {
        self.reaches(u, v) && self.reaches(v, u)
    }

    pub fn nodes(&self) -> usize {
        self.matrix.size()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }
}

/// One marking traversal per source node; rows are filled in parallel and
/// the result does not depend on the schedule.
pub fn reachability_closure(g: &LabeledDigraph, limits: &Limits) -> Result<ReachTable> {
    let n = g.nodes();
    let required = (n as u128) * (n as u128);
    if required > limits.max_reach_bits as u128 {
        return Err(Error::CapacityExceeded {
            what: "reachability matrix bits",
            required,
            budget: limits.max_reach_bits as u128,
        });
    }
    let mut matrix = BitMatrix::new(n);
    let wpr = matrix.words_per_row.max(1);
    if n == 0 {
        return Ok(ReachTable { matrix });
    }
    matrix.bits.par_chunks_mut(wpr).enumerate().for_each_init(
        Vec::new,
        |stack: &mut Vec<u32>, (source, row)| {
            let mark = |row: &mut [u64], v: usize| {
                let word = &mut row[v / 64];
                let bit = 1u64 << (v % 64);
                let fresh = *word & bit == 0;
                *word |= bit;
                fresh
            };
            stack.clear();
            mark(row, source);
            stack.push(source as u32);
            while let Some(v) = stack.pop() {
                for &w in g.successors(v as usize) {
                    if mark(row, w as usize) {
                        stack.push(w);
                    }
                }
            }
        },
    );
    Ok(ReachTable { matrix })
}

/// Reachability restricted to the listed sources; rows of other nodes are
/// left empty (not even reflexive). Used where only a few rows matter.
pub fn reach_rows(g: &LabeledDigraph, sources: &[usize]) -> Vec<Vec<bool>> {
    sources
        .par_iter()
        .map(|&source| {
            let mut seen = vec![false; g.nodes()];
            seen[source] = true;
            let mut stack = vec![source];
            while let Some(v) = stack.pop() {
                for &w in g.successors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w as usize);
                    }
                }
            }
            seen
        })
        .collect()
}
