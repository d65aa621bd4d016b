use std::collections::HashSet;

use proptest::prelude::*;

use ltt_core::dfa::{default_alphabet, parse_dfa, parse_partial, serialize, PartialDfa, StateNames};
use ltt_core::graph::{
    product_graph, reachability_closure, scc_decompose, tuple_coords, LabeledDigraph, Limits,
};
use ltt_core::profile::{factor_profile, ProfileAutomaton};
use ltt_core::semigroup::{generate_semigroup, idempotent_power, Transformation};
use ltt_core::Dfa;

fn arb_dfa(max_states: usize, max_letters: usize) -> impl Strategy<Value = Dfa> {
    (1..=max_states, 1..=max_letters).prop_flat_map(|(n, m)| {
        (
            proptest::collection::vec(0..n, n * m),
            proptest::option::of(0..n),
            proptest::option::of(proptest::collection::vec(0..n, 0..=n)),
        )
            .prop_map(move |(delta, initial, accepting)| {
                Dfa::new(default_alphabet(m), n, delta, initial, accepting).unwrap()
            })
    })
}

/// Cycle membership by bounded breadth-first search over non-empty words.
fn on_cycle_bfs(g: &LabeledDigraph, v: usize) -> bool {
    let mut seen = HashSet::new();
    let mut frontier: Vec<usize> = g.successors(v).iter().map(|&w| w as usize).collect();
    while let Some(u) = frontier.pop() {
        if u == v {
            return true;
        }
        if seen.insert(u) {
            frontier.extend(g.successors(u).iter().map(|&w| w as usize));
        }
    }
    false
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(d in arb_dfa(5, 3)) {
        let text = serialize(&d, None);
        let (back, names) = parse_dfa(&text).unwrap();
        prop_assert_eq!(back, d.clone());
        prop_assert_eq!(names, StateNames::numeric(d.states()));
    }

    #[test]
    fn named_round_trip(d in arb_dfa(4, 2)) {
        let names = StateNames((0..d.states()).map(|i| format!("q{i}")).collect());
        let text = serialize(&d, Some(&names));
        prop_assert_eq!(parse_dfa(&text).unwrap(), (d, names));
    }

    #[test]
    fn sink_completion_is_idempotent(d in arb_dfa(4, 3), holes in proptest::collection::vec(any::<bool>(), 12)) {
        let mut partial = PartialDfa::from_dfa(&d, StateNames::numeric(d.states()));
        for (slot, hole) in partial.delta.iter_mut().zip(holes) {
            if hole {
                *slot = None;
            }
        }
        let missing = partial.delta.iter().filter(|t| t.is_none()).count();
        let (once, names) = partial.complete_with_sink().unwrap();
        prop_assert_eq!(once.states(), d.states() + usize::from(missing > 0));
        let (twice, _) = PartialDfa::from_dfa(&once, names).complete_with_sink().unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn scc_agrees_with_reachability(d in arb_dfa(4, 2), k in 1u32..=2) {
        let g = product_graph(&d, k, &Limits::default()).unwrap();
        let scc = scc_decompose(&g);
        let reach = reachability_closure(&g, &Limits::default()).unwrap();
        for u in 0..g.nodes() {
            prop_assert!(reach.reaches(u, u));
            for &w in g.successors(u) {
                prop_assert!(reach.reaches(u, w as usize));
            }
            for v in 0..g.nodes() {
                prop_assert_eq!(reach.equivalent(u, v), scc.same_component(u, v));
            }
            prop_assert_eq!(scc.is_scc_node(u), on_cycle_bfs(&g, u));
        }
    }

    #[test]
    fn products_project_to_coordinates(d in arb_dfa(3, 2), word in proptest::collection::vec(0usize..2, 0..8)) {
        let word: Vec<usize> = word.into_iter().map(|a| a % d.letters()).collect();
        let g3 = product_graph(&d, 3, &Limits::default()).unwrap();
        for start in 0..g3.nodes() {
            let end = word.iter().fold(start, |v, &a| g3.succ(v, a));
            let from = tuple_coords(d.states(), 3, start);
            let to = tuple_coords(d.states(), 3, end);
            for c in 0..3 {
                prop_assert_eq!(d.run(from[c], &word), to[c]);
            }
        }
    }

    #[test]
    fn semigroup_witnesses_replay(d in arb_dfa(4, 2)) {
        let s = generate_semigroup(&d, 50_000).unwrap();
        for x in 0..s.len() {
            let w = s.word(x);
            let expect = Transformation::of_word(&d, &w);
            let image: Vec<usize> = s.image(x).iter().map(|&v| v as usize).collect();
            prop_assert_eq!(image, expect.image.clone());
            prop_assert_eq!(s.is_idempotent(x), expect.is_idempotent());
            let omega = idempotent_power(&expect);
            prop_assert!(omega.is_idempotent());
            prop_assert_eq!(&omega.then(&omega).image, &omega.image);
            // omega is a power of x: its word is x's word repeated
            prop_assert_eq!(omega.word.len() % w.len(), 0);
        }
    }

    #[test]
    fn one_letter_semigroup_is_the_rho_shape(delta in proptest::collection::vec(0usize..6, 6)) {
        let d = Dfa::from_table(1, delta).unwrap();
        let s = generate_semigroup(&d, 1000).unwrap();
        // tail + cycle of the powers of the letter
        let letter = Transformation::of_word(&d, &[0]);
        let mut powers = vec![letter.image.clone()];
        loop {
            let next: Vec<usize> = powers.last().unwrap().iter().map(|&q| letter.image[q]).collect();
            if powers.contains(&next) {
                break;
            }
            powers.push(next);
        }
        prop_assert_eq!(s.len(), powers.len());
    }

    #[test]
    fn profile_automaton_tracks_profiles(
        k in 1usize..=3,
        l in 1usize..=3,
        words in proptest::collection::vec(proptest::collection::vec(0usize..2, 1..30), 200),
    ) {
        let pa = ProfileAutomaton::new(2, k, l).unwrap();
        for w in &words {
            prop_assert_eq!(pa.decode(&pa.run(w)), factor_profile(w, k, l).unwrap());
        }
    }

    #[test]
    fn larger_threshold_refines_smaller(w in proptest::collection::vec(0usize..3, 1..25), k in 1usize..=3, l in 1usize..=3) {
        let fine = factor_profile(&w, k, l + 1).unwrap();
        let coarse = factor_profile(&w, k, l).unwrap();
        let projected: Vec<(Vec<usize>, usize)> =
            fine.counts.iter().map(|(f, c)| (f.clone(), (*c).min(l))).collect();
        prop_assert_eq!(projected, coarse.counts);
        prop_assert_eq!(fine.prefix, coarse.prefix);
        prop_assert_eq!(fine.suffix, coarse.suffix);
    }
}

#[test]
fn partial_parse_reports_holes() {
    let p = parse_partial("alphabet a b\nstates 2\ntrans 0 a 1").unwrap();
    assert_eq!(p.delta, vec![Some(1), None, None, None]);
}
