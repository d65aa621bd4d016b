//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use ltt_cli::{cmd_random, Filter, RandomArgs};
use ltt_core::corpus::{all_dfas, random_dfa, seeded};
use ltt_core::dfa::minimize;
use ltt_core::lt::{is_locally_testable_direct, is_locally_testable_fast, is_locally_testable_semigroup};
use ltt_core::ltt::is_locally_threshold_testable;
use ltt_core::profile::{search_witness, DEFAULT_PROFILE_BUDGET};
use ltt_core::replay::replay;
use ltt_core::semigroup::{generate_semigroup, oracle_is_ltt, DEFAULT_BUDGET};
use ltt_core::{CheckOptions, Dfa, Reason, Verdict, Witness};

const RANDOM_SEED: u64 = 20_240_601;
const RANDOM_DRAWS: usize = 600;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, title: &str, elapsed: Duration, outcome: &Outcome) {
    println!(
        "criterion {id} [{title}]: {} ({}; {:.2}s)",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64()
    );
}

fn exhaustive() -> Vec<Dfa> {
    all_dfas(2, 2).chain(all_dfas(3, 2)).collect()
}

fn random_corpus() -> Vec<Dfa> {
    let mut rng = seeded(RANDOM_SEED);
    (0..RANDOM_DRAWS)
        .map(|i| random_dfa(&mut rng, 4 + i % 3, 2))
        .collect()
}

/// LTT graph verdict against the semigroup oracle. Returns (checked,
/// disagreements, budget skips).
fn ltt_vs_oracle(corpus: &[Dfa]) -> (usize, usize, usize) {
    let opts = CheckOptions::default();
    let (mut checked, mut bad, mut skipped) = (0, 0, 0);
    for d in corpus {
        let graph = is_locally_threshold_testable(d, &opts).unwrap();
        match oracle_is_ltt(d, DEFAULT_BUDGET) {
            Ok((oracle, _)) => {
                checked += 1;
                if oracle.outcome != graph.outcome {
                    bad += 1;
                    eprintln!("ltt disagreement on {:?}", d.table());
                }
            }
            Err(e) if e.is_budget() => skipped += 1,
            Err(e) => panic!("{e}"),
        }
    }
    (checked, bad, skipped)
}

fn criterion1(exhaustive: &[Dfa]) -> Outcome {
    let start = Instant::now();
    let (checked, bad, skipped) = ltt_vs_oracle(exhaustive);
    let elapsed = start.elapsed();
    Outcome {
        pass: bad == 0 && skipped == 0 && checked == 745 && elapsed < Duration::from_secs(60),
        detail: format!("{checked} automata, {bad} disagreements, {skipped} skipped"),
    }
}

fn criterion2(random: &[Dfa]) -> Outcome {
    let start = Instant::now();
    let (checked, bad, skipped) = ltt_vs_oracle(random);
    let elapsed = start.elapsed();
    let skip_rate = skipped as f64 / random.len() as f64;
    Outcome {
        pass: bad == 0 && random.len() >= 500 && skip_rate < 0.05 && elapsed < Duration::from_secs(300),
        detail: format!(
            "{} draws, {checked} compared, {bad} disagreements, skip rate {:.1}%",
            random.len(),
            skip_rate * 100.0
        ),
    }
}

/// Fast, direct and semigroup LT verdicts; `None` when the semigroup is over
/// budget.
fn lt_triple(d: &Dfa, opts: &CheckOptions) -> Option<[bool; 3]> {
    let fast = is_locally_testable_fast(d, opts).unwrap().outcome;
    let direct = is_locally_testable_direct(d, opts).unwrap().outcome;
    let s = match generate_semigroup(d, DEFAULT_BUDGET) {
        Ok(s) => s,
        Err(e) if e.is_budget() => return None,
        Err(e) => panic!("{e}"),
    };
    let semi = is_locally_testable_semigroup(d, &s, opts).unwrap().outcome;
    Some([fast, direct, semi])
}

fn criterion3(corpus: &[&Dfa]) -> Outcome {
    let opts = CheckOptions::default();
    let (mut checked, mut bad, mut lt) = (0, 0, 0);
    for d in corpus {
        if let Some([fast, direct, semi]) = lt_triple(d, &opts) {
            checked += 1;
            lt += fast as usize;
            if fast != direct || fast != semi {
                bad += 1;
                eprintln!("lt disagreement on {:?}: {fast} {direct} {semi}", d.table());
            }
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("{checked} automata, {lt} locally testable, {bad} disagreements"),
    }
}

fn criterion4(corpus: &[&Dfa]) -> Outcome {
    let opts = CheckOptions::default();
    let mut violations = 0;
    let mut lt = 0;
    for d in corpus {
        if is_locally_testable_fast(d, &opts).unwrap().outcome {
            lt += 1;
            if !is_locally_threshold_testable(d, &opts).unwrap().outcome {
                violations += 1;
                eprintln!("lt but not ltt: {:?}", d.table());
            }
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!("{lt} locally testable automata, {violations} violations"),
    }
}

fn criterion5() -> Outcome {
    let opts = CheckOptions::default();
    let one = Dfa::from_table(1, vec![0]).unwrap();
    let d2 = Dfa::from_table(1, vec![1, 0]).unwrap();
    let d3 = Dfa::from_table(2, vec![1, 0, 1, 1]).unwrap();
    let mut failures = Vec::new();

    let mut expect = |name: &str, d: &Dfa, lt: bool, ltt: bool| {
        let verdicts: Vec<(&str, Verdict)> = vec![
            ("lt", is_locally_testable_fast(d, &opts).unwrap()),
            ("lt-direct", is_locally_testable_direct(d, &opts).unwrap()),
            ("ltt", is_locally_threshold_testable(d, &opts).unwrap()),
            ("ltt-oracle", oracle_is_ltt(d, DEFAULT_BUDGET).unwrap().0),
        ];
        for (kind, v) in &verdicts {
            let want = if kind.starts_with("ltt") { ltt } else { lt };
            if v.outcome != want {
                failures.push(format!("{name} {kind} = {}", v.outcome));
            }
            if let Some(w) = &v.witness {
                if !replay(d, w) {
                    failures.push(format!("{name} {kind} witness does not replay"));
                }
            }
        }
        verdicts
    };

    expect("one-state", &one, true, true);
    let d2_verdicts = expect("D2", &d2, false, false);
    expect("D3", &d3, true, true);

    let ltt = &d2_verdicts[2].1;
    if ltt.reason != Reason::PairCollapse || ltt.witness != Some(Witness::PairCollapse { p: 0, q: 1 }) {
        failures.push(format!("D2 ltt witness {:?}", ltt.witness));
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "one-state, D2, D3 as expected; witnesses replay".into()
        } else {
            failures.join("; ")
        },
    }
}

fn criterion6(corpus: &[&Dfa]) -> Outcome {
    let opts = CheckOptions::default();
    let mut rng = seeded(RANDOM_SEED ^ 0xacce);
    let (mut found, mut violations, mut skipped_pairs) = (0, 0, 0);
    for d in corpus {
        let accepting = (0..d.states()).filter(|_| rng.gen_bool(0.5)).collect();
        let lang = (*d).clone().with_language(0, accepting).unwrap();
        let search = search_witness(&lang, 3, 3, DEFAULT_PROFILE_BUDGET).unwrap();
        skipped_pairs += search.skipped.len();
        if search.found.is_some() {
            found += 1;
            let min = minimize(&lang).unwrap();
            if !is_locally_threshold_testable(&min, &opts).unwrap().outcome {
                violations += 1;
                eprintln!(
                    "profile witness {:?} but minimal automaton fails: {:?}",
                    search.found,
                    d.table()
                );
            }
        }
    }
    Outcome {
        pass: violations == 0,
        detail: format!(
            "{} languages, {found} with a (k,l) witness, {violations} violations, {skipped_pairs} pairs over budget",
            corpus.len()
        ),
    }
}

fn median_seconds(n: usize, samples: usize, seed: u64, check: impl Fn(&Dfa)) -> f64 {
    let mut rng = seeded(seed);
    let mut times: Vec<f64> = (0..samples)
        .map(|_| {
            let d = random_dfa(&mut rng, n, 2);
            let start = Instant::now();
            check(&d);
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[samples / 2]
}

/// Least-squares slope of log(time) against log(n).
fn loglog_slope(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, t)| t.max(1e-9).ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn criterion7() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let ltt: Vec<(usize, f64)> = [10, 20, 40]
        .iter()
        .map(|&n| {
            let t = median_seconds(n, 21, 7 + n as u64, |d| {
                is_locally_threshold_testable(d, &opts).unwrap();
            });
            (n, t)
        })
        .collect();
    let lt: Vec<(usize, f64)> = [50, 100, 200]
        .iter()
        .map(|&n| {
            let t = median_seconds(n, 21, 11 + n as u64, |d| {
                is_locally_testable_fast(d, &opts).unwrap();
            });
            (n, t)
        })
        .collect();
    let (s_ltt, s_lt) = (loglog_slope(&ltt), loglog_slope(&lt));
    let elapsed = start.elapsed();
    let fmt = |pts: &[(usize, f64)]| {
        pts.iter()
            .map(|(n, t)| format!("n={n}: {:.3}ms", t * 1e3))
            .collect::<Vec<_>>()
            .join(", ")
    };
    Outcome {
        pass: s_ltt <= 5.5 && s_lt <= 2.5 && elapsed < Duration::from_secs(600),
        detail: format!(
            "ltt slope {s_ltt:.2} [{}], lt slope {s_lt:.2} [{}]",
            fmt(&ltt),
            fmt(&lt)
        ),
    }
}

fn criterion8(corpus: &[&Dfa]) -> Outcome {
    let args = RandomArgs {
        states: 5,
        letters: 2,
        seed: 42,
        count: 50,
        filter: Filter::None,
    };
    let emit = || {
        let mut out = Vec::new();
        cmd_random(&args, None, &mut out).unwrap();
        out
    };
    let identical = emit() == emit();

    let single = CheckOptions::with_workers(1);
    let many = CheckOptions::with_workers(4);
    let booleans = |d: &Dfa, opts: &CheckOptions| {
        [
            is_locally_threshold_testable(d, opts).unwrap().outcome,
            is_locally_testable_fast(d, opts).unwrap().outcome,
            is_locally_testable_direct(d, opts).unwrap().outcome,
        ]
    };
    let mismatches = corpus
        .iter()
        .filter(|d| booleans(d, &single) != booleans(d, &many))
        .count();
    Outcome {
        pass: identical && mismatches == 0,
        detail: format!(
            "random output {}, {mismatches} of {} automata differ between 1 and 4 workers",
            if identical { "byte-identical" } else { "differs" },
            corpus.len()
        ),
    }
}

fn main() -> ExitCode {
    let exhaustive = exhaustive();
    let random = random_corpus();
    let all: Vec<&Dfa> = exhaustive.iter().chain(&random).collect();

    let mut passed = true;
    let mut run = |id: usize, title: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        report(id, title, start.elapsed(), &outcome);
        passed &= outcome.pass;
    };
    run(1, "exhaustive oracle equivalence", &|| criterion1(&exhaustive));
    run(2, "random oracle equivalence", &|| criterion2(&random));
    run(3, "lt triple agreement", &|| criterion3(&all));
    run(4, "lt implies ltt", &|| criterion4(&all));
    run(5, "named instances", &criterion5);
    run(6, "profile oracle soundness", &|| criterion6(&all));
    run(7, "complexity slopes", &criterion7);
    run(8, "determinism", &|| criterion8(&all));

    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
