//! Deterministic finite automata: representation, text format, validation.
//!
//! States are dense indices `0..n`. The transition table is stored row-major,
//! `delta[state * letters + letter]`. External state names live beside the
//! automaton in [`StateNames`], so the checkers only ever see integers.
//!
//! The text format is line oriented, `#` starts a comment:
//!
//! ```text
//! alphabet a b
//! states 2            # or: states s0 s1
//! initial 0           # optional
//! accepting 1         # optional
//! trans 0 a 1
//! trans 0 b 0
//! trans 1 a 1
//! trans 1 b 1
//! ```

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::verdict::{Reason, Verdict, Witness};

/// A complete deterministic automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Vec<String>,
    states: usize,
    delta: Vec<usize>,
    initial: Option<usize>,
    accepting: Option<Vec<usize>>,
}

impl Dfa {
    /// Builds an automaton and checks every invariant.
    pub fn new(
        alphabet: Vec<String>,
        states: usize,
        delta: Vec<usize>,
        initial: Option<usize>,
        accepting: Option<Vec<usize>>,
    ) -> Result<Self> {
        let dfa = Self::from_parts(alphabet, states, delta, initial, accepting);
        let verdict = dfa.validate();
        match verdict.witness {
            None => Ok(dfa),
            Some(Witness::Invariant { message, .. }) => Err(Error::Invalid(message)),
            Some(other) => Err(Error::Invalid(format!("{other:?}"))),
        }
    }

    /// Builds an automaton without checking it. Use [`Dfa::validate`] before
    /// handing the result to any checker.
    pub fn from_parts(
        alphabet: Vec<String>,
        states: usize,
        delta: Vec<usize>,
        initial: Option<usize>,
        accepting: Option<Vec<usize>>,
    ) -> Self {
        let accepting = accepting.map(|mut acc| {
            acc.sort_unstable();
            acc.dedup();
            acc
        });
        Dfa {
            alphabet,
            states,
            delta,
            initial,
            accepting,
        }
    }

    /// Convenience constructor with letters named `a`, `b`, ...
    pub fn from_table(letters: usize, delta: Vec<usize>) -> Result<Self> {
        if letters == 0 {
            return Err(Error::Invalid("empty alphabet".into()));
        }
        let states = delta.len() / letters;
        Self::new(default_alphabet(letters), states, delta, None, None)
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn table(&self) -> &[usize] {
        &self.delta
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    /// Sorted accepting states, if the automaton carries language data.
    pub fn accepting(&self) -> Option<&[usize]> {
        self.accepting.as_deref()
    }

    #[inline]
    pub fn step(&self, state: usize, letter: usize) -> usize {
        self.delta[state * self.alphabet.len() + letter]
    }

    pub fn run(&self, state: usize, word: &[usize]) -> usize {
        word.iter().fold(state, |s, &a| self.step(s, a))
    }

    pub fn with_language(mut self, initial: usize, accepting: Vec<usize>) -> Result<Self> {
        self.initial = Some(initial);
        let mut accepting = accepting;
        accepting.sort_unstable();
        accepting.dedup();
        self.accepting = Some(accepting);
        let verdict = self.validate();
        if verdict.outcome {
            Ok(self)
        } else {
            Err(Error::Invalid(format!("{:?}", verdict.reason)))
        }
    }

    /// Acceptance flags per state; all false when no accepting set is present.
    pub fn accepting_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.states];
        for &s in self.accepting.iter().flatten() {
            mask[s] = true;
        }
        mask
    }

    pub fn letter_index(&self, symbol: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == symbol)
    }

    /// Translates a word of symbols into letter indices.
    pub fn word(&self, symbols: &[&str]) -> Option<Vec<usize>> {
        symbols.iter().map(|s| self.letter_index(s)).collect()
    }

    /// Checks every automaton invariant; the witness names the first violation.
    pub fn validate(&self) -> Verdict {
        let fail = |reason, message: &str, state, letter| {
            Verdict::fails(
                reason,
                Witness::Invariant {
                    message: message.to_string(),
                    state,
                    letter,
                },
            )
        };
        if self.states == 0 {
            return fail(Reason::NoStates, "no states", None, None);
        }
        if self.alphabet.is_empty() {
            return fail(Reason::EmptyAlphabet, "empty alphabet", None, None);
        }
        for (i, a) in self.alphabet.iter().enumerate() {
            if self.alphabet[..i].contains(a) {
                return fail(Reason::DuplicateLetter, "duplicate letter", None, Some(i));
            }
        }
        let m = self.alphabet.len();
        if self.delta.len() != self.states * m {
            return fail(Reason::TableShape, "transition table has wrong size", None, None);
        }
        if let Some(i) = self.delta.iter().position(|&t| t >= self.states) {
            return fail(
                Reason::StateOutOfRange,
                "state out of range",
                Some(i / m),
                Some(i % m),
            );
        }
        if let Some(init) = self.initial {
            if init >= self.states {
                return fail(
                    Reason::InitialOutOfRange,
                    "initial state out of range",
                    Some(init),
                    None,
                );
            }
        }
        if let Some(&bad) = self.accepting.iter().flatten().find(|&&s| s >= self.states) {
            return fail(
                Reason::AcceptingOutOfRange,
                "accepting state out of range",
                Some(bad),
                None,
            );
        }
        Verdict::holds()
    }
}

/// Letter names `a`..`z`, then `l26`, `l27`, ...
pub fn default_alphabet(letters: usize) -> Vec<String> {
    (0..letters)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("l{i}")
            }
        })
        .collect()
}

/// External state names, indexed by dense state id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateNames(pub Vec<String>);

impl StateNames {
    pub fn numeric(n: usize) -> Self {
        StateNames((0..n).map(|i| i.to_string()).collect())
    }

    pub fn name(&self, state: usize) -> &str {
        &self.0[state]
    }

    fn is_numeric(&self) -> bool {
        self.0.iter().enumerate().all(|(i, s)| *s == i.to_string())
    }
}

/// An automaton that may lack some transitions, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialDfa {
    pub alphabet: Vec<String>,
    pub names: StateNames,
    pub delta: Vec<Option<usize>>,
    pub initial: Option<usize>,
    pub accepting: Option<Vec<usize>>,
}

impl PartialDfa {
    pub fn from_dfa(dfa: &Dfa, names: StateNames) -> Self {
        PartialDfa {
            alphabet: dfa.alphabet.clone(),
            names,
            delta: dfa.delta.iter().map(|&t| Some(t)).collect(),
            initial: dfa.initial,
            accepting: dfa.accepting.clone(),
        }
    }

    pub fn states(&self) -> usize {
        self.names.0.len()
    }

    /// Converts to a complete automaton, failing on the first missing transition.
    pub fn into_complete(self) -> Result<(Dfa, StateNames)> {
        let m = self.alphabet.len();
        if let Some(i) = self.delta.iter().position(Option::is_none) {
            return Err(Error::MissingTransition {
                state: self.names.0[i / m].clone(),
                letter: self.alphabet[i % m].clone(),
            });
        }
        let delta = self.delta.into_iter().flatten().collect();
        let dfa = Dfa::new(
            self.alphabet,
            self.names.0.len(),
            delta,
            self.initial,
            self.accepting,
        )?;
        Ok((dfa, self.names))
    }

    /// Routes every missing transition to one fresh sink state. A complete
    /// input is returned unchanged.
    pub fn complete_with_sink(self) -> Result<(Dfa, StateNames)> {
        if self.delta.iter().all(Option::is_some) {
            return self.into_complete();
        }
        let n = self.states();
        let m = self.alphabet.len();
        let sink = n;
        let mut delta: Vec<usize> = self.delta.iter().map(|t| t.unwrap_or(sink)).collect();
        delta.extend(std::iter::repeat_n(sink, m));
        let mut names = self.names;
        let mut sink_name = String::from("sink");
        while names.0.contains(&sink_name) {
            sink_name.push('\'');
        }
        names.0.push(sink_name);
        let dfa = Dfa::new(self.alphabet, n + 1, delta, self.initial, self.accepting)?;
        Ok((dfa, names))
    }
}

/// Parses a complete automaton. Missing transitions are an error.
pub fn parse_dfa(text: &str) -> Result<(Dfa, StateNames)> {
    parse_partial(text)?.into_complete()
}

/// Parses a document, optionally completing missing transitions with a sink.
pub fn parse_dfa_with(text: &str, complete_with_sink: bool) -> Result<(Dfa, StateNames)> {
    let partial = parse_partial(text)?;
    if complete_with_sink {
        partial.complete_with_sink()
    } else {
        partial.into_complete()
    }
}

/// Parses a document without requiring a total transition function.
pub fn parse_partial(text: &str) -> Result<PartialDfa> {
    let mut alphabet: Option<(Vec<String>, HashMap<String, usize>)> = None;
    let mut states: Option<(Vec<String>, HashMap<String, usize>)> = None;
    let mut delta: Vec<Option<usize>> = Vec::new();
    let mut initial = None;
    let mut accepting: Option<Vec<usize>> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        let Some(keyword) = tokens.next() else {
            continue;
        };
        let args: Vec<&str> = tokens.collect();
        let syntax = |message: String| Error::Syntax { line, message };

        let state_of = |states: &Option<(Vec<String>, HashMap<String, usize>)>, name: &str| {
            let (_, index) = states
                .as_ref()
                .ok_or_else(|| syntax("state referenced before `states`".into()))?;
            index.get(name).copied().ok_or_else(|| Error::UnknownState {
                line,
                name: name.to_string(),
            })
        };

        match keyword {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(syntax("repeated `alphabet`".into()));
                }
                if args.is_empty() {
                    return Err(syntax("empty alphabet".into()));
                }
                let mut index = HashMap::new();
                for (i, a) in args.iter().enumerate() {
                    if index.insert(a.to_string(), i).is_some() {
                        return Err(syntax(format!("duplicate letter `{a}`")));
                    }
                }
                alphabet = Some((args.iter().map(|s| s.to_string()).collect(), index));
            }
            "states" => {
                if states.is_some() {
                    return Err(syntax("repeated `states`".into()));
                }
                let names: Vec<String> = match args.as_slice() {
                    [] => return Err(syntax("`states` needs a count or names".into())),
                    [single] if single.parse::<usize>().is_ok() => {
                        let n: usize = single.parse().unwrap();
                        if n == 0 {
                            return Err(syntax("an automaton needs at least one state".into()));
                        }
                        (0..n).map(|i| i.to_string()).collect()
                    }
                    many => many.iter().map(|s| s.to_string()).collect(),
                };
                let mut index = HashMap::new();
                for (i, s) in names.iter().enumerate() {
                    if index.insert(s.clone(), i).is_some() {
                        return Err(syntax(format!("duplicate state `{s}`")));
                    }
                }
                states = Some((names, index));
            }
            "initial" => {
                let [name] = args.as_slice() else {
                    return Err(syntax("`initial` takes exactly one state".into()));
                };
                if initial.is_some() {
                    return Err(syntax("repeated `initial`".into()));
                }
                initial = Some(state_of(&states, name)?);
            }
            "accepting" => {
                let set = accepting.get_or_insert_with(Vec::new);
                for name in &args {
                    set.push(state_of(&states, name)?);
                }
            }
            "trans" => {
                let [src, letter, dst] = args.as_slice() else {
                    return Err(syntax("`trans` takes source, letter and target".into()));
                };
                let (letters, letter_index) = alphabet
                    .as_ref()
                    .ok_or_else(|| syntax("transition before `alphabet`".into()))?;
                let s = state_of(&states, src)?;
                let d = state_of(&states, dst)?;
                let a = *letter_index.get(*letter).ok_or_else(|| Error::UnknownLetter {
                    line,
                    name: letter.to_string(),
                })?;
                let m = letters.len();
                if delta.is_empty() {
                    delta = vec![None; states.as_ref().map_or(0, |s| s.0.len()) * m];
                }
                let slot = &mut delta[s * m + a];
                if slot.is_some() {
                    return Err(Error::DuplicateTransition {
                        line,
                        state: src.to_string(),
                        letter: letter.to_string(),
                    });
                }
                *slot = Some(d);
            }
            other => return Err(syntax(format!("unknown keyword `{other}`"))),
        }
    }

    let end = last_line + 1;
    let (alphabet, _) = alphabet.ok_or(Error::Syntax {
        line: end,
        message: "missing `alphabet`".into(),
    })?;
    let (names, _) = states.ok_or(Error::Syntax {
        line: end,
        message: "missing `states`".into(),
    })?;
    if delta.is_empty() {
        delta = vec![None; names.len() * alphabet.len()];
    }
    if let Some(acc) = accepting.as_mut() {
        acc.sort_unstable();
        acc.dedup();
    }
    Ok(PartialDfa {
        alphabet,
        names: StateNames(names),
        delta,
        initial,
        accepting,
    })
}

/// Writes the text format. Transitions are emitted sorted by source, then letter.
pub fn serialize(dfa: &Dfa, names: Option<&StateNames>) -> String {
    let numeric = StateNames::numeric(dfa.states());
    let names = names.unwrap_or(&numeric);
    let mut out = String::new();
    writeln!(out, "alphabet {}", dfa.alphabet.join(" ")).unwrap();
    if names.is_numeric() {
        writeln!(out, "states {}", dfa.states()).unwrap();
    } else {
        writeln!(out, "states {}", names.0.join(" ")).unwrap();
    }
    if let Some(init) = dfa.initial {
        writeln!(out, "initial {}", names.name(init)).unwrap();
    }
    if let Some(acc) = &dfa.accepting {
        out.push_str("accepting");
        for &s in acc {
            out.push(' ');
            out.push_str(names.name(s));
        }
        out.push('\n');
    }
    for s in 0..dfa.states() {
        for (a, letter) in dfa.alphabet.iter().enumerate() {
            writeln!(
                out,
                "trans {} {} {}",
                names.name(s),
                letter,
                names.name(dfa.step(s, a))
            )
            .unwrap();
        }
    }
    out
}

/// Minimal automaton of the accepted language: unreachable states are dropped
/// and equivalent states merged by partition refinement.
pub fn minimize(dfa: &Dfa) -> Result<Dfa> {
    let (Some(initial), Some(_)) = (dfa.initial, dfa.accepting.as_ref()) else {
        return Err(Error::MissingLanguageData);
    };
    let m = dfa.letters();
    let accept = dfa.accepting_mask();

    // reachable states in BFS order
    let mut order = vec![initial];
    let mut seen = vec![false; dfa.states()];
    seen[initial] = true;
    let mut queue = VecDeque::from([initial]);
    while let Some(s) = queue.pop_front() {
        for a in 0..m {
            let t = dfa.step(s, a);
            if !seen[t] {
                seen[t] = true;
                order.push(t);
                queue.push_back(t);
            }
        }
    }

    let mut class: Vec<usize> = vec![0; dfa.states()];
    for &s in &order {
        class[s] = usize::from(accept[s]);
    }
    let mut count = 0;
    loop {
        let mut signatures: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = vec![0; dfa.states()];
        for &s in &order {
            let mut sig = Vec::with_capacity(m + 1);
            sig.push(class[s]);
            sig.extend((0..m).map(|a| class[dfa.step(s, a)]));
            let fresh = signatures.len();
            next[s] = *signatures.entry(sig).or_insert(fresh);
        }
        let classes = signatures.len();
        class = next;
        if classes == count {
            break;
        }
        count = classes;
    }

    let mut delta = vec![0; count * m];
    let mut accepting = Vec::new();
    for &s in &order {
        let c = class[s];
        for a in 0..m {
            delta[c * m + a] = class[dfa.step(s, a)];
        }
        if accept[s] {
            accepting.push(c);
        }
    }
    Dfa::new(
        dfa.alphabet.clone(),
        count,
        delta,
        Some(class[initial]),
        Some(accepting),
    )
}
