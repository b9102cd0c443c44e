//! Automaton data model.
//!
//! States are dense integers `0..n`. Symbols are indices into an [`Alphabet`],
//! whose declared order is the character order used for every co-lex
//! comparison downstream. Automata are partial: a missing `(state, symbol)`
//! transition goes to an implicit dead state that is never materialized.

mod format;
mod random;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub use format::{parse_automaton, serialize_automaton};
pub use random::random_dfa;

pub type StateId = u32;

/// Index of a character in its [`Alphabet`]; comparing symbols compares characters.
pub type Symbol = u16;

/// Sentinel used by dense transition tables for "no transition".
pub const NO_STATE: StateId = StateId::MAX;

/// An ordered set of distinct printable characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    chars: Vec<char>,
}

impl Alphabet {
    pub fn new(chars: impl IntoIterator<Item = char>) -> Result<Self> {
        let chars: Vec<char> = chars.into_iter().collect();
        for (i, &c) in chars.iter().enumerate() {
            if c.is_whitespace() || c.is_control() {
                return Err(Error::InvalidAutomaton(format!(
                    "alphabet symbol {c:?} is not a printable character"
                )));
            }
            if chars[..i].contains(&c) {
                return Err(Error::InvalidAutomaton(format!("duplicate alphabet symbol {c:?}")));
            }
        }
        if chars.len() > Symbol::MAX as usize {
            return Err(Error::InvalidAutomaton("alphabet too large".into()));
        }
        Ok(Self { chars })
    }

    /// Alphabet over the characters of `s`, in the order they appear.
    pub fn from_str_order(s: &str) -> Result<Self> {
        Self::new(s.chars())
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn char_of(&self, symbol: Symbol) -> char {
        self.chars[symbol as usize]
    }

    pub fn symbol_of(&self, c: char) -> Option<Symbol> {
        self.chars.iter().position(|&x| x == c).map(|i| i as Symbol)
    }

    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.chars.len() as Symbol
    }

    /// Encodes a string over this alphabet, or `None` if it uses a foreign character.
    pub fn encode(&self, s: &str) -> Option<Vec<Symbol>> {
        s.chars().map(|c| self.symbol_of(c)).collect()
    }

    pub fn decode(&self, word: &[Symbol]) -> String {
        word.iter().map(|&s| self.char_of(s)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: StateId,
    pub symbol: Symbol,
    pub to: StateId,
}

impl Transition {
    pub fn new(from: StateId, symbol: Symbol, to: StateId) -> Self {
        Self { from, symbol, to }
    }
}

/// A finite automaton, deterministic or not.
///
/// Transitions are kept sorted by `(from, symbol, to)` without duplicates; the
/// determinism flag is always computed from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    n: usize,
    source: Option<StateId>,
    finals: Vec<bool>,
    transitions: Vec<Transition>,
    offsets: Vec<usize>,
    deterministic: bool,
}

impl Automaton {
    /// Builds and validates an automaton. Duplicate transitions are merged.
    ///
    /// `source` may be `None` only when `n == 0`.
    pub fn new(
        alphabet: Alphabet,
        n: usize,
        source: Option<StateId>,
        finals: impl IntoIterator<Item = StateId>,
        mut transitions: Vec<Transition>,
    ) -> Result<Self> {
        if n >= NO_STATE as usize {
            return Err(Error::InvalidAutomaton(format!("too many states: {n}")));
        }
        match source {
            Some(s) if s as usize >= n => return Err(Error::InvalidAutomaton(format!("source {s} out of range"))),
            None if n > 0 => {
                return Err(Error::InvalidAutomaton("missing source state".into()));
            }
            _ => {}
        }
        let mut final_flags = vec![false; n];
        for f in finals {
            if f as usize >= n {
                return Err(Error::InvalidAutomaton(format!("final state {f} out of range")));
            }
            final_flags[f as usize] = true;
        }
        for t in &transitions {
            if t.from as usize >= n || t.to as usize >= n {
                return Err(Error::InvalidAutomaton(format!(
                    "transition {} -> {} out of range",
                    t.from, t.to
                )));
            }
            if t.symbol as usize >= alphabet.len() {
                return Err(Error::InvalidAutomaton(format!(
                    "symbol index {} out of range",
                    t.symbol
                )));
            }
        }
        transitions.sort_unstable();
        transitions.dedup();
        Ok(Self::from_sorted(alphabet, n, source, final_flags, transitions))
    }

    /// Assembles an automaton from already validated, sorted, deduplicated parts.
    fn from_sorted(
        alphabet: Alphabet,
        n: usize,
        source: Option<StateId>,
        finals: Vec<bool>,
        transitions: Vec<Transition>,
    ) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for t in &transitions {
            offsets[t.from as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let deterministic = transitions
            .windows(2)
            .all(|w| (w[0].from, w[0].symbol) != (w[1].from, w[1].symbol));
        Self {
            alphabet,
            n,
            source,
            finals,
            transitions,
            offsets,
            deterministic,
        }
    }

    /// The automaton with no states, accepting the empty language.
    pub fn empty(alphabet: Alphabet) -> Self {
        Self::from_sorted(alphabet, 0, None, Vec::new(), Vec::new())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of transitions.
    pub fn m(&self) -> usize {
        self.transitions.len()
    }

    pub fn source(&self) -> Option<StateId> {
        self.source
    }

    pub fn is_final(&self, u: StateId) -> bool {
        self.finals[u as usize]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(i, _)| i as StateId)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    /// Outgoing transitions of `u`, sorted by symbol.
    pub fn out(&self, u: StateId) -> &[Transition] {
        &self.transitions[self.offsets[u as usize]..self.offsets[u as usize + 1]]
    }

    /// The first `symbol`-successor of `u` (the only one, for a DFA).
    pub fn delta(&self, u: StateId, symbol: Symbol) -> Option<StateId> {
        let out = self.out(u);
        let i = out.partition_point(|t| t.symbol < symbol);
        out.get(i).filter(|t| t.symbol == symbol).map(|t| t.to)
    }

    /// Runs a DFA on `word` from `from`.
    pub fn delta_word(&self, from: StateId, word: &[Symbol]) -> Option<StateId> {
        word.iter().try_fold(from, |u, &c| self.delta(u, c))
    }

    /// Membership test; for nondeterministic automata this follows all runs.
    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let Some(s) = self.source else { return false };
        if self.deterministic {
            return self.delta_word(s, word).is_some_and(|u| self.is_final(u));
        }
        let mut current = vec![false; self.n];
        current[s as usize] = true;
        for &c in word {
            let mut next = vec![false; self.n];
            for (u, _) in current.iter().enumerate().filter(|(_, &on)| on) {
                for t in self.out(u as StateId).iter().filter(|t| t.symbol == c) {
                    next[t.to as usize] = true;
                }
            }
            current = next;
        }
        current.iter().zip(&self.finals).any(|(&on, &f)| on && f)
    }

    /// Dense `n × |Σ|` successor table, [`NO_STATE`] where undefined.
    pub fn delta_table(&self) -> Result<DeltaTable> {
        if !self.deterministic {
            return Err(Error::Nondeterministic);
        }
        let k = self.alphabet.len();
        let mut next = vec![NO_STATE; self.n * k];
        for t in &self.transitions {
            next[t.from as usize * k + t.symbol as usize] = t.to;
        }
        Ok(DeltaTable { k, next })
    }

    /// Incoming transitions grouped by target, as `(offsets, transitions)`.
    pub fn incoming(&self) -> (Vec<usize>, Vec<Transition>) {
        let mut offsets = vec![0usize; self.n + 1];
        for t in &self.transitions {
            offsets[t.to as usize + 1] += 1;
        }
        for i in 0..self.n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut edges = vec![Transition::new(0, 0, 0); self.transitions.len()];
        for t in &self.transitions {
            edges[fill[t.to as usize]] = *t;
            fill[t.to as usize] += 1;
        }
        (offsets, edges)
    }

    /// States reachable from the source.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        if let Some(s) = self.source {
            seen[s as usize] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for t in self.out(u) {
                    if !seen[t.to as usize] {
                        seen[t.to as usize] = true;
                        queue.push_back(t.to);
                    }
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let (offsets, incoming) = self.incoming();
        let mut seen = self.finals.clone();
        let mut queue: VecDeque<StateId> = self.finals().collect();
        while let Some(u) = queue.pop_front() {
            for t in &incoming[offsets[u as usize]..offsets[u as usize + 1]] {
                if !seen[t.from as usize] {
                    seen[t.from as usize] = true;
                    queue.push_back(t.from);
                }
            }
        }
        seen
    }

    /// Keeps only the states both reachable and co-reachable.
    pub fn trim(&self) -> Result<(Automaton, TrimReport)> {
        if !self.deterministic {
            return Err(Error::Nondeterministic);
        }
        let reach = self.reachable();
        let coreach = self.coreachable();
        let mut state_map = vec![None; self.n];
        let mut dropped_unreachable = 0;
        let mut dropped_dead = 0;
        let mut kept = 0usize;
        let source_useful = self.source.is_some_and(|s| coreach[s as usize]);
        for u in 0..self.n {
            if !reach[u] {
                dropped_unreachable += 1;
            } else if !coreach[u] || !source_useful {
                dropped_dead += 1;
            } else {
                state_map[u] = Some(kept as StateId);
                kept += 1;
            }
        }
        let report = TrimReport {
            kept,
            dropped_unreachable,
            dropped_dead,
            state_map,
        };
        if kept == 0 {
            return Ok((Automaton::empty(self.alphabet.clone()), report));
        }
        let map = |u: StateId| report.state_map[u as usize];
        let transitions = self
            .transitions
            .iter()
            .filter_map(|t| Some(Transition::new(map(t.from)?, t.symbol, map(t.to)?)))
            .collect();
        let finals = self.finals().filter_map(map).collect::<Vec<_>>();
        let source = self.source.and_then(map);
        let trimmed = Automaton::new(self.alphabet.clone(), kept, source, finals, transitions)?;
        Ok((trimmed, report))
    }

    /// Reverses every transition. Source and finals are left untouched.
    pub fn reverse(&self) -> Automaton {
        let mut transitions: Vec<Transition> = self
            .transitions
            .iter()
            .map(|t| Transition::new(t.to, t.symbol, t.from))
            .collect();
        transitions.sort_unstable();
        Self::from_sorted(
            self.alphabet.clone(),
            self.n,
            self.source,
            self.finals.clone(),
            transitions,
        )
    }

    /// Same automaton with states renumbered by `perm[old] = new`.
    pub fn relabel(&self, perm: &[StateId]) -> Result<Automaton> {
        assert_eq!(perm.len(), self.n);
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition::new(perm[t.from as usize], t.symbol, perm[t.to as usize]))
            .collect();
        Automaton::new(
            self.alphabet.clone(),
            self.n,
            self.source.map(|s| perm[s as usize]),
            self.finals().map(|f| perm[f as usize]),
            transitions,
        )
    }
}

/// Dense successor table of a DFA.
#[derive(Debug, Clone)]
pub struct DeltaTable {
    k: usize,
    next: Vec<StateId>,
}

impl DeltaTable {
    #[inline]
    pub fn get(&self, u: StateId, symbol: Symbol) -> Option<StateId> {
        let v = self.next[u as usize * self.k + symbol as usize];
        (v != NO_STATE).then_some(v)
    }

    #[inline]
    pub fn raw(&self, u: StateId, symbol: Symbol) -> StateId {
        self.next[u as usize * self.k + symbol as usize]
    }
}

/// Outcome of [`Automaton::trim`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrimReport {
    pub kept: usize,
    pub dropped_unreachable: usize,
    /// Reachable states that cannot reach a final state.
    pub dropped_dead: usize,
    /// Old id to new id, `None` for dropped states.
    pub state_map: Vec<Option<StateId>>,
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_automaton(self))
    }
}
