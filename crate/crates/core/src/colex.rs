//! Co-lex infima and suprema of the sets `I_u` of words reaching each state.
//!
//! For every state `u` of a minimal trimmed DFA we compute the co-lex ranks of
//! `inf I_u` and `sup I_u` within the joint set of all `2n` such strings. The
//! strings may be left-infinite; they are eventually periodic.
//!
//! # Method
//!
//! Iterated truncated-rank refinement. Let `T_k(x)` be the last `k` characters
//! of `x` (all of `x` if it is shorter). Truncation is monotone for the co-lex
//! order, so `T_k(inf I_u) = min` over the incoming candidates `T_{k-1}(inf I_v)·c`,
//! plus `ε` at the source, and likewise for the supremum with `max`. A key is
//! the pair `(last symbol, previous-round rank)` with a string-end sentinel
//! below every symbol; all `2n` keys are jointly dense-ranked each round.
//! When two consecutive rank vectors coincide, the map has reached its fixed
//! point and the ranks give the exact co-lex order.
//!
//! Only minimum-label incoming edges can contribute to an infimum, and only
//! maximum-label ones to a supremum, so candidates come from
//! [`prune_min_edges`] and [`prune_max_edges`]. The source's `ε` candidate
//! plays the role of the smallest end marker, which keeps finite strings
//! below every extension of themselves.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::automaton::{Automaton, StateId, Symbol, Transition};
use crate::error::{Error, Result};

/// Which end of `I_u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Inf,
    Sup,
}

/// A left-infinite string `…period·period·preperiod`, or the finite string
/// `preperiod` when the period is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EventuallyPeriodicString {
    pub preperiod: Vec<Symbol>,
    pub period: Vec<Symbol>,
}

impl EventuallyPeriodicString {
    pub fn finite(word: Vec<Symbol>) -> Self {
        Self {
            preperiod: word,
            period: Vec::new(),
        }
    }

    pub fn new(preperiod: Vec<Symbol>, period: Vec<Symbol>) -> Self {
        Self { preperiod, period }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// The `i`-th character counted from the right end (0-based).
    pub fn from_right(&self, i: usize) -> Option<Symbol> {
        let p = self.preperiod.len();
        if i < p {
            return Some(self.preperiod[p - 1 - i]);
        }
        if self.period.is_empty() {
            return None;
        }
        let q = self.period.len();
        Some(self.period[q - 1 - (i - p) % q])
    }

    /// Same string with a primitive period and the shortest preperiod.
    pub fn canonical(mut self) -> Self {
        if self.period.is_empty() {
            return self;
        }
        let q = self.period.len();
        if let Some(root) =
            (1..=q).find(|&r| q.is_multiple_of(r) && (r..q).all(|i| self.period[i] == self.period[i - r]))
        {
            self.period.truncate(root);
        }
        // `…P·P·cS` with `c = P[0]` equals `…P'·P'·S` where `P' = P[1..]·c`.
        while !self.preperiod.is_empty() && self.preperiod[0] == self.period[0] {
            let c = self.preperiod.remove(0);
            self.period.remove(0);
            self.period.push(c);
        }
        self
    }
}

/// Exact co-lex comparison of two eventually periodic strings.
///
/// Characters are compared right to left; a string that ends first is
/// smaller. Two infinite strings that agree on a prefix (from the right) of
/// length `|pre_x| + |pre_y| + |per_x| + |per_y| + max(|per_x|, |per_y|)`
/// are equal.
pub fn compare_eps(x: &EventuallyPeriodicString, y: &EventuallyPeriodicString) -> Ordering {
    let depth =
        x.preperiod.len() + y.preperiod.len() + x.period.len() + y.period.len() + x.period.len().max(y.period.len());
    for i in 0.. {
        match (x.from_right(i), y.from_right(i)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(a), Some(b)) if a != b => return a.cmp(&b),
            _ if i >= depth => return Ordering::Equal,
            _ => {}
        }
    }
    unreachable!()
}

/// Keeps, for every non-source state, only the incoming edges with the
/// smallest label.
pub fn prune_min_edges(a: &Automaton) -> Automaton {
    prune_by_label(a, |x, y| x < y)
}

/// Keeps, for every non-source state, only the incoming edges with the
/// largest label.
pub fn prune_max_edges(a: &Automaton) -> Automaton {
    prune_by_label(a, |x, y| x > y)
}

fn prune_by_label(a: &Automaton, better: impl Fn(Symbol, Symbol) -> bool) -> Automaton {
    let mut best: Vec<Option<Symbol>> = vec![None; a.n()];
    for t in a.transitions() {
        let slot = &mut best[t.to as usize];
        if slot.is_none_or(|b| better(t.symbol, b)) {
            *slot = Some(t.symbol);
        }
    }
    let kept: Vec<Transition> = a
        .transitions()
        .iter()
        .filter(|t| Some(t.to) == a.source() || best[t.to as usize] == Some(t.symbol))
        .copied()
        .collect();
    Automaton::new(a.alphabet().clone(), a.n(), a.source(), a.finals(), kept).expect("subset of a valid automaton")
}

/// Co-lex ranks of every `inf I_u` and `sup I_u`.
///
/// Ranks are dense and 1-based over the distinct strings; equal strings share
/// a rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    inf_rank: Vec<u32>,
    sup_rank: Vec<u32>,
    /// Predecessor chosen at the fixed point; `None` means the source's `ε`.
    inf_pred: Vec<Option<(Symbol, StateId)>>,
    sup_pred: Vec<Option<(Symbol, StateId)>>,
    rounds: usize,
}

/// Ranks computed on the min/max-label pruned candidate graphs.
pub fn compute_rank_table(a_min: &Automaton) -> Result<RankTable> {
    rank_fixpoint(a_min, &prune_min_edges(a_min), &prune_max_edges(a_min))
}

/// Ranks computed with every incoming edge as a candidate. Must agree with
/// [`compute_rank_table`].
pub fn compute_rank_table_unpruned(a_min: &Automaton) -> Result<RankTable> {
    rank_fixpoint(a_min, a_min, a_min)
}

type Key = (u32, u32);
const EPSILON_KEY: Key = (0, 0);

fn rank_fixpoint(a: &Automaton, inf_graph: &Automaton, sup_graph: &Automaton) -> Result<RankTable> {
    if !a.is_deterministic() {
        return Err(Error::Nondeterministic);
    }
    let n = a.n();
    let source = a.source();
    let (inf_off, inf_in) = inf_graph.incoming();
    let (sup_off, sup_in) = sup_graph.incoming();

    // Element `u` is (u, Inf); element `n + u` is (u, Sup).
    let mut rank = vec![1u32; 2 * n];
    let mut keys: Vec<Key> = vec![EPSILON_KEY; 2 * n];
    let mut preds: Vec<Option<(Symbol, StateId)>> = vec![None; 2 * n];
    let mut order: Vec<usize> = (0..2 * n).collect();
    let mut next = vec![0u32; 2 * n];
    let cap = 8 * n + 8;

    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > cap {
            return Err(Error::FixpointDiverged { rounds: cap });
        }
        for u in 0..n {
            let is_source = Some(u as StateId) == source;
            for (bound, offsets, incoming) in [(Bound::Inf, &inf_off, &inf_in), (Bound::Sup, &sup_off, &sup_in)] {
                let shift = if bound == Bound::Inf { 0 } else { n };
                let mut best: Option<(Key, Option<(Symbol, StateId)>)> = is_source.then_some((EPSILON_KEY, None));
                for t in &incoming[offsets[u]..offsets[u + 1]] {
                    let key = (t.symbol as u32 + 1, rank[shift + t.from as usize]);
                    let wins = match best {
                        None => true,
                        Some((b, _)) => match bound {
                            Bound::Inf => key < b,
                            Bound::Sup => key > b,
                        },
                    };
                    if wins {
                        best = Some((key, Some((t.symbol, t.from))));
                    }
                }
                let (key, pred) = best.expect("every trimmed non-source state has an incoming edge");
                keys[shift + u] = key;
                preds[shift + u] = pred;
            }
        }

        order.sort_unstable_by_key(|&e| keys[e]);
        let mut r = 0u32;
        for (i, &e) in order.iter().enumerate() {
            if i == 0 || keys[e] != keys[order[i - 1]] {
                r += 1;
            }
            next[e] = r;
        }
        // The new partition must refine the previous one, consistently with its order.
        for w in order.windows(2) {
            let (e, f) = (w[0], w[1]);
            let ok = if next[e] == next[f] {
                rank[e] == rank[f]
            } else {
                rank[e] <= rank[f]
            };
            if !ok {
                return Err(Error::RankInvariant { round: rounds });
            }
        }
        if next == rank {
            break;
        }
        std::mem::swap(&mut rank, &mut next);
    }

    let sup_pred = preds.split_off(n);
    let sup_rank = rank.split_off(n);
    Ok(RankTable {
        inf_rank: rank,
        sup_rank,
        inf_pred: preds,
        sup_pred,
        rounds,
    })
}

impl RankTable {
    pub fn n(&self) -> usize {
        self.inf_rank.len()
    }

    pub fn inf_rank(&self, u: StateId) -> u32 {
        self.inf_rank[u as usize]
    }

    pub fn sup_rank(&self, u: StateId) -> u32 {
        self.sup_rank[u as usize]
    }

    pub fn rank(&self, u: StateId, bound: Bound) -> u32 {
        match bound {
            Bound::Inf => self.inf_rank(u),
            Bound::Sup => self.sup_rank(u),
        }
    }

    /// `I_u` has exactly one element.
    pub fn is_singleton(&self, u: StateId) -> bool {
        self.inf_rank(u) == self.sup_rank(u)
    }

    /// Refinement rounds until the rank vector stopped changing (including the
    /// confirming round).
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Whether the open intervals `(inf I_u, sup I_u)` and `(inf I_v, sup I_v)` meet.
    pub fn intervals_intersect(&self, u: StateId, v: StateId) -> bool {
        if self.is_singleton(u) || self.is_singleton(v) {
            return false;
        }
        self.inf_rank(v) < self.sup_rank(u) && self.inf_rank(u) < self.sup_rank(v)
    }

    /// Clique number of the open-interval graph over non-singleton states, at least 1.
    pub fn width_estimate(&self) -> usize {
        let max_rank = self.sup_rank.iter().copied().max().unwrap_or(0) as usize;
        // delta[g] counts intervals covering the gap between ranks g and g + 1.
        let mut delta = vec![0i64; max_rank + 2];
        for u in 0..self.n() as StateId {
            if !self.is_singleton(u) {
                delta[self.inf_rank(u) as usize] += 1;
                delta[self.sup_rank(u) as usize] -= 1;
            }
        }
        let mut depth = 0i64;
        let mut best = 1i64;
        for d in delta {
            depth += d;
            best = best.max(depth);
        }
        best as usize
    }

    /// The string `inf I_u` or `sup I_u`, read off the predecessors chosen at
    /// the fixed point, in canonical form.
    pub fn extract(&self, u: StateId, bound: Bound) -> EventuallyPeriodicString {
        let preds = match bound {
            Bound::Inf => &self.inf_pred,
            Bound::Sup => &self.sup_pred,
        };
        // Symbols collected right to left.
        let mut rev = Vec::new();
        let mut seen: HashMap<StateId, usize> = HashMap::new();
        let mut x = u;
        let split = loop {
            if let Some(&i) = seen.get(&x) {
                break Some(i);
            }
            seen.insert(x, rev.len());
            match preds[x as usize] {
                None => break None,
                Some((c, v)) => {
                    rev.push(c);
                    x = v;
                }
            }
        };
        let eps = match split {
            None => {
                rev.reverse();
                EventuallyPeriodicString::finite(rev)
            }
            Some(i) => {
                let mut period = rev.split_off(i);
                period.reverse();
                rev.reverse();
                EventuallyPeriodicString::new(rev, period)
            }
        };
        eps.canonical()
    }
}
