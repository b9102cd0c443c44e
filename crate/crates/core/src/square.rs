//! The pruned square automaton: pairs `(u, v)` of distinct states of the
//! minimum DFA whose open co-lex intervals intersect, with the synchronized
//! transitions between such pairs. `L` is Wheeler iff this graph is acyclic.
//!
//! [`PrunedSquare`] is built directly in time proportional to its size. Its
//! pair-states are indexed implicitly: non-singleton states are sorted by
//! infimum rank, every state's intersecting partners form a contiguous run
//! after it in that order, and a pair's id is derived from the run offsets.
//! Because the square of a DFA is deterministic, its transitions are fully
//! determined by the pair-state set and `δ`; they are enumerated on demand
//! rather than stored. [`FullSquare`] materializes all `n²` pairs and every
//! transition and serves as the oracle.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::automaton::{Automaton, DeltaTable, StateId, Symbol, Transition, NO_STATE};
use crate::colex::RankTable;
use crate::error::{Error, Result};

/// A directed graph with symbol-labeled edges over vertices `0..num_vertices`.
pub trait Digraph {
    fn num_vertices(&self) -> usize;
    fn for_each_successor(&self, v: u32, f: &mut dyn FnMut(Symbol, u32));
    fn for_each_predecessor(&self, v: u32, f: &mut dyn FnMut(Symbol, u32));
}

/// A [`Digraph`] whose vertices are pair-states of a square automaton.
pub trait PairGraph: Digraph {
    fn pair(&self, id: u32) -> (StateId, StateId);
    fn pair_id(&self, u: StateId, v: StateId) -> Option<u32>;
    fn num_transitions(&self) -> usize;
}

/// One transition `(u, v) -c-> (u', v')` of a square automaton.
pub type PairTransition = ((StateId, StateId), Symbol, (StateId, StateId));

/// Every transition of `g`, for comparisons between constructions.
pub fn transition_set(g: &impl PairGraph) -> BTreeSet<PairTransition> {
    let mut set = BTreeSet::new();
    for id in 0..g.num_vertices() as u32 {
        let from = g.pair(id);
        g.for_each_successor(id, &mut |c, to| {
            set.insert((from, c, g.pair(to)));
        });
    }
    set
}

/// Every pair-state of `g`.
pub fn pair_set(g: &impl PairGraph) -> BTreeSet<(StateId, StateId)> {
    (0..g.num_vertices() as u32).map(|id| g.pair(id)).collect()
}

/// Incoming transitions of a DFA grouped by target and sorted by symbol.
#[derive(Debug, Clone)]
struct Incoming {
    offsets: Vec<usize>,
    edges: Vec<Transition>,
}

impl Incoming {
    fn new(a: &Automaton) -> Self {
        let (offsets, mut edges) = a.incoming();
        for u in 0..a.n() {
            edges[offsets[u]..offsets[u + 1]].sort_unstable_by_key(|t| (t.symbol, t.from));
        }
        Self { offsets, edges }
    }

    fn of(&self, u: StateId, c: Symbol) -> &[Transition] {
        let all = &self.edges[self.offsets[u as usize]..self.offsets[u as usize + 1]];
        let lo = all.partition_point(|t| t.symbol < c);
        let hi = all.partition_point(|t| t.symbol <= c);
        &all[lo..hi]
    }
}

/// The pruned square, built in output-sensitive time.
#[derive(Debug, Clone)]
pub struct PrunedSquare {
    k: usize,
    delta: DeltaTable,
    incoming: Incoming,
    /// Non-singleton states sorted by `(inf_rank, id)`.
    order: Vec<StateId>,
    /// Position of each state in `order`, `NO_STATE` for singletons.
    pos: Vec<u32>,
    /// Partners of `order[i]` that come later are exactly `order[i + 1..end[i]]`.
    end: Vec<u32>,
    /// `base[i]` is the id of `(order[i], order[i + 1])`; `base[len]` is `half`.
    base: Vec<u32>,
    half: u32,
    transitions: usize,
}

/// Builds the pruned square from the minimum DFA and its rank table.
///
/// Pair-states: sort by infimum rank and, for each `i`, advance `j` while
/// `order[i]` and `order[j]` intersect. Singleton states have empty
/// intervals and are left out of the order, which keeps every run of
/// partners contiguous.
///
/// Transitions: for each symbol `a`, `L_a` lists the ordered states with an
/// `a`-edge. With `i` fixed, `j` advances while `(L_a[i], L_a[j])` is a
/// pair-state, emitting the two symmetric transitions whenever the image
/// pair is also one. Once `(L_a[i], L_a[j])` is not a pair-state, no later
/// `j` can be (infima are nondecreasing along `L_a`), so `i` advances.
pub fn build_pruned_square(a_min: &Automaton, t: &RankTable) -> Result<PrunedSquare> {
    let n = a_min.n();
    if t.n() != n {
        return Err(Error::InvalidAutomaton("rank table does not match automaton".into()));
    }
    let delta = a_min.delta_table()?;
    let mut order: Vec<StateId> = (0..n as StateId).filter(|&u| !t.is_singleton(u)).collect();
    order.sort_unstable_by_key(|&u| (t.inf_rank(u), u));
    let mut pos = vec![NO_STATE; n];
    for (i, &u) in order.iter().enumerate() {
        pos[u as usize] = i as u32;
    }

    let len = order.len();
    let mut end = vec![0u32; len];
    let mut base = vec![0u32; len + 1];
    let mut count: u64 = 0;
    let (mut i, mut j) = (0usize, 1usize);
    while i < len {
        if j < len && t.intervals_intersect(order[i], order[j]) {
            j += 1;
        } else {
            end[i] = j as u32;
            base[i] = count as u32;
            count += (j - i - 1) as u64;
            if 2 * count >= u32::MAX as u64 {
                return Err(Error::InvalidAutomaton("pruned square too large to index".into()));
            }
            i += 1;
            j = i + 1;
        }
    }
    base[len] = count as u32;

    let mut sq = PrunedSquare {
        k: a_min.alphabet().len(),
        delta,
        incoming: Incoming::new(a_min),
        order,
        pos,
        end,
        base,
        half: count as u32,
        transitions: 0,
    };
    let mut transitions = 0usize;
    sq.scan_transitions(|_| transitions += 2);
    sq.transitions = transitions;
    Ok(sq)
}

impl PrunedSquare {
    /// Number of pair-states.
    pub fn num_states(&self) -> usize {
        2 * self.half as usize
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions
    }

    pub fn is_empty(&self) -> bool {
        self.half == 0
    }

    /// `(u, v)` is a pair-state.
    pub fn contains(&self, u: StateId, v: StateId) -> bool {
        self.pair_id(u, v).is_some()
    }

    fn id_of(&self, u: StateId, v: StateId) -> Option<u32> {
        if u == v || u == NO_STATE || v == NO_STATE {
            return None;
        }
        let (pu, pv) = (self.pos[u as usize], self.pos[v as usize]);
        if pu == NO_STATE || pv == NO_STATE {
            return None;
        }
        let (lo, hi) = if pu < pv { (pu, pv) } else { (pv, pu) };
        if hi >= self.end[lo as usize] {
            return None;
        }
        let id = self.base[lo as usize] + (hi - lo - 1);
        Some(if pu < pv { id } else { self.half + id })
    }

    /// Runs the two-pointer enumeration, calling `emit` once per symmetric
    /// pair of transitions with the one whose source is ordered first.
    fn scan_transitions(&self, mut emit: impl FnMut(PairTransition)) {
        for a in 0..self.k as Symbol {
            let list: Vec<StateId> = self
                .order
                .iter()
                .copied()
                .filter(|&u| self.delta.raw(u, a) != NO_STATE)
                .collect();
            let (mut i, mut j) = (0usize, 1usize);
            while i < list.len() {
                let source_is_pair = j < list.len() && self.contains(list[i], list[j]);
                if source_is_pair {
                    let (u, v) = (list[i], list[j]);
                    let (u2, v2) = (self.delta.raw(u, a), self.delta.raw(v, a));
                    if self.contains(u2, v2) {
                        // case A
                        emit(((u, v), a, (u2, v2)));
                    }
                    // case A or B
                    j += 1;
                } else {
                    // case C
                    i += 1;
                    j = i + 1;
                }
            }
        }
    }

    /// All transitions, in construction order, both orientations.
    pub fn transitions(&self) -> Vec<PairTransition> {
        let mut out = Vec::with_capacity(self.transitions);
        self.scan_transitions(|((u, v), a, (u2, v2))| {
            out.push(((u, v), a, (u2, v2)));
            out.push(((v, u), a, (v2, u2)));
        });
        out
    }
}

impl Digraph for PrunedSquare {
    fn num_vertices(&self) -> usize {
        self.num_states()
    }

    fn for_each_successor(&self, id: u32, f: &mut dyn FnMut(Symbol, u32)) {
        let (u, v) = self.pair(id);
        for c in 0..self.k as Symbol {
            if let Some(to) = self.id_of(self.delta.raw(u, c), self.delta.raw(v, c)) {
                f(c, to);
            }
        }
    }

    fn for_each_predecessor(&self, id: u32, f: &mut dyn FnMut(Symbol, u32)) {
        let (u, v) = self.pair(id);
        for c in 0..self.k as Symbol {
            for tu in self.incoming.of(u, c) {
                for tv in self.incoming.of(v, c) {
                    if let Some(from) = self.id_of(tu.from, tv.from) {
                        f(c, from);
                    }
                }
            }
        }
    }
}

impl PairGraph for PrunedSquare {
    fn pair(&self, id: u32) -> (StateId, StateId) {
        let (flip, id) = if id >= self.half {
            (true, id - self.half)
        } else {
            (false, id)
        };
        // Last i with base[i] <= id; runs of length zero share a base value.
        let i = self.base.partition_point(|&b| b <= id) - 1;
        let j = i + 1 + (id - self.base[i]) as usize;
        let (u, v) = (self.order[i], self.order[j]);
        if flip {
            (v, u)
        } else {
            (u, v)
        }
    }

    fn pair_id(&self, u: StateId, v: StateId) -> Option<u32> {
        self.id_of(u, v)
    }

    fn num_transitions(&self) -> usize {
        self.transitions
    }
}

/// The square restricted to intersecting distinct pairs, computed by
/// materializing all `n²` pairs and filtering.
#[derive(Debug, Clone)]
pub struct FullSquare {
    pairs: Vec<(StateId, StateId)>,
    index: HashMap<(StateId, StateId), u32>,
    out_offsets: Vec<usize>,
    out: Vec<(Symbol, u32)>,
    in_offsets: Vec<usize>,
    inc: Vec<(Symbol, u32)>,
    /// Transitions of the unpruned square, for size comparisons.
    unpruned_transitions: usize,
}

pub fn build_full_square(a_min: &Automaton, t: &RankTable) -> Result<FullSquare> {
    let n = a_min.n() as StateId;
    let delta = a_min.delta_table()?;
    let k = a_min.alphabet().len() as Symbol;

    let mut unpruned_transitions = 0;
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            for c in 0..k {
                if delta.get(u, c).is_some() && delta.get(v, c).is_some() {
                    unpruned_transitions += 1;
                }
            }
            if u != v && t.intervals_intersect(u, v) {
                pairs.push((u, v));
            }
        }
    }
    let index: HashMap<_, _> = pairs.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();

    let mut edges = Vec::new();
    for (id, &(u, v)) in pairs.iter().enumerate() {
        for c in 0..k {
            if let (Some(u2), Some(v2)) = (delta.get(u, c), delta.get(v, c)) {
                if let Some(&to) = index.get(&(u2, v2)) {
                    edges.push((id as u32, c, to));
                }
            }
        }
    }
    type Edge = (u32, Symbol, u32);
    let csr = |key: fn(&Edge) -> Edge| {
        let mut offsets = vec![0usize; pairs.len() + 1];
        let mut list = vec![(0, 0); edges.len()];
        for e in &edges {
            offsets[key(e).0 as usize + 1] += 1;
        }
        for i in 0..pairs.len() {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        for e in &edges {
            let (at, c, other) = key(e);
            list[fill[at as usize]] = (c, other);
            fill[at as usize] += 1;
        }
        (offsets, list)
    };
    let (out_offsets, out) = csr(|&(f, c, t)| (f, c, t));
    let (in_offsets, inc) = csr(|&(f, c, t)| (t, c, f));
    Ok(FullSquare {
        pairs,
        index,
        out_offsets,
        out,
        in_offsets,
        inc,
        unpruned_transitions,
    })
}

impl FullSquare {
    pub fn num_states(&self) -> usize {
        self.pairs.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.out.len()
    }

    /// Transition count of the square before pruning.
    pub fn unpruned_transitions(&self) -> usize {
        self.unpruned_transitions
    }
}

impl Digraph for FullSquare {
    fn num_vertices(&self) -> usize {
        self.pairs.len()
    }

    fn for_each_successor(&self, v: u32, f: &mut dyn FnMut(Symbol, u32)) {
        for &(c, to) in &self.out[self.out_offsets[v as usize]..self.out_offsets[v as usize + 1]] {
            f(c, to);
        }
    }

    fn for_each_predecessor(&self, v: u32, f: &mut dyn FnMut(Symbol, u32)) {
        for &(c, from) in &self.inc[self.in_offsets[v as usize]..self.in_offsets[v as usize + 1]] {
            f(c, from);
        }
    }
}

impl PairGraph for FullSquare {
    fn pair(&self, id: u32) -> (StateId, StateId) {
        self.pairs[id as usize]
    }

    fn pair_id(&self, u: StateId, v: StateId) -> Option<u32> {
        self.index.get(&(u, v)).copied()
    }

    fn num_transitions(&self) -> usize {
        self.out.len()
    }
}

/// Kahn peeling. Returns the in-degrees left over: zero exactly for peeled
/// vertices, positive for vertices on or downstream of a cycle.
fn kahn_residual(g: &(impl Digraph + ?Sized)) -> Vec<u32> {
    let n = g.num_vertices();
    let mut indeg = vec![0u32; n];
    for v in 0..n as u32 {
        g.for_each_successor(v, &mut |_, to| indeg[to as usize] += 1);
    }
    let mut stack: Vec<u32> = (0..n as u32).filter(|&v| indeg[v as usize] == 0).collect();
    while let Some(v) = stack.pop() {
        g.for_each_successor(v, &mut |_, to| {
            indeg[to as usize] -= 1;
            if indeg[to as usize] == 0 {
                stack.push(to);
            }
        });
    }
    indeg
}

/// The graph has no directed cycle.
pub fn is_acyclic(g: &(impl Digraph + ?Sized)) -> bool {
    kahn_residual(g).iter().all(|&d| d == 0)
}

/// A cycle of pair-states certifying that the language is not Wheeler.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// `cycle[i]` steps to `cycle[i + 1]` (cyclically) on `labels[i]`.
    pub cycle: Vec<(StateId, StateId)>,
    pub labels: Vec<Symbol>,
}

/// A cycle inside the part of the graph that Kahn peeling could not remove,
/// or `None` if the graph is acyclic.
///
/// Every unpeeled vertex keeps an unpeeled predecessor, so walking
/// predecessors from any of them must revisit a vertex.
pub fn extract_witness(g: &impl PairGraph) -> Option<Witness> {
    let residual = kahn_residual(g);
    let start = residual.iter().position(|&d| d > 0)? as u32;

    // Backward walk: walk[i + 1] -labels[i]-> walk[i].
    let mut walk = vec![start];
    let mut labels = Vec::new();
    let mut seen_at: HashMap<u32, usize> = HashMap::from([(start, 0)]);
    loop {
        let cur = *walk.last().unwrap();
        let mut step = None;
        g.for_each_predecessor(cur, &mut |c, from| {
            if step.is_none() && residual[from as usize] > 0 {
                step = Some((c, from));
            }
        });
        let (c, prev) = step.expect("unpeeled vertices have an unpeeled predecessor");
        labels.push(c);
        if let Some(&i) = seen_at.get(&prev) {
            // walk[i] -labels[L]-> walk[L] -labels[L-1]-> ... walk[i+1] -labels[i]-> walk[i].
            let mut cycle: Vec<u32> = walk[i..].to_vec();
            cycle.reverse();
            cycle.rotate_right(1);
            let mut cyc_labels: Vec<Symbol> = labels[i..].to_vec();
            cyc_labels.reverse();
            return Some(Witness {
                cycle: cycle.into_iter().map(|id| g.pair(id)).collect(),
                labels: cyc_labels,
            });
        }
        seen_at.insert(prev, walk.len());
        walk.push(prev);
    }
}

/// Checks a witness directly against `δ` and the rank table.
pub fn verify_witness(a_min: &Automaton, t: &RankTable, w: &Witness) -> bool {
    let k = w.cycle.len();
    if k == 0 || w.labels.len() != k || t.n() != a_min.n() {
        return false;
    }
    (0..k).all(|i| {
        let (u, v) = w.cycle[i];
        let (u2, v2) = w.cycle[(i + 1) % k];
        (u as usize) < a_min.n()
            && (v as usize) < a_min.n()
            && u != v
            && t.intervals_intersect(u, v)
            && a_min.delta(u, w.labels[i]) == Some(u2)
            && a_min.delta(v, w.labels[i]) == Some(v2)
    })
}
