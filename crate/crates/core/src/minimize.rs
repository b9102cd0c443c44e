//! Hopcroft partition refinement on partial DFAs, and an exact language
//! equivalence check by synchronized product reachability.
//!
//! Missing transitions are routed to an explicit sink for the duration of
//! refinement. The input is trimmed first, so every real state accepts some
//! word and the sink always ends up alone in its block; it is dropped again
//! on output.

use std::collections::{HashSet, VecDeque};

use crate::automaton::{Automaton, StateId, Transition};
use crate::error::{Error, Result};

/// A partition of `0..n` into blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    elems: Vec<usize>,
    loc: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
}

impl Partition {
    fn new(n: usize, initial: &[Vec<usize>]) -> Self {
        let mut p = Partition {
            block_of: vec![0; n],
            elems: Vec::with_capacity(n),
            loc: vec![0; n],
            start: Vec::new(),
            end: Vec::new(),
        };
        for block in initial.iter().filter(|b| !b.is_empty()) {
            let id = p.start.len();
            p.start.push(p.elems.len());
            for &x in block {
                p.block_of[x] = id;
                p.loc[x] = p.elems.len();
                p.elems.push(x);
            }
            p.end.push(p.elems.len());
        }
        p
    }

    pub fn num_blocks(&self) -> usize {
        self.start.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block(&self, b: usize) -> &[usize] {
        &self.elems[self.start[b]..self.end[b]]
    }

    fn size(&self, b: usize) -> usize {
        self.end[b] - self.start[b]
    }

    /// Moves `x` into the marked prefix of its block, whose length is `marked`.
    fn mark(&mut self, x: usize, marked: usize) {
        let b = self.block_of[x];
        let target = self.start[b] + marked;
        let y = self.elems[target];
        self.elems.swap(target, self.loc[x]);
        self.loc[y] = self.loc[x];
        self.loc[x] = target;
    }

    /// Splits the first `marked` elements of block `b` into a new block.
    fn split(&mut self, b: usize, marked: usize) -> usize {
        let id = self.start.len();
        let mid = self.start[b] + marked;
        self.start.push(self.start[b]);
        self.end.push(mid);
        self.start[b] = mid;
        for i in self.start[id]..mid {
            self.block_of[self.elems[i]] = id;
        }
        id
    }
}

/// Output of [`minimize`].
#[derive(Debug, Clone)]
pub struct Minimized {
    pub automaton: Automaton,
    /// Input state to its class in the output; `None` for states trimmed away.
    pub state_map: Vec<Option<StateId>>,
}

/// The unique minimum trimmed DFA for `L(a)`.
///
/// Output states are numbered by the smallest input state in their class.
pub fn minimize(a: &Automaton) -> Result<Minimized> {
    let (trimmed, report) = a.trim()?;
    let n = trimmed.n();
    if n == 0 {
        return Ok(Minimized {
            automaton: trimmed,
            state_map: vec![None; a.n()],
        });
    }
    let k = trimmed.alphabet().len();
    let sink = n;
    let total = n + 1;

    // Inverse of the completed transition function: for each symbol, predecessors of each state.
    let table = trimmed.delta_table()?;
    let mut inv_offsets = vec![0usize; k * total + 1];
    let target = |u: usize, c: usize| -> usize {
        if u == sink {
            sink
        } else {
            table.get(u as StateId, c as u16).map_or(sink, |v| v as usize)
        }
    };
    for u in 0..total {
        for c in 0..k {
            inv_offsets[c * total + target(u, c) + 1] += 1;
        }
    }
    for i in 0..k * total {
        inv_offsets[i + 1] += inv_offsets[i];
    }
    let mut inv = vec![0usize; k * total];
    let mut fill = inv_offsets.clone();
    for u in 0..total {
        for c in 0..k {
            let slot = c * total + target(u, c);
            inv[fill[slot]] = u;
            fill[slot] += 1;
        }
    }

    let finals: Vec<usize> = (0..n).filter(|&u| trimmed.is_final(u as StateId)).collect();
    let nonfinals: Vec<usize> = (0..total)
        .filter(|&u| u == sink || !trimmed.is_final(u as StateId))
        .collect();
    let mut part = Partition::new(total, &[finals, nonfinals]);

    let mut pending: VecDeque<(usize, usize)> = VecDeque::new();
    let mut in_pending: HashSet<(usize, usize)> = HashSet::new();
    let smallest = (0..part.num_blocks()).min_by_key(|&b| part.size(b)).unwrap();
    for c in 0..k {
        pending.push_back((smallest, c));
        in_pending.insert((smallest, c));
    }

    let mut marked = Vec::new();
    let mut touched: Vec<usize> = Vec::new();
    let mut splitter = Vec::new();
    while let Some((b, c)) = pending.pop_front() {
        in_pending.remove(&(b, c));
        splitter.clear();
        splitter.extend_from_slice(part.block(b));
        marked.resize(part.num_blocks(), 0usize);
        for &q in &splitter {
            let slot = c * total + q;
            for &p in &inv[inv_offsets[slot]..inv_offsets[slot + 1]] {
                let y = part.block_of(p);
                if marked[y] == 0 {
                    touched.push(y);
                }
                part.mark(p, marked[y]);
                marked[y] += 1;
            }
        }
        for y in touched.drain(..) {
            let count = std::mem::take(&mut marked[y]);
            if count == part.size(y) {
                continue;
            }
            let fresh = part.split(y, count);
            marked.push(0);
            for d in 0..k {
                if in_pending.contains(&(y, d)) {
                    pending.push_back((fresh, d));
                    in_pending.insert((fresh, d));
                } else {
                    let smaller = if part.size(fresh) <= part.size(y) { fresh } else { y };
                    pending.push_back((smaller, d));
                    in_pending.insert((smaller, d));
                }
            }
        }
    }

    // Number real blocks by their smallest original (pre-trim) state id.
    let sink_block = part.block_of(sink);
    let mut trimmed_to_orig = vec![0usize; n];
    for (orig, mapped) in report.state_map.iter().enumerate() {
        if let Some(t) = mapped {
            trimmed_to_orig[*t as usize] = orig;
        }
    }
    let mut blocks: Vec<(usize, usize)> = (0..part.num_blocks())
        .filter(|&b| b != sink_block)
        .map(|b| (part.block(b).iter().map(|&u| trimmed_to_orig[u]).min().unwrap(), b))
        .collect();
    blocks.sort_unstable();
    let mut new_id = vec![StateId::MAX; part.num_blocks()];
    for (i, &(_, b)) in blocks.iter().enumerate() {
        new_id[b] = i as StateId;
    }
    debug_assert_eq!(part.size(sink_block), 1, "trimmed states never merge with the sink");

    let class = |u: usize| new_id[part.block_of(u)];
    let mut transitions = Vec::new();
    for &(_, b) in &blocks {
        let rep = part.block(b)[0] as StateId;
        for t in trimmed.out(rep) {
            transitions.push(Transition::new(class(rep as usize), t.symbol, class(t.to as usize)));
        }
    }
    let finals = blocks
        .iter()
        .filter(|&&(_, b)| trimmed.is_final(part.block(b)[0] as StateId))
        .map(|&(_, b)| new_id[b]);
    let source = trimmed.source().map(|s| class(s as usize));
    let automaton = Automaton::new(trimmed.alphabet().clone(), blocks.len(), source, finals, transitions)?;

    let state_map = report.state_map.iter().map(|m| m.map(|t| class(t as usize))).collect();
    Ok(Minimized { automaton, state_map })
}

/// Decides `L(a) = L(b)` exactly, treating missing transitions as a shared dead state.
pub fn equivalent(a: &Automaton, b: &Automaton) -> Result<bool> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if !a.is_deterministic() || !b.is_deterministic() {
        return Err(Error::Nondeterministic);
    }
    let accepting = |x: &Automaton, u: Option<StateId>| u.is_some_and(|u| x.is_final(u));
    let step = |x: &Automaton, u: Option<StateId>, c| u.and_then(|u| x.delta(u, c));

    let start = (a.source(), b.source());
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((u, v)) = queue.pop_front() {
        if accepting(a, u) != accepting(b, v) {
            return Ok(false);
        }
        for c in a.alphabet().symbols() {
            let next = (step(a, u, c), step(b, v, c));
            if next != (None, None) && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Ok(true)
}
