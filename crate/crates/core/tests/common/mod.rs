//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wheeler_core::automaton::{random_dfa, Alphabet, Automaton, StateId, Symbol};
use wheeler_core::colex::{EventuallyPeriodicString, RankTable};
use wheeler_core::regex::RegexAst;
use wheeler_core::square::Digraph;

/// Random DFA with `1..=max_n` states over the first `1..=max_k` letters.
pub fn small_dfa(seed: u64, max_n: usize, max_k: usize) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(1..=max_k);
    let m = rng.gen_range(n - 1..=n * k);
    let sigma = Alphabet::new((b'a'..b'a' + k as u8).map(char::from)).unwrap();
    random_dfa(n, m, &sigma, seed).unwrap()
}

/// Every word over `sigma` of length at most `max_len`.
pub fn all_words(k: usize, max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<Symbol>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..k as Symbol).map(move |c| [w.as_slice(), &[c]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Co-lex comparison of two strings by reading `depth` symbols from the right.
pub fn naive_compare(x: &EventuallyPeriodicString, y: &EventuallyPeriodicString, depth: usize) -> Ordering {
    for i in 0..depth {
        match (x.from_right(i), y.from_right(i)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(a), Some(b)) if a != b => return a.cmp(&b),
            _ => {}
        }
    }
    Ordering::Equal
}

/// Whether exactly one string reaches each state, from capped path counts.
pub fn singleton_oracle(a: &Automaton) -> Vec<bool> {
    let mut count = vec![0u8; a.n()];
    loop {
        let mut next: Vec<u8> = (0..a.n()).map(|u| u8::from(a.source() == Some(u as StateId))).collect();
        for t in a.transitions() {
            next[t.to as usize] = (next[t.to as usize] + count[t.from as usize]).min(2);
        }
        if next == count {
            return count.iter().map(|&c| c == 1).collect();
        }
        count = next;
    }
}

/// Largest set of pairwise-intersecting open intervals, at least 1.
pub fn clique_oracle(t: &RankTable) -> usize {
    let cand: Vec<StateId> = (0..t.n() as StateId).filter(|&u| !t.is_singleton(u)).collect();
    let mut best = 1;
    for mask in 0u32..1 << cand.len() {
        let set: Vec<StateId> = (0..cand.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| cand[i])
            .collect();
        if set.len() > best
            && set
                .iter()
                .all(|&u| set.iter().all(|&v| u == v || t.intervals_intersect(u, v)))
        {
            best = set.len();
        }
    }
    best
}

/// Adjacency lists with symbol labels.
pub struct ListGraph {
    pub succ: Vec<Vec<(Symbol, u32)>>,
    pub pred: Vec<Vec<(Symbol, u32)>>,
}

impl ListGraph {
    pub fn random(seed: u64, max_v: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=max_v);
        let edges = rng.gen_range(0..=2 * n);
        let mut succ = vec![vec![]; n];
        let mut pred = vec![vec![]; n];
        for _ in 0..edges {
            let (u, v, c) = (
                rng.gen_range(0..n) as u32,
                rng.gen_range(0..n) as u32,
                rng.gen_range(0..2),
            );
            succ[u as usize].push((c, v));
            pred[v as usize].push((c, u));
        }
        Self { succ, pred }
    }
}

impl Digraph for ListGraph {
    fn num_vertices(&self) -> usize {
        self.succ.len()
    }

    fn for_each_successor(&self, v: u32, f: &mut dyn FnMut(Symbol, u32)) {
        self.succ[v as usize].iter().for_each(|&(c, w)| f(c, w));
    }

    fn for_each_predecessor(&self, v: u32, f: &mut dyn FnMut(Symbol, u32)) {
        self.pred[v as usize].iter().for_each(|&(c, w)| f(c, w));
    }
}

/// Recursive DFS; a cycle exists iff some edge reaches a vertex on the stack.
pub fn has_cycle_dfs(g: &impl Digraph) -> bool {
    fn visit(g: &impl Digraph, v: u32, color: &mut [u8]) -> bool {
        color[v as usize] = 1;
        let mut succ = vec![];
        g.for_each_successor(v, &mut |_, w| succ.push(w));
        for w in succ {
            let state = color[w as usize];
            if state == 1 || (state == 0 && visit(g, w, color)) {
                return true;
            }
        }
        color[v as usize] = 2;
        false
    }
    let mut color = vec![0u8; g.num_vertices()];
    (0..g.num_vertices() as u32).any(|v| color[v as usize] == 0 && visit(g, v, &mut color))
}

fn ends(ast: &RegexAst, w: &[char], from: usize) -> BTreeSet<usize> {
    match ast {
        RegexAst::Epsilon => BTreeSet::from([from]),
        RegexAst::Literal(c) => {
            if w.get(from) == Some(c) {
                BTreeSet::from([from + 1])
            } else {
                BTreeSet::new()
            }
        }
        RegexAst::Concat(xs) => xs.iter().fold(BTreeSet::from([from]), |acc, x| {
            acc.into_iter().flat_map(|i| ends(x, w, i)).collect()
        }),
        RegexAst::Union(xs) => xs.iter().flat_map(|x| ends(x, w, from)).collect(),
        RegexAst::Optional(x) => {
            let mut out = ends(x, w, from);
            out.insert(from);
            out
        }
        RegexAst::Star(x) | RegexAst::Plus(x) => {
            let mut out = BTreeSet::new();
            if matches!(ast, RegexAst::Star(_)) {
                out.insert(from);
            }
            let mut frontier = ends(x, w, from);
            while !frontier.is_empty() {
                let fresh: Vec<usize> = frontier.into_iter().filter(|&i| out.insert(i)).collect();
                frontier = fresh.iter().flat_map(|&i| ends(x, w, i)).collect();
            }
            out
        }
    }
}

/// Backtracking matcher working directly on the syntax tree.
pub fn brute_matches(ast: &RegexAst, w: &str) -> bool {
    let w: Vec<char> = w.chars().collect();
    ends(ast, &w, 0).contains(&w.len())
}

/// Random expressions over `{a, b}`.
pub fn regex_strategy() -> impl Strategy<Value = RegexAst> {
    let leaf = prop_oneof![
        4 => prop_oneof![Just('a'), Just('b')].prop_map(RegexAst::Literal),
        1 => Just(RegexAst::Epsilon),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(RegexAst::Concat),
            prop::collection::vec(inner.clone(), 2..4).prop_map(RegexAst::Union),
            inner.clone().prop_map(|x| RegexAst::Star(Box::new(x))),
            inner.clone().prop_map(|x| RegexAst::Plus(Box::new(x))),
            inner.prop_map(|x| RegexAst::Optional(Box::new(x))),
        ]
    })
}
