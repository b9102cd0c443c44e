use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Alphabet, Automaton, StateId, Symbol, Transition};
use crate::error::{Error, Result};

/// Random DFA with `n` states and `m` transitions, every state reachable from
/// source `0`.
///
/// A random spanning tree rooted at the source comes first, then uniformly
/// chosen free `(state, symbol)` slots receive uniformly random targets.
/// Each state is final with probability 1/2, redrawn until at least one is.
pub fn random_dfa(n: usize, m: usize, sigma: &Alphabet, seed: u64) -> Result<Automaton> {
    let k = sigma.len();
    if n == 0 {
        return Err(Error::Infeasible("a random DFA needs at least one state".into()));
    }
    if k == 0 {
        return Err(Error::Infeasible("empty alphabet".into()));
    }
    if m + 1 < n {
        return Err(Error::Infeasible(format!("m = {m} < n - 1 = {}", n - 1)));
    }
    if m > n * k {
        return Err(Error::Infeasible(format!("m = {m} exceeds n * |sigma| = {}", n * k)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = vec![false; n * k];
    let mut transitions = Vec::with_capacity(m);

    // States with at least one free out-slot, among those already attached.
    let mut open: Vec<StateId> = vec![0];
    let mut free_count = vec![k; n];
    for v in 1..n as StateId {
        let pick = rng.gen_range(0..open.len());
        let parent = open[pick];
        let free: Vec<Symbol> = (0..k as Symbol)
            .filter(|&c| !used[parent as usize * k + c as usize])
            .collect();
        let c = *free.choose(&mut rng).expect("open states have a free slot");
        used[parent as usize * k + c as usize] = true;
        transitions.push(Transition::new(parent, c, v));
        free_count[parent as usize] -= 1;
        if free_count[parent as usize] == 0 {
            open.swap_remove(pick);
        }
        open.push(v);
    }

    let mut slots: Vec<usize> = (0..n * k).filter(|&i| !used[i]).collect();
    let extra = m - (n - 1);
    let (chosen, _) = slots.partial_shuffle(&mut rng, extra);
    for &slot in chosen.iter() {
        let to = rng.gen_range(0..n) as StateId;
        transitions.push(Transition::new((slot / k) as StateId, (slot % k) as Symbol, to));
    }

    let finals = loop {
        let finals: Vec<StateId> = (0..n as StateId).filter(|_| rng.gen_bool(0.5)).collect();
        if !finals.is_empty() {
            break finals;
        }
    };

    Automaton::new(sigma.clone(), n, Some(0), finals, transitions)
}
