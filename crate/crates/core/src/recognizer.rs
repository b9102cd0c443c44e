//! The end-to-end decision procedure: trim, minimize, rank, build the
//! pruned square, test it for cycles.

use std::time::Instant;

use serde::Serialize;

use crate::automaton::{Automaton, StateId};
use crate::colex::{compute_rank_table, RankTable};
use crate::error::{Error, Result};
use crate::minimize::minimize;
use crate::par::{self, Execution};
use crate::regex::{compile_regex, parse_regex};
use crate::square::{build_full_square, build_pruned_square, extract_witness, PairGraph, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputMode {
    Dfa,
    Regex,
}

/// Wall time per stage in milliseconds. Parsing is not included.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Timings {
    pub trim: f64,
    pub minimize: f64,
    pub rank: f64,
    pub square: f64,
    /// Kahn peeling plus witness extraction.
    pub acyclicity: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub cycle: Vec<[StateId; 2]>,
    /// The cycle's labels, spelled in the automaton's alphabet.
    pub labels: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub wheeler: bool,
    pub n: usize,
    pub m: usize,
    pub n_min: usize,
    pub m_min: usize,
    pub width_estimate: usize,
    pub square_states: usize,
    pub square_transitions: usize,
    pub rank_rounds: usize,
    pub witness: Option<WitnessReport>,
    pub timings_ms: Timings,
    pub input_mode: InputMode,
}

/// How the pruned square is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Output-sensitive construction from sorted intervals.
    #[default]
    Pruned,
    /// All `n²` pairs, then filtered. Quadratic; meant for cross-checking.
    Full,
}

/// A report together with the intermediate objects it was computed from.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: Report,
    pub minimized: Automaton,
    pub ranks: RankTable,
    /// Cycle in terms of `minimized`'s states.
    pub witness: Option<Witness>,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

pub fn analyze(a: &Automaton, strategy: Strategy, input_mode: InputMode) -> Result<Analysis> {
    if !a.is_deterministic() {
        return Err(Error::Nondeterministic);
    }
    let start = Instant::now();
    let mut timings = Timings::default();

    let t = Instant::now();
    let (trimmed, _) = a.trim()?;
    timings.trim = ms(t);

    let t = Instant::now();
    let minimized = minimize(&trimmed)?.automaton;
    timings.minimize = ms(t);

    let t = Instant::now();
    let ranks = compute_rank_table(&minimized)?;
    timings.rank = ms(t);

    let (square_states, square_transitions, witness);
    match strategy {
        Strategy::Pruned => {
            let t = Instant::now();
            let sq = build_pruned_square(&minimized, &ranks)?;
            timings.square = ms(t);
            let t = Instant::now();
            witness = extract_witness(&sq);
            timings.acyclicity = ms(t);
            (square_states, square_transitions) = (sq.num_states(), sq.num_transitions());
        }
        Strategy::Full => {
            let t = Instant::now();
            let sq = build_full_square(&minimized, &ranks)?;
            timings.square = ms(t);
            let t = Instant::now();
            witness = extract_witness(&sq);
            timings.acyclicity = ms(t);
            (square_states, square_transitions) = (sq.num_states(), PairGraph::num_transitions(&sq));
        }
    }
    timings.total = ms(start);

    let report = Report {
        wheeler: witness.is_none(),
        n: a.n(),
        m: a.m(),
        n_min: minimized.n(),
        m_min: minimized.m(),
        width_estimate: ranks.width_estimate(),
        square_states,
        square_transitions,
        rank_rounds: ranks.rounds(),
        witness: witness.as_ref().map(|w| WitnessReport {
            cycle: w.cycle.iter().map(|&(u, v)| [u, v]).collect(),
            labels: minimized.alphabet().decode(&w.labels),
        }),
        timings_ms: timings,
        input_mode,
    };
    Ok(Analysis {
        report,
        minimized,
        ranks,
        witness,
    })
}

/// Decides whether `L(a)` is Wheeler.
pub fn recognize(a: &Automaton) -> Result<Report> {
    Ok(analyze(a, Strategy::Pruned, InputMode::Dfa)?.report)
}

/// Decides whether the language of `pattern` is Wheeler. Compilation is not timed.
pub fn recognize_regex(pattern: &str) -> Result<Report> {
    let dfa = compile_regex(&parse_regex(pattern)?)?;
    Ok(analyze(&dfa, Strategy::Pruned, InputMode::Regex)?.report)
}

/// Recognizes independent automata, concurrently unless `exec` says otherwise.
/// Each pipeline runs on a single thread.
pub fn recognize_batch(automata: &[Automaton], exec: Execution) -> Vec<Result<Report>> {
    par::map(automata.iter().collect(), exec, recognize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::parse_automaton;

    #[test]
    fn known_verdicts() {
        let even = recognize_regex("(aa)*").unwrap();
        assert!(!even.wheeler);
        let w = even.witness.as_ref().unwrap();
        assert_eq!((w.cycle.len(), w.labels.as_str()), (2, "aa"));
        assert_eq!((even.n_min, even.square_states, even.square_transitions), (2, 2, 2));
        assert_eq!(even.input_mode, InputMode::Regex);

        for pattern in ["a*", "ab*", "(a|b)*"] {
            let r = recognize_regex(pattern).unwrap();
            assert!(r.wheeler && r.witness.is_none(), "{pattern}");
        }
        assert_eq!(recognize_regex("a*").unwrap().square_states, 0);
    }

    #[test]
    fn empty_language_is_wheeler() {
        let a = parse_automaton("dfa\nalphabet a\nstates 2\nsource 0\nfinals\ntransitions 1\n0 a 1\n").unwrap();
        let r = recognize(&a).unwrap();
        assert!(r.wheeler);
        assert_eq!((r.n_min, r.square_states), (0, 0));
    }

    #[test]
    fn nfa_input_is_rejected() {
        let a =
            parse_automaton("nfa\nalphabet a\nstates 2\nsource 0\nfinals 1\ntransitions 2\n0 a 0\n0 a 1\n").unwrap();
        assert_eq!(recognize(&a), Err(Error::Nondeterministic));
    }

    #[test]
    fn report_json_field_names() {
        let r = recognize_regex("(aa)*").unwrap();
        let json = serde_json::to_value(&r).unwrap();
        for key in [
            "wheeler",
            "n",
            "m",
            "n_min",
            "m_min",
            "width_estimate",
            "square_states",
            "square_transitions",
            "witness",
            "timings_ms",
            "input_mode",
        ] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["input_mode"], "regex");
        assert_eq!(json["witness"]["labels"], "aa");
        assert_eq!(json["witness"]["cycle"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn batch_matches_single_runs() {
        let automata: Vec<Automaton> = ["a*", "(aa)*", "ab*", "(ab|ba)*"]
            .iter()
            .map(|p| compile_regex(&parse_regex(p).unwrap()).unwrap())
            .collect();
        let par: Vec<bool> = recognize_batch(&automata, Execution::Parallel)
            .into_iter()
            .map(|r| r.unwrap().wheeler)
            .collect();
        let seq: Vec<bool> = recognize_batch(&automata, Execution::Sequential)
            .into_iter()
            .map(|r| r.unwrap().wheeler)
            .collect();
        assert_eq!(par, seq);
        assert_eq!(par, vec![true, false, true, false]);
    }
}
