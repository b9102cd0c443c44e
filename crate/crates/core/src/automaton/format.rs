//! Line-oriented text format.
//!
//! ```text
//! dfa
//! alphabet a b
//! states 2
//! source 0
//! finals 0
//! transitions 2
//! 0 a 1
//! 1 a 0
//! ```
//!
//! Lines whose first non-blank character is `#` are comments. A zero-state
//! automaton writes a bare `source` line.

use std::collections::HashSet;
use std::fmt::Write;

use super::{Alphabet, Automaton, StateId, Transition};
use crate::error::{Error, Result};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses the text format. The determinism flag is recomputed from the transitions.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (lno, kind) = take(&mut lines, "`dfa` or `nfa`")?;
    let declared_dfa = match kind {
        "dfa" => true,
        "nfa" => false,
        other => return Err(err(lno, format!("expected `dfa` or `nfa`, found `{other}`"))),
    };

    let (lno, line) = take(&mut lines, "alphabet line")?;
    let alphabet = {
        let rest = keyword(lno, line, "alphabet")?;
        let mut chars = Vec::new();
        for tok in rest.split_whitespace() {
            let mut it = tok.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => chars.push(c),
                _ => return Err(err(lno, format!("alphabet symbol `{tok}` is not a single character"))),
            }
        }
        Alphabet::new(chars).map_err(|e| err(lno, e.to_string()))?
    };

    let (lno, line) = take(&mut lines, "states line")?;
    let n: usize = number(lno, keyword(lno, line, "states")?)?;

    let (lno, line) = take(&mut lines, "source line")?;
    let rest = keyword(lno, line, "source")?;
    let source = if rest.is_empty() && n == 0 {
        None
    } else {
        Some(state(lno, rest, n)?)
    };

    let (lno, line) = take(&mut lines, "finals line")?;
    let finals = keyword(lno, line, "finals")?
        .split_whitespace()
        .map(|tok| state(lno, tok, n))
        .collect::<Result<Vec<_>>>()?;

    let (lno, line) = take(&mut lines, "transitions line")?;
    let declared_m: usize = number(lno, keyword(lno, line, "transitions")?)?;

    let mut transitions = Vec::with_capacity(declared_m);
    let mut seen = HashSet::with_capacity(declared_m);
    let mut keys = HashSet::with_capacity(declared_m);
    let mut last_line = lno;
    for (lno, line) in lines {
        last_line = lno;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [from, sym, to] = toks[..] else {
            return Err(err(lno, "expected `<from> <symbol> <to>`"));
        };
        let from = state(lno, from, n)?;
        let to = state(lno, to, n)?;
        let mut chars = sym.chars();
        let symbol = match (chars.next(), chars.next()) {
            (Some(c), None) => alphabet
                .symbol_of(c)
                .ok_or_else(|| err(lno, format!("unknown symbol `{c}`")))?,
            _ => return Err(err(lno, format!("symbol `{sym}` is not a single character"))),
        };
        let t = Transition::new(from, symbol, to);
        if !seen.insert(t) {
            return Err(err(lno, "duplicate transition"));
        }
        if declared_dfa && !keys.insert((from, symbol)) {
            return Err(err(
                lno,
                format!("duplicate transition on ({from}, {})", alphabet.char_of(symbol)),
            ));
        }
        transitions.push(t);
    }
    if transitions.len() != declared_m {
        return Err(err(
            last_line,
            format!("declared {declared_m} transitions, found {}", transitions.len()),
        ));
    }

    Automaton::new(alphabet, n, source, finals, transitions).map_err(|e| err(0, e.to_string()))
}

fn take<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, what: &str) -> Result<(usize, &'a str)> {
    lines
        .next()
        .ok_or_else(|| err(0, format!("unexpected end of input, expected {what}")))
}

fn keyword<'a>(lno: usize, line: &'a str, kw: &str) -> Result<&'a str> {
    match line.strip_prefix(kw) {
        Some(rest) if rest.is_empty() || rest.starts_with(char::is_whitespace) => Ok(rest.trim()),
        _ => Err(err(lno, format!("expected `{kw}` line"))),
    }
}

fn number(lno: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| err(lno, format!("`{tok}` is not a non-negative integer")))
}

fn state(lno: usize, tok: &str, n: usize) -> Result<StateId> {
    let id = number(lno, tok)?;
    if id >= n {
        return Err(err(lno, format!("state id {id} out of range (states {n})")));
    }
    Ok(id as StateId)
}

/// Writes the text format with transitions sorted by `(from, symbol, to)`.
pub fn serialize_automaton(a: &Automaton) -> String {
    let mut out = String::with_capacity(64 + a.m() * 12);
    out.push_str(if a.is_deterministic() { "dfa\n" } else { "nfa\n" });
    out.push_str("alphabet");
    for c in a.alphabet().chars() {
        write!(out, " {c}").unwrap();
    }
    writeln!(out, "\nstates {}", a.n()).unwrap();
    match a.source() {
        Some(s) => writeln!(out, "source {s}").unwrap(),
        None => out.push_str("source\n"),
    }
    out.push_str("finals");
    for f in a.finals() {
        write!(out, " {f}").unwrap();
    }
    writeln!(out, "\ntransitions {}", a.m()).unwrap();
    for t in a.transitions() {
        writeln!(out, "{} {} {}", t.from, a.alphabet().char_of(t.symbol), t.to).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_STATE: &str = "dfa\nalphabet a\nstates 1\nsource 0\nfinals 0\ntransitions 1\n0 a 0\n";

    #[test]
    fn smallest_document() {
        let a = parse_automaton(ONE_STATE).unwrap();
        assert_eq!((a.n(), a.m()), (1, 1));
        assert!(a.is_deterministic());
        assert_eq!(serialize_automaton(&a), ONE_STATE);
    }

    #[test]
    fn duplicate_line_is_rejected() {
        let text = format!("{ONE_STATE}0 a 0\n");
        let e = parse_automaton(&text).unwrap_err();
        assert!(e.to_string().contains("duplicate transition"), "{e}");
        assert!(e.to_string().contains("line 8"), "{e}");
    }

    #[test]
    fn nondeterministic_pair_in_dfa_is_rejected() {
        let text = "dfa\nalphabet a\nstates 2\nsource 0\nfinals 1\ntransitions 2\n0 a 0\n0 a 1\n";
        assert!(parse_automaton(text)
            .unwrap_err()
            .to_string()
            .contains("duplicate transition"));
        let nfa = text.replacen("dfa", "nfa", 1);
        assert!(!parse_automaton(&nfa).unwrap().is_deterministic());
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            (
                "dfa\nalphabet a\nstates 1\nsource 0\nfinals 0\ntransitions 1\n0 b 0\n",
                "line 7",
                "unknown symbol",
            ),
            (
                "dfa\nalphabet a\nstates 1\nsource 3\nfinals\ntransitions 0\n",
                "line 4",
                "out of range",
            ),
            (
                "dfa\nalphabet a\nstates 1\nsource 0\nfinals 0\ntransitions 1\n0 a\n",
                "line 7",
                "expected",
            ),
            ("dfa\nalphabet ab\n", "line 2", "single character"),
            ("xfa\n", "line 1", "expected `dfa`"),
        ];
        for (text, line, what) in cases {
            let e = parse_automaton(text).unwrap_err().to_string();
            assert!(e.contains(line) && e.contains(what), "{e}");
        }
    }

    #[test]
    fn comments_and_hash_symbols() {
        let text =
            "# header\ndfa\n\nalphabet 0 1 #\nstates 2\nsource 0\n# finals next\nfinals\ntransitions 2\n0 # 1\n1 0 0\n";
        let a = parse_automaton(text).unwrap();
        assert_eq!(a.m(), 2);
        assert_eq!(a.finals().count(), 0);
        let out = serialize_automaton(&a);
        assert!(out.contains("\nfinals\n"));
        assert_eq!(parse_automaton(&out).unwrap(), a);
    }

    #[test]
    fn zero_state_round_trip() {
        let a = Automaton::empty(Alphabet::from_str_order("ab").unwrap());
        let text = serialize_automaton(&a);
        assert_eq!(parse_automaton(&text).unwrap(), a);
    }

    #[test]
    fn serialization_sorts_transitions() {
        let text = "nfa\nalphabet b a\nstates 2\nsource 1\nfinals 0 1\ntransitions 3\n1 a 0\n0 a 1\n0 b 1\n";
        let out = serialize_automaton(&parse_automaton(text).unwrap());
        assert!(out.ends_with("transitions 3\n0 b 1\n0 a 1\n1 a 0\n"), "{out}");
    }
}
