//! Regular expressions: parsing, then Thompson construction, subset
//! construction and minimization.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! union  := concat ('|' concat)*      an empty branch is ε
//! concat := repeat*
//! repeat := atom ('*' | '+' | '?')*
//! atom   := alphanumeric | '\' any | '(' union ')'
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::automaton::{Alphabet, Automaton, StateId, Symbol, Transition};
use crate::error::{Error, Result};
use crate::minimize::minimize;

/// Default cap on the number of subset-construction states.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegexAst {
    Epsilon,
    Literal(char),
    Concat(Vec<RegexAst>),
    Union(Vec<RegexAst>),
    Star(Box<RegexAst>),
    Plus(Box<RegexAst>),
    Optional(Box<RegexAst>),
}

impl RegexAst {
    /// Distinct literals, sorted by character code.
    pub fn literals(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        self.collect_literals(&mut out);
        out
    }

    fn collect_literals(&self, out: &mut BTreeSet<char>) {
        match self {
            RegexAst::Epsilon => {}
            RegexAst::Literal(c) => {
                out.insert(*c);
            }
            RegexAst::Concat(xs) | RegexAst::Union(xs) => xs.iter().for_each(|x| x.collect_literals(out)),
            RegexAst::Star(x) | RegexAst::Plus(x) | RegexAst::Optional(x) => x.collect_literals(out),
        }
    }
}

/// Prints a pattern that parses back to an equivalent expression.
impl fmt::Display for RegexAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegexAst::Epsilon => write!(f, "(|)"),
            RegexAst::Literal(c) if c.is_ascii_alphanumeric() => write!(f, "{c}"),
            RegexAst::Literal(c) => write!(f, "\\{c}"),
            RegexAst::Concat(xs) => xs.iter().try_for_each(|x| write!(f, "({x})")),
            RegexAst::Union(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            RegexAst::Star(x) => write!(f, "({x})*"),
            RegexAst::Plus(x) => write!(f, "({x})+"),
            RegexAst::Optional(x) => write!(f, "({x})?"),
        }
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    pattern: &'a str,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Regex {
        offset,
        message: message.into(),
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.at).map_or(self.pattern.len(), |&(o, _)| o)
    }

    fn union(&mut self) -> Result<RegexAst> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some('|') {
            self.at += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            RegexAst::Union(branches)
        })
    }

    fn concat(&mut self) -> Result<RegexAst> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            match c {
                '|' | ')' => break,
                '*' | '+' | '?' => return Err(syntax(self.offset(), format!("dangling operator `{c}`"))),
                _ => parts.push(self.repeat()?),
            }
        }
        Ok(match parts.len() {
            0 => RegexAst::Epsilon,
            1 => parts.pop().unwrap(),
            _ => RegexAst::Concat(parts),
        })
    }

    fn repeat(&mut self) -> Result<RegexAst> {
        let mut node = self.atom()?;
        while let Some(c) = self.peek() {
            node = match c {
                '*' => RegexAst::Star(Box::new(node)),
                '+' => RegexAst::Plus(Box::new(node)),
                '?' => RegexAst::Optional(Box::new(node)),
                _ => break,
            };
            self.at += 1;
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<RegexAst> {
        let start = self.offset();
        let c = self.peek().expect("callers check for input");
        self.at += 1;
        match c {
            '(' => {
                let inner = self.union()?;
                if self.peek() != Some(')') {
                    return Err(syntax(start, "unbalanced parenthesis"));
                }
                self.at += 1;
                Ok(inner)
            }
            '\\' => {
                let escaped = self.peek().ok_or_else(|| syntax(start, "trailing escape"))?;
                self.at += 1;
                Ok(RegexAst::Literal(escaped))
            }
            c if c.is_alphanumeric() => Ok(RegexAst::Literal(c)),
            c => Err(syntax(start, format!("unexpected character `{c}`"))),
        }
    }
}

pub fn parse_regex(pattern: &str) -> Result<RegexAst> {
    if pattern.is_empty() {
        return Err(syntax(0, "empty pattern"));
    }
    let mut p = Parser {
        chars: pattern.char_indices().collect(),
        at: 0,
        pattern,
    };
    let ast = p.union()?;
    if p.peek().is_some() {
        return Err(syntax(p.offset(), "unbalanced parenthesis"));
    }
    Ok(ast)
}

/// Options for [`compile_regex_with`].
#[derive(Debug, Clone)]
pub struct CompileOptions {
    /// Alphabet of the output; must contain every literal. Defaults to the
    /// literals sorted by character code.
    pub alphabet: Option<Alphabet>,
    pub state_cap: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            alphabet: None,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

pub fn compile_regex(ast: &RegexAst) -> Result<Automaton> {
    compile_regex_with(ast, &CompileOptions::default())
}

/// Thompson NFA with ε-moves (`None` labels).
#[derive(Default)]
struct Nfa {
    edges: Vec<Vec<(Option<Symbol>, u32)>>,
}

impl Nfa {
    fn state(&mut self) -> u32 {
        self.edges.push(Vec::new());
        self.edges.len() as u32 - 1
    }

    fn edge(&mut self, from: u32, label: Option<Symbol>, to: u32) {
        self.edges[from as usize].push((label, to));
    }

    /// Returns the fragment's entry and exit states.
    fn build(&mut self, ast: &RegexAst, sigma: &Alphabet) -> (u32, u32) {
        let (s, t) = (self.state(), self.state());
        match ast {
            RegexAst::Epsilon => self.edge(s, None, t),
            RegexAst::Literal(c) => self.edge(s, sigma.symbol_of(*c), t),
            RegexAst::Concat(xs) => {
                let mut at = s;
                for x in xs {
                    let (xs_, xt) = self.build(x, sigma);
                    self.edge(at, None, xs_);
                    at = xt;
                }
                self.edge(at, None, t);
            }
            RegexAst::Union(xs) => {
                for x in xs {
                    let (xs_, xt) = self.build(x, sigma);
                    self.edge(s, None, xs_);
                    self.edge(xt, None, t);
                }
            }
            RegexAst::Star(x) | RegexAst::Plus(x) | RegexAst::Optional(x) => {
                let (xs_, xt) = self.build(x, sigma);
                self.edge(s, None, xs_);
                self.edge(xt, None, t);
                if !matches!(ast, RegexAst::Plus(_)) {
                    self.edge(s, None, t);
                }
                if !matches!(ast, RegexAst::Optional(_)) {
                    self.edge(xt, None, xs_);
                }
            }
        }
        (s, t)
    }

    fn closure(&self, set: &mut Vec<u32>) {
        let mut seen: BTreeSet<u32> = set.iter().copied().collect();
        let mut stack = set.clone();
        while let Some(u) = stack.pop() {
            for &(label, v) in &self.edges[u as usize] {
                if label.is_none() && seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        *set = seen.into_iter().collect();
    }
}

/// Compiles to the minimum trimmed DFA of the expression's language.
pub fn compile_regex_with(ast: &RegexAst, options: &CompileOptions) -> Result<Automaton> {
    let literals = ast.literals();
    let sigma = match &options.alphabet {
        Some(sigma) => {
            if literals.iter().any(|&c| sigma.symbol_of(c).is_none()) {
                return Err(Error::AlphabetMismatch);
            }
            sigma.clone()
        }
        None => Alphabet::new(literals)?,
    };

    let mut nfa = Nfa::default();
    let (start, accept) = nfa.build(ast, &sigma);

    let mut first = vec![start];
    nfa.closure(&mut first);
    let mut ids: HashMap<Vec<u32>, StateId> = HashMap::from([(first.clone(), 0)]);
    let mut sets = vec![first];
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < sets.len() {
        for c in sigma.symbols() {
            let mut target: Vec<u32> = sets[next]
                .iter()
                .flat_map(|&u| nfa.edges[u as usize].iter())
                .filter(|&&(label, _)| label == Some(c))
                .map(|&(_, v)| v)
                .collect();
            if target.is_empty() {
                continue;
            }
            nfa.closure(&mut target);
            let id = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    if sets.len() >= options.state_cap {
                        return Err(Error::StateLimit {
                            limit: options.state_cap,
                        });
                    }
                    let id = sets.len() as StateId;
                    ids.insert(target.clone(), id);
                    sets.push(target);
                    id
                }
            };
            transitions.push(Transition::new(next as StateId, c, id));
        }
        next += 1;
    }
    let finals = (0..sets.len())
        .filter(|&i| sets[i].binary_search(&accept).is_ok())
        .map(|i| i as StateId);
    let dfa = Automaton::new(sigma, sets.len(), Some(0), finals, transitions)?;
    Ok(minimize(&dfa)?.automaton)
}
