//! Reduction from Orthogonal Vectors: a DFA over `{0, 1, #}` whose language
//! is non-Wheeler iff some `a ∈ A` and `b ∈ B` have `a·b = 0`.
//!
//! Layout, with `N = 2^ℓ` and `ρ(i)` the `ℓ`-bit MSB-first encoding of `i − 1`:
//!
//! * `V^out`: complete binary out-tree from the source. Leaf `x_i` is reached
//!   by `0ρ(i)`, leaf `y_j` by `1ρ(j)`.
//! * `I`: `x_i -11-> â'_i` and `x_i -00-> â'_i` through `x'_i` and `x''_i`;
//!   `y_j -01-> b̂'_j` through `y'_j`; then `â'_i -0-> â_i` and `b̂'_j -0-> b̂_j`.
//! * `C^A_i`: `â_i` spells `a_i`, then `ℓ` steps on both `0` and `1`, then `#`
//!   back to `â_i`. `C^B_j`: for each bit, a `0`-edge and also a `1`-edge
//!   when `b_j[r] = 0`; then `ρ(j)`; then `#` back to `b̂_j`.
//! * `V^in`: complete binary in-tree into the single final state `t`. The last
//!   node of `C^A_i` steps on `0` to leaf `t_i`, which reads `ρ(i)0` to `t`;
//!   likewise `C^B_j` to `z_j`, which reads `ρ(j)1`.

use std::collections::HashSet;
use std::fmt::Write;
use std::ops::Range;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Alphabet, Automaton, StateId, Symbol, Transition};
use crate::error::{Error, Result};
use crate::square::Witness;

const ZERO: Symbol = 0;
const ONE: Symbol = 1;
const HASH: Symbol = 2;

/// An OV instance with `|A| = |B| = N`, `N` a power of two and `A` duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvInstance {
    d: usize,
    a: Vec<Vec<bool>>,
    b: Vec<Vec<bool>>,
}

impl OvInstance {
    pub fn new(a: Vec<Vec<bool>>, b: Vec<Vec<bool>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidOvInstance(m));
        let n = a.len();
        if n == 0 || !n.is_power_of_two() {
            return bad(format!("N = {n} is not a power of two"));
        }
        if b.len() != n {
            return bad(format!("|A| = {n} but |B| = {}", b.len()));
        }
        let d = a[0].len();
        if d == 0 {
            return bad("dimension must be at least 1".into());
        }
        if a.iter().chain(&b).any(|v| v.len() != d) {
            return bad("vectors differ in length".into());
        }
        let mut seen = HashSet::new();
        for (i, v) in a.iter().enumerate() {
            if !seen.insert(v) {
                return bad(format!("a_{} repeats an earlier vector of A", i + 1));
            }
        }
        Ok(Self { d, a, b })
    }

    /// Parses 0/1 strings, e.g. `["110", "100"]`.
    pub fn from_strs(a: &[&str], b: &[&str]) -> Result<Self> {
        let bits = |s: &&str| -> Result<Vec<bool>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::InvalidOvInstance(format!("`{s}` is not a 0/1 string"))),
                })
                .collect()
        };
        Self::new(
            a.iter().map(bits).collect::<Result<_>>()?,
            b.iter().map(bits).collect::<Result<_>>()?,
        )
    }

    /// `N`.
    pub fn size(&self) -> usize {
        self.a.len()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `log2 N`.
    pub fn ell(&self) -> usize {
        self.size().trailing_zeros() as usize
    }

    /// `a_i`, 1-based.
    pub fn a(&self, i: usize) -> &[bool] {
        &self.a[i - 1]
    }

    /// `b_j`, 1-based.
    pub fn b(&self, j: usize) -> &[bool] {
        &self.b[j - 1]
    }

    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        self.a(i).iter().zip(self.b(j)).all(|(&x, &y)| !(x && y))
    }
}

fn bit_string(v: &[bool]) -> String {
    v.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

/// The text form: `N d`, then the `N` vectors of `A`, then those of `B`.
pub fn serialize_ov(inst: &OvInstance) -> String {
    let mut out = format!("{} {}\n", inst.size(), inst.dim());
    for v in inst.a.iter().chain(&inst.b) {
        writeln!(out, "{}", bit_string(v)).unwrap();
    }
    out
}

pub fn parse_ov(text: &str) -> Result<OvInstance> {
    let err = |line, message: String| Error::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (lno, header) = lines.next().ok_or_else(|| err(0, "empty OV file".into()))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| err(lno, format!("`{t}` is not a non-negative integer")))
        })
        .collect::<Result<_>>()?;
    let [n, d] = nums[..] else {
        return Err(err(lno, "expected `N d`".into()));
    };
    let mut vectors = Vec::with_capacity(2 * n);
    for (lno, line) in lines {
        if line.len() != d || line.chars().any(|c| c != '0' && c != '1') {
            return Err(err(lno, format!("expected a 0/1 string of length {d}")));
        }
        vectors.push(line.chars().map(|c| c == '1').collect::<Vec<bool>>());
    }
    if vectors.len() != 2 * n {
        return Err(err(0, format!("expected {} vectors, found {}", 2 * n, vectors.len())));
    }
    let b = vectors.split_off(n);
    OvInstance::new(vectors, b)
}

/// The lexicographically first orthogonal pair `(r, s)`, 1-based.
pub fn ov_bruteforce(inst: &OvInstance) -> Option<(usize, usize)> {
    let n = inst.size();
    (1..=n)
        .flat_map(|r| (1..=n).map(move |s| (r, s)))
        .find(|&(r, s)| inst.orthogonal(r, s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Force {
    Yes,
    No,
    Any,
}

const NO_ATTEMPTS: usize = 1000;

fn random_bits(rng: &mut ChaCha8Rng, d: usize) -> Vec<bool> {
    (0..d).map(|_| rng.gen_bool(0.5)).collect()
}

fn distinct_vectors(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<bool>> {
    if d <= 20 {
        return index::sample(rng, 1 << d, n)
            .into_iter()
            .map(|x| (0..d).map(|k| (x >> (d - 1 - k)) & 1 == 1).collect())
            .collect();
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v = random_bits(rng, d);
        if seen.insert(v.clone()) {
            out.push(v);
        }
    }
    out
}

/// A random valid instance, reproducible from `seed`.
///
/// `Force::Yes` plants a vector of `B` orthogonal to one of `A`. `Force::No`
/// draws each `b` among vectors meeting every `a`, redrawing `A` when that
/// fails, and gives up after a fixed number of attempts.
pub fn random_ov_instance(n: usize, d: usize, seed: u64, force: Force) -> Result<OvInstance> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Infeasible(format!("N = {n} is not a power of two")));
    }
    if d == 0 {
        return Err(Error::Infeasible("dimension must be at least 1".into()));
    }
    if d < usize::BITS as usize && n > 1 << d {
        return Err(Error::Infeasible(format!(
            "{n} distinct vectors do not exist in dimension {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match force {
        Force::Any => {
            let a = distinct_vectors(&mut rng, n, d);
            let b = (0..n).map(|_| random_bits(&mut rng, d)).collect();
            OvInstance::new(a, b)
        }
        Force::Yes => {
            let a = distinct_vectors(&mut rng, n, d);
            let mut b: Vec<Vec<bool>> = (0..n).map(|_| random_bits(&mut rng, d)).collect();
            let (r, s) = (rng.gen_range(0..n), rng.gen_range(0..n));
            b[s] = a[r].iter().map(|&x| !x && rng.gen_bool(0.5)).collect();
            OvInstance::new(a, b)
        }
        Force::No => {
            for _ in 0..NO_ATTEMPTS {
                let a = distinct_vectors(&mut rng, n, d);
                let meets_all = |v: &[bool]| a.iter().all(|u| u.iter().zip(v).any(|(&x, &y)| x && y));
                let mut b = Vec::with_capacity(n);
                for _ in 0..NO_ATTEMPTS {
                    let v = random_bits(&mut rng, d);
                    if meets_all(&v) {
                        b.push(v);
                        if b.len() == n {
                            break;
                        }
                    }
                }
                if b.len() == n {
                    return OvInstance::new(a, b);
                }
            }
            Err(Error::Infeasible(format!("no NO instance found for N = {n}, d = {d}")))
        }
    }
}

/// Where a state of the generated automaton lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Out,
    Inner,
    /// In `C^A_i` (1-based) at position `k`; position 0 is `â_i`.
    CycleA {
        i: usize,
        k: usize,
    },
    /// In `C^B_j` (1-based) at position `k`; position 0 is `b̂_j`.
    CycleB {
        j: usize,
        k: usize,
    },
    In,
}

/// State numbering of the generated automaton.
///
/// `V^out` comes first in heap order, then `I`, then the cycles `C^A_1..N`,
/// `C^B_1..N`, then `V^in` in heap order. In a heap, node `h` has children
/// `2h` (label 0) and `2h + 1` (label 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvDfaLayout {
    n: usize,
    d: usize,
    ell: usize,
    inner: usize,
    cycles: usize,
    v_in: usize,
    total: usize,
}

impl OvDfaLayout {
    pub fn new(n: usize, d: usize) -> Self {
        let ell = n.trailing_zeros() as usize;
        let tree = 4 * n - 1;
        let inner = tree;
        let cycles = inner + 5 * n;
        let v_in = cycles + 2 * n * (d + ell + 1);
        Self {
            n,
            d,
            ell,
            inner,
            cycles,
            v_in,
            total: v_in + tree,
        }
    }

    pub fn num_states(&self) -> usize {
        self.total
    }

    /// Nodes per cycle, `d + ℓ + 1`.
    pub fn cycle_len(&self) -> usize {
        self.d + self.ell + 1
    }

    /// `ρ(i)` as bits, most significant first.
    pub fn rho(&self, i: usize) -> Vec<bool> {
        (0..self.ell)
            .map(|k| ((i - 1) >> (self.ell - 1 - k)) & 1 == 1)
            .collect()
    }

    /// `ρ(i)` reversed, read as an integer.
    fn rho_reversed(&self, i: usize) -> usize {
        (0..self.ell).fold(0, |acc, k| (acc << 1) | (((i - 1) >> k) & 1))
    }

    fn out_heap(&self, h: usize) -> StateId {
        (h - 1) as StateId
    }

    fn in_heap(&self, h: usize) -> StateId {
        (self.v_in + h - 1) as StateId
    }

    pub fn source(&self) -> StateId {
        0
    }

    pub fn x(&self, i: usize) -> StateId {
        self.out_heap(2 * self.n + i - 1)
    }

    pub fn y(&self, j: usize) -> StateId {
        self.out_heap(3 * self.n + j - 1)
    }

    /// `x'_i`, on the `11` path.
    pub fn x_one(&self, i: usize) -> StateId {
        (self.inner + i - 1) as StateId
    }

    /// `x''_i`, on the `00` path.
    pub fn x_zero(&self, i: usize) -> StateId {
        (self.inner + self.n + i - 1) as StateId
    }

    pub fn a_hat_prime(&self, i: usize) -> StateId {
        (self.inner + 2 * self.n + i - 1) as StateId
    }

    pub fn y_prime(&self, j: usize) -> StateId {
        (self.inner + 3 * self.n + j - 1) as StateId
    }

    pub fn b_hat_prime(&self, j: usize) -> StateId {
        (self.inner + 4 * self.n + j - 1) as StateId
    }

    pub fn cycle_a(&self, i: usize) -> Range<StateId> {
        let start = self.cycles + (i - 1) * self.cycle_len();
        start as StateId..(start + self.cycle_len()) as StateId
    }

    pub fn cycle_b(&self, j: usize) -> Range<StateId> {
        let start = self.cycles + (self.n + j - 1) * self.cycle_len();
        start as StateId..(start + self.cycle_len()) as StateId
    }

    pub fn a_hat(&self, i: usize) -> StateId {
        self.cycle_a(i).start
    }

    pub fn b_hat(&self, j: usize) -> StateId {
        self.cycle_b(j).start
    }

    /// The final state `t`.
    pub fn t(&self) -> StateId {
        self.in_heap(1)
    }

    pub fn t_leaf(&self, i: usize) -> StateId {
        self.in_heap(2 * self.n + self.rho_reversed(i))
    }

    pub fn z_leaf(&self, j: usize) -> StateId {
        self.in_heap(3 * self.n + self.rho_reversed(j))
    }

    pub fn region(&self, u: StateId) -> Region {
        let u = u as usize;
        if u < self.inner {
            Region::Out
        } else if u < self.cycles {
            Region::Inner
        } else if u < self.v_in {
            let c = (u - self.cycles) / self.cycle_len();
            let k = (u - self.cycles) % self.cycle_len();
            if c < self.n {
                Region::CycleA { i: c + 1, k }
            } else {
                Region::CycleB { j: c - self.n + 1, k }
            }
        } else {
            Region::In
        }
    }

    /// Closed-form transition count for `inst`.
    pub fn expected_transitions(&self, inst: &OvInstance) -> usize {
        let (n, d, ell) = (self.n, self.d, self.ell);
        let zeros: usize = (1..=n).map(|j| inst.b(j).iter().filter(|&&x| !x).count()).sum();
        (4 * n - 2) * 2 + 8 * n + n * (d + 2 * ell + 1) + n * (d + ell + 1) + zeros + 2 * n
    }
}

/// Builds the reduction automaton over `0 ≺ 1 ≺ #`.
pub fn build_ov_dfa(inst: &OvInstance) -> Result<(Automaton, OvDfaLayout)> {
    let (n, d) = (inst.size(), inst.dim());
    let lay = OvDfaLayout::new(n, d);
    let ell = lay.ell;
    let bit = |x: bool| if x { ONE } else { ZERO };
    let mut ts = Vec::with_capacity(lay.expected_transitions(inst));
    let mut edge = |from: StateId, c: Symbol, to: StateId| ts.push(Transition::new(from, c, to));

    for h in 1..2 * n {
        edge(lay.out_heap(h), ZERO, lay.out_heap(2 * h));
        edge(lay.out_heap(h), ONE, lay.out_heap(2 * h + 1));
        edge(lay.in_heap(2 * h), ZERO, lay.in_heap(h));
        edge(lay.in_heap(2 * h + 1), ONE, lay.in_heap(h));
    }
    for i in 1..=n {
        edge(lay.x(i), ONE, lay.x_one(i));
        edge(lay.x_one(i), ONE, lay.a_hat_prime(i));
        edge(lay.x(i), ZERO, lay.x_zero(i));
        edge(lay.x_zero(i), ZERO, lay.a_hat_prime(i));
        edge(lay.a_hat_prime(i), ZERO, lay.a_hat(i));

        edge(lay.y(i), ZERO, lay.y_prime(i));
        edge(lay.y_prime(i), ONE, lay.b_hat_prime(i));
        edge(lay.b_hat_prime(i), ZERO, lay.b_hat(i));
    }
    for i in 1..=n {
        let c = lay.cycle_a(i).start;
        for (r, &x) in inst.a(i).iter().enumerate() {
            edge(c + r as StateId, bit(x), c + r as StateId + 1);
        }
        for r in d..d + ell {
            edge(c + r as StateId, ZERO, c + r as StateId + 1);
            edge(c + r as StateId, ONE, c + r as StateId + 1);
        }
        let last = c + (d + ell) as StateId;
        edge(last, ZERO, lay.t_leaf(i));
        edge(last, HASH, c);
    }
    for j in 1..=n {
        let c = lay.cycle_b(j).start;
        for (r, &x) in inst.b(j).iter().enumerate() {
            edge(c + r as StateId, ZERO, c + r as StateId + 1);
            if !x {
                edge(c + r as StateId, ONE, c + r as StateId + 1);
            }
        }
        for (r, x) in lay.rho(j).into_iter().enumerate() {
            edge(c + (d + r) as StateId, bit(x), c + (d + r) as StateId + 1);
        }
        let last = c + (d + ell) as StateId;
        edge(last, ZERO, lay.z_leaf(j));
        edge(last, HASH, c);
    }

    let sigma = Alphabet::from_str_order("01#")?;
    let a = Automaton::new(sigma, lay.num_states(), Some(lay.source()), [lay.t()], ts)?;
    Ok((a, lay))
}

/// Replaces `0` by `00`, `1` by `11` and `#` by `101`, each through fresh
/// states numbered after the originals in transition order.
pub fn to_binary_alphabet(a: &Automaton) -> Result<Automaton> {
    let sigma = a.alphabet();
    let mut spell: Vec<&[Symbol]> = Vec::with_capacity(sigma.len());
    for &c in sigma.chars() {
        spell.push(match c {
            '0' => &[ZERO, ZERO],
            '1' => &[ONE, ONE],
            '#' => &[ONE, ZERO, ONE],
            other => {
                return Err(Error::InvalidAutomaton(format!(
                    "symbol `{other}` is not one of 0, 1, #"
                )))
            }
        });
    }
    let mut next = a.n() as StateId;
    let mut ts = Vec::new();
    for t in a.transitions() {
        let path = spell[t.symbol as usize];
        let mut at = t.from;
        for (k, &c) in path.iter().enumerate() {
            let to = if k + 1 == path.len() {
                t.to
            } else {
                next += 1;
                next - 1
            };
            ts.push(Transition::new(at, c, to));
            at = to;
        }
    }
    Automaton::new(
        Alphabet::from_str_order("01")?,
        next as usize,
        a.source(),
        a.finals(),
        ts,
    )
}

/// Whether no state has two incoming transitions with the same label.
pub fn is_reverse_deterministic(a: &Automaton) -> bool {
    a.reverse().is_deterministic()
}

/// The cycle pair `(r, s)`, 1-based, that a witness on the 3-letter
/// automaton runs through: one side covers exactly `C^A_r`, the other
/// exactly `C^B_s`.
pub fn decode_witness(layout: &OvDfaLayout, w: &Witness) -> Result<(usize, usize)> {
    let fail = |m: &str| Err(Error::WitnessDecode(m.into()));
    if w.cycle.is_empty() {
        return fail("empty cycle");
    }
    let side = |pick: fn(&(StateId, StateId)) -> StateId| -> Result<(bool, usize)> {
        let mut which = None;
        let mut nodes = HashSet::new();
        for p in &w.cycle {
            let found = match layout.region(pick(p)) {
                Region::CycleA { i, .. } => (true, i),
                Region::CycleB { j, .. } => (false, j),
                _ => return Err(Error::WitnessDecode("node outside the cycles".into())),
            };
            if which.is_some_and(|x| x != found) {
                return Err(Error::WitnessDecode("nodes from more than one cycle".into()));
            }
            which = Some(found);
            nodes.insert(pick(p));
        }
        let (is_a, idx) = which.unwrap();
        let range = if is_a { layout.cycle_a(idx) } else { layout.cycle_b(idx) };
        if nodes.len() != range.len() || !nodes.iter().all(|u| range.contains(u)) {
            return Err(Error::WitnessDecode("cycle only partly covered".into()));
        }
        Ok((is_a, idx))
    };
    match (side(|p| p.0)?, side(|p| p.1)?) {
        ((true, r), (false, s)) | ((false, s), (true, r)) => Ok((r, s)),
        _ => fail("both sides lie on cycles of the same kind"),
    }
}
