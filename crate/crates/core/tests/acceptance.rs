//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::cmp::Ordering;
use std::time::Instant;

use common::*;
use wheeler_core::automaton::{parse_automaton, Automaton, StateId};
use wheeler_core::bench::{averaged, inversions, loglog_slope, run_bench, BenchConfig};
use wheeler_core::colex::{compare_eps, compute_rank_table, Bound, EventuallyPeriodicString};
use wheeler_core::minimize::minimize;
use wheeler_core::ov::{
    build_ov_dfa, decode_witness, is_reverse_deterministic, ov_bruteforce, random_ov_instance, to_binary_alphabet,
    Force, OvInstance,
};
use wheeler_core::par::Execution;
use wheeler_core::recognizer::{analyze, recognize_regex, Analysis, InputMode, Strategy};
use wheeler_core::regex::{compile_regex, parse_regex};
use wheeler_core::square::{build_full_square, build_pruned_square, pair_set, transition_set, verify_witness};

/// Accepted range for the log-log slope of total time against `m·p̂`.
const SLOPE_RANGE: (f64, f64) = (0.7, 1.4);
/// Adjacent decreases in averaged time tolerated as noise.
const MAX_INVERSIONS: usize = 1;

const ORACLE_DFAS: u64 = 1000;
const INVARIANT_DFAS: u64 = 500;
const OV_INSTANCES: usize = 120;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pipeline(a: &Automaton, strategy: Strategy) -> Result<Analysis, String> {
    analyze(a, strategy, InputMode::Dfa).map_err(|e| e.to_string())
}

fn oracle_equivalence() -> Check {
    let mut non_wheeler = 0;
    for seed in 0..ORACLE_DFAS {
        let a = small_dfa(seed, 12, 3);
        let min = minimize(&a).map_err(|e| e.to_string())?.automaton;
        let t = compute_rank_table(&min).map_err(|e| e.to_string())?;
        let sq = build_pruned_square(&min, &t).map_err(|e| e.to_string())?;
        let full = build_full_square(&min, &t).map_err(|e| e.to_string())?;
        ensure(pair_set(&sq) == pair_set(&full), || {
            format!("seed {seed}: pair-states differ")
        })?;
        ensure(transition_set(&sq) == transition_set(&full), || {
            format!("seed {seed}: transitions differ")
        })?;
        let fast = pipeline(&a, Strategy::Pruned)?.report;
        let slow = pipeline(&a, Strategy::Full)?.report;
        ensure(fast.wheeler == slow.wheeler, || format!("seed {seed}: verdicts differ"))?;
        non_wheeler += usize::from(!fast.wheeler);
    }
    Ok(format!(
        "{ORACLE_DFAS} DFAs (n <= 12, |S| <= 3), {non_wheeler} non-Wheeler, squares and verdicts identical"
    ))
}

fn known_languages() -> Check {
    let compile = |p: &str| compile_regex(&parse_regex(p).unwrap()).unwrap();
    let even = compile("(aa)*");
    let run = pipeline(&even, Strategy::Pruned)?;
    let w = run.witness.as_ref().ok_or("(aa)* reported Wheeler")?;
    ensure(verify_witness(&run.minimized, &run.ranks, w), || {
        "(aa)* witness fails verification".into()
    })?;
    ensure(w.cycle.len() == 2, || {
        format!("(aa)* witness has length {}", w.cycle.len())
    })?;
    let labels = run.minimized.alphabet().decode(&w.labels);
    ensure(labels == "aa", || format!("(aa)* witness labeled {labels}"))?;
    ensure(!recognize_regex("(aa)*").unwrap().wheeler, || {
        "(aa)* via regex entry point".into()
    })?;
    for p in ["a*", "ab*", "(a|b)*"] {
        let r = recognize_regex(p).map_err(|e| e.to_string())?;
        ensure(r.wheeler && r.witness.is_none(), || format!("{p} reported non-Wheeler"))?;
    }
    Ok("(aa)* non-Wheeler with verified 2-cycle \"aa\"; a*, ab*, (a|b)* Wheeler".into())
}

fn size_bounds() -> Check {
    let mut checked = 0;
    let mut empty_when_width_one = 0;
    let mut check = |a: &Automaton, what: &str| -> Result<(), String> {
        let r = pipeline(a, Strategy::Pruned)?.report;
        let p = r.width_estimate;
        ensure(r.square_states <= 2 * r.n_min * (p - 1), || {
            format!("{what}: {} states, p = {p}", r.square_states)
        })?;
        ensure(r.square_transitions <= 2 * r.m_min * (p - 1), || {
            format!("{what}: {} transitions, p = {p}", r.square_transitions)
        })?;
        if p == 1 {
            ensure(r.square_states == 0, || format!("{what}: p = 1 but square not empty"))?;
            empty_when_width_one += 1;
        }
        checked += 1;
        Ok(())
    };
    for seed in 0..ORACLE_DFAS {
        check(&small_dfa(seed + 10_000, 12, 3), &format!("seed {seed}"))?;
    }
    for seed in 0..20 {
        let inst = random_ov_instance(4, 4, seed, Force::Any).map_err(|e| e.to_string())?;
        check(&build_ov_dfa(&inst).unwrap().0, &format!("OV seed {seed}"))?;
    }
    for seed in 0..5 {
        let sigma = wheeler_core::bench::letters(3).unwrap();
        check(
            &wheeler_core::automaton::random_dfa(500, 1500, &sigma, seed).unwrap(),
            &format!("n = 500 seed {seed}"),
        )?;
    }
    Ok(format!(
        "{checked} instances within 2n(p-1) / 2m(p-1); {empty_when_width_one} with p = 1 all empty"
    ))
}

fn rank_invariants() -> Check {
    // The path-count oracle, checked on hand-derived cases first.
    let even = parse_automaton("dfa\nalphabet a\nstates 2\nsource 0\nfinals 0\ntransitions 2\n0 a 1\n1 a 0\n").unwrap();
    let ab = parse_automaton("dfa\nalphabet a b\nstates 2\nsource 0\nfinals 1\ntransitions 2\n0 a 1\n1 b 1\n").unwrap();
    ensure(singleton_oracle(&even) == [false, false], || "oracle: (aa)*".into())?;
    ensure(singleton_oracle(&ab) == [true, false], || "oracle: ab*".into())?;

    let mut singletons = 0;
    for seed in 0..INVARIANT_DFAS {
        let min = minimize(&small_dfa(seed + 20_000, 10, 3)).unwrap().automaton;
        let t = compute_rank_table(&min).map_err(|e| e.to_string())?;
        let oracle = singleton_oracle(&min);
        for u in 0..min.n() as StateId {
            ensure(t.inf_rank(u) <= t.sup_rank(u), || {
                format!("seed {seed}: inf > sup at {u}")
            })?;
            ensure(t.is_singleton(u) == oracle[u as usize], || {
                format!("seed {seed}: singleton mismatch at {u}")
            })?;
            singletons += usize::from(oracle[u as usize]);
            for bound in [Bound::Inf, Bound::Sup] {
                let s = t.extract(u, bound);
                if s.is_finite() {
                    let reached = min.delta_word(min.source().unwrap(), &s.preperiod);
                    ensure(reached == Some(u), || {
                        format!("seed {seed}: extracted string misses {u}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{INVARIANT_DFAS} DFAs (n <= 10), {singletons} singleton states, all invariants hold"
    ))
}

fn ov_end_to_end() -> Check {
    // Fixed instances first.
    let fig = OvInstance::from_strs(&["110", "100", "111", "011"], &["101", "101", "010", "111"]).unwrap();
    ensure(ov_bruteforce(&fig) == Some((2, 3)), || {
        "brute force on the worked example".into()
    })?;
    let (a, lay) = build_ov_dfa(&fig).unwrap();
    ensure(a.n() == 98, || format!("worked example has {} states", a.n()))?;
    let run = pipeline(&a, Strategy::Pruned)?;
    let w = run.witness.as_ref().ok_or("worked example reported Wheeler")?;
    let pair = decode_witness(&lay, w).map_err(|e| e.to_string())?;
    ensure(pair == (2, 3), || format!("worked example decoded to {pair:?}"))?;
    let no = OvInstance::from_strs(&["110", "100", "111", "011"], &["101", "101", "110", "111"]).unwrap();
    ensure(
        pipeline(&build_ov_dfa(&no).unwrap().0, Strategy::Pruned)?
            .report
            .wheeler,
        || "worked example without orthogonal pair reported non-Wheeler".into(),
    )?;

    let (mut yes, mut substituted) = (0, 0);
    for idx in 0..OV_INSTANCES {
        let n = [2, 4, 8][idx % 3];
        let d = 3 + (idx / 3) % 6;
        let mut force = if idx % 2 == 0 { Force::Yes } else { Force::No };
        // Any 8 distinct vectors of dimension 3 include 000.
        if (n, d) == (8, 3) && force == Force::No {
            force = Force::Any;
            substituted += 1;
        }
        let inst = random_ov_instance(n, d, idx as u64, force).map_err(|e| e.to_string())?;
        let expected = ov_bruteforce(&inst);
        yes += usize::from(expected.is_some());
        let what = format!("instance {idx} (N = {n}, d = {d})");

        let (a, lay) = build_ov_dfa(&inst).unwrap();
        let bin = to_binary_alphabet(&a).unwrap();
        ensure(
            a.n() == lay.num_states() && a.m() == lay.expected_transitions(&inst),
            || format!("{what}: counts"),
        )?;
        for (form, x) in [("3-letter", &a), ("binary", &bin)] {
            ensure(x.is_deterministic() && is_reverse_deterministic(x), || {
                format!("{what}: {form} determinism")
            })?;
            let min = minimize(x).unwrap().automaton;
            ensure((min.n(), min.m()) == (x.n(), x.m()), || {
                format!("{what}: {form} not minimal")
            })?;
            let r = pipeline(x, Strategy::Pruned)?;
            ensure(r.report.wheeler == expected.is_none(), || {
                format!("{what}: {form} verdict")
            })?;
            if let Some(w) = &r.witness {
                ensure(verify_witness(&r.minimized, &r.ranks, w), || {
                    format!("{what}: {form} witness")
                })?;
            }
        }
        if let Some(w) = pipeline(&a, Strategy::Pruned)?.witness {
            let (r, s) = decode_witness(&lay, &w).map_err(|e| format!("{what}: {e}"))?;
            ensure(inst.orthogonal(r, s), || {
                format!("{what}: decoded ({r}, {s}) not orthogonal")
            })?;
        }
    }
    let note = if substituted > 0 {
        format!(", {substituted} NO requests at N = 8, d = 3 drawn unforced")
    } else {
        String::new()
    };
    Ok(format!(
        "worked example -> (2, 3); {OV_INSTANCES} random instances ({yes} YES, {} NO{note}), \
         both alphabets agree with brute force",
        OV_INSTANCES - yes
    ))
}

fn scaling() -> Check {
    let config = BenchConfig {
        execution: Execution::Sequential,
        ..Default::default()
    };
    let rows = run_bench(&config).map_err(|e| e.to_string())?;
    let points = averaged(&rows);
    for r in &rows {
        println!(
            "      n = {:>5}  p = {:>5}  m*p = {:>10}  square = {:>10}  total = {:>9.1} ms",
            r.n,
            r.p_hat,
            r.m_min * r.p_hat,
            r.square_states,
            r.total_ms
        );
    }
    let slope = loglog_slope(&points).ok_or("degenerate fit")?;
    let inv = inversions(&points);
    let detail = format!("slope {slope:.3} (accepted {:?}), {inv} inversion(s)", SLOPE_RANGE);
    if (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&slope) && inv <= MAX_INVERSIONS {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rank_oracle() -> Check {
    let mut pairs = 0usize;
    for seed in 0..INVARIANT_DFAS {
        let min = minimize(&small_dfa(seed + 30_000, 10, 3)).unwrap().automaton;
        let t = compute_rank_table(&min).map_err(|e| e.to_string())?;
        let elems: Vec<(StateId, Bound, EventuallyPeriodicString)> = (0..min.n() as StateId)
            .flat_map(|u| [Bound::Inf, Bound::Sup].map(|b| (u, b, t.extract(u, b))))
            .collect();
        for (u, bu, x) in &elems {
            for (v, bv, y) in &elems {
                let cmp = compare_eps(x, y);
                ensure(cmp == naive_compare(x, y, 256), || {
                    format!("seed {seed}: comparator disagrees with expansion")
                })?;
                let by_rank: Ordering = t.rank(*u, *bu).cmp(&t.rank(*v, *bv));
                ensure(by_rank == cmp, || {
                    format!("seed {seed}: ranks of {u}/{bu:?} and {v}/{bv:?}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{INVARIANT_DFAS} DFAs (n <= 10), {pairs} element pairs ordered as their strings"
    ))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 7] = [
        ("oracle equivalence", oracle_equivalence),
        ("known-language verdicts", known_languages),
        ("square size bounds", size_bounds),
        ("interval invariants", rank_invariants),
        ("OV reduction end to end", ov_end_to_end),
        ("scaling against m*p", scaling),
        ("rank table vs string comparison", rank_oracle),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {}. {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}. {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
