//! Independent oracles: a walk over the full diagram's edges that recomputes
//! descents and inversions from blocks, and exhaustive comparisons of the
//! closed forms against brute force.

use std::collections::BTreeMap;

use hookpath::eulerian::{eulerian_bruteforce, initial_closed_form};
use hookpath::fibonacci::{
    fib_bruteforce, fib_closed_form, fib_stages, interval_classes, printed_step_constants, StepSource,
};
use hookpath::hook::Block;
use hookpath::stats::sign_balance;
use hookpath::{BigInt, DescentRules, DiagramParams, IntPolynomial, VertexLabel};

#[derive(Default)]
struct Tally {
    des: Vec<u64>,
    signed: i64,
}

fn greater(a: &Block, b: &Block) -> bool {
    a.horiz > b.horiz && a.vert < b.vert
}

/// Walk every class-`k` path edge by edge up to `top`, tallying statistics per end vertex.
fn walk(d: &DiagramParams, k: u32, top: u32) -> BTreeMap<VertexLabel, Tally> {
    let (p, pk) = (d.p(), d.p().pow(k));
    let h = (p - 1) / 2;
    let mut out: BTreeMap<VertexLabel, Tally> = BTreeMap::new();
    for start in 0..pk * (p - 1) {
        let v0 = d.pre_vertex(2 * k + 1, start).unwrap();
        let first = start / pk < h;
        let mut stack: Vec<(VertexLabel, Vec<Block>)> = vec![(v0, Vec::new())];
        while let Some((v, blocks)) = stack.pop() {
            if !blocks.is_empty() {
                // blocks[i] sits at position i + 2
                let mut des = u64::from(first);
                let mut inv = u64::from(first);
                for i in 1..blocks.len() {
                    if i + 1 < blocks.len() && greater(&blocks[i], &blocks[i + 1]) {
                        des += 1;
                    }
                    inv += (i + 1..blocks.len())
                        .filter(|&j| greater(&blocks[i], &blocks[j]))
                        .count() as u64;
                }
                let t = out.entry(v).or_default();
                if t.des.len() <= des as usize {
                    t.des.resize(des as usize + 1, 0);
                }
                t.des[des as usize] += 1;
                t.signed += if inv % 2 == 0 { 1 } else { -1 };
            }
            if v.floor == top {
                continue;
            }
            for e in d.successors(&v).unwrap() {
                if e.upper.class_k == k as i32 {
                    let mut b = blocks.clone();
                    b.push(e.block);
                    stack.push((e.upper, b));
                }
            }
        }
    }
    out
}

#[test]
fn edge_walk_matches_compressed_paths() {
    for (p, extra) in [(3u64, 7u32), (5, 5)] {
        for k in 0..=2 {
            let top = 2 * k + extra;
            let d = DiagramParams::new(p, top).unwrap();
            let tallies = walk(&d, k, top);
            let expected: u64 = (2 * k + 2..=top).map(|f| d.subset_len(f, k as i32)).sum();
            assert_eq!(tallies.len() as u64, expected, "p={p} k={k}");
            for (v, t) in &tallies {
                let oracle = IntPolynomial::from_coeffs(t.des.iter().map(|&c| BigInt::from(c)).collect());
                assert_eq!(eulerian_bruteforce(v).unwrap(), oracle, "{v}");
                assert_eq!(sign_balance(v).unwrap(), BigInt::from(t.signed), "{v}");
            }
        }
    }
}

#[test]
fn closed_form_matches_bruteforce() {
    for p in [3u64, 5, 7] {
        for k in 0..=2u32 {
            let s_hi = if p == 7 { k + 3 } else { k + 4 };
            let d = DiagramParams::new(p, 2 * (k + s_hi)).unwrap();
            let s_lo = if k == 0 { 2 } else { 3 };
            for s in s_lo..=s_hi {
                for l in 0..p.pow(k) {
                    let brute = fib_bruteforce(&d.v_vertex(k, s, l).unwrap()).unwrap();
                    let cf = fib_closed_form(p, k, s, l).unwrap();
                    assert_eq!(cf.value, brute, "p={p} k={k} s={s} l={l} case {}", cf.case);
                }
            }
        }
    }
}

#[test]
fn closed_form_matches_recursion_beyond_bruteforce() {
    for p in [3u64, 5, 7] {
        for k in 0..=4u32 {
            let stages = fib_stages(p, k, 9, &StepSource::Rules(DescentRules::ADJUDICATED)).unwrap();
            let s_lo = if k == 0 { 2 } else { 3 };
            for s in s_lo..=9 {
                for l in 0..p.pow(k) {
                    let cf = fib_closed_form(p, k, s, l).unwrap();
                    assert_eq!(cf.value, stages[s as usize - 1][l as usize], "p={p} k={k} s={s} l={l}");
                }
            }
        }
    }
}

#[test]
fn printed_step_constants_exact_from_class_two() {
    for p in [3u64, 5, 7] {
        for k in 2..=3 {
            for l in 0..p.pow(k) {
                let printed = printed_step_constants(p, k, l).unwrap();
                let derived = hookpath::fibonacci::descent_weights(p, k, l, &DescentRules::ADJUDICATED).unwrap();
                assert_eq!(printed, derived, "p={p} k={k} l={l}");
            }
        }
    }
}

#[test]
fn printed_step_constants_off_in_class_one() {
    for p in [3u64, 5, 7] {
        let off = (0..p)
            .filter(|&l| {
                printed_step_constants(p, 1, l).unwrap()
                    != hookpath::fibonacci::descent_weights(p, 1, l, &DescentRules::ADJUDICATED).unwrap()
            })
            .count();
        assert!(off > 0, "p={p}");
    }
}

#[test]
fn tabulated_forms_match_on_stable_floors() {
    for p in [3u64, 5, 7] {
        for k in 1..=2u32 {
            let d = DiagramParams::new(p, 2 * k + 6).unwrap();
            for rel in [2, 3, 6] {
                let floor = 2 * k + rel;
                for l in 0..d.subset_len(floor, k as i32) {
                    let v = d.vertex(floor, k as i32, l).unwrap();
                    let tab = initial_closed_form(p, k, floor, l).unwrap();
                    assert_eq!(
                        tab.poly,
                        eulerian_bruteforce(&v).unwrap(),
                        "p={p} k={k} floor={floor} l={l}"
                    );
                }
            }
        }
    }
}

#[test]
fn tabulated_form_off_at_odd_floor_entry() {
    let d = DiagramParams::new(5, 7).unwrap();
    let v = d.w_vertex(1, 3, 19).unwrap();
    let brute = eulerian_bruteforce(&v).unwrap();
    let tab = initial_closed_form(5, 1, 7, 19).unwrap();
    assert_ne!(tab.poly, brute);
}

#[test]
fn class_counts_by_stage() {
    assert_eq!(interval_classes(3, 2, 3).unwrap().len(), 5);
    assert_eq!(interval_classes(3, 2, 4).unwrap().len(), 6);
    assert_eq!(interval_classes(5, 2, 3).unwrap().len(), 7);
    assert_eq!(interval_classes(5, 3, 4).unwrap().len(), 12);
    assert_eq!(interval_classes(5, 3, 5).unwrap().len(), 15);
}
