use proptest::prelude::*;

use hookpath::eulerian::{eulerian_bruteforce, eulerian_inductive, FloorPolynomials};
use hookpath::fibonacci::{fib_closed_form, fib_stages, StepSource};
use hookpath::genfun::{recurrence_check, series_coefficients, Series};
use hookpath::hook::{add_block, dominates, remove_block, split_base_p, Block, HookPartition};
use hookpath::paths::{count_paths, enumerate_paths, rewalk};
use hookpath::stats::{descent_set, predicted_descent_set, predicted_descents_general};
use hookpath::{BigInt, DescentRules, DiagramParams, Polynomial};

const ADJ: DescentRules = DescentRules::ADJUDICATED;

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(3u64), Just(5), Just(7)]
}

/// `(p, k, floor, l)` for a class vertex with at most a few thousand paths.
fn class_vertex() -> impl Strategy<Value = (u64, u32, u32, u64)> {
    (prime(), 0u32..=2)
        .prop_flat_map(|(p, k)| {
            let extra = if p == 3 { 6 } else { 4 };
            (Just(p), Just(k), 2 * k + 2..=2 * k + extra)
        })
        .prop_flat_map(|(p, k, floor)| {
            let n = if floor % 2 == 0 { p.pow(k) } else { p.pow(k + 1) };
            (Just(p), Just(k), Just(floor), 0..n)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn block_add_remove_round_trip(arm in 1u64..40, leg in 0u64..40, h in 0u64..20, v in 0u64..20) {
        let base = HookPartition::new(arm, leg).unwrap();
        let b = Block::new(h, v);
        let top = add_block(&base, &b).unwrap();
        prop_assert_eq!(top.size(), base.size() + b.size());
        prop_assert_eq!(remove_block(&top, &b).unwrap(), base);
    }

    #[test]
    fn dominance_is_antisymmetric(size in 1u64..60, i in 0u64..60, j in 0u64..60) {
        let (i, j) = (i % size, j % size);
        let a = HookPartition::from_size_index(size, i).unwrap();
        let b = HookPartition::from_size_index(size, j).unwrap();
        prop_assert!(dominates(&a, &a).unwrap());
        if dominates(&a, &b).unwrap() && dominates(&b, &a).unwrap() {
            prop_assert_eq!(a, b);
        }
        prop_assert_eq!(dominates(&a, &b).unwrap(), i <= j);
    }

    #[test]
    fn base_p_split_reconstructs(p in prime(), l in 0u64..100_000) {
        prop_assert_eq!(split_base_p(l, p).reconstruct(p), l);
    }

    #[test]
    fn path_counts_and_rewalks((p, k, floor, l) in class_vertex()) {
        let d = DiagramParams::new(p, floor).unwrap();
        let v = d.vertex(floor, k as i32, l).unwrap();
        let s = v.stage_s;
        let exponent = if floor % 2 == 0 { s - 1 } else { s - 2 };
        let mut n = 0u64;
        for path in enumerate_paths(&v) {
            prop_assert_eq!(rewalk(&path).unwrap(), v.hook());
            n += 1;
        }
        prop_assert_eq!(BigInt::from(n), count_paths(&v));
        prop_assert_eq!(n, (p - 1) * p.pow(exponent));
    }

    #[test]
    fn rule_predictions_equal_raw_descents((p, k, floor, l) in class_vertex()) {
        let d = DiagramParams::new(p, floor).unwrap();
        let v = d.vertex(floor, k as i32, l).unwrap();
        for path in enumerate_paths(&v) {
            prop_assert_eq!(predicted_descent_set(&path, &ADJ).unwrap(), descent_set(&path).unwrap());
        }
    }

    #[test]
    fn eulerian_polynomial_counts_paths((p, k, floor, l) in class_vertex()) {
        let d = DiagramParams::new(p, floor).unwrap();
        let v = d.vertex(floor, k as i32, l).unwrap();
        let f = eulerian_bruteforce(&v).unwrap();
        prop_assert!(f.is_nonnegative());
        prop_assert_eq!(f.eval(&BigInt::from(1)), count_paths(&v));
        let tables = eulerian_inductive(&d, k, floor, &ADJ).unwrap();
        let last = tables.last().unwrap();
        prop_assert_eq!(last.by_l.get(&l), Some(&f));
    }

    #[test]
    fn closed_form_matches_stage_recursion(p in prime(), k in 0u32..=3, s in 3u32..=8, l_seed in 0u64..1_000_000) {
        let l = l_seed % p.pow(k);
        let stages = fib_stages(p, k, s, &StepSource::Rules(ADJ)).unwrap();
        prop_assert_eq!(fib_closed_form(p, k, s, l).unwrap().value, stages[s as usize - 1][l as usize].clone());
    }

    #[test]
    fn recurrence_holds_with_derived_constant(p in prime(), k in 0u32..=3, l_seed in 0u64..1_000_000) {
        let l = l_seed % p.pow(k);
        for row in recurrence_check(p, k, l, k + 7, &ADJ).unwrap() {
            prop_assert!(row.pass_derived, "{:?}", row);
        }
    }

    #[test]
    fn rule_odd_position_monotone_in_t(p in prime(), k in 0u32..=3, l_seed in 0u64..1_000_000, beta in 0u64..7) {
        let l = l_seed % p.pow(k);
        let beta = beta % p;
        let odd: Vec<bool> = (0..p).map(|t| predicted_descents_general(p, k, l, beta, t, &ADJ).unwrap().0).collect();
        // descents at the odd position form an initial segment of t'
        prop_assert!(odd.windows(2).all(|w| w[0] || !w[1]));
    }

    #[test]
    fn geometric_series_generic(a in -9i64..=9, n in 1usize..12) {
        let f = Series::new(
            Polynomial::<i64>::from_coeffs(vec![1]),
            Polynomial::<i64>::from_coeffs(vec![1, -a]),
            1,
            1,
        )
        .unwrap();
        let c = series_coefficients(&f, n).unwrap();
        for (i, x) in c.iter().enumerate() {
            prop_assert_eq!(*x, a.pow(i as u32));
        }
    }

    #[test]
    fn polynomial_ring_laws(a in prop::collection::vec(-50i64..50, 0..6),
                            b in prop::collection::vec(-50i64..50, 0..6),
                            c in prop::collection::vec(-50i64..50, 0..6)) {
        let (a, b, c) = (Polynomial::from_coeffs(a), Polynomial::from_coeffs(b), Polynomial::from_coeffs(c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let x = 3i64;
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
    }

    #[test]
    fn floor_tables_survive_json((p, k) in (prime(), 0u32..=1)) {
        let floor = 2 * k + 5;
        let d = DiagramParams::new(p, floor).unwrap();
        for t in eulerian_inductive(&d, k, floor, &ADJ).unwrap() {
            let text = serde_json::to_string(&t).unwrap();
            let back: FloorPolynomials = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, t);
        }
    }
}
