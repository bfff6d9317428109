//! Property tests over random corpus members, random abelian groups and random presentations.

use std::collections::HashSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use tensorcat::abelian::{quotient_invariants, subgroup_invariants, AbelianInvariants};
use tensorcat::action::{check_compatibility, conjugation_pair, AutAction};
use tensorcat::catalog::{corpus_groups, GroupSpec};
use tensorcat::fp::{enumerate, presentation_of, Limits, Presentation, Strategy as Enumeration};
use tensorcat::group::FiniteGroup;
use tensorcat::tensor::{
    abelian_exterior, abelian_tensor, m0_and_bogomolov, nabla_consistency, schur_multiplier,
    tensor_square, Caps,
};
use tensorcat::verify::run_suite_on;

fn corpus() -> &'static [(GroupSpec, FiniteGroup)] {
    static CORPUS: OnceLock<Vec<(GroupSpec, FiniteGroup)>> = OnceLock::new();
    CORPUS.get_or_init(|| corpus_groups(24))
}

fn member(max: usize) -> impl Strategy<Value = &'static (GroupSpec, FiniteGroup)> {
    let small: Vec<_> = corpus().iter().filter(|(_, g)| g.order() <= max).collect();
    prop::sample::select(small)
}

/// Orders of cyclic factors, in any order, with product at most 32.
fn abelian_factors() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(2u64..=6, 1..=3)
        .prop_filter("order at most 32", |f| f.iter().product::<u64>() <= 32)
}

/// `|S[q]|`, the number of elements killed by `q`, for `S` with the given invariants.
fn torsion_count(inv: &AbelianInvariants, q: u64) -> u64 {
    inv.factors().iter().map(|&d| gcd(d, q)).product()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prime_powers_up_to(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in 2..=n {
        if (2..p).all(|d| p % d != 0) {
            let mut q = p;
            while q <= n {
                out.push(q);
                q *= p;
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn tables_are_latin_and_associative((_, g) in member(24)) {
        for x in g.elements() {
            let row: HashSet<_> = g.elements().map(|y| g.mul(x, y)).collect();
            let col: HashSet<_> = g.elements().map(|y| g.mul(y, x)).collect();
            prop_assert_eq!(row.len(), g.order());
            prop_assert_eq!(col.len(), g.order());
            for y in g.elements() {
                for z in g.elements() {
                    prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn quotients_by_normal_closures((_, g) in member(24), seed in 0usize..64) {
        let x = (seed % g.order()) as u32;
        let n = g.normal_closure([x]);
        let (q, projection) = g.quotient(&n).unwrap();
        prop_assert_eq!(q.order() * n.order(), g.order());
        let image: HashSet<_> = projection.iter().copied().collect();
        prop_assert_eq!(image.len(), q.order());
        for a in g.elements() {
            for b in g.elements() {
                prop_assert_eq!(projection[g.mul(a, b) as usize], q.mul(projection[a as usize], projection[b as usize]));
            }
        }
    }

    #[test]
    fn class_and_solvability_flags((_, g) in member(24)) {
        if let Some(c) = g.nilpotency_class() {
            let series = g.lower_central_series();
            prop_assert!(series[c].order() == 1);
            if c > 0 {
                prop_assert!(series[c - 1].order() > 1);
            }
            prop_assert!(g.is_supersolvable());
        }
        if g.is_supersolvable() {
            prop_assert!(g.is_solvable());
        }
        let inv = g.abelianization_invariants().unwrap();
        prop_assert!(inv.factors().windows(2).all(|w| w[1] % w[0] == 0));
        prop_assert_eq!(inv.order() as usize * g.derived_subgroup().order(), g.order());
    }

    #[test]
    fn subgroup_invariants_match_enumeration(
        moduli in prop::collection::vec(2u64..=8, 1..=3),
        vectors in prop::collection::vec(prop::collection::vec(0u64..8, 3), 0..=3),
    ) {
        let vectors: Vec<Vec<u64>> = vectors
            .iter()
            .map(|v| v.iter().zip(&moduli).map(|(&c, &m)| c % m).collect())
            .collect();
        let add = |a: &[u64], b: &[u64]| -> Vec<u64> {
            a.iter().zip(b).zip(&moduli).map(|((&x, &y), &m)| (x + y) % m).collect()
        };
        let mut span: HashSet<Vec<u64>> = HashSet::from([vec![0; moduli.len()]]);
        let mut frontier: Vec<Vec<u64>> = span.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for v in &vectors {
                let y = add(&x, v);
                if span.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let sub = subgroup_invariants(&moduli, &vectors).unwrap();
        prop_assert_eq!(sub.order() as usize, span.len());
        let exponent = moduli.iter().product::<u64>();
        for q in prime_powers_up_to(exponent) {
            let killed = span
                .iter()
                .filter(|x| x.iter().zip(&moduli).all(|(&c, &m)| (c * q) % m == 0))
                .count() as u64;
            prop_assert_eq!(torsion_count(&sub, q), killed, "q = {}", q);
        }
        let quotient = quotient_invariants(&moduli, &vectors).unwrap();
        prop_assert_eq!(quotient.order() * span.len() as u128, moduli.iter().product::<u64>() as u128);
    }

    #[test]
    fn strategies_agree_on_random_abelian_presentations(
        k in 1u32..=6,
        l in 1u32..=6,
        extra in prop::collection::vec(prop::sample::select(vec![1i32, -1, 2, -2]), 0..=8),
    ) {
        let power = |x: i32, n: u32| std::iter::repeat(x).take(n as usize);
        let relators = vec![
            tensorcat::fp::Word::new(power(1, k)),
            tensorcat::fp::Word::new(power(2, l)),
            tensorcat::fp::Word::new([1, 2, -1, -2]),
            tensorcat::fp::Word::new(extra),
        ];
        let p = Presentation::new(vec!["a".into(), "b".into()], relators).unwrap();
        let hlt = enumerate(&p, Enumeration::Hlt, &Limits::default()).unwrap().live_count();
        let felsch = enumerate(&p, Enumeration::Felsch, &Limits::default()).unwrap().live_count();
        prop_assert_eq!(hlt, felsch);
        prop_assert!(hlt as u32 <= k * l);
    }

    #[test]
    fn cayley_presentations_round_trip((_, g) in member(16)) {
        let p = presentation_of(g);
        for strategy in [Enumeration::Hlt, Enumeration::Felsch] {
            prop_assert_eq!(enumerate(&p, strategy, &Limits::default()).unwrap().live_count(), g.order());
        }
    }

    #[test]
    fn compatibility_is_symmetric_under_swapping(
        (_, g) in member(12),
        (_, h) in member(12),
        alpha_kind in 0usize..2,
        beta_kind in 0usize..2,
    ) {
        let action = |kind: usize, actor: &FiniteGroup, space: &FiniteGroup| match kind {
            0 => Some(AutAction::trivial(actor, space)),
            _ => AutAction::inversion(actor, space).ok(),
        };
        if let (Some(a), Some(b)) = (action(alpha_kind, g, h), action(beta_kind, h, g)) {
            let forward = check_compatibility(g, h, a.clone(), b.clone()).unwrap();
            let backward = check_compatibility(h, g, b, a).unwrap();
            prop_assert_eq!(forward.into_pair().is_some(), backward.into_pair().is_some());
        }
    }

    #[test]
    fn conjugation_pairs_pass_the_exhaustive_check((_, g) in member(16)) {
        let a = AutAction::conjugation(g);
        prop_assert!(check_compatibility(g, g, a.clone(), a).unwrap().into_pair().is_some());
    }

    #[test]
    fn abelian_squares_match_closed_forms(factors in abelian_factors()) {
        let g = FiniteGroup::abelian_table(&factors).unwrap();
        let inv = AbelianInvariants::from_cyclic_orders(&factors);
        let caps = Caps::default();
        let t = tensor_square(&g, &caps).unwrap();
        prop_assert_eq!(t.kernel_invariants().unwrap(), abelian_tensor(&inv, &inv));
        prop_assert_eq!(schur_multiplier(&g, &caps).unwrap(), abelian_exterior(&inv));
    }

    #[test]
    fn commutators_act_like_symbols((_, g) in member(16)) {
        let t = tensor_square(g, &Caps::default()).unwrap();
        prop_assert!(t.conjugation_identity_violations(1).is_empty());
        let pair = conjugation_pair(g);
        prop_assert!(pair.is_conjugation_pair());
    }

    #[test]
    fn multiplier_divisibilities((_, g) in member(16)) {
        let caps = Caps::default();
        let r = m0_and_bogomolov(g, &caps).unwrap();
        prop_assert_eq!(r.schur.order() % r.bogomolov.order(), 0);
        prop_assert_eq!(r.bogomolov.order() * r.m0_order, r.schur.order());
        let n = nabla_consistency(g, &caps).unwrap();
        prop_assert!(n.divides_gamma && n.orders_multiply);
    }
}

#[test]
fn suite_reports_ignore_thread_count() {
    let entries: Vec<_> = corpus()
        .iter()
        .filter(|(_, g)| g.order() <= 12)
        .cloned()
        .collect();
    for suite in ["gamma-nabla", "metacyclic-M"] {
        let one = run_suite_on(suite, &entries, &Caps::default(), 1).unwrap();
        let four = run_suite_on(suite, &entries, &Caps::default(), 4).unwrap();
        assert_eq!(one.json_lines(false), four.json_lines(false), "{suite}");
    }
}
