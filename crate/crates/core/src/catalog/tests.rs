use proptest::prelude::*;

use super::*;
use crate::perm::Perm;

fn perms(gens: &[&str]) -> FiniteGroup {
    let p: Vec<Perm> = gens.iter().map(|s| Perm::parse(s, 0).unwrap()).collect();
    FiniteGroup::from_permutations(&p, 5040).unwrap()
}

fn d4() -> FiniteGroup {
    perms(&["(1 2 3 4)", "(1 3)"])
}

fn q8() -> FiniteGroup {
    perms(&["(1 2 4 7)(3 6 8 5)", "(1 3 4 8)(2 5 7 6)"])
}

fn spec(text: &str) -> FiniteGroup {
    build(&GroupSpec::parse(text).unwrap()).unwrap()
}

/// Coordinates on `Z/2 x Z/2` built by `abelian_table`, first factor least significant.
fn klein_coords(x: usize) -> (u64, u64) {
    ((x % 2) as u64, (x / 2) as u64)
}

fn klein_cocycle(f: impl Fn((u64, u64), (u64, u64)) -> u64) -> Vec<Vec<u64>> {
    (0..4)
        .map(|a| {
            (0..4)
                .map(|b| f(klein_coords(a), klein_coords(b)) % 2)
                .collect()
        })
        .collect()
}

#[test]
fn families_have_the_expected_orders_and_classes() {
    let d = spec("dihedral:4");
    assert_eq!((d.order(), d.nilpotency_class()), (8, Some(2)));
    assert!(are_isomorphic(&d, &d4()));
    assert!(are_isomorphic(&spec("dicyclic:2"), &q8()));
    let t = spec("cyclic:1");
    assert_eq!((t.order(), t.nilpotency_class()), (1, Some(0)));
    assert_eq!(spec("symmetric:4").order(), 24);
    assert_eq!(spec("alternating:5").order(), 60);
    assert!(spec("alternating:3").is_abelian());
    let h = spec("heisenberg:3");
    assert_eq!((h.order(), h.exponent(), h.center().order()), (27, 3, 3));
    let m27 = spec("extraspecial:3:-");
    assert_eq!(
        (m27.order(), m27.exponent(), m27.center().order()),
        (27, 9, 3)
    );
    for sign in ["+", "-"] {
        let e = spec(&format!("extraspecial:2:{sign}:2"));
        assert_eq!(
            (e.order(), e.center().order(), e.derived_subgroup().order()),
            (32, 2, 2)
        );
    }
    // The two order-32 extraspecial groups differ in their number of involutions.
    let involutions = |g: &FiniteGroup| g.elements().filter(|&x| g.element_order(x) == 2).count();
    assert_eq!(involutions(&spec("extraspecial:2:+:2")), 19);
    assert_eq!(involutions(&spec("extraspecial:2:-:2")), 11);
}

#[test]
fn metacyclic_groups_are_enumerated() {
    let g = spec("metacyclic:5:4:2");
    assert_eq!(g.order(), 20);
    assert_eq!(g.center().order(), 1);
    assert!(matches!(
        build(&GroupSpec::Metacyclic { m: 7, n: 2, r: 2 }),
        Err(Error::InvalidSpec(_))
    ));
    assert!(matches!(
        build(&GroupSpec::Metacyclic { m: 6, n: 2, r: 3 }),
        Err(Error::InvalidSpec(_))
    ));
    assert!(are_isomorphic(&spec("metacyclic:4:2:3"), &d4()));
}

#[test]
fn invalid_specs_and_caps() {
    assert!(matches!(
        build(&GroupSpec::Cyclic { n: 0 }),
        Err(Error::InvalidSpec(_))
    ));
    assert!(matches!(
        build(&GroupSpec::Heisenberg { p: 4 }),
        Err(Error::InvalidSpec(_))
    ));
    assert!(matches!(
        build(&GroupSpec::Symmetric { n: 8 }),
        Err(Error::CapExceeded { .. })
    ));
    assert!(matches!(
        build(&GroupSpec::Symmetric { n: 40 }),
        Err(Error::CapExceeded { .. })
    ));
    assert!(matches!(
        build_with_cap(&GroupSpec::Dihedral { n: 10 }, 16),
        Err(Error::CapExceeded { .. })
    ));
}

#[test]
fn composite_kinds() {
    let g = spec("symmetric:3*cyclic:2");
    assert!(are_isomorphic(&g, &spec("dihedral:6")));
    let dih = build(&GroupSpec::Semidirect {
        normal: Box::new(GroupSpec::Cyclic { n: 5 }),
        complement: Box::new(GroupSpec::Cyclic { n: 2 }),
        action: ActionSpec::Inversion,
    })
    .unwrap();
    assert!(are_isomorphic(&dih, &spec("dihedral:5")));
    let frobenius = build(&GroupSpec::Semidirect {
        normal: Box::new(GroupSpec::Cyclic { n: 5 }),
        complement: Box::new(GroupSpec::Cyclic { n: 4 }),
        action: ActionSpec::Power { k: 2 },
    })
    .unwrap();
    assert!(are_isomorphic(&frobenius, &spec("metacyclic:5:4:2")));
    // Element 1 of Z/2 swaps 1 and 2 in Z/3: S3.
    let s3 = build(&GroupSpec::Semidirect {
        normal: Box::new(GroupSpec::Cyclic { n: 3 }),
        complement: Box::new(GroupSpec::Cyclic { n: 2 }),
        action: ActionSpec::Images {
            generators: vec![1],
            images: vec![vec![0, 2, 1]],
        },
    })
    .unwrap();
    assert!(are_isomorphic(&s3, &spec("symmetric:3")));
    let bad = GroupSpec::Semidirect {
        normal: Box::new(GroupSpec::Cyclic { n: 3 }),
        complement: Box::new(GroupSpec::Cyclic { n: 3 }),
        action: ActionSpec::Images {
            generators: vec![1],
            images: vec![vec![0, 2, 1]],
        },
    };
    assert!(matches!(build(&bad), Err(Error::InvalidAction(_))));
    let a4 = spec("presentation:gens: a,b; rels: a^2, b^3, (ab)^3");
    assert!(are_isomorphic(&a4, &spec("alternating:4")));
    assert!(are_isomorphic(
        &spec("permutation:(1 2 3);(1 2)"),
        &spec("symmetric:3")
    ));
}

#[test]
fn central_extensions_of_small_groups() {
    let z2 = FiniteGroup::abelian_table(&[2]).unwrap();
    let z4 = central_extension(&z2, 2, &[vec![0, 0], vec![0, 1]]).unwrap();
    assert!(are_isomorphic(
        &z4,
        &FiniteGroup::abelian_table(&[4]).unwrap()
    ));
    let split = central_extension(&z2, 2, &[vec![0, 0], vec![0, 0]]).unwrap();
    assert!(are_isomorphic(
        &split,
        &FiniteGroup::abelian_table(&[2, 2]).unwrap()
    ));

    let klein = FiniteGroup::abelian_table(&[2, 2]).unwrap();
    let d = central_extension(&klein, 2, &klein_cocycle(|x, y| x.0 * y.1)).unwrap();
    let q = central_extension(
        &klein,
        2,
        &klein_cocycle(|x, y| x.0 * y.0 + x.0 * y.1 + x.1 * y.1),
    )
    .unwrap();
    // Distinguished by (order, exponent, class, involutions) and confirmed by table search.
    let involutions = |g: &FiniteGroup| g.elements().filter(|&x| g.element_order(x) == 2).count();
    assert_eq!(
        (
            d.order(),
            d.exponent(),
            d.nilpotency_class(),
            involutions(&d)
        ),
        (8, 4, Some(2), 5)
    );
    assert_eq!(
        (
            q.order(),
            q.exponent(),
            q.nilpotency_class(),
            involutions(&q)
        ),
        (8, 4, Some(2), 1)
    );
    assert!(are_isomorphic(&d, &d4()));
    assert!(are_isomorphic(&q, &q8()));
}

#[test]
fn bad_cocycles_are_rejected() {
    let z2 = FiniteGroup::abelian_table(&[2]).unwrap();
    let z3 = FiniteGroup::abelian_table(&[3]).unwrap();
    assert!(matches!(
        central_extension(&z2, 2, &[vec![1, 0], vec![0, 0]]),
        Err(Error::NotACocycle(_))
    ));
    // f(1, 1) = 1, f(1, 2) = 0, f(2, 1) = 0: fails at (1, 1, 2).
    assert!(matches!(
        central_extension(&z3, 3, &[vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]),
        Err(Error::NotACocycle(_))
    ));
    assert!(matches!(
        central_extension(&z2, 2, &[vec![0, 0], vec![0, 2]]),
        Err(Error::NotACocycle(_))
    ));
    assert!(matches!(
        central_extension(&z2, 2, &[vec![0, 0]]),
        Err(Error::NotACocycle(_))
    ));
}

#[test]
fn build_is_deterministic() {
    for text in [
        "dihedral:6",
        "metacyclic:7:3:2",
        "extraspecial:2:-:2",
        "symmetric:4",
    ] {
        let a = spec(text);
        let b = spec(text);
        assert_eq!(a.table().unwrap(), b.table().unwrap(), "{text}");
        assert_eq!(a.labels(), b.labels());
    }
}

/// Number of groups of order n for n = 1..=15.
const GROUP_COUNTS: [usize; 15] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1];

#[test]
fn small_corpus_entries() {
    assert_eq!(standard_corpus(1), vec![GroupSpec::trivial()]);
    let corpus = corpus_groups(8);
    let eight: Vec<&FiniteGroup> = corpus
        .iter()
        .filter(|(_, g)| g.order() == 8)
        .map(|(_, g)| g)
        .collect();
    assert_eq!(eight.len(), 5);
    let reference = [
        FiniteGroup::abelian_table(&[8]).unwrap(),
        FiniteGroup::abelian_table(&[2, 4]).unwrap(),
        FiniteGroup::abelian_table(&[2, 2, 2]).unwrap(),
        d4(),
        q8(),
    ];
    for r in &reference {
        assert_eq!(eight.iter().filter(|g| are_isomorphic(g, r)).count(), 1);
    }
}

#[test]
fn corpus_is_complete_and_duplicate_free_to_order_sixteen() {
    let corpus = corpus_groups(16);
    for (i, (sa, a)) in corpus.iter().enumerate() {
        for (sb, b) in &corpus[..i] {
            assert!(!are_isomorphic(a, b), "{sa} and {sb} are isomorphic");
        }
    }
    for n in 1..=15 {
        let count = corpus.iter().filter(|(_, g)| g.order() == n).count();
        assert_eq!(count, GROUP_COUNTS[n - 1], "order {n}");
    }
    assert!(corpus.windows(2).all(|w| w[0].1.order() <= w[1].1.order()));
}

#[test]
fn full_corpus_covers_the_required_families() {
    let corpus = corpus_groups(64);
    let specs: Vec<&GroupSpec> = corpus.iter().map(|(s, _)| s).collect();
    assert!(corpus.iter().all(|(_, g)| g.order() <= 64));
    for required in [
        GroupSpec::Symmetric { n: 3 },
        GroupSpec::Symmetric { n: 4 },
        GroupSpec::Alternating { n: 4 },
        GroupSpec::Heisenberg { p: 3 },
        GroupSpec::Extraspecial {
            p: 2,
            sign: Sign::Plus,
            rank: 2,
        },
        GroupSpec::Extraspecial {
            p: 2,
            sign: Sign::Minus,
            rank: 2,
        },
        GroupSpec::Dihedral { n: 32 },
        GroupSpec::Dicyclic { n: 16 },
        GroupSpec::Abelian {
            factors: vec![2, 2, 2, 2, 2, 2],
        },
        GroupSpec::Cyclic { n: 64 },
    ] {
        assert!(specs.contains(&&required), "{required}");
    }
    let extensions: Vec<_> = corpus
        .iter()
        .filter(|(s, _)| matches!(s, GroupSpec::CentralExt { .. }))
        .collect();
    assert!(extensions
        .iter()
        .any(|(s, _)| matches!(s, GroupSpec::CentralExt { center: 2, .. })));
    assert!(extensions
        .iter()
        .any(|(s, _)| matches!(s, GroupSpec::CentralExt { center: 3, .. })));
    // Every extension has a central kernel with quotient the base.
    for (s, g) in extensions {
        let GroupSpec::CentralExt { base, center, .. } = s else {
            unreachable!()
        };
        let base = build(base).unwrap();
        let c = *center as usize;
        let kernel = g.subgroup_generated([(base.identity() as usize * c + 1) as Elem]);
        assert_eq!(kernel.order(), c);
        assert!(g.is_central(&kernel));
        let (q, projection) = g.quotient(&kernel).unwrap();
        assert!(are_isomorphic(&q, &base), "{s}");
        // Index g * c + k projects to the base element g.
        for x in g.elements() {
            assert_eq!(
                projection[x as usize],
                projection[(x as usize / c * c) as usize]
            );
        }
    }
}

#[test]
fn metacyclic_detection() {
    assert!(is_metacyclic(&spec("dihedral:7")));
    assert!(is_metacyclic(&spec("abelian:2:4")));
    assert!(is_metacyclic(&FiniteGroup::trivial()));
    assert!(!is_metacyclic(&spec("abelian:2:2:2")));
    assert!(!is_metacyclic(&spec("alternating:4")));
    assert!(!is_metacyclic(&spec("heisenberg:3")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn metacyclic_order_is_m_times_n(m in 2u64..24, n in 1u64..8, r in 1u64..24) {
        let r = r % m;
        prop_assume!(gcd(r, m) == 1 && pow_mod(r, n, m) == 1);
        let g = build(&GroupSpec::Metacyclic { m, n, r }).unwrap();
        prop_assert_eq!(g.order() as u64, m * n);
    }

    #[test]
    fn spec_json_round_trips(m in 2u64..30, n in 1u64..6, k in 1u64..40) {
        for s in [
            GroupSpec::Metacyclic { m, n, r: 1 },
            GroupSpec::Dihedral { n: k },
            GroupSpec::Abelian { factors: vec![m, n, k] },
        ] {
            prop_assert_eq!(&GroupSpec::parse(&s.to_json()).unwrap(), &s);
            prop_assert_eq!(&GroupSpec::parse(&s.to_string()).unwrap(), &s);
        }
    }
}

#[test]
fn metacyclic_needs_a_cyclic_quotient() {
    // Exponent equals order for S3, D5 and D7 although none is cyclic.
    for (text, want) in [
        ("symmetric:3", true),
        ("dihedral:5", true),
        ("abelian:3:3", true),
        ("alternating:4", false),
        ("abelian:2:2:2", false),
    ] {
        assert_eq!(
            is_metacyclic(&build(&GroupSpec::parse(text).unwrap()).unwrap()),
            want,
            "{text}"
        );
    }
    let generalized_dihedral = GroupSpec::Semidirect {
        normal: Box::new(GroupSpec::Abelian {
            factors: vec![3, 3],
        }),
        complement: Box::new(GroupSpec::Cyclic { n: 2 }),
        action: ActionSpec::Inversion,
    };
    assert!(!is_metacyclic(&build(&generalized_dihedral).unwrap()));
}
