use super::*;
use crate::action::{check_compatibility, trivial_pair};
use crate::perm::Perm;

fn perm_group(gens: &[&str]) -> FiniteGroup {
    let gens: Vec<Perm> = gens.iter().map(|s| Perm::parse(s, 0).unwrap()).collect();
    FiniteGroup::from_permutations(&gens, 5040).unwrap()
}

fn s3() -> FiniteGroup {
    perm_group(&["(1 2 3)", "(1 2)"])
}

fn d4() -> FiniteGroup {
    perm_group(&["(1 2 3 4)", "(1 3)"])
}

fn q8() -> FiniteGroup {
    perm_group(&["(1 2 4 7)(3 6 8 5)", "(1 3 4 8)(2 5 7 6)"])
}

fn a4() -> FiniteGroup {
    perm_group(&["(1 2 3)", "(1 2)(3 4)"])
}

fn cyclic(n: u64) -> FiniteGroup {
    FiniteGroup::abelian_table(&[n]).unwrap()
}

fn with_route(route: RoutePolicy) -> Caps {
    Caps {
        route,
        ..Caps::default()
    }
}

fn inv(factors: &[u64]) -> AbelianInvariants {
    AbelianInvariants::from_cyclic_orders(factors)
}

#[test]
fn presentation_counts() {
    let caps = Caps::default();
    let p = tensor_presentation(&conjugation_pair(&cyclic(2)), &caps).unwrap();
    assert_eq!((p.generator_count(), p.relators().len()), (4, 16));
    let p = tensor_presentation(&conjugation_pair(&s3()), &caps).unwrap();
    assert_eq!((p.generator_count(), p.relators().len()), (36, 432));
    let t = FiniteGroup::trivial();
    let p = tensor_presentation(&conjugation_pair(&t), &caps).unwrap();
    assert_eq!(p.generator_count(), 1);
    assert_eq!(tensor_square(&t, &caps).unwrap().order(), 1);
    let p = exterior_presentation(&s3(), &caps).unwrap();
    assert_eq!(p.relators().len(), 432 + 6);
}

#[test]
fn generator_cap_is_enforced() {
    let caps = Caps {
        max_generators: 35,
        ..Caps::default()
    };
    let err = tensor_presentation(&conjugation_pair(&s3()), &caps).unwrap_err();
    assert!(matches!(err, Error::CapExceeded { .. }));
}

#[test]
fn cyclic_squares_match_the_classical_tensor_product() {
    for n in 1..=12 {
        for route in [RoutePolicy::Kernel, RoutePolicy::Hlt, RoutePolicy::Felsch] {
            let ts = tensor_square(&cyclic(n), &with_route(route)).unwrap();
            assert_eq!(ts.order() as u64, n, "Z/{n} via {route:?}");
            assert!(ts.is_abelian());
        }
    }
    let k4 = FiniteGroup::abelian_table(&[2, 2]).unwrap();
    let ts = tensor_square(&k4, &Caps::default()).unwrap();
    assert_eq!(ts.order(), 16);
    assert_eq!(ts.group().exponent(), 2);
}

#[test]
fn abelian_formulas_on_small_cases() {
    assert_eq!(abelian_tensor(&inv(&[4]), &inv(&[6])), inv(&[2]));
    assert_eq!(
        abelian_tensor(&inv(&[2, 2]), &inv(&[2, 2])),
        inv(&[2, 2, 2, 2])
    );
    assert_eq!(abelian_exterior(&inv(&[5])), inv(&[]));
    assert_eq!(abelian_exterior(&inv(&[2, 4])), inv(&[2]));
}

#[test]
fn exterior_squares() {
    let caps = Caps::default();
    let w = exterior_square(&cyclic(6), &caps).unwrap();
    assert_eq!(w.wedge.order(), 1);
    assert_eq!(w.nabla_kernel.order(), 6);
    let w = exterior_square(&FiniteGroup::abelian_table(&[2, 2]).unwrap(), &caps).unwrap();
    assert_eq!(w.wedge.order(), 2);
    let w = exterior_square(&s3(), &caps).unwrap();
    assert_eq!(w.wedge.order(), 3);
    assert_eq!(w.square.order(), 6);
    assert_eq!(w.square.order(), w.nabla_kernel.order() * w.wedge.order());
    assert!(w.wedge.is_exterior());
}

#[test]
fn exterior_needs_a_conjugation_pair() {
    let z2 = cyclic(2);
    let pair = trivial_pair(&z2, &z2);
    let err = build(&pair, true, &Caps::default().started()).unwrap_err();
    assert!(matches!(err, Error::InvalidInput(_)));
}

#[test]
fn schur_multipliers() {
    let caps = Caps::default();
    assert!(schur_multiplier(&s3(), &caps).unwrap().is_trivial());
    assert!(schur_multiplier(&q8(), &caps).unwrap().is_trivial());
    assert_eq!(schur_multiplier(&d4(), &caps).unwrap(), inv(&[2]));
    assert_eq!(schur_multiplier(&a4(), &caps).unwrap(), inv(&[2]));
    let z22 = FiniteGroup::abelian_table(&[2, 2]).unwrap();
    assert_eq!(schur_multiplier(&z22, &caps).unwrap(), inv(&[2]));
}

#[test]
fn routes_agree_on_nonabelian_squares() {
    for g in [s3(), d4(), q8(), a4()] {
        let k = tensor_square(&g, &with_route(RoutePolicy::Kernel)).unwrap();
        let h = tensor_square(&g, &with_route(RoutePolicy::Hlt)).unwrap();
        let f = tensor_square(&g, &with_route(RoutePolicy::Felsch)).unwrap();
        assert_eq!(k.order(), h.order());
        assert_eq!(k.order(), f.order());
        assert_eq!(
            k.kernel_invariants().unwrap(),
            h.kernel_invariants().unwrap()
        );
        assert_eq!(k.nilpotency_class(), h.nilpotency_class());
        assert_eq!(k.derived_length(), h.derived_length());
        assert!(k.kernel_is_central() && h.kernel_is_central());
        assert_eq!(k.route(), Route::Kernel);
        assert_eq!(h.route(), Route::Enumeration(Strategy::Hlt));
    }
    let orders: Vec<usize> = [s3(), d4(), q8(), a4()]
        .iter()
        .map(|g| tensor_square(g, &Caps::default()).unwrap().order())
        .collect();
    assert_eq!(orders, vec![6, 32, 64, 24]);
}

#[test]
fn phi_is_a_homomorphism_onto_the_derivative() {
    for g in [s3(), d4(), a4()] {
        let ts = tensor_square(&g, &Caps::default()).unwrap();
        let phi = ts.phi_homomorphism().unwrap();
        assert_eq!(phi.image().members(), g.derived_subgroup().members());
        assert_eq!(ts.derivative().members(), g.derived_subgroup().members());
    }
}

#[test]
fn derivative_under_inversion() {
    let z2 = cyclic(2);
    let z4 = cyclic(4);
    let alpha = AutAction::inversion(&z2, &z4).unwrap();
    let pair = check_compatibility(&z2, &z4, alpha, AutAction::trivial(&z4, &z2))
        .unwrap()
        .into_pair()
        .unwrap();
    let d = derivative_subgroup(&pair, Factor::H);
    assert_eq!(d.members(), &[0, 2]);
    assert!(derivative_subgroup(&pair, Factor::G).is_trivial());
    // Routes agree on a pair with a nontrivial, non-conjugation action.
    let k = tensor_product(&pair, &with_route(RoutePolicy::Kernel)).unwrap();
    let h = tensor_product(&pair, &with_route(RoutePolicy::Hlt)).unwrap();
    assert_eq!(k.order(), h.order());
}

#[test]
fn trivial_actions_give_the_abelianized_tensor_product() {
    let pair = trivial_pair(&s3(), &cyclic(4));
    let ts = tensor_product(&pair, &Caps::default()).unwrap();
    // S3^ab (x) Z/4 = Z/2 (x) Z/4.
    assert_eq!(ts.order(), 2);
    assert!(ts.derivative().is_trivial());
}

#[test]
fn kappa_and_j_for_s3() {
    let ts = tensor_square(&s3(), &Caps::default()).unwrap();
    let kj = kappa_and_j(&ts).unwrap();
    assert!(kj.image_is_derived_subgroup);
    assert!(kj.j_central);
    assert_eq!(kj.j.order(), ts.order() / 3);
    let ts = tensor_square(&d4(), &Caps::default()).unwrap();
    let kj = kappa_and_j(&ts).unwrap();
    assert_eq!(kj.j.order(), 16);
    assert!(kj.j_central);
}

#[test]
fn kappa_needs_a_conjugation_pair() {
    let ts = tensor_product(&trivial_pair(&s3(), &cyclic(2)), &Caps::default()).unwrap();
    assert!(matches!(kappa_and_j(&ts), Err(Error::InvalidInput(_))));
}

#[test]
fn phi_gives_crossed_modules() {
    for g in [s3(), d4()] {
        let ts = tensor_square(&g, &Caps::default()).unwrap();
        let (_, report) = phi_crossed_module(&ts).unwrap();
        assert!(report.ok(), "{:?}", report.violations);
        assert!(report.exhaustive);
        assert!(report.kernel_central);
    }
}

#[test]
fn conjugation_by_a_symbol_is_the_commutator_action() {
    let ts = tensor_square(&d4(), &Caps::default()).unwrap();
    assert!(ts.conjugation_identity_violations(1).is_empty());
}

/// `|Gamma(Z/n)|` by search: `Gamma(Z/n)` is cyclic on `gamma(1)`, and `k -> k^2 c` is a
/// quadratic map on `Z/n` into `Z/m` exactly when it is well defined, i.e. when
/// `(k + n)^2 c = k^2 c` for every `k`. The largest such `m` is the order.
fn gamma_cyclic_oracle(n: u64) -> u64 {
    let mut best = 1;
    for m in 1..=4 * n {
        let ok = (0..n).all(|k| ((2 * k * n + n * n) % m) == 0);
        if ok {
            best = best.max(m);
        }
    }
    best
}

#[test]
fn gamma_on_cyclic_groups() {
    for n in 1..=12u64 {
        let expect = gamma_cyclic_oracle(n);
        assert_eq!(
            gamma_whitehead(&inv(&[n])).order(),
            expect as u128,
            "n = {n}"
        );
    }
    assert_eq!(gamma_whitehead(&inv(&[2])), inv(&[4]));
    assert_eq!(gamma_whitehead(&inv(&[3])), inv(&[3]));
    assert_eq!(gamma_whitehead(&inv(&[])), inv(&[]));
}

#[test]
fn nabla_reports() {
    let caps = Caps::default();
    let r = nabla_consistency(&cyclic(2), &caps).unwrap();
    assert_eq!(r.nabla_order, 2);
    assert_eq!(r.gamma.order(), 4);
    assert!(r.divides_gamma && r.orders_multiply);
    for g in [s3(), d4(), q8(), a4()] {
        let r = nabla_consistency(&g, &caps).unwrap();
        assert!(r.divides_gamma && r.orders_multiply);
    }
    let r = nabla_consistency(&FiniteGroup::trivial(), &caps).unwrap();
    assert_eq!((r.nabla_order, r.gamma.order()), (1, 1));
}

#[test]
fn bogomolov_multipliers_of_small_groups() {
    let caps = Caps::default();
    for g in [
        s3(),
        d4(),
        q8(),
        a4(),
        FiniteGroup::abelian_table(&[2, 4]).unwrap(),
    ] {
        let r = m0_and_bogomolov(&g, &caps).unwrap();
        assert!(r.bogomolov.is_trivial());
        assert_eq!(r.m0_order, r.schur.order());
    }
    let r = m0_and_bogomolov(&d4(), &caps).unwrap();
    assert_eq!(r.square_order, 32);
    assert_eq!(r.wedge_order, 4);
    assert_eq!(r.derived_order, 2);
}

#[test]
fn metacyclic_witnesses() {
    let caps = Caps::default();
    let r = metacyclic_m(&d4(), &caps).unwrap();
    assert_eq!(r.schur_order, 2);
    assert_eq!(r.n_order, 4);
    assert!(r.witness.is_some());
    let r = metacyclic_m(&cyclic(6), &caps).unwrap();
    assert_eq!(r.schur_order, 1);
    assert!(r.witness.is_some());
    assert!(matches!(
        metacyclic_m(&a4(), &caps),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn rewriting_over_the_generator_list() {
    let ts = tensor_square(&d4(), &Caps::default()).unwrap();
    let g = d4();
    let x = g.generating_set().to_vec();
    let (gens, w) = rewrite_over_generator_list(&ts, ts.gen(x[0], x[1])).unwrap();
    assert_eq!(w.len(), 1);
    assert_eq!(
        gens[w[0].0],
        ListGenerator::XY {
            i: 0,
            a: 1,
            j: 1,
            b: 1
        }
    );
    let (_, w) = rewrite_over_generator_list(&ts, ts.group().identity()).unwrap();
    assert!(w.is_empty());
    let mut list = GeneratorList::new(&ts).unwrap();
    for p in 0..list.generators().len() {
        for i in 0..x.len() {
            list.conjugate_by_x(i, p).unwrap();
            list.conjugate_by_y(i, p).unwrap();
        }
    }
    for e in ts.group().elements() {
        let w = list.rewrite(e).unwrap();
        assert_eq!(list.evaluate(&w), e);
    }
}

#[test]
fn rewriting_a_product_with_nontrivial_actions() {
    let ts = tensor_square(&s3(), &Caps::default()).unwrap();
    let mut list = GeneratorList::new(&ts).unwrap();
    let (dg, dh) = list.derivative_pairs();
    assert!(!dg.is_empty() && !dh.is_empty());
    for e in ts.group().elements() {
        let w = list.rewrite(e).unwrap();
        assert_eq!(list.evaluate(&w), e);
    }
}

#[test]
fn structural_queries_on_large_central_extensions() {
    // Untabulated results must answer as the tabulated ones do.
    let small = Caps {
        max_tabulated_order: 1,
        route: RoutePolicy::Kernel,
        ..Caps::default()
    };
    for g in [
        s3(),
        d4(),
        q8(),
        a4(),
        FiniteGroup::abelian_table(&[2, 2]).unwrap(),
    ] {
        let dense = tensor_square(&g, &with_route(RoutePolicy::Kernel)).unwrap();
        let sparse = tensor_square(&g, &small).unwrap();
        assert!(!sparse.group().is_tabulated() || sparse.order() == 1);
        assert_eq!(dense.order(), sparse.order());
        assert_eq!(dense.is_abelian(), sparse.is_abelian());
        assert_eq!(dense.nilpotency_class(), sparse.nilpotency_class());
        assert_eq!(dense.derived_length(), sparse.derived_length());
        assert_eq!(dense.is_supersolvable(), sparse.is_supersolvable());
    }
}

#[test]
fn caps_round_trip_through_json() {
    let caps: Caps = serde_json::from_str(r#"{"max_pair_order": 32, "route": "felsch"}"#).unwrap();
    assert_eq!(caps.max_pair_order, 32);
    assert_eq!(caps.route, RoutePolicy::Felsch);
    assert!(serde_json::from_str::<Caps>(r#"{"nonsense": 1}"#).is_err());
    let too_big = Caps {
        max_pair_order: 1 << 20,
        ..Caps::default()
    };
    assert!(too_big.validate().is_err());
}
