//! Actions by automorphisms, compatible pairs, semidirect products and crossed modules.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, DEFAULT_GROUP_CAP};
use crate::subgroup::BitSet;

/// Default cap on each factor of a pair handled with dense action tables.
pub const DEFAULT_PAIR_CAP: usize = 64;

/// A left action of `actor` on `space` by automorphisms, as a dense table.
#[derive(Clone, PartialEq, Eq)]
pub struct AutAction {
    actor_order: usize,
    space_order: usize,
    /// `table[a * space_order + x] = a . x`.
    table: Vec<Elem>,
}

impl std::fmt::Debug for AutAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AutAction({} on {})", self.actor_order, self.space_order)
    }
}

impl AutAction {
    /// Validates that every row is an automorphism and that `a.(b.x) = (ab).x`.
    pub fn new(actor: &FiniteGroup, space: &FiniteGroup, table: Vec<Elem>) -> Result<Self> {
        let (na, ns) = (actor.order(), space.order());
        if table.len() != na * ns {
            return Err(Error::InvalidAction(format!(
                "table has {} entries, expected {}",
                table.len(),
                na * ns
            )));
        }
        if table.iter().any(|&y| y as usize >= ns) {
            return Err(Error::InvalidAction("image outside the space".into()));
        }
        let act = |a: Elem, x: Elem| table[a as usize * ns + x as usize];
        for a in actor.elements() {
            let mut seen = BitSet::new(ns);
            for x in space.elements() {
                if !seen.insert(act(a, x)) {
                    return Err(Error::InvalidAction(format!(
                        "{} does not act bijectively",
                        actor.label(a)
                    )));
                }
            }
            for x in space.elements() {
                for &y in space.generating_set() {
                    if act(a, space.mul(x, y)) != space.mul(act(a, x), act(a, y)) {
                        return Err(Error::InvalidAction(format!(
                            "{} does not act by a homomorphism",
                            actor.label(a)
                        )));
                    }
                }
            }
        }
        for x in space.elements() {
            if act(actor.identity(), x) != x {
                return Err(Error::InvalidAction("identity acts nontrivially".into()));
            }
        }
        for a in actor.elements() {
            for &b in actor.generating_set() {
                let ab = actor.mul(a, b);
                for x in space.elements() {
                    if act(ab, x) != act(a, act(b, x)) {
                        return Err(Error::InvalidAction(format!(
                            "({} {}) . x differs from {} . ({} . x)",
                            actor.label(a),
                            actor.label(b),
                            actor.label(a),
                            actor.label(b)
                        )));
                    }
                }
            }
        }
        Ok(AutAction {
            actor_order: na,
            space_order: ns,
            table,
        })
    }

    pub fn from_fn(
        actor: &FiniteGroup,
        space: &FiniteGroup,
        f: impl Fn(Elem, Elem) -> Elem,
    ) -> Result<Self> {
        let table = actor
            .elements()
            .flat_map(|a| space.elements().map(move |x| (a, x)))
            .map(|(a, x)| f(a, x))
            .collect();
        Self::new(actor, space, table)
    }

    pub fn trivial(actor: &FiniteGroup, space: &FiniteGroup) -> Self {
        AutAction {
            actor_order: actor.order(),
            space_order: space.order(),
            table: (0..actor.order()).flat_map(|_| space.elements()).collect(),
        }
    }

    /// `g . x = g x g^-1`.
    pub fn conjugation(g: &FiniteGroup) -> Self {
        AutAction {
            actor_order: g.order(),
            space_order: g.order(),
            table: g
                .elements()
                .flat_map(|a| g.elements().map(move |x| g.conj(a, x)))
                .collect(),
        }
    }

    /// Elements outside the unique index-2 subgroup of `actor` act by inversion on the
    /// abelian group `space`.
    pub fn inversion(actor: &FiniteGroup, space: &FiniteGroup) -> Result<Self> {
        if !space.is_abelian() {
            return Err(Error::InvalidAction(
                "inversion needs an abelian space".into(),
            ));
        }
        // G^2 is the intersection of all index-2 subgroups; its index is 2 iff there is one.
        let squares = actor.normal_closure(actor.elements().map(|x| actor.mul(x, x)));
        if squares.order() * 2 != actor.order() {
            return Err(Error::InvalidAction(
                "inversion needs an actor with exactly one subgroup of index 2".into(),
            ));
        }
        Self::from_fn(actor, space, |a, x| {
            if squares.contains(a) {
                x
            } else {
                space.inv(x)
            }
        })
    }

    #[inline]
    pub fn act(&self, a: Elem, x: Elem) -> Elem {
        self.table[a as usize * self.space_order + x as usize]
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.actor_order).all(|a| {
            (0..self.space_order).all(|x| self.table[a * self.space_order + x] as usize == x)
        })
    }

    pub fn actor_order(&self) -> usize {
        self.actor_order
    }

    pub fn space_order(&self) -> usize {
        self.space_order
    }
}

/// Groups `G`, `H` with `G` acting on `H` (`alpha`) and `H` on `G` (`beta`).
#[derive(Clone, Debug)]
pub struct CompatiblePair {
    g: FiniteGroup,
    h: FiniteGroup,
    alpha: AutAction,
    beta: AutAction,
    verified: bool,
    conjugation: bool,
}

impl CompatiblePair {
    pub fn g(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    /// `G` acting on `H`.
    pub fn alpha(&self) -> &AutAction {
        &self.alpha
    }

    /// `H` acting on `G`.
    pub fn beta(&self) -> &AutAction {
        &self.beta
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// True for `G = H` with both actions conjugation.
    pub fn is_conjugation_pair(&self) -> bool {
        self.conjugation
    }

    /// The same pair with the roles of `G` and `H` exchanged.
    pub fn swapped(&self) -> CompatiblePair {
        CompatiblePair {
            g: self.h.clone(),
            h: self.g.clone(),
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            verified: self.verified,
            conjugation: self.conjugation,
        }
    }
}

/// Which identity failed, and at which triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `^(^h g) h' != h(g(h^-1 . h'))` at `(h, g, h')`.
    ActionOnH { h: Elem, g: Elem, h_prime: Elem },
    /// `^(^g h) g' != g(h(g^-1 . g'))` at `(g, h, g')`.
    ActionOnG { g: Elem, h: Elem, g_prime: Elem },
}

pub enum Compatibility {
    Compatible(CompatiblePair),
    Incompatible(Vec<Violation>),
}

impl Compatibility {
    pub fn into_pair(self) -> Option<CompatiblePair> {
        match self {
            Compatibility::Compatible(p) => Some(p),
            Compatibility::Incompatible(_) => None,
        }
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            Compatibility::Compatible(_) => &[],
            Compatibility::Incompatible(v) => v,
        }
    }
}

/// Checks both interchange identities for all triples and reports every violation.
///
/// Fails with `InvalidAction` if the tables do not describe actions of the right shape.
pub fn check_compatibility(
    g: &FiniteGroup,
    h: &FiniteGroup,
    alpha: AutAction,
    beta: AutAction,
) -> Result<Compatibility> {
    check_compatibility_with_cap(g, h, alpha, beta, DEFAULT_PAIR_CAP)
}

pub fn check_compatibility_with_cap(
    g: &FiniteGroup,
    h: &FiniteGroup,
    alpha: AutAction,
    beta: AutAction,
    cap: usize,
) -> Result<Compatibility> {
    for (what, n) in [
        ("pair factor order", g.order()),
        ("pair factor order", h.order()),
    ] {
        if n > cap {
            return Err(Error::cap(what, n, cap));
        }
    }
    if (alpha.actor_order, alpha.space_order) != (g.order(), h.order())
        || (beta.actor_order, beta.space_order) != (h.order(), g.order())
    {
        return Err(Error::InvalidAction(
            "action tables do not match the groups".into(),
        ));
    }
    // Re-validate; a table built elsewhere may not be an action.
    let alpha = AutAction::new(g, h, alpha.table)?;
    let beta = AutAction::new(h, g, beta.table)?;
    let mut violations: Vec<Violation> = h
        .elements()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|&y| {
            let (alpha, beta) = (&alpha, &beta);
            let yi = h.inv(y);
            g.elements().flat_map(move |x| {
                let yx = beta.act(y, x);
                h.elements().filter_map(move |y2| {
                    let lhs = alpha.act(yx, y2);
                    let rhs = h.conj(y, alpha.act(x, h.mul(yi, h.mul(y2, y))));
                    (lhs != rhs).then_some(Violation::ActionOnH {
                        h: y,
                        g: x,
                        h_prime: y2,
                    })
                })
            })
        })
        .collect();
    violations.extend(
        g.elements()
            .collect::<Vec<_>>()
            .par_iter()
            .flat_map_iter(|&x| {
                let (alpha, beta) = (&alpha, &beta);
                let xi = g.inv(x);
                h.elements().flat_map(move |y| {
                    let xy = alpha.act(x, y);
                    g.elements().filter_map(move |x2| {
                        let lhs = beta.act(xy, x2);
                        let rhs = g.conj(x, beta.act(y, g.mul(xi, g.mul(x2, x))));
                        (lhs != rhs).then_some(Violation::ActionOnG {
                            g: x,
                            h: y,
                            g_prime: x2,
                        })
                    })
                })
            })
            .collect::<Vec<_>>(),
    );
    if !violations.is_empty() {
        return Ok(Compatibility::Incompatible(violations));
    }
    let conjugation = g.order() == h.order()
        && g.table().is_some()
        && g.table() == h.table()
        && alpha == AutAction::conjugation(g)
        && beta == alpha;
    Ok(Compatibility::Compatible(CompatiblePair {
        g: g.clone(),
        h: h.clone(),
        alpha,
        beta,
        verified: true,
        conjugation,
    }))
}

/// `G = H` acting on each other by conjugation; compatible by construction.
pub fn conjugation_pair(g: &FiniteGroup) -> CompatiblePair {
    let act = AutAction::conjugation(g);
    CompatiblePair {
        g: g.clone(),
        h: g.clone(),
        alpha: act.clone(),
        beta: act,
        verified: true,
        conjugation: true,
    }
}

/// Both actions trivial; always compatible.
pub fn trivial_pair(g: &FiniteGroup, h: &FiniteGroup) -> CompatiblePair {
    CompatiblePair {
        g: g.clone(),
        h: h.clone(),
        alpha: AutAction::trivial(g, h),
        beta: AutAction::trivial(h, g),
        verified: true,
        conjugation: false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `G x| H`, with `H` acting through `beta`.
    GByH,
    /// `H x| G`, with `G` acting through `alpha`.
    HByG,
}

pub struct Semidirect {
    pub group: FiniteGroup,
    /// Embedding of the normal factor.
    pub normal: Vec<Elem>,
    /// Embedding of the acting factor.
    pub complement: Vec<Elem>,
}

impl CompatiblePair {
    pub fn semidirect_product(&self, side: Side) -> Result<Semidirect> {
        match side {
            Side::GByH => semidirect(&self.g, &self.h, &self.beta),
            Side::HByG => semidirect(&self.h, &self.g, &self.alpha),
        }
    }
}

/// `N x| Q` on pairs `(n, q)` with `(n, q)(n', q') = (n q.n', q q')`, indexed `q |N| + n`.
pub fn semidirect(n: &FiniteGroup, q: &FiniteGroup, action: &AutAction) -> Result<Semidirect> {
    let (nn, nq) = (n.order(), q.order());
    if (action.actor_order, action.space_order) != (nq, nn) {
        return Err(Error::InvalidAction(
            "action table does not match the groups".into(),
        ));
    }
    let order = nn * nq;
    if order > DEFAULT_GROUP_CAP {
        return Err(Error::cap(
            "semidirect product order",
            order,
            DEFAULT_GROUP_CAP,
        ));
    }
    let idx = |x: usize, y: usize| (y * nn + x) as Elem;
    let mut table = vec![0 as Elem; order * order];
    for a in 0..order {
        let (x1, y1) = (a % nn, a / nn);
        for b in 0..order {
            let (x2, y2) = (b % nn, b / nn);
            let x = n.mul(x1 as Elem, action.act(y1 as Elem, x2 as Elem));
            let y = q.mul(y1 as Elem, y2 as Elem);
            table[a * order + b] = idx(x as usize, y as usize);
        }
    }
    let labels = (0..order)
        .map(|a| {
            format!(
                "({},{})",
                n.label((a % nn) as Elem),
                q.label((a / nn) as Elem)
            )
        })
        .collect();
    let group = FiniteGroup::from_table(order, table, Some(labels))?;
    let normal = n
        .elements()
        .map(|x| idx(x as usize, q.identity() as usize))
        .collect();
    let complement = q
        .elements()
        .map(|y| idx(n.identity() as usize, y as usize))
        .collect();
    Ok(Semidirect {
        group,
        normal,
        complement,
    })
}

/// How `B` acts on `A` in a crossed module.
#[derive(Clone)]
pub enum ModuleAction {
    Dense(AutAction),
    /// Automorphism tables of `A` for a generating set of `B`.
    OnGenerators {
        generators: Vec<Elem>,
        automorphisms: Vec<Vec<Elem>>,
    },
}

/// A boundary map `A -> B` with `B` acting on `A`.
#[derive(Clone)]
pub struct CrossedModule<'a> {
    pub a: &'a FiniteGroup,
    pub b: &'a FiniteGroup,
    pub boundary: Vec<Elem>,
    pub action: ModuleAction,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CrossedModuleReport {
    pub violations: Vec<String>,
    /// False when only generator pairs were checked (which suffices; see `verify_crossed_module`).
    pub exhaustive: bool,
    pub kernel_central: bool,
    pub image_normal: bool,
    pub kernel_order: usize,
    pub image_order: usize,
}

impl CrossedModuleReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.kernel_central && self.image_normal
    }
}

/// Largest `|A|^2` and `|A| |B|` for which every pair is checked.
pub const EXHAUSTIVE_CROSSED_MODULE_CAP: usize = 1 << 24;

impl<'a> CrossedModule<'a> {
    fn acts_by(&self, b: Elem) -> Box<dyn Fn(Elem) -> Elem + '_> {
        match &self.action {
            ModuleAction::Dense(t) => Box::new(move |x| t.act(b, x)),
            ModuleAction::OnGenerators {
                generators,
                automorphisms,
            } => {
                let k = generators.iter().position(|&g| g == b).expect("generator");
                let table = &automorphisms[k];
                Box::new(move |x| table[x as usize])
            }
        }
    }

    fn actor_elements(&self) -> Vec<Elem> {
        match &self.action {
            ModuleAction::Dense(_) => self.b.elements().collect(),
            ModuleAction::OnGenerators { generators, .. } => generators.clone(),
        }
    }
}

/// Checks equivariance `d(b.a) = b d(a) b^-1` and the Peiffer identity
/// `d(a).a' = a a' a^-1`, then that the kernel is central and the image normal.
///
/// Both identities compare homomorphisms in each argument, so checking them on
/// generating sets is equivalent to the full check; every pair is checked when the
/// groups are small enough.
pub fn verify_crossed_module(cm: &CrossedModule) -> CrossedModuleReport {
    let (a, b) = (cm.a, cm.b);
    let mut report = CrossedModuleReport::default();
    if cm.boundary.len() != a.order() {
        report
            .violations
            .push("boundary has the wrong length".into());
        return report;
    }
    let d = |x: Elem| cm.boundary[x as usize];
    let dense = matches!(cm.action, ModuleAction::Dense(_));
    let exhaustive = dense
        && a.order().saturating_mul(a.order()) <= EXHAUSTIVE_CROSSED_MODULE_CAP
        && a.order().saturating_mul(b.order()) <= EXHAUSTIVE_CROSSED_MODULE_CAP;
    report.exhaustive = exhaustive;
    let a_range: Vec<Elem> = if exhaustive {
        a.elements().collect()
    } else {
        a.generating_set().to_vec()
    };
    let actors = if exhaustive {
        b.elements().collect()
    } else {
        match &cm.action {
            ModuleAction::Dense(_) => b.generating_set().to_vec(),
            ModuleAction::OnGenerators { .. } => cm.actor_elements(),
        }
    };
    const MAX_REPORTED: usize = 20;
    // Boundary is a homomorphism.
    for &x in &a_range {
        for &y in a.generating_set() {
            if d(a.mul(x, y)) != b.mul(d(x), d(y)) && report.violations.len() < MAX_REPORTED {
                report.violations.push(format!(
                    "boundary is not multiplicative at ({}, {})",
                    a.label(x),
                    a.label(y)
                ));
            }
        }
    }
    for &y in &actors {
        let act = cm.acts_by(y);
        for &x in &a_range {
            if d(act(x)) != b.conj(y, d(x)) && report.violations.len() < MAX_REPORTED {
                report.violations.push(format!(
                    "equivariance fails for b = {}, a = {}",
                    b.label(y),
                    a.label(x)
                ));
            }
        }
    }
    // Peiffer: the action of d(x) must be available; with generator tables it is
    // composed along a word for d(x).
    let words = match &cm.action {
        ModuleAction::Dense(_) => None,
        ModuleAction::OnGenerators { generators, .. } => Some(b.words_over(generators)),
    };
    for &x in &a_range {
        let dx = d(x);
        let image = |y: Elem| -> Elem {
            match (&cm.action, &words) {
                (ModuleAction::Dense(t), _) => t.act(dx, y),
                (ModuleAction::OnGenerators { automorphisms, .. }, Some(Ok(words))) => {
                    // b = s_1 ... s_k acts as s_1(s_2(... s_k(y))).
                    words[dx as usize]
                        .iter()
                        .rev()
                        .fold(y, |acc, &s| automorphisms[s as usize][acc as usize])
                }
                _ => u32::MAX,
            }
        };
        for &y in &a_range {
            if image(y) != a.conj(x, y) && report.violations.len() < MAX_REPORTED {
                report.violations.push(format!(
                    "Peiffer identity fails for a = {}, a' = {}",
                    a.label(x),
                    a.label(y)
                ));
            }
        }
    }
    let kernel: Vec<Elem> = a.elements().filter(|&x| d(x) == b.identity()).collect();
    report.kernel_order = kernel.len();
    report.kernel_central = kernel.iter().all(|&k| {
        a.generating_set()
            .iter()
            .all(|&s| a.mul(k, s) == a.mul(s, k))
    });
    let image = b.subgroup_generated(a.generating_set().iter().map(|&x| d(x)));
    report.image_order = image.order();
    report.image_normal = b.is_normal(&image);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn perm_group(gens: &[&str]) -> FiniteGroup {
        let gens: Vec<Perm> = gens.iter().map(|s| Perm::parse(s, 0).unwrap()).collect();
        FiniteGroup::from_permutations(&gens, 5040).unwrap()
    }

    fn s3() -> FiniteGroup {
        perm_group(&["(1 2 3)", "(1 2)"])
    }

    #[test]
    fn conjugation_and_trivial_pairs_are_compatible() {
        let g = s3();
        let c = AutAction::conjugation(&g);
        let out = check_compatibility(&g, &g, c.clone(), c).unwrap();
        let pair = out.into_pair().unwrap();
        assert!(pair.is_conjugation_pair() && pair.is_verified());
        let z4 = FiniteGroup::abelian_table(&[4]).unwrap();
        let out = check_compatibility(
            &g,
            &z4,
            AutAction::trivial(&g, &z4),
            AutAction::trivial(&z4, &g),
        )
        .unwrap();
        assert!(out.violations().is_empty());
    }

    #[test]
    fn conjugation_by_a_transposition_with_trivial_back_action_fails() {
        let h = s3();
        let z2 = FiniteGroup::abelian_table(&[2]).unwrap();
        let t = h.elements().find(|&x| h.label(x) == "(1 2)").unwrap();
        let alpha =
            AutAction::from_fn(&z2, &h, |a, x| if a == 0 { x } else { h.conj(t, x) }).unwrap();
        let beta = AutAction::trivial(&h, &z2);
        let out = check_compatibility(&z2, &h, alpha.clone(), beta.clone()).unwrap();
        assert!(!out.violations().is_empty());
        // Swapping the roles finds the same failures.
        let swapped = check_compatibility(&h, &z2, beta, alpha).unwrap();
        assert_eq!(swapped.violations().len(), out.violations().len());
    }

    #[test]
    fn invalid_tables_are_rejected() {
        let z2 = FiniteGroup::abelian_table(&[2]).unwrap();
        let z3 = FiniteGroup::abelian_table(&[3]).unwrap();
        // x -> x + 1 is not a homomorphism.
        assert!(matches!(
            AutAction::from_fn(&z2, &z3, |a, x| if a == 0 { x } else { (x + 1) % 3 }),
            Err(Error::InvalidAction(_))
        ));
        // Z/3 cannot act on Z/3 by inversion: that is not a homomorphism from Z/3.
        assert!(AutAction::inversion(&z3, &z3).is_err());
    }

    #[test]
    fn semidirect_products() {
        let z3 = FiniteGroup::abelian_table(&[3]).unwrap();
        let z2 = FiniteGroup::abelian_table(&[2]).unwrap();
        let inv = AutAction::inversion(&z2, &z3).unwrap();
        let sd = semidirect(&z3, &z2, &inv).unwrap();
        assert_eq!(sd.group.order(), 6);
        assert!(!sd.group.is_abelian());
        let z4 = FiniteGroup::abelian_table(&[4]).unwrap();
        let d4 = semidirect(&z4, &z2, &AutAction::inversion(&z2, &z4).unwrap()).unwrap();
        assert_eq!(d4.group.order(), 8);
        assert_eq!(d4.group.nilpotency_class(), Some(2));
        assert_eq!(d4.group.center().order(), 2);
        let pair = trivial_pair(&z3, &z2);
        let direct = pair.semidirect_product(Side::GByH).unwrap();
        assert_eq!(direct.group.order(), 6);
        assert!(direct.group.is_abelian());
    }

    #[test]
    fn textbook_crossed_modules() {
        let g = s3();
        let identity = CrossedModule {
            a: &g,
            b: &g,
            boundary: g.elements().collect(),
            action: ModuleAction::Dense(AutAction::conjugation(&g)),
        };
        let r = verify_crossed_module(&identity);
        assert!(r.ok() && r.exhaustive, "{r:?}");
        // Inclusion of A3 into S3.
        let a3 = g.derived_subgroup();
        let (n, emb) = {
            let members = a3.members().to_vec();
            let k = members.len();
            let index = |x: Elem| members.binary_search(&x).unwrap() as Elem;
            let mut table = vec![0; k * k];
            for i in 0..k {
                for j in 0..k {
                    table[i * k + j] = index(g.mul(members[i], members[j]));
                }
            }
            (FiniteGroup::from_table(k, table, None).unwrap(), members)
        };
        let action = AutAction::from_fn(&g, &n, |b, x| {
            let y = g.conj(b, emb[x as usize]);
            emb.binary_search(&y).unwrap() as Elem
        })
        .unwrap();
        let inclusion = CrossedModule {
            a: &n,
            b: &g,
            boundary: emb.clone(),
            action: ModuleAction::Dense(action),
        };
        let r = verify_crossed_module(&inclusion);
        assert!(r.ok(), "{r:?}");
        assert_eq!((r.kernel_order, r.image_order), (1, 3));
        // A trivial action makes the Peiffer identity fail for a nonabelian A.
        let broken = CrossedModule {
            a: &g,
            b: &g,
            boundary: g.elements().collect(),
            action: ModuleAction::Dense(AutAction::trivial(&g, &g)),
        };
        assert!(!verify_crossed_module(&broken).ok());
    }
}
