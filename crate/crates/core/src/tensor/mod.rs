//! Non-abelian tensor products `G (x) H`, exterior squares `G ^ G` and the maps out of them.
//!
//! Two routes compute the same group. The enumeration route runs coset enumeration on the
//! full presentation. The kernel route (see `kernel`) builds the group as an extension of
//! `D_H(G)` by the central kernel of `phi`, which needs only linear algebra over the
//! integers and scales to groups far too large to enumerate.

mod kernel;
mod multiplier;
mod rewrite;

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::abelian::AbelianInvariants;
use crate::action::{
    conjugation_pair, verify_crossed_module, AutAction, CompatiblePair, CrossedModule,
    CrossedModuleReport, ModuleAction,
};
use crate::error::{Error, Result};
use crate::fp::{self, Limits, Presentation, Strategy, Word};
use crate::group::{Elem, FiniteGroup, Validation};
use crate::hom::{extend_on_generators, Homomorphism};
use crate::subgroup::{BitSet, Closure, Subgroup};

pub use multiplier::{
    abelian_exterior, abelian_tensor, gamma_whitehead, m0_and_bogomolov, metacyclic_m,
    nabla_consistency, schur_multiplier, MetacyclicMReport, MultiplierReport, NablaReport,
};
pub use rewrite::{rewrite_over_generator_list, GeneratorList, ListGenerator, ListWord};

use kernel::{KernelRoute, RouteLimits};

#[cfg(test)]
mod tests;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoutePolicy {
    /// Kernel route, cross-checked by enumeration when that is cheap.
    #[default]
    Auto,
    Kernel,
    Hlt,
    Felsch,
}

/// Size and time limits. Every field can be overridden from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Largest group built by the catalog.
    pub max_group_order: usize,
    /// Largest factor of a tensor product, square or wedge.
    pub max_pair_order: usize,
    /// Largest number of presentation generators `|G| |H|`.
    pub max_generators: usize,
    pub max_cosets: usize,
    pub max_time_secs: u64,
    /// Results up to this order get a dense multiplication table.
    pub max_tabulated_order: usize,
    /// Largest `|D| |G| |H|` handled by the kernel route.
    pub max_schreier: usize,
    /// The automatic route re-enumerates when `|T|` times the relator count is at most this.
    pub auto_crosscheck_work: usize,
    pub route: RoutePolicy,
    /// Seed for sampled associativity checks.
    pub seed: u64,
    /// Absolute deadline shared by every computation using these caps.
    #[serde(skip)]
    pub deadline: Option<Instant>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_group_order: crate::group::DEFAULT_GROUP_CAP,
            max_pair_order: 64,
            max_generators: 4096,
            max_cosets: fp::DEFAULT_MAX_COSETS,
            max_time_secs: fp::DEFAULT_MAX_TIME.as_secs(),
            max_tabulated_order: 2048,
            // The reducer holds a row per Schreier generator; 2^19 fits in a few GB.
            max_schreier: 1 << 19,
            auto_crosscheck_work: 4_000_000,
            route: RoutePolicy::Auto,
            seed: 0,
            deadline: None,
        }
    }
}

impl Caps {
    /// Upper bounds no override may exceed.
    pub fn hard_limits() -> Caps {
        Caps {
            max_group_order: 40_320,
            max_pair_order: 5040,
            max_generators: 1 << 16,
            max_cosets: 1 << 26,
            max_time_secs: 24 * 3600,
            max_tabulated_order: 8192,
            max_schreier: 1 << 28,
            auto_crosscheck_work: 1 << 32,
            route: RoutePolicy::Auto,
            seed: u64::MAX,
            deadline: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let hard = Caps::hard_limits();
        let checks = [
            (
                "max_group_order",
                self.max_group_order,
                hard.max_group_order,
            ),
            ("max_pair_order", self.max_pair_order, hard.max_pair_order),
            ("max_generators", self.max_generators, hard.max_generators),
            ("max_cosets", self.max_cosets, hard.max_cosets),
            (
                "max_time_secs",
                self.max_time_secs as usize,
                hard.max_time_secs as usize,
            ),
            (
                "max_tabulated_order",
                self.max_tabulated_order,
                hard.max_tabulated_order,
            ),
            ("max_schreier", self.max_schreier, hard.max_schreier),
            (
                "auto_crosscheck_work",
                self.auto_crosscheck_work,
                hard.auto_crosscheck_work,
            ),
        ];
        for (what, value, cap) in checks {
            if value > cap {
                return Err(Error::cap(what, value, cap));
            }
        }
        Ok(())
    }

    /// A copy whose deadline is `max_time_secs` from now unless one is already set.
    pub fn started(&self) -> Caps {
        let mut c = self.clone();
        if c.deadline.is_none() {
            c.deadline = Some(Instant::now() + Duration::from_secs(c.max_time_secs));
        }
        c
    }

    fn limits(&self) -> Limits {
        Limits {
            max_cosets: self.max_cosets,
            max_time: Duration::from_secs(self.max_time_secs),
            deadline: self.deadline,
            ..Limits::default()
        }
    }

    fn route_limits(&self) -> RouteLimits {
        RouteLimits {
            deadline: self.deadline,
            max_schreier: self.max_schreier,
        }
    }

    fn validation(&self) -> Validation {
        Validation {
            seed: self.seed,
            ..Validation::default()
        }
    }

    fn check_pair(&self, pair: &CompatiblePair) -> Result<()> {
        for n in [pair.g().order(), pair.h().order()] {
            if n > self.max_pair_order {
                return Err(Error::cap("tensor factor order", n, self.max_pair_order));
            }
        }
        let n = pair.g().order() * pair.h().order();
        if n > self.max_generators {
            return Err(Error::cap(
                "tensor presentation generators",
                n,
                self.max_generators,
            ));
        }
        Ok(())
    }
}

/// Symbol index of `t(g, h)`.
#[inline]
fn symbol(pair: &CompatiblePair, g: Elem, h: Elem) -> usize {
    g as usize * pair.h().order() + h as usize
}

/// Calls `f` on every defining relator as letters (`k + 1` is symbol `k`, negatives inverse):
/// `t(gg', h)^-1 t(g.g', g.h) t(g, h)`, then `t(g, hh')^-1 t(g, h) t(h.g, h.h')`, then
/// `t(g, g)` when `exterior`.
pub(crate) fn for_each_relator(
    pair: &CompatiblePair,
    exterior: bool,
    mut f: impl FnMut(&[i32]) -> Result<()>,
) -> Result<()> {
    let (g, h) = (pair.g(), pair.h());
    let (alpha, beta) = (pair.alpha(), pair.beta());
    let sym = |a: Elem, b: Elem| symbol(pair, a, b) as i32 + 1;
    for a in g.elements() {
        for a2 in g.elements() {
            let (aa2, ca2) = (g.mul(a, a2), g.conj(a, a2));
            for b in h.elements() {
                f(&[-sym(aa2, b), sym(ca2, alpha.act(a, b)), sym(a, b)])?;
            }
        }
    }
    for a in g.elements() {
        for b in h.elements() {
            let ba = beta.act(b, a);
            for b2 in h.elements() {
                f(&[-sym(a, h.mul(b, b2)), sym(a, b), sym(ba, h.conj(b, b2))])?;
            }
        }
    }
    if exterior {
        for a in g.elements() {
            f(&[sym(a, a)])?;
        }
    }
    Ok(())
}

pub fn relator_count(pair: &CompatiblePair, exterior: bool) -> usize {
    let (m, n) = (pair.g().order(), pair.h().order());
    m * m * n + m * n * n + if exterior { m } else { 0 }
}

fn presentation(pair: &CompatiblePair, exterior: bool, caps: &Caps) -> Result<Presentation> {
    caps.check_pair(pair)?;
    let (g, h) = (pair.g(), pair.h());
    let names = g
        .elements()
        .flat_map(|a| h.elements().map(move |b| format!("t{a}_{b}")))
        .collect();
    let mut relators = Vec::with_capacity(relator_count(pair, exterior));
    for_each_relator(pair, exterior, |letters| {
        relators.push(Word::new(letters.iter().copied()));
        Ok(())
    })?;
    Presentation::new(names, relators)
}

/// One generator per pair `(g, h)` and every defining relator, trivial ones included.
pub fn tensor_presentation(pair: &CompatiblePair, caps: &Caps) -> Result<Presentation> {
    presentation(pair, false, caps)
}

/// The tensor-square presentation with the relators `t(g, g)` added.
pub fn exterior_presentation(g: &FiniteGroup, caps: &Caps) -> Result<Presentation> {
    presentation(&conjugation_pair(g), true, caps)
}

/// Order of `G (x) H` (or `G ^ G`) by coset enumeration with the given strategy.
pub fn enumerate_order(
    pair: &CompatiblePair,
    exterior: bool,
    strategy: Strategy,
    caps: &Caps,
) -> Result<usize> {
    let caps = caps.started();
    let p = presentation(pair, exterior, &caps)?;
    Ok(fp::enumerate(&p, strategy, &caps.limits())?.live_count())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Kernel,
    Enumeration(Strategy),
}

#[derive(Clone)]
enum Structure {
    /// Element `x` is `(a, d)` with `d = x / fiber`, standing for `a t(d)`.
    Kernel {
        top: FiniteGroup,
        top_members: Vec<Elem>,
        fiber: u64,
        moduli: Vec<u64>,
        central: bool,
    },
    Enumerated {
        phi: Vec<Elem>,
    },
}

/// `G (x) H` or `G ^ G` with its generator map and `phi`.
#[derive(Clone)]
pub struct TensorResult {
    pair: CompatiblePair,
    group: FiniteGroup,
    gens: Vec<Elem>,
    structure: Structure,
    derivative: Subgroup,
    exterior: bool,
    route: Route,
    symbol_generators: OnceLock<Vec<usize>>,
}

impl std::fmt::Debug for TensorResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TensorResult")
            .field("order", &self.group.order())
            .field("exterior", &self.exterior)
            .field("route", &self.route)
            .finish()
    }
}

/// `G ^ G` together with `G (x) G` and `nabla(G)`, the kernel of the quotient map.
#[derive(Clone, Debug)]
pub struct WedgeResult {
    pub wedge: TensorResult,
    pub square: TensorResult,
    pub nabla_kernel: Subgroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    G,
    H,
}

/// `D_H(G) = <g (h.g)^-1>` for `Factor::G`, or `D_G(H) = <h (g.h)^-1>` for `Factor::H`.
pub fn derivative_subgroup(pair: &CompatiblePair, side: Factor) -> Subgroup {
    let (g, h) = (pair.g(), pair.h());
    match side {
        Factor::G => g.subgroup_generated(g.elements().flat_map(|a| {
            h.elements()
                .map(move |b| g.mul(a, g.inv(pair.beta().act(b, a))))
        })),
        Factor::H => h.subgroup_generated(h.elements().flat_map(|b| {
            g.elements()
                .map(move |a| h.mul(b, h.inv(pair.alpha().act(a, b))))
        })),
    }
}

pub fn tensor_product(pair: &CompatiblePair, caps: &Caps) -> Result<TensorResult> {
    build(pair, false, &caps.started())
}

pub fn tensor_square(g: &FiniteGroup, caps: &Caps) -> Result<TensorResult> {
    build(&conjugation_pair(g), false, &caps.started())
}

pub fn exterior_square(g: &FiniteGroup, caps: &Caps) -> Result<WedgeResult> {
    let caps = caps.started();
    let pair = conjugation_pair(g);
    let square = build(&pair, false, &caps)?;
    let wedge = build(&pair, true, &caps)?;
    let nabla_kernel = square
        .group
        .subgroup_generated(g.elements().map(|a| square.gen(a, a)));
    Ok(WedgeResult {
        wedge,
        square,
        nabla_kernel,
    })
}

fn build(pair: &CompatiblePair, exterior: bool, caps: &Caps) -> Result<TensorResult> {
    caps.check_pair(pair)?;
    if exterior && !pair.is_conjugation_pair() {
        return Err(Error::InvalidInput(
            "exterior squares need a conjugation pair".into(),
        ));
    }
    match caps.route {
        RoutePolicy::Kernel => from_kernel(pair, exterior, caps),
        RoutePolicy::Hlt => from_enumeration(pair, exterior, Strategy::Hlt, caps),
        RoutePolicy::Felsch => from_enumeration(pair, exterior, Strategy::Felsch, caps),
        RoutePolicy::Auto => {
            let r = from_kernel(pair, exterior, caps)?;
            let work = r.order().saturating_mul(relator_count(pair, exterior));
            if work <= caps.auto_crosscheck_work {
                let p = presentation(pair, exterior, caps)?;
                let n = fp::enumerate(&p, Strategy::Hlt, &caps.limits())?.live_count();
                if n != r.order() {
                    return Err(Error::RouteMismatch(format!(
                        "kernel route gives order {}, enumeration gives {n}",
                        r.order()
                    )));
                }
            }
            Ok(r)
        }
    }
}

fn from_kernel(pair: &CompatiblePair, exterior: bool, caps: &Caps) -> Result<TensorResult> {
    let route = KernelRoute::run(pair, exterior, &caps.route_limits())?;
    let ext = route.extension(pair.g())?;
    let gens = route.generator_images(&ext);
    kernel::verify(pair, exterior, &ext, &gens, caps.deadline)?;
    let central = ext.is_trivial_action();
    let top = ext.top().clone();
    let fiber = ext.fiber_order();
    let moduli = ext.moduli().to_vec();
    let mut group = FiniteGroup::from_extension(ext, &caps.validation())?;
    if group.order() <= caps.max_tabulated_order {
        group = group.to_tabulated(caps.max_tabulated_order)?;
    }
    Ok(TensorResult {
        derivative: pair.g().subgroup_from_members(&sorted(route.d_members()))?,
        structure: Structure::Kernel {
            top,
            top_members: route.d_members().to_vec(),
            fiber,
            moduli,
            central,
        },
        pair: pair.clone(),
        group,
        gens,
        exterior,
        route: Route::Kernel,
        symbol_generators: OnceLock::new(),
    })
}

fn sorted(xs: &[Elem]) -> Vec<Elem> {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v
}

fn from_enumeration(
    pair: &CompatiblePair,
    exterior: bool,
    strategy: Strategy,
    caps: &Caps,
) -> Result<TensorResult> {
    let p = presentation(pair, exterior, caps)?;
    let table = fp::enumerate(&p, strategy, &caps.limits())?;
    let (group, gens) = fp::to_group(&table, &p, caps.max_cosets)?;
    let g = pair.g();
    let nh = pair.h().order();
    let mut r = TensorResult {
        derivative: derivative_subgroup(pair, Factor::G),
        structure: Structure::Enumerated { phi: Vec::new() },
        pair: pair.clone(),
        group,
        gens,
        exterior,
        route: Route::Enumeration(strategy),
        symbol_generators: OnceLock::new(),
    };
    let pi = |x: usize| {
        let (a, b) = ((x / nh) as Elem, (x % nh) as Elem);
        g.mul(a, g.inv(pair.beta().act(b, a)))
    };
    let phi = r
        .extend_from_symbols(pi, |a, b| g.mul(a, b), g.identity())
        .map_err(|e| Error::NotAHomomorphism(format!("phi: {e}")))?;
    r.structure = Structure::Enumerated { phi };
    Ok(r)
}

impl TensorResult {
    pub fn pair(&self) -> &CompatiblePair {
        &self.pair
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn is_exterior(&self) -> bool {
        self.exterior
    }

    /// The element `g (x) h` (or `g ^ h`).
    pub fn gen(&self, g: Elem, h: Elem) -> Elem {
        self.gens[symbol(&self.pair, g, h)]
    }

    /// Images of all symbols, indexed `g |H| + h`.
    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    /// `D_H(G)`, the image of `phi`.
    pub fn derivative(&self) -> &Subgroup {
        &self.derivative
    }

    #[inline]
    pub fn phi(&self, x: Elem) -> Elem {
        match &self.structure {
            Structure::Kernel {
                top_members, fiber, ..
            } => top_members[(x as u64 / fiber) as usize],
            Structure::Enumerated { phi } => phi[x as usize],
        }
    }

    pub fn phi_images(&self) -> Vec<Elem> {
        self.group.elements().map(|x| self.phi(x)).collect()
    }

    /// `phi` as a checked homomorphism into `G`.
    pub fn phi_homomorphism(&self) -> Result<Homomorphism<'_>> {
        Homomorphism::new(&self.group, self.pair.g(), self.phi_images())
    }

    /// Invariant factors of `Ker phi`.
    pub fn kernel_invariants(&self) -> Result<AbelianInvariants> {
        match &self.structure {
            Structure::Kernel { moduli, .. } => AbelianInvariants::new(moduli.clone()),
            Structure::Enumerated { phi } => {
                let id = self.pair.g().identity();
                let k = self
                    .group
                    .subgroup_generated(self.group.elements().filter(|&x| phi[x as usize] == id));
                self.group.abelian_invariants(&k)
            }
        }
    }

    /// For the kernel route: true when `Ker phi` was found central, as it must be.
    pub fn kernel_is_central(&self) -> bool {
        match &self.structure {
            Structure::Kernel { central, .. } => *central,
            Structure::Enumerated { phi } => {
                let id = self.pair.g().identity();
                let k = self
                    .group
                    .subgroup_generated(self.group.elements().filter(|&x| phi[x as usize] == id));
                self.group.is_central(&k)
            }
        }
    }

    /// Symbols whose images generate the group, chosen greedily in symbol order.
    pub fn symbol_generating_set(&self) -> &[usize] {
        self.symbol_generators.get_or_init(|| {
            let mut closure = Closure::new(&self.group);
            let mut chosen = Vec::new();
            for (x, &e) in self.gens.iter().enumerate() {
                if closure.len() == self.group.order() {
                    break;
                }
                if closure.add(e) {
                    chosen.push(x);
                }
            }
            self.group
                .record_generators(chosen.iter().map(|&x| self.gens[x]).collect());
            chosen
        })
    }

    /// Extends `symbol -> image` to a homomorphism on the whole group and checks it on
    /// every symbol.
    fn extend_from_symbols(
        &self,
        image: impl Fn(usize) -> Elem,
        mul: impl Fn(Elem, Elem) -> Elem,
        identity: Elem,
    ) -> Result<Vec<Elem>> {
        let chosen = self.symbol_generating_set();
        let gens: Vec<Elem> = chosen.iter().map(|&x| self.gens[x]).collect();
        let images: Vec<Elem> = chosen.iter().map(|&x| image(x)).collect();
        let out = extend_on_generators(&self.group, &gens, &images, mul, identity)?;
        for (x, &e) in self.gens.iter().enumerate() {
            if out[e as usize] != image(x) {
                let nh = self.pair.h().order();
                return Err(Error::NotAHomomorphism(format!(
                    "symbol ({}, {}) is sent to the wrong image",
                    self.pair.g().label((x / nh) as Elem),
                    self.pair.h().label((x % nh) as Elem)
                )));
            }
        }
        Ok(out)
    }

    /// `(top, fiber)` when the group is an untabulated central extension of `D`.
    fn central_view(&self) -> Option<(&FiniteGroup, u64)> {
        match &self.structure {
            Structure::Kernel {
                top,
                fiber,
                central: true,
                ..
            } if !self.group.is_tabulated() => Some((top, *fiber)),
            _ => None,
        }
    }

    /// Whether `[t(e), t(d)] = 1` for all `e` in `left` and `d` in `right` (positions in `D`).
    fn transversal_commutators_vanish(&self, fiber: u64, left: &[Elem], right: &[Elem]) -> bool {
        let t = |d: Elem| (d as u64 * fiber) as Elem;
        left.iter().all(|&e| {
            right
                .iter()
                .all(|&d| self.group.commutator(t(e), t(d)) == self.group.identity())
        })
    }

    // With K = Ker phi central, [k t(e), k' t(d)] = [t(e), t(d)]. Hence the lower central
    // and derived series of the group are generated by such commutators with e running
    // over the corresponding term for D.

    pub fn is_abelian(&self) -> bool {
        match self.central_view() {
            Some((top, fiber)) => {
                let gens = top.generating_set();
                self.transversal_commutators_vanish(fiber, gens, gens)
            }
            None => self.group.is_abelian(),
        }
    }

    pub fn nilpotency_class(&self) -> Option<usize> {
        let Some((top, fiber)) = self.central_view() else {
            return self.group.nilpotency_class();
        };
        if self.group.is_trivial() {
            return Some(0);
        }
        if !top.is_nilpotent() {
            return None;
        }
        let all: Vec<Elem> = top.elements().collect();
        for (i, term) in top.lower_central_series().iter().enumerate() {
            if self.transversal_commutators_vanish(fiber, term.members(), &all) {
                return Some(i + 1);
            }
        }
        None
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_class().is_some()
    }

    pub fn derived_length(&self) -> Option<usize> {
        let Some((top, fiber)) = self.central_view() else {
            return self.group.derived_length();
        };
        if self.group.is_trivial() {
            return Some(0);
        }
        if !top.is_solvable() {
            return None;
        }
        for (i, term) in top.derived_series().iter().enumerate() {
            if self.transversal_commutators_vanish(fiber, term.members(), term.members()) {
                return Some(i + 1);
            }
        }
        None
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_length().is_some()
    }

    /// A central extension of a supersolvable group is supersolvable: every subgroup of the
    /// central kernel is normal, so its chief factors have prime order.
    pub fn is_supersolvable(&self) -> bool {
        match self.central_view() {
            Some((top, _)) => top.is_supersolvable(),
            None => self.group.is_supersolvable(),
        }
    }

    /// Quadruples `(a, b, a1, b1)` where conjugation by `a (x) b` differs from the action
    /// of `[a, b]` on `a1 (x) b1`. Only meaningful for conjugation pairs.
    pub fn conjugation_identity_violations(&self, limit: usize) -> Vec<[Elem; 4]> {
        let g = self.pair.g();
        let t = &self.group;
        let mut out = Vec::new();
        for a in g.elements() {
            for b in g.elements() {
                let c = g.commutator(a, b);
                let x = self.gen(a, b);
                let xi = t.inv(x);
                for a1 in g.elements() {
                    for b1 in g.elements() {
                        let lhs = t.mul(t.mul(x, self.gen(a1, b1)), xi);
                        let rhs = self.gen(g.conj(c, a1), g.conj(c, b1));
                        if lhs != rhs {
                            out.push([a, b, a1, b1]);
                            if out.len() >= limit {
                                return out;
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// `kappa: G (x) G -> [G, G]`, `g (x) h -> [g, h]`, and its kernel `J(G)`.
pub struct KappaJ<'a> {
    pub kappa: Homomorphism<'a>,
    pub j: Subgroup,
    pub j_invariants: AbelianInvariants,
    pub j_central: bool,
    pub image_is_derived_subgroup: bool,
}

pub fn kappa_and_j(ts: &TensorResult) -> Result<KappaJ<'_>> {
    if !ts.pair.is_conjugation_pair() {
        return Err(Error::InvalidInput("kappa needs a conjugation pair".into()));
    }
    let g = ts.pair.g();
    let n = g.order();
    let images = ts
        .extend_from_symbols(
            |x| g.commutator((x / n) as Elem, (x % n) as Elem),
            |a, b| g.mul(a, b),
            g.identity(),
        )
        .map_err(|e| Error::KappaNotWellDefined(e.to_string()))?;
    let kappa = Homomorphism::new(&ts.group, g, images)
        .map_err(|e| Error::KappaNotWellDefined(e.to_string()))?;
    let j = kappa.kernel();
    let gens = ts.group.generating_set();
    let j_central = j.members().iter().all(|&k| {
        gens.iter()
            .all(|&s| ts.group.mul(k, s) == ts.group.mul(s, k))
    });
    let j_invariants = if j_central {
        ts.group.abelian_invariants(&j)?
    } else {
        AbelianInvariants::trivial()
    };
    let image_is_derived_subgroup = kappa.image().members() == g.derived_subgroup().members();
    Ok(KappaJ {
        kappa,
        j,
        j_invariants,
        j_central,
        image_is_derived_subgroup,
    })
}

/// Largest `|T|` (and `|G| |T|`) for which the action of `G` is stored densely.
const DENSE_ACTION_ORDER: usize = 4096;
const DENSE_ACTION_ENTRIES: usize = 1 << 20;

/// `phi: G (x) H -> G` with `G` acting by `x.(g (x) h) = x.g (x) x.h`, verified.
pub fn phi_crossed_module(ts: &TensorResult) -> Result<(CrossedModule<'_>, CrossedModuleReport)> {
    let (g, t) = (ts.pair.g(), &ts.group);
    let nh = ts.pair.h().order();
    let automorphism = |x: Elem| -> Result<Vec<Elem>> {
        let table = ts
            .extend_from_symbols(
                |s| {
                    let (a, b) = ((s / nh) as Elem, (s % nh) as Elem);
                    ts.gen(g.conj(x, a), ts.pair.alpha().act(x, b))
                },
                |p, q| t.mul(p, q),
                t.identity(),
            )
            .map_err(|e| Error::ActionNotWellDefined(e.to_string()))?;
        let mut seen = BitSet::new(t.order());
        if !table.iter().all(|&y| seen.insert(y)) {
            return Err(Error::ActionNotWellDefined(format!(
                "{} does not act bijectively",
                g.label(x)
            )));
        }
        Ok(table)
    };
    let dense = t.order() <= DENSE_ACTION_ORDER
        && t.order().saturating_mul(g.order()) <= DENSE_ACTION_ENTRIES;
    let action = if dense {
        let mut table = Vec::with_capacity(g.order() * t.order());
        for x in g.elements() {
            table.extend(automorphism(x)?);
        }
        ModuleAction::Dense(
            AutAction::new(g, t, table).map_err(|e| Error::ActionNotWellDefined(e.to_string()))?,
        )
    } else {
        let generators = g.generating_set().to_vec();
        let automorphisms = generators
            .iter()
            .map(|&x| automorphism(x))
            .collect::<Result<Vec<_>>>()?;
        ModuleAction::OnGenerators {
            generators,
            automorphisms,
        }
    };
    let cm = CrossedModule {
        a: t,
        b: g,
        boundary: ts.phi_images(),
        action,
    };
    let mut report = verify_crossed_module(&cm);
    if report.image_order != ts.derivative.order() {
        report
            .violations
            .push("the image of phi is not D_H(G)".into());
    }
    Ok((cm, report))
}
