//! Schur and Bogomolov multipliers, `J(G)`, `nabla(G)` and Whitehead's `Gamma`, all read off
//! the central kernels of the exterior and tensor squares.

use std::collections::HashSet;

use serde::Serialize;

use crate::abelian::{quotient_invariants, subgroup_invariants, AbelianInvariants};
use crate::action::conjugation_pair;
use crate::error::{Error, Result};
use crate::group::{gcd, Elem, FiniteGroup};

use super::kernel::KernelRoute;
use super::{symbol, Caps};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplierReport {
    /// `M(G)`, the kernel of `G ^ G -> [G, G]`.
    pub schur: AbelianInvariants,
    /// Order of `M_0(G)`, generated by `x ^ y` over commuting pairs; it lies in `M(G)`.
    pub m0_order: u128,
    /// `B_0(G) = M(G) / M_0(G)`, up to the duality `Hom(-, Q/Z)`.
    pub bogomolov: AbelianInvariants,
    /// `J(G)`, the kernel of `G (x) G -> [G, G]`.
    pub j_invariants: AbelianInvariants,
    /// `nabla(G)`, generated by the `g (x) g` inside `J(G)`.
    pub nabla_invariants: AbelianInvariants,
    pub derived_order: usize,
    pub square_order: u128,
    pub wedge_order: u128,
}

fn kernel(g: &FiniteGroup, exterior: bool, caps: &Caps) -> Result<KernelRoute> {
    let pair = conjugation_pair(g);
    caps.check_pair(&pair)?;
    let route = KernelRoute::run(&pair, exterior, &caps.route_limits())?;
    if !route.is_central()? {
        return Err(Error::PropertyFailed(format!(
            "the kernel of the {} square is not central",
            if exterior { "exterior" } else { "tensor" }
        )));
    }
    Ok(route)
}

pub fn schur_multiplier(g: &FiniteGroup, caps: &Caps) -> Result<AbelianInvariants> {
    Ok(kernel(g, true, &caps.started())?.kernel_invariants())
}

/// Kernel coordinates of `x ^ y` (or `x (x) y`) over all commuting pairs, deduplicated.
fn commuting_vectors(g: &FiniteGroup, route: &KernelRoute) -> Result<Vec<Vec<u64>>> {
    let pair = conjugation_pair(g);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in g.elements() {
        for y in g.elements() {
            if g.commutator(x, y) != g.identity() {
                continue;
            }
            let v = route.kernel_vector(symbol(&pair, x, y)).ok_or_else(|| {
                Error::PropertyFailed("a commuting pair leaves the kernel".into())
            })?;
            if seen.insert(v.clone()) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

pub fn m0_and_bogomolov(g: &FiniteGroup, caps: &Caps) -> Result<MultiplierReport> {
    let caps = caps.started();
    let wedge = kernel(g, true, &caps)?;
    let square = kernel(g, false, &caps)?;
    let pair = conjugation_pair(g);
    let m = wedge.kernel_invariants();
    // Commuting-pair elements lie in M(G), which is central.
    let m0 = commuting_vectors(g, &wedge)?;
    let m0_order = subgroup_invariants(wedge.moduli(), &m0)?.order();
    let bogomolov = quotient_invariants(wedge.moduli(), &m0)?;
    let diagonal: Vec<Vec<u64>> = g
        .elements()
        .map(|x| {
            square
                .kernel_vector(symbol(&pair, x, x))
                .ok_or_else(|| Error::PropertyFailed("g (x) g leaves the kernel".into()))
        })
        .collect::<Result<_>>()?;
    let nabla_invariants = subgroup_invariants(square.moduli(), &diagonal)?;
    let j = square.kernel_invariants();
    let derived_order = wedge.d_members().len();
    if derived_order != square.d_members().len() {
        return Err(Error::RouteMismatch(
            "the two squares have different images".into(),
        ));
    }
    Ok(MultiplierReport {
        square_order: j.order() * derived_order as u128,
        wedge_order: m.order() * derived_order as u128,
        schur: m,
        m0_order,
        bogomolov,
        j_invariants: j,
        nabla_invariants,
        derived_order,
    })
}

/// Whitehead's quadratic functor on a finite abelian group:
/// `Gamma(Z/d)` is `Z/d` for odd `d` and `Z/2d` for even `d`, and
/// `Gamma(A + B) = Gamma(A) + Gamma(B) + A (x) B`.
pub fn gamma_whitehead(inv: &AbelianInvariants) -> AbelianInvariants {
    let f = inv.factors();
    let mut orders: Vec<u64> = f
        .iter()
        .map(|&d| if d % 2 == 0 { 2 * d } else { d })
        .collect();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            orders.push(gcd(f[i], f[j]));
        }
    }
    AbelianInvariants::from_cyclic_orders(&orders)
}

/// `A (x) B` for finite abelian groups: the sum of `Z/gcd(a_i, b_j)`.
pub fn abelian_tensor(a: &AbelianInvariants, b: &AbelianInvariants) -> AbelianInvariants {
    let orders: Vec<u64> = a
        .factors()
        .iter()
        .flat_map(|&x| b.factors().iter().map(move |&y| gcd(x, y)))
        .collect();
    AbelianInvariants::from_cyclic_orders(&orders)
}

/// `A ^ A` for a finite abelian group: the sum of `Z/gcd(a_i, a_j)` over `i < j`.
pub fn abelian_exterior(a: &AbelianInvariants) -> AbelianInvariants {
    let f = a.factors();
    let mut orders = Vec::new();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            orders.push(gcd(f[i], f[j]));
        }
    }
    AbelianInvariants::from_cyclic_orders(&orders)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NablaReport {
    pub nabla_order: u128,
    pub gamma: AbelianInvariants,
    pub square_order: u128,
    pub wedge_order: u128,
    /// `|nabla(G)|` divides `|Gamma(G^ab)|`.
    pub divides_gamma: bool,
    /// `|G (x) G| = |nabla(G)| |G ^ G|`.
    pub orders_multiply: bool,
}

pub fn nabla_consistency(g: &FiniteGroup, caps: &Caps) -> Result<NablaReport> {
    let report = m0_and_bogomolov(g, caps)?;
    let gamma = gamma_whitehead(&g.abelianization_invariants()?);
    let nabla_order = report.nabla_invariants.order();
    Ok(NablaReport {
        nabla_order,
        divides_gamma: gamma.order() % nabla_order == 0,
        orders_multiply: report.square_order == nabla_order * report.wedge_order,
        gamma,
        square_order: report.square_order,
        wedge_order: report.wedge_order,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetacyclicMReport {
    /// Generator of the cyclic normal subgroup `N` with cyclic quotient.
    pub n_generator: Elem,
    pub n_order: usize,
    pub schur_order: u128,
    /// First `s` in element order that maps to a generator of `G/N` and realizes every
    /// element of `M(G)` as `x ^ s` with `x` in `N` and `[x, s] = 1`.
    pub witness: Option<Elem>,
    pub candidates_tried: usize,
}

/// Largest `|M(G)|` listed element by element.
const MAX_LISTED_MULTIPLIER: u128 = 1 << 20;

/// Searches for `s` with `M(G) = {x ^ s : x in N, [x, s] = 1}`.
///
/// `N` is `<a>` for the first `a` in element order with `<a>` normal and `G/<a>` cyclic.
pub fn metacyclic_m(g: &FiniteGroup, caps: &Caps) -> Result<MetacyclicMReport> {
    let caps = caps.started();
    let (a, n, projection, quotient) = g
        .elements()
        .find_map(|a| {
            let n = g.subgroup_generated([a]);
            let (q, projection) = g.quotient(&n).ok()?;
            (q.is_cyclic()).then_some((a, n, projection, q))
        })
        .ok_or_else(|| Error::InvalidInput("group is not metacyclic".into()))?;
    let wedge = kernel(g, true, &caps)?;
    let pair = conjugation_pair(g);
    let schur_order = wedge.kernel_invariants().order();
    if schur_order > MAX_LISTED_MULTIPLIER {
        return Err(Error::cap(
            "Schur multiplier order",
            schur_order as usize,
            MAX_LISTED_MULTIPLIER as usize,
        ));
    }
    let mut tried = 0;
    for s in g.elements() {
        if quotient.element_order(projection[s as usize]) != quotient.order() {
            continue;
        }
        tried += 1;
        let mut realized = HashSet::new();
        for &x in n.members() {
            if g.commutator(x, s) == g.identity() {
                let v = wedge
                    .kernel_vector(symbol(&pair, x, s))
                    .ok_or_else(|| Error::PropertyFailed("x ^ s leaves the kernel".into()))?;
                realized.insert(v);
            }
        }
        if realized.len() as u128 == schur_order {
            return Ok(MetacyclicMReport {
                n_generator: a,
                n_order: n.order(),
                schur_order,
                witness: Some(s),
                candidates_tried: tried,
            });
        }
    }
    Ok(MetacyclicMReport {
        n_generator: a,
        n_order: n.order(),
        schur_order,
        witness: None,
        candidates_tried: tried,
    })
}
