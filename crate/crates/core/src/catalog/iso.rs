//! Isomorphism testing by backtracking over generator images.

use crate::group::{Elem, FiniteGroup};
use crate::subgroup::Closure;

/// Cheap isomorphism invariants; equal fingerprints are necessary for isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub order: usize,
    /// `(element order, count)`, sorted.
    pub element_orders: Vec<(usize, usize)>,
    pub center_order: usize,
    pub derived_order: usize,
    pub class: Option<usize>,
    pub class_count: usize,
}

pub fn fingerprint(g: &FiniteGroup) -> Fingerprint {
    let mut counts = std::collections::BTreeMap::new();
    for x in g.elements() {
        *counts.entry(g.element_order(x)).or_insert(0) += 1;
    }
    Fingerprint {
        order: g.order(),
        element_orders: counts.into_iter().collect(),
        center_order: g.center().order(),
        derived_order: g.derived_subgroup().order(),
        class: g.nilpotency_class(),
        class_count: g.conjugacy_classes().len(),
    }
}

/// Generators chosen greedily from high element order down, so the search tree is shallow.
fn small_generating_set(g: &FiniteGroup) -> Vec<Elem> {
    let mut by_order: Vec<Elem> = g.elements().collect();
    by_order.sort_by_key(|&x| (std::cmp::Reverse(g.element_order(x)), x));
    let mut closure = Closure::new(g);
    let mut gens = Vec::new();
    for x in by_order {
        if closure.len() == g.order() {
            break;
        }
        if closure.add(x) {
            gens.push(x);
        }
    }
    gens
}

/// Extends `gens[i] -> images[i]` along the right Cayley graph of `<gens>`. Fails unless the
/// extension is a well-defined injective homomorphism on that subgroup.
fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[Elem], images: &[Elem]) -> Option<Vec<Elem>> {
    const UNSET: Elem = Elem::MAX;
    let mut map = vec![UNSET; g.order()];
    let mut used = vec![false; h.order()];
    map[g.identity() as usize] = h.identity();
    used[h.identity() as usize] = true;
    let mut queue = vec![g.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&s, &t) in gens.iter().zip(images) {
            let xs = g.mul(x, s) as usize;
            let image = h.mul(map[x as usize], t);
            if map[xs] == UNSET {
                if used[image as usize] {
                    return None;
                }
                used[image as usize] = true;
                map[xs] = image;
                queue.push(xs as Elem);
            } else if map[xs] != image {
                return None;
            }
        }
    }
    Some(map)
}

/// An isomorphism `g -> h` as the image of every element, if one exists.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<Elem>> {
    if g.order() != h.order() {
        return None;
    }
    if g.order() <= 1 {
        return Some(vec![h.identity(); g.order()]);
    }
    if fingerprint(g) != fingerprint(h) {
        return None;
    }
    let gens = small_generating_set(g);
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&s| {
            let k = g.element_order(s);
            h.elements().filter(|&t| h.element_order(t) == k).collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    search(g, h, &gens, &candidates, &mut images)
}

fn search(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[Elem],
    candidates: &[Vec<Elem>],
    images: &mut Vec<Elem>,
) -> Option<Vec<Elem>> {
    let depth = images.len();
    if depth == gens.len() {
        // Injective on all of `g` and orders agree, so it is onto.
        return extend(g, h, gens, images);
    }
    for &t in &candidates[depth] {
        images.push(t);
        if extend(g, h, &gens[..=depth], images).is_some() {
            if let Some(map) = search(g, h, gens, candidates, images) {
                return Some(map);
            }
        }
        images.pop();
    }
    None
}

pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    find_isomorphism(g, h).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn perms(gens: &[&str]) -> FiniteGroup {
        let p: Vec<Perm> = gens.iter().map(|s| Perm::parse(s, 0).unwrap()).collect();
        FiniteGroup::from_permutations(&p, 5040).unwrap()
    }

    #[test]
    fn isomorphisms_are_homomorphisms() {
        let a = perms(&["(1 2 3 4)", "(1 3)"]);
        let b = perms(&["(1 2)(3 4)", "(1 3)"]);
        let map = find_isomorphism(&a, &b).expect("both are D4");
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(
                    map[a.mul(x, y) as usize],
                    b.mul(map[x as usize], map[y as usize])
                );
            }
        }
    }

    #[test]
    fn order_eight_groups_are_pairwise_distinct() {
        let z8 = FiniteGroup::abelian_table(&[8]).unwrap();
        let z2z4 = FiniteGroup::abelian_table(&[2, 4]).unwrap();
        let d4 = perms(&["(1 2 3 4)", "(1 3)"]);
        let q8 = perms(&["(1 2 4 7)(3 6 8 5)", "(1 3 4 8)(2 5 7 6)"]);
        let groups = [z8, z2z4, d4, q8];
        for (i, a) in groups.iter().enumerate() {
            for (j, b) in groups.iter().enumerate() {
                assert_eq!(are_isomorphic(a, b), i == j, "{i} {j}");
            }
        }
    }
}
