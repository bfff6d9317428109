//! Subgroups, closures, characteristic series and structure predicates.
//!
//! Everything here works through generating sets, so the same code serves tabulated groups
//! and large extension-backed groups.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};

/// A subgroup of some parent group, stored as its sorted member list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<Elem>,
    generators: Vec<Elem>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order {})", self.members.len())
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    /// A generating set (not necessarily minimal).
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.len() <= other.members.len() && self.members.iter().all(|&x| other.contains(x))
    }
}

/// Membership bitmap over the elements of a parent group.
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    pub(crate) fn contains(&self, x: Elem) -> bool {
        self.words[x as usize >> 6] >> (x & 63) & 1 == 1
    }

    /// Returns true if newly inserted.
    #[inline]
    pub(crate) fn insert(&mut self, x: Elem) -> bool {
        let w = &mut self.words[x as usize >> 6];
        let bit = 1u64 << (x & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }
}

/// Incremental subgroup closure.
pub(crate) struct Closure<'g> {
    group: &'g FiniteGroup,
    set: BitSet,
    elements: Vec<Elem>,
    gens: Vec<Elem>,
}

impl<'g> Closure<'g> {
    pub(crate) fn new(group: &'g FiniteGroup) -> Self {
        let mut set = BitSet::new(group.order());
        set.insert(group.identity());
        Closure {
            group,
            set,
            elements: vec![group.identity()],
            gens: Vec::new(),
        }
    }

    pub(crate) fn contains(&self, x: Elem) -> bool {
        self.set.contains(x)
    }

    pub(crate) fn len(&self) -> usize {
        self.elements.len()
    }

    /// Adds `s` as a generator; returns false if it was already a member.
    pub(crate) fn add(&mut self, s: Elem) -> bool {
        if self.set.contains(s) {
            return false;
        }
        self.gens.push(s);
        let g = self.group;
        let old = self.elements.len();
        for i in 0..old {
            let y = g.mul(self.elements[i], s);
            if self.set.insert(y) {
                self.elements.push(y);
            }
        }
        let mut head = old;
        while head < self.elements.len() {
            let x = self.elements[head];
            head += 1;
            for k in 0..self.gens.len() {
                let y = g.mul(x, self.gens[k]);
                if self.set.insert(y) {
                    self.elements.push(y);
                }
            }
        }
        true
    }

    pub(crate) fn finish(mut self) -> Subgroup {
        self.elements.sort_unstable();
        Subgroup {
            members: self.elements,
            generators: self.gens,
        }
    }
}

impl FiniteGroup {
    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: self.elements().collect(),
            generators: self.generating_set().to_vec(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            members: vec![self.identity()],
            generators: Vec::new(),
        }
    }

    /// Smallest subgroup containing `seeds`.
    pub fn subgroup_generated<I: IntoIterator<Item = Elem>>(&self, seeds: I) -> Subgroup {
        let mut c = Closure::new(self);
        for s in seeds {
            c.add(s);
        }
        c.finish()
    }

    /// Builds a subgroup from an explicit member list, checking closure.
    pub fn subgroup_from_members(&self, members: &[Elem]) -> Result<Subgroup> {
        let set: BTreeSet<Elem> = members.iter().copied().collect();
        let h = self.subgroup_generated(set.iter().copied());
        if h.order() != set.len() {
            return Err(Error::InvalidInput("member set is not a subgroup".into()));
        }
        Ok(h)
    }

    /// Smallest normal subgroup of `self` containing `seeds`.
    pub fn normal_closure<I: IntoIterator<Item = Elem>>(&self, seeds: I) -> Subgroup {
        self.normal_closure_under(self.generating_set(), seeds)
    }

    /// Normal closure of `seeds` under conjugation by the group generated by `conjugators`.
    pub fn normal_closure_under<I: IntoIterator<Item = Elem>>(
        &self,
        conjugators: &[Elem],
        seeds: I,
    ) -> Subgroup {
        let mut c = Closure::new(self);
        let mut pending: Vec<Elem> = seeds.into_iter().collect();
        while let Some(s) = pending.pop() {
            if c.add(s) {
                for &g in conjugators {
                    pending.push(self.conj(g, s));
                }
            }
        }
        // Every accepted generator has its conjugates by every conjugator inside.
        c.finish()
    }

    pub fn is_normal(&self, n: &Subgroup) -> bool {
        self.normalizes(self.generating_set(), n)
    }

    /// True if the group generated by `by` normalizes `n`.
    pub fn normalizes(&self, by: &[Elem], n: &Subgroup) -> bool {
        by.iter()
            .all(|&g| n.generators().iter().all(|&x| n.contains(self.conj(g, x))))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators_commute(self.generating_set())
    }

    /// Some element has order `|G|`. Exponent equal to order is not enough: `S_3` has both 6.
    pub fn is_cyclic(&self) -> bool {
        self.elements()
            .any(|x| self.element_order(x) == self.order())
    }

    pub fn is_abelian_subgroup(&self, a: &Subgroup) -> bool {
        self.generators_commute(a.generators())
    }

    fn generators_commute(&self, gens: &[Elem]) -> bool {
        gens.iter().enumerate().all(|(i, &x)| {
            gens[i + 1..]
                .iter()
                .all(|&y| self.mul(x, y) == self.mul(y, x))
        })
    }

    pub fn is_central(&self, a: &Subgroup) -> bool {
        a.generators().iter().all(|&x| {
            self.generating_set()
                .iter()
                .all(|&g| self.mul(x, g) == self.mul(g, x))
        })
    }

    /// `[A, B]`, generated by all `[a, b] = a b a^-1 b^-1`.
    ///
    /// It is the normal closure of the generator commutators in `<A, B>`.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let conjugators: Vec<Elem> = a
            .generators()
            .iter()
            .chain(b.generators())
            .copied()
            .collect();
        let seeds: Vec<Elem> = a
            .generators()
            .iter()
            .flat_map(|&x| b.generators().iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.commutator(x, y))
            .collect();
        self.normal_closure_under(&conjugators, seeds)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = self.whole();
        self.commutator_subgroup(&g, &g)
    }

    /// `γ_1 = G, γ_{i+1} = [γ_i, G]`, stopping at the first repeated term.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let g = self.whole();
        let mut series = vec![g.clone()];
        loop {
            let next = self.commutator_subgroup(series.last().unwrap(), &g);
            if next.order() == series.last().unwrap().order() {
                return series;
            }
            series.push(next);
        }
    }

    /// `G^(0) = G, G^(i+1) = [G^(i), G^(i)]`, stopping at the first repeated term.
    pub fn derived_series(&self) -> Vec<Subgroup> {
        let mut series = vec![self.whole()];
        loop {
            let last = series.last().unwrap();
            let next = self.commutator_subgroup(last, last);
            if next.order() == last.order() {
                return series;
            }
            series.push(next);
        }
    }

    /// Smallest `c` with `γ_{c+1} = 1`, or `None` if the group is not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let series = self.lower_central_series();
        if series.last().unwrap().is_trivial() {
            Some(series.len() - 1)
        } else {
            None
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_class().is_some()
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_trivial()
    }

    /// Derived length, or `None` if not solvable.
    pub fn derived_length(&self) -> Option<usize> {
        let series = self.derived_series();
        if series.last().unwrap().is_trivial() {
            Some(series.len() - 1)
        } else {
            None
        }
    }

    /// Ascending chief series `1 = N_0 < N_1 < ... < N_r = G`.
    ///
    /// Each step adds the smallest normal subgroup properly containing the current term,
    /// ties broken by the lexicographically smallest member list.
    pub fn chief_series(&self) -> Vec<Subgroup> {
        let classes = if self.is_abelian() {
            None
        } else {
            Some(self.conjugacy_classes())
        };
        let mut series = vec![self.trivial_subgroup()];
        while series.last().unwrap().order() < self.order() {
            let current = series.last().unwrap();
            let mut best: Option<Subgroup> = None;
            let candidates: Vec<Elem> = match &classes {
                Some(cls) => cls.iter().map(|c| c[0]).collect(),
                None => self.elements().collect(),
            };
            for x in candidates {
                if current.contains(x) {
                    continue;
                }
                let seeds = current.generators().iter().copied().chain([x]);
                let m = self.normal_closure(seeds);
                let better = match &best {
                    None => true,
                    Some(b) => (m.order(), m.members()) < (b.order(), b.members()),
                };
                if better {
                    best = Some(m);
                }
            }
            series.push(best.expect("proper normal subgroup has an element outside it"));
        }
        series
    }

    /// Supersolvable iff every chief factor has prime order.
    ///
    /// Nilpotent groups short-circuit to true; `chief_factors_prime` always walks the series.
    pub fn is_supersolvable(&self) -> bool {
        self.is_abelian() || self.is_nilpotent() || self.chief_factors_prime()
    }

    pub fn chief_factors_prime(&self) -> bool {
        self.chief_series()
            .windows(2)
            .all(|w| is_prime((w[1].order() / w[0].order()) as u64))
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer(self.generating_set())
    }

    /// Elements commuting with every element of `set`.
    pub fn centralizer(&self, set: &[Elem]) -> Subgroup {
        let mut c = Closure::new(self);
        for x in self.elements() {
            if !c.contains(x) && set.iter().all(|&s| self.mul(x, s) == self.mul(s, x)) {
                c.add(x);
            }
        }
        c.finish()
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let gens = self.generating_set();
        let mut class_of = vec![u32::MAX; self.order()];
        let mut classes = Vec::new();
        for x in self.elements() {
            if class_of[x as usize] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            let mut orbit = vec![x];
            class_of[x as usize] = id;
            let mut head = 0;
            while head < orbit.len() {
                let y = orbit[head];
                head += 1;
                for &g in gens {
                    let z = self.conj(g, y);
                    if class_of[z as usize] == u32::MAX {
                        class_of[z as usize] = id;
                        orbit.push(z);
                    }
                }
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        classes
    }

    /// `G / N` as a tabulated group together with the projection.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<Elem>)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let mut coset_of = vec![u32::MAX; self.order()];
        let mut reps = Vec::new();
        for x in self.elements() {
            if coset_of[x as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for &m in n.members() {
                coset_of[self.mul(x, m) as usize] = id;
            }
        }
        let k = reps.len();
        let mut table = vec![0 as Elem; k * k];
        for i in 0..k {
            for j in 0..k {
                table[i * k + j] = coset_of[self.mul(reps[i], reps[j]) as usize];
            }
        }
        let labels = reps
            .iter()
            .map(|&r| format!("{}N", self.label(r)))
            .collect();
        let q = FiniteGroup::from_table(k, table, Some(labels))?;
        Ok((q, coset_of))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::Homomorphism;
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

    fn element(g: &FiniteGroup, label: &str) -> Elem {
        g.elements().find(|&x| g.label(x) == label).unwrap()
    }

    #[test]
    fn generated_subgroups() {
        let g = s3();
        assert_eq!(g.subgroup_generated([element(&g, "(1 2 3)")]).order(), 3);
        assert_eq!(g.subgroup_generated([]).order(), 1);
        let z4 = FiniteGroup::abelian_table(&[4]).unwrap();
        let sq = z4.mul(1, 1);
        assert_eq!(z4.subgroup_generated([sq]).order(), 2);
    }

    #[test]
    fn commutator_subgroups() {
        assert_eq!(s3().derived_subgroup().order(), 3);
        assert_eq!(q8().order(), 8);
        assert_eq!(q8().derived_subgroup().order(), 2);
        let z6 = FiniteGroup::abelian_table(&[6]).unwrap();
        assert!(z6.derived_subgroup().is_trivial());
    }

    #[test]
    fn series_and_classes() {
        let d4 = d4();
        let lcs = d4.lower_central_series();
        assert_eq!(lcs.len(), 3);
        assert!(lcs[2].is_trivial());
        assert_eq!(d4.nilpotency_class(), Some(2));
        assert_eq!(q8().nilpotency_class(), Some(2));
        let s3 = s3();
        assert_eq!(s3.nilpotency_class(), None);
        assert!(s3.is_solvable());
        assert_eq!(s3.derived_length(), Some(2));
        assert_eq!(FiniteGroup::trivial().nilpotency_class(), Some(0));
        let z5 = FiniteGroup::abelian_table(&[5]).unwrap();
        assert_eq!(z5.nilpotency_class(), Some(1));
    }

    #[test]
    fn supersolvability() {
        assert!(d4().is_supersolvable());
        assert!(s3().is_supersolvable());
        assert!(!a4().is_supersolvable());
        assert!(a4().is_solvable());
        let s4 = perm_group(&["(1 2 3 4)", "(1 2)"]);
        assert!(!s4.is_supersolvable());
    }

    #[test]
    fn chief_series_of_a4() {
        let orders: Vec<usize> = a4().chief_series().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 4, 12]);
    }

    #[test]
    fn centers_and_centralizers() {
        assert_eq!(q8().center().order(), 2);
        let z6 = FiniteGroup::abelian_table(&[6]).unwrap();
        assert_eq!(z6.center().order(), 6);
        let s3 = s3();
        let r = element(&s3, "(1 2 3)");
        let c = s3.centralizer(&[r]);
        assert_eq!(c.order(), 3);
        assert!(c.contains(r));
        assert_eq!(s3.conjugacy_classes().len(), 3);
    }

    #[test]
    fn quotients() {
        let s3 = s3();
        let a3 = s3.derived_subgroup();
        let (q, proj) = s3.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        let hom = Homomorphism::new(&s3, &q, proj).unwrap();
        assert!(hom.is_surjective());
        assert_eq!(s3.quotient(&s3.trivial_subgroup()).unwrap().0.order(), 6);
        assert_eq!(s3.quotient(&s3.whole()).unwrap().0.order(), 1);
        let not_normal = s3.subgroup_generated([element(&s3, "(1 2)")]);
        assert_eq!(s3.quotient(&not_normal).unwrap_err(), Error::NotNormal);
    }
}
