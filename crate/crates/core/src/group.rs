//! Concrete finite groups on dense element indices `0..order`.
//!
//! Two storage forms share one interface:
//! * a row-major Cayley table (the default, used up to a few thousand elements);
//! * an extension `A . D` of a dense group `D` by a finite abelian group `A`,
//!   multiplied arithmetically, used for large tensor products that cannot be tabulated.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extension::Extension;
use crate::perm::Perm;

/// Dense element index.
pub type Elem = u32;

/// Default cap on the order of a tabulated group.
pub const DEFAULT_GROUP_CAP: usize = 5040;

/// Largest order checked for associativity exhaustively; above it triples are sampled.
pub const FULL_ASSOCIATIVITY_CAP: usize = 256;

/// Number of random triples used for the sampled associativity check.
pub const ASSOCIATIVITY_SAMPLES: usize = 100_000;

#[derive(Clone, Copy, Debug)]
pub struct Validation {
    pub full_associativity_cap: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Validation {
    fn default() -> Self {
        Validation {
            full_associativity_cap: FULL_ASSOCIATIVITY_CAP,
            samples: ASSOCIATIVITY_SAMPLES,
            seed: 0,
        }
    }
}

#[derive(Clone)]
enum Repr {
    Table {
        table: Vec<Elem>,
        inverse: Vec<Elem>,
    },
    Extension(Box<Extension>),
}

#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    identity: Elem,
    repr: Repr,
    labels: Option<Vec<String>>,
    generators: OnceLock<Vec<Elem>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("tabulated", &self.is_tabulated())
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major table, validating the group axioms.
    pub fn from_table(order: usize, table: Vec<Elem>, labels: Option<Vec<String>>) -> Result<Self> {
        Self::from_table_with(order, table, labels, &Validation::default())
    }

    pub fn from_table_with(
        order: usize,
        table: Vec<Elem>,
        labels: Option<Vec<String>>,
        validation: &Validation,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput(
                "a group has at least one element".into(),
            ));
        }
        if table.len() != order * order {
            return Err(Error::InvalidInput(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(Error::InvalidInput("label count differs from order".into()));
            }
        }
        check_latin(order, &table)?;
        // In a Latin square with an associative product the identity is the unique
        // idempotent; find it from row 0: e = x^{-1} x for x = 0.
        let identity = (0..order)
            .find(|&e| table[e * order + e] as usize == e)
            .ok_or_else(|| Error::InvalidInput("no idempotent element".into()))?;
        for x in 0..order {
            if table[identity * order + x] as usize != x
                || table[x * order + identity] as usize != x
            {
                return Err(Error::InvalidInput(format!(
                    "element {identity} is not a two-sided identity"
                )));
            }
        }
        let mut inverse = vec![0 as Elem; order];
        for x in 0..order {
            let row = &table[x * order..(x + 1) * order];
            let y = row.iter().position(|&v| v as usize == identity).unwrap();
            if table[y * order + x] as usize != identity {
                return Err(Error::InvalidInput(format!(
                    "element {x} has no two-sided inverse"
                )));
            }
            inverse[x] = y as Elem;
        }
        let group = FiniteGroup {
            order,
            identity: identity as Elem,
            repr: Repr::Table { table, inverse },
            labels,
            generators: OnceLock::new(),
        };
        group.check_associativity(validation)?;
        Ok(group)
    }

    /// Wraps an extension; associativity is sampled.
    pub(crate) fn from_extension(ext: Extension, validation: &Validation) -> Result<Self> {
        let order = ext.order();
        let identity = ext.identity();
        let group = FiniteGroup {
            order,
            identity,
            repr: Repr::Extension(Box::new(ext)),
            labels: None,
            generators: OnceLock::new(),
        };
        group.check_associativity(validation)?;
        Ok(group)
    }

    /// Builds a tabulated group from a connected right Cayley graph.
    ///
    /// `steps[x * gens + s]` is `x * generator_s`; element 0 must be the identity.
    pub(crate) fn from_right_cayley_graph(
        order: usize,
        gens: usize,
        steps: &[u32],
        labels: Option<Vec<String>>,
        validation: &Validation,
    ) -> Result<Self> {
        // BFS tree: every non-identity element is parent * generator.
        let mut tree: Vec<Option<(u32, u32)>> = vec![None; order];
        let mut seen = vec![false; order];
        let mut bfs = Vec::with_capacity(order);
        seen[0] = true;
        bfs.push(0u32);
        let mut head = 0;
        while head < bfs.len() {
            let x = bfs[head];
            head += 1;
            for s in 0..gens {
                let y = steps[x as usize * gens + s];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    tree[y as usize] = Some((x, s as u32));
                    bfs.push(y);
                }
            }
        }
        if bfs.len() != order {
            return Err(Error::InvalidInput("Cayley graph is not connected".into()));
        }
        let mut table = vec![0 as Elem; order * order];
        for a in 0..order {
            table[a * order] = a as Elem;
            for &b in &bfs[1..] {
                let (p, s) = tree[b as usize].unwrap();
                let ap = table[a * order + p as usize];
                table[a * order + b as usize] = steps[ap as usize * gens + s as usize];
            }
        }
        Self::from_table_with(order, table, labels, validation)
    }

    /// Closure of a set of permutations under composition, labelled in cycle notation.
    pub fn from_permutations(generators: &[Perm], cap: usize) -> Result<Self> {
        let degree = generators.iter().map(Perm::degree).max().unwrap_or(0);
        let gens: Vec<Perm> = generators.iter().map(|p| p.extended(degree)).collect();
        let mut index: HashMap<Perm, u32> = HashMap::new();
        let mut elements = vec![Perm::identity(degree)];
        index.insert(elements[0].clone(), 0);
        let mut steps: Vec<u32> = Vec::new();
        let mut head = 0;
        while head < elements.len() {
            for g in &gens {
                let p = elements[head].then(g);
                let next = index.len() as u32;
                let id = *index.entry(p.clone()).or_insert_with(|| {
                    elements.push(p);
                    next
                });
                if elements.len() > cap {
                    return Err(Error::cap("permutation group order", elements.len(), cap));
                }
                steps.push(id);
            }
            head += 1;
        }
        let labels = elements.iter().map(|p| p.to_string()).collect();
        Self::from_right_cayley_graph(
            elements.len(),
            gens.len(),
            &steps,
            Some(labels),
            &Validation::default(),
        )
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            order: 1,
            identity: 0,
            repr: Repr::Table {
                table: vec![0],
                inverse: vec![0],
            },
            labels: Some(vec!["e".into()]),
            generators: OnceLock::new(),
        }
    }

    /// Direct product of cyclic groups `Z/m_1 x ... x Z/m_k`, tabulated, element index in
    /// mixed radix with the first factor least significant.
    pub fn abelian_table(moduli: &[u64]) -> Result<Self> {
        let order: u64 = moduli.iter().product();
        if order > DEFAULT_GROUP_CAP as u64 * 4 {
            return Err(Error::cap(
                "abelian group order",
                order as usize,
                DEFAULT_GROUP_CAP * 4,
            ));
        }
        let order = order as usize;
        let decode = |mut x: usize| -> Vec<u64> {
            moduli
                .iter()
                .map(|&m| {
                    let d = x as u64 % m;
                    x /= m as usize;
                    d
                })
                .collect()
        };
        let encode = |v: &[u64]| -> usize {
            v.iter()
                .zip(moduli)
                .rev()
                .fold(0usize, |acc, (&d, &m)| acc * m as usize + d as usize)
        };
        let coords: Vec<Vec<u64>> = (0..order).map(decode).collect();
        let mut table = vec![0 as Elem; order * order];
        let mut buf = vec![0u64; moduli.len()];
        for a in 0..order {
            for b in 0..order {
                for i in 0..moduli.len() {
                    buf[i] = (coords[a][i] + coords[b][i]) % moduli[i];
                }
                table[a * order + b] = encode(&buf) as Elem;
            }
        }
        let labels = coords
            .iter()
            .map(|c| {
                let parts: Vec<String> = c.iter().map(|d| d.to_string()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        Self::from_table(order, table, Some(labels))
    }

    /// Records a known generating set; it is not checked here.
    pub(crate) fn with_generators(self, gens: Vec<Elem>) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(gens);
        FiniteGroup {
            generators: cell,
            ..self
        }
    }

    /// Records a generating set unless one is already known; it is not checked here.
    pub(crate) fn record_generators(&self, gens: Vec<Elem>) {
        let _ = self.generators.set(gens);
    }

    /// A generating set: the recorded one, or a greedy one in element order.
    pub fn generating_set(&self) -> &[Elem] {
        self.generators.get_or_init(|| {
            let mut closure = crate::subgroup::Closure::new(self);
            for x in self.elements() {
                if closure.len() == self.order {
                    break;
                }
                closure.add(x);
            }
            closure.finish().generators().to_vec()
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.repr, Repr::Table { .. })
    }

    /// Row-major Cayley table, if this group is tabulated.
    pub fn table(&self) -> Option<&[Elem]> {
        match &self.repr {
            Repr::Table { table, .. } => Some(table),
            Repr::Extension(_) => None,
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::Table { table, .. } => table[a as usize * self.order + b as usize],
            Repr::Extension(e) => e.mul(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        match &self.repr {
            Repr::Table { inverse, .. } => inverse[a as usize],
            Repr::Extension(e) => e.inv(a),
        }
    }

    /// `a b a^-1`: left conjugation of `b` by `a`.
    #[inline]
    pub fn conj(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(a, b), self.inv(a))
    }

    /// `[a, b] = a b a^-1 b^-1`.
    #[inline]
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.conj(a, b), self.inv(b))
    }

    pub fn pow(&self, a: Elem, mut n: u64) -> Elem {
        let mut result = self.identity;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        result
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items
            .into_iter()
            .fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn exponent(&self) -> usize {
        self.elements().map(|x| self.element_order(x)).fold(1, lcm)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::InvalidInput("label count differs from order".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn label(&self, a: Elem) -> String {
        match &self.labels {
            Some(l) => l[a as usize].clone(),
            None => format!("g{a}"),
        }
    }

    /// Tabulates an extension-backed group; no-op for tabulated groups.
    pub fn to_tabulated(&self, cap: usize) -> Result<FiniteGroup> {
        if self.is_tabulated() {
            return Ok(self.clone());
        }
        if self.order > cap {
            return Err(Error::cap("group order", self.order, cap));
        }
        let n = self.order;
        let mut table = vec![0 as Elem; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.mul(a as Elem, b as Elem);
            }
        }
        let g = FiniteGroup::from_table(n, table, self.labels.clone())?;
        Ok(match self.generators.get() {
            Some(gens) => g.with_generators(gens.clone()),
            None => g,
        })
    }

    fn check_associativity(&self, v: &Validation) -> Result<()> {
        let n = self.order;
        let bad = |a: Elem, b: Elem, c: Elem| {
            Error::InvalidInput(format!("associativity fails for ({a}, {b}, {c})"))
        };
        if n <= v.full_associativity_cap {
            for a in 0..n as Elem {
                for b in 0..n as Elem {
                    let ab = self.mul(a, b);
                    for c in 0..n as Elem {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(bad(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(v.seed);
            for _ in 0..v.samples {
                let a = rng.gen_range(0..n) as Elem;
                let b = rng.gen_range(0..n) as Elem;
                let c = rng.gen_range(0..n) as Elem;
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(bad(a, b, c));
                }
            }
        }
        Ok(())
    }

    /// Words over `gens` reaching every element, by breadth-first search.
    /// `words[x]` lists generator positions whose product is `x`.
    pub fn words_over(&self, gens: &[Elem]) -> Result<Vec<Vec<u32>>> {
        let mut words: Vec<Option<Vec<u32>>> = vec![None; self.order];
        words[self.identity as usize] = Some(Vec::new());
        let mut queue = VecDeque::from([self.identity]);
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for (k, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if words[y as usize].is_none() {
                    let mut w = words[x as usize].clone().unwrap();
                    w.push(k as u32);
                    words[y as usize] = Some(w);
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        if reached != self.order {
            return Err(Error::InvalidInput(
                "elements do not generate the group".into(),
            ));
        }
        Ok(words.into_iter().map(Option::unwrap).collect())
    }
}

fn check_latin(order: usize, table: &[Elem]) -> Result<()> {
    let mut seen = vec![0usize; order];
    let mut stamp = 0usize;
    for r in 0..order {
        stamp += 1;
        for c in 0..order {
            let v = table[r * order + c] as usize;
            if v >= order || seen[v] == stamp {
                return Err(Error::InvalidInput(format!("row {r} is not a permutation")));
            }
            seen[v] = stamp;
        }
    }
    for c in 0..order {
        stamp += 1;
        for r in 0..order {
            let v = table[r * order + c] as usize;
            if seen[v] == stamp {
                return Err(Error::InvalidInput(format!(
                    "column {c} is not a permutation"
                )));
            }
            seen[v] = stamp;
        }
    }
    Ok(())
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a as u64, b as u64) as usize * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perms(list: &[&str]) -> Vec<Perm> {
        list.iter().map(|s| Perm::parse(s, 0).unwrap()).collect()
    }

    #[test]
    fn s3_from_two_generators() {
        let g = FiniteGroup::from_permutations(&perms(&["(1 2 3)", "(1 2)"]), 5040).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.label(g.identity()), "()");
    }

    #[test]
    fn empty_generating_set_is_trivial() {
        let g = FiniteGroup::from_permutations(&[], 5040).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn klein_four_from_double_transpositions() {
        let g =
            FiniteGroup::from_permutations(&perms(&["(1 2)(3 4)", "(1 3)(2 4)"]), 5040).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g
            .elements()
            .filter(|&x| x != g.identity())
            .all(|x| g.element_order(x) == 2));
    }

    #[test]
    fn cap_is_enforced() {
        let err =
            FiniteGroup::from_permutations(&perms(&["(1 2 3 4 5)", "(1 2)"]), 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // A Latin square with identity 0 that is not a group (order 5 loop).
        let t: Vec<Elem> = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(FiniteGroup::from_table(5, t, None).is_err());
    }

    #[test]
    fn abelian_table_orders() {
        let g = FiniteGroup::abelian_table(&[2, 4]).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.exponent(), 4);
    }
}
