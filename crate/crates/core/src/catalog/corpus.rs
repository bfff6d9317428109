//! The standard corpus: every abelian type, the classical non-abelian families, a metacyclic
//! family and central extensions of its members, deduplicated up to isomorphism.

use std::collections::HashMap;

use crate::abelian::cayley_abelianization;
use crate::group::{gcd, FiniteGroup};

use super::build;
use super::iso::{are_isomorphic, fingerprint, Fingerprint};
use super::spec::{ActionSpec, GroupSpec, Sign};

pub const MAX_CORPUS_ORDER: usize = 64;

/// Largest metacyclic base that gets central extensions.
const MAX_EXTENSION_BASE: usize = 32;

/// Whether `G` has a cyclic normal subgroup with cyclic quotient.
pub fn is_metacyclic(g: &FiniteGroup) -> bool {
    g.elements().any(|a| {
        let n = g.subgroup_generated([a]);
        g.is_normal(&n) && g.quotient(&n).map(|(q, _)| q.is_cyclic()).unwrap_or(false)
    })
}

struct Corpus {
    max_order: usize,
    entries: Vec<(GroupSpec, FiniteGroup)>,
    by_fingerprint: HashMap<Fingerprint, Vec<usize>>,
}

impl Corpus {
    /// Keeps `spec` unless it is too large or isomorphic to an earlier entry.
    fn offer(&mut self, spec: GroupSpec) {
        let g = match build(&spec) {
            Ok(g) => g,
            Err(e) => panic!("corpus spec {spec} does not build: {e}"),
        };
        if g.order() > self.max_order {
            return;
        }
        let key = fingerprint(&g);
        let same = self.by_fingerprint.entry(key).or_default();
        if same.iter().any(|&i| are_isomorphic(&self.entries[i].1, &g)) {
            return;
        }
        same.push(self.entries.len());
        self.entries.push((spec, g));
    }
}

/// Invariant-factor lists `d_1 | d_2 | ... | d_k` with product `n` and `d_1 > 1`.
fn abelian_types(n: u64) -> Vec<Vec<u64>> {
    fn rec(remaining: u64, smallest: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if remaining == 1 {
            out.push(prefix.clone());
            return;
        }
        for d in smallest..=remaining {
            // Each later factor is a multiple of `d`, so `d` must divide what is left.
            if remaining % d == 0 && prefix.last().map_or(true, |&p| d % p == 0) {
                prefix.push(d);
                rec(remaining / d, d, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, 2, &mut Vec::new(), &mut out);
    out
}

/// Bilinear cocycles `x_i(g) y_j(h) mod k` pulled back from `G^ab`, over the pairs of invariant
/// factors divisible by `k`, preceded by the zero cocycle.
fn bilinear_cocycles(g: &FiniteGroup, k: u64) -> Vec<Vec<Vec<u64>>> {
    let members: Vec<_> = g.elements().collect();
    let ab = cayley_abelianization(g, &members, g.generating_set()).expect("finite abelianization");
    let moduli = ab.moduli().to_vec();
    let coords: Vec<Vec<u64>> = g.elements().map(|x| ab.coords_of_generator(x)).collect();
    let usable: Vec<usize> = (0..moduli.len()).filter(|&i| moduli[i] % k == 0).collect();
    let n = g.order();
    let mut out = vec![vec![vec![0u64; n]; n]];
    for &i in &usable {
        for &j in &usable {
            let table = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| coords[a][i] % k * (coords[b][j] % k) % k)
                        .collect()
                })
                .collect();
            out.push(table);
        }
    }
    out
}

/// Deterministic corpus up to `max_order` (clamped to 64), sorted by order.
pub fn standard_corpus(max_order: usize) -> Vec<GroupSpec> {
    corpus_groups(max_order)
        .into_iter()
        .map(|(s, _)| s)
        .collect()
}

/// The corpus together with the built groups.
pub fn corpus_groups(max_order: usize) -> Vec<(GroupSpec, FiniteGroup)> {
    let max_order = max_order.clamp(1, MAX_CORPUS_ORDER);
    let max = max_order as u64;
    let mut c = Corpus {
        max_order,
        entries: Vec::new(),
        by_fingerprint: HashMap::new(),
    };
    c.offer(GroupSpec::trivial());
    for n in 2..=max {
        for factors in abelian_types(n) {
            c.offer(if factors.len() == 1 {
                GroupSpec::Cyclic { n }
            } else {
                GroupSpec::Abelian { factors }
            });
        }
    }
    c.offer(GroupSpec::Symmetric { n: 3 });
    c.offer(GroupSpec::Symmetric { n: 4 });
    c.offer(GroupSpec::Alternating { n: 4 });
    for n in 3..=max / 2 {
        c.offer(GroupSpec::Dihedral { n });
    }
    for n in 2..=max / 4 {
        c.offer(GroupSpec::Dicyclic { n });
    }
    c.offer(GroupSpec::Heisenberg { p: 3 });
    c.offer(GroupSpec::Extraspecial {
        p: 3,
        sign: Sign::Minus,
        rank: 1,
    });
    c.offer(GroupSpec::Extraspecial {
        p: 2,
        sign: Sign::Plus,
        rank: 2,
    });
    c.offer(GroupSpec::Extraspecial {
        p: 2,
        sign: Sign::Minus,
        rank: 2,
    });
    for m in 3..=max / 2 {
        for n in 2..=max / m {
            for r in 2..m {
                if gcd(r, m) == 1 && super::pow_mod(r, n, m) == 1 {
                    c.offer(GroupSpec::Metacyclic { m, n, r });
                }
            }
        }
    }
    let direct = |a: GroupSpec, b: GroupSpec| GroupSpec::Direct {
        factors: vec![a, b],
    };
    for spec in [
        direct(GroupSpec::Dihedral { n: 4 }, GroupSpec::Cyclic { n: 2 }),
        direct(GroupSpec::Dicyclic { n: 2 }, GroupSpec::Cyclic { n: 2 }),
        direct(GroupSpec::Symmetric { n: 3 }, GroupSpec::Cyclic { n: 3 }),
        direct(GroupSpec::Alternating { n: 4 }, GroupSpec::Cyclic { n: 2 }),
        direct(GroupSpec::Symmetric { n: 3 }, GroupSpec::Symmetric { n: 3 }),
        GroupSpec::Semidirect {
            normal: Box::new(GroupSpec::Abelian {
                factors: vec![3, 3],
            }),
            complement: Box::new(GroupSpec::Cyclic { n: 2 }),
            action: ActionSpec::Inversion,
        },
        GroupSpec::Semidirect {
            normal: Box::new(GroupSpec::Abelian {
                factors: vec![4, 4],
            }),
            complement: Box::new(GroupSpec::Cyclic { n: 2 }),
            action: ActionSpec::Inversion,
        },
        // SL(2, 3), solvable but not supersolvable.
        GroupSpec::Presentation {
            text: "gens: a,b; rels: aaaBBB, ababAAA".into(),
        },
    ] {
        c.offer(spec);
    }
    let bases: Vec<(GroupSpec, FiniteGroup)> = c
        .entries
        .iter()
        .filter(|(_, g)| g.order() <= MAX_EXTENSION_BASE && g.order() > 1 && is_metacyclic(g))
        .cloned()
        .collect();
    for (spec, g) in bases {
        for k in [2u64, 3] {
            if g.order() as u64 * k > max {
                continue;
            }
            for cocycle in bilinear_cocycles(&g, k) {
                c.offer(GroupSpec::CentralExt {
                    base: Box::new(spec.clone()),
                    center: k,
                    cocycle,
                });
            }
        }
    }
    let mut entries = c.entries;
    entries.sort_by_key(|(_, g)| g.order());
    entries
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_types_by_order() {
        assert_eq!(abelian_types(8), vec![vec![2, 2, 2], vec![2, 4], vec![8]]);
        assert_eq!(abelian_types(12), vec![vec![2, 6], vec![12]]);
        assert_eq!(abelian_types(7), vec![vec![7]]);
    }
}
