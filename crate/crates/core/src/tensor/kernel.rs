//! `G (x) H` (or `G ^ G`) as an extension of `D = D_H(G)` by `K = Ker phi`.
//!
//! The cosets of `K` are the elements of `D`, so Reidemeister-Schreier rewriting runs
//! directly over `D` with no coset enumeration. `K` is central, hence abelian, and its
//! relation module is reduced by integer elimination. The resulting extension is checked
//! against every defining relator before it is used.

use std::time::Instant;

use crate::abelian::{
    prime_power_parts, AbelianInvariants, AbelianPresentation, Relation, RelationReducer,
    MAX_MODULUS,
};
use crate::action::CompatiblePair;
use crate::error::{Error, Result};
use crate::extension::Extension;
use crate::group::{Elem, FiniteGroup};

use super::for_each_relator;

const NONE: u32 = u32::MAX;

pub(crate) struct KernelRoute {
    /// Number of symbols `t(g, h)`, indexed `g |H| + h`.
    n: usize,
    /// `pi[x] = g . (h . g)^-1` for `x = t(g, h)`.
    pi: Vec<Elem>,
    /// Elements of `D` in `G`; position 0 is the identity.
    d_members: Vec<Elem>,
    /// `G` element -> position in `d_members`, or `NONE`.
    d_index: Vec<u32>,
    /// `step[d n + x]`: the coset `d . pi(x)`.
    step: Vec<u32>,
    /// `back[c n + x]`: the coset `c . pi(x)^-1`.
    back: Vec<u32>,
    /// Spanning tree of the coset graph: `(parent, symbol)`; the root has `(NONE, NONE)`.
    parent: Vec<(u32, u32)>,
    kernel: AbelianPresentation,
}

pub(crate) struct RouteLimits {
    pub deadline: Option<Instant>,
    /// Cap on `|D| * n`, the number of Schreier generators.
    pub max_schreier: usize,
}

impl KernelRoute {
    /// Builds `K = Ker phi` as `K / eK` for a growing exponent bound `e`.
    ///
    /// `G (x) H` is a pi-group when `G` and `H` are, so only primes dividing `|G| |H|`
    /// occur in `K`. Once no invariant factor of `K / eK` has a full `p`-part of `e`,
    /// `K / eK = K`.
    pub(crate) fn run(pair: &CompatiblePair, exterior: bool, limits: &RouteLimits) -> Result<Self> {
        let parts = prime_power_parts(pair.g().order() as u64 * pair.h().order() as u64);
        let mut exps: Vec<u32> = parts.iter().map(|&(p, q)| 2 * q.ilog(p) + 2).collect();
        loop {
            let e = parts
                .iter()
                .zip(&exps)
                .try_fold(1u64, |acc, (&(p, _), &k)| {
                    acc.checked_mul(p.checked_pow(k)?)
                })
                .filter(|&e| e as i128 <= MAX_MODULUS)
                .ok_or_else(|| {
                    Error::LimitExceeded("exponent bound for Ker phi overflows".into())
                })?;
            let route = Self::run_modulo(pair, exterior, limits, e)?;
            let mut saturated = false;
            for (&(p, _), k) in parts.iter().zip(exps.iter_mut()) {
                let top = p.pow(*k);
                if route.kernel.moduli().iter().any(|&m| m % top == 0) {
                    *k *= 2;
                    saturated = true;
                }
            }
            if !saturated {
                return Ok(route);
            }
        }
    }

    fn run_modulo(
        pair: &CompatiblePair,
        exterior: bool,
        limits: &RouteLimits,
        modulus: u64,
    ) -> Result<Self> {
        let (g, h) = (pair.g(), pair.h());
        let nh = h.order();
        let n = g.order() * nh;
        let pi: Vec<Elem> = (0..n)
            .map(|x| {
                let (a, b) = ((x / nh) as Elem, (x % nh) as Elem);
                g.mul(a, g.inv(pair.beta().act(b, a)))
            })
            .collect();
        let d = g.subgroup_generated(pi.iter().copied());
        let mut d_members = vec![g.identity()];
        d_members.extend(d.members().iter().copied().filter(|&x| x != g.identity()));
        let nd = d_members.len();
        if nd.saturating_mul(n) > limits.max_schreier {
            return Err(Error::cap(
                "Schreier generators",
                nd.saturating_mul(n),
                limits.max_schreier,
            ));
        }
        let mut d_index = vec![NONE; g.order()];
        for (i, &x) in d_members.iter().enumerate() {
            d_index[x as usize] = i as u32;
        }
        let mut step = vec![NONE; nd * n];
        let mut back = vec![NONE; nd * n];
        for c in 0..nd {
            for x in 0..n {
                let e = d_index[g.mul(d_members[c], pi[x]) as usize];
                step[c * n + x] = e;
                back[e as usize * n + x] = c as u32;
            }
        }
        let mut parent = vec![(NONE, NONE); nd];
        let mut reached = vec![false; nd];
        reached[0] = true;
        let mut queue = vec![0u32];
        let mut head = 0;
        let mut reducer = RelationReducer::with_modulus(nd * n, modulus)?;
        while head < queue.len() {
            let c = queue[head];
            head += 1;
            for x in 0..n {
                let e = step[c as usize * n + x];
                if !reached[e as usize] {
                    reached[e as usize] = true;
                    parent[e as usize] = (c, x as u32);
                    queue.push(e);
                    // Tree edges are trivial Schreier generators.
                    reducer.kill((c as usize * n + x) as u32)?;
                }
            }
        }
        let mut terms: Vec<(u32, i64)> = Vec::with_capacity(8);
        let mut count = 0usize;
        let route = |c: usize, x: usize| (c * n + x) as u32;
        for_each_relator(pair, exterior, |letters| {
            count += 1;
            if count % 1024 == 0 {
                check_deadline(limits.deadline)?;
            }
            for start in 0..nd {
                terms.clear();
                let mut c = start;
                for &l in letters {
                    if l > 0 {
                        let x = (l - 1) as usize;
                        terms.push((route(c, x), 1));
                        c = step[c * n + x] as usize;
                    } else {
                        let x = (-l - 1) as usize;
                        c = back[c * n + x] as usize;
                        terms.push((route(c, x), -1));
                    }
                }
                if c != start {
                    return Err(Error::NotAHomomorphism(
                        "a defining relator does not map to the identity of D".into(),
                    ));
                }
                reducer.add(&terms)?;
            }
            Ok(())
        })?;
        check_deadline(limits.deadline)?;
        let kernel = reducer.finish()?;
        Ok(KernelRoute {
            n,
            pi,
            d_members,
            d_index,
            step,
            back,
            parent,
            kernel,
        })
    }

    pub(crate) fn kernel_invariants(&self) -> AbelianInvariants {
        self.kernel.invariants()
    }

    pub(crate) fn moduli(&self) -> &[u64] {
        self.kernel.moduli()
    }

    pub(crate) fn d_members(&self) -> &[Elem] {
        &self.d_members
    }

    /// Kernel coordinates of the symbol `x`, which must satisfy `pi(x) = 1`.
    pub(crate) fn kernel_vector(&self, x: usize) -> Option<Vec<u64>> {
        (self.d_index[self.pi[x] as usize] == 0).then(|| self.kernel.coords_of_generator(x as u32))
    }

    /// Rewrites a word read from coset `start` into Schreier generators; returns the end coset.
    fn rewrite(&self, letters: &[i32], start: u32) -> (Relation, u32) {
        let n = self.n;
        let mut c = start as usize;
        let mut out: Relation = Vec::with_capacity(letters.len());
        for &l in letters {
            if l > 0 {
                let x = (l - 1) as usize;
                out.push(((c * n + x) as u32, 1));
                c = self.step[c * n + x] as usize;
            } else {
                let x = (-l - 1) as usize;
                c = self.back[c * n + x] as usize;
                out.push(((c * n + x) as u32, -1));
            }
        }
        (out, c as u32)
    }

    /// The transversal word `t(d)` as symbol letters.
    fn tau(&self, d: u32) -> Vec<i32> {
        let mut letters = Vec::new();
        let mut c = d;
        while self.parent[c as usize].0 != NONE {
            let (p, x) = self.parent[c as usize];
            letters.push(x as i32 + 1);
            c = p;
        }
        letters.reverse();
        letters
    }

    /// The word of a Schreier generator `s(d, x) = t(d) x t(d pi(x))^-1`.
    fn schreier_word(&self, s: u32) -> Vec<i32> {
        let (d, x) = (s as usize / self.n, s as usize % self.n);
        let mut w = self.tau(d as u32);
        w.push(x as i32 + 1);
        let e = self.step[d * self.n + x];
        w.extend(self.tau(e).iter().rev().map(|&l| -l));
        w
    }

    fn top_group(&self, g: &FiniteGroup) -> Result<FiniteGroup> {
        let nd = self.d_members.len();
        let mut table = vec![0 as Elem; nd * nd];
        for a in 0..nd {
            for b in 0..nd {
                table[a * nd + b] =
                    self.d_index[g.mul(self.d_members[a], self.d_members[b]) as usize];
            }
        }
        let labels = self.d_members.iter().map(|&x| g.label(x)).collect();
        FiniteGroup::from_table(nd, table, Some(labels))
    }

    /// Conjugation action of `t(d)` on `K` for every `d`, as column vectors.
    fn action(&self) -> Result<Vec<u64>> {
        let moduli = self.kernel.moduli();
        let k = moduli.len();
        let nd = self.d_members.len();
        let preimages: Vec<Relation> = (0..k).map(|j| self.kernel.basis_preimage(j)).collect();
        let mut out = vec![0u64; nd * k * k];
        for i in 0..k {
            out[i * k + i] = 1 % moduli[i];
        }
        // Parents precede children in BFS order, so walk the coset graph in that order.
        let mut order = vec![0u32];
        let mut head = 0;
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); nd];
        for c in 1..nd {
            children[self.parent[c].0 as usize].push(c as u32);
        }
        while head < order.len() {
            let c = order[head];
            head += 1;
            order.extend(children[c as usize].iter().copied());
        }
        let mut letter_cache: std::collections::HashMap<u32, Vec<u64>> = Default::default();
        for &c in &order[1..] {
            let (p, x) = self.parent[c as usize];
            if !letter_cache.contains_key(&x) {
                let m = self.letter_action(x, &preimages)?;
                letter_cache.insert(x, m);
            }
            let mx = &letter_cache[&x];
            let base_p = p as usize * k * k;
            let base_c = c as usize * k * k;
            for j in 0..k {
                // image_c(e_j) = M_p(M_x(e_j))
                for i in 0..k {
                    let mut acc: u128 = 0;
                    for l in 0..k {
                        acc += mx[j * k + l] as u128 * out[base_p + l * k + i] as u128;
                    }
                    out[base_c + j * k + i] = (acc % moduli[i] as u128) as u64;
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `a -> x a x^-1` on `K` for the symbol `x`.
    fn letter_action(&self, x: u32, preimages: &[Relation]) -> Result<Vec<u64>> {
        let moduli = self.kernel.moduli();
        let k = moduli.len();
        let mut m = vec![0u64; k * k];
        for (j, pre) in preimages.iter().enumerate() {
            let mut acc = vec![0u128; k];
            for &(s, coeff) in pre {
                let mut w = vec![x as i32 + 1];
                w.extend(self.schreier_word(s));
                w.push(-(x as i32 + 1));
                let (expr, end) = self.rewrite(&w, 0);
                if end != 0 {
                    return Err(Error::RewriteFailed("conjugate left the kernel".into()));
                }
                let v = self.kernel.coords(&expr);
                for i in 0..k {
                    let c = coeff.rem_euclid(moduli[i] as i64) as u128;
                    acc[i] = (acc[i] + c * v[i] as u128) % moduli[i] as u128;
                }
            }
            for i in 0..k {
                m[j * k + i] = acc[i] as u64;
            }
        }
        Ok(m)
    }

    /// Whether every transversal element centralizes `K`; then `K` is central, since the
    /// symbols are `K`-multiples of transversal elements. Checked on tree letters.
    pub(crate) fn is_central(&self) -> Result<bool> {
        let moduli = self.kernel.moduli();
        let k = moduli.len();
        let preimages: Vec<Relation> = (0..k).map(|j| self.kernel.basis_preimage(j)).collect();
        let mut letters: Vec<u32> = self.parent[1..].iter().map(|&(_, x)| x).collect();
        letters.sort_unstable();
        letters.dedup();
        for x in letters {
            let m = self.letter_action(x, &preimages)?;
            for j in 0..k {
                for i in 0..k {
                    if m[j * k + i] != u64::from(i == j) % moduli[i] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Builds the extension; does not check the defining relators (see `verify`).
    pub(crate) fn extension(&self, g: &FiniteGroup) -> Result<Extension> {
        let top = self.top_group(g)?;
        let nd = self.d_members.len();
        let moduli = self.kernel.moduli().to_vec();
        let k = moduli.len();
        let action = self.action()?;
        let taus: Vec<Vec<i32>> = (0..nd as u32).map(|d| self.tau(d)).collect();
        let mut cocycle = vec![0u64; nd * nd * k];
        for d1 in 0..nd {
            for d2 in 0..nd {
                let d12 = top.mul(d1 as Elem, d2 as Elem);
                let mut w = taus[d1].clone();
                w.extend_from_slice(&taus[d2]);
                w.extend(taus[d12 as usize].iter().rev().map(|&l| -l));
                let (expr, end) = self.rewrite(&w, 0);
                if end != 0 {
                    return Err(Error::RewriteFailed(
                        "transversal product left the kernel".into(),
                    ));
                }
                let v = self.kernel.coords(&expr);
                cocycle[(d1 * nd + d2) * k..][..k].copy_from_slice(&v);
            }
        }
        Extension::new(top, moduli, action, cocycle)
    }

    /// Images of the symbols: `t = s(1, t) t(pi t)`.
    pub(crate) fn generator_images(&self, ext: &Extension) -> Vec<Elem> {
        (0..self.n)
            .map(|x| {
                let a = self.kernel.coords_of_generator(x as u32);
                ext.join(&a, self.d_index[self.pi[x] as usize])
            })
            .collect()
    }
}

/// Evaluates every defining relator in `ext` under `gens`.
pub(crate) fn verify(
    pair: &CompatiblePair,
    exterior: bool,
    ext: &Extension,
    gens: &[Elem],
    deadline: Option<Instant>,
) -> Result<()> {
    let inverses: Vec<Elem> = gens.iter().map(|&x| ext.inv(x)).collect();
    let mut count = 0usize;
    for_each_relator(pair, exterior, |letters| {
        count += 1;
        if count % 4096 == 0 {
            check_deadline(deadline)?;
        }
        let mut acc = ext.identity();
        for &l in letters {
            let y = if l > 0 {
                gens[(l - 1) as usize]
            } else {
                inverses[(-l - 1) as usize]
            };
            acc = ext.mul(acc, y);
        }
        if acc != ext.identity() {
            return Err(Error::RewriteFailed(format!(
                "relator {letters:?} does not hold in the computed group"
            )));
        }
        Ok(())
    })
}

pub(crate) fn check_deadline(deadline: Option<Instant>) -> Result<()> {
    match deadline {
        Some(t) if Instant::now() > t => Err(Error::LimitExceeded("time budget exhausted".into())),
        _ => Ok(()),
    }
}
