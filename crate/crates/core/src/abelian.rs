//! Finite abelian groups given by generators and integer relations.
//!
//! Relations are fed one at a time into a sparse reducer that eliminates generators
//! occurring with coefficient +-1 (Tietze moves). The residue, over the surviving
//! generators, goes through a dense echelon form and a Smith normal form computed
//! modulo the group order, keeping the column transform so that every original
//! generator can be mapped to invariant-factor coordinates.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{gcd, Elem, FiniteGroup};
use crate::subgroup::Subgroup;

/// Sparse integer combination of generators, sorted by generator.
pub type Relation = Vec<(u32, i64)>;

/// Invariant factors `d_1 | d_2 | ... | d_k`, all at least 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianInvariants {
    factors: Vec<u64>,
}

impl AbelianInvariants {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::InvalidInput(format!(
                "invariant factors must be at least 2: {factors:?}"
            )));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidInput(format!(
                "invariant factors must form a divisibility chain: {factors:?}"
            )));
        }
        Ok(AbelianInvariants { factors })
    }

    pub fn trivial() -> Self {
        AbelianInvariants::default()
    }

    /// Normal form of `Z/n_1 x ... x Z/n_k` for arbitrary positive `n_i`.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &n in orders {
            for (p, q) in prime_power_parts(n) {
                by_prime.entry(p).or_default().push(q);
            }
        }
        let width = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for powers in by_prime.values_mut() {
            powers.sort_unstable();
            // Largest powers go to the last factors.
            for (slot, &q) in factors[width - powers.len()..]
                .iter_mut()
                .zip(powers.iter())
            {
                *slot *= q;
            }
        }
        AbelianInvariants { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// `(p, p^k)` for each prime power exactly dividing `n`.
pub(crate) fn prime_power_parts(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

/// Online Tietze reducer for a finitely generated abelian group.
///
/// With a modulus `e` it presents `Z^n / (L + e Z^n)`: coefficients live in `Z/e` and any
/// coefficient prime to `e` eliminates its generator.
pub struct RelationReducer {
    /// `Some(expr)`: the generator was eliminated and equals `expr`.
    subst: Vec<Option<Relation>>,
    residual: Vec<Relation>,
    scratch: Vec<i64>,
    touched: Vec<u32>,
    modulus: Option<i64>,
}

impl RelationReducer {
    pub fn new(generators: usize) -> Self {
        RelationReducer {
            subst: vec![None; generators],
            residual: Vec::new(),
            scratch: vec![0; generators],
            touched: Vec::new(),
            modulus: None,
        }
    }

    /// A reducer for `Z^n / (L + e Z^n)`, i.e. modulo the exponent bound `e`.
    pub fn with_modulus(generators: usize, e: u64) -> Result<Self> {
        if e == 0 || e as i128 > MAX_MODULUS {
            return Err(Error::InvalidInput(format!("modulus {e} out of range")));
        }
        Ok(RelationReducer {
            modulus: Some(e as i64),
            ..RelationReducer::new(generators)
        })
    }

    pub fn generators(&self) -> usize {
        self.subst.len()
    }

    /// Imposes `generator = 0`.
    pub fn kill(&mut self, generator: u32) -> Result<()> {
        self.add(&[(generator, 1)])
    }

    /// Imposes `sum c_i x_i = 0`.
    pub fn add(&mut self, relation: &[(u32, i64)]) -> Result<()> {
        let r = self.resolve(relation)?;
        if r.is_empty() {
            return Ok(());
        }
        if !self.eliminate_unit(&r) {
            self.residual.push(r);
        }
        Ok(())
    }

    /// Uses a relation with a unit coefficient to eliminate that generator.
    fn eliminate_unit(&mut self, r: &Relation) -> bool {
        let found = match self.modulus {
            None => r
                .iter()
                .position(|&(_, c)| c == 1 || c == -1)
                .map(|pos| (pos, r[pos].1)),
            Some(e) => {
                let is_unit = |c: i64| gcd(c as u64, e as u64) == 1;
                r.iter()
                    .position(|&(_, c)| c == 1 || c == e - 1)
                    .or_else(|| r.iter().position(|&(_, c)| is_unit(c)))
                    .map(|pos| (pos, inverse_mod(r[pos].1 as i128, e as i128) as i64))
            }
        };
        let Some((pos, inv)) = found else {
            return false;
        };
        let x = r[pos].0;
        // c x + rest = 0  =>  x = -c^-1 rest
        let expr: Relation = r
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, &(y, d))| match self.modulus {
                None => (y, -inv * d),
                Some(e) => (y, mul_mod(e - inv, d, e)),
            })
            .collect();
        self.subst[x as usize] = Some(expr);
        true
    }

    /// Rewrites the expression of an eliminated generator over survivors only.
    fn ensure_resolved(&mut self, root: u32) -> Result<()> {
        let mut stack = vec![(root, false)];
        while let Some((x, expanded)) = stack.pop() {
            let Some(expr) = &self.subst[x as usize] else {
                continue;
            };
            if expr.iter().all(|&(y, _)| self.subst[y as usize].is_none()) {
                continue;
            }
            if !expanded {
                stack.push((x, true));
                for &(y, _) in expr {
                    if self.subst[y as usize].is_some() {
                        stack.push((y, false));
                    }
                }
                continue;
            }
            let expr = self.subst[x as usize].take().unwrap();
            for &(y, c) in &expr {
                match &self.subst[y as usize] {
                    Some(sub) => {
                        for &(z, d) in sub {
                            accumulate(
                                &mut self.scratch,
                                &mut self.touched,
                                self.modulus,
                                z,
                                c,
                                d,
                            )?;
                        }
                    }
                    None => {
                        accumulate(&mut self.scratch, &mut self.touched, self.modulus, y, c, 1)?
                    }
                }
            }
            let resolved = drain(&mut self.scratch, &mut self.touched);
            self.subst[x as usize] = Some(resolved);
        }
        Ok(())
    }

    /// Expresses a combination of original generators over the current survivors.
    fn resolve(&mut self, relation: &[(u32, i64)]) -> Result<Relation> {
        for &(y, _) in relation {
            if y as usize >= self.subst.len() {
                return Err(Error::InvalidInput(format!("generator {y} out of range")));
            }
            self.ensure_resolved(y)?;
        }
        for &(y, c) in relation {
            let c = match self.modulus {
                Some(e) => c.rem_euclid(e),
                None => c,
            };
            match &self.subst[y as usize] {
                Some(sub) => {
                    for &(z, d) in sub {
                        accumulate(&mut self.scratch, &mut self.touched, self.modulus, z, c, d)?;
                    }
                }
                None => accumulate(&mut self.scratch, &mut self.touched, self.modulus, y, c, 1)?,
            }
        }
        Ok(drain(&mut self.scratch, &mut self.touched))
    }

    /// Finishes the elimination and computes the Smith normal form of the residue.
    pub fn finish(mut self) -> Result<AbelianPresentation> {
        // Residual relations may have acquired unit coefficients from later eliminations.
        loop {
            let pending = std::mem::take(&mut self.residual);
            let mut progressed = false;
            for r in pending {
                let r = self.resolve(&r)?;
                if r.is_empty() {
                    continue;
                }
                if self.eliminate_unit(&r) {
                    progressed = true;
                } else {
                    self.residual.push(r);
                }
            }
            if !progressed {
                break;
            }
        }
        for x in 0..self.subst.len() as u32 {
            self.ensure_resolved(x)?;
        }
        let survivors: Vec<u32> = (0..self.subst.len() as u32)
            .filter(|&x| self.subst[x as usize].is_none())
            .collect();
        let mut index = vec![u32::MAX; self.subst.len()];
        for (i, &x) in survivors.iter().enumerate() {
            index[x as usize] = i as u32;
        }
        let s = survivors.len();
        let mut seen: HashSet<Vec<(u32, i64)>> = HashSet::new();
        let mut rows: Vec<Vec<i128>> = Vec::new();
        for r in std::mem::take(&mut self.residual) {
            let r = self.resolve(&r)?;
            if r.is_empty() {
                continue;
            }
            let key: Vec<(u32, i64)> = match self.modulus {
                Some(_) => r.clone(),
                None => {
                    let sign = if r[0].1 < 0 { -1 } else { 1 };
                    r.iter().map(|&(x, c)| (x, sign * c)).collect()
                }
            };
            if !seen.insert(key) {
                continue;
            }
            let mut row = vec![0i128; s];
            for (x, c) in r {
                row[index[x as usize] as usize] = c as i128;
            }
            rows.push(row);
        }
        let snf = smith_with_transform(s, rows, self.modulus.map(i128::from))?;
        Ok(AbelianPresentation {
            subst: self.subst,
            index,
            snf,
        })
    }
}

#[inline]
fn mul_mod(a: i64, b: i64, e: i64) -> i64 {
    (a as i128 * b as i128).rem_euclid(e as i128) as i64
}

#[inline]
fn accumulate(
    scratch: &mut [i64],
    touched: &mut Vec<u32>,
    modulus: Option<i64>,
    z: u32,
    c: i64,
    d: i64,
) -> Result<()> {
    let slot = &mut scratch[z as usize];
    if *slot == 0 {
        touched.push(z);
    }
    *slot = match modulus {
        Some(e) => ((*slot as i128 + c as i128 * d as i128).rem_euclid(e as i128)) as i64,
        None => c
            .checked_mul(d)
            .and_then(|v| slot.checked_add(v))
            .ok_or_else(|| Error::LimitExceeded("relation coefficients overflow".into()))?,
    };
    Ok(())
}

fn drain(scratch: &mut [i64], touched: &mut Vec<u32>) -> Relation {
    let mut out: Relation = Vec::with_capacity(touched.len());
    for &z in touched.iter() {
        let v = std::mem::take(&mut scratch[z as usize]);
        if v != 0 {
            out.push((z, v));
        }
    }
    touched.clear();
    out.sort_unstable_by_key(|&(z, _)| z);
    out
}

/// Output of `RelationReducer::finish`.
pub struct AbelianPresentation {
    subst: Vec<Option<Relation>>,
    /// Generator -> survivor position, or `u32::MAX`.
    index: Vec<u32>,
    snf: SmithForm,
}

impl AbelianPresentation {
    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants {
            factors: self.snf.moduli.clone(),
        }
    }

    /// The invariant factors; coordinates are taken modulo these.
    pub fn moduli(&self) -> &[u64] {
        &self.snf.moduli
    }

    /// Coordinates of a combination of original generators.
    pub fn coords(&self, expr: &[(u32, i64)]) -> Vec<u64> {
        let k = self.snf.moduli.len();
        let mut acc = vec![0i128; k];
        let moduli = &self.snf.moduli;
        let mut add = |x: u32, c: i128| {
            let row = &self.snf.coords[self.index[x as usize] as usize];
            for i in 0..k {
                let m = moduli[i] as i128;
                acc[i] = (acc[i] + c.rem_euclid(m) * row[i]).rem_euclid(m);
            }
        };
        for &(y, c) in expr {
            match &self.subst[y as usize] {
                Some(sub) => {
                    for &(z, d) in sub {
                        add(z, c as i128 * d as i128);
                    }
                }
                None => add(y, c as i128),
            }
        }
        acc.iter()
            .zip(&self.snf.moduli)
            .map(|(&v, &m)| v.rem_euclid(m as i128) as u64)
            .collect()
    }

    pub fn coords_of_generator(&self, x: u32) -> Vec<u64> {
        self.coords(&[(x, 1)])
    }

    /// A combination of original generators mapping to the `i`-th basis vector.
    pub fn basis_preimage(&self, i: usize) -> Relation {
        let mut out: Relation = self.snf.preimages[i]
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(j, &c)| (self.survivor(j), c as i64))
            .collect();
        out.sort_unstable_by_key(|&(x, _)| x);
        out
    }

    fn survivor(&self, j: usize) -> u32 {
        self.index.iter().position(|&p| p as usize == j).unwrap() as u32
    }
}

struct SmithForm {
    moduli: Vec<u64>,
    /// For each survivor, its coordinates in the kept basis.
    coords: Vec<Vec<i128>>,
    /// For each kept basis vector, a survivor combination mapping to it.
    preimages: Vec<Vec<i128>>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // Returns (g, u, v) with u a + v b = g >= 0.
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn overflow() -> Error {
    Error::LimitExceeded("integer overflow in Smith normal form".into())
}

/// Largest modulus for arithmetic in `Z/E`; products of two residues fit in `i128`.
pub(crate) const MAX_MODULUS: i128 = 1 << 62;

/// Echelon form over Z, switching to arithmetic modulo the determinant at full rank. With
/// `known` set, the lattice is taken to contain `known Z^s` from the start.
fn echelon(s: usize, rows: Vec<Vec<i128>>, known: Option<i128>) -> Result<(Vec<Vec<i128>>, i128)> {
    let mut ech: Vec<Option<Vec<i128>>> = vec![None; s];
    let mut rank = 0;
    let mut modulus: Option<i128> = None;
    if let Some(e) = known {
        for (i, slot) in ech.iter_mut().enumerate() {
            let mut r = vec![0; s];
            r[i] = e;
            *slot = Some(r);
        }
        rank = s;
        modulus = Some(e);
    }
    let reduce = |row: &mut [i128], m: Option<i128>| {
        if let Some(m) = m {
            for v in row.iter_mut() {
                *v = v.rem_euclid(m);
            }
        }
    };
    for mut r in rows {
        reduce(&mut r, modulus);
        for i in 0..s {
            if r[i] == 0 {
                continue;
            }
            match ech[i].take() {
                None => {
                    ech[i] = Some(r);
                    rank += 1;
                    if rank == s {
                        let mut d: i128 = 1;
                        for (j, row) in ech.iter_mut().enumerate() {
                            let row = row.as_mut().unwrap();
                            if row[j] < 0 {
                                row.iter_mut().for_each(|v| *v = -*v);
                            }
                            d = d.checked_mul(row[j]).ok_or_else(overflow)?;
                        }
                        for (j, row) in ech.iter_mut().enumerate() {
                            let row = row.as_mut().unwrap();
                            reduce(row, Some(d));
                            if row[j] == 0 {
                                row[j] = d;
                            }
                        }
                        modulus = Some(d);
                    }
                    break;
                }
                Some(mut p) => {
                    let (g, u, v) = ext_gcd(p[i], r[i]);
                    let a = p[i] / g;
                    let b = r[i] / g;
                    for j in i..s {
                        let (pj, rj) = (p[j], r[j]);
                        p[j] = u
                            .checked_mul(pj)
                            .zip(v.checked_mul(rj))
                            .and_then(|(x, y)| x.checked_add(y))
                            .ok_or_else(overflow)?;
                        r[j] = a
                            .checked_mul(rj)
                            .zip(b.checked_mul(pj))
                            .and_then(|(x, y)| x.checked_sub(y))
                            .ok_or_else(overflow)?;
                    }
                    reduce(&mut p, modulus);
                    reduce(&mut r, modulus);
                    if let Some(m) = modulus {
                        if p[i] == 0 {
                            p[i] = m;
                        }
                    }
                    ech[i] = Some(p);
                }
            }
        }
    }
    if rank < s {
        return Err(Error::Infinite(format!(
            "relation matrix has rank {rank} on {s} generators"
        )));
    }
    Ok((
        ech.into_iter().map(Option::unwrap).collect(),
        modulus.unwrap_or(1),
    ))
}

/// Smith normal form of the lattice spanned by `rows` in `Z^s`, which must have full rank.
fn smith_with_transform(s: usize, rows: Vec<Vec<i128>>, known: Option<i128>) -> Result<SmithForm> {
    if s == 0 {
        return Ok(SmithForm {
            moduli: Vec::new(),
            coords: Vec::new(),
            preimages: Vec::new(),
        });
    }
    let (mut m, d) = echelon(s, rows, known)?;
    // Row vectors: new coordinates are x * c; c_inv maps them back.
    let mut c: Vec<Vec<i128>> = (0..s).map(|i| unit(s, i)).collect();
    let mut c_inv: Vec<Vec<i128>> = (0..s).map(|i| unit(s, i)).collect();
    let md = |v: i128| v.rem_euclid(d);
    let mut diag = vec![d; s];
    // The lattice is rowspan(m) + d Z^s, so entries live in Z/d. Every restart below strictly
    // shrinks gcd(pivot, d) within the divisors of d, which bounds the work.
    let gd = |v: i128| gcd(v as u64, d as u64) as i128;
    for v in m.iter_mut().flatten() {
        *v = md(*v);
    }
    'pivots: for t in 0..s {
        loop {
            let mut best: Option<(i128, usize, usize)> = None;
            for i in t..s {
                for j in t..s {
                    let v = m[i][j];
                    if v != 0 && best.is_none_or(|(b, _, _)| gd(v) < b) {
                        best = Some((gd(v), i, j));
                    }
                }
            }
            let Some((g, pi, pj)) = best else {
                // The trailing block is 0 mod d, so the remaining factors are all d.
                break 'pivots;
            };
            m.swap(t, pi);
            if pj != t {
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
                for row in c.iter_mut() {
                    row.swap(t, pj);
                }
                c_inv.swap(t, pj);
            }
            // m[t][t] = g u with u a unit mod d; scaling a row by a unit keeps the lattice.
            let u = unit_part(m[t][t], g, d);
            let u_inv = inverse_mod(u, d);
            for j in t..s {
                m[t][j] = md(m[t][j] * u_inv);
            }
            debug_assert_eq!(m[t][t], g);
            let mut restart = false;
            for i in t + 1..s {
                if m[i][t] % g != 0 {
                    // Row combination making the pivot gcd(g, m[i][t]), a proper divisor of g.
                    let (h, u, v) = ext_gcd(g, m[i][t]);
                    let (a, b) = (g / h, m[i][t] / h);
                    for j in t..s {
                        let (x, y) = (m[t][j], m[i][j]);
                        m[t][j] = md(u * x + v * y);
                        m[i][j] = md(a * y - b * x);
                    }
                    restart = true;
                    break;
                }
                let q = m[i][t] / g;
                for j in t..s {
                    m[i][j] = md(m[i][j] - q * m[t][j]);
                }
            }
            if restart {
                continue;
            }
            for j in t + 1..s {
                if m[t][j] % g != 0 {
                    let (h, u, v) = ext_gcd(g, m[t][j]);
                    let (a, b) = (g / h, m[t][j] / h);
                    column_op(&mut m, &mut c, &mut c_inv, t, j, [u, v, a, b], d);
                    restart = true;
                    break;
                }
                let q = m[t][j] / g;
                // col_j -= q col_t, as the unimodular [[1, -q], [0, 1]].
                column_op(&mut m, &mut c, &mut c_inv, t, j, [1, 0, 1, q], d);
            }
            if restart {
                continue;
            }
            // Row and column t are now (g, 0, ..., 0). The block must be divisible by g.
            match (t + 1..s).find(|&i| (t + 1..s).any(|j| m[i][j] % g != 0)) {
                Some(i) => {
                    for j in t..s {
                        m[t][j] = md(m[t][j] + m[i][j]);
                    }
                }
                None => {
                    diag[t] = g;
                    break;
                }
            }
        }
    }
    let kept: Vec<usize> = (0..s).filter(|&t| diag[t] > 1).collect();
    let moduli: Vec<u64> = kept.iter().map(|&t| diag[t] as u64).collect();
    let coords = (0..s)
        .map(|j| kept.iter().map(|&t| c[j][t].rem_euclid(diag[t])).collect())
        .collect();
    let preimages = kept.iter().map(|&t| c_inv[t].clone()).collect();
    debug_assert!(moduli.windows(2).all(|w| w[1] % w[0] == 0));
    Ok(SmithForm {
        moduli,
        coords,
        preimages,
    })
}

/// Replaces columns `t, j` by `u col_t + v col_j` and `a col_j - b col_t`, where
/// `u a + v b = 1`, applying the inverse to the rows of `c_inv`.
fn column_op(
    m: &mut [Vec<i128>],
    c: &mut [Vec<i128>],
    c_inv: &mut [Vec<i128>],
    t: usize,
    j: usize,
    [u, v, a, b]: [i128; 4],
    d: i128,
) {
    for row in m.iter_mut().chain(c.iter_mut()) {
        let (x, y) = (row[t], row[j]);
        row[t] = (u * x + v * y).rem_euclid(d);
        row[j] = (a * y - b * x).rem_euclid(d);
    }
    let (rt, rj) = (c_inv[t].clone(), c_inv[j].clone());
    for k in 0..rt.len() {
        c_inv[t][k] = (a * rt[k] + b * rj[k]).rem_euclid(d);
        c_inv[j][k] = (-v * rt[k] + u * rj[k]).rem_euclid(d);
    }
}

/// A unit `u` mod `d` with `x = g u` mod `d`, where `g = gcd(x, d)`.
fn unit_part(x: i128, g: i128, d: i128) -> i128 {
    let (x, n) = (x / g, d / g);
    // x is a unit mod n; lift it to a unit mod d by adding multiples of n.
    (0..)
        .map(|k| x + k * n)
        .find(|&y| gcd(y.rem_euclid(d) as u64, d as u64) == 1)
        .unwrap()
        .rem_euclid(d)
}

fn inverse_mod(u: i128, d: i128) -> i128 {
    let (_, a, _) = ext_gcd(u, d);
    a.rem_euclid(d)
}

fn unit(s: usize, i: usize) -> Vec<i128> {
    let mut v = vec![0; s];
    v[i] = 1;
    v
}

/// Invariants of `Z^s / <rows>` for a full-rank dense relation matrix.
pub fn smith_invariants(s: usize, rows: &[Vec<i64>]) -> Result<AbelianInvariants> {
    let mut reducer = RelationReducer::new(s);
    for row in rows {
        let rel: Relation = row
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(i, &c)| (i as u32, c))
            .collect();
        reducer.add(&rel)?;
    }
    Ok(reducer.finish()?.invariants())
}

/// Invariants of `(Z/m_1 x ... x Z/m_k) / <vectors>`.
pub fn quotient_invariants(moduli: &[u64], vectors: &[Vec<u64>]) -> Result<AbelianInvariants> {
    let k = moduli.len();
    let exponent = moduli.iter().fold(1u64, |acc, &m| acc / gcd(acc, m) * m);
    let mut reducer = RelationReducer::with_modulus(k, exponent)?;
    for (i, &m) in moduli.iter().enumerate() {
        reducer.add(&[(i as u32, m as i64)])?;
    }
    for v in vectors {
        let rel: Relation = v
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(i, &c)| (i as u32, c as i64))
            .collect();
        reducer.add(&rel)?;
    }
    Ok(reducer.finish()?.invariants())
}

/// Invariants of the subgroup `S` of `A = Z/m_1 x ... x Z/m_k` generated by `vectors`.
///
/// For each prime `p`, the number of cyclic factors of `S` of order at least `p^(j+1)` is
/// `v_p |p^j S| - v_p |p^(j+1) S|`, and `|p^j S| = |A| / |A / p^j S|`.
pub fn subgroup_invariants(moduli: &[u64], vectors: &[Vec<u64>]) -> Result<AbelianInvariants> {
    let a = AbelianInvariants::from_cyclic_orders(moduli);
    let mut primes: Vec<u64> = moduli
        .iter()
        .flat_map(|&m| prime_power_parts(m).into_iter().map(|(p, _)| p))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    let valuation = |inv: &AbelianInvariants, p: u64| -> u32 {
        inv.factors()
            .iter()
            .map(|&d| {
                prime_power_parts(d)
                    .iter()
                    .find(|&&(q, _)| q == p)
                    .map_or(0, |&(_, pk)| pk.ilog(p))
            })
            .sum()
    };
    let mut orders = Vec::new();
    for p in primes {
        let total = valuation(&a, p);
        // v_p |p^j S| for j = 0, 1, ... until it vanishes.
        let mut sizes = Vec::new();
        let mut scale = 1u64;
        loop {
            let scaled: Vec<Vec<u64>> = vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(moduli)
                        .map(|(&c, &m)| ((c as u128 * scale as u128) % m as u128) as u64)
                        .collect()
                })
                .collect();
            let size = total - valuation(&quotient_invariants(moduli, &scaled)?, p);
            sizes.push(size);
            if size == 0 {
                break;
            }
            scale = scale.checked_mul(p).ok_or_else(overflow)?;
        }
        // counts[j] = number of factors of order at least p^(j+1).
        let counts: Vec<u32> = sizes.windows(2).map(|w| w[0] - w[1]).collect();
        for j in 0..counts.len() {
            let exactly = counts[j] - counts.get(j + 1).copied().unwrap_or(0);
            orders.extend(std::iter::repeat_n(p.pow(j as u32 + 1), exactly as usize));
        }
    }
    Ok(AbelianInvariants::from_cyclic_orders(&orders))
}

impl FiniteGroup {
    /// Invariants of an abelian subgroup, from the relations `x_a + x_s = x_{as}` for
    /// `a` in the subgroup and `s` among its generators (the full table when small).
    pub fn abelian_invariants(&self, a: &Subgroup) -> Result<AbelianInvariants> {
        if !self.is_abelian_subgroup(a) {
            return Err(Error::NotAbelian);
        }
        let members = a.members();
        let full = members.len() * members.len() <= 1 << 16;
        let right: Vec<Elem> = if full {
            members.to_vec()
        } else {
            a.generators().to_vec()
        };
        Ok(cayley_abelianization(self, members, &right)?.invariants())
    }

    /// Invariants of `G / [G, G]`.
    pub fn abelianization_invariants(&self) -> Result<AbelianInvariants> {
        let members: Vec<Elem> = self.elements().collect();
        Ok(cayley_abelianization(self, &members, self.generating_set())?.invariants())
    }
}

/// `Z^members / <x_a + x_s - x_{as}>`: the abelianization of the subgroup on `members`
/// when `right` generates it.
pub(crate) fn cayley_abelianization(
    g: &FiniteGroup,
    members: &[Elem],
    right: &[Elem],
) -> Result<AbelianPresentation> {
    let position = |x: Elem| members.binary_search(&x).map(|i| i as u32);
    // The abelianization is a quotient of a group of this order, which therefore kills it.
    let mut reducer = RelationReducer::with_modulus(members.len(), members.len() as u64)?;
    // x_e = 0 follows from any generator but must hold with none.
    let ie = position(g.identity())
        .map_err(|_| Error::InvalidInput("identity outside subgroup".into()))?;
    reducer.add(&[(ie, 1)])?;
    for &a in members {
        for &s in right {
            let ia = position(a).unwrap();
            let is = position(s)
                .map_err(|_| Error::InvalidInput("generator outside subgroup".into()))?;
            let iab = position(g.mul(a, s))
                .map_err(|_| Error::InvalidInput("member set is not closed".into()))?;
            let mut rel: Relation = vec![(ia, 1)];
            for (x, c) in [(is, 1), (iab, -1)] {
                match rel.iter_mut().find(|(y, _)| *y == x) {
                    Some(slot) => slot.1 += c,
                    None => rel.push((x, c)),
                }
            }
            rel.retain(|&(_, c)| c != 0);
            reducer.add(&rel)?;
        }
    }
    reducer.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(f: &[u64]) -> AbelianInvariants {
        AbelianInvariants::new(f.to_vec()).unwrap()
    }

    #[test]
    fn normal_form_from_cyclic_orders() {
        assert_eq!(AbelianInvariants::from_cyclic_orders(&[2, 3]), inv(&[6]));
        assert_eq!(AbelianInvariants::from_cyclic_orders(&[4, 2]), inv(&[2, 4]));
        assert_eq!(
            AbelianInvariants::from_cyclic_orders(&[6, 4]),
            inv(&[2, 12])
        );
        assert_eq!(AbelianInvariants::from_cyclic_orders(&[1, 1]), inv(&[]));
        assert!(AbelianInvariants::new(vec![4, 2]).is_err());
    }

    #[test]
    fn dense_smith_forms() {
        assert_eq!(
            smith_invariants(2, &[vec![2, 0], vec![0, 4]]).unwrap(),
            inv(&[2, 4])
        );
        assert_eq!(
            smith_invariants(2, &[vec![2, 0], vec![0, 3]]).unwrap(),
            inv(&[6])
        );
        assert_eq!(
            smith_invariants(2, &[vec![4, 6], vec![6, 4]]).unwrap(),
            inv(&[2, 10])
        );
        assert!(matches!(
            smith_invariants(2, &[vec![2, 0]]),
            Err(Error::Infinite(_))
        ));
        assert_eq!(smith_invariants(0, &[]).unwrap(), inv(&[]));
    }

    #[test]
    fn coordinates_respect_relations() {
        // Z^3 / <2x - y, 3y, z - x> is Z/6 generated by x.
        let mut r = RelationReducer::new(3);
        r.add(&[(0, 2), (1, -1)]).unwrap();
        r.add(&[(1, 3)]).unwrap();
        r.add(&[(0, -1), (2, 1)]).unwrap();
        let p = r.finish().unwrap();
        assert_eq!(p.invariants(), inv(&[6]));
        let x = p.coords_of_generator(0);
        let y = p.coords_of_generator(1);
        assert_eq!(y[0], (2 * x[0]) % 6);
        assert_eq!(p.coords_of_generator(2), x);
        assert_eq!(gcd(x[0], 6), 1);
        let pre = p.basis_preimage(0);
        assert_eq!(p.coords(&pre), vec![1]);
    }

    #[test]
    fn subgroups_and_quotients() {
        assert_eq!(
            subgroup_invariants(&[2, 4], &[vec![0, 2]]).unwrap(),
            inv(&[2])
        );
        assert_eq!(
            subgroup_invariants(&[2, 4], &[vec![1, 1]]).unwrap(),
            inv(&[4])
        );
        assert_eq!(
            subgroup_invariants(&[4, 4], &[vec![2, 0], vec![0, 2]]).unwrap(),
            inv(&[2, 2])
        );
        assert_eq!(subgroup_invariants(&[6], &[]).unwrap(), inv(&[]));
        assert_eq!(
            quotient_invariants(&[2, 4], &[vec![0, 2]]).unwrap(),
            inv(&[2, 2])
        );
        assert_eq!(
            quotient_invariants(&[2, 4], &[vec![1, 1]]).unwrap(),
            inv(&[2])
        );
    }

    #[test]
    fn group_abelian_invariants() {
        let z6 = FiniteGroup::abelian_table(&[6]).unwrap();
        assert_eq!(z6.abelian_invariants(&z6.whole()).unwrap(), inv(&[6]));
        let z2z4 = FiniteGroup::abelian_table(&[2, 4]).unwrap();
        assert_eq!(
            z2z4.abelian_invariants(&z2z4.whole()).unwrap(),
            inv(&[2, 4])
        );
        let t = FiniteGroup::trivial();
        assert_eq!(t.abelian_invariants(&t.whole()).unwrap(), inv(&[]));
        let big = FiniteGroup::abelian_table(&[2, 6, 12]).unwrap();
        assert_eq!(
            big.abelian_invariants(&big.whole()).unwrap(),
            inv(&[2, 6, 12])
        );
    }
}
