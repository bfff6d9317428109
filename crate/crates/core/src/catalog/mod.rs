//! Deterministic constructors for the group families the suites quantify over.

mod corpus;
mod iso;
mod spec;

pub use corpus::{corpus_groups, is_metacyclic, standard_corpus, MAX_CORPUS_ORDER};
pub use iso::{are_isomorphic, find_isomorphism, fingerprint, Fingerprint};
pub use spec::{ActionSpec, GroupSpec, Sign};

use crate::action::{semidirect, AutAction};
use crate::error::{Error, Result};
use crate::fp::{enumerate_group, Limits, Presentation, Strategy, Word};
use crate::group::{gcd, Elem, FiniteGroup, DEFAULT_GROUP_CAP};
use crate::perm::Perm;
use crate::subgroup::is_prime;

/// Largest base whose cocycle identity is checked on every triple.
pub const MAX_COCYCLE_BASE: usize = 512;

pub fn build(spec: &GroupSpec) -> Result<FiniteGroup> {
    build_with_cap(spec, DEFAULT_GROUP_CAP)
}

pub fn build_with_cap(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
    let order = expected_order(spec)?;
    if let Some(order) = order {
        if order > cap as u128 {
            return Err(Error::cap(
                "group order",
                order.min(usize::MAX as u128) as usize,
                cap,
            ));
        }
    }
    let g = match spec {
        GroupSpec::Cyclic { n } => abelian(&[*n])?,
        GroupSpec::Abelian { factors } => abelian(factors)?,
        GroupSpec::Dihedral { n } => dihedral(*n as usize)?,
        GroupSpec::Dicyclic { n } => dicyclic(*n as usize)?,
        GroupSpec::Symmetric { n } => symmetric(*n, cap)?,
        GroupSpec::Alternating { n } => alternating(*n, cap)?,
        GroupSpec::Heisenberg { p } => heisenberg(*p as usize)?,
        GroupSpec::Extraspecial { p, sign, rank } => extraspecial(*p, *sign, *rank)?,
        GroupSpec::Metacyclic { m, n, r } => metacyclic(*m, *n, *r, cap)?,
        GroupSpec::Direct { factors } => {
            let built: Vec<FiniteGroup> = factors
                .iter()
                .map(|f| build_with_cap(f, cap))
                .collect::<Result<_>>()?;
            direct_product(&built, cap)?
        }
        GroupSpec::Semidirect {
            normal,
            complement,
            action,
        } => {
            let n = build_with_cap(normal, cap)?;
            let q = build_with_cap(complement, cap)?;
            let action = build_action(&n, &q, action)?;
            semidirect(&n, &q, &action)?.group
        }
        GroupSpec::CentralExt {
            base,
            center,
            cocycle,
        } => central_extension(&build_with_cap(base, cap)?, *center, cocycle)?,
        GroupSpec::Presentation { text } => {
            let p = Presentation::parse(text)?;
            enumerate_group(&p, Strategy::Hlt, &Limits::default(), cap)?.0
        }
        GroupSpec::Permutation { generators } => {
            let perms: Vec<Perm> = generators
                .iter()
                .map(|g| Perm::parse(g, 0))
                .collect::<Result<_>>()?;
            FiniteGroup::from_permutations(&perms, cap)?
        }
    };
    if g.order() > cap {
        return Err(Error::cap("group order", g.order(), cap));
    }
    Ok(g)
}

fn invalid(message: impl Into<String>) -> Error {
    Error::InvalidSpec(message.into())
}

fn positive(what: &str, n: u64) -> Result<()> {
    if n == 0 {
        return Err(invalid(format!("{what} must be positive")));
    }
    Ok(())
}

/// Validates parameters and returns the order when it is known without building.
fn expected_order(spec: &GroupSpec) -> Result<Option<u128>> {
    let big = |x: u64| x as u128;
    Ok(Some(match spec {
        GroupSpec::Cyclic { n } => {
            positive("cyclic order", *n)?;
            big(*n)
        }
        GroupSpec::Abelian { factors } => {
            let mut order = 1u128;
            for &d in factors {
                positive("abelian factor", d)?;
                order = order.saturating_mul(big(d));
            }
            order
        }
        GroupSpec::Dihedral { n } => {
            positive("dihedral n", *n)?;
            2 * big(*n)
        }
        GroupSpec::Dicyclic { n } => {
            positive("dicyclic n", *n)?;
            4 * big(*n)
        }
        GroupSpec::Symmetric { n } => factorial(*n),
        GroupSpec::Alternating { n } => (factorial(*n) / 2).max(1),
        GroupSpec::Heisenberg { p } => {
            if !is_prime(*p) {
                return Err(invalid(format!("heisenberg needs a prime, found {p}")));
            }
            big(*p).pow(3)
        }
        GroupSpec::Extraspecial { p, rank, .. } => {
            if !is_prime(*p) {
                return Err(invalid(format!("extraspecial needs a prime, found {p}")));
            }
            if *rank == 0 || *rank > 8 {
                return Err(invalid("extraspecial rank must be between 1 and 8"));
            }
            big(*p).saturating_pow(1 + 2 * rank)
        }
        GroupSpec::Metacyclic { m, n, r } => {
            positive("metacyclic m", *m)?;
            positive("metacyclic n", *n)?;
            if gcd(*r % *m, *m) != 1 && *m > 1 {
                return Err(invalid(format!(
                    "metacyclic needs gcd(r, m) = 1, found r = {r}, m = {m}"
                )));
            }
            if pow_mod(*r, *n, *m) != 1 % *m {
                return Err(invalid(format!(
                    "metacyclic needs r^n = 1 mod m, found r = {r}, n = {n}, m = {m}"
                )));
            }
            big(*m) * big(*n)
        }
        GroupSpec::Direct { factors } => {
            let mut order = 1u128;
            for f in factors {
                match expected_order(f)? {
                    Some(k) => order = order.saturating_mul(k),
                    None => return Ok(None),
                }
            }
            order
        }
        GroupSpec::Semidirect {
            normal, complement, ..
        } => match (expected_order(normal)?, expected_order(complement)?) {
            (Some(a), Some(b)) => a.saturating_mul(b),
            _ => return Ok(None),
        },
        GroupSpec::CentralExt { base, center, .. } => {
            positive("central_ext center", *center)?;
            match expected_order(base)? {
                Some(b) => b.saturating_mul(big(*center)),
                None => return Ok(None),
            }
        }
        GroupSpec::Presentation { .. } | GroupSpec::Permutation { .. } => return Ok(None),
    }))
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut b = base as u128 % m;
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

fn abelian(factors: &[u64]) -> Result<FiniteGroup> {
    let nontrivial: Vec<u64> = factors.iter().copied().filter(|&d| d > 1).collect();
    if nontrivial.is_empty() {
        return Ok(FiniteGroup::trivial());
    }
    FiniteGroup::abelian_table(&nontrivial)
}

/// Element `s^j r^i` has index `j n + i`.
fn dihedral(n: usize) -> Result<FiniteGroup> {
    let order = 2 * n;
    let mut table = vec![0 as Elem; order * order];
    for a in 0..order {
        let (i1, j1) = (a % n, a / n);
        for b in 0..order {
            let (i2, j2) = (b % n, b / n);
            // r^i1 s^j2 = s^j2 r^(+-i1)
            let i = (if j2 == 1 { n - i1 + i2 } else { i1 + i2 }) % n;
            table[a * order + b] = ((j1 ^ j2) * n + i) as Elem;
        }
    }
    let labels = (0..order)
        .map(|a| match (a / n, a % n) {
            (0, 0) => "e".to_string(),
            (0, i) => format!("r^{i}"),
            (_, 0) => "s".to_string(),
            (_, i) => format!("s r^{i}"),
        })
        .collect();
    FiniteGroup::from_table(order, table, Some(labels))
}

/// Element `a^i x^j` has index `j 2n + i`; `x a x^-1 = a^-1`, `x^2 = a^n`.
fn dicyclic(n: usize) -> Result<FiniteGroup> {
    let m = 2 * n;
    let order = 2 * m;
    let mut table = vec![0 as Elem; order * order];
    for a in 0..order {
        let (i1, j1) = (a % m, a / m);
        for b in 0..order {
            let (i2, j2) = (b % m, b / m);
            let (i, j) = match (j1, j2) {
                (0, _) => (i1 + i2, j2),
                (_, 0) => (i1 + m - i2, 1),
                _ => (i1 + m - i2 + n, 0),
            };
            table[a * order + b] = (j * m + i % m) as Elem;
        }
    }
    let labels = (0..order)
        .map(|a| match (a / m, a % m) {
            (0, 0) => "e".to_string(),
            (0, i) => format!("a^{i}"),
            (_, 0) => "x".to_string(),
            (_, i) => format!("a^{i} x"),
        })
        .collect();
    FiniteGroup::from_table(order, table, Some(labels))
}

fn symmetric(n: u32, cap: usize) -> Result<FiniteGroup> {
    if n <= 1 {
        return Ok(FiniteGroup::trivial());
    }
    let cycle = Perm::from_images((0..n).map(|i| (i + 1) % n).collect())?;
    let swap = Perm::from_images(
        (0..n)
            .map(|i| [1, 0].get(i as usize).copied().unwrap_or(i))
            .collect(),
    )?;
    FiniteGroup::from_permutations(&[cycle, swap], cap)
}

fn alternating(n: u32, cap: usize) -> Result<FiniteGroup> {
    if n <= 2 {
        return Ok(FiniteGroup::trivial());
    }
    // The 3-cycles (1 2 k) generate A_n.
    let gens: Vec<Perm> = (2..n)
        .map(|k| {
            let mut images: Vec<u32> = (0..n).collect();
            images[0] = 1;
            images[1] = k;
            images[k as usize] = 0;
            Perm::from_images(images)
        })
        .collect::<Result<_>>()?;
    FiniteGroup::from_permutations(&gens, cap)
}

/// `(a, b, c)` is the matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]`, index `(c p + b) p + a`.
fn heisenberg(p: usize) -> Result<FiniteGroup> {
    let order = p * p * p;
    let split = |x: usize| (x % p, x / p % p, x / (p * p));
    let mut table = vec![0 as Elem; order * order];
    for x in 0..order {
        let (a1, b1, c1) = split(x);
        for y in 0..order {
            let (a2, b2, c2) = split(y);
            let (a, b, c) = ((a1 + a2) % p, (b1 + b2) % p, (c1 + c2 + a1 * b2) % p);
            table[x * order + y] = ((c * p + b) * p + a) as Elem;
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (a, b, c) = split(x);
            format!("[{a},{b},{c}]")
        })
        .collect();
    FiniteGroup::from_table(order, table, Some(labels))
}

/// Central extension of `Z/p^2rank` by `Z/p` through `f(x, y) = sum x_{2i} y_{2i+1}`; the minus
/// type adds `x_0 y_0 + x_1 y_1` when `p = 2` (the quaternion form) and the carry of the first
/// coordinate when `p` is odd (exponent `p^2`).
fn extraspecial(p: u64, sign: Sign, rank: u32) -> Result<FiniteGroup> {
    let k = 2 * rank as usize;
    let moduli = vec![p; k];
    let base = FiniteGroup::abelian_table(&moduli)?;
    let n = base.order();
    let coords = |x: usize| -> Vec<u64> {
        let mut x = x as u64;
        (0..k)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    };
    let all: Vec<Vec<u64>> = (0..n).map(coords).collect();
    let mut cocycle = vec![vec![0u64; n]; n];
    for (g, x) in all.iter().enumerate() {
        for (h, y) in all.iter().enumerate() {
            let mut v: u64 = (0..rank as usize).map(|i| x[2 * i] * y[2 * i + 1]).sum();
            if sign == Sign::Minus {
                if p == 2 {
                    v += x[0] * y[0] + x[1] * y[1];
                } else if x[0] + y[0] >= p {
                    v += 1;
                }
            }
            cocycle[g][h] = v % p;
        }
    }
    central_extension(&base, p, &cocycle)
}

fn metacyclic(m: u64, n: u64, r: u64, cap: usize) -> Result<FiniteGroup> {
    let (a, b) = (1i32, 2i32);
    let relators = vec![
        Word::new(std::iter::repeat(a).take(m as usize)),
        Word::new(std::iter::repeat(b).take(n as usize)),
        Word::new(
            [b, a, -b]
                .into_iter()
                .chain(std::iter::repeat(-a).take((r % m) as usize)),
        ),
    ];
    let p = Presentation::new(vec!["a".into(), "b".into()], relators)?;
    let (g, _) = enumerate_group(&p, Strategy::Hlt, &Limits::default(), cap)?;
    if g.order() as u64 != m * n {
        return Err(Error::PropertyFailed(format!(
            "metacyclic({m},{n},{r}) enumerated to order {}, expected {}",
            g.order(),
            m * n
        )));
    }
    Ok(g)
}

/// Mixed-radix product with the first factor least significant.
pub fn direct_product(factors: &[FiniteGroup], cap: usize) -> Result<FiniteGroup> {
    let orders: Vec<usize> = factors.iter().map(FiniteGroup::order).collect();
    let order = orders
        .iter()
        .try_fold(1usize, |acc, &k| acc.checked_mul(k))
        .unwrap_or(usize::MAX);
    if order > cap {
        return Err(Error::cap("direct product order", order, cap));
    }
    let decode = |mut x: usize| -> Vec<Elem> {
        orders
            .iter()
            .map(|&k| {
                let d = x % k;
                x /= k;
                d as Elem
            })
            .collect()
    };
    let parts: Vec<Vec<Elem>> = (0..order).map(decode).collect();
    let mut table = vec![0 as Elem; order * order];
    for (a, pa) in parts.iter().enumerate() {
        for (b, pb) in parts.iter().enumerate() {
            let mut idx = 0usize;
            for f in (0..factors.len()).rev() {
                idx = idx * orders[f] + factors[f].mul(pa[f], pb[f]) as usize;
            }
            table[a * order + b] = idx as Elem;
        }
    }
    let labels = parts
        .iter()
        .map(|p| {
            let inner: Vec<String> = p.iter().zip(factors).map(|(&x, g)| g.label(x)).collect();
            format!("({})", inner.join(", "))
        })
        .collect();
    FiniteGroup::from_table(order, table, Some(labels))
}

fn build_action(n: &FiniteGroup, q: &FiniteGroup, spec: &ActionSpec) -> Result<AutAction> {
    match spec {
        ActionSpec::Trivial => Ok(AutAction::trivial(q, n)),
        ActionSpec::Inversion => AutAction::inversion(q, n),
        ActionSpec::Power { k } => {
            if !n.is_abelian() {
                return Err(Error::InvalidAction(
                    "a power action needs an abelian normal factor".into(),
                ));
            }
            let t = q
                .elements()
                .find(|&t| q.element_order(t) == q.order())
                .ok_or_else(|| {
                    Error::InvalidAction("a power action needs a cyclic complement".into())
                })?;
            // exponent[q] = k^i where q = t^i.
            let mut exponent = vec![0u64; q.order()];
            let (mut x, mut e) = (q.identity(), 1u64);
            let modulus = n.exponent() as u64;
            for _ in 0..q.order() {
                exponent[x as usize] = e;
                x = q.mul(x, t);
                e = e * (*k % modulus) % modulus;
            }
            AutAction::from_fn(q, n, |a, y| n.pow(y, exponent[a as usize]))
        }
        ActionSpec::Images { generators, images } => {
            if generators.len() != images.len() {
                return Err(Error::InvalidAction(
                    "one image list per generator is needed".into(),
                ));
            }
            for (&s, img) in generators.iter().zip(images) {
                if s as usize >= q.order()
                    || img.len() != n.order()
                    || img.iter().any(|&y| y as usize >= n.order())
                {
                    return Err(Error::InvalidAction(
                        "image list does not fit the factors".into(),
                    ));
                }
            }
            // Spread the generator images over <generators> along the right Cayley graph.
            let mut rows: Vec<Option<Vec<Elem>>> = vec![None; q.order()];
            rows[q.identity() as usize] = Some(n.elements().collect());
            let mut queue = vec![q.identity()];
            let mut head = 0;
            while head < queue.len() {
                let a = queue[head];
                head += 1;
                for (&s, img) in generators.iter().zip(images) {
                    let row_a = rows[a as usize].clone().unwrap();
                    // (a s).x = a.(s.x)
                    let row: Vec<Elem> = img.iter().map(|&y| row_a[y as usize]).collect();
                    let target = q.mul(a, s) as usize;
                    match &rows[target] {
                        None => {
                            rows[target] = Some(row);
                            queue.push(target as Elem);
                        }
                        Some(existing) if *existing != row => {
                            return Err(Error::InvalidAction(
                                "generator images do not define an action".into(),
                            ))
                        }
                        Some(_) => {}
                    }
                }
            }
            if queue.len() != q.order() {
                return Err(Error::InvalidAction(
                    "the listed elements do not generate the complement".into(),
                ));
            }
            let table: Vec<Elem> = rows.into_iter().flat_map(|r| r.unwrap()).collect();
            AutAction::new(q, n, table)
        }
    }
}

/// The group on `Z/center x base` with `(c, g)(c', g') = (c + c' + f(g, g'), g g')`,
/// indexed `g * center + c`.
pub fn central_extension(
    base: &FiniteGroup,
    center: u64,
    cocycle: &[Vec<u64>],
) -> Result<FiniteGroup> {
    positive("central_ext center", center)?;
    let n = base.order();
    if n > MAX_COCYCLE_BASE {
        return Err(Error::cap(
            "central extension base order",
            n,
            MAX_COCYCLE_BASE,
        ));
    }
    let c = center as usize;
    let order = n * c;
    if order > DEFAULT_GROUP_CAP {
        return Err(Error::cap(
            "central extension order",
            order,
            DEFAULT_GROUP_CAP,
        ));
    }
    if cocycle.len() != n || cocycle.iter().any(|row| row.len() != n) {
        return Err(Error::NotACocycle(format!(
            "the factor set must be a {n} x {n} table"
        )));
    }
    if cocycle.iter().flatten().any(|&v| v >= center) {
        return Err(Error::NotACocycle(format!(
            "values must lie in 0..{center}"
        )));
    }
    let f = |g: Elem, h: Elem| cocycle[g as usize][h as usize];
    let e = base.identity();
    for g in base.elements() {
        if f(e, g) != 0 || f(g, e) != 0 {
            return Err(Error::NotACocycle(format!(
                "not normalized at {}",
                base.label(g)
            )));
        }
    }
    for g in base.elements() {
        for h in base.elements() {
            let gh = base.mul(g, h);
            for k in base.elements() {
                let lhs = f(g, h) + f(gh, k);
                let rhs = f(h, k) + f(g, base.mul(h, k));
                if lhs % center != rhs % center {
                    return Err(Error::NotACocycle(format!(
                        "f(g,h) + f(gh,k) != f(h,k) + f(g,hk) at g = {}, h = {}, k = {}",
                        base.label(g),
                        base.label(h),
                        base.label(k)
                    )));
                }
            }
        }
    }
    let mut table = vec![0 as Elem; order * order];
    for x in 0..order {
        let (g1, c1) = ((x / c) as Elem, (x % c) as u64);
        for y in 0..order {
            let (g2, c2) = ((y / c) as Elem, (y % c) as u64);
            let cc = (c1 + c2 + f(g1, g2)) % center;
            table[x * order + y] = (base.mul(g1, g2) as usize * c + cc as usize) as Elem;
        }
    }
    let labels = (0..order)
        .map(|x| format!("({}, {})", x % c, base.label((x / c) as Elem)))
        .collect();
    let g = FiniteGroup::from_table(order, table, Some(labels))?;
    let fiber = g.subgroup_generated([(e as usize * c + 1 % c) as Elem]);
    if fiber.order() != c || !g.is_central(&fiber) {
        return Err(Error::PropertyFailed(
            "the extension kernel is not central of the given order".into(),
        ));
    }
    Ok(g)
}

#[cfg(test)]
mod tests;
