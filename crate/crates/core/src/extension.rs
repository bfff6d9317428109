//! Groups `E` given as an extension `1 -> A -> E -> D -> 1` with `A` finite abelian.
//!
//! An element is a pair `(a, d)` standing for `a * t(d)`, where `t` is a fixed transversal.
//! Multiplication is
//! `(a1, d1)(a2, d2) = (a1 + d1.a2 + c(d1, d2), d1 d2)`
//! with `d.a` the conjugation action of `t(d)` on `A` and `c(d1, d2) = t(d1) t(d2) t(d1 d2)^-1`.
//! Dense index: `d * |A| + code(a)`, `code` being mixed radix over the invariant factors.

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};

/// Largest number of invariant factors of the abelian kernel.
pub const MAX_RANK: usize = 64;

#[derive(Clone)]
pub struct Extension {
    top: FiniteGroup,
    moduli: Vec<u64>,
    fiber: u64,
    /// `action[(d * k + j) * k + i]`: coordinate `i` of the image of basis vector `j` under `d`.
    action: Vec<u64>,
    /// `cocycle[(d1 * n + d2) * k + i]`.
    cocycle: Vec<u64>,
}

impl Extension {
    /// `top` must be tabulated with identity 0; `action` and `cocycle` must be normalized
    /// (`t(1)` acts trivially, `c(1, d) = c(d, 1) = 0`).
    pub fn new(
        top: FiniteGroup,
        moduli: Vec<u64>,
        mut action: Vec<u64>,
        mut cocycle: Vec<u64>,
    ) -> Result<Self> {
        if moduli.len() > MAX_RANK {
            return Err(Error::cap("extension kernel rank", moduli.len(), MAX_RANK));
        }
        if moduli.iter().any(|&m| m < 2 || m > u32::MAX as u64) {
            return Err(Error::InvalidInput(format!(
                "bad invariant factors {moduli:?}"
            )));
        }
        if !top.is_tabulated() || top.identity() != 0 {
            return Err(Error::InvalidInput(
                "extension quotient must be tabulated with identity 0".into(),
            ));
        }
        let k = moduli.len();
        let n = top.order();
        if action.len() != n * k * k || cocycle.len() != n * n * k {
            return Err(Error::InvalidInput(
                "extension data has the wrong shape".into(),
            ));
        }
        for (pos, v) in action.iter_mut().enumerate() {
            *v %= moduli[pos % k];
        }
        for (pos, v) in cocycle.iter_mut().enumerate() {
            *v %= moduli[pos % k];
        }
        let fiber = moduli
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m))
            .ok_or_else(|| Error::cap("extension fiber order", usize::MAX, u32::MAX as usize))?;
        let order = fiber as u128 * n as u128;
        if order > u32::MAX as u128 / 2 {
            return Err(Error::CapExceeded {
                what: "extension order",
                value: order.min(u64::MAX as u128) as u64,
                cap: u32::MAX as u64 / 2,
            });
        }
        Ok(Extension {
            top,
            moduli,
            fiber,
            action,
            cocycle,
        })
    }

    /// The abelian group `Z/m_1 x ... x Z/m_k` with no tabulation.
    pub fn abelian(moduli: Vec<u64>) -> Result<Self> {
        let k = moduli.len();
        Extension::new(
            FiniteGroup::trivial(),
            moduli,
            identity_action(k, 1),
            vec![0; k],
        )
    }

    pub fn order(&self) -> usize {
        (self.fiber * self.top.order() as u64) as usize
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn top(&self) -> &FiniteGroup {
        &self.top
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn fiber_order(&self) -> u64 {
        self.fiber
    }

    pub fn split(&self, x: Elem) -> (Vec<u64>, Elem) {
        let mut a = vec![0u64; self.moduli.len()];
        let d = self.split_into(x, &mut a);
        (a, d)
    }

    /// Coordinates of the fiber part of `x`, written into `a`; returns the top part.
    #[inline]
    pub fn split_into(&self, x: Elem, a: &mut [u64]) -> Elem {
        let mut code = x as u64 % self.fiber;
        for (slot, &m) in a.iter_mut().zip(&self.moduli) {
            *slot = code % m;
            code /= m;
        }
        (x as u64 / self.fiber) as Elem
    }

    pub fn join(&self, a: &[u64], d: Elem) -> Elem {
        (d as u64 * self.fiber + self.encode(a)) as Elem
    }

    #[inline]
    fn encode(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.moduli)
            .rev()
            .fold(0u64, |acc, (&v, &m)| acc * m + v % m)
    }

    /// `d . a`, added into `out`.
    #[inline]
    fn act_into(&self, d: Elem, a: &[u64], out: &mut [u64]) {
        let k = self.moduli.len();
        let base = d as usize * k * k;
        for (j, &aj) in a.iter().enumerate() {
            if aj == 0 {
                continue;
            }
            let col = &self.action[base + j * k..base + (j + 1) * k];
            for i in 0..k {
                out[i] = (out[i] + aj * col[i]) % self.moduli[i];
            }
        }
    }

    /// Image of the fiber vector `a` under `d`.
    pub fn act(&self, d: Elem, a: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.moduli.len()];
        self.act_into(d, a, &mut out);
        out
    }

    /// The normalized cocycle value `c(d1, d2)`.
    pub fn cocycle(&self, d1: Elem, d2: Elem) -> &[u64] {
        let k = self.moduli.len();
        &self.cocycle[(d1 as usize * self.top.order() + d2 as usize) * k..][..k]
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let k = self.moduli.len();
        let mut a1 = [0u64; MAX_RANK];
        let mut a2 = [0u64; MAX_RANK];
        let d1 = self.split_into(x, &mut a1[..k]);
        let d2 = self.split_into(y, &mut a2[..k]);
        let out = &mut a1[..k];
        self.act_into(d1, &a2[..k], out);
        let c = self.cocycle(d1, d2);
        for i in 0..k {
            out[i] = (out[i] + c[i]) % self.moduli[i];
        }
        self.join(out, self.top.mul(d1, d2))
    }

    pub fn inv(&self, x: Elem) -> Elem {
        // (a, d)^-1 = (-(d^-1 . a) - c(d^-1, d), d^-1)
        let k = self.moduli.len();
        let mut a = [0u64; MAX_RANK];
        let mut s = [0u64; MAX_RANK];
        let d = self.split_into(x, &mut a[..k]);
        let di = self.top.inv(d);
        self.act_into(di, &a[..k], &mut s[..k]);
        let c = self.cocycle(di, d);
        for i in 0..k {
            let m = self.moduli[i];
            s[i] = (2 * m - s[i] - c[i]) % m;
        }
        self.join(&s[..k], di)
    }

    /// True when every `t(d)` centralizes `A`.
    pub fn is_trivial_action(&self) -> bool {
        let k = self.moduli.len();
        (0..self.top.order()).all(|d| {
            (0..k).all(|j| {
                (0..k).all(|i| {
                    let v = self.action[(d * k + j) * k + i] % self.moduli[i];
                    v == u64::from(i == j) % self.moduli[i]
                })
            })
        })
    }
}

pub(crate) fn identity_action(k: usize, n: usize) -> Vec<u64> {
    let mut action = vec![0u64; n * k * k];
    for d in 0..n {
        for i in 0..k {
            action[(d * k + i) * k + i] = 1;
        }
    }
    action
}
