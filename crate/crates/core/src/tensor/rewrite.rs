//! Rewriting elements of `G (x) H` over a finite generator list built from generators of
//! `G`, `H`, `D_G(H)` and `D_H(G)`, following the constructive argument that these suffice.
//!
//! Every symbol `g (x) h` expands into conjugates `z.(x (x) y)` of generator pairs. The
//! action of a generator letter on a listed element `a (x) b` is rewritten with
//! `x.(a (x) b) = (x (x) a.b b^-1)(a (x) b)` and
//! `y.(a (x) b) = (a (x) b)(a b.a^-1 (x) y)^-1`; the middle factors expand over the
//! derivative generators, where conjugation by `g_j (x) h_j` replaces the action of
//! `g_j.h_j h_j^-1`. The final word is evaluated and compared with the input.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::subgroup::Closure;

use super::TensorResult;

/// A factor of the generator list, with the pair `(g, h)` whose symbol it is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ListGenerator {
    /// `x_i^a (x) y_j^b`.
    XY { i: usize, a: i8, j: usize, b: i8 },
    /// `g_j (x) h_j` with `g_j.h_j h_j^-1` the `j`-th generator of `D_G(H)`.
    DgPair { j: usize },
    /// `g'_j (x) h'_j` with `g'_j (h'_j.g'_j)^-1` the `j`-th generator of `D_H(G)`.
    DhPair { j: usize },
    /// `x_i^a (x) d_j^b` with `d_j` the `j`-th generator of `D_G(H)`.
    XD { i: usize, a: i8, j: usize, b: i8 },
    /// `e_i^a (x) y_j^b` with `e_i` the `i`-th generator of `D_H(G)`.
    EY { i: usize, a: i8, j: usize, b: i8 },
}

/// A word over the list: `(position, inverted)`.
pub type ListWord = Vec<(usize, bool)>;

/// Length beyond which rewriting gives up with `LimitExceeded`.
const MAX_WORD: usize = 1 << 22;

pub struct GeneratorList<'t> {
    ts: &'t TensorResult,
    x: Vec<Elem>,
    y: Vec<Elem>,
    /// `(g_j, h_j)`.
    dg: Vec<(Elem, Elem)>,
    /// `(g'_j, h'_j)`.
    dh: Vec<(Elem, Elem)>,
    list: Vec<(ListGenerator, Elem, Elem)>,
    position: HashMap<ListGenerator, usize>,
    /// Words over `x` for elements of `G`, over `y` for `H`.
    g_words: Vec<Vec<u32>>,
    h_words: Vec<Vec<u32>>,
    /// Words over `d_j^+-1` for elements of `D_G(H)` (indexed by `H` element).
    dg_words: Vec<Option<Vec<(usize, bool)>>>,
    /// Words over `e_j^+-1` for elements of `D_H(G)` (indexed by `G` element).
    dh_words: Vec<Option<Vec<(usize, bool)>>>,
    memo_g: HashMap<(usize, usize), ListWord>,
    memo_h: HashMap<(usize, usize), ListWord>,
}

/// Greedy generators of `<f(p, q)>` over `p in P, q in Q`, as the pairs producing them.
fn derivative_generators(
    target: &FiniteGroup,
    pairs: impl Iterator<Item = (Elem, Elem)>,
    f: impl Fn(Elem, Elem) -> Elem,
) -> Vec<(Elem, Elem)> {
    let mut closure = Closure::new(target);
    let mut out = Vec::new();
    for (p, q) in pairs {
        if closure.add(f(p, q)) {
            out.push((p, q));
        }
    }
    out
}

/// Breadth-first words over `gens` and their inverses inside the subgroup they generate.
fn subgroup_words(group: &FiniteGroup, gens: &[Elem]) -> Vec<Option<Vec<(usize, bool)>>> {
    let mut words: Vec<Option<Vec<(usize, bool)>>> = vec![None; group.order()];
    words[group.identity() as usize] = Some(Vec::new());
    let mut queue = vec![group.identity()];
    let mut head = 0;
    while head < queue.len() {
        let c = queue[head];
        head += 1;
        for (j, &s) in gens.iter().enumerate() {
            for inv in [false, true] {
                let y = group.mul(c, if inv { group.inv(s) } else { s });
                if words[y as usize].is_none() {
                    let mut w = words[c as usize].clone().unwrap();
                    w.push((j, inv));
                    words[y as usize] = Some(w);
                    queue.push(y);
                }
            }
        }
    }
    words
}

fn invert(w: &[(usize, bool)]) -> ListWord {
    w.iter().rev().map(|&(p, inv)| (p, !inv)).collect()
}

/// Appends with free cancellation.
fn push(out: &mut ListWord, letters: &[(usize, bool)]) -> Result<()> {
    for &(p, inv) in letters {
        match out.last() {
            Some(&(q, j)) if q == p && j != inv => {
                out.pop();
            }
            _ => out.push((p, inv)),
        }
    }
    if out.len() > MAX_WORD {
        return Err(Error::LimitExceeded("rewritten word is too long".into()));
    }
    Ok(())
}

impl<'t> GeneratorList<'t> {
    pub fn new(ts: &'t TensorResult) -> Result<Self> {
        let pair = ts.pair();
        let (g, h) = (pair.g(), pair.h());
        let (alpha, beta) = (pair.alpha(), pair.beta());
        let x = g.generating_set().to_vec();
        let y = h.generating_set().to_vec();
        let all_pairs = || g.elements().flat_map(|a| h.elements().map(move |b| (a, b)));
        // D_G(H) = <g.h h^-1>, D_H(G) = <g (h.g)^-1>.
        let dg = derivative_generators(h, all_pairs(), |a, b| h.mul(alpha.act(a, b), h.inv(b)));
        let dh = derivative_generators(g, all_pairs(), |a, b| g.mul(a, g.inv(beta.act(b, a))));
        let d_elem = |j: usize| h.mul(alpha.act(dg[j].0, dg[j].1), h.inv(dg[j].1));
        let e_elem = |j: usize| g.mul(dh[j].0, g.inv(beta.act(dh[j].1, dh[j].0)));
        let pow_g = |e: Elem, s: i8| if s > 0 { e } else { g.inv(e) };
        let pow_h = |e: Elem, s: i8| if s > 0 { e } else { h.inv(e) };
        let mut list = Vec::new();
        for (i, &xi) in x.iter().enumerate() {
            for a in [1i8, -1] {
                for (j, &yj) in y.iter().enumerate() {
                    for b in [1i8, -1] {
                        list.push((ListGenerator::XY { i, a, j, b }, pow_g(xi, a), pow_h(yj, b)));
                    }
                }
            }
        }
        for (j, &(p, q)) in dg.iter().enumerate() {
            list.push((ListGenerator::DgPair { j }, p, q));
        }
        for (j, &(p, q)) in dh.iter().enumerate() {
            list.push((ListGenerator::DhPair { j }, p, q));
        }
        for (i, &xi) in x.iter().enumerate() {
            for a in [1i8, -1] {
                for j in 0..dg.len() {
                    for b in [1i8, -1] {
                        list.push((
                            ListGenerator::XD { i, a, j, b },
                            pow_g(xi, a),
                            pow_h(d_elem(j), b),
                        ));
                    }
                }
            }
        }
        for i in 0..dh.len() {
            for a in [1i8, -1] {
                for (j, &yj) in y.iter().enumerate() {
                    for b in [1i8, -1] {
                        list.push((
                            ListGenerator::EY { i, a, j, b },
                            pow_g(e_elem(i), a),
                            pow_h(yj, b),
                        ));
                    }
                }
            }
        }
        let position = list
            .iter()
            .enumerate()
            .map(|(p, &(k, _, _))| (k, p))
            .collect();
        let d_gens: Vec<Elem> = (0..dg.len()).map(d_elem).collect();
        let e_gens: Vec<Elem> = (0..dh.len()).map(e_elem).collect();
        Ok(GeneratorList {
            g_words: g.words_over(&x)?,
            h_words: h.words_over(&y)?,
            dg_words: subgroup_words(h, &d_gens),
            dh_words: subgroup_words(g, &e_gens),
            ts,
            x,
            y,
            dg,
            dh,
            list,
            position,
            memo_g: HashMap::new(),
            memo_h: HashMap::new(),
        })
    }

    pub fn generators(&self) -> Vec<ListGenerator> {
        self.list.iter().map(|&(k, _, _)| k).collect()
    }

    /// The element of a list entry.
    pub fn element(&self, p: usize) -> Elem {
        let (_, a, b) = self.list[p];
        self.ts.gen(a, b)
    }

    pub fn evaluate(&self, w: &[(usize, bool)]) -> Elem {
        let t = self.ts.group();
        w.iter().fold(t.identity(), |acc, &(p, inv)| {
            let e = self.element(p);
            t.mul(acc, if inv { t.inv(e) } else { e })
        })
    }

    fn at(&self, k: ListGenerator) -> usize {
        self.position[&k]
    }

    /// `x_i (x) d` for `d` in `D_G(H)`, peeling generators off the left of `d`.
    fn x_tensor_d(&self, i: usize, d: Elem) -> Result<ListWord> {
        let word = self.dg_words[d as usize]
            .clone()
            .ok_or_else(|| Error::RewriteFailed("element outside D_G(H)".into()))?;
        // x (x) d1 d' = (x (x) d1) [g1 (x) h1]^(+-1) (x (x) d') [g1 (x) h1]^(-+1)
        let mut out = Vec::new();
        let mut suffix: Vec<(usize, bool)> = Vec::new();
        for &(j, inv) in &word {
            let b = if inv { -1 } else { 1 };
            push(
                &mut out,
                &[(self.at(ListGenerator::XD { i, a: 1, j, b }), false)],
            )?;
            let c = self.at(ListGenerator::DgPair { j });
            push(&mut out, &[(c, inv)])?;
            suffix.push((c, !inv));
        }
        let tail: Vec<(usize, bool)> = suffix.into_iter().rev().collect();
        push(&mut out, &tail)?;
        Ok(out)
    }

    /// `e (x) y_j` for `e` in `D_H(G)`, peeling generators off the left of `e`.
    fn e_tensor_y(&self, e: Elem, j: usize) -> Result<ListWord> {
        let word = self.dh_words[e as usize]
            .clone()
            .ok_or_else(|| Error::RewriteFailed("element outside D_H(G)".into()))?;
        // e1 e' (x) y = [g'1 (x) h'1]^(+-1) (e' (x) y) [g'1 (x) h'1]^(-+1) (e1 (x) y)
        fn go(s: &GeneratorList, word: &[(usize, bool)], j: usize) -> Result<ListWord> {
            let Some((&(i, inv), rest)) = word.split_first() else {
                return Ok(Vec::new());
            };
            let c = s.at(ListGenerator::DhPair { j: i });
            let a = if inv { -1 } else { 1 };
            let mut out = Vec::new();
            push(&mut out, &[(c, inv)])?;
            push(&mut out, &go(s, rest, j)?)?;
            push(&mut out, &[(c, !inv)])?;
            push(
                &mut out,
                &[(s.at(ListGenerator::EY { i, a, j, b: 1 }), false)],
            )?;
            Ok(out)
        }
        go(self, &word, j)
    }

    /// `x_i.(list entry p)` as a word.
    fn act_x(&mut self, i: usize, p: usize) -> Result<ListWord> {
        if let Some(w) = self.memo_g.get(&(i, p)) {
            return Ok(w.clone());
        }
        let h = self.ts.pair().h();
        let (_, a, b) = self.list[p];
        let d = h.mul(self.ts.pair().alpha().act(a, b), h.inv(b));
        let mut out = self.x_tensor_d(i, d)?;
        push(&mut out, &[(p, false)])?;
        self.memo_g.insert((i, p), out.clone());
        Ok(out)
    }

    /// `y_j.(list entry p)` as a word.
    fn act_y(&mut self, j: usize, p: usize) -> Result<ListWord> {
        if let Some(w) = self.memo_h.get(&(j, p)) {
            return Ok(w.clone());
        }
        let g = self.ts.pair().g();
        let (_, a, b) = self.list[p];
        let e = g.mul(a, g.inv(self.ts.pair().beta().act(b, a)));
        let mut out = vec![(p, false)];
        push(&mut out, &invert(&self.e_tensor_y(e, j)?))?;
        self.memo_h.insert((j, p), out.clone());
        Ok(out)
    }

    fn act_word(&mut self, letter: Letter, w: &[(usize, bool)]) -> Result<ListWord> {
        let mut out = Vec::new();
        for &(p, inv) in w {
            let image = match letter {
                Letter::X(i) => self.act_x(i, p)?,
                Letter::Y(j) => self.act_y(j, p)?,
            };
            if inv {
                push(&mut out, &invert(&image))?;
            } else {
                push(&mut out, &image)?;
            }
        }
        Ok(out)
    }

    /// `g (x) h` for arbitrary `g`, `h` via
    /// `x g' (x) h = x.(g' (x) h) (x (x) h)` and `x (x) y h' = (x (x) y) y.(x (x) h')`.
    fn symbol_word(&mut self, gw: &[u32], hw: &[u32]) -> Result<ListWord> {
        let Some((&first, rest)) = gw.split_first() else {
            return Ok(Vec::new());
        };
        let inner = self.symbol_word(rest, hw)?;
        let mut out = self.act_word(Letter::X(first as usize), &inner)?;
        let tail = self.generator_tensor_h(first as usize, hw)?;
        push(&mut out, &tail)?;
        Ok(out)
    }

    fn generator_tensor_h(&mut self, i: usize, hw: &[u32]) -> Result<ListWord> {
        let Some((&first, rest)) = hw.split_first() else {
            return Ok(Vec::new());
        };
        let mut out = vec![(
            self.at(ListGenerator::XY {
                i,
                a: 1,
                j: first as usize,
                b: 1,
            }),
            false,
        )];
        let inner = self.generator_tensor_h(i, rest)?;
        let acted = self.act_word(Letter::Y(first as usize), &inner)?;
        push(&mut out, &acted)?;
        Ok(out)
    }

    /// A word over the list evaluating to `element`.
    pub fn rewrite(&mut self, element: Elem) -> Result<ListWord> {
        let t = self.ts.group();
        if element == t.identity() {
            return Ok(Vec::new());
        }
        if let Some(p) = (0..self.list.len()).find(|&p| self.element(p) == element) {
            return Ok(vec![(p, false)]);
        }
        let chosen = self.ts.symbol_generating_set().to_vec();
        let gens: Vec<Elem> = chosen.iter().map(|&s| self.ts.gens()[s]).collect();
        let symbol_word = t.words_over(&gens)?[element as usize].clone();
        let nh = self.ts.pair().h().order();
        let mut out = Vec::new();
        for k in symbol_word {
            let s = chosen[k as usize];
            let (a, b) = (s / nh, s % nh);
            let gw = self.g_words[a].clone();
            let hw = self.h_words[b].clone();
            let w = self.symbol_word(&gw, &hw)?;
            push(&mut out, &w)?;
        }
        if self.evaluate(&out) != element {
            return Err(Error::RewriteFailed(format!(
                "the rewritten word does not evaluate to element {element}"
            )));
        }
        Ok(out)
    }

    /// `x_i.(list entry p)` rewritten over the list and checked by evaluation.
    pub fn conjugate_by_x(&mut self, i: usize, p: usize) -> Result<ListWord> {
        let w = self.act_x(i, p)?;
        let pair = self.ts.pair();
        let (_, a, b) = self.list[p];
        let xi = self.x[i];
        let expected = self.ts.gen(pair.g().conj(xi, a), pair.alpha().act(xi, b));
        if self.evaluate(&w) != expected {
            return Err(Error::RewriteFailed(
                "conjugation by a generator of G".into(),
            ));
        }
        Ok(w)
    }

    /// `y_j.(list entry p)` rewritten over the list and checked by evaluation.
    pub fn conjugate_by_y(&mut self, j: usize, p: usize) -> Result<ListWord> {
        let w = self.act_y(j, p)?;
        let pair = self.ts.pair();
        let (_, a, b) = self.list[p];
        let yj = self.y[j];
        let expected = self.ts.gen(pair.beta().act(yj, a), pair.h().conj(yj, b));
        if self.evaluate(&w) != expected {
            return Err(Error::RewriteFailed(
                "conjugation by a generator of H".into(),
            ));
        }
        Ok(w)
    }

    pub fn derivative_pairs(&self) -> (&[(Elem, Elem)], &[(Elem, Elem)]) {
        (&self.dg, &self.dh)
    }
}

#[derive(Clone, Copy)]
enum Letter {
    X(usize),
    Y(usize),
}

/// Rewrites `element` over the generator list and verifies the result by evaluation.
pub fn rewrite_over_generator_list(
    ts: &TensorResult,
    element: Elem,
) -> Result<(Vec<ListGenerator>, ListWord)> {
    let mut s = GeneratorList::new(ts)?;
    let w = s.rewrite(element)?;
    Ok((s.generators(), w))
}
