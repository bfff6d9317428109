//! Permutations on `{0, .., n-1}`, written in 1-based cycle notation.
//!
//! Products act on the right: `i^(p*q) = (i^p)^q`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!(
                    "image list {images:?} is not a bijection"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)` or `(1,2)`; `()` is the identity.
    /// The degree is the largest point mentioned, or `degree` if that is larger.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut current: Option<Vec<u32>> = None;
        let mut number = String::new();
        let flush = |number: &mut String, current: &mut Option<Vec<u32>>| -> Result<()> {
            if number.is_empty() {
                return Ok(());
            }
            let v: u32 = number
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad point {number:?}")))?;
            if v == 0 {
                return Err(Error::InvalidInput("points are numbered from 1".into()));
            }
            match current {
                Some(c) => c.push(v - 1),
                None => return Err(Error::InvalidInput("point outside a cycle".into())),
            }
            number.clear();
            Ok(())
        };
        for ch in text.chars() {
            match ch {
                '(' => {
                    if current.is_some() {
                        return Err(Error::InvalidInput("nested '('".into()));
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    flush(&mut number, &mut current)?;
                    match current.take() {
                        Some(c) => cycles.push(c),
                        None => return Err(Error::InvalidInput("unmatched ')'".into())),
                    }
                }
                c if c.is_ascii_digit() => number.push(c),
                ',' | ' ' | '\t' => flush(&mut number, &mut current)?,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unexpected character {other:?} in permutation"
                    )))
                }
            }
        }
        if current.is_some() || !number.is_empty() {
            return Err(Error::InvalidInput("unterminated cycle".into()));
        }
        let n = cycles
            .iter()
            .flatten()
            .map(|&p| p as usize + 1)
            .max()
            .unwrap_or(0)
            .max(degree);
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut moved = vec![false; n];
        for cycle in &cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if moved[p as usize] {
                    return Err(Error::InvalidInput(format!(
                        "point {} repeated in {text:?}",
                        p + 1
                    )));
                }
                moved[p as usize] = true;
                images[p as usize] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.0.get(point as usize).copied().unwrap_or(point)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        let n = self.degree().max(other.degree());
        Perm((0..n as u32).map(|i| other.apply(self.apply(i))).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    /// Pads with fixed points up to degree `n`.
    pub fn extended(&self, n: usize) -> Perm {
        let mut v = self.0.clone();
        v.extend(self.0.len() as u32..n as u32);
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.0[p] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let p = Perm::parse("(1 2 3)(4 5)", 0).unwrap();
        assert_eq!(p.degree(), 5);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::parse("()", 3).unwrap().to_string(), "()");
        assert_eq!(Perm::parse("(1,2)", 0).unwrap().images(), &[1, 0]);
    }

    #[test]
    fn composition_acts_on_the_right() {
        let a = Perm::parse("(1 2)", 3).unwrap();
        let b = Perm::parse("(2 3)", 3).unwrap();
        // 1 -> 2 -> 3
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Perm::parse("(1 2", 0).is_err());
        assert!(Perm::parse("(1 1)", 0).is_err());
        assert!(Perm::parse("(0 1)", 0).is_err());
        assert!(Perm::from_images(vec![0, 0]).is_err());
    }
}
