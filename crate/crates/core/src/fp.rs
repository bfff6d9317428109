//! Finitely presented groups and Todd-Coxeter coset enumeration over the trivial subgroup.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Validation};

/// A freely reduced word. Letter `k + 1` is generator `k`, letter `-(k + 1)` its inverse.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn new<I: IntoIterator<Item = i32>>(letters: I) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter 0 is not a generator");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// The one-letter word for generator `k` (0-based).
    pub fn generator(k: usize) -> Self {
        Word(vec![k as i32 + 1])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(&other.0).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        Word::new(
            std::iter::repeat(base.0)
                .take(n.unsigned_abs() as usize)
                .flatten(),
        )
    }

    pub fn cyclically_reduced(&self) -> Word {
        let w = &self.0;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    fn max_generator(&self) -> usize {
        self.0
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() || !seen.insert(n.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate or empty generator name {n:?}"
                )));
            }
        }
        if let Some(r) = relators.iter().find(|r| r.max_generator() > names.len()) {
            return Err(Error::InvalidInput(format!(
                "relator {r:?} uses an unknown generator"
            )));
        }
        Ok(Presentation { names, relators })
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Parses `gens: a,b; rels: aa, bbb, ababab`.
    ///
    /// Sections are separated by `;` or newlines. In relators an uppercase letter is the
    /// inverse of the corresponding one-letter lowercase generator; `x^n`, `x^-1` and
    /// parenthesised subwords with exponents are also accepted. `1` is the empty word.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).presentation()
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let short = self
            .names
            .iter()
            .all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()));
        let parts: Vec<String> = w
            .letters()
            .iter()
            .map(|&l| {
                let name = &self.names[l.unsigned_abs() as usize - 1];
                match (l > 0, short) {
                    (true, _) => name.clone(),
                    (false, true) => name.to_ascii_uppercase(),
                    (false, false) => format!("{name}^-1"),
                }
            })
            .collect();
        parts.join(if short { "" } else { "*" })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(
            f,
            "gens: {}; rels: {}",
            self.names.join(","),
            rels.join(", ")
        )
    }
}

struct Parser<'t> {
    chars: Vec<char>,
    pos: usize,
    text: &'t str,
}

impl<'t> Parser<'t> {
    fn new(text: &'t str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            text,
        }
    }

    fn error(&self, at: usize, message: impl Into<String>) -> Error {
        let before: String = self.chars[..at.min(self.chars.len())].iter().collect();
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_space(&mut self) {
        while self.pos < self.chars.len() && matches!(self.chars[self.pos], ' ' | '\t' | '\r') {
            self.pos += 1;
        }
    }

    fn presentation(mut self) -> Result<Presentation> {
        let _ = self.text;
        let mut names: Option<Vec<String>> = None;
        let mut rels: Option<Vec<(usize, String)>> = None;
        loop {
            self.skip_separators();
            if self.pos >= self.chars.len() {
                break;
            }
            let start = self.pos;
            let key = self.identifier();
            self.skip_space();
            if self.peek() != Some(':') {
                return Err(self.error(self.pos, "expected ':' after section name"));
            }
            self.pos += 1;
            let body_start = self.pos;
            while self.pos < self.chars.len() && !matches!(self.chars[self.pos], ';' | '\n') {
                self.pos += 1;
            }
            let body: String = self.chars[body_start..self.pos].iter().collect();
            match key.as_str() {
                "gens" | "generators" if names.is_none() => {
                    let list = split_list(&body, body_start);
                    let mut out = Vec::new();
                    for (at, item) in list {
                        if item.is_empty() || !item.chars().all(|c| c.is_alphanumeric() || c == '_')
                        {
                            return Err(self.error(at, format!("bad generator name {item:?}")));
                        }
                        out.push(item);
                    }
                    names = Some(out);
                }
                "rels" | "relators" if rels.is_none() => rels = Some(split_list(&body, body_start)),
                _ => return Err(self.error(start, format!("unexpected section {key:?}"))),
            }
        }
        let names = names.ok_or_else(|| self.error(0, "missing 'gens:' section"))?;
        let mut relators = Vec::new();
        for (at, text) in rels.unwrap_or_default() {
            if text.is_empty() {
                continue;
            }
            relators.push(self.word(&names, &text, at)?);
        }
        Presentation::new(names, relators).map_err(|e| self.error(0, e.to_string()))
    }

    fn skip_separators(&mut self) {
        while self.pos < self.chars.len()
            && matches!(self.chars[self.pos], ' ' | '\t' | '\r' | '\n' | ';')
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_alphanumeric() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// Parses one relator; `offset` is the character index of its first character.
    fn word(&self, names: &[String], text: &str, offset: usize) -> Result<Word> {
        let chars: Vec<char> = text.chars().collect();
        let mut stack: Vec<Vec<i32>> = vec![Vec::new()];
        let mut i = 0;
        let mut last: Option<Vec<i32>> = None;
        let flush = |stack: &mut Vec<Vec<i32>>, last: &mut Option<Vec<i32>>| {
            if let Some(w) = last.take() {
                stack.last_mut().unwrap().extend(w);
            }
        };
        while i < chars.len() {
            let c = chars[i];
            match c {
                ' ' | '\t' => i += 1,
                '(' => {
                    flush(&mut stack, &mut last);
                    stack.push(Vec::new());
                    i += 1;
                }
                ')' => {
                    flush(&mut stack, &mut last);
                    if stack.len() < 2 {
                        return Err(self.error(offset + i, "unmatched ')'"));
                    }
                    last = stack.pop();
                    i += 1;
                }
                '^' => {
                    let Some(base) = last.take() else {
                        return Err(self.error(offset + i, "exponent without a base"));
                    };
                    i += 1;
                    let neg = chars.get(i) == Some(&'-');
                    if neg {
                        i += 1;
                    }
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = chars[start..i].iter().collect();
                    let n: i64 = digits
                        .parse()
                        .map_err(|_| self.error(offset + start, "expected an exponent"))?;
                    let w = Word(base).pow(if neg { -n } else { n });
                    stack.last_mut().unwrap().extend(w.0);
                }
                '1' if last.is_none() && !names.iter().any(|n| n.starts_with('1')) => i += 1,
                _ => {
                    flush(&mut stack, &mut last);
                    // Longest generator name at this position.
                    let rest: String = chars[i..].iter().collect();
                    let hit = names
                        .iter()
                        .enumerate()
                        .filter(|(_, n)| rest.starts_with(n.as_str()))
                        .max_by_key(|(_, n)| n.len());
                    if let Some((k, n)) = hit {
                        last = Some(vec![k as i32 + 1]);
                        i += n.chars().count();
                        continue;
                    }
                    let lower = c.to_ascii_lowercase().to_string();
                    match names.iter().position(|n| *n == lower) {
                        Some(k) if c.is_ascii_uppercase() => {
                            last = Some(vec![-(k as i32 + 1)]);
                            i += 1;
                        }
                        _ => {
                            return Err(
                                self.error(offset + i, format!("unknown generator at {c:?}"))
                            )
                        }
                    }
                }
            }
        }
        flush(&mut stack, &mut last);
        if stack.len() != 1 {
            return Err(self.error(offset + chars.len(), "unclosed '('"));
        }
        Ok(Word::new(stack.pop().unwrap()))
    }
}

/// Splits on commas, returning trimmed items with the character index of each.
fn split_list(body: &str, offset: usize) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut start = 0;
    let chars: Vec<char> = body.chars().collect();
    for i in 0..=chars.len() {
        if i == chars.len() || chars[i] == ',' {
            let item: String = chars[start..i].iter().collect();
            let lead = item.chars().take_while(|c| c.is_whitespace()).count();
            out.push((offset + start + lead, item.trim().to_string()));
            start = i + 1;
        }
    }
    if out.len() == 1 && out[0].1.is_empty() {
        out.clear();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Hlt,
    Felsch,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Hlt => "HLT",
            Strategy::Felsch => "Felsch",
        })
    }
}

pub const DEFAULT_MAX_COSETS: usize = 2_000_000;
pub const DEFAULT_MAX_TIME: Duration = Duration::from_secs(120);
/// Largest coset table, in entries, before enumeration gives up.
pub const DEFAULT_MAX_TABLE_ENTRIES: usize = 1 << 28;

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_cosets: usize,
    pub max_time: Duration,
    pub max_table_entries: usize,
    /// An outer deadline that also stops the enumeration.
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cosets: DEFAULT_MAX_COSETS,
            max_time: DEFAULT_MAX_TIME,
            max_table_entries: DEFAULT_MAX_TABLE_ENTRIES,
            deadline: None,
        }
    }
}

const UNDEF: u32 = u32::MAX;

/// A coset table over the trivial subgroup.
///
/// Column `2k` is generator `k`, column `2k + 1` its inverse. After `enumerate` returns,
/// the live cosets are `0..live` with no undefined entries.
#[derive(Clone)]
pub struct CosetTable {
    cols: usize,
    table: Vec<u32>,
    /// Union-find parent; a coset is live iff it is its own parent.
    parent: Vec<u32>,
    live: usize,
    /// Cosets defined over the whole run, dead ones included.
    pub defined_total: usize,
}

impl fmt::Debug for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CosetTable({} live cosets, {} columns)",
            self.live, self.cols
        )
    }
}

impl CosetTable {
    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn columns(&self) -> usize {
        self.cols
    }

    /// Entry for coset `c` and column `col`, if defined.
    pub fn entry(&self, c: u32, col: usize) -> Option<u32> {
        let v = self.table[c as usize * self.cols + col];
        (v != UNDEF).then_some(v)
    }

    pub fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    /// Row/column consistency among live cosets.
    pub fn is_consistent(&self) -> bool {
        (0..self.rows() as u32)
            .filter(|&c| self.is_live(c))
            .all(|c| {
                (0..self.cols).all(|x| match self.entry(c, x) {
                    None => true,
                    Some(d) => self.is_live(d) && self.entry(d, x ^ 1) == Some(c),
                })
            })
    }

    pub fn is_complete(&self) -> bool {
        (0..self.rows() as u32)
            .filter(|&c| self.is_live(c))
            .all(|c| (0..self.cols).all(|x| self.entry(c, x).is_some()))
    }
}

struct Enumerator {
    t: CosetTable,
    /// Cyclically reduced relators as column sequences.
    relators: Vec<Vec<u32>>,
    /// Cyclic conjugates of relators and their inverses, indexed by first column.
    by_first: Vec<Vec<u32>>,
    conjugates: Vec<Vec<u32>>,
    deductions: Vec<(u32, u32)>,
    max_rows: usize,
    started: Instant,
    limits: Limits,
    ticks: u32,
    queue: Vec<u32>,
}

const DEDUCTION_STACK_CAP: usize = 1 << 20;

impl Enumerator {
    fn new(p: &Presentation, limits: Limits, with_conjugates: bool) -> Result<Self> {
        let cols = 2 * p.generator_count();
        let relators: Vec<Vec<u32>> = p
            .relators()
            .iter()
            .map(|r| r.cyclically_reduced())
            .filter(|r| !r.is_empty())
            .map(|r| r.letters().iter().map(|&l| letter_column(l)).collect())
            .collect::<HashSet<Vec<u32>>>()
            .into_iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut conjugates = Vec::new();
        let mut by_first = vec![Vec::new(); cols];
        if with_conjugates {
            let mut seen = HashSet::new();
            for r in &relators {
                let inv: Vec<u32> = r.iter().rev().map(|&x| x ^ 1).collect();
                for w in [r, &inv] {
                    for s in 0..w.len() {
                        let c: Vec<u32> = w[s..].iter().chain(&w[..s]).copied().collect();
                        if seen.insert(c.clone()) {
                            by_first[c[0] as usize].push(conjugates.len() as u32);
                            conjugates.push(c);
                        }
                    }
                }
            }
        }
        let max_rows = limits
            .max_cosets
            .min(limits.max_table_entries / cols.max(1))
            .max(1);
        let t = CosetTable {
            cols,
            table: vec![UNDEF; cols],
            parent: vec![0],
            live: 1,
            defined_total: 1,
        };
        Ok(Enumerator {
            t,
            relators,
            by_first,
            conjugates,
            deductions: Vec::new(),
            max_rows,
            started: Instant::now(),
            limits,
            ticks: 0,
            queue: Vec::new(),
        })
    }

    fn check_time(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks % 1024 != 0 {
            return Ok(());
        }
        let now = Instant::now();
        if now.duration_since(self.started) > self.limits.max_time
            || self.limits.deadline.is_some_and(|d| now > d)
        {
            return Err(Error::LimitExceeded(format!(
                "time limit after {} cosets",
                self.t.defined_total
            )));
        }
        Ok(())
    }

    #[inline]
    fn get(&self, c: u32, x: u32) -> u32 {
        self.t.table[c as usize * self.t.cols + x as usize]
    }

    #[inline]
    fn set(&mut self, c: u32, x: u32, v: u32) {
        let cols = self.t.cols;
        self.t.table[c as usize * cols + x as usize] = v;
    }

    fn define(&mut self, c: u32, x: u32) -> Result<u32> {
        if self.t.rows() >= self.max_rows {
            return Err(Error::LimitExceeded(format!(
                "coset limit {} reached ({} live)",
                self.max_rows, self.t.live
            )));
        }
        self.check_time()?;
        let n = self.t.rows() as u32;
        self.t
            .table
            .extend(std::iter::repeat(UNDEF).take(self.t.cols));
        self.t.parent.push(n);
        self.t.live += 1;
        self.t.defined_total += 1;
        self.set(c, x, n);
        self.set(n, x ^ 1, c);
        self.push_deduction(c, x);
        Ok(n)
    }

    fn push_deduction(&mut self, c: u32, x: u32) {
        if self.deductions.len() < DEDUCTION_STACK_CAP {
            self.deductions.push((c, x));
        }
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.t.parent[r as usize] != r {
            r = self.t.parent[r as usize];
        }
        let mut x = c;
        while self.t.parent[x as usize] != r {
            let next = self.t.parent[x as usize];
            self.t.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.t.parent[hi as usize] = lo;
            self.t.live -= 1;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.t.cols as u32 {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                if self.get(d, x ^ 1) == g {
                    self.set(d, x ^ 1, UNDEF);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mux = self.get(mu, x);
                if mux != UNDEF {
                    self.merge(nu, mux);
                } else {
                    let nuxi = self.get(nu, x ^ 1);
                    if nuxi != UNDEF {
                        self.merge(mu, nuxi);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                        self.push_deduction(mu, x);
                    }
                }
            }
        }
        debug_assert!(self.t.is_consistent());
    }

    /// Scans `w` from `c`, defining new cosets to close it.
    fn scan_and_fill(&mut self, c: u32, w: usize) -> Result<()> {
        let len = self.relators[w].len();
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, len as isize - 1);
        loop {
            while (i as isize) <= j {
                let n = self.get(f, self.relators[w][i]);
                if n == UNDEF {
                    break;
                }
                f = n;
                i += 1;
            }
            if i as isize > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                let n = self.get(b, self.relators[w][j as usize] ^ 1);
                if n == UNDEF {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            let x = self.relators[w][i];
            if j == i as isize {
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                self.push_deduction(f, x);
                return Ok(());
            }
            self.define(f, x)?;
        }
    }

    /// Scans a cyclic conjugate from `c` without defining cosets; closes single gaps.
    fn scan_conjugate(&mut self, c: u32, k: usize) {
        let len = self.conjugates[k].len();
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, len as isize - 1);
        while (i as isize) <= j {
            let n = self.get(f, self.conjugates[k][i]);
            if n == UNDEF {
                break;
            }
            f = n;
            i += 1;
        }
        if i as isize > j {
            if f != b {
                self.coincidence(f, b);
            }
            return;
        }
        while j >= i as isize {
            let n = self.get(b, self.conjugates[k][j as usize] ^ 1);
            if n == UNDEF {
                break;
            }
            b = n;
            j -= 1;
        }
        if j < i as isize {
            self.coincidence(f, b);
        } else if j == i as isize {
            let x = self.conjugates[k][i];
            self.set(f, x, b);
            self.set(b, x ^ 1, f);
            self.push_deduction(f, x);
        }
    }

    fn process_deductions(&mut self) -> Result<()> {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.t.is_live(c) {
                continue;
            }
            for idx in 0..self.by_first[x as usize].len() {
                let k = self.by_first[x as usize][idx] as usize;
                if !self.t.is_live(c) {
                    break;
                }
                self.scan_conjugate(c, k);
            }
            if !self.t.is_live(c) {
                continue;
            }
            let d = self.get(c, x);
            if d == UNDEF || !self.t.is_live(d) {
                continue;
            }
            for idx in 0..self.by_first[(x ^ 1) as usize].len() {
                let k = self.by_first[(x ^ 1) as usize][idx] as usize;
                if !self.t.is_live(d) {
                    break;
                }
                self.scan_conjugate(d, k);
            }
            self.check_time()?;
        }
        Ok(())
    }

    /// Renumbers live cosets to `0..live`, preserving order; returns the new index of `keep`.
    fn compact(&mut self, keep: u32) -> u32 {
        let rows = self.t.rows();
        let mut map = vec![UNDEF; rows];
        let mut next = 0u32;
        for c in 0..rows {
            if self.t.parent[c] == c as u32 {
                map[c] = next;
                next += 1;
            }
        }
        let cols = self.t.cols;
        let mut table = Vec::with_capacity(next as usize * cols);
        for c in 0..rows {
            if map[c] == UNDEF {
                continue;
            }
            for x in 0..cols {
                let v = self.t.table[c * cols + x];
                table.push(if v == UNDEF { UNDEF } else { map[v as usize] });
            }
        }
        self.t.table = table;
        self.t.parent = (0..next).collect();
        self.deductions.clear();
        // `keep` is live or the first live coset after it.
        (keep as usize..rows)
            .find(|&c| map[c] != UNDEF)
            .map_or(next, |c| map[c])
    }

    fn should_compact(&self) -> bool {
        let rows = self.t.rows();
        rows * 10 >= self.max_rows * 9 && self.t.live * 4 <= rows * 3
    }

    fn hlt(&mut self) -> Result<()> {
        let mut c = 0u32;
        while (c as usize) < self.t.rows() {
            if self.should_compact() {
                c = self.compact(c);
                continue;
            }
            if self.t.is_live(c) {
                for w in 0..self.relators.len() {
                    self.scan_and_fill(c, w)?;
                    self.process_deductions()?;
                    if !self.t.is_live(c) {
                        break;
                    }
                }
                for x in 0..self.t.cols as u32 {
                    if !self.t.is_live(c) {
                        break;
                    }
                    if self.get(c, x) == UNDEF {
                        self.define(c, x)?;
                        self.process_deductions()?;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    fn felsch(&mut self) -> Result<()> {
        // Seed: close every relator at coset 0 through deductions from definitions.
        let mut c = 0u32;
        let mut rescanned = false;
        loop {
            if (c as usize) >= self.t.rows() {
                if rescanned {
                    break;
                }
                // Coincidences can clear entries behind the pointer.
                rescanned = true;
                c = 0;
                continue;
            }
            if self.should_compact() {
                c = self.compact(c);
                continue;
            }
            if !self.t.is_live(c) {
                c += 1;
                continue;
            }
            let Some(x) = (0..self.t.cols as u32).find(|&x| self.get(c, x) == UNDEF) else {
                c += 1;
                continue;
            };
            rescanned = false;
            self.define(c, x)?;
            self.process_deductions()?;
        }
        Ok(())
    }

    fn finish(mut self) -> CosetTable {
        if self.t.live != self.t.rows() {
            self.compact(0);
        }
        self.t
    }
}

#[inline]
fn letter_column(l: i32) -> u32 {
    let k = l.unsigned_abs() - 1;
    if l > 0 {
        2 * k
    } else {
        2 * k + 1
    }
}

/// Enumerates the cosets of the trivial subgroup.
pub fn enumerate(p: &Presentation, strategy: Strategy, limits: &Limits) -> Result<CosetTable> {
    let mut e = Enumerator::new(p, *limits, true)?;
    match strategy {
        Strategy::Hlt => {
            e.hlt()?;
        }
        Strategy::Felsch => loop {
            e.felsch()?;
            // Dropped deductions can leave a relator open somewhere; close and repeat.
            let before = (e.t.defined_total, e.t.live);
            let mut c = 0u32;
            while (c as usize) < e.t.rows() {
                if e.t.is_live(c) {
                    for w in 0..e.relators.len() {
                        e.scan_and_fill(c, w)?;
                        if !e.t.is_live(c) {
                            break;
                        }
                    }
                }
                c += 1;
            }
            e.process_deductions()?;
            if (e.t.defined_total, e.t.live) == before {
                break;
            }
        },
    }
    let t = e.finish();
    debug_assert!(t.is_consistent() && t.is_complete());
    Ok(t)
}

/// The group of a complete coset table, with the element of each generator.
pub fn to_group(t: &CosetTable, p: &Presentation, cap: usize) -> Result<(FiniteGroup, Vec<Elem>)> {
    if t.live_count() > cap {
        return Err(Error::cap("enumerated group order", t.live_count(), cap));
    }
    let n = t.live_count();
    let gens = p.generator_count();
    if gens == 0 {
        return Ok((FiniteGroup::trivial(), Vec::new()));
    }
    if !t.is_complete() {
        return Err(Error::InvalidInput("coset table is not complete".into()));
    }
    // Standardize: breadth-first order from coset 0, shortlex words as labels.
    let mut order = vec![0u32];
    let mut index = vec![UNDEF; n];
    let mut word: Vec<(u32, u32)> = vec![(UNDEF, 0); n];
    index[0] = 0;
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        head += 1;
        for x in 0..2 * gens {
            let d = t.entry(c, x).unwrap();
            if index[d as usize] == UNDEF {
                index[d as usize] = order.len() as u32;
                word[order.len()] = (head as u32 - 1, x as u32);
                order.push(d);
            }
        }
    }
    let mut steps = vec![0u32; n * gens];
    for (i, &c) in order.iter().enumerate() {
        for s in 0..gens {
            steps[i * gens + s] = index[t.entry(c, 2 * s).unwrap() as usize];
        }
    }
    let labels = (n <= crate::group::DEFAULT_GROUP_CAP).then(|| {
        let mut labels = vec![String::new(); n];
        labels[0] = "e".into();
        let mut words: Vec<Word> = vec![Word::empty(); n];
        for i in 1..n {
            let (parent, x) = word[i];
            let l = if x % 2 == 0 {
                x as i32 / 2 + 1
            } else {
                -(x as i32 / 2 + 1)
            };
            words[i] = words[parent as usize].concat(&Word(vec![l]));
            labels[i] = p.format_word(&words[i]);
        }
        labels
    });
    let g = FiniteGroup::from_right_cayley_graph(n, gens, &steps, labels, &Validation::default())?;
    let images = (0..gens).map(|s| steps[s]).collect();
    Ok((g, images))
}

/// Generators for every element, relators `x_i x_j x_{ij}^-1` for every pair.
pub fn presentation_of(g: &FiniteGroup) -> Presentation {
    let n = g.order();
    let names = (0..n as Elem).map(|x| format!("x{x}")).collect();
    let mut relators = Vec::with_capacity(n * n);
    for i in 0..n as Elem {
        for j in 0..n as Elem {
            let k = g.mul(i, j);
            relators.push(Word::new([i as i32 + 1, j as i32 + 1, -(k as i32 + 1)]));
        }
    }
    Presentation::new(names, relators).expect("names are distinct")
}

/// Enumerates with the given strategy and converts to a group in one step.
pub fn enumerate_group(
    p: &Presentation,
    strategy: Strategy,
    limits: &Limits,
    cap: usize,
) -> Result<(FiniteGroup, Vec<Elem>)> {
    let t = enumerate(p, strategy, limits)?;
    to_group(&t, p, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(text: &str, s: Strategy) -> usize {
        let p = Presentation::parse(text).unwrap();
        enumerate(&p, s, &Limits::default()).unwrap().live_count()
    }

    #[test]
    fn words_are_freely_reduced() {
        let w = Word::new([1, 2, -2, -1, 3]);
        assert_eq!(w.letters(), &[3]);
        assert_eq!(Word::new([1, 2, -1]).cyclically_reduced().letters(), &[2]);
        assert_eq!(Word::new([1, 2]).inverse().letters(), &[-2, -1]);
        assert_eq!(Word::new([1]).pow(-3).letters(), &[-1, -1, -1]);
    }

    #[test]
    fn parses_the_text_format() {
        let p = Presentation::parse("gens: a,b; rels: aa, bbb, ababab").unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators().len(), 3);
        assert_eq!(p.relators()[2].letters(), &[1, 2, 1, 2, 1, 2]);
        let q = Presentation::parse("gens: a,b\nrels: a^2, (ab)^-2, aBA").unwrap();
        assert_eq!(q.relators()[1].letters(), &[-2, -1, -2, -1]);
        assert_eq!(q.relators()[2].letters(), &[1, -2, -1]);
        assert_eq!(
            Presentation::parse("gens: ; rels:")
                .unwrap()
                .generator_count(),
            0
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        match Presentation::parse("gens: a,b\nrels: aa, bcb") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 12)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Presentation::parse("gens: a,a; rels:").is_err());
        assert!(Presentation::parse("rels: aa").is_err());
        assert!(Presentation::parse("gens: a; rels: (aa").is_err());
    }

    #[test]
    fn small_enumerations() {
        for s in [Strategy::Hlt, Strategy::Felsch] {
            assert_eq!(count("gens: a; rels: aaaaa", s), 5);
            assert_eq!(count("gens: a,b; rels: aa, bb, abababab", s), 8);
            assert_eq!(count("gens: a,b; rels: aa, bbb, ababab", s), 12);
            assert_eq!(count("gens: a,b; rels: a^2, b^3, (ab)^5", s), 60);
            assert_eq!(count("gens: a,b; rels: a^4, b^2, (ab)^2", s), 8);
        }
    }

    #[test]
    fn infinite_presentations_hit_limits() {
        let p = Presentation::parse("gens: a,b; rels: a^2, b^2").unwrap();
        let limits = Limits {
            max_cosets: 1000,
            ..Limits::default()
        };
        for s in [Strategy::Hlt, Strategy::Felsch] {
            assert!(matches!(
                enumerate(&p, s, &limits),
                Err(Error::LimitExceeded(_))
            ));
        }
    }

    #[test]
    fn groups_from_tables() {
        let p = Presentation::parse("gens: ; rels:").unwrap();
        let (g, _) = enumerate_group(&p, Strategy::Hlt, &Limits::default(), 5040).unwrap();
        assert_eq!(g.order(), 1);
        let p = Presentation::parse("gens: a; rels: a^5").unwrap();
        let (g, im) = enumerate_group(&p, Strategy::Hlt, &Limits::default(), 5040).unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.element_order(im[0]), 5);
        let p = Presentation::parse("gens: a,b; rels: a^2, b^2, (ab)^3").unwrap();
        let (g, im) = enumerate_group(&p, Strategy::Felsch, &Limits::default(), 5040).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.subgroup_generated(im).order(), 6);
    }

    #[test]
    fn cayley_presentations_round_trip() {
        let z2 = FiniteGroup::abelian_table(&[2]).unwrap();
        let p = presentation_of(&z2);
        assert_eq!((p.generator_count(), p.relators().len()), (2, 4));
        let t = FiniteGroup::trivial();
        let p = presentation_of(&t);
        assert_eq!((p.generator_count(), p.relators().len()), (1, 1));
        for s in [Strategy::Hlt, Strategy::Felsch] {
            assert_eq!(
                enumerate(&p, s, &Limits::default()).unwrap().live_count(),
                1
            );
        }
    }
}
