//! Coset tables: Todd–Coxeter enumeration, canonical form, and the colour
//! permutations a complete table induces.
//!
//! Cosets are numbered from 1 in every public signature; coset 1 is the
//! subgroup itself. Tables act on the right: tracing `w = g1 g2 ... gn` from
//! coset `c` applies `g1` first.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::presentation::{Mode, Presentation, PresentationKind, Schlafli, Word};
use crate::{Error, Result};

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Partial,
    Complete,
}

/// Action of the generators (and inverses of non-involutory generators) on
/// the cosets of a subgroup.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CosetTable {
    pres: Arc<Presentation>,
    ncols: usize,
    // row-major, 0-based targets
    entries: Vec<Option<usize>>,
}

impl fmt::Debug for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CosetTable")
            .field("kind", &self.pres.kind())
            .field("schlafli", &self.pres.schlafli())
            .field("rows", &self.rows_one_based())
            .finish()
    }
}

impl CosetTable {
    /// Builds a table from 0-based rows. Each row has one entry per column of
    /// the presentation.
    pub(crate) fn from_raw(pres: Arc<Presentation>, entries: Vec<Option<usize>>) -> Self {
        let ncols = pres.columns().len();
        debug_assert_eq!(entries.len() % ncols, 0);
        Self { pres, ncols, entries }
    }

    /// Builds and validates a complete table from 1-based rows.
    pub fn from_rows(pres: Arc<Presentation>, rows: &[Vec<usize>]) -> Result<Self> {
        let ncols = pres.columns().len();
        let k = rows.len();
        let mut entries = Vec::with_capacity(k * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::MalformedTable(format!(
                    "row has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for &t in row {
                if t == 0 || t > k {
                    return Err(Error::MalformedTable(format!("entry {t} out of range 1..={k}")));
                }
                entries.push(Some(t - 1));
            }
        }
        let t = Self::from_raw(pres, entries);
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        for c in 0..self.index() {
            for col in 0..self.ncols {
                if let Some(d) = self.get(c, col) {
                    let back = self.get(d, self.pres.inverse_column(col));
                    if back != Some(c) {
                        return Err(Error::MalformedTable(format!(
                            "inconsistent inverse at coset {} column {col}",
                            c + 1
                        )));
                    }
                }
            }
        }
        if self.status() == Status::Complete {
            for c in 0..self.index() {
                for r in self.pres.relators() {
                    if self.trace0(c, r) != Some(c) {
                        return Err(Error::MalformedTable(format!(
                            "relator {} does not close at coset {}",
                            self.pres.format_word(r),
                            c + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub(crate) fn presentation_arc(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn index(&self) -> usize {
        self.entries.len() / self.ncols
    }

    pub fn status(&self) -> Status {
        if self.entries.iter().all(Option::is_some) {
            Status::Complete
        } else {
            Status::Partial
        }
    }

    pub fn is_complete(&self) -> bool {
        self.status() == Status::Complete
    }

    #[inline]
    pub(crate) fn get(&self, coset: usize, col: usize) -> Option<usize> {
        self.entries[coset * self.ncols + col]
    }

    pub(crate) fn trace0(&self, coset: usize, w: &Word) -> Option<usize> {
        let mut c = coset;
        for &l in w.letters() {
            c = self.get(c, self.pres.column_of(l))?;
        }
        Some(c)
    }

    /// Applies the letters of `w` left to right starting at coset `c`.
    /// `Ok(None)` means some step is undefined (partial tables only).
    pub fn trace(&self, c: usize, w: &Word) -> Result<Option<usize>> {
        if c == 0 || c > self.index() {
            return Err(Error::DeadCoset(c));
        }
        Ok(self.trace0(c - 1, w).map(|d| d + 1))
    }

    /// Entry for a 1-based coset and a column index.
    pub fn action(&self, c: usize, col: usize) -> Option<usize> {
        self.get(c - 1, col).map(|d| d + 1)
    }

    pub fn rows_one_based(&self) -> Vec<Vec<Option<usize>>> {
        self.entries
            .chunks(self.ncols)
            .map(|r| r.iter().map(|e| e.map(|d| d + 1)).collect())
            .collect()
    }

    /// Relabels cosets in breadth-first discovery order from `start`
    /// (0-based), scanning columns in presentation order. Fails if some coset
    /// is unreachable.
    pub(crate) fn relabel_from(&self, start: usize) -> Result<CosetTable> {
        let k = self.index();
        let mut order = Vec::with_capacity(k);
        let mut new_of = vec![usize::MAX; k];
        new_of[start] = 0;
        order.push(start);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for col in 0..self.ncols {
                let d = self.get(c, col).ok_or(Error::IncompleteTable)?;
                if new_of[d] == usize::MAX {
                    new_of[d] = order.len();
                    order.push(d);
                }
            }
            i += 1;
        }
        if order.len() != k {
            return Err(Error::MalformedTable("table is not transitive".into()));
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for &old in &order {
            for col in 0..self.ncols {
                entries.push(self.get(old, col).map(|d| new_of[d]));
            }
        }
        Ok(Self::from_raw(self.pres.clone(), entries))
    }

    /// Breadth-first normal form from coset 1. Two complete tables describe
    /// the same subgroup iff their canonical forms are identical.
    pub fn canonical_form(&self) -> Result<CosetTable> {
        if !self.is_complete() {
            return Err(Error::IncompleteTable);
        }
        self.relabel_from(0)
    }

    /// The table of the conjugate subgroup that stabilizes coset `c`
    /// (1-based), in canonical form.
    pub fn rerooted(&self, c: usize) -> Result<CosetTable> {
        if c == 0 || c > self.index() {
            return Err(Error::DeadCoset(c));
        }
        if !self.is_complete() {
            return Err(Error::IncompleteTable);
        }
        self.relabel_from(c - 1)
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_form().map(|t| &t == self).unwrap_or(false)
    }

    /// The permutation `c ↦ c·w` of the cosets.
    pub fn induced_permutation(&self, w: &Word) -> Result<Permutation> {
        if !self.is_complete() {
            return Err(Error::IncompleteTable);
        }
        let images = (0..self.index())
            .map(|c| self.trace0(c, w).expect("complete table"))
            .collect();
        Ok(Permutation(images))
    }

    /// Permutation induced by one column.
    pub fn column_permutation(&self, col: usize) -> Result<Permutation> {
        if !self.is_complete() {
            return Err(Error::IncompleteTable);
        }
        Ok(Permutation(
            (0..self.index()).map(|c| self.get(c, col).unwrap()).collect(),
        ))
    }

    /// Table of the subgroup conjugated by the base-tile reflection `r1`, in
    /// canonical form. On the rotation group this conjugation is the
    /// automorphism `x ↦ x^-1, y ↦ y^-1`, so the table is obtained by swapping
    /// each generator column with its inverse column.
    pub fn mirrored(&self) -> Result<CosetTable> {
        if self.pres.kind() != PresentationKind::VonDyck {
            return Err(Error::NotDirect);
        }
        if !self.is_complete() {
            return Err(Error::IncompleteTable);
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.index() {
            for col in 0..self.ncols {
                entries.push(self.get(c, self.pres.inverse_column(col)));
            }
        }
        Self::from_raw(self.pres.clone(), entries).canonical_form()
    }

    /// Cosets fixed by every word in `words`.
    pub fn fixed_cosets(&self, words: &[Word]) -> Vec<usize> {
        (0..self.index())
            .filter(|&c| words.iter().all(|w| self.trace0(c, w) == Some(c)))
            .map(|c| c + 1)
            .collect()
    }

    pub fn to_json(&self) -> CosetTableJson {
        let s = self.pres.schlafli();
        CosetTableJson {
            p: s.p(),
            q: s.q(),
            kind: self.pres.kind(),
            index: self.index(),
            columns: self.pres.column_names(),
            table: self
                .entries
                .chunks(self.ncols)
                .map(|r| r.iter().map(|e| e.map_or(0, |d| d + 1)).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &CosetTableJson) -> Result<Self> {
        let s = Schlafli::new(j.p, j.q)?;
        let mode = j.kind.mode();
        let pres = Arc::new(mode.presentation(s));
        if j.table.len() != j.index {
            return Err(Error::MalformedTable("index does not match row count".into()));
        }
        Self::from_rows(pres, &j.table)
    }
}

/// Interchange format: `table[i][j]` is the 1-based image of coset `i+1`
/// under column `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTableJson {
    pub p: u32,
    pub q: u32,
    pub kind: PresentationKind,
    pub index: usize,
    pub columns: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

/// A permutation of `{1..k}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Self((0..k).collect())
    }

    /// From 1-based images; `None` unless the images form a bijection.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        let mut v = Vec::with_capacity(k);
        for &i in images {
            if i == 0 || i > k || seen[i - 1] {
                return None;
            }
            seen[i - 1] = true;
            v.push(i - 1);
        }
        Some(Self(v))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Image of the 1-based point `c`.
    pub fn apply(&self, c: usize) -> usize {
        self.0[c - 1] + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut v = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            v[j] = i;
        }
        Permutation(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycles as 1-based point lists, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut c = start;
            while !seen[c] {
                seen[c] = true;
                cyc.push(c + 1);
                c = self.0[c];
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

/// Enumerates the cosets of `<subgens>` with HLT-style relator scanning and
/// union-find coincidence processing. The result is in canonical form.
pub fn todd_coxeter(pres: &Presentation, subgens: &[Word], max_cosets: usize) -> Result<CosetTable> {
    todd_coxeter_arc(Arc::new(pres.clone()), subgens, max_cosets)
}

pub(crate) fn todd_coxeter_arc(pres: Arc<Presentation>, subgens: &[Word], max_cosets: usize) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::CosetLimitExceeded { limit: 0 });
    }
    let mut e = Enumerator::new(&pres, max_cosets);
    let columns_of = |w: &Word| -> Vec<usize> { w.letters().iter().map(|&l| pres.column_of(l)).collect() };
    let relators: Vec<Vec<usize>> = pres.relators().iter().map(columns_of).collect();
    for w in subgens {
        let cols = columns_of(w);
        e.scan_and_fill(0, &cols)?;
    }
    let mut c = 0;
    while c < e.parent.len() {
        if e.is_live(c) {
            for r in &relators {
                e.scan_and_fill(c, r)?;
                if !e.is_live(c) {
                    break;
                }
            }
            if e.is_live(c) {
                for col in 0..e.ncols {
                    if e.get(c, col).is_none() {
                        e.define(c, col)?;
                    }
                }
            }
        }
        c += 1;
    }
    e.compact(pres).canonical_form()
}

struct Enumerator {
    ncols: usize,
    inv: Vec<usize>,
    table: Vec<Option<usize>>,
    parent: Vec<usize>,
    live: usize,
    limit: usize,
}

impl Enumerator {
    fn new(pres: &Arc<Presentation>, limit: usize) -> Self {
        let ncols = pres.columns().len();
        let inv = (0..ncols).map(|c| pres.inverse_column(c)).collect();
        Self {
            ncols,
            inv,
            table: vec![None; ncols],
            parent: vec![0],
            live: 1,
            limit,
        }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn get(&self, c: usize, col: usize) -> Option<usize> {
        self.table[c * self.ncols + col]
    }

    fn set(&mut self, c: usize, col: usize, v: Option<usize>) {
        self.table[c * self.ncols + col] = v;
    }

    fn define(&mut self, c: usize, col: usize) -> Result<usize> {
        if self.live >= self.limit {
            return Err(Error::CosetLimitExceeded { limit: self.limit });
        }
        let fresh = self.parent.len();
        self.parent.push(fresh);
        self.table.extend(std::iter::repeat_n(None, self.ncols));
        self.live += 1;
        self.set(c, col, Some(fresh));
        self.set(fresh, self.inv[col], Some(c));
        Ok(fresh)
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut j = c;
        while self.parent[j] != r {
            let next = self.parent[j];
            self.parent[j] = r;
            j = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut VecDeque<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            self.live -= 1;
            queue.push_back(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::new();
        self.merge(a, b, &mut queue);
        while let Some(e) = queue.pop_front() {
            for col in 0..self.ncols {
                let Some(f) = self.get(e, col) else { continue };
                let ic = self.inv[col];
                self.set(f, ic, None);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if let Some(x) = self.get(e1, col) {
                    self.merge(f1, x, &mut queue);
                } else if let Some(x) = self.get(f1, ic) {
                    self.merge(e1, x, &mut queue);
                } else {
                    self.set(e1, col, Some(f1));
                    self.set(f1, ic, Some(e1));
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() - 1;
        loop {
            while i <= j {
                match self.get(f, w[i]) {
                    Some(n) => {
                        f = n;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i {
                match self.get(b, self.inv[w[j]]) {
                    Some(n) => {
                        b = n;
                        if j == 0 {
                            // whole word traced backwards
                            if f != b {
                                self.coincidence(f, b);
                            }
                            return Ok(());
                        }
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            } else if i == j {
                self.set(f, w[i], Some(b));
                self.set(b, self.inv[w[i]], Some(f));
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }

    fn compact(mut self, pres: Arc<Presentation>) -> CosetTable {
        let live: Vec<usize> = (0..self.parent.len()).filter(|&c| self.is_live(c)).collect();
        let mut new_of = vec![usize::MAX; self.parent.len()];
        for (n, &c) in live.iter().enumerate() {
            new_of[c] = n;
        }
        let mut entries = Vec::with_capacity(live.len() * self.ncols);
        for &c in &live {
            for col in 0..self.ncols {
                let t = self.get(c, col).map(|d| {
                    let r = self.rep(d);
                    new_of[r]
                });
                entries.push(t);
            }
        }
        CosetTable::from_raw(pres, entries)
    }
}

/// Convenience: the table of the tile stabilizer itself, i.e. the action on
/// tiles, when it is finite.
pub fn tile_action(s: Schlafli, mode: Mode, max_cosets: usize) -> Result<CosetTable> {
    let pres = mode.presentation(s);
    let stab = pres.tile_stabilizer_words(mode)?;
    todd_coxeter(&pres, &stab, max_cosets)
}
