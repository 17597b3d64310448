//! Low-index subgroup enumeration with a stabilizer constraint.
//!
//! A perfect colouring of the tiles of `(p^q)` with `k` colours is the same
//! thing as a subgroup of index `k` of the symmetry group that contains the
//! stabilizer of the base tile: the colour class of the base tile is the
//! orbit of that subgroup. The search below builds coset tables of index
//! exactly `k` by backtracking.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coset_table::{CosetTable, CosetTableJson};
use crate::presentation::{Mode, Presentation, PresentationKind, Schlafli, Word};
use crate::{Error, Result};

pub mod oracle;

pub use oracle::oracle_count;

/// How colourings are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Every subgroup containing the stabilizer of the base tile, once.
    /// Equivalently: every invariant partition of the tiles.
    #[serde(rename = "fixed")]
    FixedStabilizer,
    /// One subgroup per conjugacy class of subgroups that contain the
    /// stabilizer of *some* tile, conjugating by the full symmetry group of
    /// the tiling (reflections included, also in direct mode).
    #[serde(rename = "conjugacy")]
    ConjugacyClass,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::FixedStabilizer => "fixed",
            Convention::ConjugacyClass => "conjugacy",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One perfect colouring: a canonical complete coset table plus provenance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupRecord {
    pub id: usize,
    pub mode: Mode,
    pub convention: Convention,
    table: CosetTable,
}

impl SubgroupRecord {
    pub fn new(id: usize, convention: Convention, table: CosetTable) -> Result<Self> {
        let table = table.canonical_form()?;
        Ok(Self {
            id,
            mode: table.presentation().mode(),
            convention,
            table,
        })
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn presentation(&self) -> &Presentation {
        self.table.presentation()
    }

    pub fn schlafli(&self) -> Schlafli {
        self.table.presentation().schlafli()
    }

    pub fn k(&self) -> usize {
        self.table.index()
    }

    pub fn to_json(&self) -> RecordJson {
        let s = self.schlafli();
        RecordJson {
            id: self.id,
            p: s.p(),
            q: s.q(),
            mode: self.mode,
            convention: self.convention,
            k: self.k(),
            table: self.table.to_json(),
        }
    }

    pub fn from_json(j: &RecordJson) -> Result<Self> {
        let table = CosetTable::from_json(&j.table)?;
        if table.presentation().mode() != j.mode || j.k != table.index() || (j.p, j.q) != (j.table.p, j.table.q) {
            return Err(Error::MalformedTable("record metadata disagrees with its table".into()));
        }
        Self::new(j.id, j.convention, table)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub id: usize,
    pub p: u32,
    pub q: u32,
    pub mode: Mode,
    pub convention: Convention,
    pub k: usize,
    pub table: CosetTableJson,
}

/// All subgroups of index exactly `k` containing `<must_fix>` (fixed
/// convention), or one representative per conjugacy class of subgroups with
/// a conjugate containing `<must_fix>` (conjugacy convention; see
/// [`Convention::ConjugacyClass`]). Records come
/// out in lexicographic order of their canonical tables.
pub fn enumerate_subgroups(
    pres: &Presentation,
    k: usize,
    must_fix: &[Word],
    convention: Convention,
) -> Result<Vec<SubgroupRecord>> {
    if k == 0 {
        return Err(Error::InvalidIndex(k));
    }
    let pres = Arc::new(pres.clone());
    let tables = search(&pres, k, must_fix);
    let mut out = Vec::new();
    for entries in tables {
        let table = CosetTable::from_raw(pres.clone(), entries.into_iter().map(Some).collect());
        debug_assert!(table.is_canonical());
        if convention == Convention::ConjugacyClass && !first_in_class(&table, must_fix)? {
            continue;
        }
        out.push(SubgroupRecord {
            id: out.len(),
            mode: pres.mode(),
            convention,
            table,
        });
    }
    Ok(out)
}

/// A table represents its conjugacy class when no other member of the class
/// that contains `<must_fix>` has a lexicographically smaller canonical
/// table.
fn first_in_class(table: &CosetTable, must_fix: &[Word]) -> Result<bool> {
    Ok(class_representative(table, must_fix)?.rows_one_based() == table.rows_one_based())
}

/// The lexicographically smallest canonical table among the conjugates of
/// `table` that contain `<must_fix>`. Conjugation runs over the full
/// symmetry group of the tiling: for rotation-group tables the class also
/// contains the mirrored subgroup and its conjugates.
pub fn class_representative(table: &CosetTable, must_fix: &[Word]) -> Result<CosetTable> {
    let mut roots = vec![table.canonical_form()?];
    if table.presentation().kind() == PresentationKind::VonDyck {
        roots.push(table.mirrored()?);
    }
    let mut best: Option<CosetTable> = None;
    for root in &roots {
        for c in root.fixed_cosets(must_fix) {
            let t = root.rerooted(c)?;
            if best.as_ref().is_none_or(|b| t.rows_one_based() < b.rows_one_based()) {
                best = Some(t);
            }
        }
    }
    best.ok_or_else(|| Error::MalformedTable("no conjugate contains the required words".into()))
}

/// Number of perfect colourings of `(p^q)` with `k` colours.
pub fn count_colourings(s: Schlafli, k: usize, mode: Mode, convention: Convention) -> Result<usize> {
    Ok(colourings(s, k, mode, convention)?.len())
}

/// The records behind [`count_colourings`].
pub fn colourings(s: Schlafli, k: usize, mode: Mode, convention: Convention) -> Result<Vec<SubgroupRecord>> {
    let pres = mode.presentation(s);
    let stab = pres.tile_stabilizer_words(mode)?;
    enumerate_subgroups(&pres, k, &stab, convention)
}

const UNDEF: usize = usize::MAX;

/// Depth-first search over standardized partial coset tables. Returns the
/// complete tables (0-based, row-major) in lexicographic order.
fn search(pres: &Presentation, k: usize, must_fix: &[Word]) -> Vec<Vec<usize>> {
    let ncols = pres.columns().len();
    let cols_of = |w: &Word| -> Vec<usize> { w.letters().iter().map(|&l| pres.column_of(l)).collect() };
    let ctx = Context {
        k,
        ncols,
        inv: (0..ncols).map(|c| pres.inverse_column(c)).collect(),
        relators: pres.relators().iter().map(cols_of).collect(),
        fix: must_fix
            .iter()
            .map(cols_of)
            .filter(|w: &Vec<usize>| !w.is_empty())
            .collect(),
    };
    let mut state = State {
        table: vec![UNDEF; k * ncols],
        n: 1,
    };
    let mut out = Vec::new();
    if ctx.deduce(&mut state) {
        ctx.extend(state, 0, &mut out);
    }
    out
}

struct Context {
    k: usize,
    ncols: usize,
    inv: Vec<usize>,
    relators: Vec<Vec<usize>>,
    fix: Vec<Vec<usize>>,
}

#[derive(Clone)]
struct State {
    table: Vec<usize>,
    n: usize,
}

enum Scan {
    Closed,
    Open,
    Deduce { coset: usize, col: usize, target: usize },
    Conflict,
}

impl Context {
    #[inline]
    fn get(&self, st: &State, c: usize, col: usize) -> usize {
        st.table[c * self.ncols + col]
    }

    fn set(&self, st: &mut State, c: usize, col: usize, target: usize) {
        st.table[c * self.ncols + col] = target;
        st.table[target * self.ncols + self.inv[col]] = c;
    }

    /// Traces `w` from `c` forwards and backwards; `w` should return to
    /// `c`.
    fn scan(&self, st: &State, c: usize, w: &[usize]) -> Scan {
        let mut f = c;
        let mut i = 0;
        while i < w.len() {
            let next = self.get(st, f, w[i]);
            if next == UNDEF {
                break;
            }
            f = next;
            i += 1;
        }
        if i == w.len() {
            return if f == c { Scan::Closed } else { Scan::Conflict };
        }
        let mut b = c;
        let mut j = w.len();
        while j > i {
            let prev = self.get(st, b, self.inv[w[j - 1]]);
            if prev == UNDEF {
                break;
            }
            b = prev;
            j -= 1;
        }
        if j == i {
            if f == b {
                Scan::Closed
            } else {
                Scan::Conflict
            }
        } else if j == i + 1 {
            // one gap left: f·w[i] must be b
            Scan::Deduce {
                coset: f,
                col: w[i],
                target: b,
            }
        } else {
            Scan::Open
        }
    }

    /// Closes the state under relator deductions. Returns false on conflict.
    fn deduce(&self, st: &mut State) -> bool {
        loop {
            let mut changed = false;
            for w in &self.fix {
                match self.apply(st, 0, w) {
                    None => return false,
                    Some(c) => changed |= c,
                }
            }
            for c in 0..st.n {
                for r in &self.relators {
                    match self.apply(st, c, r) {
                        None => return false,
                        Some(ch) => changed |= ch,
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn apply(&self, st: &mut State, c: usize, w: &[usize]) -> Option<bool> {
        match self.scan(st, c, w) {
            Scan::Closed | Scan::Open => Some(false),
            Scan::Conflict => None,
            Scan::Deduce { coset, col, target } => {
                if self.get(st, target, self.inv[col]) != UNDEF {
                    return None;
                }
                self.set(st, coset, col, target);
                Some(true)
            }
        }
    }

    fn first_undefined(&self, st: &State, from: usize) -> Option<usize> {
        (from..st.n * self.ncols).find(|&pos| st.table[pos] == UNDEF)
    }

    fn extend(&self, st: State, from: usize, out: &mut Vec<Vec<usize>>) {
        let Some(pos) = self.first_undefined(&st, from) else {
            if st.n == self.k {
                out.push(st.table);
            }
            return;
        };
        let (c, col) = (pos / self.ncols, pos % self.ncols);
        let icol = self.inv[col];
        // existing cosets first, ascending, then a single new coset
        for target in 0..st.n {
            let free = if target == c && icol == col {
                true
            } else {
                self.get(&st, target, icol) == UNDEF
            };
            if !free {
                continue;
            }
            let mut next = st.clone();
            self.set(&mut next, c, col, target);
            if self.deduce(&mut next) {
                self.extend(next, pos + 1, out);
            }
        }
        if st.n < self.k {
            let mut next = st;
            let fresh = next.n;
            next.n += 1;
            self.set(&mut next, c, col, fresh);
            if self.deduce(&mut next) {
                self.extend(next, pos + 1, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{coxeter_presentation, vondyck_presentation};

    fn s(p: u32, q: u32) -> Schlafli {
        Schlafli::new(p, q).unwrap()
    }

    #[test]
    fn index_one_is_whole_group() {
        for pres in [coxeter_presentation(s(4, 5)), vondyck_presentation(s(3, 8))] {
            for conv in [Convention::FixedStabilizer, Convention::ConjugacyClass] {
                let recs = enumerate_subgroups(&pres, 1, &[], conv).unwrap();
                assert_eq!(recs.len(), 1);
                assert_eq!(recs[0].k(), 1);
            }
        }
    }

    #[test]
    fn zero_index_rejected() {
        let pres = vondyck_presentation(s(4, 5));
        assert_eq!(
            enumerate_subgroups(&pres, 0, &[], Convention::FixedStabilizer),
            Err(Error::InvalidIndex(0))
        );
    }

    #[test]
    fn icosahedron_ten_colours() {
        let n = count_colourings(s(3, 5), 10, Mode::Direct, Convention::FixedStabilizer).unwrap();
        assert_eq!(n, 1);
        let recs = colourings(s(3, 5), 10, Mode::Direct, Convention::FixedStabilizer).unwrap();
        let x = recs[0].presentation().parse_word("x").unwrap();
        assert_eq!(recs[0].table().trace(1, &x).unwrap(), Some(1));
    }

    #[test]
    fn order_four_five_counts() {
        let count = |mode, conv| count_colourings(s(4, 5), 10, mode, conv).unwrap();
        // 4 reflection-invariant partitions and two mirror pairs
        assert_eq!(count(Mode::Direct, Convention::FixedStabilizer), 8);
        assert_eq!(count(Mode::Direct, Convention::ConjugacyClass), 6);
        assert_eq!(count(Mode::Full, Convention::FixedStabilizer), 4);
        assert_eq!(count(Mode::Full, Convention::ConjugacyClass), 4);
    }

    #[test]
    fn records_respect_stabilizer_and_are_canonical() {
        for mode in [Mode::Full, Mode::Direct] {
            let recs = colourings(s(4, 5), 10, mode, Convention::FixedStabilizer).unwrap();
            let stab = recs[0].presentation().tile_stabilizer_words(mode).unwrap();
            for (i, r) in recs.iter().enumerate() {
                assert_eq!(r.id, i);
                assert!(r.table().is_canonical());
                for w in &stab {
                    assert_eq!(r.table().trace(1, w).unwrap(), Some(1));
                }
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic_and_sorted() {
        let a = colourings(s(6, 4), 10, Mode::Direct, Convention::FixedStabilizer).unwrap();
        let b = colourings(s(6, 4), 10, Mode::Direct, Convention::FixedStabilizer).unwrap();
        assert_eq!(a, b);
        for w in a.windows(2) {
            assert!(w[0].table().rows_one_based() < w[1].table().rows_one_based());
        }
    }

    #[test]
    fn conjugacy_representatives_are_subset() {
        let fixed = colourings(s(4, 5), 10, Mode::Direct, Convention::FixedStabilizer).unwrap();
        let conj = colourings(s(4, 5), 10, Mode::Direct, Convention::ConjugacyClass).unwrap();
        assert!(conj.len() <= fixed.len());
        for c in &conj {
            assert!(fixed.iter().any(|f| f.table() == c.table()));
        }
    }

    #[test]
    fn record_json_round_trip() {
        let recs = colourings(s(4, 5), 10, Mode::Full, Convention::FixedStabilizer).unwrap();
        let text = serde_json::to_string(&recs[2].to_json()).unwrap();
        let back = SubgroupRecord::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, recs[2]);
    }
}
