//! Subgroup records read as tile colourings.
//!
//! A tile reached from the base tile by the word `w` gets colour
//! `trace(1, w)`. Applying a fixed generator motion `g` to that tile gives
//! the tile of `w·g`, whose colour is `trace(1, w)·g`, so every generator
//! acts on colours by its column permutation.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coset_table::{CosetTable, Permutation};
use crate::geometry::generator_motions;
use crate::low_index::{class_representative, Convention, SubgroupRecord};
use crate::presentation::{vondyck_presentation, Letter, Mode, PresentationKind, Word};
use crate::tiling::TilingPatch;
use crate::{Error, Result};

/// Rewrites a reflection word as a rotation word reaching the same tile.
/// Odd words are first prefixed with `r1`, which fixes the base tile.
pub fn direct_tile_word(w: &Word) -> Word {
    let mut letters: Vec<usize> = w.letters().iter().map(|l| l.gen).collect();
    if letters.len() % 2 == 1 {
        letters.insert(0, 1);
    }
    let (x, y) = (Letter::new(0), Letter::new(1));
    let (xi, yi) = (Letter::inv(0), Letter::inv(1));
    let mut out = Vec::with_capacity(letters.len());
    for pair in letters.chunks(2) {
        match (pair[0], pair[1]) {
            (0, 1) => out.push(x),
            (1, 0) => out.push(xi),
            (1, 2) => out.push(y),
            (2, 1) => out.push(yi),
            (0, 2) => out.extend([x, y]),
            (2, 0) => out.extend([yi, xi]),
            _ => {}
        }
    }
    Word::from_letters(out).free_reduce()
}

#[derive(Debug, Clone)]
pub struct Colouring {
    record: SubgroupRecord,
    /// 1-based colour per patch tile.
    colours: Vec<usize>,
}

impl Colouring {
    pub fn record(&self) -> &SubgroupRecord {
        &self.record
    }

    pub fn colour(&self, tile: usize) -> usize {
        self.colours[tile]
    }

    pub fn colours(&self) -> &[usize] {
        &self.colours
    }

    pub fn used_colours(&self) -> BTreeSet<usize> {
        self.colours.iter().copied().collect()
    }

    /// Colour of the tile reached by a reflection word.
    pub fn colour_of_word(&self, w: &Word) -> Result<usize> {
        word_colour(&self.record, w)
    }
}

fn word_colour(rec: &SubgroupRecord, w: &Word) -> Result<usize> {
    let w = match rec.mode {
        Mode::Full => w.clone(),
        Mode::Direct => direct_tile_word(w),
    };
    Ok(rec.table().trace(1, &w)?.expect("records are complete"))
}

/// Colours every tile of `patch` by tracing its word.
pub fn colour_patch(rec: &SubgroupRecord, patch: &TilingPatch) -> Result<Colouring> {
    check_schlafli(rec, patch)?;
    let colours = patch
        .tiles()
        .iter()
        .map(|t| word_colour(rec, &t.word))
        .collect::<Result<_>>()?;
    Ok(Colouring {
        record: rec.clone(),
        colours,
    })
}

fn check_schlafli(rec: &SubgroupRecord, patch: &TilingPatch) -> Result<()> {
    let (a, b) = (rec.schlafli(), patch.schlafli());
    if a != b {
        return Err(Error::TilingMismatch(a.p(), a.q(), b.p(), b.q()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub generator: String,
    pub tile: usize,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorAction {
    pub generator: String,
    /// 1-based colour images, present when every colour was observed.
    pub images: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectnessReport {
    pub mode: Mode,
    pub actions: Vec<GeneratorAction>,
    pub violations: Vec<Violation>,
    pub checked_tiles: usize,
    pub perfect: bool,
}

/// Checks geometrically that each generator motion of `mode` carries colour
/// classes onto colour classes. Every tile whose image lies in the patch is
/// examined; a patch without interior tiles is rejected.
pub fn verify_perfect(col: &Colouring, patch: &TilingPatch, mode: Mode) -> Result<PerfectnessReport> {
    check_schlafli(&col.record, patch)?;
    if !(0..patch.tiles().len()).any(|t| patch.is_interior(t)) {
        return Err(Error::PatchTooShallow);
    }
    let names: Vec<String> = mode
        .presentation(patch.schlafli())
        .generators()
        .iter()
        .map(|g| g.name.clone())
        .collect();
    let k = col.record.k();
    let mut actions = Vec::new();
    let mut violations = Vec::new();
    let mut checked = BTreeSet::new();
    for (g, name) in generator_motions(patch.schlafli(), mode)?.iter().zip(names) {
        let mut image: Vec<Option<usize>> = vec![None; k + 1];
        let mut preimage: Vec<Option<usize>> = vec![None; k + 1];
        for t in 0..patch.tiles().len() {
            let Ok(c) = g.apply(&patch.tiles()[t].centre) else {
                continue;
            };
            let Some(u) = patch.find_tile(&c) else {
                continue;
            };
            checked.insert(t);
            let (from, to) = (col.colours[t], col.colours[u]);
            match (image[from], preimage[to]) {
                (Some(e), _) if e != to => violations.push(Violation {
                    generator: name.clone(),
                    tile: t,
                    expected: e,
                    found: to,
                }),
                (None, Some(f)) if f != from => {
                    // two colours sent to one
                    violations.push(Violation {
                        generator: name.clone(),
                        tile: t,
                        expected: f,
                        found: from,
                    })
                }
                _ => {
                    image[from] = Some(to);
                    preimage[to] = Some(from);
                }
            }
        }
        let images: Option<Vec<usize>> = image[1..].iter().copied().collect();
        actions.push(GeneratorAction {
            generator: name,
            images,
        });
    }
    Ok(PerfectnessReport {
        mode,
        actions,
        perfect: violations.is_empty(),
        violations,
        checked_tiles: checked.len(),
    })
}

/// Every nontrivial block system of the coset action, as a block label per
/// coset (0-based labels in order of first appearance).
pub fn block_systems(table: &CosetTable) -> Result<Vec<Vec<usize>>> {
    let k = table.index();
    let perms: Vec<Permutation> = (0..table.presentation().columns().len())
        .map(|c| table.column_permutation(c))
        .collect::<Result<_>>()?;
    let mut blocks: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: Vec<Vec<usize>> = Vec::new();
    for c in 1..k {
        let b = block_closure(k, &perms, &[0, c]);
        if blocks.insert(b.clone()) {
            queue.push(b);
        }
    }
    // blocks containing 0 are closed under joining with any further point
    while let Some(b) = queue.pop() {
        let labels = &b;
        let members: Vec<usize> = (0..k).filter(|&i| labels[i] == 0).collect();
        for c in 0..k {
            if labels[c] == 0 {
                continue;
            }
            let mut seed = members.clone();
            seed.push(c);
            let nb = block_closure(k, &perms, &seed);
            if blocks.insert(nb.clone()) {
                queue.push(nb);
            }
        }
    }
    let nblocks = |b: &Vec<usize>| b.iter().max().map_or(0, |m| m + 1);
    let mut out: Vec<Vec<usize>> = blocks.into_iter().filter(|b| nblocks(b) > 1).collect();
    out.sort_by(|a, b| nblocks(b).cmp(&nblocks(a)).then_with(|| a.cmp(b)));
    Ok(out)
}

/// The finest block system in which all of `seed` share a block: union-find
/// merging, propagated through each generator until stable.
fn block_closure(k: usize, perms: &[Permutation], seed: &[usize]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut pending: Vec<(usize, usize)> = seed.windows(2).map(|w| (w[0], w[1])).collect();
    while let Some((a, b)) = pending.pop() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            continue;
        }
        parent[rb.max(ra)] = ra.min(rb);
        for p in perms {
            pending.push((p.apply(a + 1) - 1, p.apply(b + 1) - 1));
        }
    }
    let mut label = vec![usize::MAX; k];
    let mut next = 0;
    let mut out = vec![0; k];
    for i in 0..k {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[i] = label[r];
    }
    out
}

/// Action of the generators on the blocks of a block system.
fn quotient_table(table: &CosetTable, labels: &[usize]) -> Result<CosetTable> {
    let n = labels.iter().max().map_or(0, |m| m + 1);
    let ncols = table.presentation().columns().len();
    let mut rows = vec![vec![0usize; ncols]; n];
    for c in 0..table.index() {
        for (col, slot) in rows[labels[c]].iter_mut().enumerate() {
            *slot = labels[table.action(c + 1, col).expect("complete") - 1] + 1;
        }
    }
    CosetTable::from_rows(table.presentation_arc().clone(), &rows)?.canonical_form()
}

/// All proper coarsenings of the colouring that are again perfect, as
/// records of smaller index, most colours first. Quotient records contain the
/// record's own subgroup and are listed under the fixed convention.
pub fn quotient_colourings(rec: &SubgroupRecord) -> Result<Vec<SubgroupRecord>> {
    block_systems(rec.table())?
        .iter()
        .enumerate()
        .map(|(i, labels)| SubgroupRecord::new(i, Convention::FixedStabilizer, quotient_table(rec.table(), labels)?))
        .collect()
}

/// The record conjugated by the base-tile reflection `r1`: the mirror image
/// colouring. Under the conjugacy convention the result is the class
/// representative, which is the record itself.
pub fn reflection_conjugate(rec: &SubgroupRecord) -> Result<SubgroupRecord> {
    if rec.mode != Mode::Direct {
        return Err(Error::NotDirect);
    }
    let table = match rec.convention {
        Convention::FixedStabilizer => rec.table().mirrored()?,
        Convention::ConjugacyClass => {
            let stab = rec.presentation().tile_stabilizer_words(Mode::Direct)?;
            class_representative(&rec.table().mirrored()?, &stab)?
        }
    };
    SubgroupRecord::new(rec.id, rec.convention, table)
}

/// For each record, the position of its reflection conjugate in `records`.
pub fn reflection_involution(records: &[SubgroupRecord]) -> Result<Vec<usize>> {
    let index: BTreeMap<Vec<Vec<Option<usize>>>, usize> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.table().rows_one_based(), i))
        .collect();
    records
        .iter()
        .map(|r| {
            let m = reflection_conjugate(r)?;
            index
                .get(&m.table().rows_one_based())
                .copied()
                .ok_or_else(|| Error::MalformedTable("record set is not closed under reflection".into()))
        })
        .collect()
}

/// Orbits of [`reflection_involution`], each sorted, in order of least member.
pub fn reflection_orbits(records: &[SubgroupRecord]) -> Result<Vec<Vec<usize>>> {
    let inv = reflection_involution(records)?;
    let mut out = Vec::new();
    for (i, &j) in inv.iter().enumerate() {
        if i <= j {
            out.push(if i == j { vec![i] } else { vec![i, j] });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Centre {
    Face,
    Vertex,
}

/// Rotation word about the base tile's centre or about its vertex on the
/// positive u-axis.
pub fn centre_word(rec: &SubgroupRecord, centre: Centre) -> Word {
    let pres = rec.presentation();
    match (pres.kind(), centre) {
        (PresentationKind::VonDyck, Centre::Face) => pres.generator_word(0),
        (PresentationKind::VonDyck, Centre::Vertex) => pres.generator_word(1),
        (PresentationKind::Coxeter, Centre::Face) => pres.generator_word(0).concat(&pres.generator_word(1)),
        (PresentationKind::Coxeter, Centre::Vertex) => pres.generator_word(1).concat(&pres.generator_word(2)),
    }
}

/// Cycle type of the colour permutation of the rotation about `centre`.
pub fn centre_cycle_structure(rec: &SubgroupRecord, centre: Centre) -> Result<Vec<usize>> {
    Ok(rec.table().induced_permutation(&centre_word(rec, centre))?.cycle_type())
}

/// The table of the record's rotation subgroup `H ∩ G⁺` acting on the same
/// colours. For a full-group record this exists because `H` contains
/// reflections, so rotations alone still reach every colour.
pub fn direct_restriction(rec: &SubgroupRecord) -> Result<CosetTable> {
    match rec.mode {
        Mode::Direct => Ok(rec.table().clone()),
        Mode::Full => {
            let t = rec.table();
            let r: Vec<Permutation> = (0..3).map(|c| t.column_permutation(c)).collect::<Result<_>>()?;
            let x = r[0].then(&r[1]);
            let y = r[1].then(&r[2]);
            let perms = [x.clone(), y.clone(), x.inverse(), y.inverse()];
            let rows: Vec<Vec<usize>> = (1..=t.index())
                .map(|c| perms.iter().map(|p| p.apply(c)).collect())
                .collect();
            let pres = Arc::new(vondyck_presentation(rec.schlafli()));
            CosetTable::from_rows(pres, &rows)?.canonical_form()
        }
    }
}

/// Whether the two records colour the tiles with the same partition.
pub fn partitions_equal(a: &SubgroupRecord, b: &SubgroupRecord) -> Result<bool> {
    let (sa, sb) = (a.schlafli(), b.schlafli());
    if sa != sb {
        return Err(Error::TilingMismatch(sa.p(), sa.q(), sb.p(), sb.q()));
    }
    if a.mode == b.mode {
        return Ok(a.table().rows_one_based() == b.table().rows_one_based());
    }
    Ok(direct_restriction(a)?.rows_one_based() == direct_restriction(b)?.rows_one_based())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DiscPoint, Motion};
    use crate::low_index::colourings;
    use crate::presentation::Schlafli;
    use crate::tiling::build_patch;

    fn s(p: u32, q: u32) -> Schlafli {
        Schlafli::new(p, q).unwrap()
    }

    #[test]
    fn direct_word_reaches_same_tile() {
        let patch = build_patch(s(4, 5), 3).unwrap();
        let gens = generator_motions(s(4, 5), Mode::Direct).unwrap();
        for t in patch.tiles() {
            let w = direct_tile_word(&t.word);
            let c = crate::geometry::word_to_motion(&w, &gens)
                .apply(&DiscPoint::origin())
                .unwrap();
            assert!(c.euclidean_distance(&t.centre) < 1e-9);
        }
    }

    #[test]
    fn base_tile_gets_colour_one_and_all_colours_appear() {
        // one of the 8 rotation colourings first shows its tenth colour at depth 4
        let patch = build_patch(s(4, 5), 4).unwrap();
        for mode in [Mode::Full, Mode::Direct] {
            for rec in colourings(s(4, 5), 10, mode, Convention::FixedStabilizer).unwrap() {
                let col = colour_patch(&rec, &patch).unwrap();
                assert_eq!(col.colour(0), 1);
                assert_eq!(col.used_colours().len(), 10);
            }
        }
    }

    #[test]
    fn equivariance_under_generator_motions() {
        let patch = build_patch(s(4, 5), 3).unwrap();
        for mode in [Mode::Full, Mode::Direct] {
            let gens = generator_motions(s(4, 5), mode).unwrap();
            for rec in colourings(s(4, 5), 10, mode, Convention::FixedStabilizer).unwrap() {
                let col = colour_patch(&rec, &patch).unwrap();
                for (g, m) in gens.iter().enumerate() {
                    let perm = rec.table().column_permutation(g).unwrap();
                    for (t, tile) in patch.tiles().iter().enumerate() {
                        if let Some(u) = patch.find_tile(&m.apply(&tile.centre).unwrap()) {
                            assert_eq!(col.colour(u), perm.apply(col.colour(t)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vertex_ring_follows_y() {
        // tiles around the base tile's vertex on the u-axis are y^j images
        let patch = build_patch(s(4, 5), 3).unwrap();
        let pres = Mode::Direct.presentation(s(4, 5));
        for rec in colourings(s(4, 5), 10, Mode::Direct, Convention::FixedStabilizer).unwrap() {
            let col = colour_patch(&rec, &patch).unwrap();
            let y = rec.table().induced_permutation(&pres.generator_word(1)).unwrap();
            let gens = generator_motions(s(4, 5), Mode::Direct).unwrap();
            let mut c = 1;
            let mut m = Motion::identity();
            for _ in 0..5 {
                let t = patch.find_tile(&m.apply(&DiscPoint::origin()).unwrap()).unwrap();
                assert_eq!(col.colour(t), c);
                c = y.apply(c);
                m = gens[1].then(&m);
            }
        }
    }

    #[test]
    fn perfectness() {
        let patch = build_patch(s(4, 5), 4).unwrap();
        for rec in colourings(s(4, 5), 10, Mode::Full, Convention::FixedStabilizer).unwrap() {
            let col = colour_patch(&rec, &patch).unwrap();
            let rep = verify_perfect(&col, &patch, Mode::Full).unwrap();
            assert!(rep.perfect);
            assert!(rep.actions.iter().all(|a| a.images.is_some()));
        }
        let mut failing = 0;
        for rec in colourings(s(4, 5), 10, Mode::Direct, Convention::FixedStabilizer).unwrap() {
            let col = colour_patch(&rec, &patch).unwrap();
            assert!(verify_perfect(&col, &patch, Mode::Direct).unwrap().perfect);
            let full = verify_perfect(&col, &patch, Mode::Full).unwrap();
            assert_eq!(full.perfect, full.violations.is_empty());
            if !full.perfect {
                failing += 1;
            }
        }
        // 8 rotation colourings, 4 of which extend to the full group
        assert_eq!(failing, 4);
        let shallow = build_patch(s(4, 5), 0).unwrap();
        let rec = &colourings(s(4, 5), 10, Mode::Full, Convention::FixedStabilizer).unwrap()[0];
        let col = colour_patch(rec, &shallow).unwrap();
        assert!(matches!(
            verify_perfect(&col, &shallow, Mode::Full),
            Err(Error::PatchTooShallow)
        ));
    }

    #[test]
    fn quotients_are_sound() {
        for mode in [Mode::Full, Mode::Direct] {
            for rec in colourings(s(4, 5), 10, mode, Convention::FixedStabilizer).unwrap() {
                let systems = block_systems(rec.table()).unwrap();
                let quotients = quotient_colourings(&rec).unwrap();
                assert_eq!(systems.len(), quotients.len());
                for (labels, q) in systems.iter().zip(&quotients) {
                    assert!([2, 5].contains(&q.k()));
                    // blocks are permuted by every generator
                    for col in 0..rec.presentation().columns().len() {
                        let p = rec.table().column_permutation(col).unwrap();
                        for a in 0..10 {
                            for b in 0..10 {
                                if labels[a] == labels[b] {
                                    assert_eq!(labels[p.apply(a + 1) - 1], labels[p.apply(b + 1) - 1]);
                                }
                            }
                        }
                    }
                    // the quotient colour of a tile is the block of its colour
                    let patch = build_patch(s(4, 5), 2).unwrap();
                    let fine = colour_patch(&rec, &patch).unwrap();
                    let coarse = colour_patch(q, &patch).unwrap();
                    let mut map = BTreeMap::new();
                    for t in 0..patch.tiles().len() {
                        let e = map.entry(labels[fine.colour(t) - 1]).or_insert(coarse.colour(t));
                        assert_eq!(*e, coarse.colour(t));
                    }
                }
            }
        }
    }

    #[test]
    fn block_closure_of_everything() {
        let rec = &colourings(s(4, 5), 10, Mode::Full, Convention::FixedStabilizer).unwrap()[0];
        let perms: Vec<Permutation> = (0..3).map(|c| rec.table().column_permutation(c).unwrap()).collect();
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(block_closure(10, &perms, &all), vec![0; 10]);
        assert_eq!(block_closure(10, &perms, &[3]), (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn reflection_is_an_involution() {
        for (p, q) in [(4, 5), (3, 8), (6, 4), (6, 5)] {
            for conv in [Convention::FixedStabilizer, Convention::ConjugacyClass] {
                let recs = colourings(s(p, q), 10, Mode::Direct, conv).unwrap();
                let inv = reflection_involution(&recs).unwrap();
                for (i, &j) in inv.iter().enumerate() {
                    assert_eq!(inv[j], i);
                }
            }
        }
        let full = &colourings(s(4, 5), 10, Mode::Full, Convention::FixedStabilizer).unwrap()[0];
        assert!(matches!(reflection_conjugate(full), Err(Error::NotDirect)));
    }

    #[test]
    fn mirror_fixed_records_are_full_restrictions() {
        // on the fixed convention, a rotation colouring is its own mirror
        // image exactly when it comes from a full-group colouring
        for (p, q) in [(4, 5), (3, 8), (4, 6), (6, 4), (3, 10)] {
            let direct = colourings(s(p, q), 10, Mode::Direct, Convention::FixedStabilizer).unwrap();
            let full = colourings(s(p, q), 10, Mode::Full, Convention::FixedStabilizer).unwrap();
            let inv = reflection_involution(&direct).unwrap();
            for (i, d) in direct.iter().enumerate() {
                let from_full = full.iter().any(|f| partitions_equal(f, d).unwrap());
                assert_eq!(inv[i] == i, from_full, "{p},{q} record {i}");
            }
        }
    }

    #[test]
    fn cross_mode_injection() {
        let direct = colourings(s(4, 5), 10, Mode::Direct, Convention::FixedStabilizer).unwrap();
        let full = colourings(s(4, 5), 10, Mode::Full, Convention::FixedStabilizer).unwrap();
        let mut hits = BTreeSet::new();
        for f in &full {
            assert!(partitions_equal(f, f).unwrap());
            let m: Vec<usize> = (0..direct.len())
                .filter(|&i| partitions_equal(f, &direct[i]).unwrap())
                .collect();
            assert_eq!(m.len(), 1);
            hits.insert(m[0]);
        }
        assert_eq!(hits.len(), full.len());
        let other = &colourings(s(3, 8), 10, Mode::Full, Convention::FixedStabilizer).unwrap()[0];
        assert!(partitions_equal(other, &full[0]).is_err());
    }

    #[test]
    fn cycle_structures() {
        let recs = colourings(s(4, 5), 10, Mode::Direct, Convention::ConjugacyClass).unwrap();
        for rec in &recs {
            assert!(centre_cycle_structure(rec, Centre::Vertex)
                .unwrap()
                .iter()
                .all(|&l| 5 % l == 0));
            assert!(centre_cycle_structure(rec, Centre::Face)
                .unwrap()
                .iter()
                .all(|&l| 4 % l == 0));
        }
        let id = recs[0].table().induced_permutation(&Word::identity()).unwrap();
        assert_eq!(id.cycle_type(), vec![1; 10]);
        let full = &colourings(s(4, 5), 10, Mode::Full, Convention::FixedStabilizer).unwrap()[0];
        let restricted = direct_restriction(full).unwrap();
        let y = restricted.column_permutation(1).unwrap().cycle_type();
        assert_eq!(centre_cycle_structure(full, Centre::Vertex).unwrap(), y);
    }
}
