//! Finite patches of hyperbolic `(p^q)` with word-labelled tiles.
//!
//! Patches grow breadth-first over edge adjacency: depth 0 is the base tile
//! (centred at the origin, one vertex on the positive u-axis), depth 1 adds
//! its `p` edge neighbours, and so on. Each tile carries a word in the
//! reflections `r0, r1, r2` whose motion carries the base tile onto it.
//! Duplicates are detected geometrically by hashing tile centres.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geometry::{
    characteristic_triangle, generator_motions, hyperbolic_distance, word_to_motion, CharacteristicTriangle, DiscPoint,
    Motion,
};
use crate::presentation::{coxeter_presentation, Letter, Mode, Presentation, Schlafli, Word};
use crate::{Result, SCHEMA};

/// Points closer than this (Euclidean, in disc coordinates) are identified.
pub const DEDUP_TOL: f64 = 1e-9;
/// Tiles whose centre lies beyond this radius are dropped.
pub const SAFE_RADIUS: f64 = 1.0 - 1e-9;
pub const DEFAULT_DEPTH: usize = 4;
pub const MAX_DEPTH: usize = 6;

#[derive(Debug, Clone)]
pub struct Tile {
    /// Reflection word carrying the base tile here.
    pub word: Word,
    pub centre: DiscPoint,
    /// The `p` vertices in cyclic order.
    pub vertices: Vec<DiscPoint>,
    pub depth: usize,
    motion: Motion,
}

impl Tile {
    pub fn motion(&self) -> &Motion {
        &self.motion
    }
}

/// Spatial hash of points with tolerance-aware lookup.
#[derive(Debug, Clone, Default)]
pub struct PointIndex {
    cells: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<DiscPoint>,
    tol: f64,
}

impl PointIndex {
    pub fn new(tol: f64) -> Self {
        Self {
            cells: HashMap::new(),
            points: Vec::new(),
            tol,
        }
    }

    fn cell(&self, p: &DiscPoint) -> (i64, i64) {
        ((p.u() / self.tol).floor() as i64, (p.v() / self.tol).floor() as i64)
    }

    pub fn find(&self, p: &DiscPoint) -> Option<usize> {
        let (cu, cv) = self.cell(p);
        let mut best: Option<(f64, usize)> = None;
        for du in -1..=1 {
            for dv in -1..=1 {
                if let Some(ids) = self.cells.get(&(cu + du, cv + dv)) {
                    for &i in ids {
                        let d = self.points[i].euclidean_distance(p);
                        if d <= self.tol && best.is_none_or(|(bd, _)| d < bd) {
                            best = Some((d, i));
                        }
                    }
                }
            }
        }
        best.map(|(_, i)| i)
    }

    /// Index of `p`, inserting it when no stored point is within tolerance.
    pub fn insert(&mut self, p: DiscPoint) -> (usize, bool) {
        if let Some(i) = self.find(&p) {
            return (i, false);
        }
        let i = self.points.len();
        let c = self.cell(&p);
        self.cells.entry(c).or_default().push(i);
        self.points.push(p);
        (i, true)
    }

    pub fn points(&self) -> &[DiscPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct TilingPatch {
    schlafli: Schlafli,
    depth: usize,
    triangle: CharacteristicTriangle,
    pres: Arc<Presentation>,
    tiles: Vec<Tile>,
    /// Edge-sharing pairs `(i, j)` with `i < j`.
    adjacency: Vec<(usize, usize)>,
    neighbours: Vec<Vec<usize>>,
    centres: PointIndex,
    vertices: PointIndex,
    vertex_tiles: Vec<Vec<usize>>,
    tile_vertices: Vec<Vec<usize>>,
    /// Hyperbolic radius about the origin entirely covered by the patch.
    cover_radius: f64,
    truncated: bool,
}

impl TilingPatch {
    pub fn schlafli(&self) -> Schlafli {
        self.schlafli
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn triangle(&self) -> &CharacteristicTriangle {
        &self.triangle
    }

    /// The Coxeter presentation whose letters label the tiles.
    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn adjacency(&self) -> &[(usize, usize)] {
        &self.adjacency
    }

    pub fn neighbours(&self, tile: usize) -> &[usize] {
        &self.neighbours[tile]
    }

    pub fn tile_vertices(&self, tile: usize) -> &[usize] {
        &self.tile_vertices[tile]
    }

    pub fn vertex_tiles(&self, vertex: usize) -> &[usize] {
        &self.vertex_tiles[vertex]
    }

    pub fn cover_radius(&self) -> f64 {
        self.cover_radius
    }

    /// Whether some tiles were dropped for being too close to the boundary.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Tiles whose neighbours are all in the patch.
    pub fn is_interior(&self, tile: usize) -> bool {
        self.neighbours[tile].len() == self.schlafli.p() as usize
    }

    /// Vertices surrounded by a full ring of `q` tiles.
    pub fn is_interior_vertex(&self, vertex: usize) -> bool {
        self.vertex_tiles[vertex].len() == self.schlafli.q() as usize
    }

    pub fn find_tile(&self, centre: &DiscPoint) -> Option<usize> {
        self.centres.find(centre)
    }

    /// A tile containing `p` (boundary included, up to `tol` in Klein
    /// coordinates), preferring the lowest index.
    pub fn locate(&self, p: &DiscPoint, tol: f64) -> Option<usize> {
        let reach = self.triangle.circumradius() + 1e-6;
        let kp = klein(p);
        self.tiles.iter().position(|t| {
            if hyperbolic_distance(&t.centre, p) > reach {
                return false;
            }
            let kc = klein(&t.centre);
            let n = t.vertices.len();
            (0..n).all(|i| {
                let a = klein(&t.vertices[i]);
                let b = klein(&t.vertices[(i + 1) % n]);
                let side = |x: [f64; 2]| (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
                side(kp) * side(kc).signum() >= -tol
            })
        })
    }

    pub fn find_vertex(&self, p: &DiscPoint) -> Option<usize> {
        self.vertices.find(p)
    }

    /// Deduplicated vertices in order of first appearance.
    pub fn vertex_set(&self) -> &[DiscPoint] {
        self.vertices.points()
    }

    /// One segment per adjacent pair, joining the two tile centres: the edges
    /// of the dual tiling `(q^p)`.
    pub fn dual_overlay(&self) -> Vec<(DiscPoint, DiscPoint)> {
        self.adjacency
            .iter()
            .map(|&(a, b)| (self.tiles[a].centre, self.tiles[b].centre))
            .collect()
    }

    pub fn to_json(&self) -> PatchJson {
        let pt = |p: &DiscPoint| [p.u(), p.v()];
        PatchJson {
            schema: SCHEMA.to_string(),
            p: self.schlafli.p(),
            q: self.schlafli.q(),
            depth: self.depth,
            truncated: self.truncated,
            tiles: self
                .tiles
                .iter()
                .map(|t| TileJson {
                    word: self.pres.format_word(&t.word),
                    depth: t.depth,
                    centre: pt(&t.centre),
                    vertices: t.vertices.iter().map(pt).collect(),
                })
                .collect(),
            adjacency: self.adjacency.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

/// Klein-model coordinates, where geodesics are straight chords.
fn klein(p: &DiscPoint) -> [f64; 2] {
    let f = 2.0 / (1.0 + p.u() * p.u() + p.v() * p.v());
    [f * p.u(), f * p.v()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TileJson {
    pub word: String,
    pub depth: usize,
    pub centre: [f64; 2],
    pub vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchJson {
    pub schema: String,
    pub p: u32,
    pub q: u32,
    pub depth: usize,
    pub truncated: bool,
    pub tiles: Vec<TileJson>,
    pub adjacency: Vec<[usize; 2]>,
}

/// Drops `r r` pairs, which are trivial for reflections.
fn cancel_squares(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        if out.last() == Some(&l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word::from_letters(out)
}

/// Shortest reflection words `u` whose motion carries the base tile across
/// each of its edges, in order of increasing angle of the shared edge.
fn neighbour_words(pres: &Presentation, gens: &[Motion], tri: &CharacteristicTriangle) -> Result<Vec<(Word, Motion)>> {
    let p = pres.schlafli().p() as usize;
    let r2 = pres.generator_word(2);
    let mut found: Vec<(f64, Word, Motion)> = Vec::new();
    let mut index = PointIndex::new(1e-6);
    for start in [0usize, 1] {
        for len in 0..=p {
            let letters: Vec<(usize, i32)> = (0..len).map(|i| ((start + i) % 2, 1)).collect();
            let d = pres.word(&letters)?;
            let u = r2.concat(&d);
            let m = word_to_motion(&u, gens);
            let c = m.apply(&tri.o)?;
            let (i, fresh) = index.insert(c);
            if fresh {
                found.push((c.v().atan2(c.u()), u, m));
            } else if (u.len(), &u) < (found[i].1.len(), &found[i].1) {
                found[i].1 = u;
                found[i].2 = m;
            }
        }
    }
    debug_assert_eq!(found.len(), p);
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&a, &b| {
        let norm = |x: f64| {
            if x < -1e-12 {
                x + 2.0 * std::f64::consts::PI
            } else {
                x
            }
        };
        norm(found[a].0).partial_cmp(&norm(found[b].0)).unwrap()
    });
    Ok(order.into_iter().map(|i| (found[i].1.clone(), found[i].2)).collect())
}

/// Builds the patch of `(p^q)` out to breadth-first `depth`.
pub fn build_patch(s: Schlafli, depth: usize) -> Result<TilingPatch> {
    let tri = characteristic_triangle(s)?;
    let pres = Arc::new(coxeter_presentation(s));
    let gens = generator_motions(s, Mode::Full)?;
    let neigh = neighbour_words(&pres, &gens, &tri)?;
    let p = s.p() as usize;
    let base_vertices: Vec<DiscPoint> = (0..p)
        .map(|j| Motion::rotation(2.0 * std::f64::consts::PI * j as f64 / p as f64).apply(&tri.v))
        .collect::<Result<_>>()?;

    let make_tile = |word: Word, motion: Motion, depth: usize| -> Result<Tile> {
        let centre = motion.apply(&tri.o)?;
        let vertices = base_vertices.iter().map(|v| motion.apply(v)).collect::<Result<_>>()?;
        Ok(Tile {
            word,
            centre,
            vertices,
            depth,
            motion,
        })
    };

    let mut tiles = vec![make_tile(Word::identity(), Motion::identity(), 0)?];
    let mut centres = PointIndex::new(DEDUP_TOL);
    centres.insert(tiles[0].centre);
    let mut truncated = false;
    let mut frontier = vec![0usize];
    // closest centre among tiles just outside the patch
    let mut outside_min = f64::INFINITY;

    for shell in 0..=depth {
        let mut next = Vec::new();
        for &t in &frontier {
            for (u, mu) in &neigh {
                let word = cancel_squares(&u.concat(&tiles[t].word));
                let motion = mu.then(&tiles[t].motion);
                let centre = match motion.apply(&tri.o) {
                    Ok(c) => c,
                    Err(_) => {
                        truncated = true;
                        continue;
                    }
                };
                if let Some(existing) = centres.find(&centre) {
                    let e = &mut tiles[existing];
                    if e.depth == shell + 1 && (word.len(), &word) < (e.word.len(), &e.word) {
                        e.word = word;
                        e.motion = motion;
                    }
                    continue;
                }
                if shell == depth {
                    outside_min = outside_min.min(hyperbolic_distance(&DiscPoint::origin(), &centre));
                    continue;
                }
                if centre.radius() > SAFE_RADIUS {
                    truncated = true;
                    continue;
                }
                let tile = match make_tile(word, motion, shell + 1) {
                    Ok(tile) => tile,
                    Err(_) => {
                        truncated = true;
                        continue;
                    }
                };
                centres.insert(tile.centre);
                next.push(tiles.len());
                tiles.push(tile);
            }
        }
        frontier = next;
    }

    // adjacency and vertex bookkeeping
    let mut neighbours = vec![Vec::new(); tiles.len()];
    let mut adjacency = Vec::new();
    for (i, t) in tiles.iter().enumerate() {
        for (_, mu) in &neigh {
            let c = mu.then(&t.motion).apply(&tri.o)?;
            if let Some(j) = centres.find(&c) {
                neighbours[i].push(j);
                if i < j {
                    adjacency.push((i, j));
                }
            }
        }
    }
    adjacency.sort_unstable();
    let mut vertices = PointIndex::new(DEDUP_TOL);
    let mut vertex_tiles: Vec<Vec<usize>> = Vec::new();
    let mut tile_vertices = Vec::with_capacity(tiles.len());
    for (i, t) in tiles.iter().enumerate() {
        let mut ids = Vec::with_capacity(p);
        for v in &t.vertices {
            let (vi, fresh) = vertices.insert(*v);
            if fresh {
                vertex_tiles.push(Vec::new());
            }
            vertex_tiles[vi].push(i);
            ids.push(vi);
        }
        tile_vertices.push(ids);
    }

    let cover_radius = (outside_min - tri.circumradius()).max(0.0);
    Ok(TilingPatch {
        schlafli: s,
        depth,
        triangle: tri,
        pres,
        tiles,
        adjacency,
        neighbours,
        centres,
        vertices,
        vertex_tiles,
        tile_vertices,
        cover_radius,
        truncated,
    })
}
