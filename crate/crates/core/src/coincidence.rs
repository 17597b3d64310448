//! Coincidence sites: vertices of a patch that stay vertices after a
//! rotation which is not a symmetry of the tiling.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::geometry::{DiscPoint, Motion};
use crate::tiling::{PointIndex, TilingPatch};
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentreKind {
    /// Centre of the base tile (the origin).
    Face,
    /// The base tile's vertex on the positive u-axis.
    Vertex,
    /// Midpoint of the base tile's edge through that vertex.
    Edge,
}

impl CentreKind {
    pub fn point(self, patch: &TilingPatch) -> DiscPoint {
        let tri = patch.triangle();
        match self {
            CentreKind::Face => tri.o,
            CentreKind::Vertex => tri.v,
            CentreKind::Edge => tri.m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceReport {
    pub centre: [f64; 2],
    pub angle: f64,
    pub tolerance: f64,
    /// `(vertex, image vertex)` index pairs into the patch vertex set.
    pub matched: Vec<(usize, usize)>,
    pub candidate_count: usize,
    pub fraction: f64,
}

impl CoincidenceReport {
    pub fn matched_vertices(&self) -> BTreeSet<usize> {
        self.matched.iter().map(|&(a, _)| a).collect()
    }
}

/// Klein-coordinate slack for deciding that a point lies in the patch.
const INSIDE_TOL: f64 = 1e-9;

/// Rotates the vertex set by `angle` about `centre` and pairs each candidate
/// with the vertex its image lands on. A vertex is a candidate when its image
/// lies in the region covered by the patch tiles: a tiling vertex there is a
/// vertex of some patch tile, so missing partners are genuine.
pub fn rotate_and_match(patch: &TilingPatch, centre: &DiscPoint, angle: f64, tol: f64) -> Result<CoincidenceReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::BadTolerance);
    }
    if patch.locate(centre, INSIDE_TOL).is_none() {
        return Err(Error::CentreOutsidePatch);
    }
    let rot = Motion::rotation_about(centre, angle);
    let mut index = PointIndex::new(tol);
    for v in patch.vertex_set() {
        index.insert(*v);
    }
    let mut candidates = 0;
    let mut matched = Vec::new();
    let mut taken = BTreeSet::new();
    for (i, v) in patch.vertex_set().iter().enumerate() {
        let Ok(image) = rot.apply(v) else { continue };
        if patch.locate(&image, INSIDE_TOL).is_none() {
            continue;
        }
        candidates += 1;
        if let Some(j) = index.find(&image) {
            if taken.insert(j) {
                matched.push((i, j));
            }
        }
    }
    let fraction = if candidates == 0 {
        0.0
    } else {
        matched.len() as f64 / candidates as f64
    };
    Ok(CoincidenceReport {
        centre: [centre.u(), centre.v()],
        angle,
        tolerance: tol,
        matched,
        candidate_count: candidates,
        fraction,
    })
}

/// Tiles incident to a matched vertex, ascending.
pub fn coincidence_figure(patch: &TilingPatch, report: &CoincidenceReport) -> BTreeSet<usize> {
    report
        .matched
        .iter()
        .flat_map(|&(v, _)| patch.vertex_tiles(v).iter().copied())
        .collect()
}
