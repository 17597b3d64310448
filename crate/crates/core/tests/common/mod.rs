//! Figure builders shared by the golden-file and acceptance tests.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

use tessella_core::coincidence::{coincidence_figure, rotate_and_match, CentreKind, DEFAULT_TOL};
use tessella_core::colouring::colour_patch;
use tessella_core::low_index::{colourings, Convention};
use tessella_core::presentation::{Mode, Schlafli};
use tessella_core::render::{render, Emphasis, RenderOptions};
use tessella_core::tiling::build_patch;

pub fn s(p: u32, q: u32) -> Schlafli {
    Schlafli::new(p, q).unwrap()
}

fn coloured(p: u32, q: u32, mode: Mode, record: usize, emphasis: Emphasis, centre: CentreKind, dual: bool) -> String {
    let patch = build_patch(s(p, q), 4).unwrap();
    let rec = &colourings(s(p, q), 10, mode, Convention::ConjugacyClass).unwrap()[record];
    let col = colour_patch(rec, &patch).unwrap();
    let opts = RenderOptions {
        emphasis: Some(emphasis),
        show_dual: dual,
        centre: (centre != CentreKind::Face).then(|| centre.point(&patch)),
        ..Default::default()
    };
    render(&patch, Some(&col), &opts).unwrap()
}

/// (4^5), first full-group record, the black/gray pair forming one block of
/// its five-colour quotient, centred on a fivefold vertex, with the dual.
pub fn fig1a() -> String {
    coloured(4, 5, Mode::Full, 0, Emphasis::pair(1, 10), CentreKind::Vertex, true)
}

/// (4^5), a rotation-only record that does not extend to reflections.
pub fn fig2() -> String {
    coloured(4, 5, Mode::Direct, 1, Emphasis::pair(1, 10), CentreKind::Vertex, true)
}

/// (3^8) about the eightfold vertex: a colour fixed by the rotation.
pub fn fig3a() -> String {
    let e = Emphasis {
        black: [8].into(),
        gray: Default::default(),
    };
    coloured(3, 8, Mode::Direct, 1, e, CentreKind::Vertex, true)
}

/// (3^8) about the eightfold vertex: two colours swapped by the rotation.
pub fn fig3b() -> String {
    let e = Emphasis {
        black: [7, 10].into(),
        gray: Default::default(),
    };
    coloured(3, 8, Mode::Direct, 0, e, CentreKind::Vertex, true)
}

/// (3^8) with the tiles around coincidence sites of a half-turn about the
/// central triangle highlighted.
pub fn fig4() -> String {
    let patch = build_patch(s(3, 8), 4).unwrap();
    let report = rotate_and_match(&patch, &CentreKind::Face.point(&patch), PI, DEFAULT_TOL).unwrap();
    let opts = RenderOptions {
        highlight: Some(coincidence_figure(&patch, &report)),
        marks: report.matched.iter().map(|&(v, _)| patch.vertex_set()[v]).collect(),
        ..Default::default()
    };
    render(&patch, None, &opts).unwrap()
}

pub const FIGURES: [(&str, fn() -> String); 5] = [
    ("fig1a", fig1a),
    ("fig2", fig2),
    ("fig3a", fig3a),
    ("fig3b", fig3b),
    ("fig4", fig4),
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.svg"))
}

/// Compares against the stored file; `TESSELLA_UPDATE_GOLDEN=1` rewrites it.
pub fn check_golden(name: &str, svg: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("TESSELLA_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, svg).map_err(|e| e.to_string())?;
    }
    let stored = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if stored == svg {
        Ok(())
    } else {
        Err(format!("{name} differs from {}", path.display()))
    }
}
