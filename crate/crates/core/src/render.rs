//! SVG figures of patches in the Poincaré disc.
//!
//! Output is deterministic: elements follow patch order and every number is
//! printed with at most 9 significant digits and at most 6 decimals.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::colouring::Colouring;
use crate::geometry::{DiscPoint, Geodesic, Motion};
use crate::tiling::TilingPatch;
use crate::{Error, Result};

/// Colour-blind-safe qualitative palette (Paul Tol's "muted" scheme plus a
/// neutral grey), indexed by colour − 1.
pub const PALETTE: [&str; 10] = [
    "#332288", "#88ccee", "#44aa99", "#117733", "#999933", "#ddcc77", "#cc6677", "#882255", "#aa4499", "#dddddd",
];
pub const BLACK: &str = "#000000";
pub const GRAY: &str = "#808080";
pub const PALE: &str = "#f2f2f2";
pub const PLAIN: &str = "#ffffff";
pub const HIGHLIGHT: &str = "#cc6677";

/// Arcs flatter than this radius are drawn as straight segments.
const MAX_ARC_RADIUS: f64 = 1e6;

/// Colours drawn black and gray; all other colours are drawn pale.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Emphasis {
    pub black: BTreeSet<usize>,
    pub gray: BTreeSet<usize>,
}

impl Emphasis {
    pub fn pair(black: usize, gray: usize) -> Self {
        Self {
            black: [black].into(),
            gray: [gray].into(),
        }
    }

    fn validate(&self, k: usize) -> Result<()> {
        match self.black.iter().chain(&self.gray).find(|&&c| c == 0 || c > k) {
            Some(&c) => Err(Error::ColourOutOfRange { colour: c, k }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub size: f64,
    pub palette: Vec<String>,
    pub emphasis: Option<Emphasis>,
    pub show_dual: bool,
    /// Only these tiles keep their fill; the rest are drawn pale.
    pub highlight: Option<BTreeSet<usize>>,
    /// Points marked with small dots (coincidence sites).
    pub marks: Vec<DiscPoint>,
    /// Point moved to the centre of the figure.
    pub centre: Option<DiscPoint>,
    pub stroke_width: f64,
    pub dual_stroke_width: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            size: 600.0,
            palette: PALETTE.iter().map(|s| s.to_string()).collect(),
            emphasis: None,
            show_dual: false,
            highlight: None,
            marks: Vec::new(),
            centre: None,
            stroke_width: 1.0,
            dual_stroke_width: 0.6,
        }
    }
}

/// Formats with at most 9 significant digits, at most 6 decimals and no
/// trailing zeros.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (8 - mag).clamp(0, 6) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// Maps disc coordinates to pixels, y pointing down.
#[derive(Debug, Clone, Copy)]
struct Frame {
    size: f64,
}

impl Frame {
    fn x(&self, u: f64) -> f64 {
        (u + 1.0) * self.size / 2.0
    }

    fn y(&self, v: f64) -> f64 {
        (1.0 - v) * self.size / 2.0
    }

    fn point(&self, p: &DiscPoint) -> String {
        format!("{} {}", fmt_num(self.x(p.u())), fmt_num(self.y(p.v())))
    }
}

/// The geodesic through `a` and `b`, with straight lines for nearly flat
/// arcs.
pub fn geodesic_between(a: &DiscPoint, b: &DiscPoint) -> Result<Geodesic> {
    let g = Geodesic::through(a, b)?;
    Ok(match g {
        Geodesic::Arc { radius, .. } if radius > MAX_ARC_RADIUS => {
            let (du, dv) = (b.u() - a.u(), b.v() - a.v());
            let n = du.hypot(dv);
            Geodesic::Diameter { dir: (du / n, dv / n) }
        }
        g => g,
    })
}

/// Path fragment continuing from `a` to `b` along their geodesic, in a
/// frame of the given pixel size: `L x y` or `A r r 0 0 s x y`.
pub fn geodesic_arc(a: &DiscPoint, b: &DiscPoint, size: f64) -> Result<String> {
    let f = Frame { size };
    Ok(match geodesic_between(a, b)? {
        Geodesic::Diameter { .. } => format!("L {}", f.point(b)),
        Geodesic::Arc { centre, radius } => {
            let cross = (a.u() - centre.0) * (b.v() - centre.1) - (a.v() - centre.1) * (b.u() - centre.0);
            // counterclockwise in the disc is clockwise on screen
            let sweep = if cross > 0.0 { 0 } else { 1 };
            let r = fmt_num(radius * size / 2.0);
            format!("A {r} {r} 0 0 {sweep} {}", f.point(b))
        }
    })
}

fn polygon_path(points: &[DiscPoint], f: Frame) -> Result<String> {
    let mut d = format!("M {}", f.point(&points[0]));
    for i in 0..points.len() {
        let (a, b) = (&points[i], &points[(i + 1) % points.len()]);
        d.push(' ');
        d.push_str(&geodesic_arc(a, b, f.size)?);
    }
    d.push_str(" Z");
    Ok(d)
}

/// Renders the patch, optionally coloured, as a standalone SVG document.
pub fn render(patch: &TilingPatch, colouring: Option<&Colouring>, opts: &RenderOptions) -> Result<String> {
    if let (Some(e), Some(c)) = (&opts.emphasis, colouring) {
        e.validate(c.record().k())?;
    }
    let f = Frame { size: opts.size };
    let view = match &opts.centre {
        Some(c) => Motion::translation_to(c).inverse(),
        None => Motion::identity(),
    };
    let map = |p: &DiscPoint| view.apply(p);
    let size = fmt_num(opts.size);
    let half = fmt_num(opts.size / 2.0);
    let sw = fmt_num(opts.stroke_width);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(
        out,
        "<circle cx=\"{half}\" cy=\"{half}\" r=\"{half}\" fill=\"{PLAIN}\" stroke=\"none\"/>"
    );
    out.push_str("<g id=\"tiles\" stroke=\"#000000\" stroke-linejoin=\"round\">\n");
    for (i, tile) in patch.tiles().iter().enumerate() {
        let pts: Vec<DiscPoint> = tile.vertices.iter().map(map).collect::<Result<_>>()?;
        let colour = colouring.map(|c| c.colour(i));
        let mut fill = match (colour, &opts.emphasis) {
            (None, _) => {
                if opts.highlight.is_some() {
                    HIGHLIGHT.to_string()
                } else {
                    PLAIN.to_string()
                }
            }
            (Some(c), None) => opts.palette[(c - 1) % opts.palette.len()].clone(),
            (Some(c), Some(e)) if e.black.contains(&c) => BLACK.to_string(),
            (Some(c), Some(e)) if e.gray.contains(&c) => GRAY.to_string(),
            (Some(_), Some(_)) => PALE.to_string(),
        };
        if opts.highlight.as_ref().is_some_and(|h| !h.contains(&i)) {
            fill = if colouring.is_none() {
                PLAIN.to_string()
            } else {
                PALE.to_string()
            };
        }
        let colour_attr = colour.map(|c| format!(" data-colour=\"{c}\"")).unwrap_or_default();
        let _ = writeln!(
            out,
            "<path data-tile=\"{i}\"{colour_attr} fill=\"{fill}\" stroke-width=\"{sw}\" d=\"{}\"/>",
            polygon_path(&pts, f)?
        );
    }
    out.push_str("</g>\n");
    if opts.show_dual {
        let dw = fmt_num(opts.dual_stroke_width);
        let _ = writeln!(
            out,
            "<g id=\"dual\" fill=\"none\" stroke=\"{GRAY}\" stroke-width=\"{dw}\" stroke-dasharray=\"3 2\">"
        );
        for (a, b) in patch.dual_overlay() {
            let (a, b) = (map(&a)?, map(&b)?);
            let _ = writeln!(out, "<path d=\"M {} {}\"/>", f.point(&a), geodesic_arc(&a, &b, f.size)?);
        }
        out.push_str("</g>\n");
    }
    if !opts.marks.is_empty() {
        let r = fmt_num(opts.size / 150.0);
        out.push_str("<g id=\"marks\" fill=\"#000000\">\n");
        for m in &opts.marks {
            let m = map(m)?;
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\"/>",
                fmt_num(f.x(m.u())),
                fmt_num(f.y(m.v()))
            );
        }
        out.push_str("</g>\n");
    }
    let _ = writeln!(
        out,
        "<circle cx=\"{half}\" cy=\"{half}\" r=\"{half}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{sw}\"/>"
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::colour_patch;
    use crate::low_index::{colourings, Convention};
    use crate::presentation::{Mode, Schlafli};
    use crate::tiling::build_patch;

    fn s(p: u32, q: u32) -> Schlafli {
        Schlafli::new(p, q).unwrap()
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0000000001), "0");
        assert_eq!(fmt_num(300.0), "300");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333");
        assert_eq!(fmt_num(123456.7891), "123456.789");
        assert_eq!(fmt_num(123.456789012), "123.456789");
        assert_eq!(fmt_num(-2.5), "-2.5");
    }

    #[test]
    fn straight_and_curved_edges() {
        let a = DiscPoint::new(0.5, 0.0).unwrap();
        let b = DiscPoint::new(-0.25, 0.0).unwrap();
        assert!(geodesic_arc(&a, &b, 2.0).unwrap().starts_with('L'));
        let b = DiscPoint::new(0.0, 0.5).unwrap();
        let g = geodesic_between(&a, &b).unwrap();
        let Geodesic::Arc { centre, radius } = g else {
            panic!("expected an arc")
        };
        assert!((centre.0 * centre.0 + centre.1 * centre.1 - radius * radius - 1.0).abs() < 1e-9);
        // swapping endpoints traces the same circle
        let Geodesic::Arc { centre: c2, radius: r2 } = geodesic_between(&b, &a).unwrap() else {
            panic!()
        };
        assert!((c2.0 - centre.0).abs() < 1e-12 && (c2.1 - centre.1).abs() < 1e-12 && (r2 - radius).abs() < 1e-12);
        let ab = geodesic_arc(&a, &b, 2.0).unwrap();
        let ba = geodesic_arc(&b, &a, 2.0).unwrap();
        assert_ne!(ab.split(' ').nth(5), ba.split(' ').nth(5), "sweep flips with direction");
        assert!(geodesic_arc(&a, &a, 2.0).is_err());
    }

    #[test]
    fn single_tile() {
        let patch = build_patch(s(4, 5), 0).unwrap();
        let svg = render(&patch, None, &RenderOptions::default()).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 2);
        roxmltree::Document::parse(&svg).unwrap();
    }

    #[test]
    fn fills_follow_colours() {
        let patch = build_patch(s(4, 5), 3).unwrap();
        let rec = &colourings(s(4, 5), 10, Mode::Direct, Convention::ConjugacyClass).unwrap()[1];
        let col = colour_patch(rec, &patch).unwrap();
        let svg = render(&patch, Some(&col), &RenderOptions::default()).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let fills: BTreeSet<String> = doc
            .descendants()
            .filter(|n| n.has_attribute("data-tile"))
            .map(|n| n.attribute("fill").unwrap().to_string())
            .collect();
        let expected: BTreeSet<String> = col.used_colours().iter().map(|&c| PALETTE[c - 1].to_string()).collect();
        assert_eq!(fills, expected);
        assert_eq!(
            doc.descendants().filter(|n| n.has_attribute("data-tile")).count(),
            patch.tiles().len()
        );
        let again = render(&patch, Some(&col), &RenderOptions::default()).unwrap();
        assert_eq!(svg, again);
    }

    #[test]
    fn emphasis_and_dual() {
        let patch = build_patch(s(4, 5), 2).unwrap();
        let rec = &colourings(s(4, 5), 10, Mode::Full, Convention::ConjugacyClass).unwrap()[0];
        let col = colour_patch(rec, &patch).unwrap();
        let opts = RenderOptions {
            emphasis: Some(Emphasis::pair(1, 2)),
            show_dual: true,
            ..Default::default()
        };
        let svg = render(&patch, Some(&col), &opts).unwrap();
        roxmltree::Document::parse(&svg).unwrap();
        assert!(svg.contains(BLACK) && svg.contains(GRAY) && svg.contains(PALE));
        let dual = svg.split("<g id=\"dual\"").nth(1).unwrap();
        assert_eq!(dual.matches("<path").count(), patch.adjacency().len());
        let bad = RenderOptions {
            emphasis: Some(Emphasis::pair(1, 11)),
            ..Default::default()
        };
        assert!(render(&patch, Some(&col), &bad).is_err());
    }
}
