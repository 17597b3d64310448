//! Poincaré-disc geometry backed by Lorentz matrices.
//!
//! Points are stored in disc coordinates and lifted to the hyperboloid
//! `X² + Y² − T² = −1` for every computation. Isometries are 3×3 matrices
//! preserving `J = diag(1, 1, −1)`, which covers reflections and rotations
//! with one representation.
//!
//! Words act letter by letter, left to right, matching coset tracing:
//! `word_to_motion("a b")` applies `a` first and `b` second.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::presentation::{classify_geometry, Geometry, Mode, Schlafli, Word};
use crate::{Error, Result};

/// Tolerance for structural identities (orthogonality, Lorentz form).
pub const STRUCT_TOL: f64 = 1e-9;
/// Tolerance for group-law checks such as relators mapping to the identity.
pub const GROUP_TOL: f64 = 1e-8;
/// Points at or beyond this Euclidean radius are rejected.
pub const DISC_CAP: f64 = 1.0 - 1e-12;

type Vec3 = [f64; 3];
type Mat3 = [[f64; 3]; 3];

#[inline]
fn lorentz(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    u: f64,
    v: f64,
}

impl DiscPoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(u.is_finite() && v.is_finite()) || u * u + v * v >= DISC_CAP * DISC_CAP {
            return Err(Error::OutsideDisc(u, v));
        }
        Ok(Self { u, v })
    }

    pub const fn origin() -> Self {
        Self { u: 0.0, v: 0.0 }
    }

    /// Point at hyperbolic distance `dist` from the origin in direction `angle`.
    pub fn polar(dist: f64, angle: f64) -> Result<Self> {
        let r = (dist / 2.0).tanh();
        Self::new(r * angle.cos(), r * angle.sin())
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn radius(&self) -> f64 {
        self.u.hypot(self.v)
    }

    pub fn euclidean_distance(&self, other: &DiscPoint) -> f64 {
        (self.u - other.u).hypot(self.v - other.v)
    }

    fn lift(&self) -> Vec3 {
        let r2 = self.u * self.u + self.v * self.v;
        let s = 1.0 / (1.0 - r2);
        [2.0 * self.u * s, 2.0 * self.v * s, (1.0 + r2) * s]
    }

    fn project(p: &Vec3) -> Result<Self> {
        // rescale onto the upper sheet before projecting
        let norm = -lorentz(p, p);
        if !(norm > 0.0) || p[2] <= 0.0 {
            return Err(Error::NumericOverflow);
        }
        let s = norm.sqrt();
        let (x, y, t) = (p[0] / s, p[1] / s, p[2] / s);
        let d = 1.0 + t;
        DiscPoint::new(x / d, y / d).map_err(|_| Error::NumericOverflow)
    }
}

pub fn hyperbolic_distance(a: &DiscPoint, b: &DiscPoint) -> f64 {
    let c = -lorentz(&a.lift(), &b.lift());
    c.max(1.0).acosh()
}

/// Isometry of the hyperbolic plane as a Lorentz matrix acting on column
/// vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Motion {
    m: Mat3,
}

impl Motion {
    pub const fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn matrix(&self) -> Mat3 {
        self.m
    }

    /// +1 for orientation-preserving motions, −1 for reflections.
    pub fn orientation(&self) -> i8 {
        let m = &self.m;
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det >= 0.0 {
            1
        } else {
            -1
        }
    }

    /// Rotation by `angle` (counter-clockwise) about the origin.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// The hyperbolic translation taking the origin to `p` along a diameter.
    pub fn translation_to(p: &DiscPoint) -> Self {
        let l = p.lift();
        let t = l[2];
        let (x, y) = (l[0], l[1]);
        let k = 1.0 / (1.0 + t);
        Self {
            m: [
                [1.0 + x * x * k, x * y * k, x],
                [x * y * k, 1.0 + y * y * k, y],
                [x, y, t],
            ],
        }
    }

    /// Rotation by `angle` about an arbitrary centre.
    pub fn rotation_about(centre: &DiscPoint, angle: f64) -> Self {
        let t = Self::translation_to(centre);
        t.inverse().then(&Self::rotation(angle)).then(&t)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Motion) -> Motion {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|l| other.m[i][l] * self.m[l][j]).sum();
            }
        }
        Motion { m }.renormalized()
    }

    /// `J Mᵀ J`.
    pub fn inverse(&self) -> Motion {
        let sign = [1.0, 1.0, -1.0];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = sign[i] * self.m[j][i] * sign[j];
            }
        }
        Motion { m }
    }

    pub fn apply(&self, p: &DiscPoint) -> Result<DiscPoint> {
        let l = p.lift();
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| self.m[i][j] * l[j]).sum();
        }
        DiscPoint::project(&out)
    }

    /// Largest entry of `MᵀJM − J`.
    pub fn lorentz_defect(&self) -> f64 {
        let j = [1.0, 1.0, -1.0];
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                let v: f64 = (0..3).map(|l| self.m[l][a] * j[l] * self.m[l][b]).sum();
                let target = if a == b { j[a] } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }

    /// Gram–Schmidt on the columns in the Lorentz metric: the timelike third
    /// column first, then the two spacelike ones.
    fn renormalized(mut self) -> Motion {
        let col = |m: &Mat3, j: usize| -> Vec3 { [m[0][j], m[1][j], m[2][j]] };
        let mut c2 = col(&self.m, 2);
        let n2 = (-lorentz(&c2, &c2)).sqrt();
        c2.iter_mut().for_each(|x| *x /= n2);
        let mut c0 = col(&self.m, 0);
        let d = lorentz(&c0, &c2);
        (0..3).for_each(|i| c0[i] += d * c2[i]);
        let n0 = lorentz(&c0, &c0).sqrt();
        c0.iter_mut().for_each(|x| *x /= n0);
        let mut c1 = col(&self.m, 1);
        let d2 = lorentz(&c1, &c2);
        let d0 = lorentz(&c1, &c0);
        (0..3).for_each(|i| c1[i] += d2 * c2[i] - d0 * c0[i]);
        let n1 = lorentz(&c1, &c1).sqrt();
        c1.iter_mut().for_each(|x| *x /= n1);
        for i in 0..3 {
            self.m[i] = [c0[i], c1[i], c2[i]];
        }
        self
    }

    pub fn approx_eq(&self, other: &Motion, tol: f64) -> bool {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Motion::identity(), tol)
    }

    /// Rotation angle in `[0, π]` of an orientation-preserving elliptic motion,
    /// read off the trace (`1 + 2 cos θ`).
    pub fn rotation_angle(&self) -> f64 {
        let tr = self.m[0][0] + self.m[1][1] + self.m[2][2];
        ((tr - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
    }
}

/// A hyperbolic line: a diameter or a circle orthogonal to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geodesic {
    Diameter { dir: (f64, f64) },
    Arc { centre: (f64, f64), radius: f64 },
}

impl Geodesic {
    pub fn diameter(angle: f64) -> Self {
        Geodesic::Diameter {
            dir: (angle.cos(), angle.sin()),
        }
    }

    /// The line through two distinct points.
    pub fn through(a: &DiscPoint, b: &DiscPoint) -> Result<Self> {
        if a.euclidean_distance(b) < STRUCT_TOL {
            return Err(Error::Degenerate("coincident points"));
        }
        let (pa, pb) = (a.lift(), b.lift());
        // normal n with <n, a>_J = <n, b>_J = 0, i.e. J n ∝ a × b
        let c = [
            pa[1] * pb[2] - pa[2] * pb[1],
            pa[2] * pb[0] - pa[0] * pb[2],
            pa[0] * pb[1] - pa[1] * pb[0],
        ];
        Ok(Self::from_normal([c[0], c[1], -c[2]]))
    }

    fn from_normal(n: Vec3) -> Self {
        let scale = lorentz(&n, &n).sqrt();
        let n = [n[0] / scale, n[1] / scale, n[2] / scale];
        // straight when the line passes through the origin
        let rel = n[2].abs() / n[0].hypot(n[1]);
        if rel < STRUCT_TOL {
            let d = n[0].hypot(n[1]);
            Geodesic::Diameter {
                dir: (-n[1] / d, n[0] / d),
            }
        } else {
            // points z on the circle satisfy c·z = (1 + |z|²)/2 with c = (n0, n1)/n2
            Geodesic::Arc {
                centre: (n[0] / n[2], n[1] / n[2]),
                radius: 1.0 / n[2].abs(),
            }
        }
    }

    /// Unit spacelike normal `n` with the line equal to `{P : <n, P>_J = 0}`.
    fn normal(&self) -> Vec3 {
        match *self {
            Geodesic::Diameter { dir } => [-dir.1, dir.0, 0.0],
            Geodesic::Arc { centre, radius } => [centre.0 / radius, centre.1 / radius, 1.0 / radius],
        }
    }

    /// `|c|² − r² − 1`, zero for a valid arc.
    pub fn orthogonality_defect(&self) -> f64 {
        match *self {
            Geodesic::Diameter { .. } => 0.0,
            Geodesic::Arc { centre, radius } => centre.0 * centre.0 + centre.1 * centre.1 - radius * radius - 1.0,
        }
    }

    pub fn contains(&self, p: &DiscPoint, tol: f64) -> bool {
        lorentz(&self.normal(), &p.lift()).abs() <= tol * p.lift()[2]
    }
}

pub fn reflection_in(g: &Geodesic) -> Motion {
    let n = g.normal();
    let jn = [n[0], n[1], -n[2]];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let id = if i == j { 1.0 } else { 0.0 };
            m[i][j] = id - 2.0 * n[i] * jn[j];
        }
    }
    Motion { m }
}

/// Fundamental right triangle of `(p^q)`: face centre `o` at the origin,
/// tile vertex `v` on the positive u-axis, edge midpoint `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicTriangle {
    pub o: DiscPoint,
    pub v: DiscPoint,
    pub m: DiscPoint,
    /// Mirrors of `r0` (through `o` and `m`), `r1` (through `o` and `v`) and
    /// `r2` (through `m` and `v`, the tile edge).
    pub mirrors: [Geodesic; 3],
}

impl CharacteristicTriangle {
    /// Distance from a tile centre to its vertices.
    pub fn circumradius(&self) -> f64 {
        hyperbolic_distance(&self.o, &self.v)
    }

    /// Distance from a tile centre to its edge midpoints.
    pub fn inradius(&self) -> f64 {
        hyperbolic_distance(&self.o, &self.m)
    }

    pub fn edge_length(&self) -> f64 {
        2.0 * hyperbolic_distance(&self.m, &self.v)
    }
}

fn require_hyperbolic(s: Schlafli) -> Result<()> {
    if classify_geometry(s).geometry != Geometry::Hyperbolic {
        return Err(Error::UnsupportedGeometry { p: s.p(), q: s.q() });
    }
    Ok(())
}

pub fn characteristic_triangle(s: Schlafli) -> Result<CharacteristicTriangle> {
    require_hyperbolic(s)?;
    let (pa, qa) = (PI / f64::from(s.p()), PI / f64::from(s.q()));
    // right angle at m: cosh|ov| = cot(π/p) cot(π/q), cosh|om| = cos(π/q) / sin(π/p)
    let ov = (1.0 / (pa.tan() * qa.tan())).acosh();
    let om = (qa.cos() / pa.sin()).acosh();
    let o = DiscPoint::origin();
    let v = DiscPoint::polar(ov, 0.0)?;
    let m = DiscPoint::polar(om, pa)?;
    let mirrors = [
        Geodesic::diameter(pa),
        Geodesic::diameter(0.0),
        Geodesic::through(&m, &v)?,
    ];
    Ok(CharacteristicTriangle { o, v, m, mirrors })
}

/// Motions of the generators of the mode's presentation, indexed like the
/// presentation's generators: `r0, r1, r2` for full, `x, y` for direct.
pub fn generator_motions(s: Schlafli, mode: Mode) -> Result<Vec<Motion>> {
    let tri = characteristic_triangle(s)?;
    let r: Vec<Motion> = tri.mirrors.iter().map(reflection_in).collect();
    Ok(match mode {
        Mode::Full => r,
        Mode::Direct => vec![r[0].then(&r[1]), r[1].then(&r[2])],
    })
}

/// Extends generator motions to words, letters applied left to right.
pub fn word_to_motion(w: &Word, gens: &[Motion]) -> Motion {
    w.letters().iter().fold(Motion::identity(), |acc, l| {
        let g = gens[l.gen];
        acc.then(&if l.inverse { g.inverse() } else { g })
    })
}

/// Cache of motions for repeated word evaluation.
#[derive(Debug, Default)]
pub struct MotionCache {
    cache: BTreeMap<Word, Motion>,
}

impl MotionCache {
    pub fn get(&mut self, w: &Word, gens: &[Motion]) -> Motion {
        *self.cache.entry(w.clone()).or_insert_with(|| word_to_motion(w, gens))
    }
}

/// Angle at `at` between the geodesics towards `a` and `b`.
pub fn angle_at(at: &DiscPoint, a: &DiscPoint, b: &DiscPoint) -> Result<f64> {
    let back = Motion::translation_to(at).inverse();
    let (a, b) = (back.apply(a)?, back.apply(b)?);
    let d = (a.v().atan2(a.u()) - b.v().atan2(b.u())).abs();
    Ok(if d > PI { 2.0 * PI - d } else { d })
}
