//! Symmetry groups of regular tilings as finite presentations.
//!
//! The full symmetry group of `(p^q)` is the Coxeter group `[p,q]`, generated
//! by the reflections `r0, r1, r2` in the sides of the characteristic
//! triangle. Its rotation subgroup is the von Dyck group `D(p,q,2)` with
//! generators `x = r0 r1` (turning about the centre of the base tile) and
//! `y = r1 r2` (turning about a vertex of the base tile).
//!
//! The base tile is the p-gon whose stabilizer is `<r0, r1>` (or `<x>` for
//! rotations only). Every other module relies on that convention.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Schläfli symbol `{p,q}`: regular p-gons, q meeting at every vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Schlafli {
    p: u32,
    q: u32,
}

impl Schlafli {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p < 3 || q < 3 {
            return Err(Error::InvalidSchlafli { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `d = 2(1/p + 1/q)`, kept exact.
    pub fn d(&self) -> Ratio<i64> {
        let (p, q) = (i64::from(self.p), i64::from(self.q));
        Ratio::new(2 * (p + q), p * q)
    }
}

impl fmt::Display for Schlafli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}^{})", self.p, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub geometry: Geometry,
    pub d: Ratio<i64>,
}

/// Decides which plane `(p^q)` lives in by comparing `d` with 1 exactly.
pub fn classify_geometry(s: Schlafli) -> Classification {
    let d = s.d();
    let geometry = match d.cmp(&Ratio::from_integer(1)) {
        std::cmp::Ordering::Greater => Geometry::Spherical,
        std::cmp::Ordering::Equal => Geometry::Euclidean,
        std::cmp::Ordering::Less => Geometry::Hyperbolic,
    };
    Classification { geometry, d }
}

/// Which isometries a colouring has to respect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// All isometries, reflections included.
    Full,
    /// Orientation-preserving isometries only.
    Direct,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Direct => "direct",
        }
    }

    pub fn presentation(self, s: Schlafli) -> Presentation {
        match self {
            Mode::Full => coxeter_presentation(s),
            Mode::Direct => vondyck_presentation(s),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub involutory: bool,
    /// Order of the generator itself, `None` when infinite.
    pub order: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Self {
        Self { gen, inverse: false }
    }

    pub fn inv(gen: usize) -> Self {
        Self { gen, inverse: true }
    }
}

/// A word in the generators. Letters of involutory generators always carry
/// exponent +1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.iter().copied().cycle().take(self.0.len() * n).collect())
    }

    /// Cancels adjacent `g g^-1` pairs. Involutory letters are normalized
    /// to exponent +1 and therefore never cancel here.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match out.last() {
                Some(&last) if last.gen == l.gen && last.inverse != l.inverse => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresentationKind {
    Coxeter,
    VonDyck,
}

impl PresentationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PresentationKind::Coxeter => "coxeter",
            PresentationKind::VonDyck => "vondyck",
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            PresentationKind::Coxeter => Mode::Full,
            PresentationKind::VonDyck => Mode::Direct,
        }
    }
}

/// One column of a coset table: a generator or the inverse of a
/// non-involutory generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Column {
    pub letter: Letter,
    pub inverse_column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    schlafli: Schlafli,
    kind: PresentationKind,
    generators: Vec<Generator>,
    relators: Vec<Word>,
    columns: Vec<Column>,
}

impl Presentation {
    fn new(schlafli: Schlafli, kind: PresentationKind, generators: Vec<Generator>) -> Self {
        // generators first, then inverses of the non-involutory ones
        let mut columns: Vec<Column> = generators
            .iter()
            .enumerate()
            .map(|(i, _)| Column {
                letter: Letter::new(i),
                inverse_column: i,
            })
            .collect();
        for (i, g) in generators.iter().enumerate() {
            if !g.involutory {
                let c = columns.len();
                columns[i].inverse_column = c;
                columns.push(Column {
                    letter: Letter::inv(i),
                    inverse_column: i,
                });
            }
        }
        Self {
            schlafli,
            kind,
            generators,
            relators: Vec::new(),
            columns,
        }
    }

    pub fn schlafli(&self) -> Schlafli {
        self.schlafli
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }

    pub fn mode(&self) -> Mode {
        self.kind.mode()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column_of(&self, l: Letter) -> usize {
        if l.inverse && !self.generators[l.gen].involutory {
            self.columns[l.gen].inverse_column
        } else {
            l.gen
        }
    }

    pub fn inverse_column(&self, col: usize) -> usize {
        self.columns[col].inverse_column
    }

    pub fn column_names(&self) -> Vec<String> {
        self.columns.iter().map(|c| self.letter_name(c.letter)).collect()
    }

    /// Builds a normalized word from `(generator, exponent)` pairs.
    pub fn word(&self, letters: &[(usize, i32)]) -> Result<Word> {
        let mut out = Vec::new();
        for &(gen, exp) in letters {
            let g = self.generators.get(gen).ok_or(Error::UnknownGenerator(gen))?;
            let inverse = exp < 0 && !g.involutory;
            for _ in 0..exp.unsigned_abs() {
                out.push(Letter { gen, inverse });
            }
        }
        Ok(Word(out))
    }

    pub fn generator_word(&self, gen: usize) -> Word {
        Word(vec![Letter::new(gen)])
    }

    pub fn inverse(&self, w: &Word) -> Word {
        Word(
            w.0.iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    inverse: !l.inverse && !self.generators[l.gen].involutory,
                })
                .collect(),
        )
    }

    fn letter_name(&self, l: Letter) -> String {
        let name = &self.generators[l.gen].name;
        if l.inverse {
            format!("{name}^-1")
        } else {
            name.clone()
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.0.iter().map(|&l| self.letter_name(l)).collect::<Vec<_>>().join(" ")
    }

    /// Parses space-separated letters such as `"x y^-1 x"`. The empty string
    /// (or `"1"`) is the identity.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let gen = self
                .generators
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| Error::BadWord(s.to_string()))?;
            out.push(Letter {
                gen,
                inverse: inverse && !self.generators[gen].involutory,
            });
        }
        Ok(Word(out))
    }

    /// Stabilizer of the base tile for this presentation's mode.
    pub fn tile_stabilizer_words(&self, mode: Mode) -> Result<Vec<Word>> {
        if self.kind.mode() != mode {
            return Err(Error::ModeMismatch {
                mode: mode.as_str(),
                kind: self.kind.as_str(),
            });
        }
        Ok(match mode {
            Mode::Full => vec![self.generator_word(0), self.generator_word(1)],
            Mode::Direct => vec![self.generator_word(0)],
        })
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            kind: self.kind,
            p: self.schlafli.p,
            q: self.schlafli.q,
            generators: self.generators.iter().map(|g| g.name.clone()).collect(),
            relators: self.relators.iter().map(|r| self.format_word(r)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub kind: PresentationKind,
    pub p: u32,
    pub q: u32,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

/// The Coxeter group `[p,q]`: all isometries of `(p^q)`.
pub fn coxeter_presentation(s: Schlafli) -> Presentation {
    let gens = (0..3)
        .map(|i| Generator {
            name: format!("r{i}"),
            involutory: true,
            order: Some(2),
        })
        .collect();
    let mut pres = Presentation::new(s, PresentationKind::Coxeter, gens);
    let r = |i: usize| Letter::new(i);
    let pair = |a: usize, b: usize, n: u32| Word(vec![r(a), r(b)]).pow(n as usize);
    pres.relators = vec![
        Word(vec![r(0), r(0)]),
        Word(vec![r(1), r(1)]),
        Word(vec![r(2), r(2)]),
        pair(0, 1, s.p),
        pair(1, 2, s.q),
        pair(0, 2, 2),
    ];
    pres
}

/// The von Dyck group `D(p,q,2)`: orientation-preserving isometries of `(p^q)`.
pub fn vondyck_presentation(s: Schlafli) -> Presentation {
    let gens = vec![
        Generator {
            name: "x".into(),
            involutory: false,
            order: Some(s.p),
        },
        Generator {
            name: "y".into(),
            involutory: false,
            order: Some(s.q),
        },
    ];
    let mut pres = Presentation::new(s, PresentationKind::VonDyck, gens);
    let x = Letter::new(0);
    let y = Letter::new(1);
    pres.relators = vec![
        Word(vec![x]).pow(s.p as usize),
        Word(vec![y]).pow(s.q as usize),
        Word(vec![x, y]).pow(2),
    ];
    pres
}
