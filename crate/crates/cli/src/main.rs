//! `tessella`: perfect colourings of regular tilings from the command line.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tessella_core::census::run_census;
use tessella_core::coincidence::{coincidence_figure, rotate_and_match, CentreKind, DEFAULT_TOL};
use tessella_core::colouring::{
    centre_cycle_structure, colour_patch, quotient_colourings, reflection_involution, reflection_orbits, Centre,
};
use tessella_core::coset_table::{tile_action, todd_coxeter, DEFAULT_MAX_COSETS};
use tessella_core::low_index::{colourings, Convention, RecordJson, SubgroupRecord};
use tessella_core::presentation::{classify_geometry, Geometry, Mode, Schlafli};
use tessella_core::render::{render, Emphasis, RenderOptions};
use tessella_core::tiling::{build_patch, MAX_DEPTH};
use tessella_core::{Error, SCHEMA};

#[derive(Parser)]
#[command(name = "tessella", version, about = "Perfect colourings of regular tilings (p^q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show the presentation and classification of a tiling's group.
    Group(GroupArgs),
    /// Count perfect colourings.
    Count(SearchArgs),
    /// List perfect colourings as coset-table records.
    Enumerate(EnumerateArgs),
    /// Quotients, mirror images and rotation cycle types of records.
    Analyse(AnalyseArgs),
    /// Draw a patch, optionally coloured, as SVG.
    Render(RenderArgs),
    /// Coincidence sites of a rotation.
    Csl(CslArgs),
    /// Ten-colour census against the reference counts.
    Table1(Table1Args),
}

#[derive(Args)]
struct Tiling {
    #[arg(short, long)]
    p: u32,
    #[arg(short, long)]
    q: u32,
}

impl Tiling {
    fn schlafli(&self) -> Result<Schlafli, Fail> {
        Schlafli::new(self.p, self.q).map_err(|e| Fail::Usage(e.to_string()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Direct,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Direct => Mode::Direct,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Fixed,
    Conjugacy,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Fixed => Convention::FixedStabilizer,
            ConventionArg::Conjugacy => Convention::ConjugacyClass,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CentreArg {
    Face,
    Vertex,
    Edge,
}

impl From<CentreArg> for CentreKind {
    fn from(c: CentreArg) -> Self {
        match c {
            CentreArg::Face => CentreKind::Face,
            CentreArg::Vertex => CentreKind::Vertex,
            CentreArg::Edge => CentreKind::Edge,
        }
    }
}

#[derive(Args)]
struct GroupArgs {
    #[command(flatten)]
    tiling: Tiling,
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    tiling: Tiling,
    #[arg(short, long, default_value_t = 10)]
    k: usize,
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "fixed")]
    convention: ConventionArg,
}

impl SearchArgs {
    fn records(&self) -> Result<Vec<SubgroupRecord>, Fail> {
        let s = self.tiling.schlafli()?;
        if self.k == 0 {
            return Err(Fail::Usage("k must be at least 1".into()));
        }
        Ok(colourings(s, self.k, self.mode.into(), self.convention.into())?)
    }
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    search: SearchArgs,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyseArgs {
    /// Records file written by `enumerate`.
    records: PathBuf,
    #[arg(long)]
    quotients: bool,
    #[arg(long)]
    enantiomorphs: bool,
    #[arg(long, value_enum)]
    cycles: Option<CycleArg>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CycleArg {
    Face,
    Vertex,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    tiling: Tiling,
    #[arg(short, long, default_value_t = 10)]
    k: usize,
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "fixed")]
    convention: ConventionArg,
    /// Record id to colour with; the patch is drawn uncoloured without it.
    #[arg(long)]
    record: Option<usize>,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Two colours drawn black and gray, e.g. `1,2`.
    #[arg(long, value_delimiter = ',')]
    emphasis: Vec<usize>,
    /// Colours drawn black.
    #[arg(long, value_delimiter = ',')]
    black: Vec<usize>,
    /// Colours drawn gray.
    #[arg(long, value_delimiter = ',')]
    gray: Vec<usize>,
    #[arg(long)]
    dual: bool,
    /// Point of the base tile moved to the figure centre.
    #[arg(long, value_enum, default_value = "face")]
    centre: CentreArg,
    /// Highlight tiles at coincidence sites of this rotation (degrees).
    #[arg(long)]
    csl_angle: Option<f64>,
    #[arg(long, value_enum, default_value = "face")]
    csl_centre: CentreArg,
    #[arg(long, default_value_t = 600.0)]
    size: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CslArgs {
    #[command(flatten)]
    tiling: Tiling,
    #[arg(long, value_enum, default_value = "face")]
    centre: CentreArg,
    /// Rotation angle in degrees.
    #[arg(long)]
    angle: f64,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, value_enum, default_value = "fixed")]
    convention: ConventionArg,
    #[arg(long)]
    json: bool,
}

enum Fail {
    Usage(String),
    Compute(Error),
    Io(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Compute(e)
    }
}

/// Successful runs: 0, or 3 when the census disagrees with the reference.
type Outcome = Result<u8, Fail>;

fn emit(text: &str, out: Option<&Path>) -> Result<(), Fail> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Fail::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Fail> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Fail::Compute(e.into()))?;
    text.push('\n');
    emit(&text, out)
}

fn check_depth(depth: usize) -> Result<(), Fail> {
    if depth > MAX_DEPTH {
        return Err(Fail::Usage(format!("depth must be at most {MAX_DEPTH}")));
    }
    Ok(())
}

fn group(a: &GroupArgs) -> Outcome {
    let s = a.tiling.schlafli()?;
    let mode: Mode = a.mode.into();
    let pres = mode.presentation(s);
    let class = classify_geometry(s);
    let (order, tiles) = if class.geometry == Geometry::Spherical {
        let order = todd_coxeter(&pres, &[], DEFAULT_MAX_COSETS)?.index();
        (json!(order), json!(tile_action(s, mode, DEFAULT_MAX_COSETS)?.index()))
    } else {
        (json!("infinite"), json!("infinite"))
    };
    let report = json!({
        "schema": SCHEMA,
        "p": s.p(),
        "q": s.q(),
        "mode": mode,
        "geometry": format!("{:?}", class.geometry).to_lowercase(),
        "d": class.d.to_string(),
        "presentation": pres.to_json(),
        "columns": pres.column_names(),
        "tile_stabilizer": pres.tile_stabilizer_words(mode)?.iter().map(|w| pres.format_word(w)).collect::<Vec<_>>(),
        "order": order,
        "tiles": tiles,
    });
    emit_json(&report, a.out.as_deref())?;
    Ok(0)
}

fn count(a: &SearchArgs) -> Outcome {
    println!("{}", a.records()?.len());
    Ok(0)
}

fn enumerate(a: &EnumerateArgs) -> Outcome {
    let records: Vec<RecordJson> = a.search.records()?.iter().map(SubgroupRecord::to_json).collect();
    emit_json(&json!({ "schema": SCHEMA, "records": records }), a.out.as_deref())?;
    Ok(0)
}

fn read_records(path: &Path) -> Result<Vec<SubgroupRecord>, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    let list = doc.get("records").cloned().unwrap_or(doc);
    let raw: Vec<RecordJson> =
        serde_json::from_value(list).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    let records = raw
        .iter()
        .map(SubgroupRecord::from_json)
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(first) = records.first() {
        if records
            .iter()
            .any(|r| r.schlafli() != first.schlafli() || r.mode != first.mode)
        {
            return Err(Fail::Usage("records must share one tiling and mode".into()));
        }
    }
    Ok(records)
}

fn analyse(a: &AnalyseArgs) -> Outcome {
    let records = read_records(&a.records)?;
    let mirror = match (a.enantiomorphs, records.first().map(|r| r.mode)) {
        (true, Some(Mode::Direct)) => Some(reflection_involution(&records)?),
        (true, Some(Mode::Full)) => return Err(Fail::Usage("enantiomorphs need direct-mode records".into())),
        _ => None,
    };
    let mut rows = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let mut row = json!({ "id": rec.id, "k": rec.k() });
        if a.quotients {
            let qs: Vec<Value> = quotient_colourings(rec)?
                .iter()
                .map(|q| json!({ "k": q.k(), "table": q.table().to_json().table }))
                .collect();
            row["quotients"] = json!(qs);
        }
        if let Some(m) = &mirror {
            row["reflection_conjugate"] = json!(records[m[i]].id);
        }
        if let Some(c) = a.cycles {
            let centre = match c {
                CycleArg::Face => Centre::Face,
                CycleArg::Vertex => Centre::Vertex,
            };
            row["cycle_type"] = json!(centre_cycle_structure(rec, centre)?);
        }
        rows.push(row);
    }
    let mut report = json!({ "schema": SCHEMA, "records": rows });
    if let Some(first) = records.first() {
        report["p"] = json!(first.schlafli().p());
        report["q"] = json!(first.schlafli().q());
        report["mode"] = json!(first.mode);
    }
    if mirror.is_some() {
        let orbits: Vec<Vec<usize>> = reflection_orbits(&records)?
            .into_iter()
            .map(|o| o.into_iter().map(|i| records[i].id).collect())
            .collect();
        report["reflection_fixed"] = json!(orbits.iter().filter(|o| o.len() == 1).count());
        report["reflection_orbits"] = json!(orbits);
    }
    emit_json(&report, a.out.as_deref())?;
    Ok(0)
}

fn render_cmd(a: &RenderArgs) -> Outcome {
    let s = a.tiling.schlafli()?;
    check_depth(a.depth)?;
    if !a.emphasis.is_empty() && a.emphasis.len() != 2 {
        return Err(Fail::Usage("--emphasis takes exactly two colours".into()));
    }
    if a.size <= 0.0 {
        return Err(Fail::Usage("--size must be positive".into()));
    }
    let patch = build_patch(s, a.depth)?;
    let colouring = match a.record {
        Some(id) => {
            let records = colourings(s, a.k, a.mode.into(), a.convention.into())?;
            let rec = records
                .iter()
                .find(|r| r.id == id)
                .ok_or_else(|| Fail::Usage(format!("no record {id}; there are {}", records.len())))?;
            Some(colour_patch(rec, &patch)?)
        }
        None => None,
    };
    let mut emphasis = Emphasis::default();
    if let [b, g] = a.emphasis[..] {
        emphasis = Emphasis::pair(b, g);
    }
    emphasis.black.extend(&a.black);
    emphasis.gray.extend(&a.gray);
    let mut opts = RenderOptions {
        size: a.size,
        show_dual: a.dual,
        emphasis: (emphasis != Emphasis::default()).then_some(emphasis),
        ..Default::default()
    };
    let centre = CentreKind::from(a.centre).point(&patch);
    if a.centre != CentreArg::Face {
        opts.centre = Some(centre);
    }
    if let Some(deg) = a.csl_angle {
        let c = CentreKind::from(a.csl_centre).point(&patch);
        let report = rotate_and_match(&patch, &c, deg.to_radians(), DEFAULT_TOL)?;
        opts.highlight = Some(coincidence_figure(&patch, &report));
        opts.marks = report.matched.iter().map(|&(v, _)| patch.vertex_set()[v]).collect();
    }
    let svg = render(&patch, colouring.as_ref(), &opts)?;
    emit(&svg, a.out.as_deref())?;
    Ok(0)
}

fn csl(a: &CslArgs) -> Outcome {
    let s = a.tiling.schlafli()?;
    check_depth(a.depth)?;
    if !(a.tol > 0.0) {
        return Err(Fail::Usage("--tol must be positive".into()));
    }
    let patch = build_patch(s, a.depth)?;
    let kind: CentreKind = a.centre.into();
    let report = rotate_and_match(&patch, &kind.point(&patch), a.angle.to_radians(), a.tol)?;
    let highlight: BTreeSet<usize> = coincidence_figure(&patch, &report);
    let matched_points: Vec<[f64; 2]> = report
        .matched
        .iter()
        .map(|&(v, _)| [patch.vertex_set()[v].u(), patch.vertex_set()[v].v()])
        .collect();
    let out = json!({
        "schema": SCHEMA,
        "p": s.p(),
        "q": s.q(),
        "depth": a.depth,
        "centre_kind": kind,
        "angle_degrees": a.angle,
        "report": report,
        "matched_points": matched_points,
        "highlight_tiles": highlight,
    });
    emit_json(&out, a.out.as_deref())?;
    Ok(0)
}

fn table1(a: &Table1Args) -> Outcome {
    let report = run_census(a.convention.into())?;
    if a.json {
        let mut v = serde_json::to_value(&report).map_err(|e| Fail::Compute(e.into()))?;
        v["matched"] = json!(report.matched());
        v["mismatches"] = json!(report.mismatches());
        v["blank_mismatches"] = json!(report.blank_mismatches());
        emit_json(&v, None)?;
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.matched() { 0 } else { 3 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Group(a) => group(a),
        Command::Count(a) => count(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Analyse(a) => analyse(a),
        Command::Render(a) => render_cmd(a),
        Command::Csl(a) => csl(a),
        Command::Table1(a) => table1(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Fail::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
