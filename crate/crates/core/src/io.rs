//! File formats: JSON lamination documents, DOT, SVG and OEIS b-files.

use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circle::{Angle, AngleError, Degree};
use crate::fdl::{canonical_form, PullbackTree};
use crate::lamination::{Chord, ChordSet, ClassLamination, LaminationError, PolygonClass};
use crate::paramgraph::GenGraph;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{0}")]
    Degree(AngleError),
    #[error("{location}: {source}")]
    Angle { location: String, source: AngleError },
    #[error("{location}: {source}")]
    Lamination { location: String, source: LaminationError },
    #[error("b-file line {line}: {message}")]
    BFile { line: usize, message: String },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
}

/// On-disk form of a lamination. `chords` holds loose leaves that need not
/// form vertex-disjoint classes, as produced by pullback approximations.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaminationDocument {
    pub degree: u32,
    #[serde(default)]
    pub classes: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chords: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

impl LaminationDocument {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = fs::read_to_string(path).map_err(|source| IoError::File { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn degree(&self) -> Result<Degree, IoError> {
        Degree::new(self.degree).map_err(IoError::Degree)
    }

    fn angle(&self, text: &str, location: String) -> Result<Angle, IoError> {
        Angle::parse(text, self.degree()?).map_err(|source| IoError::Angle { location, source })
    }

    fn polygon_classes(&self) -> Result<Vec<PolygonClass>, IoError> {
        self.classes
            .iter()
            .enumerate()
            .map(|(ci, class)| {
                let vertices = class
                    .iter()
                    .enumerate()
                    .map(|(vi, v)| self.angle(v, format!("classes[{ci}][{vi}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                PolygonClass::new(vertices)
                    .map_err(|source| IoError::Lamination { location: format!("classes[{ci}]"), source })
            })
            .collect()
    }

    fn loose_chords(&self) -> Result<Vec<Chord>, IoError> {
        self.chords
            .iter()
            .enumerate()
            .map(|(i, [x, y])| {
                let x = self.angle(x, format!("chords[{i}][0]"))?;
                let y = self.angle(y, format!("chords[{i}][1]"))?;
                Chord::new(x, y).map_err(|source| IoError::Lamination { location: format!("chords[{i}]"), source })
            })
            .collect()
    }

    /// Class edges together with the loose chords.
    pub fn to_chord_set(&self) -> Result<ChordSet, IoError> {
        let mut chords: Vec<Chord> = self.polygon_classes()?.iter().flat_map(|c| c.edges()).collect();
        chords.extend(self.loose_chords()?);
        ChordSet::new(self.degree()?, chords)
            .map_err(|source| IoError::Lamination { location: "lamination".into(), source })
    }

    pub fn to_lamination(&self) -> Result<ClassLamination, IoError> {
        let degree = self.degree()?;
        if self.chords.is_empty() {
            return ClassLamination::new(degree, self.polygon_classes()?)
                .map_err(|source| IoError::Lamination { location: "classes".into(), source });
        }
        ClassLamination::from_chords(&self.to_chord_set()?)
            .map_err(|source| IoError::Lamination { location: "chords".into(), source })
    }

    pub fn from_lamination(l: &ClassLamination) -> Self {
        LaminationDocument {
            degree: l.degree().get(),
            classes: l.classes().iter().map(|c| c.vertices().iter().map(|v| v.to_string()).collect()).collect(),
            chords: Vec::new(),
            name: None,
            level: None,
        }
    }

    pub fn from_chord_set(s: &ChordSet) -> Self {
        LaminationDocument {
            degree: s.degree().get(),
            classes: Vec::new(),
            chords: s.chords().map(|c| [c.a().to_string(), c.b().to_string()]).collect(),
            name: None,
            level: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("documents always serialize");
        text.push('\n');
        text
    }
}

/// Writes through a temporary sibling file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), IoError> {
    let wrap = |source| IoError::File { path: path.to_path_buf(), source };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(wrap)
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per FDL, keyed canonically, with an edge from each parent.
pub fn tree_to_dot(tree: &PullbackTree) -> String {
    let mut out = String::from("digraph pullback_tree {\n  node [shape=box, fontsize=10];\n");
    for (depth, level) in tree.levels.iter().enumerate() {
        let ids: Vec<String> = level.iter().map(|n| dot_quote(&n.key)).collect();
        let _ = writeln!(out, "  {{ rank=same; {} }}", ids.join("; "));
        for n in level {
            let _ = writeln!(out, "  {} [level={depth}];", dot_quote(&n.key));
        }
    }
    for (depth, level) in tree.levels.iter().enumerate().skip(1) {
        for n in level {
            let parent = &tree.levels[depth - 1][n.parent.expect("non-root nodes have parents")];
            let _ = writeln!(out, "  {} -> {};", dot_quote(&parent.key), dot_quote(&n.key));
        }
    }
    out.push_str("}\n");
    out
}

/// Vertices grouped into ranks by trapped criticality.
pub fn gengraph_to_dot(g: &GenGraph) -> String {
    let mut out = format!("digraph generation_{} {{\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n", g.level);
    let mut ranks: Vec<u32> = g.trapped.clone();
    ranks.sort_unstable();
    ranks.dedup();
    for r in ranks {
        let ids: Vec<String> =
            (0..g.vertices.len()).filter(|&v| g.trapped[v] == r).map(|v| dot_quote(&g.vertices[v])).collect();
        let _ = writeln!(out, "  {{ rank=same; {} }}", ids.join("; "));
    }
    for (v, key) in g.vertices.iter().enumerate() {
        let _ = writeln!(out, "  {} [trapped={}];", dot_quote(key), g.trapped[v]);
    }
    for &(a, b) in &g.edges {
        let _ = writeln!(out, "  {} -> {};", dot_quote(&g.vertices[a]), dot_quote(&g.vertices[b]));
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Geodesic {
    #[default]
    Straight,
    /// Circular arcs meeting the boundary at right angles.
    Arc,
}

#[derive(Clone, Debug)]
pub struct SvgOptions {
    pub geodesics: Geodesic,
    pub size: u32,
    /// Color layer `k` by generation instead of drawing everything black.
    pub color_generations: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { geodesics: Geodesic::Straight, size: 512, color_generations: false }
    }
}

const PALETTE: [&str; 8] = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"];

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

struct Canvas {
    center: f64,
    radius: f64,
}

impl Canvas {
    fn point(&self, a: &Angle) -> (f64, f64) {
        let t = std::f64::consts::TAU * a.to_f64();
        (self.center + self.radius * t.cos(), self.center - self.radius * t.sin())
    }

    /// Path segment from `u` to the next vertex `w`, counterclockwise from `u`.
    fn edge(&self, u: &Angle, w: &Angle, style: Geodesic) -> String {
        let (x, y) = self.point(w);
        let turn = u.ccw_distance_to(w);
        let half = BigRational::new(1.into(), 2.into());
        if style == Geodesic::Straight || turn == half {
            return format!("L {} {}", num(x), num(y));
        }
        let short = if turn < half { turn.clone() } else { BigRational::one() - &turn };
        let r = self.radius * (std::f64::consts::PI * short.to_f64().unwrap_or(0.0)).tan();
        let sweep = if turn < half { 1 } else { 0 };
        format!("A {} {} 0 0 {} {} {}", num(r), num(r), sweep, num(x), num(y))
    }

    fn polygon(&self, vertices: &[Angle], style: Geodesic) -> String {
        let (x0, y0) = self.point(&vertices[0]);
        let mut d = format!("M {} {}", num(x0), num(y0));
        let n = vertices.len();
        let closing = if n > 2 { n } else { 1 };
        for k in 0..closing {
            d.push(' ');
            d.push_str(&self.edge(&vertices[k], &vertices[(k + 1) % n], style));
        }
        if n > 2 {
            d.push_str(" Z");
        }
        d
    }
}

/// Unit circle with one layer of polygons per generation. Two-vertex
/// polygons are drawn as single chords.
pub fn render_svg(layers: &[Vec<Vec<Angle>>], options: &SvgOptions) -> String {
    let size = options.size.max(16) as f64;
    let canvas = Canvas { center: size / 2.0, radius: size / 2.0 - 8.0 };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        options.size.max(16)
    );
    let _ = writeln!(
        out,
        r##"  <circle cx="{0}" cy="{0}" r="{1}" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
        num(canvas.center),
        num(canvas.radius)
    );
    for (generation, polygons) in layers.iter().enumerate() {
        let color = if options.color_generations { PALETTE[generation % PALETTE.len()] } else { PALETTE[0] };
        let _ = writeln!(out, r#"  <g stroke="{color}" stroke-width="1" data-generation="{generation}">"#);
        for vertices in polygons {
            if vertices.len() < 2 {
                continue;
            }
            let mut sorted = vertices.clone();
            sorted.sort();
            let fill = if sorted.len() > 2 { r##"fill="#dddddd""## } else { r#"fill="none""# };
            let _ = writeln!(out, r#"    <path {fill} d="{}"/>"#, canvas.polygon(&sorted, options.geodesics));
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_lamination(l: &ClassLamination, options: &SvgOptions) -> String {
    render_svg(&[l.classes().iter().map(|c| c.vertices().to_vec()).collect()], options)
}

/// Each level contributes the chords it adds to the previous one.
pub fn render_chord_levels(levels: &[ChordSet], options: &SvgOptions) -> String {
    let mut layers = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for level in levels {
        let fresh: Vec<Vec<Angle>> =
            level.chords().filter(|c| seen.insert((*c).clone())).map(|c| vec![c.a().clone(), c.b().clone()]).collect();
        layers.push(fresh);
    }
    render_svg(&layers, options)
}

/// `index value` pairs with strictly increasing indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BFile {
    pub entries: Vec<(i64, BigUint)>,
}

impl BFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let mut entries: Vec<(i64, BigUint)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let bad = |message: String| IoError::BFile { line, message };
            let mut fields = body.split_whitespace();
            let (Some(i), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(bad(format!("expected `index value`, got `{body}`")));
            };
            let i: i64 = i.parse().map_err(|_| bad(format!("bad index `{i}`")))?;
            let v: BigUint = v.parse().map_err(|_| bad(format!("bad value `{v}`")))?;
            if let Some((last, _)) = entries.last() {
                if i <= *last {
                    return Err(bad(format!("index {i} does not increase past {last}")));
                }
            }
            entries.push((i, v));
        }
        Ok(BFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = fs::read_to_string(path).map_err(|source| IoError::File { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    /// Level counts written with depth as the index.
    pub fn from_counts(counts: &[usize]) -> Self {
        BFile { entries: counts.iter().enumerate().map(|(k, &c)| (k as i64, BigUint::from(c))).collect() }
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().map(|(i, v)| format!("{i} {v}\n")).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComparisonRow {
    pub depth: usize,
    pub count: BigUint,
    /// The b-file entry at the same position, if the file is long enough.
    pub expected: Option<(i64, BigUint)>,
}

impl ComparisonRow {
    pub fn matches(&self) -> Option<bool> {
        self.expected.as_ref().map(|(_, v)| *v == self.count)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// Every compared depth agrees, through `depth`.
    Consistent {
        depth: Option<usize>,
    },
    FirstMismatch {
        depth: usize,
        index: i64,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OeisReport {
    pub rows: Vec<ComparisonRow>,
    pub verdict: Verdict,
}

/// Pairs counts with b-file entries by position.
pub fn oeis_compare(counts: &[BigUint], b: &BFile) -> OeisReport {
    let rows: Vec<ComparisonRow> = counts
        .iter()
        .enumerate()
        .map(|(depth, c)| ComparisonRow { depth, count: c.clone(), expected: b.entries.get(depth).cloned() })
        .collect();
    let verdict = match rows.iter().find(|r| r.matches() == Some(false)) {
        Some(r) => Verdict::FirstMismatch { depth: r.depth, index: r.expected.as_ref().expect("compared").0 },
        None => {
            Verdict::Consistent { depth: rows.iter().filter(|r| r.matches().is_some()).map(|r| r.depth).next_back() }
        }
    };
    OeisReport { rows, verdict }
}

impl fmt::Display for OeisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            match &r.expected {
                Some((i, v)) => {
                    let mark = if *v == r.count { "match" } else { "MISMATCH" };
                    writeln!(f, "depth {}: count {} vs b-file[{}] = {}: {}", r.depth, r.count, i, v, mark)?;
                }
                None => writeln!(f, "depth {}: count {} (beyond b-file)", r.depth, r.count)?,
            }
        }
        match &self.verdict {
            Verdict::Consistent { depth: Some(k) } => write!(f, "consistent with the conjecture up to depth {k}"),
            Verdict::Consistent { depth: None } => write!(f, "nothing compared"),
            Verdict::FirstMismatch { depth, index } => {
                write!(f, "first mismatch at depth {depth} (b-file index {index})")
            }
        }
    }
}

/// Canonical text of a document's lamination, for round-trip checks.
pub fn canonical_document(doc: &LaminationDocument) -> Result<String, IoError> {
    Ok(canonical_form(&doc.to_lamination()?))
}
