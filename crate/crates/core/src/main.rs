use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use lamkit::fdl::{build_pullback_tree, canonical_form, enumerate_children, validate_chord_set, validate_fdl, Fdl};
use lamkit::io::{
    gengraph_to_dot, oeis_compare, render_chord_levels, render_lamination, tree_to_dot, write_atomic, BFile, Geodesic,
    IoError, LaminationDocument, SvgOptions,
};
use lamkit::paramgraph::generational_graph;
use lamkit::portraits::{count_all, count_injective, enumerate_all_portraits, enumerate_injective_portraits};
use lamkit::pullback::{
    lamination_distance, place_critical_chords, properness_report, pullback_lamination, CriticalChordSet,
};
use lamkit::{Angle, Chord, ClassLamination};

#[derive(Parser)]
#[command(name = "lamkit", version, about = "Exact combinatorics of finite laminations under angle d-tupling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the FDL axioms on a lamination document.
    Validate { file: PathBuf },
    /// Count or list sibling portrait shapes on i·n labelled points.
    Portraits {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with_all = ["list", "all"])]
        count: bool,
        /// List the injective shapes.
        #[arg(long, conflicts_with = "all")]
        list: bool,
        /// List every shape, injective or not.
        #[arg(long)]
        all: bool,
    },
    /// Print the children of an FDL in its pullback tree.
    Children { file: PathBuf },
    /// Build the pullback tree from a root of periodic classes.
    Tree {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Level counts as `depth count` lines.
        #[arg(long)]
        counts: Option<PathBuf>,
    },
    /// Generational graph of one tree level.
    Gengraph {
        file: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Critical chord placements completing an FDL, canonical first.
    Complete { file: PathBuf },
    /// Pull back a lamination along critical chords.
    Pullback {
        file: PathBuf,
        /// Chords as `a:b[,c:d...]`; defaults to the canonical placement.
        #[arg(long)]
        chords: Option<String>,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// The last level as a lamination document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance between two laminations.
    Distance { a: PathBuf, b: PathBuf },
    /// Critical leaves, critical wedges and unclean points.
    Proper { file: PathBuf },
    /// Draw a lamination as SVG.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "straight")]
        geodesics: GeodesicArg,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Compare level counts against an OEIS b-file.
    OeisCompare {
        #[arg(long)]
        counts: PathBuf,
        #[arg(long)]
        bfile: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GeodesicArg {
    Straight,
    Arc,
}

enum Failure {
    /// Bad input that parsed as arguments: exit code 2.
    Usage(String),
    /// The input was read but is not valid: exit code 1.
    Invalid(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::File { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => Ok(write_atomic(p, text.as_bytes())?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn lamination(path: &Path) -> Result<ClassLamination, Failure> {
    Ok(LaminationDocument::load(path)?.to_lamination()?)
}

fn fdl(path: &Path) -> Result<Fdl, Failure> {
    Fdl::new(lamination(path)?).map_err(|report| Failure::Invalid(format!("not an FDL:\n{report}")))
}

fn parse_chords(text: &str, l: &ClassLamination) -> Result<CriticalChordSet, Failure> {
    let d = l.degree();
    let mut chords = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (x, y) =
            part.split_once(':').ok_or_else(|| Failure::Usage(format!("chord `{part}` is not of the form a:b")))?;
        let x = Angle::parse(x, d).map_err(|e| Failure::Usage(e.to_string()))?;
        let y = Angle::parse(y, d).map_err(|e| Failure::Usage(e.to_string()))?;
        chords.push(Chord::new(x, y).map_err(invalid)?);
    }
    CriticalChordSet::new(d, chords).map_err(invalid)
}

fn chord_list(c: &CriticalChordSet) -> String {
    c.chords().iter().map(|c| format!("{}:{}", c.a(), c.b())).collect::<Vec<_>>().join(",")
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { file } => {
            let doc = LaminationDocument::load(&file)?;
            let report = if doc.chords.is_empty() {
                validate_fdl(&doc.to_lamination()?)
            } else {
                validate_chord_set(&doc.to_chord_set()?)
            };
            println!("{report}");
            if !report.is_valid() {
                return Err(Failure::Invalid("not an FDL".into()));
            }
        }
        Command::Portraits { i, n, count: _, list, all } => {
            if i == 0 || n < 2 {
                return Err(Failure::Usage("need i >= 1 and n >= 2".into()));
            }
            if list || all {
                let shapes = if all { enumerate_all_portraits(i, n) } else { enumerate_injective_portraits(i, n) };
                for s in shapes {
                    println!("{s}");
                }
            } else {
                println!("injective {}", count_injective(i, n));
                println!("all {}", count_all(i, n));
            }
        }
        Command::Children { file } => {
            for child in enumerate_children(&fdl(&file)?) {
                println!("{}", canonical_form(child.lamination()));
            }
        }
        Command::Tree { file, depth, dot, counts } => {
            let l = lamination(&file)?;
            let tree = build_pullback_tree(l.degree(), l.classes().to_vec(), depth).map_err(invalid)?;
            let text = BFile::from_counts(&tree.counts()).to_text();
            match counts {
                Some(p) => write_atomic(&p, text.as_bytes())?,
                None => print!("{text}"),
            }
            if let Some(p) = dot {
                write_atomic(&p, tree_to_dot(&tree).as_bytes())?;
            }
        }
        Command::Gengraph { file, level, dot } => {
            let l = lamination(&file)?;
            let tree = build_pullback_tree(l.degree(), l.classes().to_vec(), level).map_err(invalid)?;
            if tree.depth() < level {
                return Err(Failure::Invalid(format!("tree stops at level {}", tree.depth())));
            }
            let g = generational_graph(&tree, level);
            for (v, key) in g.vertices.iter().enumerate() {
                println!("{v} trapped={} {key}", g.trapped[v]);
            }
            for (a, b) in &g.edges {
                println!("{a} -> {b}");
            }
            println!("acyclic {}", g.is_acyclic());
            println!("closure equals refinement {}", g.closure_is_refinement());
            if let Some(p) = dot {
                write_atomic(&p, gengraph_to_dot(&g).as_bytes())?;
            }
        }
        Command::Complete { file } => {
            let placements = place_critical_chords(&fdl(&file)?.lamination().clone()).map_err(invalid)?;
            for c in placements {
                println!("{}", chord_list(&c));
            }
        }
        Command::Pullback { file, chords, depth, svg, out } => {
            let doc = LaminationDocument::load(&file)?;
            let start = doc.to_chord_set()?;
            let critical = match chords {
                Some(text) => parse_chords(&text, &doc.to_lamination()?)?,
                None => place_critical_chords(&doc.to_lamination()?)
                    .map_err(invalid)?
                    .into_iter()
                    .next()
                    .ok_or_else(|| Failure::Invalid("no critical chord placement".into()))?,
            };
            let seq = pullback_lamination(&start, &critical, depth).map_err(invalid)?;
            println!("critical chords {}", chord_list(&critical));
            for (k, n) in seq.counts().iter().enumerate() {
                println!("level {k}: {n} chords");
            }
            if let Some(p) = svg {
                let options = SvgOptions { color_generations: true, ..SvgOptions::default() };
                write_atomic(&p, render_chord_levels(&seq.levels, &options).as_bytes())?;
            }
            if let Some(p) = out {
                let mut doc = LaminationDocument::from_chord_set(seq.last());
                doc.level = Some(depth);
                write_atomic(&p, doc.to_json().as_bytes())?;
            }
        }
        Command::Distance { a, b } => {
            let a = LaminationDocument::load(&a)?.to_chord_set()?;
            let b = LaminationDocument::load(&b)?.to_chord_set()?;
            let dist = lamination_distance(&a, &b).map_err(invalid)?;
            println!("{dist} ({:.6})", dist.to_f64().unwrap_or(f64::NAN));
        }
        Command::Proper { file } => {
            let report = properness_report(&LaminationDocument::load(&file)?.to_chord_set()?);
            println!("{report}");
            if !report.is_proper() {
                return Err(Failure::Invalid("not proper".into()));
            }
        }
        Command::Render { file, geodesics, svg } => {
            let geodesics = match geodesics {
                GeodesicArg::Straight => Geodesic::Straight,
                GeodesicArg::Arc => Geodesic::Arc,
            };
            let options = SvgOptions { geodesics, ..SvgOptions::default() };
            let doc = LaminationDocument::load(&file)?;
            let text = if doc.chords.is_empty() {
                render_lamination(&doc.to_lamination()?, &options)
            } else {
                render_chord_levels(&[doc.to_chord_set()?], &options)
            };
            emit(&svg, &text)?;
        }
        Command::OeisCompare { counts, bfile } => {
            let counts = BFile::load(&counts)?;
            let b = BFile::load(&bfile)?;
            let values: Vec<BigUint> = counts.entries.into_iter().map(|(_, v)| v).collect();
            println!("{}", oeis_compare(&values, &b));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(message)) => {
            eprintln!("lamkit: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("lamkit: {message}");
            ExitCode::from(2)
        }
    }
}
