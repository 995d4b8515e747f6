//! Critical chords, pullback approximations, the lamination metric, and
//! finite-depth properness checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::circle::{Angle, Degree};
use crate::fdl::{canonical_form, enumerate_children, Fdl};
use crate::lamination::{
    round_gap_boundaries, BoundaryPiece, Chord, ChordSet, ClassLamination, DegreeStatus, Gap, GapKind, LaminationError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PullbackError {
    #[error(transparent)]
    Lamination(#[from] LaminationError),
    #[error("expected {expected} critical chords, got {found}")]
    ChordCount { expected: usize, found: usize },
    #[error("chord {0} is not critical")]
    NotCritical(Box<Chord>),
    #[error("critical chords close a loop")]
    Loop,
    #[error("critical chords do not cut the disk into degree-one branches")]
    BadBranches,
    #[error("chord {leaf} of the lamination crosses critical chord {critical}")]
    CrossesCritical { leaf: Box<Chord>, critical: Box<Chord> },
    #[error("a gap has no degree")]
    PartlyCritical,
    #[error("basis of a degree-{degree} region holds {found} siblings of {anchor}")]
    Anchor { anchor: Angle, degree: u32, found: usize },
    #[error("no round gap of degree above one")]
    NoCriticalGap,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(Degree, Degree),
}

/// `d − 1` pairwise non-crossing critical chords without a closed loop.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CriticalChordSet {
    degree: Degree,
    chords: Vec<Chord>,
}

impl CriticalChordSet {
    pub fn new(degree: Degree, mut chords: Vec<Chord>) -> Result<Self, PullbackError> {
        chords.sort();
        chords.dedup();
        let expected = degree.as_usize() - 1;
        if chords.len() != expected {
            return Err(PullbackError::ChordCount { expected, found: chords.len() });
        }
        if let Some(c) = chords.iter().find(|c| !c.is_critical(degree)) {
            return Err(PullbackError::NotCritical(Box::new(c.clone())));
        }
        ChordSet::new(degree, chords.iter().cloned())?;
        // A forest on the endpoints has fewer edges than vertices in each component.
        let mut parent: BTreeMap<&Angle, &Angle> = BTreeMap::new();
        fn find<'a>(parent: &BTreeMap<&'a Angle, &'a Angle>, mut x: &'a Angle) -> &'a Angle {
            while let Some(&p) = parent.get(x) {
                if p == x {
                    break;
                }
                x = p;
            }
            x
        }
        for c in &chords {
            parent.entry(c.a()).or_insert(c.a());
            parent.entry(c.b()).or_insert(c.b());
            let ra = find(&parent, c.a());
            let rb = find(&parent, c.b());
            if ra == rb {
                return Err(PullbackError::Loop);
            }
            parent.insert(ra, rb);
        }
        let set = CriticalChordSet { degree, chords };
        let branches = set.branches();
        if branches.len() != degree.as_usize() || branches.iter().any(|b| b.degree != DegreeStatus::Degree(1)) {
            return Err(PullbackError::BadBranches);
        }
        Ok(set)
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    /// The `d` complementary regions, each mapping injectively.
    pub fn branches(&self) -> Vec<Gap> {
        round_gap_boundaries(&self.chords)
            .into_iter()
            .map(|boundary| {
                let degree = crate::lamination::round_gap_degree(&boundary, self.degree);
                Gap { kind: GapKind::Round, boundary, degree }
            })
            .collect()
    }
}

/// Points of the closed basis that are siblings of `anchor`, counterclockwise from it.
fn chain_from(anchor: &Angle, d: Degree, inside: impl Fn(&Angle) -> bool) -> Vec<Angle> {
    let mut sibs: Vec<Angle> = anchor.sigma(d).preimages(d).into_iter().filter(|p| inside(p)).collect();
    sibs.sort_by_key(|p| anchor.ccw_distance_to(p));
    sibs
}

fn chain_chords(points: &[Angle]) -> Vec<Chord> {
    points.windows(2).map(|w| Chord::new(w[0].clone(), w[1].clone()).expect("distinct siblings")).collect()
}

/// Critical chord placements: the canonical one first (every chain anchored
/// at the smallest basis angle or vertex), then chains anchored at every
/// other basis arc endpoint, without repeats.
pub fn place_critical_chords(l: &ClassLamination) -> Result<Vec<CriticalChordSet>, PullbackError> {
    let d = l.degree();
    let decomposition = l.gap_decomposition();
    let mut per_region: Vec<Vec<Vec<Chord>>> = Vec::new();
    for g in &decomposition.gaps {
        let k = g.degree.degree().ok_or(PullbackError::PartlyCritical)?;
        if k <= 1 {
            continue;
        }
        let mut options: Vec<Vec<Chord>> = Vec::new();
        match g.kind {
            GapKind::Polygon { class_index } => {
                let class = &l.classes()[class_index];
                for anchor in class.vertices() {
                    let chain = chain_from(anchor, d, |p| class.contains(p));
                    if chain.len() != k as usize {
                        return Err(PullbackError::Anchor { anchor: anchor.clone(), degree: k, found: chain.len() });
                    }
                    options.push(chain_chords(&chain));
                }
            }
            GapKind::Round => {
                let mut anchors: Vec<Angle> = vec![g.min_basis_angle().expect("round gap")];
                for a in g.arcs() {
                    anchors.push(a.start.clone());
                    anchors.push(a.end.clone());
                }
                for anchor in anchors {
                    let chain = chain_from(&anchor, d, |p| g.basis_contains(p));
                    if chain.len() != k as usize {
                        return Err(PullbackError::Anchor { anchor, degree: k, found: chain.len() });
                    }
                    options.push(chain_chords(&chain));
                }
            }
        }
        let canonical = options[0].clone();
        let mut rest: Vec<Vec<Chord>> = options.into_iter().skip(1).filter(|o| *o != canonical).collect();
        rest.sort();
        rest.dedup();
        rest.insert(0, canonical);
        per_region.push(rest);
    }
    let mut out: Vec<CriticalChordSet> = Vec::new();
    let mut seen: BTreeSet<Vec<Chord>> = BTreeSet::new();
    // Canonical placement, then one region varied at a time.
    let canonical: Vec<Chord> = per_region.iter().flat_map(|o| o[0].iter().cloned()).collect();
    let mut candidates = vec![canonical];
    for (r, options) in per_region.iter().enumerate() {
        for o in options.iter().skip(1) {
            let chords: Vec<Chord> = per_region
                .iter()
                .enumerate()
                .flat_map(|(s, opts)| if s == r { o.clone() } else { opts[0].clone() })
                .collect();
            candidates.push(chords);
        }
    }
    for chords in candidates {
        let set = CriticalChordSet::new(d, chords)?;
        if seen.insert(set.chords.clone()) {
            out.push(set);
        }
    }
    Ok(out)
}

/// Preimages of `y` inside `branch` for a leaf whose other endpoint maps
/// to `x`, preferred first.
///
/// A critical value has two candidates in the closed basis, the end of one
/// arc and the start of the next. The arc start is preferred when `x` lies at
/// most half a turn counterclockwise from `y`, the arc end otherwise.
fn lift_candidates(y: &Angle, x: &Angle, branch: &Gap, d: Degree) -> Vec<Angle> {
    let arcs = branch.arcs();
    let mut candidates: Vec<Angle> = y.preimages(d).into_iter().filter(|p| branch.basis_contains(p)).collect();
    if candidates.len() > 1 {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let want_start = y.ccw_distance_to(x) <= half;
        let preferred = |p: &Angle| arcs.iter().any(|a| if want_start { a.start == *p } else { a.end == *p });
        candidates.sort_by_key(|p| !preferred(p));
    }
    candidates
}

/// Lifts of one chord, one per branch. Where a lift is ambiguous the
/// preferred candidate is kept unless it crosses `s`.
fn lifts(chord: &Chord, branches: &[Gap], d: Degree, s: &ChordSet) -> Vec<Chord> {
    let (a, b) = (chord.a(), chord.b());
    branches
        .iter()
        .filter_map(|br| {
            let ca = lift_candidates(a, b, br, d);
            let cb = lift_candidates(b, a, br, d);
            let options: Vec<Chord> = ca
                .iter()
                .flat_map(|pa| cb.iter().filter_map(move |pb| Chord::new(pa.clone(), pb.clone()).ok()))
                .collect();
            if options.len() > 1 {
                if let Some(clean) = options.iter().find(|o| s.chords().all(|t| !t.crosses(o))) {
                    return Some(clean.clone());
                }
            }
            options.into_iter().next()
        })
        .collect()
}

/// `S` together with its lifts through every branch cut by `C`.
pub fn pullback_step(s: &ChordSet, c: &CriticalChordSet) -> Result<ChordSet, PullbackError> {
    if s.degree() != c.degree() {
        return Err(PullbackError::DegreeMismatch(s.degree(), c.degree()));
    }
    for leaf in s.chords() {
        if let Some(critical) = c.chords().iter().find(|k| k.crosses(leaf)) {
            return Err(PullbackError::CrossesCritical {
                leaf: Box::new(leaf.clone()),
                critical: Box::new(critical.clone()),
            });
        }
    }
    let branches = c.branches();
    let d = s.degree();
    let added: Vec<Chord> = s.chords().flat_map(|ch| lifts(ch, &branches, d, s)).collect();
    Ok(s.union(added)?)
}

/// Nested chord sets obtained by repeated pullback.
#[derive(Clone, Debug)]
pub struct ApproxSequence {
    pub start: ChordSet,
    pub chords_used: CriticalChordSet,
    /// `levels[0]` is the start.
    pub levels: Vec<ChordSet>,
}

impl ApproxSequence {
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn last(&self) -> &ChordSet {
        self.levels.last().expect("at least the start level")
    }

    /// Level `k` together with the critical chords used for the pullback.
    pub fn with_critical_leaves(&self, k: usize) -> Result<ChordSet, PullbackError> {
        Ok(self.levels[k].union(self.chords_used.chords().iter().cloned())?)
    }
}

pub fn pullback_lamination(
    start: &ChordSet,
    c: &CriticalChordSet,
    depth: usize,
) -> Result<ApproxSequence, PullbackError> {
    let mut levels = vec![start.clone()];
    for _ in 0..depth {
        let next = pullback_step(levels.last().expect("non-empty"), c)?;
        levels.push(next);
    }
    Ok(ApproxSequence { start: start.clone(), chords_used: c.clone(), levels })
}

/// Distance from one leaf to a lamination that includes every degenerate leaf.
fn leaf_to_set(l: &Chord, other: &ChordSet) -> BigRational {
    other.chords().map(|m| l.distance(m)).fold(l.length(), |acc, x| acc.min(x))
}

/// Hausdorff distance between the two laminations, degenerate leaves included.
pub fn lamination_distance(a: &ChordSet, b: &ChordSet) -> Result<BigRational, PullbackError> {
    if a.degree() != b.degree() {
        return Err(PullbackError::DegreeMismatch(a.degree(), b.degree()));
    }
    let one_way = |x: &ChordSet, y: &ChordSet| {
        x.chords().map(|l| leaf_to_set(l, y)).fold(BigRational::zero(), |acc, v| acc.max(v))
    };
    Ok(one_way(a, b).max(one_way(b, a)))
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PropernessReport {
    pub critical_leaves_with_periodic_endpoint: Vec<Chord>,
    /// Pairs of leaves with the same image meeting at a periodic vertex.
    pub critical_wedges_with_periodic_vertex: Vec<(Angle, Chord, Chord)>,
    /// Points where three or more leaves meet, with the leaf count.
    pub unclean_points: Vec<(Angle, usize)>,
    /// Leaves with a periodic endpoint whose endpoints do not share a period.
    pub period_mismatches: Vec<Chord>,
}

impl PropernessReport {
    pub fn is_proper(&self) -> bool {
        self.critical_leaves_with_periodic_endpoint.is_empty() && self.critical_wedges_with_periodic_vertex.is_empty()
    }
}

impl fmt::Display for PropernessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.critical_leaves_with_periodic_endpoint {
            writeln!(f, "critical leaf with periodic endpoint: {c}")?;
        }
        for (v, x, y) in &self.critical_wedges_with_periodic_vertex {
            writeln!(f, "critical wedge at periodic vertex {v}: {x} {y}")?;
        }
        for (v, n) in &self.unclean_points {
            writeln!(f, "unclean point {v}: {n} leaves")?;
        }
        for c in &self.period_mismatches {
            writeln!(f, "period mismatch: {c}")?;
        }
        write!(f, "{}", if self.is_proper() { "proper" } else { "not proper" })
    }
}

pub fn properness_report(s: &ChordSet) -> PropernessReport {
    let d = s.degree();
    let mut period: BTreeMap<&Angle, Option<usize>> = BTreeMap::new();
    let mut at: BTreeMap<&Angle, Vec<&Chord>> = BTreeMap::new();
    for c in s.chords() {
        for e in c.endpoints() {
            period.entry(e).or_insert_with(|| {
                let info = e.orbit_info(d);
                if info.preperiod == 0 {
                    Some(info.period)
                } else {
                    None
                }
            });
            at.entry(e).or_default().push(c);
        }
    }
    let mut report = PropernessReport::default();
    for c in s.chords() {
        let pa = period[c.a()];
        let pb = period[c.b()];
        if c.is_critical(d) && (pa.is_some() || pb.is_some()) {
            report.critical_leaves_with_periodic_endpoint.push(c.clone());
        }
        if (pa.is_some() || pb.is_some()) && pa != pb {
            report.period_mismatches.push(c.clone());
        }
    }
    for (v, leaves) in &at {
        if leaves.len() >= 3 {
            report.unclean_points.push(((*v).clone(), leaves.len()));
        }
        if period[v].is_none() {
            continue;
        }
        for i in 0..leaves.len() {
            for j in i + 1..leaves.len() {
                let (x, y) = (leaves[i], leaves[j]);
                if let (Some(ix), Some(iy)) = (x.image(d), y.image(d)) {
                    if ix == iy {
                        report.critical_wedges_with_periodic_vertex.push(((*v).clone(), x.clone(), y.clone()));
                    }
                }
            }
        }
    }
    report
}

/// One level of the nested-gap construction.
#[derive(Clone, Debug)]
pub struct NestedLevel {
    pub fdl: Fdl,
    /// Tracked critical round gaps, one per chain.
    pub gaps: Vec<Gap>,
}

#[derive(Clone, Debug)]
pub struct NestingReport {
    pub levels: Vec<NestedLevel>,
    /// Every tracked gap lies in the basis of its predecessor with equal degree.
    pub nested: bool,
    /// Basis arc count of each chain, level by level.
    pub arc_counts: Vec<Vec<usize>>,
}

impl NestingReport {
    pub fn arcs_never_shrink(&self) -> bool {
        self.arc_counts.iter().all(|c| c.windows(2).all(|w| w[0] <= w[1]))
    }
}

/// Builds FDL of increasing depth in which every critical round gap of the
/// start contains a round gap of the same degree at every later level.
/// Among admissible children the one whose tracked gaps have the smallest
/// minimum basis angles is taken, ties broken by canonical form.
pub fn hyperbolic_approx(l: &Fdl, depth: usize) -> Result<NestingReport, PullbackError> {
    let decomposition = l.lamination().gap_decomposition();
    let round: Vec<&Gap> = decomposition.round_gaps().collect();
    if round.iter().any(|g| g.degree.degree().is_none()) {
        return Err(PullbackError::PartlyCritical);
    }
    let tracked: Vec<Gap> = round.into_iter().filter(|g| g.degree.degree() > Some(1)).cloned().collect();
    if tracked.is_empty() {
        return Err(PullbackError::NoCriticalGap);
    }
    let mut levels = vec![NestedLevel { fdl: l.clone(), gaps: tracked }];
    for _ in 0..depth {
        let current = levels.last().expect("non-empty");
        let mut best: Option<(Vec<Angle>, String, NestedLevel)> = None;
        for child in enumerate_children(&current.fdl) {
            let dec = child.lamination().gap_decomposition();
            let mut next_gaps = Vec::new();
            for g in &current.gaps {
                let inner: Option<&Gap> = dec
                    .round_gaps()
                    .filter(|h| h.degree == g.degree && h.basis_within(g))
                    .min_by_key(|h| h.min_basis_angle());
                match inner {
                    Some(h) => next_gaps.push(h.clone()),
                    None => break,
                }
            }
            if next_gaps.len() != current.gaps.len() {
                continue;
            }
            let score: Vec<Angle> = next_gaps.iter().map(|g| g.min_basis_angle().expect("round")).collect();
            let key = canonical_form(child.lamination());
            let better = match &best {
                None => true,
                Some((s, k, _)) => (&score, &key) < (s, k),
            };
            if better {
                best = Some((score, key, NestedLevel { fdl: child, gaps: next_gaps }));
            }
        }
        match best {
            Some((_, _, level)) => levels.push(level),
            None => break,
        }
    }
    let chains = levels[0].gaps.len();
    let nested = levels.len() == depth + 1
        && levels.windows(2).all(|w| w[0].gaps.iter().zip(&w[1].gaps).all(|(outer, inner)| inner.basis_within(outer)));
    let arc_counts = (0..chains).map(|c| levels.iter().map(|lv| lv.gaps[c].arcs().len()).collect()).collect();
    Ok(NestingReport { levels, nested, arc_counts })
}

/// Chords of the boundary of a gap, for rendering and reports.
pub fn gap_chords(g: &Gap) -> Vec<Chord> {
    g.boundary
        .iter()
        .filter_map(|p| match p {
            BoundaryPiece::Chord { from, to } => Chord::new(from.clone(), to.clone()).ok(),
            BoundaryPiece::Arc(_) => None,
        })
        .collect()
}
