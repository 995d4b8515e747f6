//! Chords, polygon classes and finite laminations, together with the gap
//! structure they cut out of the disk.
//!
//! A finite lamination comes in two shapes here:
//!
//! * [`ClassLamination`]: pairwise vertex-disjoint polygon classes, the form
//!   used for finite dynamical laminations;
//! * [`ChordSet`]: a raw non-crossing chord collection in which chords may
//!   share endpoints (wedges, unclean points), the form produced by pulling
//!   back along critical chords.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::circle::{strictly_between, Angle, Degree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaminationError {
    #[error("degenerate chord at {0}")]
    DegenerateChord(Angle),
    #[error("a polygon class needs at least two distinct vertices")]
    TooFewVertices,
    #[error("duplicate vertex {0} in polygon class")]
    DuplicateVertex(Angle),
    #[error("classes {first} and {second} share vertex {vertex}")]
    SharedVertex { first: usize, second: usize, vertex: Angle },
    #[error("chord {first} crosses chord {second}")]
    Crossing { first: Box<Chord>, second: Box<Chord> },
    #[error("chord {chord} is not an edge of the convex hull of its class")]
    NotHullEdge { chord: Box<Chord> },
    #[error("hull edge {chord} of a reconstructed class is missing from the chord set")]
    MissingHullEdge { chord: Box<Chord> },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(Degree, Degree),
}

/// A non-degenerate chord, endpoints stored in increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    a: Angle,
    b: Angle,
}

impl Chord {
    pub fn new(x: Angle, y: Angle) -> Result<Chord, LaminationError> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(Chord { a: x, b: y }),
            std::cmp::Ordering::Greater => Ok(Chord { a: y, b: x }),
            std::cmp::Ordering::Equal => Err(LaminationError::DegenerateChord(x)),
        }
    }

    pub fn a(&self) -> &Angle {
        &self.a
    }

    pub fn b(&self) -> &Angle {
        &self.b
    }

    pub fn endpoints(&self) -> [&Angle; 2] {
        [&self.a, &self.b]
    }

    pub fn has_endpoint(&self, p: &Angle) -> bool {
        self.a == *p || self.b == *p
    }

    pub fn shares_endpoint(&self, other: &Chord) -> bool {
        self.has_endpoint(&other.a) || self.has_endpoint(&other.b)
    }

    /// The other endpoint, if `p` is one of them.
    pub fn other_endpoint(&self, p: &Angle) -> Option<&Angle> {
        if self.a == *p {
            Some(&self.b)
        } else if self.b == *p {
            Some(&self.a)
        } else {
            None
        }
    }

    /// Interleaved endpoints; sharing an endpoint is not crossing.
    pub fn crosses(&self, other: &Chord) -> bool {
        if self.shares_endpoint(other) {
            return false;
        }
        let inside = |p: &Angle| self.a < *p && *p < self.b;
        inside(&other.a) != inside(&other.b)
    }

    pub fn is_critical(&self, d: Degree) -> bool {
        self.a.sigma(d) == self.b.sigma(d)
    }

    /// `σ_d` of the chord, or `None` when it collapses to a point.
    pub fn image(&self, d: Degree) -> Option<Chord> {
        Chord::new(self.a.sigma(d), self.b.sigma(d)).ok()
    }

    /// Length of the shorter arc between the endpoints.
    pub fn length(&self) -> BigRational {
        self.a.circle_distance(&self.b)
    }

    /// Leaf distance: the cheaper of the two endpoint matchings.
    pub fn distance(&self, other: &Chord) -> BigRational {
        let straight = self.a.circle_distance(&other.a) + self.b.circle_distance(&other.b);
        let swapped = self.a.circle_distance(&other.b) + self.b.circle_distance(&other.a);
        straight.min(swapped)
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl fmt::Debug for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of asking how `σ_d` maps a polygon onto its image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoveringResult {
    /// Positively oriented covering of the image polygon, of the given degree.
    Covering(u32),
    /// Every vertex has the same image; the number is the vertex count.
    CollapsesToPoint(u32),
    /// At least four vertices alternating between the two fibres of a leaf.
    CollapsesToLeaf(u32),
    NotCovering,
}

impl CoveringResult {
    pub fn degree(&self) -> Option<u32> {
        match *self {
            CoveringResult::Covering(k) | CoveringResult::CollapsesToPoint(k) | CoveringResult::CollapsesToLeaf(k) => {
                Some(k)
            }
            CoveringResult::NotCovering => None,
        }
    }
}

/// Convex hull of a finite set of at least two circle points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolygonClass {
    vertices: Vec<Angle>,
}

impl PolygonClass {
    pub fn new(mut vertices: Vec<Angle>) -> Result<Self, LaminationError> {
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(LaminationError::DuplicateVertex(w[0].clone()));
        }
        if vertices.len() < 2 {
            return Err(LaminationError::TooFewVertices);
        }
        Ok(PolygonClass { vertices })
    }

    /// Vertices in counterclockwise order starting from the smallest angle.
    pub fn vertices(&self) -> &[Angle] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> &Angle {
        &self.vertices[0]
    }

    pub fn contains(&self, p: &Angle) -> bool {
        self.vertices.binary_search(p).is_ok()
    }

    pub fn is_subset_of(&self, other: &PolygonClass) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }

    /// Hull boundary: chords between circularly adjacent vertices.
    pub fn edges(&self) -> Vec<Chord> {
        let n = self.vertices.len();
        if n == 2 {
            return vec![Chord { a: self.vertices[0].clone(), b: self.vertices[1].clone() }];
        }
        (0..n)
            .map(|i| {
                Chord::new(self.vertices[i].clone(), self.vertices[(i + 1) % n].clone()).expect("distinct vertices")
            })
            .collect()
    }

    /// Sorted distinct images of the vertices.
    pub fn image_vertices(&self, d: Degree) -> Vec<Angle> {
        let mut img: Vec<Angle> = self.vertices.iter().map(|v| v.sigma(d)).collect();
        img.sort();
        img.dedup();
        img
    }

    /// How `σ_d` restricted to the hull boundary maps onto the image.
    pub fn covering_degree(&self, d: Degree) -> CoveringResult {
        let images: Vec<Angle> = self.vertices.iter().map(|v| v.sigma(d)).collect();
        let mut cycle = images.clone();
        cycle.sort();
        cycle.dedup();
        let n = images.len();
        let m = cycle.len();
        if m == 1 {
            return CoveringResult::CollapsesToPoint(n as u32);
        }
        if !n.is_multiple_of(m) {
            return CoveringResult::NotCovering;
        }
        let start = cycle.binary_search(&images[0]).expect("image present");
        let follows_cycle = images.iter().enumerate().all(|(j, img)| *img == cycle[(start + j) % m]);
        if !follows_cycle {
            return CoveringResult::NotCovering;
        }
        let k = (n / m) as u32;
        if m == 2 && k > 1 {
            CoveringResult::CollapsesToLeaf(k)
        } else {
            CoveringResult::Covering(k)
        }
    }
}

impl fmt::Display for PolygonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for PolygonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finds a crossing pair among vertex-disjoint classes, or `None`.
///
/// The merged vertex sequence of non-crossing classes is a non-crossing
/// partition, which one stack pass recognises.
fn first_class_crossing(classes: &[PolygonClass]) -> Option<(usize, usize)> {
    let mut tagged: Vec<(&Angle, usize)> =
        classes.iter().enumerate().flat_map(|(i, c)| c.vertices.iter().map(move |v| (v, i))).collect();
    tagged.sort();
    let mut remaining: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let mut opened = vec![false; classes.len()];
    let mut stack: Vec<usize> = Vec::new();
    let mut clash = false;
    for &(_, ci) in &tagged {
        if opened[ci] {
            if stack.last() != Some(&ci) {
                clash = true;
                break;
            }
        } else {
            opened[ci] = true;
            stack.push(ci);
        }
        remaining[ci] -= 1;
        if remaining[ci] == 0 {
            stack.pop();
        }
    }
    if !clash {
        return None;
    }
    // Slow path for a witness.
    for (i, ci) in classes.iter().enumerate() {
        let ei = ci.edges();
        for (j, cj) in classes.iter().enumerate().skip(i + 1) {
            let ej = cj.edges();
            if ei.iter().any(|x| ej.iter().any(|y| x.crosses(y))) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Finds a crossing pair in a chord collection that may share endpoints.
fn first_chord_crossing<'a>(chords: impl IntoIterator<Item = &'a Chord>) -> Option<(Chord, Chord)> {
    let chords: Vec<&Chord> = chords.into_iter().collect();
    // Event order at a common angle: closings innermost first, then openings outermost first.
    let mut events: Vec<(&Angle, u8, &Angle, usize)> = Vec::with_capacity(2 * chords.len());
    for (i, c) in chords.iter().enumerate() {
        events.push((&c.a, 1, &c.b, i));
        events.push((&c.b, 0, &c.a, i));
    }
    events.sort_by(|x, y| x.0.cmp(y.0).then(x.1.cmp(&y.1)).then_with(|| y.2.cmp(x.2)));
    let mut stack: Vec<usize> = Vec::new();
    let mut clash = false;
    for &(_, kind, _, i) in &events {
        if kind == 1 {
            stack.push(i);
        } else if stack.pop() != Some(i) {
            clash = true;
            break;
        }
    }
    if !clash {
        return None;
    }
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if chords[i].crosses(chords[j]) {
                return Some((chords[i].clone(), chords[j].clone()));
            }
        }
    }
    None
}

/// A finite lamination given by pairwise disjoint, non-crossing polygon classes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClassLamination {
    degree: Degree,
    classes: Vec<PolygonClass>,
}

impl ClassLamination {
    pub fn empty(degree: Degree) -> Self {
        ClassLamination { degree, classes: Vec::new() }
    }

    pub fn new(degree: Degree, mut classes: Vec<PolygonClass>) -> Result<Self, LaminationError> {
        classes.sort();
        let mut owner: HashMap<&Angle, usize> = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            for v in &c.vertices {
                if let Some(&j) = owner.get(v) {
                    return Err(LaminationError::SharedVertex { first: j, second: i, vertex: v.clone() });
                }
                owner.insert(v, i);
            }
        }
        if let Some((i, j)) = first_class_crossing(&classes) {
            let (first, second) = classes[i]
                .edges()
                .into_iter()
                .flat_map(|x| classes[j].edges().into_iter().map(move |y| (x.clone(), y)))
                .find(|(x, y)| x.crosses(y))
                .expect("witness exists");
            return Err(LaminationError::Crossing { first: Box::new(first), second: Box::new(second) });
        }
        Ok(ClassLamination { degree, classes })
    }

    /// Rebuilds classes from a chord collection by joining chords that share
    /// endpoints, and insists that every chord is a hull edge of its class and
    /// every hull edge is present.
    pub fn from_chords(set: &ChordSet) -> Result<Self, LaminationError> {
        let mut parent: BTreeMap<Angle, Angle> = BTreeMap::new();
        fn find(parent: &mut BTreeMap<Angle, Angle>, x: &Angle) -> Angle {
            let p = parent.get(x).cloned().unwrap_or_else(|| x.clone());
            if p == *x {
                return p;
            }
            let root = find(parent, &p);
            parent.insert(x.clone(), root.clone());
            root
        }
        for c in set.chords() {
            for e in c.endpoints() {
                parent.entry(e.clone()).or_insert_with(|| e.clone());
            }
            let ra = find(&mut parent, &c.a);
            let rb = find(&mut parent, &c.b);
            if ra != rb {
                parent.insert(ra, rb);
            }
        }
        let keys: Vec<Angle> = parent.keys().cloned().collect();
        let mut groups: BTreeMap<Angle, Vec<Angle>> = BTreeMap::new();
        for k in keys {
            let r = find(&mut parent, &k);
            groups.entry(r).or_default().push(k);
        }
        let classes: Vec<PolygonClass> = groups.into_values().map(PolygonClass::new).collect::<Result<_, _>>()?;
        let lam = ClassLamination::new(set.degree(), classes)?;
        let hull: BTreeSet<Chord> = lam.edges().into_iter().collect();
        if let Some(c) = set.chords().find(|c| !hull.contains(c)) {
            return Err(LaminationError::NotHullEdge { chord: Box::new(c.clone()) });
        }
        if let Some(c) = hull.iter().find(|c| !set.contains(c)) {
            return Err(LaminationError::MissingHullEdge { chord: Box::new(c.clone()) });
        }
        Ok(lam)
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    /// Classes sorted by first vertex.
    pub fn classes(&self) -> &[PolygonClass] {
        &self.classes
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn edges(&self) -> Vec<Chord> {
        self.classes.iter().flat_map(|c| c.edges()).collect()
    }

    pub fn to_chord_set(&self) -> ChordSet {
        ChordSet { degree: self.degree, chords: self.edges().into_iter().collect() }
    }

    pub fn class_of(&self, p: &Angle) -> Option<&PolygonClass> {
        self.classes.iter().find(|c| c.contains(p))
    }

    pub fn contains_class(&self, c: &PolygonClass) -> bool {
        self.classes.binary_search(c).is_ok()
    }

    /// Adds classes, re-checking disjointness and non-crossing.
    pub fn with_classes(&self, extra: impl IntoIterator<Item = PolygonClass>) -> Result<Self, LaminationError> {
        let mut classes = self.classes.clone();
        classes.extend(extra);
        ClassLamination::new(self.degree, classes)
    }

    /// Image vertex sets of the classes that do not collapse to a point.
    pub fn image_classes(&self) -> BTreeSet<Vec<Angle>> {
        self.classes.iter().map(|c| c.image_vertices(self.degree)).filter(|v| v.len() >= 2).collect()
    }

    /// True when `σ_d` maps this lamination exactly onto `other`.
    pub fn maps_onto(&self, other: &ClassLamination) -> bool {
        let mine = self.image_classes();
        let theirs: BTreeSet<Vec<Angle>> = other.classes.iter().map(|c| c.vertices.clone()).collect();
        mine == theirs && self.classes.iter().all(|c| c.image_vertices(self.degree).len() >= 2)
    }

    /// `2|1/7,2/7,4/7;...`: classes by first vertex, vertices as reduced fractions.
    pub fn canonical_key(&self) -> String {
        let classes: Vec<String> = self
            .classes
            .iter()
            .map(|c| c.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!("{}|{}", self.degree, classes.join(";"))
    }

    /// Polygon gaps (one per class, in class order) followed by round gaps.
    pub fn gap_decomposition(&self) -> GapDecomposition {
        let d = self.degree;
        let mut gaps: Vec<Gap> = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let edges = c.edges();
                let boundary = if edges.len() == 1 {
                    vec![BoundaryPiece::Chord { from: c.vertices[0].clone(), to: c.vertices[1].clone() }]
                } else {
                    edges_as_cycle(c)
                };
                let degree = match c.covering_degree(d).degree() {
                    Some(k) => DegreeStatus::Degree(k),
                    None => DegreeStatus::Undefined,
                };
                Gap { kind: GapKind::Polygon { class_index: i }, boundary, degree }
            })
            .collect();
        for boundary in round_gap_boundaries(&self.edges()) {
            let degree = round_gap_degree(&boundary, d);
            gaps.push(Gap { kind: GapKind::Round, boundary, degree });
        }
        GapDecomposition { gaps }
    }

    /// Per-gap degrees and the check `Σ (dᵢ − 1) = d − 1`.
    pub fn criticality_audit(&self) -> CriticalityAudit {
        let decomposition = self.gap_decomposition();
        let mut offenders = Vec::new();
        let mut excess = 0u32;
        for (i, g) in decomposition.gaps.iter().enumerate() {
            match g.degree {
                DegreeStatus::Degree(k) => excess += k - 1,
                _ => offenders.push(i),
            }
        }
        let expected = self.degree.get() - 1;
        CriticalityAudit {
            excess: if offenders.is_empty() { Some(excess) } else { None },
            expected,
            offenders,
            decomposition,
        }
    }
}

impl fmt::Debug for ClassLamination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_key())
    }
}

fn edges_as_cycle(c: &PolygonClass) -> Vec<BoundaryPiece> {
    let n = c.vertices.len();
    (0..n).map(|i| BoundaryPiece::Chord { from: c.vertices[i].clone(), to: c.vertices[(i + 1) % n].clone() }).collect()
}

/// Finite collection of pairwise non-crossing chords; endpoints may be shared.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChordSet {
    degree: Degree,
    chords: BTreeSet<Chord>,
}

impl ChordSet {
    pub fn empty(degree: Degree) -> Self {
        ChordSet { degree, chords: BTreeSet::new() }
    }

    pub fn new(degree: Degree, chords: impl IntoIterator<Item = Chord>) -> Result<Self, LaminationError> {
        let chords: BTreeSet<Chord> = chords.into_iter().collect();
        if let Some((first, second)) = first_chord_crossing(&chords) {
            return Err(LaminationError::Crossing { first: Box::new(first), second: Box::new(second) });
        }
        Ok(ChordSet { degree, chords })
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn chords(&self) -> impl Iterator<Item = &Chord> + '_ {
        self.chords.iter()
    }

    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    pub fn contains(&self, c: &Chord) -> bool {
        self.chords.contains(c)
    }

    pub fn is_superset_of(&self, other: &ChordSet) -> bool {
        self.chords.is_superset(&other.chords)
    }

    pub fn as_set(&self) -> &BTreeSet<Chord> {
        &self.chords
    }

    /// Union with more chords, re-checking non-crossing.
    pub fn union(&self, more: impl IntoIterator<Item = Chord>) -> Result<ChordSet, LaminationError> {
        let mut chords = self.chords.clone();
        chords.extend(more);
        ChordSet::new(self.degree, chords)
    }

    /// Round gaps (regions touching the circle), with degrees.
    pub fn round_gaps(&self) -> Vec<Gap> {
        let chords: Vec<Chord> = self.chords.iter().cloned().collect();
        round_gap_boundaries(&chords)
            .into_iter()
            .map(|boundary| {
                let degree = round_gap_degree(&boundary, self.degree);
                Gap { kind: GapKind::Round, boundary, degree }
            })
            .collect()
    }
}

impl fmt::Debug for ChordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.chords.iter()).finish()
    }
}

/// Counterclockwise arc from `start` to `end`; `start == end` is the whole circle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    pub start: Angle,
    pub end: Angle,
}

impl Arc {
    pub fn is_full(&self) -> bool {
        self.start == self.end
    }

    pub fn length(&self) -> BigRational {
        if self.is_full() {
            BigRational::one()
        } else {
            self.start.ccw_distance_to(&self.end)
        }
    }

    pub fn contains_open(&self, p: &Angle) -> bool {
        strictly_between(&self.start, p, &self.end)
    }

    pub fn contains_closed(&self, p: &Angle) -> bool {
        *p == self.start || *p == self.end || self.contains_open(p)
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// One piece of a gap boundary, in counterclockwise traversal order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BoundaryPiece {
    Arc(Arc),
    Chord { from: Angle, to: Angle },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GapKind {
    Polygon { class_index: usize },
    Round,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DegreeStatus {
    Degree(u32),
    /// Image contains the circle but is not a covering.
    PartlyCritical,
    Undefined,
}

impl DegreeStatus {
    pub fn degree(&self) -> Option<u32> {
        match *self {
            DegreeStatus::Degree(k) => Some(k),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gap {
    pub kind: GapKind,
    pub boundary: Vec<BoundaryPiece>,
    pub degree: DegreeStatus,
}

impl Gap {
    pub fn is_round(&self) -> bool {
        self.kind == GapKind::Round
    }

    /// Circle arcs of the boundary, in counterclockwise order.
    pub fn arcs(&self) -> Vec<&Arc> {
        self.boundary
            .iter()
            .filter_map(|p| match p {
                BoundaryPiece::Arc(a) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Boundary points on the circle: arc endpoints and chord endpoints.
    pub fn boundary_vertices(&self) -> Vec<Angle> {
        let mut out: Vec<Angle> = Vec::new();
        for p in &self.boundary {
            match p {
                BoundaryPiece::Arc(a) => {
                    out.push(a.start.clone());
                    out.push(a.end.clone());
                }
                BoundaryPiece::Chord { from, to } => {
                    out.push(from.clone());
                    out.push(to.clone());
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Is `p` in the (closed) basis of this round gap?
    pub fn basis_contains(&self, p: &Angle) -> bool {
        self.arcs().iter().any(|a| a.contains_closed(p))
    }

    pub fn basis_contains_open(&self, p: &Angle) -> bool {
        self.arcs().iter().any(|a| a.contains_open(p))
    }

    /// Smallest angle in the basis.
    pub fn min_basis_angle(&self) -> Option<Angle> {
        let arcs = self.arcs();
        if arcs.iter().any(|a| a.is_full() || a.start > a.end) {
            return Some(Angle::zero());
        }
        arcs.iter().map(|a| a.start.clone()).min()
    }

    pub fn basis_length(&self) -> BigRational {
        self.arcs().iter().map(|a| a.length()).fold(BigRational::zero(), |x, y| x + y)
    }

    /// Basis containment: every arc of `self` lies inside an arc of `other`.
    pub fn basis_within(&self, other: &Gap) -> bool {
        self.arcs().iter().all(|a| {
            other.arcs().iter().any(|b| {
                b.is_full()
                    || (b.contains_closed(&a.start) && b.start.ccw_distance_to(&a.start) + a.length() <= b.length())
            })
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapDecomposition {
    pub gaps: Vec<Gap>,
}

impl GapDecomposition {
    pub fn polygons(&self) -> impl Iterator<Item = &Gap> {
        self.gaps.iter().filter(|g| !g.is_round())
    }

    pub fn round_gaps(&self) -> impl Iterator<Item = &Gap> {
        self.gaps.iter().filter(|g| g.is_round())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CriticalityAudit {
    /// `Σ (dᵢ − 1)` when every gap has a degree.
    pub excess: Option<u32>,
    pub expected: u32,
    /// Indices into `decomposition.gaps` of gaps without a degree.
    pub offenders: Vec<usize>,
    pub decomposition: GapDecomposition,
}

impl CriticalityAudit {
    pub fn applicable(&self) -> bool {
        self.offenders.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.excess == Some(self.expected)
    }
}

/// Walks every complementary region that touches the circle.
///
/// Arriving at a vertex along the circle, the boundary turns onto the chord
/// whose far end is furthest counterclockwise; arriving along a chord from
/// `p`, it takes the next chord with a smaller counterclockwise reach than
/// `p`, or leaves along the circle when there is none.
pub(crate) fn round_gap_boundaries(chords: &[Chord]) -> Vec<Vec<BoundaryPiece>> {
    let mut vertices: Vec<Angle> = chords.iter().flat_map(|c| [c.a.clone(), c.b.clone()]).collect();
    vertices.sort();
    vertices.dedup();
    if vertices.is_empty() {
        let z = Angle::zero();
        return vec![vec![BoundaryPiece::Arc(Arc { start: z.clone(), end: z })]];
    }
    let index = |p: &Angle| vertices.binary_search(p).expect("chord endpoint is a vertex");
    let n = vertices.len();
    // Neighbours by increasing counterclockwise distance.
    let mut adjacency: Vec<Vec<(BigRational, usize)>> = vec![Vec::new(); n];
    for c in chords {
        let (i, j) = (index(&c.a), index(&c.b));
        adjacency[i].push((vertices[i].ccw_distance_to(&vertices[j]), j));
        adjacency[j].push((vertices[j].ccw_distance_to(&vertices[i]), i));
    }
    for adj in &mut adjacency {
        adj.sort();
    }
    let mut seen = vec![false; n];
    let mut gaps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut boundary = Vec::new();
        let mut arc = start;
        loop {
            seen[arc] = true;
            let next = (arc + 1) % n;
            boundary.push(BoundaryPiece::Arc(Arc { start: vertices[arc].clone(), end: vertices[next].clone() }));
            let mut at = next;
            let mut reach = BigRational::one();
            loop {
                let step = adjacency[at].iter().rev().find(|(dist, _)| *dist < reach);
                match step {
                    Some((_, to)) => {
                        boundary.push(BoundaryPiece::Chord { from: vertices[at].clone(), to: vertices[*to].clone() });
                        reach = vertices[*to].ccw_distance_to(&vertices[at]);
                        at = *to;
                    }
                    None => break,
                }
            }
            arc = at;
            if arc == start {
                break;
            }
        }
        gaps.push(boundary);
    }
    gaps
}

/// Degree of a round gap from exact preimage counts.
///
/// The count of basis preimages is constant between consecutive images of
/// basis endpoints, so one sample per such interval (plus one more) decides it.
pub(crate) fn round_gap_degree(boundary: &[BoundaryPiece], d: Degree) -> DegreeStatus {
    let arcs: Vec<&Arc> = boundary
        .iter()
        .filter_map(|p| match p {
            BoundaryPiece::Arc(a) => Some(a),
            _ => None,
        })
        .collect();
    if arcs.is_empty() {
        return DegreeStatus::Undefined;
    }
    let mut breaks: Vec<Angle> = arcs.iter().flat_map(|a| [a.start.sigma(d), a.end.sigma(d)]).collect();
    breaks.sort();
    breaks.dedup();
    let mut samples: Vec<Angle> = Vec::with_capacity(breaks.len() + 1);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    for (i, b) in breaks.iter().enumerate() {
        let next = &breaks[(i + 1) % breaks.len()];
        let width = if breaks.len() == 1 { BigRational::one() } else { b.ccw_distance_to(next) };
        samples.push(b.offset(&(&width * &half)));
        if i == 0 {
            samples.push(b.offset(&(&width * &third)));
        }
    }
    let counts: Vec<usize> = samples
        .iter()
        .map(|t| {
            t.preimages(d)
                .iter()
                .filter(|p| arcs.iter().any(|a| if a.is_full() { **p != a.start } else { a.contains_open(p) }))
                .count()
        })
        .collect();
    let positive: Vec<usize> = counts.iter().copied().filter(|c| *c > 0).collect();
    if let Some(&k) = positive.first() {
        if positive.iter().all(|c| *c == k) {
            return DegreeStatus::Degree(k as u32);
        }
    }
    if counts.iter().all(|c| *c > 0) {
        DegreeStatus::PartlyCritical
    } else {
        DegreeStatus::Undefined
    }
}
