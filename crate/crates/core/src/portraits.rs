//! Sibling portraits: label-combinatorial shapes, their Fuss–Catalan counts,
//! the tree and reduction bijections, and concrete placement on the circle.
//!
//! A shape over `(i, n)` lives on `i·n` cyclically placed points; point `p`
//! carries label `p mod n`. A block is a set of points whose labels read
//! `0, 1, …, n−1` cyclically (possibly several times) in counterclockwise order.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::binomial;
use thiserror::Error;

use crate::circle::{Angle, Degree};
use crate::lamination::{ClassLamination, CoveringResult, Gap, PolygonClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PortraitError {
    #[error("portrait parameters need i >= 1 and n >= 2, got i = {i}, n = {n}")]
    BadParameters { i: usize, n: usize },
    #[error("block {0:?} is not a one-to-one polygon")]
    NotInjective(Vec<usize>),
    #[error("invalid block {0:?}")]
    BadBlock(Vec<usize>),
    #[error("label {label} out of range for {labels} labels")]
    BadLabel { label: usize, labels: usize },
    #[error("tree has {found} internal nodes of arity {arity}; expected arity {expected}")]
    BadTree { found: usize, arity: usize, expected: usize },
    #[error("region has degree {region}, shape expects {shape}")]
    DegreeMismatch { region: u32, shape: usize },
    #[error("target has {target} vertices, shape expects {shape}")]
    TargetSize { target: usize, shape: usize },
    #[error("region holds {found} preimages of the target, expected {expected}")]
    PreimageCount { found: usize, expected: usize },
    #[error("preimages in the region do not follow the target's vertex order")]
    LabelOrder,
}

/// A non-crossing grouping of `i·n` labelled points into blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PortraitShape {
    i: usize,
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl PortraitShape {
    pub fn new(i: usize, n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PortraitError> {
        check_params(i, n)?;
        let total = i * n;
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        let mut seen = vec![false; total];
        for b in &blocks {
            if b.is_empty() || b.len() % n != 0 || b.iter().any(|&p| p >= total) {
                return Err(PortraitError::BadBlock(b.clone()));
            }
            let m = b.len();
            for j in 0..m {
                if (b[j] + 1) % n != b[(j + 1) % m] % n {
                    return Err(PortraitError::BadBlock(b.clone()));
                }
                if std::mem::replace(&mut seen[b[j]], true) {
                    return Err(PortraitError::BadBlock(b.clone()));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(PortraitError::BadBlock(Vec::new()));
        }
        if blocks_cross(&blocks) {
            return Err(PortraitError::BadBlock(Vec::new()));
        }
        Ok(PortraitShape { i, n, blocks })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Blocks as sorted position lists, in lexicographic order.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn label(&self, p: usize) -> usize {
        p % self.n
    }

    pub fn is_injective(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == self.n)
    }

    /// Covering degree of each block onto the target polygon.
    pub fn block_degrees(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len() / self.n).collect()
    }
}

impl fmt::Display for PortraitShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("[{}]", b.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for PortraitShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) {}", self.i, self.n, self)
    }
}

fn check_params(i: usize, n: usize) -> Result<(), PortraitError> {
    if i < 1 || n < 2 {
        return Err(PortraitError::BadParameters { i, n });
    }
    Ok(())
}

fn blocks_cross(blocks: &[Vec<usize>]) -> bool {
    let total: usize = blocks.iter().map(|b| b.len()).sum();
    let mut owner = vec![usize::MAX; total];
    for (k, b) in blocks.iter().enumerate() {
        for &p in b {
            owner[p] = k;
        }
    }
    let mut remaining: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
    let mut opened = vec![false; blocks.len()];
    let mut stack = Vec::new();
    for &k in &owner {
        if opened[k] {
            if stack.last() != Some(&k) {
                return true;
            }
        } else {
            opened[k] = true;
            stack.push(k);
        }
        remaining[k] -= 1;
        if remaining[k] == 0 {
            stack.pop();
        }
    }
    false
}

/// `f(i, n) = C(n·i, i) / ((n−1)·i + 1)`.
pub fn count_injective(i: usize, n: usize) -> BigUint {
    let c: BigUint = binomial(BigUint::from(n * i), BigUint::from(i));
    c / BigUint::from((n - 1) * i + 1)
}

/// `F(i, n) = f(i, n+1)`.
pub fn count_all(i: usize, n: usize) -> BigUint {
    count_injective(i, n + 1)
}

/// All groupings of the contiguous positions `start..start+len`.
fn groupings(start: usize, len: usize, n: usize, injective: bool) -> Vec<Vec<Vec<usize>>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let end = start + len;
    let mut out = Vec::new();
    let mut block = vec![start];
    extend_block(&mut block, end, n, injective, &mut out);
    out
}

fn extend_block(block: &mut Vec<usize>, end: usize, n: usize, injective: bool, out: &mut Vec<Vec<Vec<usize>>>) {
    if block.len().is_multiple_of(n) {
        // Close the block: fill every gap between consecutive points, and the tail.
        let mut pieces: Vec<Vec<Vec<Vec<usize>>>> = Vec::new();
        for w in block.windows(2) {
            pieces.push(groupings(w[0] + 1, w[1] - w[0] - 1, n, injective));
        }
        let last = *block.last().expect("non-empty");
        pieces.push(groupings(last + 1, end - last - 1, n, injective));
        let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![block.clone()]];
        for choices in pieces {
            let mut next = Vec::with_capacity(acc.len() * choices.len());
            for a in &acc {
                for c in &choices {
                    let mut merged = a.clone();
                    merged.extend(c.iter().cloned());
                    next.push(merged);
                }
            }
            acc = next;
        }
        out.extend(acc);
        if injective {
            return;
        }
    }
    let last = *block.last().expect("non-empty");
    let mut next = last + 1;
    while next < end {
        block.push(next);
        extend_block(block, end, n, injective, out);
        block.pop();
        next += n;
    }
}

fn enumerate(i: usize, n: usize, injective: bool) -> Vec<PortraitShape> {
    let mut shapes: Vec<PortraitShape> = groupings(0, i * n, n, injective)
        .into_iter()
        .map(|mut blocks| {
            blocks.sort();
            PortraitShape { i, n, blocks }
        })
        .collect();
    shapes.sort();
    shapes
}

/// Portraits made of one-to-one polygons, canonically ordered.
pub fn enumerate_injective_portraits(i: usize, n: usize) -> Vec<PortraitShape> {
    if check_params(i, n).is_err() {
        return Vec::new();
    }
    enumerate(i, n, true)
}

/// All portraits, including blocks covering the target several times.
pub fn enumerate_all_portraits(i: usize, n: usize) -> Vec<PortraitShape> {
    if check_params(i, n).is_err() {
        return Vec::new();
    }
    enumerate(i, n, false)
}

/// Full rooted tree in which every internal node has the same arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum NaryTree {
    Leaf,
    Node(Vec<NaryTree>),
}

impl NaryTree {
    pub fn internal_nodes(&self) -> usize {
        match self {
            NaryTree::Leaf => 0,
            NaryTree::Node(ch) => 1 + ch.iter().map(|c| c.internal_nodes()).sum::<usize>(),
        }
    }

    /// Arity shared by every internal node, if any.
    pub fn arity(&self) -> Option<usize> {
        fn walk(t: &NaryTree, arity: &mut Option<usize>) -> bool {
            match t {
                NaryTree::Leaf => true,
                NaryTree::Node(ch) => {
                    if *arity.get_or_insert(ch.len()) != ch.len() {
                        return false;
                    }
                    ch.iter().all(|c| walk(c, arity))
                }
            }
        }
        let mut arity = None;
        if walk(self, &mut arity) {
            arity
        } else {
            None
        }
    }

    /// Every full tree with `i` internal nodes of arity `n`.
    pub fn enumerate(i: usize, n: usize) -> Vec<NaryTree> {
        fn forests(internal: usize, slots: usize, n: usize) -> Vec<Vec<NaryTree>> {
            if slots == 0 {
                return if internal == 0 { vec![Vec::new()] } else { Vec::new() };
            }
            let mut out = Vec::new();
            for first in 0..=internal {
                for head in trees(first, n) {
                    for mut tail in forests(internal - first, slots - 1, n) {
                        tail.insert(0, head.clone());
                        out.push(tail);
                    }
                }
            }
            out
        }
        fn trees(internal: usize, n: usize) -> Vec<NaryTree> {
            if internal == 0 {
                return vec![NaryTree::Leaf];
            }
            forests(internal - 1, n, n).into_iter().map(NaryTree::Node).collect()
        }
        trees(i, n)
    }
}

/// Tree of an injective portrait: the polygon through the first point of a
/// region splits it into `n` subregions, which become the node's children.
pub fn portrait_to_tree(p: &PortraitShape) -> Result<NaryTree, PortraitError> {
    if let Some(b) = p.blocks.iter().find(|b| b.len() != p.n) {
        return Err(PortraitError::NotInjective(b.clone()));
    }
    let mut owner = vec![0usize; p.i * p.n];
    for (k, b) in p.blocks.iter().enumerate() {
        for &q in b {
            owner[q] = k;
        }
    }
    fn build(p: &PortraitShape, owner: &[usize], start: usize, end: usize) -> NaryTree {
        if start == end {
            return NaryTree::Leaf;
        }
        let block = &p.blocks[owner[start]];
        let children = (0..block.len())
            .map(|j| {
                let lo = block[j] + 1;
                let hi = if j + 1 < block.len() { block[j + 1] } else { end };
                build(p, owner, lo, hi)
            })
            .collect();
        NaryTree::Node(children)
    }
    Ok(build(p, &owner, 0, p.i * p.n))
}

/// Inverse of [`portrait_to_tree`].
pub fn tree_to_portrait(t: &NaryTree, n: usize) -> Result<PortraitShape, PortraitError> {
    let i = t.internal_nodes();
    match t.arity() {
        Some(a) if a == n => {}
        None if i == 0 => {}
        other => {
            return Err(PortraitError::BadTree { found: i, arity: other.unwrap_or(0), expected: n });
        }
    }
    check_params(i, n)?;
    fn place(t: &NaryTree, start: usize, n: usize, blocks: &mut Vec<Vec<usize>>) {
        if let NaryTree::Node(children) = t {
            let mut block = Vec::with_capacity(n);
            let mut at = start;
            for c in children {
                block.push(at);
                let size = c.internal_nodes() * n;
                place(c, at + 1, n, blocks);
                at += 1 + size;
            }
            blocks.push(block);
        }
    }
    let mut blocks = Vec::new();
    place(t, 0, n, &mut blocks);
    PortraitShape::new(i, n, blocks)
}

/// The reduction map from injective `(i, n+1)`-portraits onto all
/// `(i, n)`-portraits: each polygon is joined with the polygon holding the
/// point just after its `x` vertex, groups are merged and `x` points dropped.
///
/// Range position `r` corresponds to domain position
/// `x + 1 + (r / n)(n + 1) + r mod n`, so range label 0 is domain label `x + 1`.
pub fn reduce_portrait(p: &PortraitShape, x: usize) -> Result<PortraitShape, PortraitError> {
    let m = p.n;
    if x >= m {
        return Err(PortraitError::BadLabel { label: x, labels: m });
    }
    if let Some(b) = p.blocks.iter().find(|b| b.len() != m) {
        return Err(PortraitError::NotInjective(b.clone()));
    }
    let n = m - 1;
    check_params(p.i, n)?;
    let total = p.i * m;
    let mut owner = vec![0usize; total];
    for (k, b) in p.blocks.iter().enumerate() {
        for &q in b {
            owner[q] = k;
        }
    }
    let mut parent: Vec<usize> = (0..p.blocks.len()).collect();
    fn find(parent: &mut [usize], k: usize) -> usize {
        let mut r = k;
        while parent[r] != r {
            r = parent[r];
        }
        parent[k] = r;
        r
    }
    for q in (x..total).step_by(m) {
        let a = find(&mut parent, owner[q]);
        let b = find(&mut parent, owner[(q + 1) % total]);
        parent[a] = b;
    }
    let to_range = |q: usize| -> usize {
        let shifted = (q + total - x - 1) % total;
        (shifted / m) * n + shifted % m
    };
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); p.blocks.len()];
    for (q, &o) in owner.iter().enumerate() {
        if q % m != x {
            let g = find(&mut parent, o);
            groups[g].push(to_range(q));
        }
    }
    PortraitShape::new(p.i, n, groups.into_iter().filter(|g| !g.is_empty()).collect())
}

/// Inverse of [`reduce_portrait`]: each block of `q` is cut into runs
/// `0, 1, …, n−1` and every run is closed by the `x` point that precedes the
/// next run's label-0 vertex.
pub fn expand_portrait(q: &PortraitShape, x: usize) -> Result<PortraitShape, PortraitError> {
    let n = q.n;
    let m = n + 1;
    if x >= m {
        return Err(PortraitError::BadLabel { label: x, labels: m });
    }
    let total = q.i * m;
    let to_domain = |r: usize| -> usize { (x + 1 + (r / n) * m + r % n) % total };
    let mut blocks = Vec::new();
    for b in &q.blocks {
        let start = b.iter().position(|r| r % n == 0).expect("every block has label 0");
        let cyc: Vec<usize> = (0..b.len()).map(|j| b[(start + j) % b.len()]).collect();
        let runs: Vec<&[usize]> = cyc.chunks(n).collect();
        for (j, run) in runs.iter().enumerate() {
            let next_zero = runs[(j + 1) % runs.len()][0];
            let mut block: Vec<usize> = run.iter().map(|&r| to_domain(r)).collect();
            block.push((to_domain(next_zero) + total - 1) % total);
            blocks.push(block);
        }
    }
    PortraitShape::new(q.i, m, blocks)
}

/// Where a portrait is placed.
#[derive(Clone, Copy, Debug)]
pub enum Region<'a> {
    /// The whole disk, carrying degree `d`.
    Disk,
    /// A round gap; its degree must match the shape.
    Gap(&'a Gap),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlacedClass {
    pub class: PolygonClass,
    /// The class already belongs to the context lamination.
    pub reused: bool,
}

/// Binds a shape to the preimages of `target` inside `region`.
///
/// `Ok(None)` means the placement reuses a vertex of a context class without
/// reproducing that class, or crosses a context leaf.
pub fn instantiate_portrait(
    shape: &PortraitShape,
    target: &PolygonClass,
    region: Region<'_>,
    context: &ClassLamination,
) -> Result<Option<Vec<PlacedClass>>, PortraitError> {
    let points = region_points(shape.i, target, region, context.degree())?;
    if shape.n != target.len() {
        return Err(PortraitError::TargetSize { target: target.len(), shape: shape.n });
    }
    let mut placed = Vec::with_capacity(shape.blocks.len());
    let context_edges = context.edges();
    for b in &shape.blocks {
        let class = PolygonClass::new(b.iter().map(|&p| points[p].clone()).collect()).expect("distinct preimages");
        debug_assert!(matches!(
            class.covering_degree(context.degree()),
            CoveringResult::Covering(_) | CoveringResult::CollapsesToLeaf(_)
        ));
        if context.contains_class(&class) {
            placed.push(PlacedClass { class, reused: true });
            continue;
        }
        if class.vertices().iter().any(|v| context.class_of(v).is_some()) {
            return Ok(None);
        }
        if class.edges().iter().any(|e| context_edges.iter().any(|f| e.crosses(f))) {
            return Ok(None);
        }
        placed.push(PlacedClass { class, reused: false });
    }
    Ok(Some(placed))
}

/// Preimages of the target in the region, in shape position order.
pub fn region_points(
    i: usize,
    target: &PolygonClass,
    region: Region<'_>,
    d: Degree,
) -> Result<Vec<Angle>, PortraitError> {
    let region_degree = match region {
        Region::Disk => Some(d.get()),
        Region::Gap(g) => g.degree.degree(),
    };
    if region_degree != Some(i as u32) {
        return Err(PortraitError::DegreeMismatch { region: region_degree.unwrap_or(0), shape: i });
    }
    let n = target.len();
    let mut labelled: Vec<(Angle, usize)> = Vec::with_capacity(i * n);
    for (label, t) in target.vertices().iter().enumerate() {
        for p in t.preimages(d) {
            let inside = match region {
                Region::Disk => true,
                Region::Gap(g) => g.basis_contains(&p),
            };
            if inside {
                labelled.push((p, label));
            }
        }
    }
    if labelled.len() != i * n {
        return Err(PortraitError::PreimageCount { found: labelled.len(), expected: i * n });
    }
    labelled.sort();
    let start = labelled.iter().position(|(_, l)| *l == 0).expect("label 0 present");
    labelled.rotate_left(start);
    if labelled.iter().enumerate().any(|(k, (_, l))| k % n != *l) {
        return Err(PortraitError::LabelOrder);
    }
    Ok(labelled.into_iter().map(|(p, _)| p).collect())
}

/// Distinct shapes grouped by block degrees, for reporting.
pub fn degree_profiles(shapes: &[PortraitShape]) -> BTreeSet<Vec<usize>> {
    shapes
        .iter()
        .map(|s| {
            let mut d = s.block_degrees();
            d.sort_unstable();
            d
        })
        .collect()
}
