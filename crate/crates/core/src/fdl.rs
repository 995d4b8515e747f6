//! Finite dynamical laminations: the seven axioms, children, and pullback trees.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::circle::Degree;
use crate::lamination::{Chord, ChordSet, ClassLamination, CoveringResult, LaminationError, PolygonClass};
use crate::portraits::{enumerate_all_portraits, instantiate_portrait, Region};

/// Evidence attached to a failed axiom.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness {
    Leaf(Chord),
    Class(PolygonClass),
    Message(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Leaf(c) => write!(f, "leaf {c}"),
            Witness::Class(c) => write!(f, "class {c}"),
            Witness::Message(m) => f.write_str(m),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxiomResult {
    pub axiom: u8,
    pub name: &'static str,
    pub witnesses: Vec<Witness>,
}

impl AxiomResult {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FdlReport {
    pub axioms: Vec<AxiomResult>,
    /// The single `n` of axiom 4, when the class map is defined.
    pub depth: Option<usize>,
}

impl FdlReport {
    pub fn is_valid(&self) -> bool {
        self.axioms.iter().all(|a| a.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomResult> {
        self.axioms.iter().filter(|a| !a.passed())
    }
}

impl fmt::Display for FdlReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axioms {
            if a.passed() {
                writeln!(f, "axiom {} ({}): ok", a.axiom, a.name)?;
            } else {
                let w: Vec<String> = a.witnesses.iter().map(|w| w.to_string()).collect();
                writeln!(f, "axiom {} ({}): FAIL: {}", a.axiom, a.name, w.join("; "))?;
            }
        }
        match self.depth {
            Some(n) => write!(f, "depth n = {n}"),
            None => write!(f, "depth n undefined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FdlError {
    #[error("invalid lamination: {0}")]
    Lamination(#[from] LaminationError),
    #[error("root is not a valid FDL with n = 0:\n{0}")]
    InvalidRoot(Box<FdlReport>),
}

/// Class-level dynamics: image class of each class, periodicity and depth.
struct ClassMap {
    image: Vec<Option<usize>>,
    periodic: Vec<bool>,
    depth: Vec<Option<usize>>,
}

fn class_map(l: &ClassLamination) -> ClassMap {
    let d = l.degree();
    let classes = l.classes();
    let index: BTreeMap<&[crate::circle::Angle], usize> =
        classes.iter().enumerate().map(|(i, c)| (c.vertices(), i)).collect();
    let image: Vec<Option<usize>> =
        classes.iter().map(|c| index.get(c.image_vertices(d).as_slice()).copied()).collect();
    let k = classes.len();
    let periodic: Vec<bool> = (0..k)
        .map(|start| {
            let mut at = start;
            for _ in 0..k {
                match image[at] {
                    Some(next) => at = next,
                    None => return false,
                }
                if at == start {
                    return true;
                }
            }
            false
        })
        .collect();
    let depth: Vec<Option<usize>> = (0..k)
        .map(|start| {
            let mut at = start;
            for steps in 0..=k {
                if periodic[at] {
                    return Some(steps);
                }
                at = image[at]?;
            }
            None
        })
        .collect();
    ClassMap { image, periodic, depth }
}

/// Checks the seven axioms of a finite dynamical lamination.
pub fn validate_fdl(l: &ClassLamination) -> FdlReport {
    let d = l.degree();
    let edges = l.edges();
    let edge_set: HashSet<&Chord> = edges.iter().collect();
    let map = class_map(l);
    let classes = l.classes();

    let finite = AxiomResult { axiom: 1, name: "finitely many leaves", witnesses: Vec::new() };

    let critical: Vec<Witness> = edges.iter().filter(|e| e.is_critical(d)).cloned().map(Witness::Leaf).collect();
    let no_critical = AxiomResult { axiom: 2, name: "no critical leaves", witnesses: critical };

    let unclosed: Vec<Witness> = edges
        .iter()
        .filter(|e| match e.image(d) {
            Some(img) => !edge_set.contains(&img),
            None => false,
        })
        .cloned()
        .map(Witness::Leaf)
        .collect();
    let forward = AxiomResult { axiom: 3, name: "forward invariant", witnesses: unclosed };

    let mut depth_witnesses = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        if map.image[i].is_none() {
            depth_witnesses.push(Witness::Message(format!("image of class {c} is not a class")));
        }
    }
    let depth = if depth_witnesses.is_empty() {
        map.depth.iter().copied().collect::<Option<Vec<usize>>>().map(|v| v.into_iter().max().unwrap_or(0))
    } else {
        None
    };
    if let Some(n) = depth {
        let mut preimage_classes: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
        for (i, img) in map.image.iter().enumerate() {
            preimage_classes[img.expect("defined")].push(i);
        }
        for (i, c) in classes.iter().enumerate() {
            let ci = map.depth[i].expect("defined");
            let pre = &preimage_classes[i];
            let covered: BTreeSet<&crate::circle::Angle> =
                pre.iter().flat_map(|&j| classes[j].vertices().iter()).collect();
            let full = c.vertices().iter().all(|v| v.preimages(d).iter().all(|p| covered.contains(p)));
            if ci < n && !full {
                depth_witnesses.push(Witness::Message(format!("class {c} at depth {ci} lacks a full preimage")));
            } else if ci == n && full {
                depth_witnesses.push(Witness::Message(format!("class {c} at depth {n} has a full preimage")));
            }
            if map.periodic[i] {
                let has_free = pre.iter().any(|&j| !map.periodic[j]);
                if has_free != (n > 0) {
                    depth_witnesses.push(Witness::Message(format!(
                        "periodic class {c} {} non-periodic preimage classes with n = {n}",
                        if has_free { "has" } else { "lacks" }
                    )));
                }
            }
        }
    }
    let single_n = AxiomResult { axiom: 4, name: "single depth n", witnesses: depth_witnesses };

    let siblings = AxiomResult { axiom: 5, name: "sibling leaves", witnesses: sibling_failures(l, &edges) };

    let hull = AxiomResult { axiom: 6, name: "leaves are hull edges", witnesses: Vec::new() };

    let orientation: Vec<Witness> = classes
        .iter()
        .enumerate()
        .filter(|(i, c)| map.periodic[*i] && !matches!(c.covering_degree(d), CoveringResult::Covering(_)))
        .map(|(_, c)| Witness::Class(c.clone()))
        .collect();
    let positive = AxiomResult { axiom: 7, name: "periodic classes cover positively", witnesses: orientation };

    FdlReport { axioms: vec![finite, no_critical, forward, single_n, siblings, hull, positive], depth }
}

fn leaf_is_periodic(e: &Chord, d: Degree, bound: usize) -> bool {
    let mut at = e.clone();
    for _ in 0..bound {
        match at.image(d) {
            Some(next) => at = next,
            None => return false,
        }
        if at == *e {
            return true;
        }
    }
    false
}

fn sibling_failures(l: &ClassLamination, edges: &[Chord]) -> Vec<Witness> {
    let d = l.degree();
    let need = d.as_usize();
    let mut by_image: BTreeMap<Chord, Vec<&Chord>> = BTreeMap::new();
    for e in edges {
        if let Some(img) = e.image(d) {
            by_image.entry(img).or_default().push(e);
        }
    }
    fn extend(chosen: &mut Vec<Chord>, pool: &[&Chord], from: usize, need: usize) -> bool {
        if chosen.len() == need {
            return true;
        }
        for k in from..pool.len() {
            if chosen.iter().all(|c| !c.shares_endpoint(pool[k])) {
                chosen.push(pool[k].clone());
                if extend(chosen, pool, k + 1, need) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    edges
        .iter()
        .filter(|e| !leaf_is_periodic(e, d, edges.len()))
        .filter(|e| {
            let Some(img) = e.image(d) else { return false };
            let pool: Vec<&Chord> = by_image[&img].iter().copied().filter(|c| *c != *e).collect();
            let mut chosen = vec![(*e).clone()];
            !extend(&mut chosen, &pool, 0, need)
        })
        .cloned()
        .map(Witness::Leaf)
        .collect()
}

/// Validates a raw chord set, reconstructing classes from shared endpoints.
pub fn validate_chord_set(set: &ChordSet) -> FdlReport {
    match ClassLamination::from_chords(set) {
        Ok(l) => validate_fdl(&l),
        Err(e) => {
            let witness = match e {
                LaminationError::NotHullEdge { chord } | LaminationError::MissingHullEdge { chord } => {
                    Witness::Leaf(*chord)
                }
                other => Witness::Message(other.to_string()),
            };
            let mut axioms: Vec<AxiomResult> = [
                (1, "finitely many leaves"),
                (2, "no critical leaves"),
                (3, "forward invariant"),
                (4, "single depth n"),
                (5, "sibling leaves"),
                (6, "leaves are hull edges"),
                (7, "periodic classes cover positively"),
            ]
            .into_iter()
            .map(|(axiom, name)| AxiomResult { axiom, name, witnesses: Vec::new() })
            .collect();
            axioms[5].witnesses.push(witness);
            // The remaining axioms are not evaluated without a class structure.
            for a in axioms.iter_mut().skip(1).take(4) {
                a.witnesses.push(Witness::Message("not evaluated".into()));
            }
            axioms[6].witnesses.push(Witness::Message("not evaluated".into()));
            FdlReport { axioms, depth: None }
        }
    }
}

/// A lamination that passed [`validate_fdl`], with its depth parameter.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Fdl {
    lamination: ClassLamination,
    depth: usize,
}

impl Fdl {
    pub fn new(lamination: ClassLamination) -> Result<Fdl, FdlReport> {
        let report = validate_fdl(&lamination);
        match (report.is_valid(), report.depth) {
            (true, Some(depth)) => Ok(Fdl { lamination, depth }),
            _ => Err(report),
        }
    }

    pub fn lamination(&self) -> &ClassLamination {
        &self.lamination
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn degree(&self) -> Degree {
        self.lamination.degree()
    }

    /// Periodic classes.
    pub fn periodic_classes(&self) -> Vec<PolygonClass> {
        let map = class_map(&self.lamination);
        self.lamination.classes().iter().zip(&map.periodic).filter(|(_, p)| **p).map(|(c, _)| c.clone()).collect()
    }

    /// Classes at depth exactly `k`.
    pub fn classes_at_depth(&self, k: usize) -> Vec<PolygonClass> {
        let map = class_map(&self.lamination);
        self.lamination
            .classes()
            .iter()
            .zip(&map.depth)
            .filter(|(_, dep)| **dep == Some(k))
            .map(|(c, _)| c.clone())
            .collect()
    }
}

pub fn canonical_form(l: &ClassLamination) -> String {
    l.canonical_key()
}

/// All FDL one level deeper whose image is `l`, canonically ordered.
pub fn enumerate_children(l: &Fdl) -> Vec<Fdl> {
    let lam = l.lamination();
    let targets = l.classes_at_depth(l.depth());
    // Per target, every disk-wide placement of every portrait shape.
    let options: Vec<Vec<Vec<PolygonClass>>> = targets
        .iter()
        .map(|t| {
            let mut placements: Vec<Vec<PolygonClass>> = enumerate_all_portraits(l.degree().as_usize(), t.len())
                .iter()
                .filter_map(|shape| instantiate_portrait(shape, t, Region::Disk, lam).ok().flatten())
                .map(|placed| placed.into_iter().filter(|p| !p.reused).map(|p| p.class).collect())
                .collect();
            placements.sort();
            placements.dedup();
            placements
        })
        .collect();
    let mut found: BTreeMap<Vec<PolygonClass>, Fdl> = BTreeMap::new();
    fn combine(
        k: usize,
        acc: &ClassLamination,
        options: &[Vec<Vec<PolygonClass>>],
        parent: &Fdl,
        found: &mut BTreeMap<Vec<PolygonClass>, Fdl>,
    ) {
        if k == options.len() {
            if acc == parent.lamination() || !acc.maps_onto(parent.lamination()) {
                return;
            }
            if let Ok(child) = Fdl::new(acc.clone()) {
                if child.depth() == parent.depth() + 1 {
                    found.insert(acc.classes().to_vec(), child);
                }
            }
            return;
        }
        for placement in &options[k] {
            if let Ok(next) = acc.with_classes(placement.iter().cloned()) {
                combine(k + 1, &next, options, parent, found);
            }
        }
    }
    combine(0, lam, &options, l, &mut found);
    found.into_values().collect()
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub fdl: Fdl,
    pub key: String,
    /// Index of the parent in the previous level.
    pub parent: Option<usize>,
}

/// Breadth-first tree of all FDL with a given periodic class set.
#[derive(Clone, Debug)]
pub struct PullbackTree {
    pub levels: Vec<Vec<TreeNode>>,
}

impl PullbackTree {
    pub fn root(&self) -> &TreeNode {
        &self.levels[0][0]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }
}

pub fn build_pullback_tree(
    degree: Degree,
    periodic: Vec<PolygonClass>,
    depth: usize,
) -> Result<PullbackTree, FdlError> {
    build_pullback_tree_with(degree, periodic, depth, |_, _| {})
}

/// As [`build_pullback_tree`], reporting each completed level to `on_level`.
pub fn build_pullback_tree_with(
    degree: Degree,
    periodic: Vec<PolygonClass>,
    depth: usize,
    mut on_level: impl FnMut(usize, &[TreeNode]),
) -> Result<PullbackTree, FdlError> {
    let root_lam = ClassLamination::new(degree, periodic)?;
    let root = match Fdl::new(root_lam.clone()) {
        Ok(f) if f.depth() == 0 => f,
        Ok(_) => unreachable!("a lamination of periodic classes has depth 0"),
        Err(report) => return Err(FdlError::InvalidRoot(Box::new(report))),
    };
    let root_node = TreeNode { key: canonical_form(root.lamination()), fdl: root, parent: None };
    on_level(0, std::slice::from_ref(&root_node));
    let mut levels = vec![vec![root_node]];
    for level in 1..=depth {
        let previous = &levels[level - 1];
        let per_parent: Vec<Vec<Fdl>> = previous.par_iter().map(|node| enumerate_children(&node.fdl)).collect();
        let mut seen: HashSet<String> = HashSet::new();
        let mut next: Vec<TreeNode> = Vec::new();
        for (pi, children) in per_parent.into_iter().enumerate() {
            for child in children {
                let key = canonical_form(child.lamination());
                if seen.insert(key.clone()) {
                    next.push(TreeNode { fdl: child, key, parent: Some(pi) });
                }
            }
        }
        next.sort_by(|a, b| a.fdl.lamination().classes().cmp(b.fdl.lamination().classes()));
        on_level(level, &next);
        levels.push(next);
    }
    Ok(PullbackTree { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::Angle;

    fn d2() -> Degree {
        Degree::new(2).unwrap()
    }

    fn poly(vs: &[(i64, i64)]) -> PolygonClass {
        PolygonClass::new(vs.iter().map(|&(p, q)| Angle::frac(p, q)).collect()).unwrap()
    }

    fn rabbit() -> PolygonClass {
        poly(&[(1, 7), (2, 7), (4, 7)])
    }

    fn sibling() -> PolygonClass {
        poly(&[(1, 14), (9, 14), (11, 14)])
    }

    #[test]
    fn rabbit_root_and_level_one_validate() {
        let root = ClassLamination::new(d2(), vec![rabbit()]).unwrap();
        let r = validate_fdl(&root);
        assert!(r.is_valid(), "{r}");
        assert_eq!(r.depth, Some(0));
        let level1 = ClassLamination::new(d2(), vec![rabbit(), sibling()]).unwrap();
        let r = validate_fdl(&level1);
        assert!(r.is_valid(), "{r}");
        assert_eq!(r.depth, Some(1));
    }

    #[test]
    fn merged_hexagon_fails_forward_invariance() {
        let hexagon = poly(&[(1, 14), (1, 7), (2, 7), (4, 7), (9, 14), (11, 14)]);
        let r = validate_fdl(&ClassLamination::new(d2(), vec![hexagon]).unwrap());
        let forward = &r.axioms[2];
        assert!(!forward.passed());
        let bad = Chord::new(Angle::frac(2, 7), Angle::frac(4, 7)).unwrap();
        assert!(forward.witnesses.contains(&Witness::Leaf(bad)));
    }

    #[test]
    fn critical_leaf_is_reported() {
        let r = validate_fdl(&ClassLamination::new(d2(), vec![poly(&[(0, 1), (1, 2)])]).unwrap());
        assert!(!r.axioms[1].passed());
    }

    #[test]
    fn orientation_reversing_periodic_class_fails_axiom_seven() {
        // σ_2 permutes {1/5, 2/5, 3/5, 4/5} as 1→2→4→3, which is not a rotation.
        let square = ClassLamination::new(d2(), vec![poly(&[(1, 5), (2, 5), (3, 5), (4, 5)])]).unwrap();
        let r = validate_fdl(&square);
        assert_eq!(r.axioms[6].witnesses, vec![Witness::Class(poly(&[(1, 5), (2, 5), (3, 5), (4, 5)]))]);
        let d3 = Degree::new(3).unwrap();
        let swap = ClassLamination::new(d3, vec![poly(&[(1, 4), (3, 4)])]).unwrap();
        assert!(validate_fdl(&swap).axioms[6].passed());
    }

    #[test]
    fn canonical_form_examples() {
        let root = ClassLamination::new(d2(), vec![rabbit()]).unwrap();
        assert_eq!(canonical_form(&root), "2|1/7,2/7,4/7");
        let a = ClassLamination::new(d2(), vec![rabbit(), sibling()]).unwrap();
        let b = ClassLamination::new(d2(), vec![sibling(), rabbit()]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_eq!(canonical_form(&a), "2|1/14,9/14,11/14;1/7,2/7,4/7");
    }

    #[test]
    fn rabbit_root_has_one_child() {
        let root = Fdl::new(ClassLamination::new(d2(), vec![rabbit()]).unwrap()).unwrap();
        let children = enumerate_children(&root);
        assert_eq!(children.len(), 1);
        assert_eq!(children[0].lamination().classes(), &[sibling(), rabbit()]);
    }

    #[test]
    fn basilica_root_has_one_child() {
        let root = Fdl::new(ClassLamination::new(d2(), vec![poly(&[(1, 3), (2, 3)])]).unwrap()).unwrap();
        let children = enumerate_children(&root);
        assert_eq!(children.len(), 1);
        assert!(children[0].lamination().contains_class(&poly(&[(1, 6), (5, 6)])));
    }
}
