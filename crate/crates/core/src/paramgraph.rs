//! Trapped and free criticality, refinement, and generational graphs.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::fdl::PullbackTree;
use crate::lamination::{ClassLamination, DegreeStatus, GapKind};

/// Criticality split between polygons (trapped) and round gaps (free).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CriticalityRecord {
    pub trapped: u32,
    /// `None` when some round gap has no degree.
    pub free: Option<u32>,
}

impl CriticalityRecord {
    pub fn total(&self) -> Option<u32> {
        self.free.map(|f| f + self.trapped)
    }
}

pub fn criticality(l: &ClassLamination) -> CriticalityRecord {
    let d = l.degree();
    let trapped = l.classes().iter().map(|c| c.covering_degree(d).degree().unwrap_or(1).saturating_sub(1)).sum();
    let decomposition = l.gap_decomposition();
    let free = decomposition
        .gaps
        .iter()
        .filter(|g| g.kind == GapKind::Round)
        .map(|g| match g.degree {
            DegreeStatus::Degree(k) => Some(k - 1),
            _ => None,
        })
        .sum();
    CriticalityRecord { trapped, free }
}

/// Every class of `a` lies inside some class of `b`.
pub fn refines(a: &ClassLamination, b: &ClassLamination) -> bool {
    a.degree() == b.degree()
        && a.classes().iter().all(|c| b.class_of(c.first()).is_some_and(|host| c.is_subset_of(host)))
}

/// Directed graph on one tree level: `a → b` when `a` refines `b` and `b`
/// traps exactly one more unit of criticality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenGraph {
    pub level: usize,
    /// Canonical keys, in tree order.
    pub vertices: Vec<String>,
    pub trapped: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
    /// `refinement[a]` lists every `b ≠ a` that `a` refines.
    refinement: Vec<Vec<usize>>,
}

pub fn generational_graph(tree: &PullbackTree, level: usize) -> GenGraph {
    let nodes = &tree.levels[level];
    let lams: Vec<&ClassLamination> = nodes.iter().map(|n| n.fdl.lamination()).collect();
    let trapped: Vec<u32> = lams.par_iter().map(|l| criticality(l).trapped).collect();
    let refinement: Vec<Vec<usize>> = (0..lams.len())
        .into_par_iter()
        .map(|a| (0..lams.len()).filter(|&b| b != a && refines(lams[a], lams[b])).collect())
        .collect();
    let edges = refinement
        .iter()
        .enumerate()
        .flat_map(|(a, bs)| {
            let trapped = &trapped;
            bs.iter().filter(move |&&b| trapped[b] == trapped[a] + 1).map(move |&b| (a, b))
        })
        .collect();
    GenGraph { level, vertices: nodes.iter().map(|n| n.key.clone()).collect(), trapped, edges, refinement }
}

impl GenGraph {
    pub fn is_acyclic(&self) -> bool {
        self.edges.iter().all(|&(a, b)| self.trapped[b] > self.trapped[a])
    }

    fn closure(&self) -> BTreeSet<(usize, usize)> {
        let n = self.vertices.len();
        let mut reach = vec![vec![false; n]; n];
        for &(a, b) in &self.edges {
            reach[a][b] = true;
        }
        for k in 0..n {
            let through = reach[k].clone();
            for row in reach.iter_mut().filter(|r| r[k]) {
                for (x, &y) in row.iter_mut().zip(&through) {
                    *x |= y;
                }
            }
        }
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| reach[i][j]).collect()
    }

    /// Transitive closure of the edges equals strict refinement with a
    /// trapped-criticality increase.
    pub fn closure_is_refinement(&self) -> bool {
        let target: BTreeSet<(usize, usize)> = self
            .refinement
            .iter()
            .enumerate()
            .flat_map(|(a, bs)| bs.iter().filter(move |&&b| self.trapped[b] > self.trapped[a]).map(move |&b| (a, b)))
            .collect();
        self.closure() == target
    }
}
