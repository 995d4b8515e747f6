//! Exact arithmetic for finite laminations under the angle-multiplying map
//! `σ_d(θ) = dθ mod 1`.

pub mod circle;
pub mod fdl;
pub mod io;
pub mod lamination;
pub mod paramgraph;
pub mod portraits;
pub mod pullback;

pub use circle::{Angle, AngleError, Degree, OrbitInfo};
pub use lamination::{
    Arc, BoundaryPiece, Chord, ChordSet, ClassLamination, CoveringResult, CriticalityAudit, DegreeStatus, Gap,
    GapDecomposition, GapKind, LaminationError, PolygonClass,
};
