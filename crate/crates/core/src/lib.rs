//! Ribbon surfaces in open books presented by Morse diagrams on tori.
//!
//! The pipeline runs from an abstract Morse diagram (the open book), through
//! a graph front drawn on the same tori, to an arc diagram and finally a
//! Bennequin surface built from disks and bands.

pub mod arc;
pub mod arc_position;
pub mod front;
pub mod generate;
pub mod geom;
pub mod io;
pub mod morse;
pub mod rational;
pub mod render;
pub mod satellite;
pub mod surface;

pub use arc::{to_cusped, validate_arc_diagram, ArcDiagram, ArcError, CuspedArcDiagram};
pub use arc_position::{slanted_rectangular_approximation, to_arc_position, SubdivisionRecord};
pub use front::{graph_counts, resolve_crossings, subdivide_edge, validate_front, FrontError, GraphFront};
pub use generate::{builtin_front, random_graph_front};
pub use geom::Pt;
pub use morse::{
    builtin_diagram, validate_morse_diagram, Axiom, MorseDiagram, MorseError, PageInvariants, Side,
    TrivalentGraphEdge, TrivalentVertex, ValidationReport, Violation,
};
pub use rational::Q;
pub use satellite::{cable, plumb, quasipositive_annulus, satellite, CompanionSummary, PatternBraid, SurfaceSummary};
pub use surface::{
    bennequin_from_bands, destabilize, positive_markov_stabilization, ribbon_front, ribbon_to_bennequin,
    BennequinSurface, InvariantReport, RibbonFront, SurfaceError,
};
