//! Polygonal knot diagrams thickened into folded ribbons.

pub mod diagram;
pub mod error;
pub mod generators;
pub mod geom;
pub mod grid;
pub mod invariants;
pub mod io;
pub mod optimizer;
pub mod ribbon;
pub mod svg;
pub mod validity;

pub use diagram::{CrossingAssignment, CrossingData, DegenerateOverlap, FoldAngle, PolyDiagram, Turn};
pub use error::{Result, RibbonError};
pub use generators::{
    ngon_unknot, parse_fold_pattern, pentagram_trefoil, torus_grid, twist_grid, two_stick_unknot, Generated,
    GeneratorSpec,
};
pub use geom::Point2;
pub use grid::{grid_ribbonlength, grid_to_diagram, parse_grid, GridDiagram};
pub use invariants::{
    audit_bounds, compare_equivalence, knot_determinant, ribbon_invariants, ribbon_linking_number, ribbonlength,
    BoundAudit, EquivalenceEvidence, KnownFamily, RibbonInvariants, RibbonSpec, Verdict,
};
pub use io::{parse_diagram, write_diagram, write_report, DiagramDocument};
pub use optimizer::{minimize_ribbonlength, OptimizeResult, OptimizerParams, TraceEntry};
pub use ribbon::{band_type, build_ribbon, BandType, Fold, FoldingInfo, RibbonGeometry};
pub use svg::{render_svg, RenderSpec};
pub use validity::{check_allowed, max_width, Failure, Layering, MaxWidth, ValidityReport, WidthBound};
