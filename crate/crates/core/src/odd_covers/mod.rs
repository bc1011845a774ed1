//! Odd coverings: pole shapes and their numerology, the indecomposability
//! certificate read off the fiber over ∞, composite covers, and the search
//! for simple odd tuples with monodromy `A_d`.

pub mod compose;
pub mod obstruction;
pub mod search;
pub mod shape;

pub use compose::{
    compose_covers, random_wreath_instance, sheet_blocks, ComposeError, ExtraBranchPoint, InnerAssignment, WreathElement,
    WreathInstance,
};
pub use obstruction::{decomposability_obstruction, ObstructionError, ObstructionEvidence};
pub use search::{
    canonical_infinity_permutation, search_simple_odd_tuple, SearchConfig, SearchError, SearchEvidence, SearchOutcome,
    SearchPhase, SearchStats, DEFAULT_BUDGET,
};
pub use shape::{
    check_feasibility, dim_f_degree, dim_f_divisor, dim_h, enumerate_cover_shapes, hurwitz_branch_bound,
    is_feasible, is_indecomposable_triple, three_cycle_branch_count, BranchBound, CoverShape, DimensionError,
    FeasibilityEvidence, FeasibleConclusions, Inequality, ShapeError, ShapeSummary,
};
