pub mod error;
pub mod jets;
pub mod liealg;
pub mod linalg;
pub mod linearize;
pub mod parse;
pub mod polysolve;
pub mod realize;
pub mod symexpr;
pub mod vectorfield;

pub use error::{Error, Result};
pub use jets::{JetChart, OdeSystem};
pub use liealg::{
    ad_eigenvalue, closure_generate, generic_rank, root_decomposition, structure_constants, LieBasis, RootDatum,
    StructureConstants,
};
pub use linearize::{canonical_coordinates, linearize_pipeline, scramble, LinearizationReport, Verdict};
pub use parse::{parse_expr, parse_field, parse_fields, parse_map, parse_system, FieldSet};
pub use symexpr::{Binding, Bindings, Expr, Rational, Var};
pub use vectorfield::{Chart, Coord, PointMap, VectorField};
