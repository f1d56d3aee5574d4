//! Extraction of singular patterns from discrete planar vector fields.
//!
//! The pipeline converts a uniformly sampled vector field into an
//! angle-based grid digraph, computes the one-dimensional persistent path
//! homology of its weight filtration, reads singularity locations off the
//! essential points of the persistence diagram, segments a singular polygon
//! around each singularity from the reduced digraph filtration, and compares
//! fields through persistence-diagram distances.

pub mod digraph;
pub mod distance;
pub mod error;
pub mod field;
pub mod oracle;
pub mod polygon;
pub mod pph;
pub mod singular;
pub mod svg;

pub use digraph::{
    build_grid_digraph, classify_square, rotation_angle, Direction, EdgeSlot, GridDigraph,
    SquareRef, SquareShape,
};
pub use distance::{bottleneck_distance, distance_series, wasserstein_distance, DiagramDistanceResult};
pub use error::{Error, Result};
pub use field::{
    gen_spiral, load_field, store_field, validate_assumptions, Format, GridField, GridPoint,
    GridSpec, SpiralParams, ValidationReport, Vec2,
};
pub use oracle::{oracle_betti_curve, oracle_h1_dim, SmallDigraph};
pub use polygon::{extract_singular_polygon, faces_of_subgraph, reduce_digraph, ReducedDigraph, SingularPolygon};
pub use pph::{compute_pd1, Filtration, PersistenceDiagram, PersistencePair};
pub use singular::{locate_singularities, weighted_center, winding_number, SingularityReport};
