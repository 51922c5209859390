//! Dynamic visibility among polygonal obstacles.
//!
//! The free space inside a bounding box is split into junctions and
//! corridors; visibility polygons of tracked query points and the
//! vertex-to-vertex visibility graph are maintained under single-vertex
//! insertions and deletions, and every maintained structure can be checked
//! against the brute-force routines in [`oracle`].

pub mod decomposition;
pub mod domain;
pub mod dynamic_vp;
pub mod engine;
pub mod gen;
pub mod geom;
pub mod oracle;
pub mod par;
pub mod simple_vis;
pub mod svg;
pub mod visgraph;
pub mod vistree;

pub use domain::{EditEvent, Obstacle, Scene};
pub use geom::{Coord, Point};
pub use oracle::{PointKind, VisibilityPolygon, VpEntry};
