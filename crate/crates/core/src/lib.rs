//! Tetrahedral mesh store and spatial query engine.
//!
//! A [`MeshStore`] holds vertices and normalized `(element, rank, vertex)`
//! rows. Freezing it validates the tables and builds a [`Mesh`]: centroids,
//! a Hilbert-key index over the centroids, a vertex→element index and a
//! lazily filled face-neighbor cache. Point location walks the face graph
//! from Hilbert-nearest candidates.

// `!(x > y)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adjacency;
pub mod bench;
pub mod error;
pub mod geometry;
pub mod hilbert;
pub mod interp;
pub mod io;
pub mod locate;
pub mod mesh;
pub mod model;
pub mod partition;
pub mod surface;

pub use error::{Error, Result};
pub use geometry::{Point3, TetCorners, Tolerance};
pub use hilbert::{h_decode, h_encode, HilbertCode, HilbertCurve, LatticePoint, Quantizer};
pub use interp::NodalField;
pub use locate::{BatchResult, LocateResult, LocatorConfig};
pub use mesh::{BoundingBox, Mesh};
pub use model::{ElemId, MeshStore, TetQuad, TetVertexRow, Vertex, VertexId, BOUNDARY};
pub use partition::{partition, PartitionAssignment};
pub use surface::{extract_oriented, extract_unoriented, OrientedTriangle, UnorientedTriangle};
