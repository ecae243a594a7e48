//! Cubical cochains with the Serre-diagonal cup product, geometric cochains
//! built from co-oriented coordinate-graph pieces, the logistic flow on
//! cubes, and signed intersection counts comparing fiber products of flowed
//! cochains with cup products.

pub mod cochain;
pub mod complex;
pub mod cube;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod product;
pub mod snf;

pub use complex::{CubeId, CubicalComplex};
pub use cube::{FacePartition, Sign, VertexSet};
pub use geometry::{GeoCochain, GraphPiece};
