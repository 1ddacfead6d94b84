//! Laplacian mesh smoothing over 2D triangle meshes, vertex reordering
//! strategies, and a reuse-distance / cache-cost analysis pipeline.
//!
//! The crate is organized around the stages of that pipeline:
//!
//! * [`mesh`] — mesh types, adjacency, boundary classification and the
//!   edge-length-ratio quality metric;
//! * [`io`] — Triangle-format `.node`/`.ele` parsing and writing;
//! * [`synth`] — deterministic jittered-grid test meshes;
//! * [`ordering`] — original, random, breadth-first and
//!   reuse-distance-reducing vertex orderings, plus mesh relabeling;
//! * [`smoothing`] — the smoothing engine (Jacobi and Gauss-Seidel schemes)
//!   and the canonical per-iteration access trace;
//! * [`reuse`] — exact LRU reuse distances with quantiles and windowed
//!   profiles;
//! * [`cache`] — the threshold cache model, its cost formula and the inverse
//!   capacity estimator.
//!
//! Relabeling a mesh never changes what Jacobi smoothing computes — only the
//! memory locality of the computation. The analysis side quantifies that:
//! trace one smoothing iteration, compute its reuse-distance profile, and
//! price it against a cache hierarchy.

pub mod cache;
pub mod error;
pub mod io;
pub mod mesh;
pub mod ordering;
pub mod reuse;
pub mod rng;
pub mod smoothing;
pub mod synth;

pub use error::{Error, Result};
pub use mesh::{build_adjacency, classify_boundary, global_quality, Adjacency, Mesh, Triangle, Vertex};
pub use ordering::{apply_ordering, order_by_strategy, OrderingStrategy, VertexOrdering};
pub use smoothing::{run_smoothing, trace_iteration, Scheme, SmoothingConfig, SmoothingReport};
