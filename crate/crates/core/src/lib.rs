//! Division-algebra Hopf bundles: the algebras, their Clifford
//! representations, the projections and fiber actions, the induced gauge
//! potentials, and the mechanics of a free particle reduced along the fibers.

// Index loops mirror the tensor notation.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod gauge;
pub mod hopf;
pub mod mechanics;
pub mod sampling;

pub use algebra::{AlgebraElement, Dim, StructureTable};
pub use clifford::MatrixRep;
pub use error::{Error, Result, Singularity};
pub use hopf::{BasePoint, BundlePoint, ChartConfig, FiberCoords, FiberRotation};
