//! Exact analysis of linear spaces of matrices over `Q` and `F_p`: generic and
//! constant rank, rank-2 compression with an exhaustive oracle, Kronecker
//! invariants of pencils, and solvable Lie algebra representations tied to
//! line bundles on the projective line.

pub mod bridge;
pub mod enumerate;
pub mod error;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod pencil;
pub mod poly;
pub mod scalar;
pub mod space;

pub use error::{Error, Result};
pub use linalg::{Mat, Subspace};
pub use scalar::{Field, Scalar};
pub use space::MatrixSpace;
