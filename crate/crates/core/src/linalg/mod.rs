//! Exact dense linear algebra over `Q` and `F_p`.

mod echelon;
mod mat;
mod subspace;

pub use mat::{Mat, RankFactor};
pub use subspace::{preimage_subspace, subspace_intersect, subspace_sum, unit_vector, Subspace};

/// Rank, kernel and image of `a` in one elimination pass.
pub fn rank_factor(a: &Mat) -> RankFactor {
    a.rank_factor()
}
