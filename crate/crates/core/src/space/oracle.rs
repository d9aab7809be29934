use serde::Serialize;

use super::compression::CompressionCertificate;
use super::MatrixSpace;
use crate::enumerate::{grassmannian, grassmannian_count};
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::scalar::Field;

/// Default cap on the number of `(V', W')` pairs the oracle may enumerate.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// Number of candidate pairs for a `(k1, k2)` search over `F_p`.
pub fn search_size(space: &MatrixSpace, k1: usize, k2: usize) -> Result<u128> {
    let p = space.field().order().ok_or(Error::NotPrimeField)?;
    let (m, n) = (space.rows(), space.cols());
    if k1 > n || k2 > m {
        return Ok(0);
    }
    Ok(grassmannian_count(p, n, n - k1) * grassmannian_count(p, m, k2))
}

/// Exhaustive search over all `V'` of codimension `k1` and `W'` of dimension `k2`.
///
/// Pairs are visited in lexicographic order of `(V', W')` echelon
/// representatives and the first valid one is returned. For a fixed `V'` only
/// subspaces containing `Σ A_i(V')` can succeed, so a `V'` whose image sum
/// exceeds dimension `k2` skips its `W'` loop.
pub fn brute_force_compression_fp(
    space: &MatrixSpace,
    k1: usize,
    k2: usize,
    budget: u128,
) -> Result<Option<CompressionCertificate>> {
    let field = space.field();
    if !matches!(field, Field::Prime(_)) {
        return Err(Error::NotPrimeField);
    }
    let needed = search_size(space, k1, k2)?;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    if needed == 0 {
        return Ok(None);
    }
    let (m, n) = (space.rows(), space.cols());
    let targets = grassmannian(field, m, k2);
    for v in grassmannian(field, n, n - k1) {
        let mut image = Subspace::zero(field, m);
        for a in space.basis() {
            image = image.sum(&v.image_under(a)?)?;
            if image.dim() > k2 {
                break;
            }
        }
        if image.dim() > k2 {
            continue;
        }
        if let Some(w) = targets.iter().find(|w| w.contains_subspace(&image)) {
            return Ok(Some(CompressionCertificate::new(v, w.clone())));
        }
    }
    Ok(None)
}

/// Oracle result for one split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleOutcome {
    pub k1: usize,
    pub k2: usize,
    pub pairs: u128,
    pub certificate: Option<CompressionCertificate>,
}

/// Runs the oracle on the three rank-2 splits `(0,2)`, `(1,1)`, `(2,0)`.
pub fn brute_force_rank2(space: &MatrixSpace, budget: u128) -> Result<Vec<OracleOutcome>> {
    [(0, 2), (1, 1), (2, 0)]
        .into_iter()
        .map(|(k1, k2)| {
            Ok(OracleOutcome {
                k1,
                k2,
                pairs: search_size(space, k1, k2)?,
                certificate: brute_force_compression_fp(space, k1, k2, budget)?,
            })
        })
        .collect()
}
