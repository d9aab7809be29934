//! Exact Kronecker data of matrix pencils `s A + t B`.
//!
//! Minimal indices come from kernel dimensions of block-Toeplitz stackings:
//! a polynomial kernel vector `x(s, t) = Σ x_i s^(j-i) t^i` of degree `j`
//! satisfies `A x_0 = 0`, `A x_i + B x_(i-1) = 0`, `B x_j = 0`, which is the
//! kernel of the `(j+2)m x (j+1)n` matrix `T_j` with `A` on the block
//! diagonal and `B` just below it. If `z_j = dim ker T_j`, then
//! `z_j - z_(j-1)` counts the right minimal indices `<= j`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::poly::{BinaryForm, MultiPoly};
use crate::scalar::Scalar;
use crate::space::{self, MatrixSpace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilInvariants {
    pub normal_rank: usize,
    pub right_minimal_indices: Vec<usize>,
    pub left_minimal_indices: Vec<usize>,
    /// Degree of the gcd of the `normal_rank`-minors, as a binary form.
    pub minor_gcd_degree: usize,
    pub minor_gcd: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilConstantRank {
    pub constant_rank: bool,
    pub normal_rank: usize,
    pub gcd: String,
    #[serde(skip)]
    pub gcd_form: BinaryForm,
}

fn check_shapes(a: &Mat, b: &Mat) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "pencil halves have shapes {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field(), b.field()));
    }
    Ok(())
}

/// Rank of `s A + t B` at a generic point.
///
/// The rank drops at no more than `min(m, n)` points of `P^1`, so the maximum
/// over `min(m, n) + 2` distinct points is exact. Fields too small for that
/// fall back to the largest nonvanishing minor.
pub fn normal_rank(a: &Mat, b: &Mat) -> Result<usize> {
    check_shapes(a, b)?;
    let field = a.field();
    let cap = a.rows().min(a.cols());
    let needed = cap as u64 + 2;
    if field.order().is_none_or(|p| p + 1 >= needed) {
        let mut best = b.rank();
        for c in 0..needed - 1 {
            let m = a.scale(&field.element(c)).add(b)?;
            best = best.max(m.rank());
        }
        return Ok(best);
    }
    let generic = pencil_generic(a, b);
    Ok((1..=cap)
        .rev()
        .find(|&k| space::rank_minors(&generic, k).any(|p| !p.is_zero()))
        .unwrap_or(0))
}

fn pencil_generic(a: &Mat, b: &Mat) -> Vec<Vec<MultiPoly>> {
    (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| MultiPoly::linear(a.field(), &[a.get(i, j).clone(), b.get(i, j).clone()]))
                .collect()
        })
        .collect()
}

/// `T_j`: `j + 2` block rows, `j + 1` block columns, `A` on the diagonal and `B` below.
fn toeplitz(a: &Mat, b: &Mat, j: usize) -> Mat {
    let (m, n) = a.shape();
    let mut t = Mat::zeros(a.field(), (j + 2) * m, (j + 1) * n);
    for c in 0..=j {
        for (blk, r) in [(a, c), (b, c + 1)] {
            for i in 0..m {
                for k in 0..n {
                    let v = blk.get(i, k);
                    if !v.is_zero() {
                        t.set(r * m + i, c * n + k, v.clone());
                    }
                }
            }
        }
    }
    t
}

/// Right minimal indices from the kernel-dimension jumps of `T_0, T_1, ...`.
fn right_indices(a: &Mat, b: &Mat, count: usize, max_degree: usize) -> Vec<usize> {
    let n = a.cols();
    let mut out = Vec::new();
    let (mut prev_kernel, mut prev_at_most) = (0usize, 0usize);
    for j in 0..=max_degree {
        if out.len() == count {
            break;
        }
        let t = toeplitz(a, b, j);
        let kernel = (j + 1) * n - t.rank();
        let at_most = kernel - prev_kernel;
        out.extend(std::iter::repeat_n(j, at_most - prev_at_most));
        prev_kernel = kernel;
        prev_at_most = at_most;
    }
    debug_assert_eq!(out.len(), count, "minimal index count mismatch");
    out
}

pub fn kronecker_minimal_indices(a: &Mat, b: &Mat) -> Result<PencilInvariants> {
    check_shapes(a, b)?;
    let (m, n) = a.shape();
    let r = normal_rank(a, b)?;
    let right = right_indices(a, b, n - r, r);
    let left = right_indices(&a.transpose(), &b.transpose(), m - r, r);
    let gcd = space::minor_gcd(a, b, r).ok_or(Error::RankUnattained(r))?;
    Ok(PencilInvariants {
        normal_rank: r,
        right_minimal_indices: right,
        left_minimal_indices: left,
        minor_gcd_degree: gcd.degree(),
        minor_gcd: gcd.to_string(),
    })
}

/// Constant rank of a two-dimensional space `span{A, B}`: true iff the gcd of
/// the maximal nonvanishing minors is a nonzero constant.
pub fn pencil_constant_rank(a: &Mat, b: &Mat) -> Result<PencilConstantRank> {
    check_shapes(a, b)?;
    MatrixSpace::new(vec![a.clone(), b.clone()])?;
    let r = normal_rank(a, b)?;
    let g = space::minor_gcd(a, b, r).ok_or(Error::RankUnattained(r))?;
    Ok(PencilConstantRank {
        constant_rank: g.degree() == 0,
        normal_rank: r,
        gcd: g.to_string(),
        gcd_form: g,
    })
}

/// The pencil of a two-dimensional matrix space.
pub fn pencil_of(space: &MatrixSpace) -> Result<(&Mat, &Mat)> {
    match space.basis() {
        [a, b] => Ok((a, b)),
        other => Err(Error::DimensionMismatch(format!(
            "a pencil needs exactly 2 basis matrices, got {}",
            other.len()
        ))),
    }
}

/// Evaluates `s A + t B`.
pub fn evaluate(a: &Mat, b: &Mat, s: &Scalar, t: &Scalar) -> Result<Mat> {
    a.scale(s).add(&b.scale(t))
}
