//! Linear spaces of matrices `M ⊂ Hom(V, W)`: generic and constant rank,
//! common kernel and image, rank-2 compression detection and the exhaustive
//! finite-field oracle.

mod compression;
mod oracle;
mod rank;

pub use compression::{
    common_kernel_and_image, detect_compression_rank2, random_equivalent, verify_certificate, CommonSpaces,
    CompressionCertificate, DEFAULT_RETRIES,
};
pub use oracle::{brute_force_compression_fp, brute_force_rank2, search_size, OracleOutcome, DEFAULT_BUDGET};
pub use rank::{
    check_desk_scale, constant_rank_verdict, constant_rank_verdict_with, generic_rank, generic_rank_with, sampled_rank,
    ConstantRankStatus, RankOptions, RankVerdict, UpperBound, DEFAULT_EXHAUSTION_BUDGET, DESK_MAX_DIM, DESK_MAX_SIDE,
};
pub(crate) use rank::{minor_gcd, minors as rank_minors};

use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::poly::MultiPoly;
use crate::scalar::{Field, Scalar};

/// A basis `A_1..A_d` of `m x n` matrices over one field; `m = dim W`, `n = dim V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSpace {
    field: Field,
    rows: usize,
    cols: usize,
    basis: Vec<Mat>,
}

impl MatrixSpace {
    /// Validates shape, field and linear independence of the basis.
    pub fn new(basis: Vec<Mat>) -> Result<MatrixSpace> {
        let first = basis.first().ok_or(Error::EmptyBasis)?;
        let (field, rows, cols) = (first.field(), first.rows(), first.cols());
        for a in &basis {
            if a.shape() != (rows, cols) {
                return Err(Error::DimensionMismatch(format!(
                    "basis matrix of shape {:?}, expected {rows}x{cols}",
                    a.shape()
                )));
            }
            if a.field() != field {
                return Err(Error::FieldMismatch(field, a.field()));
            }
        }
        let flat = Subspace::from_vectors(field, rows * cols, basis.iter().map(|a| a.entries().to_vec()).collect())?;
        if flat.dim() != basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(MatrixSpace {
            field,
            rows,
            cols,
            basis,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `m = dim W`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `n = dim V`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `d = dim M`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    /// `A(t) = Σ t_i A_i`.
    pub fn element(&self, t: &[Scalar]) -> Result<Mat> {
        Mat::combination(t, &self.basis)
    }

    pub fn transpose(&self) -> MatrixSpace {
        MatrixSpace {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            basis: self.basis.iter().map(Mat::transpose).collect(),
        }
    }

    /// `{P A_i Q}`.
    pub fn transform(&self, p: &Mat, q: &Mat) -> Result<MatrixSpace> {
        let basis = self
            .basis
            .iter()
            .map(|a| p.mul(a)?.mul(q))
            .collect::<Result<Vec<_>>>()?;
        MatrixSpace::new(basis)
    }

    /// Reduces the basis into `F_p`. A basis that becomes dependent is a bad reduction.
    pub fn reduce(&self, target: Field) -> Result<MatrixSpace> {
        if target == self.field {
            return Ok(self.clone());
        }
        let basis = self
            .basis
            .iter()
            .map(|a| a.reduce(target))
            .collect::<Result<Vec<_>>>()?;
        match MatrixSpace::new(basis) {
            Err(Error::DependentBasis) => Err(Error::BadReduction {
                prime: target.order().unwrap_or(0),
            }),
            other => other,
        }
    }

    /// Entries of the generic element as linear forms in `t_1..t_d`.
    pub fn generic_element(&self) -> Vec<Vec<MultiPoly>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let coeffs: Vec<Scalar> = self.basis.iter().map(|a| a.get(i, j).clone()).collect();
                        MultiPoly::linear(self.field, &coeffs)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Fixture spaces used across tests, the CLI corpus and the acceptance suite.
pub mod fixtures {
    use super::*;
    use rand::Rng;

    const ENTRY_BOUND: i64 = 3;

    /// All 3x3 skew-symmetric matrices, basis `E12-E21, E13-E31, E23-E32`.
    pub fn skew3(field: Field) -> MatrixSpace {
        let b = [
            [[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
            [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
            [[0, 0, 0], [0, 0, 1], [0, -1, 0]],
        ];
        MatrixSpace::new(b.iter().map(|m| Mat::from_ints(field, m)).collect()).unwrap()
    }

    /// `n x n` matrices vanishing on the top-left `(n-1) x (n-1)` block: last
    /// column `E_{i,n}` for all `i`, then last row `E_{n,j}` for `j < n`.
    pub fn bordered(field: Field, n: usize) -> MatrixSpace {
        let mut basis: Vec<Mat> = (0..n).map(|i| Mat::unit(field, n, n, i, n - 1)).collect();
        basis.extend((0..n - 1).map(|j| Mat::unit(field, n, n, n - 1, j)));
        MatrixSpace::new(basis).unwrap()
    }

    /// The 2x3 pencil `s [[1,0,0],[0,1,0]] + t [[0,1,0],[0,0,1]]`.
    pub fn l2_pencil(field: Field) -> MatrixSpace {
        MatrixSpace::new(vec![
            Mat::from_ints(field, &[[1, 0, 0], [0, 1, 0]]),
            Mat::from_ints(field, &[[0, 1, 0], [0, 0, 1]]),
        ])
        .unwrap()
    }

    /// `d` random matrices sending a random subspace of codimension `k1` into
    /// a random subspace of dimension `k2`, in random bases of `V` and `W`.
    /// `None` when the draw is linearly dependent.
    pub fn random_compression_space<R: Rng + ?Sized>(
        field: Field,
        (m, n, d): (usize, usize, usize),
        (k1, k2): (usize, usize),
        rng: &mut R,
    ) -> Option<MatrixSpace> {
        let basis = (0..d)
            .map(|_| {
                let mut a = Mat::zeros(field, m, n);
                for i in 0..m {
                    for j in 0..n {
                        if i < k2 || j + k1 >= n {
                            a.set(i, j, field.random(rng, ENTRY_BOUND));
                        }
                    }
                }
                a
            })
            .collect();
        let normal = MatrixSpace::new(basis).ok()?;
        let p = Mat::random_invertible(field, m, rng, ENTRY_BOUND);
        let q = Mat::random_invertible(field, n, rng, ENTRY_BOUND);
        normal.transform(&p, &q).ok()
    }

    /// A random `d`-dimensional subspace of the `3 x 3` skew-symmetric
    /// matrices, padded with zeros to `m x n` and put in random bases.
    pub fn random_skew_embedding<R: Rng + ?Sized>(
        field: Field,
        (m, n, d): (usize, usize, usize),
        rng: &mut R,
    ) -> Option<MatrixSpace> {
        assert!(
            m >= 3 && n >= 3 && (1..=3).contains(&d),
            "embedding needs m, n >= 3 and d <= 3"
        );
        let skew = skew3(field);
        let basis = (0..d)
            .map(|_| {
                let c: Vec<Scalar> = (0..3).map(|_| field.random(rng, ENTRY_BOUND)).collect();
                let small = Mat::combination(&c, skew.basis()).expect("three coefficients");
                let mut a = Mat::zeros(field, m, n);
                for i in 0..3 {
                    for j in 0..3 {
                        a.set(i, j, small.get(i, j).clone());
                    }
                }
                a
            })
            .collect();
        let padded = MatrixSpace::new(basis).ok()?;
        let p = Mat::random_invertible(field, m, rng, ENTRY_BOUND);
        let q = Mat::random_invertible(field, n, rng, ENTRY_BOUND);
        padded.transform(&p, &q).ok()
    }

    /// `d` random matrices, each a sum of at most two rank-one matrices. The
    /// span may well have generic rank above 2.
    pub fn random_low_rank_space<R: Rng + ?Sized>(
        field: Field,
        (m, n, d): (usize, usize, usize),
        rng: &mut R,
    ) -> Option<MatrixSpace> {
        let basis = (0..d)
            .map(|_| {
                let r = rng.gen_range(1..=2);
                let x = Mat::random(field, m, r, rng, ENTRY_BOUND);
                let y = Mat::random(field, r, n, rng, ENTRY_BOUND);
                x.mul(&y).expect("inner dimensions agree")
            })
            .collect();
        MatrixSpace::new(basis).ok()
    }

    /// One draw from the three generators above with `m, n <= 4` and `d <= 4`;
    /// the result is not filtered by rank.
    pub fn random_small_space<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Option<MatrixSpace> {
        match rng.gen_range(0..3) {
            0 => {
                let (m, n) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
                let split = [(0, 2), (1, 1), (2, 0)][rng.gen_range(0..3)];
                let free = split.1.min(m) * n + (m - split.1.min(m)) * split.0.min(n);
                let d = rng.gen_range(1..=4usize.min(free));
                random_compression_space(field, (m, n, d), split, rng)
            }
            1 => {
                let (m, n) = (rng.gen_range(3..=4), rng.gen_range(3..=4));
                random_skew_embedding(field, (m, n, rng.gen_range(1..=3)), rng)
            }
            _ => {
                let (m, n) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
                random_low_rank_space(field, (m, n, rng.gen_range(1..=4)), rng)
            }
        }
    }

    /// `span{diag(1,0), diag(0,1)}`.
    pub fn diag_pencil(field: Field) -> MatrixSpace {
        MatrixSpace::new(vec![
            Mat::from_ints(field, &[[1, 0], [0, 0]]),
            Mat::from_ints(field, &[[0, 0], [0, 1]]),
        ])
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_dependent_or_ragged_bases() {
        let q = Field::Rational;
        let a = Mat::from_ints(q, &[[1, 0], [0, 1]]);
        assert_eq!(
            MatrixSpace::new(vec![a.clone(), a.scale(&q.from_i64(2))]),
            Err(Error::DependentBasis)
        );
        assert_eq!(MatrixSpace::new(vec![]), Err(Error::EmptyBasis));
        let b = Mat::from_ints(q, &[[1, 0, 0]]);
        assert!(MatrixSpace::new(vec![a, b]).is_err());
    }

    #[test]
    fn reduction_detects_collapse() {
        let q = Field::Rational;
        let s = MatrixSpace::new(vec![
            Mat::from_ints(q, &[[1, 0], [0, 1]]),
            Mat::from_ints(q, &[[6, 0], [0, 1]]),
        ])
        .unwrap();
        assert_eq!(s.reduce(Field::Prime(5)), Err(Error::BadReduction { prime: 5 }));
        assert!(s.reduce(Field::Prime(7)).is_ok());
    }

    #[test]
    fn fixture_dimensions() {
        let q = Field::Rational;
        assert_eq!(fixtures::bordered(q, 4).dim(), 7);
        assert_eq!(fixtures::skew3(q).dim(), 3);
        let t = fixtures::l2_pencil(q).transpose();
        assert_eq!((t.rows(), t.cols()), (3, 2));
    }
}
