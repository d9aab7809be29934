use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use super::echelon::{kernel_vectors, rref};
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Dense row-major matrix over a single exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Rank together with canonical kernel and image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankFactor {
    pub rank: usize,
    pub kernel: Subspace,
    pub image: Subspace,
}

impl Mat {
    pub fn from_flat(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Mat> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field, bad.field()));
        }
        Ok(Mat {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Mat> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Mat::from_flat(field, m, n, rows.into_iter().flatten().collect())
    }

    /// Integer matrix over `field`, mostly for tests and fixtures.
    pub fn from_ints<R: AsRef<[i64]>>(field: Field, rows: &[R]) -> Mat {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Mat::from_rows(field, rows).expect("well-formed integer matrix")
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Mat {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Matrix unit `E_ij`.
    pub fn unit(field: Field, rows: usize, cols: usize, i: usize, j: usize) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        m.set(i, j, field.one());
        m
    }

    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R, bound: i64) -> Mat {
        let data = (0..rows * cols).map(|_| field.random(rng, bound)).collect();
        Mat {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Random invertible matrix; resamples until the determinant is nonzero.
    pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R, bound: i64) -> Mat {
        loop {
            let m = Mat::random(field, n, n, rng, bound);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Mat {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, Scalar::add)
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, Scalar::sub)
    }

    fn zip_with(&self, other: &Mat, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Mat> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "shapes {:?} and {:?} differ",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Mat) -> Result<Mat> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Linear combination `Σ c_i M_i` of same-shape matrices.
    pub fn combination(coeffs: &[Scalar], mats: &[Mat]) -> Result<Mat> {
        let first = mats.first().ok_or(Error::EmptyBasis)?;
        if coeffs.len() != mats.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} matrices",
                coeffs.len(),
                mats.len()
            )));
        }
        let mut out = Mat::zeros(first.field, first.rows, first.cols);
        for (c, m) in coeffs.iter().zip(mats) {
            if c.is_zero() {
                continue;
            }
            if m.shape() != first.shape() {
                return Err(Error::DimensionMismatch("matrices of different shapes".into()));
            }
            for (o, a) in out.data.iter_mut().zip(&m.data) {
                if !a.is_zero() {
                    *o = o.add(&c.mul(a));
                }
            }
        }
        Ok(out)
    }

    /// Entry-wise reduction into `target` (identity when the field already matches).
    pub fn reduce(&self, target: Field) -> Result<Mat> {
        if target == self.field {
            return Ok(self.clone());
        }
        let data = self.data.iter().map(|s| s.reduce(target)).collect::<Result<Vec<_>>>()?;
        Ok(Mat {
            field: target,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vecs();
        rref(&mut rows, self.cols).len()
    }

    pub fn rank_factor(&self) -> RankFactor {
        let mut rows = self.row_vecs();
        let pivots = rref(&mut rows, self.cols);
        let kernel = Subspace::from_vectors(
            self.field,
            self.cols,
            kernel_vectors(self.field, &rows, &pivots, self.cols),
        )
        .expect("kernel vectors have the ambient length");
        let image = Subspace::from_vectors(self.field, self.rows, self.transpose().row_vecs())
            .expect("columns have the codomain length");
        RankFactor {
            rank: pivots.len(),
            kernel,
            image,
        }
    }

    pub fn kernel(&self) -> Subspace {
        self.rank_factor().kernel
    }

    pub fn image(&self) -> Subspace {
        Subspace::from_vectors(self.field, self.rows, self.transpose().row_vecs())
            .expect("columns have the codomain length")
    }

    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { self.field.one() } else { self.field.zero() }));
                r
            })
            .collect();
        let pivots = rref(&mut aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let data = aug.into_iter().flat_map(|r| r[n..].to_vec()).collect();
        Ok(Mat {
            field: self.field,
            rows: n,
            cols: n,
            data,
        })
    }

    /// Entries as strings in row-major order.
    pub fn to_strings(&self) -> Vec<String> {
        self.data.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.data.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    fn e(i: usize, n: usize) -> Vec<Scalar> {
        (0..n).map(|j| Q.from_i64((i == j) as i64)).collect()
    }

    #[test]
    fn zero_matrix_rank_factor() {
        let rf = Mat::zeros(Q, 3, 3).rank_factor();
        assert_eq!(rf.rank, 0);
        assert_eq!(rf.kernel, Subspace::full(Q, 3));
        assert_eq!(rf.image, Subspace::zero(Q, 3));
    }

    #[test]
    fn identity_rank_factor() {
        let rf = Mat::identity(Q, 3).rank_factor();
        assert_eq!(rf.rank, 3);
        assert_eq!(rf.kernel.dim(), 0);
        assert_eq!(rf.image, Subspace::full(Q, 3));
    }

    #[test]
    fn skew_block_rank_factor() {
        let a = Mat::from_ints(Q, &[[0, 1, 0], [-1, 0, 0], [0, 0, 0]]);
        let rf = a.rank_factor();
        assert_eq!(rf.rank, 2);
        assert_eq!(rf.kernel, Subspace::from_vectors(Q, 3, vec![e(2, 3)]).unwrap());
        assert_eq!(rf.image, Subspace::from_vectors(Q, 3, vec![e(0, 3), e(1, 3)]).unwrap());
    }

    #[test]
    fn rank_of_transpose_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [Q, Field::Prime(5)] {
            for _ in 0..40 {
                let m = rng.gen_range(1..6);
                let n = rng.gen_range(1..6);
                // low-rank products make the check non-trivial
                let k = rng.gen_range(1..4);
                let a = Mat::random(field, m, k, &mut rng, 3)
                    .mul(&Mat::random(field, k, n, &mut rng, 3))
                    .unwrap();
                let rf = a.rank_factor();
                assert_eq!(rf.rank, a.transpose().rank());
                assert_eq!(rf.rank + rf.kernel.dim(), n);
                assert_eq!(rf.image.dim(), rf.rank);
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = Mat::random_invertible(Q, 4, &mut rng, 3);
        let pi = p.inverse().unwrap();
        assert_eq!(p.mul(&pi).unwrap(), Mat::identity(Q, 4));
        let s = Mat::from_ints(Q, &[[1, 2], [2, 4]]);
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn rejects_empty_and_mixed() {
        assert_eq!(Mat::from_flat(Q, 0, 2, vec![]), Err(Error::EmptyMatrix));
        let f5 = Field::Prime(5);
        assert!(Mat::from_flat(Q, 1, 2, vec![Q.one(), f5.one()]).is_err());
    }
}
