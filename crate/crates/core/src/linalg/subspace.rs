use serde::{Serialize, Serializer};

use super::echelon::{kernel_vectors, rref};
use super::mat::Mat;
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// A linear subspace of `field^ambient`, stored by its canonical reduced
/// echelon basis. Two subspaces are equal iff their canonical bases agree.
///
/// The basis vectors are kept as rows of the reduced row-echelon matrix,
/// which is the transpose of the reduced column-echelon form with basis
/// vectors as columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            basis: (0..ambient).map(|i| unit_vector(field, ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors.
    pub fn from_vectors(field: Field, ambient: usize, vectors: Vec<Vec<Scalar>>) -> Result<Subspace> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        if let Some(s) = vectors.iter().flatten().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field, s.field()));
        }
        let mut basis = vectors;
        let pivots = rref(&mut basis, ambient);
        Ok(Subspace {
            field,
            ambient,
            basis,
            pivots,
        })
    }

    /// Span of standard basis vectors with the given indices.
    pub fn coordinate(field: Field, ambient: usize, indices: &[usize]) -> Subspace {
        let vs = indices.iter().map(|&i| unit_vector(field, ambient, i)).collect();
        Subspace::from_vectors(field, ambient, vs).expect("coordinate vectors are in range")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    /// Canonical basis vectors.
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix, or `None` for the zero space.
    pub fn basis_matrix(&self) -> Option<Mat> {
        if self.basis.is_empty() || self.ambient == 0 {
            return None;
        }
        Some(
            Mat::from_rows(self.field, self.basis.clone())
                .expect("canonical basis is rectangular")
                .transpose(),
        )
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        r.iter().all(Scalar::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && other.basis.iter().all(|v| self.contains(v))
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {} differ",
                self.ambient, other.ambient
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::from_vectors(self.field, self.ambient, vs)
    }

    /// Intersection via the kernel of `[U | -V]`: a kernel vector `(a, b)`
    /// gives the common element `U a = V b`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let (r, s) = (self.dim(), other.dim());
        if r == 0 || s == 0 {
            return Ok(Subspace::zero(self.field, self.ambient));
        }
        let mut rows: Vec<Vec<Scalar>> = (0..self.ambient)
            .map(|i| {
                self.basis
                    .iter()
                    .map(|u| u[i].clone())
                    .chain(other.basis.iter().map(|v| v[i].neg()))
                    .collect()
            })
            .collect();
        let pivots = rref(&mut rows, r + s);
        let kernel = kernel_vectors(self.field, &rows, &pivots, r + s);
        let vs = kernel
            .iter()
            .map(|k| combine(self.field, self.ambient, &k[..r], &self.basis))
            .collect();
        Subspace::from_vectors(self.field, self.ambient, vs)
    }

    /// Linear functionals vanishing on this subspace, as a subspace of the dual.
    pub fn annihilator(&self) -> Subspace {
        let vs = kernel_vectors(self.field, &self.basis, &self.pivots, self.ambient);
        Subspace::from_vectors(self.field, self.ambient, vs).expect("kernel vectors fit")
    }

    /// `A(U)` for a matrix with `cols == ambient`.
    pub fn image_under(&self, a: &Mat) -> Result<Subspace> {
        if a.cols() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "matrix with {} columns applied to a subspace of F^{}",
                a.cols(),
                self.ambient
            )));
        }
        let vs = self.basis.iter().map(|v| a.mul_vec(v)).collect();
        Subspace::from_vectors(self.field, a.rows(), vs)
    }

    /// Span of the first `k` canonical basis vectors; still canonical.
    pub fn truncate(&self, k: usize) -> Subspace {
        let k = k.min(self.dim());
        Subspace {
            field: self.field,
            ambient: self.ambient,
            basis: self.basis[..k].to_vec(),
            pivots: self.pivots[..k].to_vec(),
        }
    }

    /// Pads with standard basis vectors, in index order, up to dimension `k`.
    pub fn extend_to(&self, k: usize) -> Subspace {
        let mut out = self.clone();
        for i in 0..self.ambient {
            if out.dim() >= k {
                break;
            }
            let e = unit_vector(self.field, self.ambient, i);
            if !out.contains(&e) {
                let mut vs = out.basis.clone();
                vs.push(e);
                out = Subspace::from_vectors(self.field, self.ambient, vs).expect("same ambient");
            }
        }
        out
    }

    pub fn reduce(&self, target: Field) -> Result<Subspace> {
        let vs = self
            .basis
            .iter()
            .map(|v| v.iter().map(|s| s.reduce(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Subspace::from_vectors(target, self.ambient, vs)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

/// The standard basis vector `e_i` of `F^n`.
pub fn unit_vector(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    (0..n)
        .map(|j| if i == j { field.one() } else { field.zero() })
        .collect()
}

fn combine(field: Field, n: usize, coeffs: &[Scalar], vs: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); n];
    for (c, v) in coeffs.iter().zip(vs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.add(&c.mul(x));
        }
    }
    out
}

pub fn subspace_sum(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    u.sum(v)
}

pub fn subspace_intersect(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    u.intersect(v)
}

/// Largest `U` with `A(U) ⊆ W`, computed as the kernel of `C A` where the rows
/// of `C` span the annihilator of `W`.
pub fn preimage_subspace(a: &Mat, w: &Subspace) -> Result<Subspace> {
    if w.ambient() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "subspace of F^{} but matrix has {} rows",
            w.ambient(),
            a.rows()
        )));
    }
    let ann = w.annihilator();
    if ann.dim() == 0 {
        return Ok(Subspace::full(a.field(), a.cols()));
    }
    let c = Mat::from_rows(a.field(), ann.basis().to_vec())?;
    Ok(c.mul(a)?.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    fn span(ambient: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::from_vectors(Q, ambient, vs.iter().map(|x| v(x)).collect()).unwrap()
    }

    #[test]
    fn sum_examples() {
        let e1 = span(3, &[&[1, 0, 0]]);
        let e2 = span(3, &[&[0, 1, 0]]);
        assert_eq!(subspace_sum(&e1, &e2).unwrap(), span(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(subspace_sum(&e1, &e1).unwrap(), e1);
        let a = span(3, &[&[1, 1, 0]]);
        let b = span(3, &[&[1, -1, 0]]);
        assert_eq!(subspace_sum(&a, &b).unwrap(), span(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert!(subspace_sum(&e1, &Subspace::zero(Q, 2)).is_err());
    }

    #[test]
    fn intersect_examples() {
        let a = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = span(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(subspace_intersect(&a, &b).unwrap(), span(3, &[&[0, 1, 0]]));
        assert_eq!(subspace_intersect(&a, &Subspace::zero(Q, 3)).unwrap().dim(), 0);
        // coordinate planes x=0, y=0, z=0
        let px = span(3, &[&[0, 1, 0], &[0, 0, 1]]);
        let py = span(3, &[&[1, 0, 0], &[0, 0, 1]]);
        let pz = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let xy = px.intersect(&py).unwrap();
        assert_eq!(xy, span(3, &[&[0, 0, 1]]));
        assert_eq!(xy.intersect(&pz).unwrap().dim(), 0);
        assert!(a.intersect(&Subspace::zero(Q, 4)).is_err());
    }

    #[test]
    fn preimage_examples() {
        let w = span(3, &[&[1, 2, 3]]);
        assert_eq!(preimage_subspace(&Mat::identity(Q, 3), &w).unwrap(), w);
        let a = Mat::from_ints(Q, &[[1, 0, 2], [0, 1, 1]]);
        assert_eq!(
            preimage_subspace(&a, &Subspace::full(Q, 2)).unwrap(),
            Subspace::full(Q, 3)
        );
        let a = Mat::from_ints(Q, &[[1, 0], [0, 0]]);
        let e2 = span(2, &[&[0, 1]]);
        assert_eq!(preimage_subspace(&a, &e2).unwrap(), e2);
        assert!(preimage_subspace(&a, &Subspace::zero(Q, 3)).is_err());
    }

    #[test]
    fn extend_and_truncate() {
        let a = span(4, &[&[0, 1, 1, 0]]);
        let ext = a.extend_to(3);
        assert_eq!(ext.dim(), 3);
        assert!(ext.contains_subspace(&a));
        assert_eq!(Subspace::full(Q, 4).truncate(2), Subspace::coordinate(Q, 4, &[0, 1]));
    }

    fn random_subspace(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Subspace {
        let k = rng.gen_range(0..=n);
        let vs = (0..k).map(|_| (0..n).map(|_| field.random(rng, 2)).collect()).collect();
        Subspace::from_vectors(field, n, vs).unwrap()
    }

    proptest! {
        #[test]
        fn grassmann_identity(seed in any::<u64>(), n in 1usize..6, prime in prop::bool::ANY) {
            let field = if prime { Field::Prime(3) } else { Q };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_subspace(&mut rng, field, n);
            let w = random_subspace(&mut rng, field, n);
            let s = u.sum(&w).unwrap();
            let i = u.intersect(&w).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
            prop_assert!(u.contains_subspace(&i) && w.contains_subspace(&i));
            prop_assert!(s.contains_subspace(&u) && s.contains_subspace(&w));
        }

        #[test]
        fn canonical_form_is_idempotent(seed in any::<u64>(), n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_subspace(&mut rng, Q, n);
            let again = Subspace::from_vectors(Q, n, u.basis().to_vec()).unwrap();
            prop_assert_eq!(&again, &u);
            // a different spanning set of the same space lands on the same basis
            let doubled: Vec<Vec<Scalar>> = u.basis().iter().rev()
                .map(|b| b.iter().map(|x| x.add(x)).collect()).collect();
            prop_assert_eq!(Subspace::from_vectors(Q, n, doubled).unwrap(), u);
        }

        #[test]
        fn preimage_is_maximal(seed in any::<u64>(), m in 1usize..5, n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let field = Field::Prime(5);
            let a = Mat::random(field, m, n, &mut rng, 2);
            let w = random_subspace(&mut rng, field, m);
            let pre = preimage_subspace(&a, &w).unwrap();
            prop_assert!(w.contains_subspace(&pre.image_under(&a).unwrap()));
            prop_assert!(pre.contains_subspace(&a.kernel()));
            for _ in 0..20 {
                let u: Vec<Scalar> = (0..n).map(|_| field.random(&mut rng, 2)).collect();
                prop_assert_eq!(w.contains(&a.mul_vec(&u)), pre.contains(&u));
            }
        }
    }
}
