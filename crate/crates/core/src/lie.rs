//! Lie algebras given by structure constants, and their matrix representations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::scalar::{Field, Scalar};

const WITNESS_ENTRY_BOUND: i64 = 10;

/// Structure constants `c[i][j][k]` with `[e_i, e_j] = Σ_k c[i][j][k] e_k`,
/// stored for every ordered pair and antisymmetric by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    field: Field,
    dim: usize,
    constants: Vec<Vec<Vec<Scalar>>>,
}

impl LieAlgebra {
    /// Builds an algebra from brackets `[e_i, e_j]` of basis pairs (0-based).
    /// Pairs given with `i > j` are stored as their negatives; omitted pairs
    /// bracket to zero.
    pub fn new(field: Field, dim: usize, brackets: Vec<(usize, usize, Vec<Scalar>)>) -> Result<LieAlgebra> {
        if dim == 0 {
            return Err(Error::BadBracket("algebra dimension must be positive".into()));
        }
        let mut g = LieAlgebra::abelian(field, dim);
        let mut seen = vec![vec![false; dim]; dim];
        for (i, j, coeffs) in brackets {
            if i >= dim || j >= dim {
                return Err(Error::BadBracket(format!(
                    "basis index out of range in [e{}, e{}]",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::BadBracket(format!(
                    "[e{0}, e{0}] is zero by antisymmetry",
                    i + 1
                )));
            }
            if coeffs.len() != dim {
                return Err(Error::BadBracket(format!(
                    "[e{}, e{}] has {} coefficients, expected {dim}",
                    i + 1,
                    j + 1,
                    coeffs.len()
                )));
            }
            if let Some(c) = coeffs.iter().find(|c| c.field() != field) {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            let (lo, hi) = (i.min(j), i.max(j));
            if seen[lo][hi] {
                return Err(Error::BadBracket(format!("[e{}, e{}] given twice", lo + 1, hi + 1)));
            }
            seen[lo][hi] = true;
            g.constants[i][j] = coeffs.clone();
            g.constants[j][i] = coeffs.iter().map(Scalar::neg).collect();
        }
        Ok(g)
    }

    pub fn abelian(field: Field, dim: usize) -> LieAlgebra {
        LieAlgebra {
            field,
            dim,
            constants: vec![vec![vec![field.zero(); dim]; dim]; dim],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient vector of `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Scalar] {
        &self.constants[i][j]
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.constants[i][j][k]
    }

    /// Bilinear extension of the basis brackets.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                if i == j {
                    continue;
                }
                let w = xi.mul(yj);
                for (o, c) in out.iter_mut().zip(&self.constants[i][j]) {
                    if !c.is_zero() {
                        *o = o.add(&w.mul(c));
                    }
                }
            }
        }
        out
    }

    /// Nonzero brackets `[e_i, e_j]` with `i < j` (0-based).
    pub fn upper_brackets(&self) -> Vec<(usize, usize, Vec<Scalar>)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if self.constants[i][j].iter().any(|c| !c.is_zero()) {
                    out.push((i, j, self.constants[i][j].clone()));
                }
            }
        }
        out
    }

    pub fn reduce(&self, target: Field) -> Result<LieAlgebra> {
        let brackets = self
            .upper_brackets()
            .into_iter()
            .map(|(i, j, c)| Ok((i, j, c.iter().map(|x| x.reduce(target)).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<Vec<_>>>()?;
        LieAlgebra::new(target, self.dim, brackets)
    }
}

/// JSON form: 1-based indices, only nonzero upper brackets.
impl Serialize for LieAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Bracket<'a>(usize, usize, &'a [Scalar]);
        impl Serialize for Bracket<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("i", &(self.0 + 1))?;
                m.serialize_entry("j", &(self.1 + 1))?;
                m.serialize_entry("coeffs", self.2)?;
                m.end()
            }
        }
        let upper = self.upper_brackets();
        let brackets: Vec<Bracket> = upper.iter().map(|(i, j, c)| Bracket(*i, *j, c)).collect();
        let mut st = s.serialize_struct("LieAlgebra", 3)?;
        st.serialize_field("field", &self.field)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("brackets", &brackets)?;
        st.end()
    }
}

/// Exact Jacobi check on all basis triples `i < j < k`; triples with a
/// repeated index hold by antisymmetry.
pub fn verify_lie_algebra(g: &LieAlgebra) -> bool {
    let n = g.dim;
    let e = |i: usize| crate::linalg::unit_vector(g.field, n, i);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = g.bracket(&e(i), g.basis_bracket(j, k));
                let b = g.bracket(&e(j), g.basis_bracket(k, i));
                let c = g.bracket(&e(k), g.basis_bracket(i, j));
                if a.iter().zip(&b).zip(&c).any(|((x, y), z)| !x.add(y).add(z).is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedSeries {
    pub dims: Vec<usize>,
    pub solvable: bool,
}

/// Dimensions of `g ⊇ [g,g] ⊇ ...`, stopping at 0 or when the dimension repeats.
pub fn derived_series(g: &LieAlgebra) -> DerivedSeries {
    let mut current = Subspace::full(g.field, g.dim);
    let mut dims = vec![current.dim()];
    while current.dim() > 0 {
        let basis = current.basis();
        let mut brackets = Vec::new();
        for (a, x) in basis.iter().enumerate() {
            for y in &basis[a + 1..] {
                brackets.push(g.bracket(x, y));
            }
        }
        let next = Subspace::from_vectors(g.field, g.dim, brackets).expect("brackets have length dim");
        let repeated = next.dim() == current.dim();
        dims.push(next.dim());
        current = next;
        if repeated {
            break;
        }
    }
    DerivedSeries {
        solvable: current.dim() == 0,
        dims,
    }
}

/// Matrices `ρ_1..ρ_n` on `V = F^dim_v`, one per basis element of the algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub algebra: LieAlgebra,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    pub rho: Vec<Mat>,
}

impl Representation {
    /// Checks shapes and fields only; the homomorphism property is
    /// [`verify_representation`].
    pub fn new(algebra: LieAlgebra, rho: Vec<Mat>) -> Result<Representation> {
        if rho.len() != algebra.dim() {
            return Err(Error::BadRepresentation(format!(
                "{} matrices for an algebra of dimension {}",
                rho.len(),
                algebra.dim()
            )));
        }
        let dim_v = rho[0].rows();
        for (i, r) in rho.iter().enumerate() {
            if r.shape() != (dim_v, dim_v) {
                return Err(Error::BadRepresentation(format!(
                    "rho[{}] has shape {:?}, expected {dim_v}x{dim_v}",
                    i + 1,
                    r.shape()
                )));
            }
            if r.field() != algebra.field() {
                return Err(Error::FieldMismatch(algebra.field(), r.field()));
            }
        }
        Ok(Representation { algebra, dim_v, rho })
    }

    /// Change of basis of `V`: `ρ_i ↦ P ρ_i P^-1`.
    pub fn conjugate(&self, p: &Mat) -> Result<Representation> {
        let inv = p.inverse()?;
        let rho = self
            .rho
            .iter()
            .map(|r| p.mul(r)?.mul(&inv))
            .collect::<Result<Vec<_>>>()?;
        Representation::new(self.algebra.clone(), rho)
    }

    /// `ρ_1 ⊕ σ_1, ..., ρ_n ⊕ σ_n` for two representations of the same algebra.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if self.algebra != other.algebra {
            return Err(Error::BadRepresentation(
                "direct sum of representations of different algebras".into(),
            ));
        }
        let (a, b) = (self.dim_v, other.dim_v);
        let field = self.algebra.field();
        let rho = self
            .rho
            .iter()
            .zip(&other.rho)
            .map(|(r, s)| {
                let mut m = Mat::zeros(field, a + b, a + b);
                for i in 0..a {
                    for j in 0..a {
                        m.set(i, j, r.get(i, j).clone());
                    }
                }
                for i in 0..b {
                    for j in 0..b {
                        m.set(a + i, a + j, s.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        Representation::new(self.algebra.clone(), rho)
    }
}

/// Exact check of `[ρ_i, ρ_j] = Σ_k c_ij^k ρ_k` for all `i < j`.
pub fn verify_representation(pi: &Representation) -> bool {
    let g = &pi.algebra;
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            let lhs = pi.rho[i].commutator(&pi.rho[j]).expect("square matrices of equal size");
            let rhs = Mat::combination(g.basis_bracket(i, j), &pi.rho).expect("one coefficient per matrix");
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// `ad(e_i)`, whose column `j` is the coefficient vector of `[e_i, e_j]`.
pub fn adjoint_representation(g: &LieAlgebra) -> Representation {
    let n = g.dim();
    let rho = (0..n)
        .map(|i| {
            let mut m = Mat::zeros(g.field(), n, n);
            for j in 0..n {
                for k in 0..n {
                    m.set(k, j, g.constant(i, j, k).clone());
                }
            }
            m
        })
        .collect();
    Representation::new(g.clone(), rho).expect("n matrices of size n")
}

/// `T_n`: upper triangular `n x n` matrices with the commutator bracket on the
/// basis `E_ij` (`i <= j`, lexicographic), together with its defining
/// representation.
pub fn upper_triangular_algebra(n: usize, field: Field) -> Result<(LieAlgebra, Representation)> {
    if n == 0 {
        return Err(Error::BadBracket("T_n needs n >= 1".into()));
    }
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mats: Vec<Mat> = positions.iter().map(|&(i, j)| Mat::unit(field, n, n, i, j)).collect();
    let mut brackets = Vec::new();
    for a in 0..mats.len() {
        for b in a + 1..mats.len() {
            let c = mats[a].commutator(&mats[b])?;
            if !c.is_zero() {
                brackets.push((a, b, positions.iter().map(|&(i, j)| c.get(i, j).clone()).collect()));
            }
        }
    }
    let g = LieAlgebra::new(field, mats.len(), brackets)?;
    let rep = Representation::new(g.clone(), mats)?;
    Ok((g, rep))
}

/// Pulls the bracket of `target` back along the bijection whose columns are
/// the images `Φ e_i`: `[e_i, e_j] = Φ^-1 [Φ e_i, Φ e_j]`.
pub fn transport_bracket(phi: &Mat, target: &LieAlgebra) -> Result<LieAlgebra> {
    let n = target.dim();
    if phi.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "transport map has shape {:?}, target algebra has dimension {n}",
            phi.shape()
        )));
    }
    if phi.field() != target.field() {
        return Err(Error::FieldMismatch(target.field(), phi.field()));
    }
    let inv = phi.inverse()?;
    let images: Vec<Vec<Scalar>> = (0..n).map(|i| phi.column(i)).collect();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = inv.mul_vec(&target.bracket(&images[i], &images[j]));
            if c.iter().any(|x| !x.is_zero()) {
                brackets.push((i, j, c));
            }
        }
    }
    LieAlgebra::new(target.field(), n, brackets)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Irreducibility {
    pub irreducible: bool,
    pub enveloping_dim: usize,
}

/// Burnside criterion: `V` is absolutely irreducible iff the unital
/// associative algebra generated by the `ρ_i` is all of `End(V)`.
pub fn is_absolutely_irreducible(pi: &Representation) -> Irreducibility {
    let field = pi.algebra.field();
    let v = pi.dim_v;
    let flat = |m: &Mat| m.entries().to_vec();
    let identity = Mat::identity(field, v);
    let mut span = Subspace::from_vectors(field, v * v, vec![flat(&identity)]).expect("length v^2");
    let mut frontier = vec![identity];
    while let Some(m) = frontier.pop() {
        for r in &pi.rho {
            let prod = r.mul(&m).expect("square matrices of equal size");
            let entries = flat(&prod);
            if !span.contains(&entries) {
                span = span
                    .sum(&Subspace::from_vectors(field, v * v, vec![entries]).expect("length v^2"))
                    .expect("same ambient");
                frontier.push(prod);
            }
        }
    }
    Irreducibility {
        irreducible: span.dim() == v * v,
        enveloping_dim: span.dim(),
    }
}

/// Span of the orbit of `x` under the algebra generated by the `ρ_i`.
pub fn cyclic_submodule(pi: &Representation, x: &[Scalar]) -> Subspace {
    let field = pi.algebra.field();
    let mut span = Subspace::from_vectors(field, pi.dim_v, vec![x.to_vec()]).expect("length dim V");
    let mut frontier = vec![x.to_vec()];
    while let Some(y) = frontier.pop() {
        for r in &pi.rho {
            let z = r.mul_vec(&y);
            if !span.contains(&z) {
                span = span
                    .sum(&Subspace::from_vectors(field, pi.dim_v, vec![z.clone()]).expect("length dim V"))
                    .expect("same ambient");
                frontier.push(z);
            }
        }
    }
    span
}

/// A proper nonzero invariant subspace found among cyclic submodules of the
/// basis vectors and `retries` seeded random vectors. Best effort: an
/// absolutely reducible representation may have no invariant subspace
/// defined over the base field.
pub fn invariant_subspace_witness(pi: &Representation, seed: u64, retries: usize) -> Option<Subspace> {
    let field = pi.algebra.field();
    let v = pi.dim_v;
    let proper = |s: &Subspace| s.dim() > 0 && s.dim() < v;
    if let Some(s) = (0..v)
        .map(|i| cyclic_submodule(pi, &crate::linalg::unit_vector(field, v, i)))
        .find(proper)
    {
        return Some(s);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..retries)
        .map(|_| {
            (0..v)
                .map(|_| field.random(&mut rng, WITNESS_ENTRY_BOUND))
                .collect::<Vec<_>>()
        })
        .filter(|x| x.iter().any(|c| !c.is_zero()))
        .map(|x| cyclic_submodule(pi, &x))
        .find(proper)
}

/// Named algebras used by tests, the CLI corpus and the bridge.
pub mod fixtures {
    use super::*;

    fn vec_of(field: Field, c: &[i64]) -> Vec<Scalar> {
        c.iter().map(|&x| field.from_i64(x)).collect()
    }

    /// `[e3, e1] = e1`, `[e3, e2] = e2`, `[e1, e2] = 0`.
    pub fn scaling3(field: Field) -> LieAlgebra {
        scaling_algebra(field, 3)
    }

    /// `[e_n, e_i] = e_i` for `i < n`, all other brackets zero. Solvable with
    /// derived dimensions `[n, n-1, 0]` for `n >= 2`.
    pub fn scaling_algebra(field: Field, n: usize) -> LieAlgebra {
        let brackets = (0..n.saturating_sub(1))
            .map(|i| (n - 1, i, crate::linalg::unit_vector(field, n, i)))
            .collect();
        LieAlgebra::new(field, n, brackets).expect("valid indices")
    }

    /// `sl_2` on the basis `(h, e, f)`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2(field: Field) -> LieAlgebra {
        LieAlgebra::new(
            field,
            3,
            vec![
                (0, 1, vec_of(field, &[0, 2, 0])),
                (0, 2, vec_of(field, &[0, 0, -2])),
                (1, 2, vec_of(field, &[1, 0, 0])),
            ],
        )
        .expect("valid brackets")
    }

    /// The one-dimensional algebra acting on a line by `ρ_1 = [c]`.
    pub fn line_representation(field: Field, c: i64) -> Representation {
        Representation::new(LieAlgebra::abelian(field, 1), vec![Mat::from_ints(field, &[[c]])])
            .expect("1x1 matrix for a 1-dim algebra")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn q(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn scaling3_is_a_solvable_lie_algebra() {
        let g = fixtures::scaling3(Q);
        assert_eq!(g.basis_bracket(2, 0), q(&[1, 0, 0]).as_slice());
        assert_eq!(g.basis_bracket(0, 2), q(&[-1, 0, 0]).as_slice());
        assert!(verify_lie_algebra(&g));
        assert_eq!(
            derived_series(&g),
            DerivedSeries {
                dims: vec![3, 2, 0],
                solvable: true
            }
        );
        assert!(verify_lie_algebra(&LieAlgebra::abelian(Q, 4)));
    }

    #[test]
    fn perturbing_scaling3_breaks_jacobi() {
        let g = fixtures::scaling3(Q);
        let mut failures = 0;
        for i in 0..3 {
            for j in i + 1..3 {
                for k in 0..3 {
                    let mut brackets = g.upper_brackets();
                    match brackets.iter_mut().find(|(a, b, _)| (*a, *b) == (i, j)) {
                        Some((_, _, c)) => c[k] = c[k].add(&Q.one()),
                        None => {
                            let mut c = q(&[0, 0, 0]);
                            c[k] = Q.one();
                            brackets.push((i, j, c));
                        }
                    }
                    if !verify_lie_algebra(&LieAlgebra::new(Q, 3, brackets).unwrap()) {
                        failures += 1;
                    }
                }
            }
        }
        assert!(failures > 0);
        let bad = LieAlgebra::new(
            Q,
            3,
            vec![(2, 0, q(&[1, 0, 0])), (2, 1, q(&[0, 1, 0])), (0, 1, q(&[0, 0, 1]))],
        )
        .unwrap();
        assert!(!verify_lie_algebra(&bad));
    }

    #[test]
    fn malformed_brackets_are_rejected() {
        assert!(LieAlgebra::new(Q, 2, vec![(0, 0, q(&[1, 0]))]).is_err());
        assert!(LieAlgebra::new(Q, 2, vec![(0, 1, q(&[1]))]).is_err());
        assert!(LieAlgebra::new(Q, 2, vec![(0, 1, q(&[1, 0])), (1, 0, q(&[1, 0]))]).is_err());
        assert!(LieAlgebra::new(Q, 0, vec![]).is_err());
    }

    #[test]
    fn sl2_is_perfect() {
        let g = fixtures::sl2(Q);
        assert!(verify_lie_algebra(&g));
        assert_eq!(derived_series(&g).dims, vec![3, 3]);
        assert!(!derived_series(&g).solvable);
    }

    #[test]
    fn upper_triangular_series() {
        let (t1, _) = upper_triangular_algebra(1, Q).unwrap();
        assert_eq!(t1.dim(), 1);
        assert!(t1.upper_brackets().is_empty());
        let (t2, taut) = upper_triangular_algebra(2, Q).unwrap();
        assert_eq!(t2.dim(), 3);
        assert_eq!(derived_series(&t2).dims, vec![3, 1, 0]);
        assert!(verify_representation(&taut));
        let (t3, taut3) = upper_triangular_algebra(3, Q).unwrap();
        assert_eq!(derived_series(&t3).dims, vec![6, 3, 1, 0]);
        assert!(verify_lie_algebra(&t3));
        assert!(verify_representation(&taut3));
    }

    #[test]
    fn transport_preserves_structure() {
        let (t2, _) = upper_triangular_algebra(2, Q).unwrap();
        assert_eq!(transport_bracket(&Mat::identity(Q, 3), &t2).unwrap(), t2);
        let phi = Mat::from_ints(Q, &[[1, 2, 0], [0, 1, 3], [1, 0, 1]]);
        let g = transport_bracket(&phi, &t2).unwrap();
        assert!(verify_lie_algebra(&g));
        assert_eq!(derived_series(&g).dims, vec![3, 1, 0]);
        let ab = transport_bracket(&phi, &LieAlgebra::abelian(Q, 3)).unwrap();
        assert!(ab.upper_brackets().is_empty());
        let singular = Mat::from_ints(Q, &[[1, 2, 0], [2, 4, 0], [0, 0, 1]]);
        assert_eq!(transport_bracket(&singular, &t2), Err(Error::Singular));
    }

    #[test]
    fn adjoint_of_scaling3() {
        let g = fixtures::scaling3(Q);
        let ad = adjoint_representation(&g);
        assert_eq!(ad.rho[2], Mat::from_ints(Q, &[[1, 0, 0], [0, 1, 0], [0, 0, 0]]));
        assert!(verify_representation(&ad));
        let (t2, _) = upper_triangular_algebra(2, Q).unwrap();
        assert!(verify_representation(&adjoint_representation(&t2)));
    }

    #[test]
    fn shifted_representation_fails() {
        let ad = adjoint_representation(&fixtures::scaling3(Q));
        let id = Mat::identity(Q, 3);
        let shifted =
            Representation::new(ad.algebra.clone(), ad.rho.iter().map(|r| r.add(&id).unwrap()).collect()).unwrap();
        assert!(!verify_representation(&shifted));
    }

    #[test]
    fn burnside_dimensions() {
        let line = fixtures::line_representation(Q, 5);
        assert_eq!(
            is_absolutely_irreducible(&line),
            Irreducibility {
                irreducible: true,
                enveloping_dim: 1
            }
        );
        let (_, taut) = upper_triangular_algebra(2, Q).unwrap();
        let r = is_absolutely_irreducible(&taut);
        assert_eq!((r.irreducible, r.enveloping_dim), (false, 3));
        let ad = adjoint_representation(&fixtures::scaling3(Q));
        let r = is_absolutely_irreducible(&ad);
        assert!(!r.irreducible && r.enveloping_dim < 9);
        // the defining representation of sl_2 generates all of End(Q^2)
        let sl2 = fixtures::sl2(Q);
        let defining = Representation::new(
            sl2,
            vec![
                Mat::from_ints(Q, &[[1, 0], [0, -1]]),
                Mat::from_ints(Q, &[[0, 1], [0, 0]]),
                Mat::from_ints(Q, &[[0, 0], [1, 0]]),
            ],
        )
        .unwrap();
        assert!(verify_representation(&defining));
        assert_eq!(is_absolutely_irreducible(&defining).enveloping_dim, 4);
    }

    #[test]
    fn rotation_is_irreducible_without_rational_witness() {
        // x -> [[0,-1],[1,0]] is reducible over C but has no rational invariant line
        let pi = Representation::new(LieAlgebra::abelian(Q, 1), vec![Mat::from_ints(Q, &[[0, -1], [1, 0]])]).unwrap();
        let r = is_absolutely_irreducible(&pi);
        assert_eq!((r.irreducible, r.enveloping_dim), (false, 2));
        assert_eq!(invariant_subspace_witness(&pi, 0, 8), None);
    }

    #[test]
    fn witnesses() {
        let (_, taut) = upper_triangular_algebra(2, Q).unwrap();
        assert_eq!(
            invariant_subspace_witness(&taut, 0, 4),
            Some(Subspace::coordinate(Q, 2, &[0]))
        );
        let a = fixtures::line_representation(Q, 1);
        let b = fixtures::line_representation(Q, 2);
        let sum = a.direct_sum(&b).unwrap();
        assert!(verify_representation(&sum));
        let w = invariant_subspace_witness(&sum, 0, 4).unwrap();
        assert_eq!(w.dim(), 1);
        assert!(w == Subspace::coordinate(Q, 2, &[0]) || w == Subspace::coordinate(Q, 2, &[1]));
    }

    #[test]
    fn conjugated_triangular_reps_of_solvable_algebras_are_reducible() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (_, t2) = upper_triangular_algebra(2, Q).unwrap();
        let (_, t3) = upper_triangular_algebra(3, Q).unwrap();
        let ad1 = adjoint_representation(&fixtures::scaling3(Q));
        for rep in [t2, t3, ad1] {
            assert!(derived_series(&rep.algebra).solvable);
            for _ in 0..5 {
                let p = Mat::random_invertible(Q, rep.dim_v, &mut rng, 4);
                let c = rep.conjugate(&p).unwrap();
                assert!(verify_representation(&c));
                assert!(!is_absolutely_irreducible(&c).irreducible);
            }
        }
    }

    #[test]
    fn finite_field_algebras() {
        let f7 = Field::Prime(7);
        let (t2, taut) = upper_triangular_algebra(2, f7).unwrap();
        assert_eq!(derived_series(&t2).dims, vec![3, 1, 0]);
        assert_eq!(is_absolutely_irreducible(&taut).enveloping_dim, 3);
        assert_eq!(fixtures::scaling3(Q).reduce(f7).unwrap(), fixtures::scaling3(f7));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn transport_keeps_lie_structure(seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for g in [fixtures::scaling3(Q), upper_triangular_algebra(2, Q).unwrap().0, fixtures::sl2(Q)] {
                let phi = Mat::random_invertible(Q, g.dim(), &mut rng, 3);
                let h = transport_bracket(&phi, &g).unwrap();
                prop_assert!(verify_lie_algebra(&h));
                prop_assert_eq!(derived_series(&h), derived_series(&g));
                prop_assert!(verify_representation(&adjoint_representation(&h)));
            }
        }

        #[test]
        fn irreducibility_is_basis_invariant(seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (_, taut) = upper_triangular_algebra(2, Q).unwrap();
            let ad = adjoint_representation(&fixtures::sl2(Q));
            for rep in [taut, ad] {
                let p = Mat::random_invertible(Q, rep.dim_v, &mut rng, 3);
                prop_assert_eq!(is_absolutely_irreducible(&rep.conjugate(&p).unwrap()), is_absolutely_irreducible(&rep));
            }
        }
    }
}
