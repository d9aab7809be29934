use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::rank::sampled_rank;
use super::MatrixSpace;
use crate::error::{Error, Result};
use crate::linalg::{preimage_subspace, Mat, Subspace};
use crate::scalar::{Field, Scalar};

pub const DEFAULT_RETRIES: usize = 16;

const RATIONAL_ELEMENT_BOUND: i64 = 50;
const EQUIVALENCE_ENTRY_BOUND: i64 = 3;
const PRECONDITION_SAMPLES: usize = 32;

/// Witness that every element of the space maps `V'` (codimension `k1`) into
/// `W'` (dimension `k2`), so every element has rank at most `k1 + k2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressionCertificate {
    pub k1: usize,
    pub k2: usize,
    /// Claimed rank; must equal `k1 + k2`.
    pub rank: usize,
    pub field: Field,
    pub v_prime: Subspace,
    pub w_prime: Subspace,
}

impl CompressionCertificate {
    pub fn new(v_prime: Subspace, w_prime: Subspace) -> Self {
        let (k1, k2) = (v_prime.codim(), w_prime.dim());
        CompressionCertificate {
            k1,
            k2,
            rank: k1 + k2,
            field: v_prime.field(),
            v_prime,
            w_prime,
        }
    }

    pub fn split(&self) -> (usize, usize) {
        (self.k1, self.k2)
    }
}

/// Pure re-check of every certificate invariant against the space.
pub fn verify_certificate(space: &MatrixSpace, cert: &CompressionCertificate) -> bool {
    let (v, w) = (&cert.v_prime, &cert.w_prime);
    if cert.field != space.field() || v.field() != space.field() || w.field() != space.field() {
        return false;
    }
    if v.ambient() != space.cols() || w.ambient() != space.rows() {
        return false;
    }
    if v.codim() != cert.k1 || w.dim() != cert.k2 || cert.k1 + cert.k2 != cert.rank {
        return false;
    }
    space
        .basis()
        .iter()
        .all(|a| v.basis().iter().all(|x| w.contains(&a.mul_vec(x))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommonSpaces {
    /// `∩ ker A_i`: the largest subspace killed by every element.
    pub kernel: Subspace,
    /// `Σ Im A_i`: the smallest subspace containing every image.
    pub image: Subspace,
}

pub fn common_kernel_and_image(space: &MatrixSpace) -> CommonSpaces {
    let field = space.field();
    let stacked: Vec<Vec<Scalar>> = space.basis().iter().flat_map(Mat::row_vecs).collect();
    let kernel = Mat::from_rows(field, stacked).expect("nonempty basis").kernel();
    let columns: Vec<Vec<Scalar>> = space.basis().iter().flat_map(|a| a.transpose().row_vecs()).collect();
    let image = Subspace::from_vectors(field, space.rows(), columns).expect("columns have length m");
    CommonSpaces { kernel, image }
}

/// `{P A_i Q}` for seeded random invertible `P`, `Q`.
pub fn random_equivalent(space: &MatrixSpace, seed: u64) -> MatrixSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = Mat::random_invertible(space.field(), space.rows(), &mut rng, EQUIVALENCE_ENTRY_BOUND);
    let q = Mat::random_invertible(space.field(), space.cols(), &mut rng, EQUIVALENCE_ENTRY_BOUND);
    space
        .transform(&p, &q)
        .expect("invertible transforms preserve independence")
}

/// Searches for a certificate with `k1 + k2 = 2`.
///
/// The cascade tries, in order: a common image of dimension at most 2 (split
/// `(0,2)`), a common kernel of codimension at most 2 (`(2,0)`), then `(1,1)`
/// either through a common kernel of codimension at most 1, a common image of
/// dimension at most 1, or the image intersection of random rank-2 elements.
/// Any rank-2 element `B` satisfies `B(V') = W'`, so `W'` lies in every such
/// image. Returned certificates are always verified; `None` is Monte-Carlo in
/// the last branch only.
pub fn detect_compression_rank2(
    space: &MatrixSpace,
    seed: u64,
    retries: usize,
) -> Result<Option<CompressionCertificate>> {
    let (rank, _) = sampled_rank(space, seed, PRECONDITION_SAMPLES);
    if rank > 2 {
        return Err(Error::RankTooLarge(rank));
    }
    let field = space.field();
    let (m, n) = (space.rows(), space.cols());
    let common = common_kernel_and_image(space);
    let (ck, ci) = (&common.kernel, &common.image);

    let verified = |cert: CompressionCertificate| {
        assert!(
            verify_certificate(space, &cert),
            "detector produced an invalid certificate"
        );
        Ok(Some(cert))
    };

    if m >= 2 && ci.dim() <= 2 {
        return verified(CompressionCertificate::new(Subspace::full(field, n), ci.extend_to(2)));
    }
    if n >= 2 && ck.codim() <= 2 {
        return verified(CompressionCertificate::new(
            ck.truncate(n - 2),
            Subspace::zero(field, m),
        ));
    }
    if ck.codim() <= 1 {
        return verified(CompressionCertificate::new(
            ck.truncate(n - 1),
            Subspace::zero(field, m).extend_to(1),
        ));
    }
    if ci.dim() <= 1 {
        return verified(CompressionCertificate::new(
            Subspace::full(field, n).truncate(n - 1),
            ci.extend_to(1),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut running: Option<Subspace> = None;
    for _ in 0..retries {
        let t: Vec<Scalar> = (0..space.dim())
            .map(|_| field.random(&mut rng, RATIONAL_ELEMENT_BOUND))
            .collect();
        let b = space.element(&t)?;
        let rf = b.rank_factor();
        if rf.rank != 2 {
            continue;
        }
        running = Some(match running {
            None => rf.image,
            Some(z) => z.intersect(&rf.image)?,
        });
        if running.as_ref().is_some_and(|z| z.dim() == 0) {
            return Ok(None);
        }
    }
    let Some(z) = running.filter(|z| z.dim() == 1) else {
        return Ok(None);
    };
    let mut v_prime = Subspace::full(field, n);
    for a in space.basis() {
        v_prime = v_prime.intersect(&preimage_subspace(a, &z)?)?;
    }
    if v_prime.codim() > 1 {
        return Ok(None);
    }
    verified(CompressionCertificate::new(v_prime.truncate(n - 1), z))
}
