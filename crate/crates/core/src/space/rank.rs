use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::MatrixSpace;
use crate::enumerate::{projective_count, projective_points};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::poly::{determinant, BinaryForm, MultiPoly};
use crate::scalar::{Field, Scalar};

/// Largest matrix side accepted by the symbolic-minor path without override.
pub const DESK_MAX_SIDE: usize = 6;
/// Largest space dimension accepted by the symbolic-minor path without override.
pub const DESK_MAX_DIM: usize = 4;

/// Random integer coordinates over `Q` are drawn from `[-RATIONAL_SAMPLE_BOUND, RATIONAL_SAMPLE_BOUND]`.
const RATIONAL_SAMPLE_BOUND: i64 = 50;
/// Default cap on the points visited by the finite-field constant-rank check.
pub const DEFAULT_EXHAUSTION_BUDGET: u128 = 2_000_000;
/// Finite projective spaces up to this size are sampled exhaustively.
const EXHAUSTIVE_SAMPLE_LIMIT: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperBound {
    /// Every `(k+1) x (k+1)` minor of the generic element is the zero polynomial.
    Symbolic,
    /// Only sampled; no symbolic confirmation was attempted.
    SampledOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ConstantRankStatus {
    /// Exact over the base field: `d = 1`, or the gcd of the `k x k` minors of a
    /// pencil is a nonzero constant.
    ExactCertified { method: String },
    /// The gcd of the `k x k` minors of a rational pencil is nonconstant but has no
    /// rational root: the rank drops only at irrational or complex points.
    ExactCertifiedNegative { gcd: String },
    /// Every point of `P^{d-1}(F_p)` has rank `k`.
    FieldExhaustive { prime: u64, points: u128 },
    /// A nonzero element of rank below the generic rank.
    Falsified {
        witness: Vec<Scalar>,
        rank: usize,
        field: Field,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankVerdict {
    pub generic_rank: usize,
    /// Coefficients `t` with `rank Σ t_i A_i = generic_rank`.
    pub witness: Vec<Scalar>,
    pub upper_bound: UpperBound,
    pub constant_rank: Option<ConstantRankStatus>,
}

impl RankVerdict {
    pub fn is_constant_rank(&self) -> Option<bool> {
        self.constant_rank.as_ref().map(|s| {
            matches!(
                s,
                ConstantRankStatus::ExactCertified { .. } | ConstantRankStatus::FieldExhaustive { .. }
            )
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOptions {
    pub seed: u64,
    /// Confirm the sampled rank by expanding minors of the generic element.
    pub symbolic: bool,
    /// Random points drawn besides the coordinate points.
    pub samples: usize,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            seed: 0,
            symbolic: true,
            samples: 24,
        }
    }
}

/// Refuses spaces beyond the desk-scale bounds of the symbolic path.
pub fn check_desk_scale(space: &MatrixSpace) -> Result<()> {
    if space.rows() > DESK_MAX_SIDE || space.cols() > DESK_MAX_SIDE || space.dim() > DESK_MAX_DIM {
        return Err(Error::DeskScaleExceeded(format!(
            "{}x{} matrices, d = {}; limits are sides <= {DESK_MAX_SIDE}, d <= {DESK_MAX_DIM}",
            space.rows(),
            space.cols(),
            space.dim()
        )));
    }
    Ok(())
}

/// Generic rank with symbolic confirmation of maximality.
pub fn generic_rank(space: &MatrixSpace, seed: u64) -> Result<RankVerdict> {
    generic_rank_with(
        space,
        &RankOptions {
            seed,
            ..RankOptions::default()
        },
    )
}

/// Maximum rank over the coordinate points and seeded random points (all points
/// when the projective space is small). Returns the rank and the first point attaining it.
pub fn sampled_rank(space: &MatrixSpace, seed: u64, samples: usize) -> (usize, Vec<Scalar>) {
    let field = space.field();
    let d = space.dim();
    let mut best: Option<(usize, Vec<Scalar>)> = None;
    let mut consider = |t: Vec<Scalar>| {
        let r = space.element(&t).expect("arity matches").rank();
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, t));
        }
    };
    let cap = space.rows().min(space.cols());
    match field {
        Field::Prime(p) if projective_count(p, d) <= EXHAUSTIVE_SAMPLE_LIMIT => {
            for t in projective_points(field, d) {
                consider(t);
            }
        }
        _ => {
            for i in 0..d {
                let mut t = vec![field.zero(); d];
                t[i] = field.one();
                consider(t);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut drawn = 0;
            while drawn < samples {
                let t: Vec<Scalar> = (0..d).map(|_| field.random(&mut rng, RATIONAL_SAMPLE_BOUND)).collect();
                if t.iter().all(Scalar::is_zero) {
                    continue;
                }
                consider(t);
                drawn += 1;
            }
        }
    }
    let (r, t) = best.expect("at least one point");
    debug_assert!(r <= cap);
    (r, t)
}

pub fn generic_rank_with(space: &MatrixSpace, opts: &RankOptions) -> Result<RankVerdict> {
    let (mut rank, mut witness) = sampled_rank(space, opts.seed, opts.samples);
    if !opts.symbolic {
        return Ok(RankVerdict {
            generic_rank: rank,
            witness,
            upper_bound: UpperBound::SampledOnly,
            constant_rank: None,
        });
    }
    let generic = space.generic_element();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
    while let Some(minor) = first_nonzero_minor(&generic, rank + 1) {
        // sampling missed a point of higher rank; find one where this minor is nonzero
        let t = nonvanishing_point(space, &minor, &mut rng).ok_or(Error::RankUnattained(rank + 1))?;
        let r = space.element(&t)?.rank();
        debug_assert!(r > rank);
        rank = r;
        witness = t;
    }
    Ok(RankVerdict {
        generic_rank: rank,
        witness,
        upper_bound: UpperBound::Symbolic,
        constant_rank: None,
    })
}

/// All `size x size` minors of a polynomial matrix, rows then columns in
/// lexicographic order.
pub(crate) fn minors(m: &[Vec<MultiPoly>], size: usize) -> impl Iterator<Item = MultiPoly> + '_ {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..rows).combinations(size).flat_map(move |rs| {
        (0..cols).combinations(size).map(move |cs| {
            let sub: Vec<Vec<MultiPoly>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            determinant(&sub)
        })
    })
}

fn first_nonzero_minor(m: &[Vec<MultiPoly>], size: usize) -> Option<MultiPoly> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if size == 0 || size > rows.min(cols) {
        return None;
    }
    minors(m, size).find(|p| !p.is_zero())
}

fn nonvanishing_point(space: &MatrixSpace, poly: &MultiPoly, rng: &mut ChaCha8Rng) -> Option<Vec<Scalar>> {
    let field = space.field();
    let d = space.dim();
    if let Field::Prime(p) = field {
        if projective_count(p, d) <= 1 << 20 {
            return projective_points(field, d).find(|t| !poly.eval(t).is_zero());
        }
    }
    // Schwartz-Zippel: a nonzero polynomial of degree <= 6 vanishes on at most
    // 6/101 of the sampled box, so this terminates quickly.
    for _ in 0..10_000 {
        let t: Vec<Scalar> = (0..d).map(|_| field.random(rng, RATIONAL_SAMPLE_BOUND)).collect();
        if !poly.eval(&t).is_zero() {
            return Some(t);
        }
    }
    None
}

/// Constant-rank decision. The upper bound is symbolic. The lower bound is exact
/// for `d = 1`, decided by a binary-form gcd for rational pencils, and by
/// exhaustion of `P^{d-1}(F_p)` otherwise.
pub fn constant_rank_verdict(space: &MatrixSpace, prime: u64) -> Result<RankVerdict> {
    constant_rank_verdict_with(space, prime, DEFAULT_EXHAUSTION_BUDGET)
}

/// [`constant_rank_verdict`] visiting at most `max_points` points of
/// `P^{d-1}(F_p)`. A rank drop found within the budget still falsifies;
/// otherwise an unfinished exhaustion is [`Error::BudgetExceeded`].
pub fn constant_rank_verdict_with(space: &MatrixSpace, prime: u64, max_points: u128) -> Result<RankVerdict> {
    let exhaustion_field = Field::prime(prime)?;
    if let Field::Prime(q) = space.field() {
        if q != prime {
            return Err(Error::ModulusConflict {
                from: space.field(),
                to: exhaustion_field,
            });
        }
    }
    let mut verdict = generic_rank(space, 0)?;
    let k = verdict.generic_rank;
    let status = if space.dim() == 1 {
        ConstantRankStatus::ExactCertified {
            method: "single-generator".into(),
        }
    } else if space.field() == Field::Rational && space.dim() == 2 {
        pencil_lower_bound(space, k)?
    } else {
        exhaust_lower_bound(space, k, &verdict.witness, exhaustion_field, max_points)?
    };
    verdict.constant_rank = Some(status);
    Ok(verdict)
}

/// Gcd of the `k x k` minors of `s A + t B` as binary forms.
pub(crate) fn minor_gcd(a: &Mat, b: &Mat, k: usize) -> Option<BinaryForm> {
    let field = a.field();
    let generic: Vec<Vec<MultiPoly>> = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| MultiPoly::linear(field, &[a.get(i, j).clone(), b.get(i, j).clone()]))
                .collect()
        })
        .collect();
    if k == 0 {
        return Some(BinaryForm::one(field));
    }
    let forms: Vec<BinaryForm> = minors(&generic, k)
        .map(|p| {
            if p.is_zero() {
                // zero polynomial: any degree works, it is skipped by the gcd
                BinaryForm::from_multi(&MultiPoly::zero(field, 2)).unwrap()
            } else {
                BinaryForm::from_multi(&p).expect("minors of a linear pencil are homogeneous")
            }
        })
        .collect();
    BinaryForm::gcd_all(&forms)
}

fn pencil_lower_bound(space: &MatrixSpace, k: usize) -> Result<ConstantRankStatus> {
    let (a, b) = (&space.basis()[0], &space.basis()[1]);
    let g = minor_gcd(a, b, k).ok_or(Error::RankUnattained(k))?;
    if g.degree() == 0 {
        return Ok(ConstantRankStatus::ExactCertified {
            method: "binary-form-gcd".into(),
        });
    }
    match g.roots().into_iter().next() {
        Some((s, t)) => {
            let witness = vec![s, t];
            let rank = space.element(&witness)?.rank();
            Ok(ConstantRankStatus::Falsified {
                witness,
                rank,
                field: space.field(),
            })
        }
        None => Ok(ConstantRankStatus::ExactCertifiedNegative { gcd: g.to_string() }),
    }
}

fn exhaust_lower_bound(
    space: &MatrixSpace,
    k: usize,
    witness: &[Scalar],
    field: Field,
    max_points: u128,
) -> Result<ConstantRankStatus> {
    let reduced = space.reduce(field)?;
    let p = field.order().expect("exhaustion runs over a prime field");
    // the generic-rank witness usually survives reduction and shows the rank is attained
    let mut attained = witness
        .iter()
        .map(|c| c.reduce(field))
        .collect::<Result<Vec<_>>>()
        .ok()
        .filter(|t| t.iter().any(|c| !c.is_zero()))
        .and_then(|t| reduced.element(&t).ok())
        .is_some_and(|m| m.rank() >= k);
    let total = projective_count(p, reduced.dim());
    let mut drop: Option<(Vec<Scalar>, usize)> = None;
    let mut points = 0u128;
    for t in projective_points(field, reduced.dim()) {
        if points == max_points {
            break;
        }
        points += 1;
        let r = reduced.element(&t)?.rank();
        attained |= r >= k;
        if r < k && drop.is_none() {
            drop = Some((t, r));
        }
        if drop.is_some() && attained {
            break;
        }
    }
    if let Some((witness, rank)) = drop.filter(|_| attained) {
        return Ok(ConstantRankStatus::Falsified { witness, rank, field });
    }
    if points < total {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget: max_points,
        });
    }
    if !attained {
        // the reduced space never reaches the rational generic rank
        return Err(Error::BadReduction { prime: p });
    }
    Ok(ConstantRankStatus::FieldExhaustive { prime: p, points })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures;
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn skew3_generic_rank_is_two() {
        let v = generic_rank(&fixtures::skew3(Q), 0).unwrap();
        assert_eq!(v.generic_rank, 2);
        assert_eq!(v.upper_bound, UpperBound::Symbolic);
        let w = fixtures::skew3(Q).element(&v.witness).unwrap();
        assert_eq!(w.rank(), 2);
    }

    #[test]
    fn identity_space_has_full_rank() {
        let s = MatrixSpace::new(vec![Mat::identity(Q, 4)]).unwrap();
        assert_eq!(generic_rank(&s, 0).unwrap().generic_rank, 4);
    }

    #[test]
    fn bordered_generic_rank_is_two() {
        let v = generic_rank(&fixtures::bordered(Q, 4), 1).unwrap();
        assert_eq!(v.generic_rank, 2);
    }

    #[test]
    fn symbolic_path_corrects_undersampling() {
        // coordinate points E11, E22 have rank 1; the generic element has rank 2
        let s = fixtures::diag_pencil(Q);
        let opts = RankOptions {
            samples: 0,
            ..RankOptions::default()
        };
        let v = generic_rank_with(&s, &opts).unwrap();
        assert_eq!(v.generic_rank, 2);
        assert_eq!(s.element(&v.witness).unwrap().rank(), 2);
        let sampled = generic_rank_with(
            &s,
            &RankOptions {
                symbolic: false,
                ..opts
            },
        )
        .unwrap();
        assert_eq!(sampled.generic_rank, 1);
        assert_eq!(sampled.upper_bound, UpperBound::SampledOnly);
    }

    #[test]
    fn skew3_constant_rank_over_f101() {
        let v = constant_rank_verdict(&fixtures::skew3(Q), 101).unwrap();
        assert_eq!(v.generic_rank, 2);
        assert_eq!(
            v.constant_rank,
            Some(ConstantRankStatus::FieldExhaustive {
                prime: 101,
                points: 10303
            })
        );
    }

    #[test]
    fn diag_pencil_is_falsified_at_infinity() {
        let s = fixtures::diag_pencil(Q);
        let v = constant_rank_verdict(&s, 101).unwrap();
        match v.constant_rank.unwrap() {
            ConstantRankStatus::Falsified { witness, rank, field } => {
                assert_eq!(witness, vec![Q.one(), Q.zero()]);
                assert_eq!(rank, 1);
                assert_eq!(field, Q);
                assert_eq!(s.element(&witness).unwrap(), Mat::from_ints(Q, &[[1, 0], [0, 0]]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn l2_pencil_is_exactly_constant_rank() {
        let v = constant_rank_verdict(&fixtures::l2_pencil(Q), 101).unwrap();
        assert_eq!(v.generic_rank, 2);
        assert_eq!(v.is_constant_rank(), Some(true));
        assert!(matches!(
            v.constant_rank,
            Some(ConstantRankStatus::ExactCertified { .. })
        ));
    }

    #[test]
    fn irrational_rank_drop_is_reported_with_gcd() {
        // [[s, 2t], [t, s]] has determinant s^2 - 2 t^2
        let s = MatrixSpace::new(vec![
            Mat::from_ints(Q, &[[1, 0], [0, 1]]),
            Mat::from_ints(Q, &[[0, 2], [1, 0]]),
        ])
        .unwrap();
        let v = constant_rank_verdict(&s, 101).unwrap();
        assert_eq!(
            v.constant_rank,
            Some(ConstantRankStatus::ExactCertifiedNegative {
                gcd: "s^2 - 2*t^2".into()
            })
        );
        assert_eq!(v.is_constant_rank(), Some(false));
    }

    #[test]
    fn reduction_errors() {
        let half = Q.parse_scalar("1/3").unwrap();
        let s = MatrixSpace::new(vec![
            Mat::from_ints(Q, &[[1, 0], [0, 0]]).scale(&half),
            Mat::from_ints(Q, &[[0, 1], [0, 0]]),
            Mat::from_ints(Q, &[[0, 0], [1, 0]]),
        ])
        .unwrap();
        assert_eq!(constant_rank_verdict(&s, 3), Err(Error::BadReduction { prime: 3 }));
        let f5 = fixtures::skew3(Field::Prime(5));
        assert!(matches!(
            constant_rank_verdict(&f5, 101),
            Err(Error::ModulusConflict { .. })
        ));
        assert!(constant_rank_verdict(&f5, 5).unwrap().is_constant_rank().unwrap());
    }

    #[test]
    fn desk_scale_guard() {
        assert!(check_desk_scale(&fixtures::skew3(Q)).is_ok());
        assert!(matches!(
            check_desk_scale(&fixtures::bordered(Q, 4)),
            Err(Error::DeskScaleExceeded(_))
        ));
    }
}
