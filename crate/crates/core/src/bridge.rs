//! Line bundles `O(n)` on the projective line, their section algebras, and the
//! rank-2 classification that ties compression certificates to
//! one-dimensional irreducible representations.

use serde::Serialize;

use crate::enumerate::{projective_count, projective_points};
use crate::error::{Error, Result};
use crate::lie::{
    adjoint_representation, derived_series, fixtures as lie_fixtures, is_absolutely_irreducible,
    upper_triangular_algebra, verify_lie_algebra, verify_representation, Irreducibility, LieAlgebra, Representation,
};
use crate::linalg::Mat;
use crate::scalar::{Field, Scalar};
use crate::space::{detect_compression_rank2, CompressionCertificate, MatrixSpace};

/// `dim Γ(P^1, O(n))`: the number of degree-`n` monomials in two variables.
pub fn sections_dim_p1(n: i64) -> usize {
    if n < 0 {
        0
    } else {
        n as usize + 1
    }
}

/// Which bracket a section algebra carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "bracket", rename_all = "kebab-case")]
pub enum SectionBracket {
    /// Transported from `T_k` along the identity on coordinates.
    UpperTriangular { k: usize },
    /// `[e_top, e_i] = e_i` for every other basis element.
    Scaling,
}

/// A solvable bracket on the `n + 1` sections of `O(n)`, with a faithful
/// representation of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionAlgebra {
    pub degree: i64,
    pub bracket: SectionBracket,
    pub algebra: LieAlgebra,
    pub faithful: Representation,
}

fn triangular_root(n: usize) -> Option<usize> {
    (1..=n)
        .take_while(|k| k * (k + 1) / 2 <= n)
        .find(|k| k * (k + 1) / 2 == n)
}

pub fn build_section_algebra(n: i64, field: Field) -> Result<SectionAlgebra> {
    if n < 0 {
        return Err(Error::NegativeDegree(n));
    }
    let dim = sections_dim_p1(n);
    let (bracket, algebra, faithful) = match triangular_root(dim) {
        Some(k) => {
            let (g, taut) = upper_triangular_algebra(k, field)?;
            (SectionBracket::UpperTriangular { k }, g, taut)
        }
        None => {
            // the adjoint representation is faithful here: the center is zero once dim >= 2
            let g = lie_fixtures::scaling_algebra(field, dim);
            let ad = adjoint_representation(&g);
            (SectionBracket::Scaling, g, ad)
        }
    };
    debug_assert!(verify_lie_algebra(&algebra) && derived_series(&algebra).solvable);
    Ok(SectionAlgebra {
        degree: n,
        bracket,
        algebra,
        faithful,
    })
}

/// True iff `ρ` is injective on the algebra, i.e. the `ρ_i` are independent.
pub fn is_faithful(pi: &Representation) -> bool {
    MatrixSpace::new(pi.rho.clone()).is_ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub degree: i64,
    pub trivial: bool,
    #[serde(rename = "dim_VE")]
    pub dim_ve: usize,
    pub has_irreducible_pair: bool,
    pub section_bracket: SectionBracket,
    /// Burnside data of the section algebra's own faithful representation.
    pub faithful_rep: Irreducibility,
}

/// Decides whether the section algebra of `O(n)` has a faithful absolutely
/// irreducible representation and checks that this happens exactly for the
/// trivial bundle.
///
/// By Lie's theorem every absolutely irreducible representation of a
/// solvable algebra is one-dimensional, and a faithful map into `gl_1`
/// forces `dim ≤ 1`. For dimension 1 the pair is exhibited and checked.
pub fn trivial_iff_irreducible_pair(n: i64) -> Result<PairReport> {
    let field = Field::Rational;
    let sa = build_section_algebra(n, field)?;
    let dim_ve = sa.algebra.dim();
    if !derived_series(&sa.algebra).solvable {
        return Err(Error::CorrespondenceViolated(format!(
            "section algebra of O({n}) is not solvable"
        )));
    }
    let has_irreducible_pair = if dim_ve == 1 {
        let line = Representation::new(sa.algebra.clone(), vec![Mat::identity(field, 1)])?;
        verify_representation(&line) && is_faithful(&line) && is_absolutely_irreducible(&line).irreducible
    } else {
        false
    };
    let faithful_rep = is_absolutely_irreducible(&sa.faithful);
    if dim_ve >= 2 && faithful_rep.irreducible {
        return Err(Error::CorrespondenceViolated(format!(
            "solvable section algebra of O({n}) has an irreducible faithful representation of dimension {}",
            sa.faithful.dim_v
        )));
    }
    let trivial = n == 0;
    if trivial != has_irreducible_pair {
        return Err(Error::CorrespondenceViolated(format!(
            "O({n}): trivial = {trivial} but irreducible pair = {has_irreducible_pair}"
        )));
    }
    Ok(PairReport {
        degree: n,
        trivial,
        dim_ve,
        has_irreducible_pair,
        section_bracket: sa.bracket,
        faithful_rep,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplittingCase {
    AllTrivial,
    AllNontrivial,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandCheck {
    pub degree: i64,
    #[serde(rename = "dim_VE")]
    pub dim_ve: usize,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    pub irreducible: bool,
    pub enveloping_dim: usize,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub case: SplittingCase,
    pub consistent: bool,
    pub summands: Vec<SummandCheck>,
}

/// Pairs each line-bundle degree with a representation of its section
/// algebra: degree 0 must meet an absolutely irreducible representation,
/// every other degree a reducible one.
pub fn theorem_correspondence_check(degrees: &[i64], reps: &[Representation]) -> Result<CorrespondenceReport> {
    if degrees.len() != reps.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} degrees but {} representations",
            degrees.len(),
            reps.len()
        )));
    }
    if degrees.is_empty() {
        return Err(Error::DimensionMismatch("at least one summand is required".into()));
    }
    let mut summands = Vec::with_capacity(degrees.len());
    for (idx, (&n, pi)) in degrees.iter().zip(reps).enumerate() {
        if n < 0 {
            return Err(Error::NegativeDegree(n));
        }
        let dim_ve = sections_dim_p1(n);
        if pi.algebra.dim() != dim_ve {
            return Err(Error::DimensionMismatch(format!(
                "summand {}: O({n}) has {dim_ve} sections but the representation is of a {}-dimensional algebra",
                idx + 1,
                pi.algebra.dim()
            )));
        }
        if !verify_representation(pi) {
            return Err(Error::BadRepresentation(format!(
                "summand {} is not a homomorphism",
                idx + 1
            )));
        }
        let irr = is_absolutely_irreducible(pi);
        summands.push(SummandCheck {
            degree: n,
            dim_ve,
            dim_v: pi.dim_v,
            irreducible: irr.irreducible,
            enveloping_dim: irr.enveloping_dim,
            consistent: (n == 0) == irr.irreducible,
        });
    }
    let zeros = degrees.iter().filter(|&&n| n == 0).count();
    let case = match zeros {
        z if z == degrees.len() => SplittingCase::AllTrivial,
        0 => SplittingCase::AllNontrivial,
        _ => SplittingCase::Mixed,
    };
    Ok(CorrespondenceReport {
        case,
        consistent: summands.iter().all(|s| s.consistent),
        summands,
    })
}

/// The fiber `A(t) = Σ t_i A_i` at the projective point `[t]`.
pub fn evaluate_phi(space: &MatrixSpace, t: &[Scalar]) -> Result<Mat> {
    if t.len() != space.dim() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, space has dimension {}",
            t.len(),
            space.dim()
        )));
    }
    if t.iter().all(Scalar::is_zero) {
        return Err(Error::ZeroPoint);
    }
    space.element(t)
}

/// Where [`generation_check`] evaluates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenerationPoints {
    /// Every point of `P^(d-1)(F_p)`, after reducing the space mod `p`. An
    /// undecided search stops after `max_points` points.
    Exhaustive { prime: u64, max_points: u128 },
    /// The given points, in the space's own field.
    Supplied(Vec<Vec<Scalar>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub generated: bool,
    pub claimed_rank: usize,
    pub points_checked: u128,
    /// First point (in enumeration order) whose rank differs from the claim.
    pub failure: Option<Vec<Scalar>>,
    pub failure_rank: Option<usize>,
}

/// Checks that every fiber `A(t)` has the claimed rank.
pub fn generation_check(
    space: &MatrixSpace,
    points: &GenerationPoints,
    claimed_rank: usize,
) -> Result<GenerationReport> {
    let mut report = GenerationReport {
        generated: true,
        claimed_rank,
        points_checked: 0,
        failure: None,
        failure_rank: None,
    };
    let mut visit = |s: &MatrixSpace, t: Vec<Scalar>| -> Result<bool> {
        let rank = evaluate_phi(s, &t)?.rank();
        report.points_checked += 1;
        if rank != claimed_rank {
            report.generated = false;
            report.failure = Some(t);
            report.failure_rank = Some(rank);
            return Ok(false);
        }
        Ok(true)
    };
    match points {
        GenerationPoints::Exhaustive { prime, max_points } => {
            let field = Field::prime(*prime)?;
            let reduced = space.reduce(field)?;
            let total = projective_count(*prime, reduced.dim());
            let mut decided = false;
            for t in projective_points(field, reduced.dim()).take((*max_points).min(total) as usize) {
                if !visit(&reduced, t)? {
                    decided = true;
                    break;
                }
            }
            if !decided && total > *max_points {
                return Err(Error::BudgetExceeded {
                    needed: total,
                    budget: *max_points,
                });
            }
        }
        GenerationPoints::Supplied(list) => {
            for t in list {
                if !visit(space, t.clone())? {
                    break;
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BundleSide {
    /// Summands counted by the codimension `k1` of `V'`.
    L,
    /// Summands counted by the dimension `k2` of `W'`.
    T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BundleView {
    pub l_side: usize,
    pub t_side: usize,
}

/// One trivial summand: its one-dimensional section algebra and representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandRep {
    pub side: BundleSide,
    pub algebra: LieAlgebra,
    pub representation: Representation,
    pub verified: bool,
    pub irreducibility: Irreducibility,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationMetadata {
    pub seed: u64,
    pub retries: usize,
    pub field: Field,
    pub section_bracket: SectionBracket,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub primitive: bool,
    pub split: Option<(usize, usize)>,
    pub certificate: Option<CompressionCertificate>,
    pub rep_view: Vec<SummandRep>,
    pub bundle_view: Option<BundleView>,
    pub metadata: ClassificationMetadata,
}

/// Runs the rank-2 compression detector and, on success, attaches one
/// trivial line bundle per unit of `k1` (L side) and `k2` (T side), each
/// carrying the section algebra of `O(0)` with a checked one-dimensional
/// irreducible representation.
///
/// Fails with [`Error::CorrespondenceViolated`] unless a certificate exists
/// exactly when the representation view is nonempty and all irreducible.
pub fn classify_rank2(space: &MatrixSpace, seed: u64, retries: usize) -> Result<ClassificationReport> {
    let field = space.field();
    let certificate = detect_compression_rank2(space, seed, retries)?;
    let trivial = build_section_algebra(0, field)?;
    let mut rep_view = Vec::new();
    if let Some(cert) = &certificate {
        let sides = std::iter::repeat_n(BundleSide::L, cert.k1).chain(std::iter::repeat_n(BundleSide::T, cert.k2));
        for side in sides {
            let representation = Representation::new(trivial.algebra.clone(), vec![Mat::identity(field, 1)])?;
            rep_view.push(SummandRep {
                side,
                algebra: trivial.algebra.clone(),
                verified: verify_representation(&representation),
                irreducibility: is_absolutely_irreducible(&representation),
                representation,
            });
        }
    }
    let all_irreducible = !rep_view.is_empty() && rep_view.iter().all(|r| r.verified && r.irreducibility.irreducible);
    if certificate.is_some() != all_irreducible {
        return Err(Error::CorrespondenceViolated(
            "certificate existence disagrees with the representation view".into(),
        ));
    }
    Ok(ClassificationReport {
        primitive: certificate.is_none(),
        split: certificate.as_ref().map(CompressionCertificate::split),
        bundle_view: certificate.as_ref().map(|c| BundleView {
            l_side: c.k1,
            t_side: c.k2,
        }),
        certificate,
        rep_view,
        metadata: ClassificationMetadata {
            seed,
            retries,
            field,
            section_bracket: trivial.bracket,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::fixtures::line_representation;
    use crate::space::{
        brute_force_rank2, fixtures, random_equivalent, DEFAULT_BUDGET, DEFAULT_EXHAUSTION_BUDGET, DEFAULT_RETRIES,
    };

    const Q: Field = Field::Rational;

    #[test]
    fn section_dimensions() {
        assert_eq!(sections_dim_p1(2), 3);
        assert_eq!(sections_dim_p1(0), 1);
        assert_eq!(sections_dim_p1(-1), 0);
        // monomials s^i t^(n-i)
        for n in -3i64..12 {
            let monomials = (0..=n.max(-1)).count();
            assert_eq!(sections_dim_p1(n), monomials);
        }
    }

    #[test]
    fn section_algebras() {
        let o2 = build_section_algebra(2, Q).unwrap();
        assert_eq!(o2.bracket, SectionBracket::UpperTriangular { k: 2 });
        assert_eq!(o2.algebra, upper_triangular_algebra(2, Q).unwrap().0);
        let o0 = build_section_algebra(0, Q).unwrap();
        assert_eq!(o0.algebra.dim(), 1);
        assert!(o0.algebra.upper_brackets().is_empty());
        let o3 = build_section_algebra(3, Q).unwrap();
        assert_eq!(o3.bracket, SectionBracket::Scaling);
        assert_eq!(derived_series(&o3.algebra).dims, vec![4, 3, 0]);
        assert_eq!(
            build_section_algebra(5, Q).unwrap().bracket,
            SectionBracket::UpperTriangular { k: 3 }
        );
        assert_eq!(build_section_algebra(-1, Q), Err(Error::NegativeDegree(-1)));
        for n in 0..=20 {
            let sa = build_section_algebra(n, Q).unwrap();
            assert_eq!(sa.algebra.dim(), sections_dim_p1(n));
            assert!(verify_lie_algebra(&sa.algebra));
            assert!(derived_series(&sa.algebra).solvable);
            assert!(verify_representation(&sa.faithful));
            assert!(is_faithful(&sa.faithful));
        }
    }

    #[test]
    fn trivial_degree_alone_has_irreducible_pair() {
        let r0 = trivial_iff_irreducible_pair(0).unwrap();
        assert!(r0.trivial && r0.has_irreducible_pair);
        assert_eq!(r0.dim_ve, 1);
        let r2 = trivial_iff_irreducible_pair(2).unwrap();
        assert!(!r2.trivial && !r2.has_irreducible_pair);
        assert_eq!(r2.dim_ve, 3);
        assert_eq!(r2.faithful_rep.enveloping_dim, 3);
        let r5 = trivial_iff_irreducible_pair(5).unwrap();
        assert_eq!((r5.trivial, r5.dim_ve, r5.has_irreducible_pair), (false, 6, false));
        assert_eq!(trivial_iff_irreducible_pair(-2), Err(Error::NegativeDegree(-2)));
    }

    #[test]
    fn correspondence_cases() {
        let line = line_representation(Q, 1);
        let r = theorem_correspondence_check(&[0, 0], &[line.clone(), line.clone()]).unwrap();
        assert_eq!((r.case, r.consistent), (SplittingCase::AllTrivial, true));

        let o2 = build_section_algebra(2, Q).unwrap().faithful;
        let o3 = build_section_algebra(3, Q).unwrap().faithful;
        let r = theorem_correspondence_check(&[2, 3], &[o2.clone(), o3]).unwrap();
        assert_eq!((r.case, r.consistent), (SplittingCase::AllNontrivial, true));

        let r = theorem_correspondence_check(&[0, 2], &[line.clone(), o2.clone()]).unwrap();
        assert_eq!((r.case, r.consistent), (SplittingCase::Mixed, true));

        // the zero representation of the 1-dim algebra on Q^2 is reducible
        let zero2 = Representation::new(line.algebra.clone(), vec![Mat::zeros(Q, 2, 2)]).unwrap();
        let r = theorem_correspondence_check(&[0], &[zero2]).unwrap();
        assert!(!r.consistent);

        assert!(matches!(
            theorem_correspondence_check(&[0, 1], std::slice::from_ref(&line)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            theorem_correspondence_check(&[1], &[line]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn phi_evaluation_and_generation() {
        let s = fixtures::skew3(Q);
        let t = [Q.one(), Q.zero(), Q.zero()];
        assert_eq!(evaluate_phi(&s, &t).unwrap(), s.basis()[0]);
        assert_eq!(evaluate_phi(&s, &[Q.zero(), Q.zero(), Q.zero()]), Err(Error::ZeroPoint));

        let g = generation_check(
            &s,
            &GenerationPoints::Exhaustive {
                prime: 101,
                max_points: DEFAULT_EXHAUSTION_BUDGET,
            },
            2,
        )
        .unwrap();
        assert!(g.generated);
        assert_eq!(g.points_checked, 10303);

        let d = fixtures::diag_pencil(Q);
        let g = generation_check(
            &d,
            &GenerationPoints::Exhaustive {
                prime: 101,
                max_points: DEFAULT_EXHAUSTION_BUDGET,
            },
            2,
        )
        .unwrap();
        assert!(!g.generated);
        assert_eq!(g.failure_rank, Some(1));
        let f = Field::Prime(101);
        assert_eq!(g.failure, Some(vec![f.zero(), f.one()]));
        let pts = vec![vec![Q.one(), Q.one()], vec![Q.one(), Q.zero()]];
        let g = generation_check(&d, &GenerationPoints::Supplied(pts), 2).unwrap();
        assert_eq!((g.generated, g.points_checked), (false, 2));
        assert_eq!(g.failure, Some(vec![Q.one(), Q.zero()]));
    }

    #[test]
    fn classification_of_fixtures() {
        let skew = classify_rank2(&fixtures::skew3(Q), 0, DEFAULT_RETRIES).unwrap();
        assert!(skew.primitive && skew.rep_view.is_empty() && skew.split.is_none());

        let b = classify_rank2(&fixtures::bordered(Q, 4), 0, DEFAULT_RETRIES).unwrap();
        assert_eq!(b.split, Some((1, 1)));
        assert_eq!(b.rep_view.len(), 2);
        assert_eq!(b.bundle_view, Some(BundleView { l_side: 1, t_side: 1 }));
        assert!(b
            .rep_view
            .iter()
            .all(|r| r.verified && r.irreducibility.enveloping_dim == 1));

        let l2 = classify_rank2(&fixtures::l2_pencil(Q), 0, DEFAULT_RETRIES).unwrap();
        assert_eq!(l2.split, Some((0, 2)));
        assert!(l2.rep_view.iter().all(|r| r.side == BundleSide::T));
        assert_eq!(l2.rep_view.len(), 2);
    }

    #[test]
    fn classification_matches_oracle_and_equivalence() {
        let f5 = Field::Prime(5);
        for s in [fixtures::skew3(f5), fixtures::bordered(f5, 4), fixtures::l2_pencil(f5)] {
            let report = classify_rank2(&s, 0, DEFAULT_RETRIES).unwrap();
            let oracle = brute_force_rank2(&s, DEFAULT_BUDGET).unwrap();
            assert_eq!(report.primitive, oracle.iter().all(|o| o.certificate.is_none()));
            for seed in 0..3 {
                let e = classify_rank2(&random_equivalent(&s, seed), 0, DEFAULT_RETRIES).unwrap();
                assert_eq!(e.primitive, report.primitive);
                assert_eq!(e.split, report.split);
            }
        }
    }
}
