//! q-difference Toda operators on degree-graded series, the eigenfunction
//! recursion they induce, and mechanical verification of the eigen-relation.
//!
//! A term `(c, m, s)` stands for `c · T^s ∘ Q^m`: multiplication by `Q^m`
//! followed by the q-shift `Qᵢ ↦ q^{sᵢ}Qᵢ`, so on a graded series it acts by
//! `(term·J)_d = c · q^{⟨s,d⟩} · J_{d−m}`. Normal form keeps terms sorted by
//! `(m, s)` with coefficients merged, which makes composition confluent on
//! the nose: equal operators have identical term lists.

use std::collections::BTreeMap;

use crate::degree::DegreeVector;
use crate::error::{Error, Result};
use crate::ktheory::{series_to_fixed_point, FixedPoint, RestrictionMap};
use crate::localization::{level_twist, LevelSpec, QSeries};
use crate::par::parallel_map;
use crate::poly::{LaurentPolynomial, Monomial};
use crate::ratfun::RationalFunction;
use crate::scalar::scalar_int;
use crate::vars::Variable;

/// One normal-form term `c · T^s ∘ Q^m` of a difference operator.
#[derive(Clone, PartialEq, Debug)]
pub struct OperatorTerm {
    pub c: RationalFunction,
    pub m: Vec<u32>,
    pub s: Vec<i32>,
}

/// A q-difference operator in normal form: terms sorted by `(m, s)`, equal
/// keys merged, zero coefficients dropped.
#[derive(Clone, PartialEq, Debug)]
pub struct DifferenceOperator {
    rank: usize,
    terms: Vec<OperatorTerm>,
}

impl DifferenceOperator {
    /// Every term must carry shift vectors of length `rank`.
    pub fn new(rank: usize, terms: Vec<OperatorTerm>) -> Result<Self> {
        let mut merged: BTreeMap<(Vec<u32>, Vec<i32>), RationalFunction> = BTreeMap::new();
        for t in terms {
            if t.m.len() != rank || t.s.len() != rank {
                return Err(Error::RankMismatch { op: rank, series: t.m.len().max(t.s.len()) });
            }
            let slot = merged
                .entry((t.m, t.s))
                .or_insert_with(RationalFunction::zero);
            *slot = slot.add(&t.c);
        }
        Ok(DifferenceOperator {
            rank,
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((m, s), c)| OperatorTerm { c, m, s })
                .collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    /// Operator sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { op: self.rank, series: other.rank });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        DifferenceOperator::new(self.rank, terms)
    }

    /// Operator composition, normal-formed with
    /// `Q^m ∘ T^s = q^{−⟨s,m⟩} T^s ∘ Q^m`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { op: self.rank, series: other.rank });
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for t1 in &self.terms {
            for t2 in &other.terms {
                let cross: i32 = t2.s.iter().zip(&t1.m).map(|(s, &m)| s * m as i32).sum();
                let c = t1.c.mul(&t2.c).mul(&RationalFunction::monomial(
                    scalar_int(1),
                    Monomial::var_pow(Variable::Q, -cross),
                ));
                terms.push(OperatorTerm {
                    c,
                    m: t1.m.iter().zip(&t2.m).map(|(a, b)| a + b).collect(),
                    s: t1.s.iter().zip(&t2.s).map(|(a, b)| a + b).collect(),
                });
            }
        }
        DifferenceOperator::new(self.rank, terms)
    }

    /// Restrict every coefficient to a fixed point.
    pub fn restrict(&self, sigma: &FixedPoint) -> Result<Self> {
        let map = RestrictionMap::new(sigma.clone());
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(OperatorTerm { c: map.apply(&t.c)?, m: t.m.clone(), s: t.s.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        DifferenceOperator::new(self.rank, terms)
    }
}

/// `pᵢ` with the boundary convention `p₀ = p_{rank+1} = 1`.
fn p_class(i: usize, rank: usize) -> Monomial {
    if i == 0 || i == rank + 1 {
        Monomial::one()
    } else {
        Monomial::var(Variable::p(i as u16))
    }
}

/// `eᵢ` as a shift vector, with `e₀ = e_{rank+1} = 0`.
fn e_vec(i: usize, rank: usize) -> Vec<i32> {
    let mut v = vec![0i32; rank];
    if i >= 1 && i <= rank {
        v[i - 1] = 1;
    }
    v
}

fn mono_rf(m: Monomial) -> RationalFunction {
    RationalFunction::monomial(scalar_int(1), m)
}

/// The conjugated q-difference Toda operator of the given rank with
/// determinant levels, in normal form:
///
/// - diagonal terms `(p_{i+1} pᵢ⁻¹; 0; e_{i+1} − eᵢ)` for `i = 0..=rank`;
/// - shift terms `(−p_{i+1} pᵢ^{lᵢ−1} q^{−lᵢ}; eᵢ; e_{i+1} − eᵢ + lᵢeᵢ)` for
///   `i = 1..=rank`, where the `q^{−lᵢ}` arises from normal-forming the level
///   factor `Qᵢ ∘ Tᵢ^{lᵢ}`;
///
/// with `p₀ = p_{rank+1} = 1` and `e₀ = e_{rank+1} = 0`.
pub fn build_toda(rank: usize, level: &LevelSpec) -> Result<DifferenceOperator> {
    if level.num_blocks() != rank {
        return Err(Error::RankMismatch { op: rank, series: level.num_blocks() });
    }
    let mut terms = Vec::new();
    let sub = |a: &[i32], b: &[i32]| -> Vec<i32> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    };
    for i in 0..=rank {
        terms.push(OperatorTerm {
            c: mono_rf(p_class(i + 1, rank).mul(&p_class(i, rank).inv())),
            m: vec![0; rank],
            s: sub(&e_vec(i + 1, rank), &e_vec(i, rank)),
        });
    }
    for i in 1..=rank {
        let l = level.level(i - 1);
        let c = mono_rf(
            p_class(i + 1, rank)
                .mul(&p_class(i, rank).pow(l - 1))
                .mul(&Monomial::var_pow(Variable::Q, -l)),
        )
        .neg();
        let mut s = sub(&e_vec(i + 1, rank), &e_vec(i, rank));
        s[i - 1] += l;
        let mut m = vec![0u32; rank];
        m[i - 1] = 1;
        terms.push(OperatorTerm { c, m, s });
    }
    DifferenceOperator::new(rank, terms)
}

/// The Toda eigenvalue in determinant classes,
/// `Σ_{i=0}^{rank} p_{i+1} pᵢ⁻¹` — equal to the sum of the diagonal
/// coefficients of [`build_toda`], and restricting at every fixed point to
/// `Σⱼ Λⱼ⁻¹` under the SL normalization.
pub fn eigenvalue(rank: usize) -> RationalFunction {
    let mut e = RationalFunction::zero();
    for i in 0..=rank {
        e = e.add(&mono_rf(p_class(i + 1, rank).mul(&p_class(i, rank).inv())));
    }
    e
}

/// Apply an operator to a degree-graded series truncation. Degrees absent
/// from the map count as zero, so the result is exact on any downward-closed
/// degree set.
pub fn apply(
    op: &DifferenceOperator,
    series: &BTreeMap<DegreeVector, RationalFunction>,
) -> Result<BTreeMap<DegreeVector, RationalFunction>> {
    let mut out = BTreeMap::new();
    for d in series.keys() {
        if d.len() != op.rank {
            return Err(Error::RankMismatch { op: op.rank, series: d.len() });
        }
        let mut acc = RationalFunction::zero();
        for t in &op.terms {
            if d.0.iter().zip(&t.m).any(|(&di, &mi)| di < mi) {
                continue;
            }
            let shifted = DegreeVector(d.0.iter().zip(&t.m).map(|(&di, &mi)| di - mi).collect());
            let source = match series.get(&shifted) {
                Some(v) => v,
                None => continue,
            };
            let pairing: i32 = t.s.iter().zip(&d.0).map(|(&si, &di)| si * di as i32).sum();
            acc = acc.add(
                &t.c.mul(&mono_rf(Monomial::var_pow(Variable::Q, pairing)))
                    .mul(source),
            );
        }
        out.insert(d.clone(), acc);
    }
    Ok(out)
}

/// Invert a polynomial, splitting off binomial factors so denominators stay
/// in the same factored shape the localization engine produces.
fn invert_factored(p: &LaurentPolynomial) -> RationalFunction {
    let (s, mono, factors, rest) = p.factor_binomials();
    let mut den = vec![(LaurentPolynomial::monomial(s, mono), 1u32)];
    den.extend(factors);
    if !rest.is_one() {
        den.push((rest, 1));
    }
    RationalFunction::new(LaurentPolynomial::one(), den)
}

/// Solve the eigenfunction recursion `op · J = e · J` degree by degree in
/// determinant classes, seeded with `J₀` equal to the degree-zero level
/// twist. At each nonzero degree the diagonal bracket
/// `Σ_{m=0} c·(q^{⟨s,d⟩}−1)` is invertible because the diagonal coefficients
/// are distinct monomials; a vanishing bracket is reported as
/// [`Error::DegenerateBracket`] rather than unwrapped, as a tripwire.
pub fn recursion_solve(
    op: &DifferenceOperator,
    level: &LevelSpec,
    cap: u32,
) -> Result<BTreeMap<DegreeVector, RationalFunction>> {
    if level.num_blocks() != op.rank {
        return Err(Error::RankMismatch { op: op.rank, series: level.num_blocks() });
    }
    let mut degrees = DegreeVector::up_to(op.rank, cap);
    degrees.sort_by_key(|d| (d.total(), d.clone()));
    let mut j: BTreeMap<DegreeVector, RationalFunction> = BTreeMap::new();
    for d in degrees {
        if d.is_zero() {
            j.insert(d, level_twist(&DegreeVector::zero(op.rank), level));
            continue;
        }
        let mut bracket = RationalFunction::zero();
        let mut rhs = RationalFunction::zero();
        for t in &op.terms {
            let pairing: i32 = t.s.iter().zip(&d.0).map(|(&si, &di)| si * di as i32).sum();
            if t.m.iter().all(|&mi| mi == 0) {
                // c·(q^{⟨s,d⟩} − 1)
                let swing = mono_rf(Monomial::var_pow(Variable::Q, pairing))
                    .sub(&RationalFunction::one());
                bracket = bracket.add(&t.c.mul(&swing));
            } else if d.0.iter().zip(&t.m).all(|(&di, &mi)| di >= mi) {
                let shifted =
                    DegreeVector(d.0.iter().zip(&t.m).map(|(&di, &mi)| di - mi).collect());
                let source = j.get(&shifted).expect("lower degrees already solved");
                rhs = rhs.add(
                    &t.c.neg()
                        .mul(&mono_rf(Monomial::var_pow(Variable::Q, pairing)))
                        .mul(source),
                );
            }
        }
        if bracket.is_zero() {
            return Err(Error::DegenerateBracket { d: d.0.clone() });
        }
        let inv = invert_factored(bracket.num()).mul_poly(&bracket.den_expanded());
        j.insert(d, rhs.mul(&inv));
    }
    Ok(j)
}

/// One failed eigen-relation check: the degree, the fixed point, and the
/// exact nonzero residual `(op·J)_d − e·J_d`.
#[derive(Clone, PartialEq, Debug)]
pub struct EigenFailure {
    pub d: DegreeVector,
    pub sigma: Vec<u16>,
    pub residual: RationalFunction,
}

/// Result of checking the eigen-relation at every fixed point and degree.
#[derive(Clone, PartialEq, Debug)]
pub struct VerifyReport {
    pub pass: bool,
    pub failures: Vec<EigenFailure>,
}

/// Check `op · J = e · J` for a complete-flag series: restrict the series,
/// the operator coefficients, and the eigenvalue to every fixed point, apply
/// the operator, and demand an identically zero residual at each degree.
/// Fixed points are processed with up to `jobs` threads; the report is
/// ordered deterministically regardless.
pub fn verify_eigen(
    op: &DifferenceOperator,
    series: &QSeries,
    jobs: usize,
) -> Result<VerifyReport> {
    if !series.flag.is_complete() || series.flag.num_blocks() != op.rank {
        return Err(Error::RankMismatch { op: op.rank, series: series.flag.num_blocks() });
    }
    let e = eigenvalue(op.rank);
    let points = FixedPoint::all(op.rank + 1);
    let per_point = parallel_map(jobs, &points, |sigma| -> Result<Vec<EigenFailure>> {
        let restricted = series_to_fixed_point(series, sigma)?;
        let op_sigma = op.restrict(sigma)?;
        let e_sigma = RestrictionMap::new(sigma.clone()).apply(&e)?;
        let applied = apply(&op_sigma, &restricted)?;
        let mut failures = Vec::new();
        for (d, got) in applied {
            let residual = got.sub(&e_sigma.mul(&restricted[&d]));
            if !residual.is_zero() {
                failures.push(EigenFailure { d, sigma: sigma.sigma().to_vec(), residual });
            }
        }
        Ok(failures)
    });
    let mut failures = Vec::new();
    for f in per_point {
        failures.extend(f?);
    }
    Ok(VerifyReport { pass: failures.is_empty(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::FlagType;
    use crate::localization::i_series;
    use crate::ratfun::rf_eq;

    fn pv(i: u16) -> Variable {
        Variable::p(i)
    }

    fn one_minus(pairs: &[(Variable, i32)]) -> LaurentPolynomial {
        LaurentPolynomial::one().sub(&LaurentPolynomial::monomial(
            scalar_int(1),
            Monomial::from_pairs(pairs.iter().copied()),
        ))
    }

    #[test]
    fn rank_one_term_list() {
        let op = build_toda(1, &LevelSpec::trivial(1)).unwrap();
        let expect = vec![
            OperatorTerm {
                c: mono_rf(Monomial::var_pow(pv(1), -1)),
                m: vec![0],
                s: vec![-1],
            },
            OperatorTerm { c: mono_rf(Monomial::var(pv(1))), m: vec![0], s: vec![1] },
            OperatorTerm {
                c: mono_rf(Monomial::var_pow(pv(1), -1)).neg(),
                m: vec![1],
                s: vec![-1],
            },
        ];
        let expect_op = DifferenceOperator::new(1, expect).unwrap();
        assert_eq!(op, expect_op);
        assert_eq!(op.terms().len(), 3);
    }

    #[test]
    fn leveled_shift_term_carries_q_power() {
        // rank 1, level 2: shift term (−p₁ q⁻²; (1); (1)).
        let level = LevelSpec::from_pairs(1, &[(1, 2)]).unwrap();
        let op = build_toda(1, &level).unwrap();
        let shift: Vec<_> = op.terms().iter().filter(|t| t.m == vec![1]).collect();
        assert_eq!(shift.len(), 1);
        assert_eq!(shift[0].s, vec![1]);
        assert_eq!(
            shift[0].c,
            mono_rf(Monomial::from_pairs([(pv(1), 1), (Variable::Q, -2)])).neg()
        );
        // Diagonal terms are independent of the level.
        let base = build_toda(1, &LevelSpec::trivial(1)).unwrap();
        let diag = |o: &DifferenceOperator| -> Vec<OperatorTerm> {
            o.terms().iter().filter(|t| t.m == vec![0]).cloned().collect()
        };
        assert_eq!(diag(&op), diag(&base));
    }

    #[test]
    fn composition_is_associative_in_normal_form() {
        let a = build_toda(2, &LevelSpec::trivial(2)).unwrap();
        let b = build_toda(2, &LevelSpec::from_pairs(2, &[(1, 1)]).unwrap()).unwrap();
        let c = build_toda(2, &LevelSpec::from_pairs(2, &[(2, 3)]).unwrap()).unwrap();
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn recursion_reference_solutions() {
        // rank 1, degree 1: 1/((1−q)(1−p₁²q)).
        let op = build_toda(1, &LevelSpec::trivial(1)).unwrap();
        let j = recursion_solve(&op, &LevelSpec::trivial(1), 1).unwrap();
        assert!(j[&DegreeVector(vec![0])].is_one());
        let expect = RationalFunction::new(
            LaurentPolynomial::one(),
            vec![
                (one_minus(&[(Variable::Q, 1)]), 1),
                (one_minus(&[(pv(1), 2), (Variable::Q, 1)]), 1),
            ],
        );
        assert!(rf_eq(&j[&DegreeVector(vec![1])], &expect));

        // rank 3, degree eᵢ: 1/((1−q)(1−pᵢ²p_{i−1}⁻¹p_{i+1}⁻¹q)).
        let op3 = build_toda(3, &LevelSpec::trivial(3)).unwrap();
        let j3 = recursion_solve(&op3, &LevelSpec::trivial(3), 1).unwrap();
        for i in 1..=3usize {
            let mut d = vec![0u32; 3];
            d[i - 1] = 1;
            let mut pairs = vec![(pv(i as u16), 2), (Variable::Q, 1)];
            if i > 1 {
                pairs.push((pv(i as u16 - 1), -1));
            }
            if i < 3 {
                pairs.push((pv(i as u16 + 1), -1));
            }
            let expect = RationalFunction::new(
                LaurentPolynomial::one(),
                vec![(one_minus(&[(Variable::Q, 1)]), 1), (one_minus(&pairs), 1)],
            );
            assert!(
                rf_eq(&j3[&DegreeVector(d.clone())], &expect),
                "reference solution failed at e_{i}"
            );
        }
    }

    #[test]
    fn solved_series_satisfies_the_relation_before_restriction() {
        for (rank, level) in [
            (1usize, LevelSpec::trivial(1)),
            (2, LevelSpec::from_pairs(2, &[(1, 1)]).unwrap()),
        ] {
            let op = build_toda(rank, &level).unwrap();
            let j = recursion_solve(&op, &level, 2).unwrap();
            let applied = apply(&op, &j).unwrap();
            let e = eigenvalue(rank);
            for (d, got) in applied {
                assert!(
                    got.sub(&e.mul(&j[&d])).is_zero(),
                    "relation failed at degree {d} for rank {rank}"
                );
            }
        }
    }

    #[test]
    fn level_twist_transports_solutions() {
        // J^{level}_d = twist(d) · J^{0}_d, rank 1, level 1, degrees ≤ 2.
        let rank = 1;
        let level = LevelSpec::from_pairs(1, &[(1, 1)]).unwrap();
        let trivial = LevelSpec::trivial(1);
        let leveled = recursion_solve(&build_toda(rank, &level).unwrap(), &level, 2).unwrap();
        let plain = recursion_solve(&build_toda(rank, &trivial).unwrap(), &trivial, 2).unwrap();
        for (d, lhs) in &leveled {
            let rhs = level_twist(d, &level).mul(&plain[d]);
            assert!(rf_eq(lhs, &rhs), "twist transport failed at {d}");
        }
    }

    #[test]
    fn localization_series_passes_eigen_check() {
        // P¹: the degree-≤1 I-function is an eigenfunction at both fixed points.
        let flag = FlagType::complete(2);
        let level = LevelSpec::trivial(1);
        let series = i_series(&flag, 1, &level, true, 1).unwrap();
        let op = build_toda(1, &level).unwrap();
        let report = verify_eigen(&op, &series, 2).unwrap();
        assert!(report.pass, "failures: {:?}", report.failures);

        // Tampering with one coefficient is detected and located.
        let mut broken = series.clone();
        let d1 = DegreeVector(vec![1]);
        let bad = broken.coeffs[&d1].mul(&RationalFunction::constant(scalar_int(2)));
        broken.coeffs.insert(d1.clone(), bad);
        let report = verify_eigen(&op, &broken, 1).unwrap();
        assert!(!report.pass);
        assert!(report.failures.iter().any(|f| f.d == d1));
    }

    #[test]
    fn diagonal_sum_is_the_eigenvalue() {
        for rank in 1..=3usize {
            let op = build_toda(rank, &LevelSpec::trivial(rank)).unwrap();
            let mut diag = RationalFunction::zero();
            for t in op.terms() {
                if t.m.iter().all(|&mi| mi == 0) {
                    diag = diag.add(&t.c);
                }
            }
            assert!(rf_eq(&diag, &eigenvalue(rank)));
        }
    }
}
