//! Fixed-point restriction and equality in the equivariant K-ring.
//!
//! Torus fixed points of the complete flag variety in ℂⁿ are permutations of
//! the coordinate lines. Restricting a class to a fixed point sends each line
//! class to the inverse ambient character it picks out, with the last ambient
//! character eliminated by the SL normalization `∏ⱼ Λⱼ = 1`. Two expressions
//! are equal as K-classes when all their fixed-point restrictions agree as
//! rational functions — a strictly coarser test than syntactic equality.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::degree::DegreeVector;
use crate::error::{Error, Result};
use crate::localization::QSeries;
use crate::par::parallel_map;
use crate::poly::{LaurentPolynomial, Monomial};
use crate::ratfun::{rf_eq, rf_eq_seeded, RationalFunction};
use crate::scalar::scalar_int;
use crate::vars::Variable;

/// A torus fixed point: a permutation of the `n` coordinate lines, stored as
/// the images of positions `0..n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FixedPoint {
    sigma: Vec<u16>,
}

impl FixedPoint {
    /// `sigma` must be a permutation of `0..sigma.len()`.
    pub fn new(sigma: Vec<u16>) -> Result<Self> {
        let n = sigma.len();
        let mut seen = vec![false; n];
        for &img in &sigma {
            if img as usize >= n || seen[img as usize] {
                return Err(Error::invalid(
                    "fixed point",
                    format!("{sigma:?} is not a permutation of 0..{n}"),
                ));
            }
            seen[img as usize] = true;
        }
        Ok(FixedPoint { sigma })
    }

    pub fn identity(n: usize) -> Self {
        FixedPoint { sigma: (0..n as u16).collect() }
    }

    /// All `n!` fixed points in lexicographic order of their image vectors.
    pub fn all(n: usize) -> Vec<FixedPoint> {
        let mut out: Vec<FixedPoint> = (0..n as u16)
            .permutations(n)
            .map(|sigma| FixedPoint { sigma })
            .collect();
        out.sort();
        out
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn image(&self, i: usize) -> u16 {
        self.sigma[i]
    }

    pub fn sigma(&self) -> &[u16] {
        &self.sigma
    }
}

impl std::fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.sigma.iter().join(","))
    }
}

/// Restriction to one fixed point, as a variable-by-variable monomial map.
#[derive(Clone, Debug)]
pub struct RestrictionMap {
    sigma: FixedPoint,
}

impl RestrictionMap {
    pub fn new(sigma: FixedPoint) -> Self {
        RestrictionMap { sigma }
    }

    /// Image of the ambient character `Λⱼ` under the SL normalization: `Λⱼ`
    /// itself for `j < n−1`, and `(Λ₀⋯Λ_{n−2})⁻¹` for the eliminated last one.
    fn lambda_image(&self, j: u16) -> Monomial {
        let r = self.sigma.n() - 1;
        if (j as usize) < r {
            Monomial::var(Variable::lambda(j))
        } else {
            Monomial::from_pairs((0..r as u16).map(|t| (Variable::lambda(t), -1)))
        }
    }

    /// Monomial image of a single variable:
    /// `ℓᵢ ↦ Λ_{σ(i−1)}⁻¹`, `pᵢ ↦ ∏_{m≤i} Λ_{σ(m−1)}⁻¹`, `q` and the surviving
    /// `Λⱼ` fixed. Block classes and auxiliary variables are unsupported.
    pub fn image(&self, v: Variable) -> Result<Monomial> {
        let n = self.sigma.n();
        match v {
            Variable::Q => Ok(Monomial::var(Variable::Q)),
            Variable::Lambda(j) if (j as usize) < n => Ok(self.lambda_image(j)),
            Variable::Ell(0, i) if i >= 1 && (i as usize) <= n => {
                Ok(self.lambda_image(self.sigma.image(i as usize - 1)).inv())
            }
            Variable::P(i) if i >= 1 && (i as usize) <= n => {
                let mut m = Monomial::one();
                for step in 1..=i as usize {
                    m = m.mul(&self.lambda_image(self.sigma.image(step - 1)).inv());
                }
                Ok(m)
            }
            other => Err(Error::UnsupportedVariable(other.to_string())),
        }
    }

    pub fn apply(&self, f: &RationalFunction) -> Result<RationalFunction> {
        let mut env = BTreeMap::new();
        for v in f.support_vars() {
            let img = self.image(v)?;
            if img != Monomial::var(v) {
                env.insert(v, RationalFunction::monomial(scalar_int(1), img));
            }
        }
        if env.is_empty() {
            return Ok(f.clone());
        }
        f.substitute(&env)
    }
}

/// Restrict a class on the complete flag variety to one fixed point.
pub fn fixed_point_restrict(f: &RationalFunction, sigma: &FixedPoint) -> Result<RationalFunction> {
    RestrictionMap::new(sigma.clone()).apply(f)
}

/// Equality in the equivariant K-ring of the complete flag variety of rank
/// `r` (ambient ℂ^{r+1}): all `(r+1)!` fixed-point restrictions must agree.
/// Scans fixed points in lexicographic order and stops at the first
/// disagreement.
pub fn kclass_eq(f: &RationalFunction, g: &RationalFunction, r: usize) -> Result<bool> {
    for sigma in FixedPoint::all(r + 1) {
        if !rf_eq(
            &fixed_point_restrict(f, &sigma)?,
            &fixed_point_restrict(g, &sigma)?,
        ) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of a K-class comparison: the lexicographically first failing fixed
/// point, if any.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KClassReport {
    pub equal: bool,
    pub first_failure: Option<FixedPoint>,
    pub points_checked: usize,
}

/// [`kclass_eq`] with a deterministic probe seed and a thread budget; checks
/// every fixed point and reports the lexicographically first failure.
pub fn kclass_eq_report(
    f: &RationalFunction,
    g: &RationalFunction,
    r: usize,
    seed: u64,
    jobs: usize,
) -> Result<KClassReport> {
    let points = FixedPoint::all(r + 1);
    let verdicts = parallel_map(jobs, &points, |sigma| -> Result<bool> {
        Ok(rf_eq_seeded(
            &fixed_point_restrict(f, sigma)?,
            &fixed_point_restrict(g, sigma)?,
            seed,
        ))
    });
    let mut first_failure = None;
    for (sigma, verdict) in points.iter().zip(verdicts) {
        if !verdict? && first_failure.is_none() {
            first_failure = Some(sigma.clone());
        }
    }
    Ok(KClassReport {
        equal: first_failure.is_none(),
        first_failure,
        points_checked: points.len(),
    })
}

/// Restrict every coefficient of a complete-flag series to one fixed point.
pub fn series_to_fixed_point(
    series: &QSeries,
    sigma: &FixedPoint,
) -> Result<BTreeMap<DegreeVector, RationalFunction>> {
    if !series.flag.is_complete() || series.flag.n() as usize != sigma.n() {
        return Err(Error::invalid(
            "restriction",
            format!("series on {} does not match a fixed point of S_{}", series.flag, sigma.n()),
        ));
    }
    let map = RestrictionMap::new(sigma.clone());
    series
        .coeffs
        .iter()
        .map(|(d, c)| Ok((d.clone(), map.apply(c)?)))
        .collect()
}

/// The standard ordered root classes `v_a v_b⁻¹`, `a < b`, of a block with
/// the given line variables.
pub fn standard_root_classes(vars: &[Variable]) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..vars.len() {
        for b in (a + 1)..vars.len() {
            out.push(Monomial::from_pairs([(vars[a], 1), (vars[b], -1)]));
        }
    }
    out
}

/// Weyl symmetrization over the full permutation group of `vars`:
/// `Σ_w w(expr) / ∏_ρ (1 − w(ρ))`, the fixed-point form of the pushforward
/// along the Borel quotient. Symmetrizing `1` over the standard root classes
/// gives `1`.
pub fn weyl_symmetrize(
    expr: &RationalFunction,
    vars: &[Variable],
    roots: &[Monomial],
) -> RationalFunction {
    let k = vars.len();
    let mut total = RationalFunction::zero();
    for perm in (0..k).permutations(k) {
        let env: BTreeMap<Variable, RationalFunction> = vars
            .iter()
            .enumerate()
            .filter(|&(i, _)| perm[i] != i)
            .map(|(i, v)| (*v, RationalFunction::var(vars[perm[i]])))
            .collect();
        let mut term = expr
            .substitute(&env)
            .expect("relabeling variables cannot vanish");
        for rho in roots {
            let img = rho.map_vars(|v| match vars.iter().position(|u| *u == v) {
                Some(i) => vars[perm[i]],
                None => v,
            });
            term = term.mul(&RationalFunction::new(
                LaurentPolynomial::one(),
                vec![(
                    LaurentPolynomial::one()
                        .sub(&LaurentPolynomial::monomial(scalar_int(1), img)),
                    1,
                )],
            ));
        }
        total = total.add(&term);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::{DegreeMatrix, FlagType};
    use crate::localization::matrix_contribution;

    fn mono_rf(pairs: &[(Variable, i32)]) -> RationalFunction {
        RationalFunction::monomial(scalar_int(1), Monomial::from_pairs(pairs.iter().copied()))
    }

    #[test]
    fn restriction_basic_images() {
        // r = 1, identity: ℓ₁ ↦ Λ₀⁻¹ and p₁²q ↦ Λ₀⁻²q.
        let id = FixedPoint::identity(2);
        let l1 = RationalFunction::var(Variable::ell_c(1));
        assert_eq!(
            fixed_point_restrict(&l1, &id).unwrap(),
            mono_rf(&[(Variable::lambda(0), -1)])
        );
        let p1sq_q = mono_rf(&[(Variable::p(1), 2), (Variable::Q, 1)]);
        assert_eq!(
            fixed_point_restrict(&p1sq_q, &id).unwrap(),
            mono_rf(&[(Variable::lambda(0), -2), (Variable::Q, 1)])
        );
        // Under SL normalization Λ₁ ↦ Λ₀⁻¹, so the swap sends ℓ₁ ↦ Λ₀.
        let swap = FixedPoint::new(vec![1, 0]).unwrap();
        assert_eq!(
            fixed_point_restrict(&l1, &swap).unwrap(),
            mono_rf(&[(Variable::lambda(0), 1)])
        );
        // Block classes cannot be restricted.
        assert!(fixed_point_restrict(&RationalFunction::var(Variable::ell(1, 1)), &id).is_err());
    }

    #[test]
    fn restriction_of_projective_line_contribution() {
        // Restricting the d = 1 contribution on P¹ at the identity gives
        // 1/((1−q)(1−Λ₀⁻²q)) — the same shape as the recursion solution with
        // p₁ ↦ Λ₀⁻¹.
        let flag = FlagType::complete(2);
        let c = matrix_contribution(&flag, &DegreeMatrix::new(vec![vec![1]]), true).unwrap();
        let got = fixed_point_restrict(&c, &FixedPoint::identity(2)).unwrap();
        let expect = RationalFunction::new(
            LaurentPolynomial::one(),
            vec![
                (
                    LaurentPolynomial::one().sub(&LaurentPolynomial::var(Variable::Q)),
                    1,
                ),
                (
                    LaurentPolynomial::one().sub(&LaurentPolynomial::monomial(
                        scalar_int(1),
                        Monomial::from_pairs([(Variable::lambda(0), -2), (Variable::Q, 1)]),
                    )),
                    1,
                ),
            ],
        );
        assert!(rf_eq(&got, &expect));
    }

    #[test]
    fn kclass_equality_examples() {
        // p₁ + p₁⁻¹ and Λ₀⁻¹ + Λ₁⁻¹ agree at both fixed points of r = 1.
        let lhs = mono_rf(&[(Variable::p(1), 1)]).add(&mono_rf(&[(Variable::p(1), -1)]));
        let rhs = mono_rf(&[(Variable::lambda(0), -1)]).add(&mono_rf(&[(Variable::lambda(1), -1)]));
        assert!(kclass_eq(&lhs, &rhs, 1).unwrap());
        assert!(kclass_eq(&lhs, &lhs, 1).unwrap());
        // ℓ₁ and ℓ₂ restrict differently already at the identity.
        let l1 = RationalFunction::var(Variable::ell_c(1));
        let l2 = RationalFunction::var(Variable::ell_c(2));
        assert!(!kclass_eq(&l1, &l2, 1).unwrap());
        let report = kclass_eq_report(&l1, &l2, 1, 0, 2).unwrap();
        assert!(!report.equal);
        assert_eq!(report.first_failure, Some(FixedPoint::identity(2)));
        assert_eq!(report.points_checked, 2);
    }

    #[test]
    fn restricted_line_classes_sum_to_the_eigenvalue() {
        // Σᵢ ℓᵢ|_σ = Σⱼ Λⱼ⁻¹ (SL-normalized) at every fixed point, r = 2.
        let n = 3;
        let mut rhs = RationalFunction::zero();
        let map = RestrictionMap::new(FixedPoint::identity(n));
        for j in 0..n as u16 {
            rhs = rhs.add(&RationalFunction::monomial(
                scalar_int(1),
                map.lambda_image(j).inv(),
            ));
        }
        for sigma in FixedPoint::all(n) {
            let mut lhs = RationalFunction::zero();
            for i in 1..=n as u16 {
                lhs = lhs.add(
                    &fixed_point_restrict(&RationalFunction::var(Variable::ell_c(i)), &sigma)
                        .unwrap(),
                );
            }
            assert!(rf_eq(&lhs, &rhs), "eigenvalue identity failed at {sigma}");
        }
    }

    #[test]
    fn weyl_symmetrization_reference_values() {
        let vars = [Variable::ell_c(1), Variable::ell_c(2)];
        let roots = standard_root_classes(&vars);
        assert_eq!(roots.len(), 1);
        // Symmetrizing 1 over two or three variables gives 1.
        let one = weyl_symmetrize(&RationalFunction::one(), &vars, &roots);
        assert!(rf_eq(&one, &RationalFunction::one()));
        let vars3 = [Variable::ell_c(1), Variable::ell_c(2), Variable::ell_c(3)];
        let one3 = weyl_symmetrize(&RationalFunction::one(), &vars3, &standard_root_classes(&vars3));
        assert!(rf_eq(&one3, &RationalFunction::one()));
        // Symmetrizing ℓ₁: ℓ₁/(1−ℓ₁ℓ₂⁻¹) + ℓ₂/(1−ℓ₂ℓ₁⁻¹).
        let got = weyl_symmetrize(&RationalFunction::var(vars[0]), &vars, &roots);
        let term = |a: Variable, b: Variable| {
            RationalFunction::new(
                LaurentPolynomial::var(a),
                vec![(
                    LaurentPolynomial::one().sub(&LaurentPolynomial::monomial(
                        scalar_int(1),
                        Monomial::from_pairs([(a, 1), (b, -1)]),
                    )),
                    1,
                )],
            )
        };
        let expect = term(vars[0], vars[1]).add(&term(vars[1], vars[0]));
        assert!(rf_eq(&got, &expect));
        // The output is invariant under swapping the variables.
        let mut swap = BTreeMap::new();
        swap.insert(vars[0], RationalFunction::var(vars[1]));
        swap.insert(vars[1], RationalFunction::var(vars[0]));
        assert!(rf_eq(&got.substitute(&swap).unwrap(), &got));
    }
}
