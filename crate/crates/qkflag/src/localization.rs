//! Fixed-locus localization engine.
//!
//! Each degree matrix indexes a torus-fixed locus on the graph quasimap
//! space; its contribution is a product of telescoped q-Pochhammer ratios,
//! one per tangent weight between adjacent blocks (reciprocal position) and
//! one per gauge root within a block (direct position). Coefficients of the
//! I-function assemble these over admissible matrices — directly for
//! complete flags, via row-permutation orbits of sorted representatives for
//! partial flags — and carry a determinant-level twist.
//!
//! [`abelianize`] recomputes a contribution from raw character data (sparse
//! weight vectors on the line slots) instead of the adjacency recipe; the two
//! routes are compared factor-for-factor in tests and must never be merged.

use std::collections::BTreeMap;

use crate::degree::{enumerate_admissible, orbit_expand, DegreeMatrix, DegreeVector, FlagType};
use crate::error::{Error, Result};
use crate::par::parallel_map;
use crate::poly::{LaurentPolynomial, Monomial};
use crate::ratfun::RationalFunction;
use crate::scalar::{scalar_pow, Scalar};
use crate::vars::Variable;

/// Determinant levels, one integer per flag step (0 = untwisted).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LevelSpec {
    levels: Vec<i32>,
}

impl LevelSpec {
    pub fn trivial(blocks: usize) -> Self {
        LevelSpec { levels: vec![0; blocks] }
    }

    /// From 1-based `(block, level)` pairs; unnamed blocks stay at level 0.
    pub fn from_pairs(blocks: usize, pairs: &[(u32, i32)]) -> Result<Self> {
        let mut levels = vec![0i32; blocks];
        let mut seen = vec![false; blocks];
        for &(i, l) in pairs {
            if i == 0 || i as usize > blocks {
                return Err(Error::BadLevelIndex { i, max: blocks as u32 });
            }
            if seen[i as usize - 1] {
                return Err(Error::invalid("level", format!("block {i} listed twice")));
            }
            seen[i as usize - 1] = true;
            levels[i as usize - 1] = l;
        }
        Ok(LevelSpec { levels })
    }

    pub fn num_blocks(&self) -> usize {
        self.levels.len()
    }

    /// Level of block `i` (0-based).
    pub fn level(&self, i: usize) -> i32 {
        self.levels[i]
    }

    pub fn levels(&self) -> &[i32] {
        &self.levels
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|&l| l == 0)
    }

    /// Nonzero levels as 1-based pairs, for serialization.
    pub fn pairs(&self) -> Vec<(u32, i32)> {
        self.levels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != 0)
            .map(|(i, &l)| (i as u32 + 1, l))
            .collect()
    }
}

/// The K-theory class attached to line `slot` of `block` (both 0-based;
/// `block == num_blocks` is the ambient row): a collapsed class `ℓ_j` on
/// complete flags, a block class `ℓ_{i,j}` otherwise, and `Λ_j⁻¹` (or `1`
/// non-equivariantly) on the ambient row.
pub fn line_monomial(flag: &FlagType, equivariant: bool, block: usize, slot: usize) -> Monomial {
    let blocks = flag.num_blocks();
    if block < blocks {
        if flag.is_complete() {
            Monomial::var(Variable::ell_c(slot as u16 + 1))
        } else {
            Monomial::var(Variable::ell(block as u16 + 1, slot as u16 + 1))
        }
    } else if equivariant {
        Monomial::var_pow(Variable::lambda(slot as u16), -1)
    } else {
        Monomial::one()
    }
}

/// The variable for line `slot` of `block` (1-based), honoring the
/// complete-flag collapse.
pub fn line_variable(flag: &FlagType, block: u16, slot: u16) -> Variable {
    if flag.is_complete() {
        Variable::ell_c(slot)
    } else {
        Variable::ell(block, slot)
    }
}

/// Vertex weight factor: the reciprocal-position q-Pochhammer ratio
/// `1 / ∏(1−xqᵏ)` over `k = 1..m` (or the numerator `∏(1−xqᵏ)`, `k = m+1..0`,
/// when `m ≤ −1` — possibly zero when `x = 1`).
pub fn weight_factor(x: &Monomial, m: i32) -> RationalFunction {
    let mut b = ContributionBuilder::new();
    b.pochhammer(x, m, -1);
    b.finish()
}

/// Gauge root factor: the direct-position q-Pochhammer ratio, `∏(1−xqᵏ)` over
/// `k = 1..m` for `m ≥ 1`, or `1 / ∏(1−xqᵏ)` over `k = m+1..0` for `m ≤ −1`.
/// Panics if a denominator factor vanishes (`x = 1` with `m ≤ −1`).
pub fn root_factor(x: &Monomial, m: i32) -> RationalFunction {
    let mut b = ContributionBuilder::new();
    b.pochhammer(x, m, 1);
    b.finish()
}

/// Accumulates a product of binomials `(1 − x qᵏ)^{±1}` in factored form,
/// canceling identical factors between numerator and denominator as it goes.
struct ContributionBuilder {
    scalar: Scalar,
    mono: Monomial,
    factors: BTreeMap<LaurentPolynomial, i32>,
    zero: bool,
}

impl ContributionBuilder {
    fn new() -> Self {
        ContributionBuilder {
            scalar: crate::scalar::scalar_int(1),
            mono: Monomial::one(),
            factors: BTreeMap::new(),
            zero: false,
        }
    }

    /// Multiply by `(1 − x qᵏ)^e`.
    fn binomial_power(&mut self, x: &Monomial, qexp: i32, e: i32) {
        if self.zero || e == 0 {
            return;
        }
        let full = x.mul(&Monomial::var_pow(Variable::Q, qexp));
        if full.is_one() {
            if e > 0 {
                self.zero = true;
            } else {
                panic!("vanishing binomial (1 - q^0) in a denominator");
            }
            return;
        }
        let p = LaurentPolynomial::one()
            .sub(&LaurentPolynomial::monomial(crate::scalar::scalar_int(1), full));
        let (s, m, canon) = p.normalize_factor();
        self.scalar *= scalar_pow(&s, e);
        self.mono = self.mono.mul(&m.pow(e));
        let slot = self.factors.entry(canon.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&canon);
        }
    }

    /// Multiply by the telescoped q-Pochhammer ratio of class `x` and order
    /// `m`, in direct (`position = 1`) or reciprocal (`position = -1`) position.
    fn pochhammer(&mut self, x: &Monomial, m: i32, position: i32) {
        if m >= 1 {
            for k in 1..=m {
                self.binomial_power(x, k, position);
            }
        } else {
            for k in (m + 1)..=0 {
                self.binomial_power(x, k, -position);
            }
        }
    }

    fn times_monomial(&mut self, m: &Monomial) {
        self.mono = self.mono.mul(m);
    }

    fn finish(self) -> RationalFunction {
        if self.zero {
            return RationalFunction::zero();
        }
        let mut num = LaurentPolynomial::monomial(self.scalar, self.mono);
        let mut den = Vec::new();
        for (canon, e) in self.factors {
            if e > 0 {
                num = num.mul(&canon.pow(e as u32));
            } else {
                den.push((canon, (-e) as u32));
            }
        }
        RationalFunction::new(num, den)
    }
}

/// Localization contribution of one degree matrix: adjacent-block weight
/// factors times within-block root factors. Zero exactly when the matrix is
/// inadmissible on a matched collapsed slot.
pub fn matrix_contribution(
    flag: &FlagType,
    matrix: &DegreeMatrix,
    equivariant: bool,
) -> Result<RationalFunction> {
    matrix.check_shape(flag)?;
    let blocks = flag.num_blocks();
    let size = |b: usize| -> usize {
        if b < blocks {
            flag.rank(b) as usize
        } else {
            flag.n() as usize
        }
    };
    let entry = |b: usize, j: usize| -> i32 {
        if b < blocks {
            matrix.rows[b][j] as i32
        } else {
            0
        }
    };
    let mut builder = ContributionBuilder::new();
    for b in 0..blocks {
        for j in 0..size(b) {
            for jj in 0..size(b + 1) {
                let x = line_monomial(flag, equivariant, b, j)
                    .mul(&line_monomial(flag, equivariant, b + 1, jj).inv());
                builder.pochhammer(&x, entry(b, j) - entry(b + 1, jj), -1);
            }
        }
        for j in 0..size(b) {
            for jj in 0..size(b) {
                if j != jj {
                    let x = line_monomial(flag, equivariant, b, j)
                        .mul(&line_monomial(flag, equivariant, b, jj).inv());
                    builder.pochhammer(&x, entry(b, j) - entry(b, jj), 1);
                }
            }
        }
    }
    Ok(builder.finish())
}

/// Determinant-level twist for degree `d`:
/// `∏ᵢ pᵢ^{lᵢ(dᵢ−1)} · q^{Σᵢ lᵢ dᵢ(dᵢ−1)/2}` — a single monomial.
pub fn level_twist(d: &DegreeVector, level: &LevelSpec) -> RationalFunction {
    assert_eq!(d.len(), level.num_blocks(), "degree/level rank mismatch");
    let mut m = Monomial::one();
    let mut qexp = 0i32;
    for i in 0..d.len() {
        let l = level.level(i);
        let di = d.get(i) as i32;
        m = m.mul(&Monomial::var_pow(Variable::p(i as u16 + 1), l * (di - 1)));
        qexp += l * di * (di - 1) / 2;
    }
    RationalFunction::monomial(
        crate::scalar::scalar_int(1),
        m.mul(&Monomial::var_pow(Variable::Q, qexp)),
    )
}

fn has_sorted_rows(m: &DegreeMatrix) -> bool {
    m.rows.iter().all(|row| row.windows(2).all(|w| w[0] <= w[1]))
}

/// Degree-`d` coefficient of the level-twisted I-function.
///
/// Complete flags sum matrix contributions over all admissible matrices;
/// partial flags sum over full row-permutation orbits of the sorted
/// admissible representatives, which keeps the result Weyl-invariant in each
/// block.
pub fn i_coefficient(
    flag: &FlagType,
    d: &DegreeVector,
    level: &LevelSpec,
    equivariant: bool,
) -> Result<RationalFunction> {
    let admissible = enumerate_admissible(flag, d)?;
    let mut sum = RationalFunction::zero();
    if flag.is_complete() {
        for a in &admissible {
            sum = sum.add(&matrix_contribution(flag, a, equivariant)?);
        }
    } else {
        for rep in admissible.iter().filter(|a| has_sorted_rows(a)) {
            for member in orbit_expand(rep) {
                sum = sum.add(&matrix_contribution(flag, &member, equivariant)?);
            }
        }
    }
    Ok(level_twist(d, level).mul(&sum))
}

/// An I-function truncated at total degree `cap`, one exact coefficient per
/// degree vector.
#[derive(Clone, PartialEq, Debug)]
pub struct QSeries {
    pub flag: FlagType,
    pub cap: u32,
    pub level: LevelSpec,
    pub equivariant: bool,
    pub coeffs: BTreeMap<DegreeVector, RationalFunction>,
}

impl QSeries {
    pub fn coefficient(&self, d: &DegreeVector) -> Option<&RationalFunction> {
        self.coeffs.get(d)
    }
}

/// All I-function coefficients with `|d| ≤ cap`, computed with up to `jobs`
/// threads (the result is independent of `jobs`).
pub fn i_series(
    flag: &FlagType,
    cap: u32,
    level: &LevelSpec,
    equivariant: bool,
    jobs: usize,
) -> Result<QSeries> {
    let degrees = DegreeVector::up_to(flag.num_blocks(), cap);
    let computed = parallel_map(jobs, &degrees, |d| i_coefficient(flag, d, level, equivariant));
    let mut coeffs = BTreeMap::new();
    for (d, c) in degrees.into_iter().zip(computed) {
        coeffs.insert(d, c?);
    }
    Ok(QSeries {
        flag: flag.clone(),
        cap,
        level: level.clone(),
        equivariant,
        coeffs,
    })
}

/// A sparse character on the line slots: `((block, slot), coefficient)`
/// pairs, 0-based, with `block == num_blocks` the ambient row.
pub type Character = Vec<((usize, usize), i32)>;

/// Character data of the abelianized quotient: matter weights (reciprocal
/// position), gauge roots (direct position), and leveled determinant
/// characters.
#[derive(Clone, Debug)]
pub struct WeightData {
    pub weights: Vec<Character>,
    pub roots: Vec<Character>,
    pub levels: Vec<(Character, i32)>,
}

impl WeightData {
    /// Characters of the flag quotient: `ε_{i+1,j″} − ε_{i,j}` for every
    /// adjacent pair of lines (including the ambient row), `ε_{i,j′} − ε_{i,j}`
    /// for every ordered pair within a block, and `Σⱼ ε_{i,j}` for each
    /// leveled block.
    pub fn from_flag(flag: &FlagType, level: &LevelSpec) -> Result<WeightData> {
        if level.num_blocks() != flag.num_blocks() {
            return Err(Error::invalid("level", "one level slot per flag step"));
        }
        let blocks = flag.num_blocks();
        let size = |b: usize| -> usize {
            if b < blocks {
                flag.rank(b) as usize
            } else {
                flag.n() as usize
            }
        };
        let mut weights = Vec::new();
        let mut roots = Vec::new();
        let mut levels = Vec::new();
        for b in 0..blocks {
            for j in 0..size(b) {
                for jj in 0..size(b + 1) {
                    weights.push(vec![((b + 1, jj), 1), ((b, j), -1)]);
                }
                for jj in 0..size(b) {
                    if j != jj {
                        roots.push(vec![((b, jj), 1), ((b, j), -1)]);
                    }
                }
            }
            if level.level(b) != 0 {
                levels.push(((0..size(b)).map(|j| ((b, j), 1)).collect(), level.level(b)));
            }
        }
        Ok(WeightData { weights, roots, levels })
    }
}

/// Contribution of a degree matrix computed character-by-character from
/// [`WeightData`]: each character `ξ = Σ c·ε` turns into the class
/// `x = ∏ ℓ^{−c}` and order `m = −Σ c·a`, then enters as a q-Pochhammer
/// ratio (weights reciprocal, roots direct) or, for a determinant character
/// at level `l`, as the monomial `x^{l(m+1)} q^{l·m(m+1)/2}`.
///
/// This is the independent cross-check of [`matrix_contribution`]; at trivial
/// level the two must agree factor-for-factor.
pub fn abelianize(
    flag: &FlagType,
    matrix: &DegreeMatrix,
    level: &LevelSpec,
    equivariant: bool,
) -> Result<RationalFunction> {
    matrix.check_shape(flag)?;
    let data = WeightData::from_flag(flag, level)?;
    let blocks = flag.num_blocks();
    let entry = |b: usize, j: usize| -> i32 {
        if b < blocks {
            matrix.rows[b][j] as i32
        } else {
            0
        }
    };
    let eval = |ch: &Character| -> (Monomial, i32) {
        let mut x = Monomial::one();
        let mut m = 0i32;
        for &((b, j), c) in ch {
            x = x.mul(&line_monomial(flag, equivariant, b, j).pow(-c));
            m -= c * entry(b, j);
        }
        (x, m)
    };
    let mut builder = ContributionBuilder::new();
    for ch in &data.weights {
        let (x, m) = eval(ch);
        builder.pochhammer(&x, m, -1);
    }
    for ch in &data.roots {
        let (x, m) = eval(ch);
        builder.pochhammer(&x, m, 1);
    }
    for (ch, l) in &data.levels {
        let (x, m) = eval(ch);
        builder.times_monomial(
            &x.pow(l * (m + 1))
                .mul(&Monomial::var_pow(Variable::Q, l * m * (m + 1) / 2)),
        );
    }
    Ok(builder.finish())
}

/// Substitution sending each determinant class `pᵢ` to the product of its
/// block's line classes.
pub fn det_substitution(flag: &FlagType) -> BTreeMap<Variable, RationalFunction> {
    let mut env = BTreeMap::new();
    for (i, &r) in flag.ranks().iter().enumerate() {
        let mut m = Monomial::one();
        for j in 1..=r as u16 {
            m = m.mul(&Monomial::var(line_variable(flag, i as u16 + 1, j)));
        }
        env.insert(
            Variable::p(i as u16 + 1),
            RationalFunction::monomial(crate::scalar::scalar_int(1), m),
        );
    }
    env
}

/// Substitution sending every ambient class `Λⱼ` to 1 (the non-equivariant
/// limit).
pub fn lambda_one_substitution(flag: &FlagType) -> BTreeMap<Variable, RationalFunction> {
    (0..flag.n() as u16)
        .map(|j| (Variable::lambda(j), RationalFunction::one()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::rf_eq;
    use crate::scalar::scalar_int;

    fn one_minus(pairs: &[(Variable, i32)]) -> LaurentPolynomial {
        LaurentPolynomial::one().sub(&LaurentPolynomial::monomial(
            scalar_int(1),
            Monomial::from_pairs(pairs.iter().copied()),
        ))
    }

    fn recip_of(factors: Vec<LaurentPolynomial>) -> RationalFunction {
        RationalFunction::new(
            LaurentPolynomial::one(),
            factors.into_iter().map(|f| (f, 1)).collect(),
        )
    }

    #[test]
    fn weight_and_root_factor_reference_values() {
        let x = Monomial::var(Variable::aux("x").unwrap());
        let xv = Variable::aux("x").unwrap();
        // weight: (x, 1) → 1/(1−xq); (x, −1) → (1−x).
        assert!(rf_eq(
            &weight_factor(&x, 1),
            &recip_of(vec![one_minus(&[(xv, 1), (Variable::Q, 1)])]),
        ));
        assert!(rf_eq(
            &weight_factor(&x, -1),
            &RationalFunction::from_poly(one_minus(&[(xv, 1)])),
        ));
        assert!(weight_factor(&x, 0).is_one());
        // weight at x = 1 with negative order vanishes instead of panicking.
        assert!(weight_factor(&Monomial::one(), -2).is_zero());
        // root: mirrored positions.
        assert!(rf_eq(
            &root_factor(&x, 1),
            &RationalFunction::from_poly(one_minus(&[(xv, 1), (Variable::Q, 1)])),
        ));
        assert!(rf_eq(
            &root_factor(&x, -1),
            &recip_of(vec![one_minus(&[(xv, 1)])]),
        ));
    }

    #[test]
    fn projective_line_degree_one_contribution() {
        // P¹ = Fl(1;C²), d = 1, equivariant: 1/((1−ℓ₁Λ₀q)(1−ℓ₁Λ₁q)).
        let flag = FlagType::complete(2);
        let m = DegreeMatrix::new(vec![vec![1]]);
        let got = matrix_contribution(&flag, &m, true).unwrap();
        let l1 = Variable::ell_c(1);
        let expect = recip_of(vec![
            one_minus(&[(l1, 1), (Variable::lambda(0), 1), (Variable::Q, 1)]),
            one_minus(&[(l1, 1), (Variable::lambda(1), 1), (Variable::Q, 1)]),
        ]);
        assert!(rf_eq(&got, &expect));
    }

    #[test]
    fn complete_flag_c4_degree_one_coefficients() {
        let flag = FlagType::complete(4);
        let level = LevelSpec::trivial(3);
        let (l1, l2, l3) = (Variable::ell_c(1), Variable::ell_c(2), Variable::ell_c(3));
        let q = Variable::Q;

        let c100 = i_coefficient(&flag, &DegreeVector(vec![1, 0, 0]), &level, false).unwrap();
        let want100 = recip_of(vec![one_minus(&[(q, 1)]), one_minus(&[(l1, 1), (l2, -1), (q, 1)])]);
        assert!(rf_eq(&c100, &want100));

        let c010 = i_coefficient(&flag, &DegreeVector(vec![0, 1, 0]), &level, false).unwrap();
        let want010 = recip_of(vec![one_minus(&[(q, 1)]), one_minus(&[(l2, 1), (l3, -1), (q, 1)])]);
        assert!(rf_eq(&c010, &want010));

        // Degree (0,0,1) equivariantly, then restrict Λⱼ ↦ ℓ_{j+1}⁻¹ with
        // ℓ₄ = (ℓ₁ℓ₂ℓ₃)⁻¹: collapses to 1/((1−q)(1−ℓ₁ℓ₂ℓ₃²q)).
        let c001 = i_coefficient(&flag, &DegreeVector(vec![0, 0, 1]), &level, true).unwrap();
        let direct = RationalFunction::new(
            one_minus(&[(l3, 1), (l1, -1), (q, 1)])
                .mul(&one_minus(&[(l3, 1), (l2, -1), (q, 1)])),
            (0..4)
                .map(|j| (one_minus(&[(l3, 1), (Variable::lambda(j), 1), (q, 1)]), 1))
                .collect(),
        );
        assert!(rf_eq(&c001, &direct));

        let mut env = BTreeMap::new();
        for (j, v) in [l1, l2, l3].into_iter().enumerate() {
            env.insert(
                Variable::lambda(j as u16),
                RationalFunction::monomial(scalar_int(1), Monomial::var_pow(v, -1)),
            );
        }
        env.insert(
            Variable::lambda(3),
            RationalFunction::monomial(
                scalar_int(1),
                Monomial::from_pairs([(l1, 1), (l2, 1), (l3, 1)]),
            ),
        );
        let restricted = c001.substitute(&env).unwrap();
        let want001 = recip_of(vec![
            one_minus(&[(q, 1)]),
            one_minus(&[(l1, 1), (l2, 1), (l3, 2), (q, 1)]),
        ]);
        assert!(rf_eq(&restricted, &want001));
    }

    #[test]
    fn inadmissible_matrices_vanish_iff() {
        // Complete Fl(C³): contribution is zero exactly on inadmissible
        // matrices (entries ≤ 1 exhaustively).
        let flag = FlagType::complete(3);
        for a in 0..=1u32 {
            for b in 0..=1u32 {
                for c in 0..=1u32 {
                    let m = DegreeMatrix::new(vec![vec![a], vec![b, c]]);
                    let contrib = matrix_contribution(&flag, &m, false).unwrap();
                    assert_eq!(
                        contrib.is_zero(),
                        !m.is_admissible(),
                        "vanishing mismatch at {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn level_twist_reference_values() {
        let level1 = LevelSpec::from_pairs(1, &[(1, 1)]).unwrap();
        let level2 = LevelSpec::from_pairs(1, &[(1, 2)]).unwrap();
        // (d=2, l=1) → p₁q
        let t = level_twist(&DegreeVector(vec![2]), &level1);
        let expect = RationalFunction::monomial(
            scalar_int(1),
            Monomial::from_pairs([(Variable::p(1), 1), (Variable::Q, 1)]),
        );
        assert_eq!(t, expect);
        // (d=1, any l) → 1
        assert!(level_twist(&DegreeVector(vec![1]), &level2).is_one());
        // (d=0, l=2) → p₁⁻²
        let t0 = level_twist(&DegreeVector(vec![0]), &level2);
        assert_eq!(
            t0,
            RationalFunction::monomial(scalar_int(1), Monomial::var_pow(Variable::p(1), -2))
        );
    }

    #[test]
    fn degree_zero_coefficient_is_the_level_twist() {
        let flag = FlagType::complete(3);
        let level = LevelSpec::from_pairs(2, &[(1, 1), (2, 3)]).unwrap();
        let d0 = DegreeVector::zero(2);
        let c = i_coefficient(&flag, &d0, &level, true).unwrap();
        assert_eq!(c, level_twist(&d0, &level));
    }

    #[test]
    fn grassmannian_sums_full_orbits() {
        // Gr(2,4), d = 1: orbit expansion of the sorted representative equals
        // the direct sum over all compositions.
        let flag = FlagType::new(4, vec![2]).unwrap();
        let level = LevelSpec::trivial(1);
        let got = i_coefficient(&flag, &DegreeVector(vec![1]), &level, true).unwrap();
        let direct = matrix_contribution(&flag, &DegreeMatrix::new(vec![vec![0, 1]]), true)
            .unwrap()
            .add(&matrix_contribution(&flag, &DegreeMatrix::new(vec![vec![1, 0]]), true).unwrap());
        assert!(rf_eq(&got, &direct));
    }

    #[test]
    fn projective_space_closed_form_small() {
        // Gr(1,3) non-equivariant: coefficient of degree d is 1/∏ₖ(1−ℓqᵏ)³.
        let flag = FlagType::new(3, vec![1]).unwrap();
        let level = LevelSpec::trivial(1);
        let ell = line_variable(&flag, 1, 1);
        for d in 1..=2u32 {
            let got = i_coefficient(&flag, &DegreeVector(vec![d]), &level, false).unwrap();
            let mut den = Vec::new();
            for k in 1..=d as i32 {
                den.push((one_minus(&[(ell, 1), (Variable::Q, k)]), 3));
            }
            assert!(rf_eq(&got, &RationalFunction::new(LaurentPolynomial::one(), den)));
        }
    }

    #[test]
    fn abelianized_route_matches_reference_value() {
        // Gr(1,3), d = 1, equivariant: 1/∏_{j=0..2}(1−ℓ_{1,1}Λⱼq).
        let flag = FlagType::new(3, vec![1]).unwrap();
        let level = LevelSpec::trivial(1);
        let m = DegreeMatrix::new(vec![vec![1]]);
        let got = abelianize(&flag, &m, &level, true).unwrap();
        let ell = Variable::ell(1, 1);
        let expect = recip_of(
            (0..3)
                .map(|j| one_minus(&[(ell, 1), (Variable::lambda(j), 1), (Variable::Q, 1)]))
                .collect(),
        );
        assert!(rf_eq(&got, &expect));
    }

    #[test]
    fn abelianized_route_is_structurally_identical_at_trivial_level() {
        let cases = [
            (FlagType::complete(3), vec![vec![1u32], vec![0, 1]]),
            (FlagType::new(4, vec![2]).unwrap(), vec![vec![2, 1]]),
        ];
        for (flag, rows) in cases {
            let level = LevelSpec::trivial(flag.num_blocks());
            let m = DegreeMatrix::new(rows);
            for eq in [false, true] {
                let a = abelianize(&flag, &m, &level, eq).unwrap();
                let b = matrix_contribution(&flag, &m, eq).unwrap();
                assert_eq!(a, b, "structural mismatch for {m} on {flag}");
            }
        }
    }

    #[test]
    fn abelianized_level_factorizes_as_determinant_twist() {
        // abelianize(level l) = abelianize(level 0) · (det twist with p ↦ ∏ℓ)
        let flag = FlagType::new(4, vec![2]).unwrap();
        let m = DegreeMatrix::new(vec![vec![2, 1]]);
        let level = LevelSpec::from_pairs(1, &[(1, 2)]).unwrap();
        let with = abelianize(&flag, &m, &level, true).unwrap();
        let without = abelianize(&flag, &m, &LevelSpec::trivial(1), true).unwrap();
        let twist = level_twist(&m.degree(), &level)
            .substitute(&det_substitution(&flag))
            .unwrap();
        assert_eq!(with, without.mul(&twist));
    }

    #[test]
    fn series_collects_all_degrees_and_ignores_job_count() {
        let flag = FlagType::complete(3);
        let level = LevelSpec::trivial(2);
        let s1 = i_series(&flag, 2, &level, true, 1).unwrap();
        let s4 = i_series(&flag, 2, &level, true, 4).unwrap();
        assert_eq!(s1, s4);
        assert_eq!(s1.coeffs.len(), DegreeVector::up_to(2, 2).len());
        assert!(s1
            .coefficient(&DegreeVector::zero(2))
            .unwrap()
            .is_one());
    }

    #[test]
    fn non_equivariant_limit_agrees() {
        let flag = FlagType::complete(3);
        let level = LevelSpec::trivial(2);
        for d in DegreeVector::up_to(2, 2) {
            let eqv = i_coefficient(&flag, &d, &level, true).unwrap();
            let lim = eqv.substitute(&lambda_one_substitution(&flag)).unwrap();
            let non = i_coefficient(&flag, &d, &level, false).unwrap();
            assert!(rf_eq(&lim, &non), "limit mismatch at {d}");
        }
    }
}
