//! Sparse multivariate Laurent polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by monomial, so every polynomial has
//! one canonical form: no zero coefficients, deterministic term order.
//! Exponents may be negative throughout; "honest" (non-negative) form is
//! recovered by dividing out the monomial content where an algorithm needs it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::scalar::{format_scalar, scalar_pow, Scalar};
use crate::vars::Variable;

/// Product of variable powers, sorted by variable, no zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[(Variable, i32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn var(v: Variable) -> Self {
        Monomial(SmallVec::from_slice(&[(v, 1)]))
    }

    pub fn var_pow(v: Variable, e: i32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(SmallVec::from_slice(&[(v, e)]))
        }
    }

    /// Build from arbitrary (variable, exponent) pairs; merges repeats, drops zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Variable, i32)>) -> Self {
        let mut map: BTreeMap<Variable, i32> = BTreeMap::new();
        for (v, e) in pairs {
            let slot = map.entry(v).or_insert(0);
            *slot = slot.checked_add(e).expect("exponent overflow");
        }
        Monomial(map.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    pub fn exponents(&self) -> &[(Variable, i32)] {
        &self.0
    }

    pub fn exp_of(&self, v: Variable) -> i32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        // Merge-join over two sorted exponent lists.
        let mut out = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (va, ea) = self.0[i];
            let (vb, eb) = other.0[j];
            match va.cmp(&vb) {
                std::cmp::Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = ea.checked_add(eb).expect("exponent overflow");
                    if e != 0 {
                        out.push((va, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(
            self.0
                .iter()
                .map(|(v, e)| (*v, e.checked_mul(k).expect("exponent overflow")))
                .collect(),
        )
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    /// Apply a variable relabeling/merging; exponents of coinciding images add.
    pub fn map_vars(&self, f: impl Fn(Variable) -> Variable) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|(v, e)| (f(*v), *e)))
    }

    pub fn vars(&self) -> impl Iterator<Item = Variable> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e as i64).sum()
    }

    /// Graded-lex comparison; a monomial order on non-negative exponents.
    pub fn cmp_grlex(&self, other: &Monomial) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.cmp(other))
    }

    /// Componentwise `self ≤ other` (for division of honest monomials).
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(v, e)| *e <= other.exp_of(*v))
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn eval(&self, point: &BTreeMap<Variable, Scalar>) -> Option<Scalar> {
        let mut acc = Scalar::one();
        for (v, e) in &self.0 {
            let x = point.get(v)?;
            if x.is_zero() && *e < 0 {
                return None;
            }
            acc *= scalar_pow(x, *e);
        }
        Some(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        // Conventional reading order: classes first, q last.
        let mut first = true;
        let ordered = self
            .0
            .iter()
            .filter(|(v, _)| *v != Variable::Q)
            .chain(self.0.iter().filter(|(v, _)| *v == Variable::Q));
        for (v, e) in ordered {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse Laurent polynomial in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        LaurentPolynomial { terms }
    }

    pub fn var(v: Variable) -> Self {
        Self::monomial(Scalar::one(), Monomial::var(v))
    }

    pub fn monomial(c: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPolynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// `Some((c, m))` if the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(&Scalar, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPolynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Relabel variables term by term (images may merge).
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    /// Substitute variables by scaled monomials: `v ↦ s_v · m_v`.
    /// Variables absent from `env` are left alone.
    pub fn substitute_monomials(&self, env: &BTreeMap<Variable, (Scalar, Monomial)>) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut coeff = c.clone();
            let mut mono = Monomial::one();
            for (v, e) in m.exponents() {
                match env.get(v) {
                    Some((s, im)) => {
                        coeff *= scalar_pow(s, *e);
                        mono = mono.mul(&im.pow(*e));
                    }
                    None => mono = mono.mul(&Monomial::var_pow(*v, *e)),
                }
            }
            (mono, coeff)
        }))
    }

    pub fn support_vars(&self) -> BTreeSet<Variable> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn eval(&self, point: &BTreeMap<Variable, Scalar>) -> Option<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            acc += c * m.eval(point)?;
        }
        Some(acc)
    }

    /// Monomial content: `∏ v^{min over terms of exp_v}` (absent = 0 exponent
    /// only when the variable misses some term). Dividing by the content makes
    /// every exponent non-negative and some exponent of each present variable zero.
    pub fn content(&self) -> Monomial {
        let mut mins: BTreeMap<Variable, i32> = BTreeMap::new();
        let mut seen_count: BTreeMap<Variable, usize> = BTreeMap::new();
        for m in self.terms.keys() {
            for (v, e) in m.exponents() {
                mins.entry(*v).and_modify(|x| *x = (*x).min(*e)).or_insert(*e);
                *seen_count.entry(*v).or_insert(0) += 1;
            }
        }
        let n = self.terms.len();
        Monomial::from_pairs(mins.into_iter().filter_map(|(v, e)| {
            // A variable absent from some term has an implicit exponent 0 there.
            let min = if seen_count[&v] < n { e.min(0) } else { e };
            (min != 0).then_some((v, min))
        }))
    }

    /// Canonical factorization `self = s · m · canon` where `canon` has
    /// monomial content 1 and its least term (in the canonical term order)
    /// has coefficient +1. The zero polynomial maps to `(1, 1, 0)`.
    pub fn normalize_factor(&self) -> (Scalar, Monomial, LaurentPolynomial) {
        if self.is_zero() {
            return (Scalar::one(), Monomial::one(), Self::zero());
        }
        let content = self.content();
        let shifted = self.mul_monomial(&content.inv());
        let (_, lead_coeff) = shifted.terms.iter().next().expect("nonzero");
        let s = lead_coeff.clone();
        (s.clone(), content, shifted.mul_scalar(&s.recip()))
    }

    fn leading_grlex(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| a.cmp_grlex(b))
    }

    /// Exact division: `Some(h)` with `self = g·h`, else `None`.
    /// Works on any Laurent inputs by first clearing monomial content.
    pub fn try_div(&self, g: &Self) -> Option<Self> {
        assert!(!g.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (sf, mf, f1) = self.normalize_factor();
        let (sg, mg, g1) = g.normalize_factor();
        // f1, g1 have non-negative exponents; grlex is a monomial order there.
        let mut rem = f1;
        let mut quot = Self::zero();
        let (glm, glc) = g1.leading_grlex().expect("nonzero divisor");
        let (glm, glc) = (glm.clone(), glc.clone());
        while !rem.is_zero() {
            let (flm, flc) = rem.leading_grlex().expect("nonzero");
            if !glm.divides(flm) {
                return None;
            }
            let qm = flm.div(&glm);
            let qc = flc / &glc;
            quot.add_term(qm.clone(), qc.clone());
            rem = rem.sub(&g1.mul(&Self::monomial(qc, qm)));
        }
        let unit = Self::monomial(sf / sg, mf.div(&mg));
        Some(quot.mul(&unit))
    }

    /// Greedy split into two-term (binomial) factors drawn from pairs of the
    /// polynomial's own terms: returns `(s, m, factors, rest)` with
    /// `self = s · m · ∏ fᵢ^{kᵢ} · rest`, all `fᵢ` and `rest` canonical.
    /// Exactness is guaranteed; completeness of the split is best-effort.
    pub fn factor_binomials(&self) -> (Scalar, Monomial, Vec<(Self, u32)>, Self) {
        let (mut s, mut m, mut rest) = self.normalize_factor();
        let mut factors: Vec<(Self, u32)> = Vec::new();
        if rest.is_zero() {
            return (s, m, factors, rest);
        }
        'outer: loop {
            if rest.num_terms() < 2 {
                break;
            }
            let terms: Vec<(Monomial, Scalar)> =
                rest.terms.iter().map(|(t, c)| (t.clone(), c.clone())).collect();
            for i in 0..terms.len() {
                for j in (i + 1)..terms.len() {
                    let cand = Self::from_terms([terms[i].clone(), terms[j].clone()]);
                    let (_, _, cand) = cand.normalize_factor();
                    if let Some(q) = rest.try_div(&cand) {
                        let (qs, qm, q1) = q.normalize_factor();
                        s *= qs;
                        m = m.mul(&qm);
                        rest = q1;
                        match factors.iter_mut().find(|(f, _)| *f == cand) {
                            Some((_, k)) => *k += 1,
                            None => factors.push((cand, 1)),
                        }
                        continue 'outer;
                    }
                }
            }
            break;
        }
        factors.sort_by(|(a, _), (b, _)| a.cmp(b));
        (s, m, factors, rest)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", format_scalar(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{} {m}", format_scalar(&abs))?;
            }
        }
        Ok(())
    }
}
