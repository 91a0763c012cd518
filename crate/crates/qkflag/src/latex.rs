//! LaTeX rendering that mirrors the factored display: denominators stay as
//! products of `(1 − … q^k)` binomials, numerators carry the Novikov label
//! `Q₁^{d₁}⋯` of their degree.

use num::Signed;

use crate::degree::DegreeVector;
use crate::localization::QSeries;
use crate::poly::{LaurentPolynomial, Monomial};
use crate::ratfun::RationalFunction;
use crate::scalar::Scalar;
use crate::vars::Variable;

fn subscript(s: &str) -> String {
    if s.len() == 1 {
        format!("_{s}")
    } else {
        format!("_{{{s}}}")
    }
}

fn superscript(e: i32) -> String {
    match e {
        1 => String::new(),
        2..=9 => format!("^{e}"),
        _ => format!("^{{{e}}}"),
    }
}

pub fn latex_variable(v: Variable) -> String {
    match v {
        Variable::Q => "q".to_string(),
        Variable::Lambda(j) => format!("\\Lambda{}", subscript(&j.to_string())),
        Variable::Ell(0, j) => format!("\\ell{}", subscript(&j.to_string())),
        Variable::Ell(i, j) => format!("\\ell_{{{i},{j}}}"),
        Variable::P(i) => format!("p{}", subscript(&i.to_string())),
        Variable::Aux(_) => {
            let name = v.to_string();
            if name.len() == 1 {
                name
            } else {
                format!("\\mathrm{{{name}}}")
            }
        }
    }
}

pub fn latex_monomial(m: &Monomial) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    let mut out = String::new();
    let ordered = m
        .exponents()
        .iter()
        .filter(|(v, _)| *v != Variable::Q)
        .chain(m.exponents().iter().filter(|(v, _)| *v == Variable::Q));
    for (v, e) in ordered {
        out.push_str(&latex_variable(*v));
        out.push_str(&superscript(*e));
    }
    out
}

fn latex_scalar_abs(c: &Scalar) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

pub fn latex_poly(p: &LaurentPolynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push(if negative { '-' } else { '+' });
        }
        let mag = latex_scalar_abs(c);
        if m.is_one() {
            out.push_str(&mag);
        } else {
            if mag != "1" {
                out.push_str(&mag);
            }
            out.push_str(&latex_monomial(m));
        }
    }
    out
}

fn latex_factors(factors: &[(LaurentPolynomial, u32)]) -> String {
    let mut out = String::new();
    for (p, k) in factors {
        out.push('(');
        out.push_str(&latex_poly(p));
        out.push(')');
        if *k > 1 {
            out.push_str(&superscript(*k as i32));
        }
    }
    out
}

pub fn latex_rf(f: &RationalFunction) -> String {
    let (num, factors) = f.pretty_parts();
    if factors.is_empty() {
        return latex_poly(&num);
    }
    format!("\\frac{{{}}}{{{}}}", latex_poly(&num), latex_factors(&factors))
}

/// Novikov label `Q₁^{d₁}⋯` of a degree; empty for degree zero.
pub fn latex_novikov(d: &DegreeVector) -> String {
    let mut out = String::new();
    for (i, &di) in d.0.iter().enumerate() {
        if di > 0 {
            out.push('Q');
            out.push_str(&subscript(&(i + 1).to_string()));
            out.push_str(&superscript(di as i32));
        }
    }
    out
}

/// One series term, e.g. `\frac{Q_1}{(1-q)(1-p_1^2p_2^{-1}q)}`.
pub fn latex_series_term(d: &DegreeVector, f: &RationalFunction) -> String {
    let (num, factors) = f.pretty_parts();
    let label = latex_novikov(d);
    let numerator = if label.is_empty() {
        latex_poly(&num)
    } else if num.is_one() {
        label
    } else if num.num_terms() > 1 {
        format!("({}){}", latex_poly(&num), label)
    } else {
        format!("{}{}", latex_poly(&num), label)
    };
    if factors.is_empty() {
        numerator
    } else {
        format!("\\frac{{{}}}{{{}}}", numerator, latex_factors(&factors))
    }
}

/// The whole truncated series as a sum of labeled terms, zero coefficients
/// omitted.
pub fn latex_series(series: &QSeries) -> String {
    let mut parts = Vec::new();
    for (d, c) in &series.coeffs {
        if !c.is_zero() {
            parts.push(latex_series_term(d, c));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
