//! JSON representations of polynomials, rational functions, series dumps,
//! and verification reports.
//!
//! Schemas are stable and order-deterministic: polynomial terms are listed in
//! canonical monomial order with exponent maps sorted by variable name, so a
//! fixed input always serializes to identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::degree::{DegreeVector, FlagType};
use crate::error::{Error, Result};
use crate::ktheory::KClassReport;
use crate::localization::{LevelSpec, QSeries};
use crate::poly::{LaurentPolynomial, Monomial};
use crate::qtoda::VerifyReport;
use crate::ratfun::RationalFunction;
use crate::scalar::{format_scalar, parse_scalar};
use crate::vars::parse_variable;

/// One polynomial term: `{"coeff":"-2/3","exps":{"l_1_2":3,"q":-1}}`.
/// Zero exponents are tolerated on input and dropped on output.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TermDto {
    pub coeff: String,
    pub exps: BTreeMap<String, i32>,
}

/// `{"terms":[…]}` in canonical term order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PolyDto {
    pub terms: Vec<TermDto>,
}

/// One denominator factor with multiplicity.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FactorDto {
    pub factor: PolyDto,
    pub mult: u32,
}

/// `{"num":…,"den":[{"factor":…,"mult":k}]}`; `den` may be omitted.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RfDto {
    pub num: PolyDto,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub den: Vec<FactorDto>,
}

/// `{"i":1,"l":2}` — a 1-based block index with its level.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LevelEntryDto {
    pub i: u32,
    pub l: i32,
}

/// One series coefficient keyed by its degree vector.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CoeffDto {
    pub d: Vec<u32>,
    pub value: RfDto,
}

/// A full series dump.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SeriesDto {
    pub flag: FlagType,
    pub cap: u32,
    pub level: Vec<LevelEntryDto>,
    pub equivariant: bool,
    pub coeffs: Vec<CoeffDto>,
}

/// One eigen-relation failure in a verification report.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct FailureDto {
    pub d: Vec<u32>,
    pub sigma: Vec<u16>,
    pub residual: RfDto,
}

/// `{"pass":…,"failures":[…]}`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ReportDto {
    pub pass: bool,
    pub failures: Vec<FailureDto>,
}

/// Outcome of a K-class comparison.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct KClassReportDto {
    pub equal: bool,
    pub first_failure: Option<Vec<u16>>,
    pub points_checked: usize,
}

pub fn poly_to_dto(p: &LaurentPolynomial) -> PolyDto {
    PolyDto {
        terms: p
            .terms()
            .map(|(m, c)| TermDto {
                coeff: format_scalar(c),
                exps: m
                    .exponents()
                    .iter()
                    .map(|(v, e)| (v.to_string(), *e))
                    .collect(),
            })
            .collect(),
    }
}

pub fn dto_to_poly(dto: &PolyDto) -> Result<LaurentPolynomial> {
    let mut terms = Vec::with_capacity(dto.terms.len());
    for t in &dto.terms {
        let coeff = parse_scalar(&t.coeff)?;
        let mut pairs = Vec::with_capacity(t.exps.len());
        for (name, &e) in &t.exps {
            if e != 0 {
                pairs.push((parse_variable(name)?, e));
            }
        }
        terms.push((Monomial::from_pairs(pairs), coeff));
    }
    Ok(LaurentPolynomial::from_terms(terms))
}

pub fn rf_to_dto(f: &RationalFunction) -> RfDto {
    RfDto {
        num: poly_to_dto(f.num()),
        den: f
            .den()
            .iter()
            .map(|(p, k)| FactorDto { factor: poly_to_dto(p), mult: *k })
            .collect(),
    }
}

pub fn dto_to_rf(dto: &RfDto) -> Result<RationalFunction> {
    let num = dto_to_poly(&dto.num)?;
    let mut den = Vec::with_capacity(dto.den.len());
    for f in &dto.den {
        let p = dto_to_poly(&f.factor)?;
        if p.is_zero() {
            return Err(Error::invalid("rational function", "zero denominator factor"));
        }
        den.push((p, f.mult));
    }
    Ok(RationalFunction::new(num, den))
}

pub fn series_to_dto(series: &QSeries) -> SeriesDto {
    SeriesDto {
        flag: series.flag.clone(),
        cap: series.cap,
        level: series
            .level
            .pairs()
            .into_iter()
            .map(|(i, l)| LevelEntryDto { i, l })
            .collect(),
        equivariant: series.equivariant,
        coeffs: series
            .coeffs
            .iter()
            .map(|(d, v)| CoeffDto { d: d.0.clone(), value: rf_to_dto(v) })
            .collect(),
    }
}

pub fn dto_to_series(dto: &SeriesDto) -> Result<QSeries> {
    let pairs: Vec<(u32, i32)> = dto.level.iter().map(|e| (e.i, e.l)).collect();
    let level = LevelSpec::from_pairs(dto.flag.num_blocks(), &pairs)?;
    let mut coeffs = BTreeMap::new();
    for c in &dto.coeffs {
        if c.d.len() != dto.flag.num_blocks() {
            return Err(Error::invalid(
                "series",
                format!("degree {:?} does not match {} flag steps", c.d, dto.flag.num_blocks()),
            ));
        }
        coeffs.insert(DegreeVector(c.d.clone()), dto_to_rf(&c.value)?);
    }
    Ok(QSeries {
        flag: dto.flag.clone(),
        cap: dto.cap,
        level,
        equivariant: dto.equivariant,
        coeffs,
    })
}

pub fn report_to_dto(report: &VerifyReport) -> ReportDto {
    ReportDto {
        pass: report.pass,
        failures: report
            .failures
            .iter()
            .map(|f| FailureDto {
                d: f.d.0.clone(),
                sigma: f.sigma.clone(),
                residual: rf_to_dto(&f.residual),
            })
            .collect(),
    }
}

pub fn kclass_report_to_dto(report: &KClassReport) -> KClassReportDto {
    KClassReportDto {
        equal: report.equal,
        first_failure: report.first_failure.as_ref().map(|p| p.sigma().to_vec()),
        points_checked: report.points_checked,
    }
}
