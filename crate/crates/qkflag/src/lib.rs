//! Exact K-theoretic I-function coefficients for partial and complete flag
//! varieties, computed by torus localization over admissible degree
//! matrices, with determinant-level twists, an independent abelianized
//! route, a q-difference Toda operator with a degree-by-degree recursion
//! solver, and fixed-point equality checks for comparing classes.
//!
//! All arithmetic is exact: sparse Laurent polynomials over arbitrary-
//! precision rationals, with denominators kept in factored form and never
//! expanded behind your back.

pub mod cli;
pub mod degree;
pub mod error;
pub mod json;
pub mod ktheory;
pub mod latex;
pub mod localization;
pub mod par;
pub mod poly;
pub mod qtoda;
pub mod ratfun;
pub mod scalar;
pub mod vars;

pub use degree::{
    enumerate_admissible, orbit_expand, weyl_act, BlockPermutation, DegreeMatrix, DegreeVector,
    FlagType,
};
pub use error::{Error, Result};
pub use ktheory::{
    fixed_point_restrict, kclass_eq, kclass_eq_report, series_to_fixed_point,
    standard_root_classes, weyl_symmetrize, FixedPoint, KClassReport, RestrictionMap,
};
pub use localization::{
    abelianize, i_coefficient, i_series, level_twist, matrix_contribution, LevelSpec, QSeries,
};
pub use poly::{LaurentPolynomial, Monomial};
pub use qtoda::{
    apply, build_toda, eigenvalue, recursion_solve, verify_eigen, DifferenceOperator,
    EigenFailure, OperatorTerm, VerifyReport,
};
pub use ratfun::{qpochhammer_ratio, rf_eq, rf_eq_seeded, RationalFunction};
pub use scalar::Scalar;
pub use vars::Variable;
