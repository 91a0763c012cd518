//! Variable universe for all symbolic computation.
//!
//! Every polynomial in the crate lives over one shared set of variables:
//!
//! - `q` — the shift/cotangent parameter;
//! - `L_j` — ambient torus parameters Λ_j, 0-based;
//! - `l_<i>_<j>` — tautological line classes ℓ_{i,j} of block `i` (1-based), slot `j`;
//! - `l_<j>` — the collapsed classes ℓ_j used for complete flags, where every
//!   block shares one set of slot classes (stored as block 0);
//! - `p_<i>` — Plücker classes p_i = ℓ_1⋯ℓ_i;
//! - anything else — an auxiliary symbol (short ASCII name), for generic
//!   rational-function work and user input.
//!
//! The derived `Ord` is the crate-wide canonical variable order; it is fixed,
//! total, and independent of construction order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

const AUX_NAME_MAX: usize = 12;

/// Short inline ASCII identifier for auxiliary variables.
///
/// Stored NUL-padded in a fixed array so `Variable` stays `Copy` and its
/// ordering is by name, not by an interner id.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuxName([u8; AUX_NAME_MAX]);

impl AuxName {
    pub fn new(name: &str) -> Result<Self, Error> {
        let bad = |m: &str| Error::invalid("variable name", format!("{m}: {name:?}"));
        let bytes = name.as_bytes();
        if bytes.is_empty() || bytes.len() > AUX_NAME_MAX {
            return Err(bad("must be 1..=12 bytes"));
        }
        if !bytes[0].is_ascii_alphabetic() {
            return Err(bad("must start with a letter"));
        }
        if !bytes.iter().all(|b| b.is_ascii_alphanumeric() || *b == b'_') {
            return Err(bad("only ASCII letters, digits, underscore"));
        }
        let mut buf = [0u8; AUX_NAME_MAX];
        buf[..bytes.len()].copy_from_slice(bytes);
        Ok(AuxName(buf))
    }

    pub fn as_str(&self) -> &str {
        let end = self.0.iter().position(|b| *b == 0).unwrap_or(AUX_NAME_MAX);
        std::str::from_utf8(&self.0[..end]).expect("aux names are ASCII")
    }
}

impl fmt::Debug for AuxName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_str())
    }
}

/// A symbolic variable. `(kind, indices)` identifies it uniquely and the
/// derived ordering (`q` < `L_*` < `l_*` < `p_*` < aux) is the canonical
/// term order used everywhere.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Variable {
    /// The shift parameter `q`.
    Q,
    /// Ambient torus parameter `Λ_j`, 0-based index.
    Lambda(u16),
    /// Line class `ℓ_{i,j}`; block 0 encodes the collapsed classes `ℓ_j`.
    Ell(u16, u16),
    /// Plücker class `p_i`, 1-based.
    P(u16),
    /// Auxiliary symbol.
    Aux(AuxName),
}

impl Variable {
    pub fn q() -> Self {
        Variable::Q
    }

    /// `Λ_j`, 0-based.
    pub fn lambda(j: u16) -> Self {
        Variable::Lambda(j)
    }

    /// Block class `ℓ_{i,j}` with `i ≥ 1`, `j ≥ 1`.
    pub fn ell(i: u16, j: u16) -> Self {
        assert!(i >= 1 && j >= 1, "block classes are 1-based");
        Variable::Ell(i, j)
    }

    /// Collapsed class `ℓ_j` (complete-flag identification), `j ≥ 1`.
    pub fn ell_c(j: u16) -> Self {
        assert!(j >= 1, "collapsed classes are 1-based");
        Variable::Ell(0, j)
    }

    /// Plücker class `p_i`, `i ≥ 1`.
    pub fn p(i: u16) -> Self {
        assert!(i >= 1, "Plücker classes are 1-based");
        Variable::P(i)
    }

    /// Auxiliary variable. Rejects names that collide with the reserved
    /// spellings (`q`, `L_*`, `l_*`, `p_*`).
    pub fn aux(name: &str) -> Result<Self, Error> {
        let aux = Variable::Aux(AuxName::new(name)?);
        match parse_variable(name) {
            Ok(v) if v == aux => Ok(aux),
            _ => Err(Error::invalid(
                "variable name",
                format!("{name:?} is a reserved variable spelling"),
            )),
        }
    }

    /// Canonical ASCII name, also the JSON spelling.
    pub fn name(&self) -> String {
        match self {
            Variable::Q => "q".into(),
            Variable::Lambda(j) => format!("L_{j}"),
            Variable::Ell(0, j) => format!("l_{j}"),
            Variable::Ell(i, j) => format!("l_{i}_{j}"),
            Variable::P(i) => format!("p_{i}"),
            Variable::Aux(name) => name.as_str().into(),
        }
    }
}

/// Parse a canonical variable name; unknown well-formed identifiers become
/// auxiliary variables.
pub fn parse_variable(s: &str) -> Result<Variable, Error> {
    if s == "q" {
        return Ok(Variable::Q);
    }
    let parse_idx = |t: &str| t.parse::<u16>().ok().filter(|_| !t.is_empty());
    if let Some(rest) = s.strip_prefix("L_") {
        if let Some(j) = parse_idx(rest) {
            return Ok(Variable::Lambda(j));
        }
    }
    if let Some(rest) = s.strip_prefix("p_") {
        if let Some(i) = parse_idx(rest) {
            if i >= 1 {
                return Ok(Variable::P(i));
            }
        }
    }
    if let Some(rest) = s.strip_prefix("l_") {
        match rest.split_once('_') {
            Some((a, b)) => {
                if let (Some(i), Some(j)) = (parse_idx(a), parse_idx(b)) {
                    if i >= 1 && j >= 1 {
                        return Ok(Variable::Ell(i, j));
                    }
                }
            }
            None => {
                if let Some(j) = parse_idx(rest) {
                    if j >= 1 {
                        return Ok(Variable::Ell(0, j));
                    }
                }
            }
        }
    }
    Ok(Variable::Aux(AuxName::new(s)?))
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Variable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_variable(s)
    }
}

impl Serialize for Variable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Variable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_variable(&s).map_err(serde::de::Error::custom)
    }
}
