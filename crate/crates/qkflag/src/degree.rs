//! Flag types, curve degrees, and the block-wise combinatorics of abelianized
//! degree matrices: admissibility, enumeration, row-permutation orbits, and
//! the block Weyl action on variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Monomial;
use crate::ratfun::RationalFunction;
use crate::scalar::Scalar;
use crate::vars::Variable;

/// A partial flag variety in ℂⁿ, recorded by the strictly increasing ranks of
/// its subspace steps.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawFlagType", into = "RawFlagType")]
pub struct FlagType {
    n: u32,
    ranks: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawFlagType {
    n: u32,
    ranks: Vec<u32>,
}

impl TryFrom<RawFlagType> for FlagType {
    type Error = Error;
    fn try_from(raw: RawFlagType) -> Result<Self> {
        FlagType::new(raw.n, raw.ranks)
    }
}

impl From<FlagType> for RawFlagType {
    fn from(f: FlagType) -> Self {
        RawFlagType { n: f.n, ranks: f.ranks }
    }
}

impl FlagType {
    /// Ranks must be nonempty, strictly increasing, and below `n`.
    pub fn new(n: u32, ranks: Vec<u32>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::invalid("flag type", "at least one step is required"));
        }
        if ranks[0] == 0 || ranks.windows(2).any(|w| w[0] >= w[1]) || *ranks.last().unwrap() >= n {
            return Err(Error::invalid(
                "flag type",
                format!("ranks {ranks:?} must be strictly increasing within 1..{n}"),
            ));
        }
        Ok(FlagType { n, ranks })
    }

    /// The complete flag in ℂⁿ (ranks 1, 2, …, n−1). Requires `n ≥ 2`.
    pub fn complete(n: u32) -> Self {
        FlagType::new(n, (1..n).collect()).expect("n >= 2 gives a valid complete flag")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn num_blocks(&self) -> usize {
        self.ranks.len()
    }

    /// Rank of block `i` (0-based).
    pub fn rank(&self, i: usize) -> u32 {
        self.ranks[i]
    }

    pub fn is_complete(&self) -> bool {
        self.ranks.len() as u32 == self.n - 1
    }
}

impl fmt::Display for FlagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fl({};C^{})", self.ranks.iter().join(","), self.n)
    }
}

/// A curve degree: one nonnegative integer per flag step.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector(pub Vec<u32>);

impl DegreeVector {
    pub fn zero(len: usize) -> Self {
        DegreeVector(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    /// Total degree `|d|`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// All degree vectors of the given length with `|d| ≤ cap`, sorted.
    pub fn up_to(len: usize, cap: u32) -> Vec<DegreeVector> {
        fn rec(len: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<DegreeVector>) {
            if cur.len() == len {
                out.push(DegreeVector(cur.clone()));
                return;
            }
            for v in 0..=cap {
                cur.push(v);
                rec(len, cap - v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(len, cap, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl From<Vec<u32>> for DegreeVector {
    fn from(v: Vec<u32>) -> Self {
        DegreeVector(v)
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// An abelianized degree matrix: row `i` splits the step-`i` degree over the
/// `ranks[i]` line factors of that block. An ambient all-zero row of length
/// `n` is implicit below the last row.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct DegreeMatrix {
    pub rows: Vec<Vec<u32>>,
}

impl DegreeMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Self {
        DegreeMatrix { rows }
    }

    /// Row lengths must match the flag's ranks.
    pub fn check_shape(&self, flag: &FlagType) -> Result<()> {
        if self.rows.len() != flag.num_blocks()
            || self
                .rows
                .iter()
                .zip(flag.ranks())
                .any(|(row, &r)| row.len() != r as usize)
        {
            return Err(Error::invalid(
                "degree matrix",
                format!("row lengths {:?} do not match ranks {:?}",
                    self.rows.iter().map(Vec::len).collect::<Vec<_>>(), flag.ranks()),
            ));
        }
        Ok(())
    }

    /// Row sums.
    pub fn degree(&self) -> DegreeVector {
        DegreeVector(self.rows.iter().map(|row| row.iter().sum()).collect())
    }

    /// Column admissibility: every entry dominates the entry below it in the
    /// same column (the implicit ambient zero row makes the last row free).
    pub fn is_admissible(&self) -> bool {
        self.rows.windows(2).all(|pair| {
            pair[0]
                .iter()
                .zip(pair[1].iter())
                .all(|(above, below)| above >= below)
        })
    }

    /// The orbit representative with each row sorted ascending.
    pub fn sorted_rep(&self) -> DegreeMatrix {
        DegreeMatrix {
            rows: self
                .rows
                .iter()
                .map(|row| {
                    let mut r = row.clone();
                    r.sort_unstable();
                    r
                })
                .collect(),
        }
    }
}

impl fmt::Display for DegreeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]",
            self.rows
                .iter()
                .map(|row| format!("({})", row.iter().join(",")))
                .join(", ")
        )
    }
}

/// All length-`parts` compositions of `total` into nonnegative integers.
fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=total {
            cur.push(v);
            rec(total - v, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// All column-admissible degree matrices with row sums `d`, sorted
/// lexicographically.
pub fn enumerate_admissible(flag: &FlagType, d: &DegreeVector) -> Result<Vec<DegreeMatrix>> {
    if d.len() != flag.num_blocks() {
        return Err(Error::invalid(
            "degree vector",
            format!("expected {} entries, got {}", flag.num_blocks(), d.len()),
        ));
    }
    let blocks = flag.num_blocks();
    // Build upward from the last block; the ambient zero row constrains nothing.
    let mut suffixes: Vec<Vec<Vec<u32>>> = compositions(d.get(blocks - 1), flag.rank(blocks - 1))
        .into_iter()
        .map(|row| vec![row])
        .collect();
    for i in (0..blocks - 1).rev() {
        let candidates = compositions(d.get(i), flag.rank(i));
        let mut next = Vec::new();
        for suffix in &suffixes {
            let below = &suffix[0];
            for row in &candidates {
                if row.iter().zip(below.iter()).all(|(a, b)| a >= b) {
                    let mut rows = Vec::with_capacity(suffix.len() + 1);
                    rows.push(row.clone());
                    rows.extend(suffix.iter().cloned());
                    next.push(rows);
                }
            }
        }
        suffixes = next;
    }
    let mut out: Vec<DegreeMatrix> = suffixes.into_iter().map(DegreeMatrix::new).collect();
    out.sort();
    Ok(out)
}

/// The distinct matrices obtained by permuting entries within each row,
/// sorted lexicographically.
pub fn orbit_expand(matrix: &DegreeMatrix) -> Vec<DegreeMatrix> {
    let row_perms: Vec<Vec<Vec<u32>>> = matrix
        .rows
        .iter()
        .map(|row| {
            let k = row.len();
            let set: BTreeSet<Vec<u32>> = (0..k)
                .permutations(k)
                .map(|idx| idx.into_iter().map(|i| row[i]).collect())
                .collect();
            set.into_iter().collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for choices in &row_perms {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for rows in &out {
            for choice in choices {
                let mut r: Vec<Vec<u32>> = rows.clone();
                r.push(choice.clone());
                next.push(r);
            }
        }
        out = next;
    }
    let mut mats: Vec<DegreeMatrix> = out.into_iter().map(DegreeMatrix::new).collect();
    mats.sort();
    mats
}

/// A tuple of permutations, one per flag block, acting on the line factors
/// within each block.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockPermutation {
    /// `perms[b][j]` is the image of slot `j` (both 0-based) in block `b+1`.
    perms: Vec<Vec<usize>>,
}

impl BlockPermutation {
    /// Each entry must be a permutation of `0..len`.
    pub fn new(perms: Vec<Vec<usize>>) -> Result<Self> {
        for p in &perms {
            let mut seen = vec![false; p.len()];
            for &img in p {
                if img >= p.len() || seen[img] {
                    return Err(Error::invalid(
                        "block permutation",
                        format!("{p:?} is not a permutation"),
                    ));
                }
                seen[img] = true;
            }
        }
        Ok(BlockPermutation { perms })
    }

    pub fn identity(flag: &FlagType) -> Self {
        BlockPermutation {
            perms: flag.ranks().iter().map(|&r| (0..r as usize).collect()).collect(),
        }
    }

    /// Every block permutation for the flag (cartesian product of symmetric
    /// groups). Intended for small ranks.
    pub fn all(flag: &FlagType) -> Vec<Self> {
        let mut out = vec![Vec::new()];
        for &r in flag.ranks() {
            let perms: Vec<Vec<usize>> = (0..r as usize).permutations(r as usize).collect();
            let mut next = Vec::with_capacity(out.len() * perms.len());
            for partial in &out {
                for p in &perms {
                    let mut q: Vec<Vec<usize>> = partial.clone();
                    q.push(p.clone());
                    next.push(q);
                }
            }
            out = next;
        }
        out.into_iter().map(|perms| BlockPermutation { perms }).collect()
    }

    /// Image of `slot` under the block-`b` permutation (0-based).
    pub fn apply(&self, b: usize, slot: usize) -> usize {
        self.perms[b][slot]
    }

    pub fn inverse(&self) -> Self {
        BlockPermutation {
            perms: self
                .perms
                .iter()
                .map(|p| {
                    let mut inv = vec![0; p.len()];
                    for (j, &img) in p.iter().enumerate() {
                        inv[img] = j;
                    }
                    inv
                })
                .collect(),
        }
    }

    /// Move each entry to its permuted column: `(w·A)_{b, w_b(j)} = A_{b,j}`.
    pub fn act_matrix(&self, m: &DegreeMatrix) -> DegreeMatrix {
        DegreeMatrix {
            rows: m
                .rows
                .iter()
                .enumerate()
                .map(|(b, row)| {
                    let mut out = vec![0; row.len()];
                    for (j, &v) in row.iter().enumerate() {
                        out[self.perms[b][j]] = v;
                    }
                    out
                })
                .collect(),
        }
    }
}

/// Relabel block line variables: `ℓ_{i,j} ↦ ℓ_{i,w_i(j)}`. Variables outside
/// the blocks (q, Λ, p, collapsed classes) are fixed.
pub fn weyl_act(w: &BlockPermutation, f: &RationalFunction) -> RationalFunction {
    let mut env = BTreeMap::new();
    for v in f.support_vars() {
        if let Variable::Ell(b, j) = v {
            if b >= 1 && (b as usize - 1) < w.perms.len() {
                let img = w.apply(b as usize - 1, j as usize - 1) as u16 + 1;
                if img != j {
                    env.insert(
                        v,
                        RationalFunction::monomial(
                            Scalar::from_integer(1.into()),
                            Monomial::var(Variable::ell(b, img)),
                        ),
                    );
                }
            }
        }
    }
    if env.is_empty() {
        return f.clone();
    }
    f.substitute(&env).expect("relabeling variables cannot vanish")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LaurentPolynomial;
    use crate::ratfun::rf_eq;

    fn fl123_c4() -> FlagType {
        FlagType::new(4, vec![1, 2, 3]).unwrap()
    }

    #[test]
    fn flag_validation() {
        assert!(FlagType::new(4, vec![1, 2, 3]).is_ok());
        assert!(FlagType::new(4, vec![]).is_err());
        assert!(FlagType::new(4, vec![2, 2]).is_err());
        assert!(FlagType::new(4, vec![1, 4]).is_err());
        assert!(FlagType::new(3, vec![0, 1]).is_err());
        assert!(FlagType::complete(4).is_complete());
        assert!(!fl123_c4().is_complete() || fl123_c4() == FlagType::complete(4));
    }

    #[test]
    fn admissible_enumeration_matches_known_cases() {
        let flag = fl123_c4();
        let got = enumerate_admissible(&flag, &DegreeVector(vec![1, 0, 0])).unwrap();
        assert_eq!(got, vec![DegreeMatrix::new(vec![vec![1], vec![0, 0], vec![0, 0, 0]])]);

        let got = enumerate_admissible(&flag, &DegreeVector(vec![0, 0, 1])).unwrap();
        assert_eq!(got, vec![DegreeMatrix::new(vec![vec![0], vec![0, 0], vec![0, 0, 1]])]);

        let got = enumerate_admissible(&flag, &DegreeVector(vec![1, 1, 0])).unwrap();
        assert_eq!(
            got,
            vec![
                DegreeMatrix::new(vec![vec![1], vec![0, 1], vec![0, 0, 0]]),
                DegreeMatrix::new(vec![vec![1], vec![1, 0], vec![0, 0, 0]]),
            ]
        );
    }

    #[test]
    fn orbit_sizes() {
        let m1 = DegreeMatrix::new(vec![vec![1], vec![0, 0], vec![0, 0, 0]]);
        assert_eq!(orbit_expand(&m1).len(), 1);
        let m3 = DegreeMatrix::new(vec![vec![0], vec![0, 0], vec![0, 0, 1]]);
        assert_eq!(orbit_expand(&m3).len(), 3);
        let m2 = DegreeMatrix::new(vec![vec![1], vec![0, 1], vec![0, 0, 0]]);
        assert_eq!(orbit_expand(&m2).len(), 2);
    }

    #[test]
    fn orbit_members_share_sorted_rep() {
        let m = DegreeMatrix::new(vec![vec![1], vec![2, 0], vec![0, 1, 0]]);
        let rep = m.sorted_rep();
        for member in orbit_expand(&m) {
            assert_eq!(member.sorted_rep(), rep);
        }
    }

    #[test]
    fn sorting_rows_preserves_admissibility_exhaustively() {
        // Fl(1,2;C^3), all entries ≤ 2: any admissible matrix stays admissible
        // after sorting each row ascending.
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                for c in 0..=2u32 {
                    let m = DegreeMatrix::new(vec![vec![a], vec![b, c]]);
                    if m.is_admissible() {
                        assert!(
                            m.sorted_rep().is_admissible(),
                            "sorting broke admissibility for {m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn explicit_zero_padding_is_equivalent() {
        // Appending the implicit ambient zero row never changes the verdict.
        let flag = fl123_c4();
        for d in DegreeVector::up_to(3, 2) {
            for m in enumerate_admissible(&flag, &d).unwrap() {
                let mut padded_rows = m.rows.clone();
                padded_rows.push(vec![0; flag.n() as usize]);
                let padded = DegreeMatrix::new(padded_rows);
                assert_eq!(m.is_admissible(), padded.is_admissible());
            }
        }
    }

    #[test]
    fn block_permutation_roundtrip() {
        let flag = FlagType::new(4, vec![2]).unwrap();
        let m = DegreeMatrix::new(vec![vec![3, 5]]);
        for w in BlockPermutation::all(&flag) {
            assert_eq!(w.inverse().act_matrix(&w.act_matrix(&m)), m);
        }
        assert_eq!(BlockPermutation::all(&flag).len(), 2);
        assert_eq!(BlockPermutation::all(&fl123_c4()).len(), 2 * 6);
        assert!(BlockPermutation::new(vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn weyl_act_relabels_block_lines() {
        // Swap in a rank-2 block: 1/(1−ℓ_{1,1}q) ↦ 1/(1−ℓ_{1,2}q).
        let swap = BlockPermutation::new(vec![vec![1, 0]]).unwrap();
        let f = RationalFunction::new(
            LaurentPolynomial::one(),
            vec![(
                LaurentPolynomial::one().sub(&LaurentPolynomial::monomial(
                    Scalar::from_integer(1.into()),
                    Monomial::from_pairs([(Variable::ell(1, 1), 1), (Variable::Q, 1)]),
                )),
                1,
            )],
        );
        let g = RationalFunction::new(
            LaurentPolynomial::one(),
            vec![(
                LaurentPolynomial::one().sub(&LaurentPolynomial::monomial(
                    Scalar::from_integer(1.into()),
                    Monomial::from_pairs([(Variable::ell(1, 2), 1), (Variable::Q, 1)]),
                )),
                1,
            )],
        );
        assert!(rf_eq(&weyl_act(&swap, &f), &g));
        assert!(rf_eq(&weyl_act(&swap, &g), &f));
    }

    #[test]
    fn serde_shapes() {
        let flag = fl123_c4();
        assert_eq!(serde_json::to_string(&flag).unwrap(), r#"{"n":4,"ranks":[1,2,3]}"#);
        let back: FlagType = serde_json::from_str(r#"{"n":4,"ranks":[1,2,3]}"#).unwrap();
        assert_eq!(back, flag);
        assert!(serde_json::from_str::<FlagType>(r#"{"n":4,"ranks":[3,2]}"#).is_err());

        let m = DegreeMatrix::new(vec![vec![1], vec![0, 0], vec![0, 0, 0]]);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"rows":[[1],[0,0],[0,0,0]]}"#);

        let d = DegreeVector(vec![1, 0, 0]);
        assert_eq!(serde_json::to_string(&d).unwrap(), "[1,0,0]");
    }

    #[test]
    fn degree_vector_enumeration() {
        let all = DegreeVector::up_to(2, 1);
        assert_eq!(
            all,
            vec![
                DegreeVector(vec![0, 0]),
                DegreeVector(vec![0, 1]),
                DegreeVector(vec![1, 0]),
            ]
        );
        assert_eq!(DegreeVector::up_to(3, 2).len(), 10);
    }
}
