//! The non-equivariant coefficients of projective space P^{n-1} collapse to
//! the closed form `1/∏_{k=1}^d (1 − ℓ q^k)^n`. Print both sides and check
//! them exactly for a few degrees.

use qkflag::localization::line_variable;
use qkflag::{
    i_coefficient, qpochhammer_ratio, rf_eq, DegreeVector, FlagType, LevelSpec, Monomial,
};

fn main() {
    let n = 3;
    let flag = FlagType::new(n, vec![1]).unwrap();
    let level = LevelSpec::trivial(1);
    let ell = Monomial::var(line_variable(&flag, 1, 1));

    println!("non-equivariant coefficients of {flag}:");
    for d in 1..=4u32 {
        let coeff = i_coefficient(&flag, &DegreeVector(vec![d]), &level, false).unwrap();
        let closed = qpochhammer_ratio(&ell, d as i32).pow_i(n as i32).recip();
        assert!(rf_eq(&coeff, &closed));
        println!("  d = {d}: {coeff}");
    }
    println!("all degrees agree with the q-Pochhammer closed form");
}
