//! Weyl symmetrization pushes a class on the abelianized space down to the
//! quotient: sum over the permutation group with root-class denominators.
//! Symmetrizing 1 returns 1, a wall weight collapses to 0, and the dual
//! line class produces the dual standard character.

use qkflag::{
    rf_eq, standard_root_classes, weyl_symmetrize, Monomial, RationalFunction, Scalar,
    Variable,
};

fn line(e: i32, v: Variable) -> RationalFunction {
    RationalFunction::monomial(Scalar::from_integer(1.into()), Monomial::var_pow(v, e))
}

fn main() {
    let vars = [Variable::ell_c(1), Variable::ell_c(2)];
    let roots = standard_root_classes(&vars);
    println!(
        "root classes for k = 2: {:?}",
        roots.iter().map(|r| r.to_string()).collect::<Vec<_>>()
    );

    let one = weyl_symmetrize(&RationalFunction::one(), &vars, &roots);
    println!("symmetrize(1) equals 1: {}", rf_eq(&one, &RationalFunction::one()));
    assert!(rf_eq(&one, &RationalFunction::one()));

    let wall = weyl_symmetrize(&line(1, vars[0]), &vars, &roots);
    println!("symmetrize(l_1) vanishes: {}", rf_eq(&wall, &RationalFunction::zero()));

    let dual = weyl_symmetrize(&line(-1, vars[0]), &vars, &roots);
    let expected = line(-1, vars[0]).add(&line(-1, vars[1]));
    println!("symmetrize(l_1^-1) = l_1^-1 + l_2^-1: {}", rf_eq(&dual, &expected));
    assert!(rf_eq(&dual, &expected));
}
