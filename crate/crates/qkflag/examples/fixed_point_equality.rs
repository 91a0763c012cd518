//! Two expressions can be equal as classes without being equal as raw
//! rational functions: equality is tested after restriction to every torus
//! fixed point. `p_1 + p_1^{-1}` and `Λ_0^{-1} + Λ_1^{-1}` agree on P^1;
//! two distinct line classes do not.

use qkflag::{kclass_eq_report, Monomial, RationalFunction, Scalar, Variable};

fn rf(pairs: &[(Variable, i32)]) -> RationalFunction {
    pairs.iter().fold(RationalFunction::zero(), |acc, &(v, e)| {
        acc.add(&RationalFunction::monomial(
            Scalar::from_integer(1.into()),
            Monomial::var_pow(v, e),
        ))
    })
}

fn main() {
    let f = rf(&[(Variable::p(1), 1), (Variable::p(1), -1)]);
    let g = rf(&[(Variable::lambda(0), -1), (Variable::lambda(1), -1)]);
    let report = kclass_eq_report(&f, &g, 1, 0, 1).unwrap();
    println!("{f}  vs  {g}");
    println!("  equal as classes: {} ({} points)", report.equal, report.points_checked);
    assert!(report.equal);

    let h = rf(&[(Variable::ell_c(1), 1)]);
    let k = rf(&[(Variable::ell_c(2), 1)]);
    let report = kclass_eq_report(&h, &k, 1, 0, 1).unwrap();
    println!("{h}  vs  {k}");
    println!(
        "  equal as classes: {}, first failing fixed point: {}",
        report.equal,
        report.first_failure.unwrap()
    );
}
