//! Compute the equivariant series for the complete flag variety in C^4 up
//! to total degree one and print every coefficient in factored form.

use qkflag::{i_series, FlagType, LevelSpec};

fn main() {
    let flag = FlagType::complete(4);
    let level = LevelSpec::trivial(flag.num_blocks());
    let series = i_series(&flag, 1, &level, true, 1).unwrap();

    println!("I-function of {flag}, degrees up to 1:");
    for (d, coeff) in &series.coeffs {
        println!("  d = {:?}: {coeff}", d.0);
    }
}
