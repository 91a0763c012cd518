//! Enumerate the admissible degree matrices that index fixed loci, and show
//! how a sorted representative expands into its full permutation orbit.

use qkflag::{enumerate_admissible, orbit_expand, DegreeVector, FlagType};

fn main() {
    let flag = FlagType::new(4, vec![1, 2, 3]).unwrap();
    for d in [vec![1, 0, 0], vec![0, 0, 1], vec![1, 1, 0]] {
        let d = DegreeVector(d);
        let matrices = enumerate_admissible(&flag, &d).unwrap();
        println!("{flag}, d = {:?}: {} admissible matrices", d.0, matrices.len());
        for m in &matrices {
            println!("  {m}");
        }
    }

    let gr = FlagType::new(4, vec![2]).unwrap();
    let d = DegreeVector(vec![2]);
    println!("\n{gr}, d = {:?}, orbits of sorted representatives:", d.0);
    let mut seen = std::collections::BTreeSet::new();
    for m in enumerate_admissible(&gr, &d).unwrap() {
        let rep = m.sorted_rep();
        if seen.insert(rep.clone()) {
            let orbit = orbit_expand(&rep);
            println!("  {rep}  (orbit size {})", orbit.len());
        }
    }
}
