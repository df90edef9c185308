//! Generating gauge invariants of a generic order-5 pair `(L, M)`.

use darboux_invariants::{invariants_bell, invariants_omega, LaplaceOperator, NormalizedM};

fn main() {
    let l = LaplaceOperator::generic();
    let m = NormalizedM::generic(5);
    let set = invariants_bell(&l, &m);
    for (label, value) in set.entries() {
        println!("{label} = {value}");
    }
    assert_eq!(set, invariants_omega(&l, &m));
    println!("Bell and Omega forms agree");
}
