//! Conjugating operators by `exp(α)` and the induced action on `(a, b, c)`.

use darboux_invariants::{
    laplace_invariants, GaugeParameter, LaplaceOperator, LinearDiffOperator, NormalizedM,
};

fn main() {
    let alpha = GaugeParameter::default();
    let dx2 = LinearDiffOperator::dx().pow(2);
    println!("Dx^2   -> {}", dx2.gauge_conjugate(&alpha));

    let l = LaplaceOperator::generic();
    let lg = l.gauge_action(&alpha);
    println!("a' = {}\nb' = {}\nc' = {}", lg.a, lg.b, lg.c);
    assert_eq!(lg.to_operator(), l.to_operator().gauge_conjugate(&alpha));

    let (before, after) = (laplace_invariants(&l), laplace_invariants(&lg));
    assert_eq!((before.h, before.k), (after.h, after.k));
    println!("h and k unchanged");

    let m = NormalizedM::generic(2).gauge_conjugate(&alpha);
    println!("M^g = {}", m.to_operator());
}
