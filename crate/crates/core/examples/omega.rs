//! The operators `Ω` and `P_i` behind the second form of the invariants,
//! and restriction of `α`-jets to the frame `a' = b' = 0`.

use darboux_invariants::{
    frame_restrict, omega_power, p_op, DiffPolynomial, GaugeParameter, LaplaceOperator, OmegaMode,
    PArgument,
};

fn main() {
    let l = LaplaceOperator::generic();
    let b = DiffPolynomial::symbol("b");
    for i in 0..=4 {
        println!(
            "Omega^{i}(b) = {}",
            omega_power(&l, &b, OmegaMode::XWithB, i)
        );
    }
    for i in 0..=4 {
        println!("P_{i}(b) = {}", p_op(&l, PArgument::B, i));
    }
    let alpha = GaugeParameter::default();
    let jet = alpha.jet(3, 0);
    println!("{jet} -> {}", frame_restrict(&jet, &alpha, &l).unwrap());
}
