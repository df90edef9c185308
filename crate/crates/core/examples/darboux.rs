//! The classical first-order Darboux (Laplace) transformation as an
//! intertwining relation `N L = L1 M`, and its behaviour under gauge.

use darboux_invariants::{parse_operator, DarbouxQuadruple, GaugeParameter};

fn main() {
    let dy_a = parse_operator("Dy + a").unwrap();
    let l = parse_operator("Dx*Dy + a*Dx + b*Dy + a*b + a_x").unwrap();
    let l1 = parse_operator("Dx*Dy + a*Dx + b*Dy + a*b + b_y").unwrap();
    let q = DarbouxQuadruple::new(dy_a.clone(), l, l1, dy_a).unwrap();
    println!("N L - L1 M = {}", q.residual());
    assert!(q.is_darboux());

    let qg = q.gauge_conjugate(&GaugeParameter::default());
    println!("gauged L = {}", qg.l);
    assert!(qg.is_darboux());

    let broken = DarbouxQuadruple::new(
        q.n.clone(),
        q.l.clone(),
        parse_operator("Dx*Dy + a*Dx + b*Dy + a*b").unwrap(),
        q.m.clone(),
    )
    .unwrap();
    println!("perturbed residual = {}", broken.residual());
}
