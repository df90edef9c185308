use darboux_invariants::bell::{bell_complete_det, bell_number};
use darboux_invariants::{bell_complete, bell_partial, DiffPolynomial};

fn main() {
    let xs: Vec<_> = (1..=6)
        .map(|i| DiffPolynomial::symbol(&format!("x[{i}]")))
        .collect();
    println!("B(4,2) = {}", bell_partial(4, 2, &xs).unwrap());
    for n in 0..=5 {
        let b = bell_complete(n, &xs).unwrap();
        assert_eq!(b, bell_complete_det(n, &xs).unwrap());
        println!("B{n} = {b}");
    }
    let ones = vec![DiffPolynomial::one(); 8];
    for n in 0..=8 {
        let value = bell_complete(n, &ones).unwrap().as_constant().unwrap();
        assert_eq!(value, bell_number(n).into());
        print!("{value} ");
    }
    println!();
}
