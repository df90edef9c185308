use darboux_invariants::textio::parse_expr;
use darboux_invariants::{parse_operator, parse_polynomial};

fn main() {
    for text in [
        "Dx*a",
        "(Dx + a)(Dy + b)",
        "Dy^2 m[-2] + 1/2 m[0]",
        "a_yx * b - 3*b*a_xy",
    ] {
        let tree = parse_expr(text).unwrap();
        let op = parse_operator(text).unwrap();
        println!("{text:<24} tree: {tree:<28} normal form: {op}");
    }
    let p = parse_polynomial("(a + b)^3").unwrap();
    println!("{p}");
    assert_eq!(parse_polynomial(&p.to_string()).unwrap(), p);
    if let Err(e) = parse_operator("Dx^-1") {
        println!("error: {e}");
    }
}
