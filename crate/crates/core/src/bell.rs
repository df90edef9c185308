//! Partial and complete Bell polynomials with differential-polynomial
//! arguments.
//!
//! `B_{n,k}` is the multinomial sum over sequences `j_1, j_2, ...` with
//! `Σ j_i = k` and `Σ i·j_i = n`. The complete polynomial `B_n` sums these
//! over `k`, with `B_0 = 1`. [`bell_complete_det`] evaluates the same
//! polynomial as the determinant of an upper Hessenberg matrix and serves
//! as an independent cross-check.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::combinat::{binomial, factorial};
use crate::error::{Error, Result};
use crate::operators::derivative_in;
use crate::ring::{DiffPolynomial, Dir, Rational};

fn check_arity(needed: usize, xs: &[DiffPolynomial]) -> Result<()> {
    if xs.len() < needed {
        return Err(Error::BellArity {
            needed,
            got: xs.len(),
        });
    }
    Ok(())
}

/// Sequences `(j_1, ..., j_{n-k+1})` with `Σ j_i = k`, `Σ i·j_i = n`.
fn index_sequences(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn walk(
        part: usize,
        max_part: usize,
        n_left: usize,
        k_left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if part > max_part {
            if n_left == 0 && k_left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let most = (n_left / part).min(k_left);
        for j in 0..=most {
            cur.push(j);
            walk(part + 1, max_part, n_left - j * part, k_left - j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    walk(1, n - k + 1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Partial Bell polynomial `B_{n,k}(x_1, ..., x_{n-k+1})`. Extra arguments
/// are ignored.
pub fn bell_partial(n: usize, k: usize, xs: &[DiffPolynomial]) -> Result<DiffPolynomial> {
    if k > n {
        return Err(Error::BadIndex { n, k });
    }
    if k == 0 {
        return Ok(if n == 0 {
            DiffPolynomial::one()
        } else {
            DiffPolynomial::zero()
        });
    }
    check_arity(n - k + 1, xs)?;
    let n_fact = factorial(n);
    let mut powers: HashMap<(usize, usize), DiffPolynomial> = HashMap::new();
    let mut sum = DiffPolynomial::zero();
    for seq in index_sequences(n, k) {
        let mut denom = BigInt::from(1);
        let mut product = DiffPolynomial::one();
        for (idx, &j) in seq.iter().enumerate() {
            if j == 0 {
                continue;
            }
            let part = idx + 1;
            denom *= factorial(j) * num_traits::pow(factorial(part), j);
            let p = powers
                .entry((idx, j))
                .or_insert_with(|| xs[idx].pow(j as u32));
            product = &product * &*p;
        }
        let coeff = Rational::from_integer(&n_fact / denom);
        sum += &product.scale(&coeff);
    }
    Ok(sum)
}

/// Complete Bell polynomial `B_n(x_1, ..., x_n)`, with `B_0 = 1`.
pub fn bell_complete(n: usize, xs: &[DiffPolynomial]) -> Result<DiffPolynomial> {
    if n == 0 {
        return Ok(DiffPolynomial::one());
    }
    check_arity(n, xs)?;
    (1..=n).map(|k| bell_partial(n, k, xs)).sum()
}

/// `B_n` as the determinant of the `n × n` matrix with first row
/// `x_1, C(n-1,1) x_2, ..., x_n`, row `r` shifted right by `r` with
/// binomials `C(n-1-r, ·)`, and `-1` on the subdiagonal.
pub fn bell_complete_det(n: usize, xs: &[DiffPolynomial]) -> Result<DiffPolynomial> {
    if n == 0 {
        return Ok(DiffPolynomial::one());
    }
    check_arity(n, xs)?;
    Ok(determinant(&bell_matrix(n, xs)))
}

fn bell_matrix(n: usize, xs: &[DiffPolynomial]) -> Vec<Vec<DiffPolynomial>> {
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if c >= r {
                        let k = binomial(n - 1 - r, c - r);
                        xs[c - r].scale(&Rational::from_integer(k))
                    } else if c + 1 == r {
                        DiffPolynomial::int(-1)
                    } else {
                        DiffPolynomial::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Exact determinant over the polynomial ring by Laplace expansion along
/// rows, memoized on the set of columns still available.
pub fn determinant(matrix: &[Vec<DiffPolynomial>]) -> DiffPolynomial {
    let n = matrix.len();
    assert!(
        matrix.iter().all(|row| row.len() == n),
        "matrix must be square"
    );
    assert!(n < 64, "matrix too large");
    if n == 0 {
        return DiffPolynomial::one();
    }
    let mut memo: HashMap<u64, DiffPolynomial> = HashMap::new();
    minor(matrix, 0, (1u64 << n) - 1, &mut memo)
}

fn minor(
    matrix: &[Vec<DiffPolynomial>],
    row: usize,
    cols: u64,
    memo: &mut HashMap<u64, DiffPolynomial>,
) -> DiffPolynomial {
    if row == matrix.len() {
        return DiffPolynomial::one();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut total = DiffPolynomial::zero();
    let mut sign_positive = true;
    for c in 0..matrix.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &matrix[row][c];
        if !entry.is_zero() {
            let rest = minor(matrix, row + 1, cols & !(1 << c), memo);
            if !rest.is_zero() {
                let term = entry * &rest;
                if sign_positive {
                    total += &term;
                } else {
                    total -= &term;
                }
            }
        }
        sign_positive = !sign_positive;
    }
    memo.insert(cols, total.clone());
    total
}

/// `(-f, -∂f, ..., -∂^{n-1} f)` in direction `dir`: the frame-restricted
/// arguments of the conjugation coefficients.
pub fn negated_derivative_args(f: &DiffPolynomial, dir: Dir, n: usize) -> Vec<DiffPolynomial> {
    let mut out = Vec::with_capacity(n);
    let mut cur = f.clone();
    for _ in 0..n {
        out.push(-&cur);
        cur = derivative_in(&cur, dir, 1);
    }
    out
}

/// `(∂f, ∂²f, ..., ∂^n f)` in direction `dir`.
pub fn derivative_args(f: &DiffPolynomial, dir: Dir, n: usize) -> Vec<DiffPolynomial> {
    let mut out = Vec::with_capacity(n);
    let mut cur = f.clone();
    for _ in 0..n {
        cur = derivative_in(&cur, dir, 1);
        out.push(cur.clone());
    }
    out
}

/// Bell number `B_n(1, ..., 1)` read off the complete polynomial.
pub fn bell_number(n: usize) -> BigInt {
    let ones = vec![DiffPolynomial::one(); n];
    let value = bell_complete(n, &ones)
        .expect("arity matches")
        .as_constant()
        .expect("constant arguments give a constant");
    value.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::integer;

    fn xs(n: usize) -> Vec<DiffPolynomial> {
        (1..=n)
            .map(|i| DiffPolynomial::symbol(&format!("x{i}")))
            .collect()
    }

    #[test]
    fn b32_is_three_x1_x2() {
        let x = xs(2);
        let expected = (&x[0] * &x[1]).scale(&integer(3));
        assert_eq!(bell_partial(3, 2, &x).unwrap(), expected);
    }

    #[test]
    fn diagonal_and_empty() {
        let x = xs(1);
        for n in 0..6 {
            assert_eq!(bell_partial(n, n, &x).unwrap(), x[0].pow(n as u32));
        }
        assert_eq!(bell_partial(0, 0, &[]).unwrap(), DiffPolynomial::one());
        assert!(bell_partial(4, 0, &x).unwrap().is_zero());
    }

    #[test]
    fn bad_index_and_arity() {
        assert_eq!(
            bell_partial(2, 3, &xs(3)),
            Err(Error::BadIndex { n: 2, k: 3 })
        );
        assert_eq!(
            bell_partial(4, 1, &xs(2)),
            Err(Error::BellArity { needed: 4, got: 2 })
        );
        assert_eq!(
            bell_complete(3, &xs(2)),
            Err(Error::BellArity { needed: 3, got: 2 })
        );
    }

    #[test]
    fn complete_small_orders() {
        let x = xs(3);
        assert_eq!(bell_complete(0, &[]).unwrap(), DiffPolynomial::one());
        assert_eq!(bell_complete(1, &x).unwrap(), x[0]);
        let expected = &(&x[0].pow(3) + &(&x[0] * &x[1]).scale(&integer(3))) + &x[2];
        assert_eq!(bell_complete(3, &x).unwrap(), expected);
    }

    #[test]
    fn small_determinants() {
        let x = xs(3);
        assert_eq!(bell_complete_det(1, &x).unwrap(), x[0]);
        assert_eq!(bell_complete_det(2, &x).unwrap(), &x[0].pow(2) + &x[1]);
        assert_eq!(
            bell_complete_det(3, &x).unwrap(),
            bell_complete(3, &x).unwrap()
        );
    }

    #[test]
    fn generic_determinant() {
        let m = vec![
            vec![
                DiffPolynomial::int(2),
                DiffPolynomial::int(1),
                DiffPolynomial::int(0),
            ],
            vec![
                DiffPolynomial::int(1),
                DiffPolynomial::int(3),
                DiffPolynomial::int(1),
            ],
            vec![
                DiffPolynomial::int(0),
                DiffPolynomial::int(1),
                DiffPolynomial::int(4),
            ],
        ];
        // 2(12-1) - 1(4-0) = 18
        assert_eq!(determinant(&m), DiffPolynomial::int(18));
    }

    #[test]
    fn sequence_counts_match_partition_counts() {
        // partitions of 6 into exactly k parts: 1,3,3,2,1,1
        let counts: Vec<usize> = (1..=6).map(|k| index_sequences(6, k).len()).collect();
        assert_eq!(counts, [1, 3, 3, 2, 1, 1]);
    }
}
