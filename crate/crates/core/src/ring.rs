//! Sparse differential polynomials in jet variables over exact rationals.
//!
//! A [`JetVariable`] stands for one partial derivative `s_{x..xy..y}` of a
//! named coefficient function. Distinct jets are independent indeterminates;
//! the only link between them is [`DiffPolynomial::total_derivative`].
//!
//! Canonical forms are unique: monomials never store zero exponents and
//! polynomials never store zero coefficients, so `==` is algebraic equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact scalar of the coefficient field.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Direction of a total derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    X,
    Y,
}

/// Name of a coefficient function, optionally carrying a signed index
/// (`m[-3]`).
///
/// Indexed symbols order before plain ones; indexed symbols compare by name
/// then numeric index, plain symbols alphabetically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    name: Arc<str>,
    index: Option<i64>,
}

impl Symbol {
    pub fn new(name: &str) -> Self {
        assert!(!name.is_empty(), "symbol name must be non-empty");
        Symbol {
            name: Arc::from(name),
            index: None,
        }
    }

    pub fn indexed(name: &str, index: i64) -> Self {
        assert!(!name.is_empty(), "symbol name must be non-empty");
        Symbol {
            name: Arc::from(name),
            index: Some(index),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> Option<i64> {
        self.index
    }

    fn sort_key(&self) -> (bool, &str, Option<i64>) {
        (self.index.is_none(), &self.name, self.index)
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}[{}]", self.name, i),
            None => f.write_str(&self.name),
        }
    }
}

/// `∂x^nx ∂y^ny` of the function named by `symbol`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetVariable {
    pub symbol: Symbol,
    pub nx: u32,
    pub ny: u32,
}

impl JetVariable {
    pub fn new(symbol: Symbol, nx: u32, ny: u32) -> Self {
        JetVariable { symbol, nx, ny }
    }

    /// The undifferentiated function itself.
    pub fn base(symbol: Symbol) -> Self {
        JetVariable::new(symbol, 0, 0)
    }

    pub fn derive(&self, dir: Dir) -> Self {
        match dir {
            Dir::X => JetVariable::new(self.symbol.clone(), self.nx + 1, self.ny),
            Dir::Y => JetVariable::new(self.symbol.clone(), self.nx, self.ny + 1),
        }
    }

    pub fn is_mixed(&self) -> bool {
        self.nx > 0 && self.ny > 0
    }

    pub fn order(&self) -> u32 {
        self.nx + self.ny
    }
}

impl fmt::Display for JetVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if self.nx + self.ny > 0 {
            f.write_str("_")?;
            for _ in 0..self.nx {
                f.write_str("x")?;
            }
            for _ in 0..self.ny {
                f.write_str("y")?;
            }
        }
        Ok(())
    }
}

/// Power product of jet variables, kept sorted by variable with positive
/// exponents.
///
/// The ordering is lexicographic with the smallest variable most
/// significant and larger exponents first; the unit monomial is last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(JetVariable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: JetVariable) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary factors, merging repeats and
    /// dropping zero exponents.
    pub fn from_factors<I>(factors: I) -> Self
    where
        I: IntoIterator<Item = (JetVariable, u32)>,
    {
        let mut map: BTreeMap<JetVariable, u32> = BTreeMap::new();
        for (v, e) in factors {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(JetVariable, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &JetVariable) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for ((va, ea), (vb, eb)) in self.0.iter().zip(&other.0) {
            match va.cmp(vb) {
                Ordering::Equal => match eb.cmp(ea) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
                ord => return ord,
            }
        }
        other.0.len().cmp(&self.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of `Q[jets]`, stored as a sparse map from monomials to nonzero
/// rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DiffPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPolynomial {
    pub fn zero() -> Self {
        DiffPolynomial::default()
    }

    pub fn one() -> Self {
        DiffPolynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        DiffPolynomial::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        DiffPolynomial::constant(integer(n))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPolynomial { terms }
    }

    pub fn var(v: JetVariable) -> Self {
        DiffPolynomial::term(Rational::one(), Monomial::var(v))
    }

    /// The undifferentiated function `name` (accepts `m[3]` syntax).
    pub fn symbol(name: &str) -> Self {
        DiffPolynomial::var(JetVariable::base(Symbol::from(name)))
    }

    pub fn jet(name: &str, nx: u32, ny: u32) -> Self {
        DiffPolynomial::var(JetVariable::new(Symbol::from(name), nx, ny))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// The value if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn jets(&self) -> BTreeSet<JetVariable> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return DiffPolynomial::zero();
        }
        DiffPolynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = DiffPolynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Total derivative in `dir`: a derivation sending the jet `(s,nx,ny)`
    /// to `(s,nx+1,ny)` (resp. `ny+1`).
    pub fn total_derivative(&self, dir: Dir) -> Self {
        let mut out = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            let factors = m.factors();
            for (i, (v, e)) in factors.iter().enumerate() {
                let rest = factors.iter().enumerate().map(|(j, (w, f))| {
                    if i == j {
                        (w.clone(), f - 1)
                    } else {
                        (w.clone(), *f)
                    }
                });
                let dm = Monomial::from_factors(rest.chain(std::iter::once((v.derive(dir), 1))));
                out.add_term(dm, c * integer(i64::from(*e)));
            }
        }
        out
    }

    /// `∂x^nx ∂y^ny` applied to this polynomial.
    pub fn derivative(&self, nx: u32, ny: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..nx {
            p = p.total_derivative(Dir::X);
        }
        for _ in 0..ny {
            p = p.total_derivative(Dir::Y);
        }
        p
    }

    /// Simultaneous substitution of the bound jets.
    pub fn substitute(&self, bindings: &BTreeMap<JetVariable, DiffPolynomial>) -> Self {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut out = DiffPolynomial::zero();
        let mut powers: BTreeMap<(JetVariable, u32), DiffPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut product = DiffPolynomial::constant(c.clone());
            for (v, e) in m.factors() {
                match bindings.get(v) {
                    Some(value) => {
                        let p = powers
                            .entry((v.clone(), *e))
                            .or_insert_with(|| value.pow(*e));
                        product = &product * &*p;
                    }
                    None => kept.push((v.clone(), *e)),
                }
            }
            let kept = DiffPolynomial::term(Rational::one(), Monomial(kept));
            out += &(&product * &kept);
        }
        out
    }

    /// Exact value at a point binding every jet that occurs.
    pub fn evaluate(&self, point: &BTreeMap<JetVariable, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut value = c.clone();
            for (v, e) in m.factors() {
                let x = point.get(v).ok_or_else(|| Error::UnboundJet(v.clone()))?;
                value *= num_traits::pow(x.clone(), *e as usize);
            }
            total += value;
        }
        Ok(total)
    }
}

impl From<&str> for Symbol {
    /// Accepts `name` or `name[int]`.
    fn from(s: &str) -> Self {
        if let Some(open) = s.find('[') {
            if let Some(inner) = s[open + 1..].strip_suffix(']') {
                if let Ok(i) = inner.parse::<i64>() {
                    return Symbol::indexed(&s[..open], i);
                }
            }
        }
        Symbol::new(s)
    }
}

impl From<JetVariable> for DiffPolynomial {
    fn from(v: JetVariable) -> Self {
        DiffPolynomial::var(v)
    }
}

impl From<Rational> for DiffPolynomial {
    fn from(c: Rational) -> Self {
        DiffPolynomial::constant(c)
    }
}

impl From<i64> for DiffPolynomial {
    fn from(n: i64) -> Self {
        DiffPolynomial::int(n)
    }
}

impl AddAssign<&DiffPolynomial> for DiffPolynomial {
    fn add_assign(&mut self, rhs: &DiffPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&DiffPolynomial> for DiffPolynomial {
    fn sub_assign(&mut self, rhs: &DiffPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn add(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn sub(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn mul(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn neg(self) -> DiffPolynomial {
        DiffPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for DiffPolynomial {
            type Output = DiffPolynomial;
            fn $method(self, rhs: DiffPolynomial) -> DiffPolynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&DiffPolynomial> for DiffPolynomial {
            type Output = DiffPolynomial;
            fn $method(self, rhs: &DiffPolynomial) -> DiffPolynomial {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for DiffPolynomial {
    type Output = DiffPolynomial;
    fn neg(self) -> DiffPolynomial {
        -&self
    }
}

impl std::iter::Sum for DiffPolynomial {
    fn sum<I: Iterator<Item = DiffPolynomial>>(iter: I) -> Self {
        iter.fold(DiffPolynomial::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> DiffPolynomial {
        DiffPolynomial::symbol(name)
    }

    #[test]
    fn additive_inverse_cancels() {
        let ab = &p("a") * &p("b");
        assert!((&ab + &(-&ab)).is_zero());
    }

    #[test]
    fn like_terms_collect() {
        let sum = &p("a").scale(&integer(2)) + &p("a").scale(&integer(3));
        assert_eq!(sum, p("a").scale(&integer(5)));
    }

    #[test]
    fn disjoint_supports_stay_apart() {
        let s = &DiffPolynomial::jet("a", 1, 0) + &DiffPolynomial::jet("b", 0, 1);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (p("a"), p("b"));
        let lhs = &(&a + &b) * &(&a - &b);
        let rhs = &a.pow(2) - &b.pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_and_zero_products() {
        let q = &p("a") + &DiffPolynomial::jet("c", 2, 1);
        assert_eq!(&DiffPolynomial::one() * &q, q);
        assert!((&DiffPolynomial::zero() * &q).is_zero());
    }

    #[test]
    fn product_rule_on_ab() {
        let d = (&p("a") * &p("b")).total_derivative(Dir::X);
        let expected = &(&DiffPolynomial::jet("a", 1, 0) * &p("b"))
            + &(&p("a") * &DiffPolynomial::jet("b", 1, 0));
        assert_eq!(d, expected);
    }

    #[test]
    fn derivations_commute_on_jets() {
        let c = p("c");
        let xy = c.total_derivative(Dir::Y).total_derivative(Dir::X);
        let yx = c.total_derivative(Dir::X).total_derivative(Dir::Y);
        assert_eq!(xy, yx);
        assert_eq!(xy, DiffPolynomial::jet("c", 1, 1));
    }

    #[test]
    fn derivative_of_square() {
        let d = p("a").pow(2).total_derivative(Dir::X);
        let expected = (&p("a") * &DiffPolynomial::jet("a", 1, 0)).scale(&integer(2));
        assert_eq!(d, expected);
    }

    #[test]
    fn constants_differentiate_to_zero() {
        assert!(DiffPolynomial::int(7).total_derivative(Dir::Y).is_zero());
    }

    #[test]
    fn substitution_of_square() {
        let ax = JetVariable::new(Symbol::new("alpha"), 1, 0);
        let q = DiffPolynomial::var(ax.clone()).pow(2);
        let bindings = BTreeMap::from([(ax, -p("b"))]);
        assert_eq!(q.substitute(&bindings), p("b").pow(2));
    }

    #[test]
    fn empty_and_killing_substitutions() {
        let q = &DiffPolynomial::jet("a", 1, 0) + &p("b");
        assert_eq!(q.substitute(&BTreeMap::new()), q);
        let kill = BTreeMap::from([(JetVariable::base(Symbol::new("b")), DiffPolynomial::zero())]);
        assert_eq!(q.substitute(&kill), DiffPolynomial::jet("a", 1, 0));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let a = JetVariable::base(Symbol::new("a"));
        let b = JetVariable::base(Symbol::new("b"));
        let q = &p("a") - &p("b");
        let swap = BTreeMap::from([(a, p("b")), (b, p("a"))]);
        assert_eq!(q.substitute(&swap), &p("b") - &p("a"));
    }

    #[test]
    fn evaluate_laplace_h() {
        let h = &(&(&p("a") * &p("b")) - &p("c")) + &DiffPolynomial::jet("a", 1, 0);
        let point = BTreeMap::from([
            (JetVariable::base(Symbol::new("a")), integer(2)),
            (JetVariable::base(Symbol::new("b")), integer(3)),
            (JetVariable::base(Symbol::new("c")), integer(1)),
            (JetVariable::new(Symbol::new("a"), 1, 0), integer(5)),
        ]);
        assert_eq!(h.evaluate(&point).unwrap(), integer(10));
    }

    #[test]
    fn evaluate_zero_and_unbound() {
        assert_eq!(
            DiffPolynomial::zero().evaluate(&BTreeMap::new()).unwrap(),
            integer(0)
        );
        let point = BTreeMap::from([(JetVariable::base(Symbol::new("b")), integer(7))]);
        assert_eq!(
            p("a").evaluate(&point),
            Err(Error::UnboundJet(JetVariable::base(Symbol::new("a"))))
        );
    }

    #[test]
    fn symbol_order_puts_indexed_first() {
        let mut syms = [
            Symbol::new("b"),
            Symbol::from("m[3]"),
            Symbol::new("a"),
            Symbol::from("m[-2]"),
        ];
        syms.sort();
        let shown: Vec<String> = syms.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["m[-2]", "m[3]", "a", "b"]);
    }

    #[test]
    fn monomial_order_is_lex() {
        let x1 = Monomial::var(JetVariable::base(Symbol::new("x1")));
        let x1_cubed = Monomial::from_factors([(JetVariable::base(Symbol::new("x1")), 3)]);
        let x3 = Monomial::var(JetVariable::base(Symbol::new("x3")));
        assert!(x1_cubed < x1);
        assert!(x1 < x3);
        assert!(x3 < Monomial::one());
    }

    #[test]
    fn jet_display() {
        let v = JetVariable::new(Symbol::from("m[-3]"), 0, 1);
        assert_eq!(v.to_string(), "m[-3]_y");
        assert_eq!(
            JetVariable::new(Symbol::new("a"), 2, 1).to_string(),
            "a_xxy"
        );
    }
}
