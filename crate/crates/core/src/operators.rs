//! The noncommutative ring `K[Dx, Dy]` and gauge conjugation.
//!
//! Operators are kept in normal form `Σ coeff(i,j)·Dx^i Dy^j` with
//! coefficients written to the left of the derivatives.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::combinat::pascal_row;
use crate::error::{Error, Result};
use crate::ring::{DiffPolynomial, Dir, JetVariable, Rational, Symbol};

/// Derivative multi-index `(i, j)` of `Dx^i Dy^j`.
pub type DerivIndex = (u32, u32);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearDiffOperator {
    coeffs: BTreeMap<DerivIndex, DiffPolynomial>,
}

impl LinearDiffOperator {
    pub fn zero() -> Self {
        LinearDiffOperator::default()
    }

    pub fn one() -> Self {
        LinearDiffOperator::multiplication(DiffPolynomial::one())
    }

    /// The operator of multiplication by `f`.
    pub fn multiplication(f: DiffPolynomial) -> Self {
        LinearDiffOperator::term(f, 0, 0)
    }

    pub fn dx() -> Self {
        LinearDiffOperator::term(DiffPolynomial::one(), 1, 0)
    }

    pub fn dy() -> Self {
        LinearDiffOperator::term(DiffPolynomial::one(), 0, 1)
    }

    /// `coeff · Dx^i Dy^j`.
    pub fn term(coeff: DiffPolynomial, i: u32, j: u32) -> Self {
        let mut op = LinearDiffOperator::zero();
        op.add_term((i, j), coeff);
        op
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (DerivIndex, DiffPolynomial)>,
    {
        let mut op = LinearDiffOperator::zero();
        for (k, c) in terms {
            op.add_term(k, c);
        }
        op
    }

    fn add_term(&mut self, key: DerivIndex, c: DiffPolynomial) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(key).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total order, `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, j)| i + j).max()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> DiffPolynomial {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivIndex, &DiffPolynomial)> {
        self.coeffs.iter()
    }

    pub fn has_mixed_terms(&self) -> bool {
        self.coeffs.keys().any(|&(i, j)| i > 0 && j > 0)
    }

    /// Left multiplication of every coefficient by `f`.
    pub fn left_mul(&self, f: &DiffPolynomial) -> Self {
        LinearDiffOperator::from_terms(self.coeffs.iter().map(|(&k, c)| (k, f * c)))
    }

    pub fn map_coefficients<F>(&self, f: F) -> Self
    where
        F: Fn(&DiffPolynomial) -> DiffPolynomial,
    {
        LinearDiffOperator::from_terms(self.coeffs.iter().map(|(&k, c)| (k, f(c))))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(LinearDiffOperator::one(), |acc, _| acc.compose(self))
    }

    /// `self ∘ other`, normalized by the general Leibniz rule
    /// `Dx^i Dy^j ∘ q = Σ C(i,s) C(j,t) ∂x^{i-s} ∂y^{j-t}(q) Dx^s Dy^t`.
    pub fn compose(&self, other: &LinearDiffOperator) -> Self {
        let mut out = LinearDiffOperator::zero();
        let mut derivs: HashMap<(DerivIndex, u32, u32), DiffPolynomial> = HashMap::new();
        let mut rows: HashMap<u32, Vec<BigInt>> = HashMap::new();
        for (&(i, j), p) in &self.coeffs {
            let row_i = rows
                .entry(i)
                .or_insert_with(|| pascal_row(i as usize))
                .clone();
            let row_j = rows
                .entry(j)
                .or_insert_with(|| pascal_row(j as usize))
                .clone();
            for (&(k, l), q) in &other.coeffs {
                for s in 0..=i {
                    for t in 0..=j {
                        let (dx, dy) = (i - s, j - t);
                        let dq = derivs
                            .entry(((k, l), dx, dy))
                            .or_insert_with(|| q.derivative(dx, dy));
                        if dq.is_zero() {
                            continue;
                        }
                        let c = Rational::from_integer(&row_i[s as usize] * &row_j[t as usize]);
                        out.add_term((s + k, t + l), (p * &*dq).scale(&c));
                    }
                }
            }
        }
        out
    }

    /// `self(f)`: the operator applied to a function.
    pub fn apply(&self, f: &DiffPolynomial) -> DiffPolynomial {
        self.coeffs
            .iter()
            .map(|(&(i, j), c)| c * &f.derivative(i, j))
            .sum()
    }

    /// `exp(-α) ∘ self ∘ exp(α)`, via `Dx ↦ Dx + α_x`, `Dy ↦ Dy + α_y`.
    pub fn gauge_conjugate(&self, alpha: &GaugeParameter) -> Self {
        let shifted_x =
            &LinearDiffOperator::dx() + &LinearDiffOperator::multiplication(alpha.jet(1, 0));
        let shifted_y =
            &LinearDiffOperator::dy() + &LinearDiffOperator::multiplication(alpha.jet(0, 1));
        let mut xpow: HashMap<u32, LinearDiffOperator> = HashMap::new();
        let mut ypow: HashMap<u32, LinearDiffOperator> = HashMap::new();
        let mut out = LinearDiffOperator::zero();
        for (&(i, j), c) in &self.coeffs {
            let px = xpow.entry(i).or_insert_with(|| shifted_x.pow(i)).clone();
            let py = ypow.entry(j).or_insert_with(|| shifted_y.pow(j)).clone();
            out = &out + &px.compose(&py).left_mul(c);
        }
        out
    }

    /// Restriction of the coefficient map to the top total order.
    pub fn principal_symbol(&self) -> Result<BTreeMap<DerivIndex, DiffPolynomial>> {
        let order = self.order().ok_or(Error::ZeroOperator)?;
        Ok(self
            .coeffs
            .iter()
            .filter(|(&(i, j), _)| i + j == order)
            .map(|(&k, c)| (k, c.clone()))
            .collect())
    }
}

impl Add for &LinearDiffOperator {
    type Output = LinearDiffOperator;
    fn add(self, rhs: &LinearDiffOperator) -> LinearDiffOperator {
        let mut out = self.clone();
        for (&k, c) in &rhs.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &LinearDiffOperator {
    type Output = LinearDiffOperator;
    fn sub(self, rhs: &LinearDiffOperator) -> LinearDiffOperator {
        self + &(-rhs)
    }
}

impl Neg for &LinearDiffOperator {
    type Output = LinearDiffOperator;
    fn neg(self) -> LinearDiffOperator {
        self.map_coefficients(|c| -c)
    }
}

/// Composition.
impl Mul for &LinearDiffOperator {
    type Output = LinearDiffOperator;
    fn mul(self, rhs: &LinearDiffOperator) -> LinearDiffOperator {
        self.compose(rhs)
    }
}

/// Symbol of the gauge exponent `α`, with `g = exp(α)`.
///
/// Must not coincide with any coefficient symbol of the operators it acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeParameter {
    symbol: Symbol,
}

impl GaugeParameter {
    pub fn new(name: &str) -> Self {
        GaugeParameter {
            symbol: Symbol::from(name),
        }
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn jet_var(&self, nx: u32, ny: u32) -> JetVariable {
        JetVariable::new(self.symbol.clone(), nx, ny)
    }

    pub fn jet(&self, nx: u32, ny: u32) -> DiffPolynomial {
        DiffPolynomial::var(self.jet_var(nx, ny))
    }

    /// True if no jet of this parameter occurs in `op`.
    pub fn is_fresh_for(&self, op: &LinearDiffOperator) -> bool {
        op.terms()
            .all(|(_, c)| c.jets().iter().all(|v| v.symbol != self.symbol))
    }
}

impl Default for GaugeParameter {
    fn default() -> Self {
        GaugeParameter::new("alpha")
    }
}

/// `Dx Dy + a Dx + b Dy + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplaceOperator {
    pub a: DiffPolynomial,
    pub b: DiffPolynomial,
    pub c: DiffPolynomial,
}

impl LaplaceOperator {
    pub fn new(a: DiffPolynomial, b: DiffPolynomial, c: DiffPolynomial) -> Self {
        LaplaceOperator { a, b, c }
    }

    /// Coefficients are the pure jets `a`, `b`, `c`.
    pub fn generic() -> Self {
        LaplaceOperator::new(
            DiffPolynomial::symbol("a"),
            DiffPolynomial::symbol("b"),
            DiffPolynomial::symbol("c"),
        )
    }

    pub fn to_operator(&self) -> LinearDiffOperator {
        LinearDiffOperator::from_terms([
            ((1, 1), DiffPolynomial::one()),
            ((1, 0), self.a.clone()),
            ((0, 1), self.b.clone()),
            ((0, 0), self.c.clone()),
        ])
    }

    pub fn from_operator(op: &LinearDiffOperator) -> Result<Self> {
        if !op.coefficient(1, 1).is_one() {
            return Err(Error::NotLaplace("coefficient of Dx*Dy must be 1".into()));
        }
        if let Some((&(i, j), _)) = op
            .terms()
            .find(|(&(i, j), _)| !matches!((i, j), (1, 1) | (1, 0) | (0, 1) | (0, 0)))
        {
            return Err(Error::NotLaplace(format!("unexpected term Dx^{i}*Dy^{j}")));
        }
        Ok(LaplaceOperator::new(
            op.coefficient(1, 0),
            op.coefficient(0, 1),
            op.coefficient(0, 0),
        ))
    }

    /// The gauge action on the coefficients:
    /// `(a + α_y, b + α_x, c + a α_x + b α_y + α_xy + α_x α_y)`.
    pub fn gauge_action(&self, alpha: &GaugeParameter) -> Self {
        let (ax, ay, axy) = (alpha.jet(1, 0), alpha.jet(0, 1), alpha.jet(1, 1));
        let c = &(&(&(&self.c + &(&self.a * &ax)) + &(&self.b * &ay)) + &axy) + &(&ax * &ay);
        LaplaceOperator::new(&self.a + &ay, &self.b + &ax, c)
    }
}

/// `Σ_{i=1..d} (m_i Dx^i + m_{-i} Dy^i) + m_0`, an operator without mixed
/// derivatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedM {
    d: u32,
    // index i + d holds m_i
    coeffs: Vec<DiffPolynomial>,
}

impl NormalizedM {
    /// Coefficients listed for `i = -d..=d`.
    pub fn new(d: u32, coeffs: Vec<DiffPolynomial>) -> Self {
        assert!(d >= 1, "order of M must be positive");
        assert_eq!(coeffs.len(), 2 * d as usize + 1, "need 2d+1 coefficients");
        NormalizedM { d, coeffs }
    }

    /// Coefficients are the symbols `m[-d]..m[d]`.
    pub fn generic(d: u32) -> Self {
        let coeffs = (-(d as i64)..=d as i64)
            .map(|i| DiffPolynomial::var(JetVariable::base(Symbol::indexed("m", i))))
            .collect();
        NormalizedM::new(d, coeffs)
    }

    /// Wraps a mixed-free operator. The order is taken from `order` when
    /// given, otherwise inferred as the largest derivative power and the
    /// largest `|i|` of any `m[i]` symbol in the coefficients (at least 1).
    pub fn from_operator(op: &LinearDiffOperator, order: Option<u32>) -> Result<Self> {
        if let Some((&(dx, dy), _)) = op.terms().find(|(&(i, j), _)| i > 0 && j > 0) {
            return Err(Error::MixedTerm { dx, dy });
        }
        let found = op.order().unwrap_or(0);
        let d = match order {
            Some(d) if d < found.max(1) => {
                return Err(Error::OrderTooSmall {
                    requested: d,
                    found: found.max(1),
                })
            }
            Some(d) => d,
            None => {
                let from_symbols = op
                    .terms()
                    .flat_map(|(_, c)| c.jets())
                    .filter(|v| v.symbol.name() == "m")
                    .filter_map(|v| v.symbol.index())
                    .map(|i| i.unsigned_abs() as u32)
                    .max()
                    .unwrap_or(0);
                found.max(from_symbols).max(1)
            }
        };
        let coeffs = (-(d as i64)..=d as i64)
            .map(|i| match i.cmp(&0) {
                std::cmp::Ordering::Greater => op.coefficient(i as u32, 0),
                std::cmp::Ordering::Less => op.coefficient(0, i.unsigned_abs() as u32),
                std::cmp::Ordering::Equal => op.coefficient(0, 0),
            })
            .collect();
        Ok(NormalizedM::new(d, coeffs))
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    /// `m_i` for `-d <= i <= d`, zero outside.
    pub fn coefficient(&self, i: i64) -> &DiffPolynomial {
        static ZERO: std::sync::OnceLock<DiffPolynomial> = std::sync::OnceLock::new();
        let d = self.d as i64;
        if i < -d || i > d {
            return ZERO.get_or_init(DiffPolynomial::zero);
        }
        &self.coeffs[(i + d) as usize]
    }

    pub fn to_operator(&self) -> LinearDiffOperator {
        let d = self.d as i64;
        LinearDiffOperator::from_terms((-d..=d).map(|i| {
            let key = if i >= 0 {
                (i as u32, 0)
            } else {
                (0, i.unsigned_abs() as u32)
            };
            (key, self.coefficient(i).clone())
        }))
    }

    /// Gauge conjugation of each term; powers of `Dx + α_x` only contain
    /// powers of `Dx`, so the result is again mixed-free.
    pub fn gauge_conjugate(&self, alpha: &GaugeParameter) -> Self {
        let conj = self.to_operator().gauge_conjugate(alpha);
        debug_assert!(!conj.has_mixed_terms());
        NormalizedM::from_operator(&conj, Some(self.d))
            .expect("conjugate of a mixed-free operator is mixed-free")
    }
}

/// `exp(-α) P exp(α)`.
pub fn gauge_conjugate(op: &LinearDiffOperator, alpha: &GaugeParameter) -> LinearDiffOperator {
    op.gauge_conjugate(alpha)
}

pub fn gauge_action_laplace(l: &LaplaceOperator, alpha: &GaugeParameter) -> LaplaceOperator {
    l.gauge_action(alpha)
}

pub fn gauge_conjugate_m(m: &NormalizedM, alpha: &GaugeParameter) -> NormalizedM {
    m.gauge_conjugate(alpha)
}

pub fn op_compose(p: &LinearDiffOperator, q: &LinearDiffOperator) -> LinearDiffOperator {
    p.compose(q)
}

pub fn op_apply(p: &LinearDiffOperator, f: &DiffPolynomial) -> DiffPolynomial {
    p.apply(f)
}

pub fn principal_symbol(p: &LinearDiffOperator) -> Result<BTreeMap<DerivIndex, DiffPolynomial>> {
    p.principal_symbol()
}

/// `∂^n f` in direction `dir`.
pub(crate) fn derivative_in(f: &DiffPolynomial, dir: Dir, n: u32) -> DiffPolynomial {
    match dir {
        Dir::X => f.derivative(n, 0),
        Dir::Y => f.derivative(0, n),
    }
}
