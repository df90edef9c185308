//! Joint gauge invariants of the pair `(L, M)`.
//!
//! For `L = Dx Dy + a Dx + b Dy + c` and a mixed-free
//! `M = Σ_{i=1..d} (m_i Dx^i + m_{-i} Dy^i) + m_0`, the basis invariants are
//!
//! ```text
//! m    = a_x - b_y
//! h    = a_x + ab - c
//! R_j  = Σ_{w=j..d} m_w C(w,j) B_{w-j}(-b, -b_x, ..., -∂x^{w-j-1} b)      j = 1..d
//! R_-j = Σ_{w=j..d} m_-w C(w,j) B_{w-j}(-a, -a_y, ..., -∂y^{w-j-1} a)     j = 1..d
//! R_0  = m_0 + Σ_{w=1..d} m_w B_w(-b, ...) + m_-w B_w(-a, ...)
//! ```
//!
//! Two independent constructions are provided: [`invariants_bell`] through
//! complete Bell polynomials and [`invariants_omega`] through iterates of
//! `Ω = Dx - b` (resp. `Dy - a`). The `R_j` are also the frame restriction
//! (`∂x^k α ↦ -∂x^{k-1} b`, `∂y^k α ↦ -∂y^{k-1} a`) of the coefficients of
//! the gauge-conjugated `M`, see [`frame_restrict`].

use std::collections::BTreeMap;

use crate::bell::{bell_complete, negated_derivative_args};
use crate::combinat::binomial;
use crate::error::{Error, Result};
use crate::operators::{derivative_in, GaugeParameter, LaplaceOperator, NormalizedM};
use crate::ring::{DiffPolynomial, Dir, JetVariable, Rational};

/// The classical Laplace invariants together with `m = h - k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplaceInvariants {
    pub h: DiffPolynomial,
    pub k: DiffPolynomial,
    pub m: DiffPolynomial,
}

pub fn laplace_invariants(l: &LaplaceOperator) -> LaplaceInvariants {
    let ab_c = &(&l.a * &l.b) - &l.c;
    let a_x = l.a.derivative(1, 0);
    let b_y = l.b.derivative(0, 1);
    LaplaceInvariants {
        h: &a_x + &ab_c,
        k: &b_y + &ab_c,
        m: &a_x - &b_y,
    }
}

/// The `2d + 3` basis invariants `m, h, R_{-d}, ..., R_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSet {
    pub d: u32,
    pub m: DiffPolynomial,
    pub h: DiffPolynomial,
    pub r: BTreeMap<i64, DiffPolynomial>,
}

impl InvariantSet {
    pub fn len(&self) -> usize {
        2 + self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, j: i64) -> Option<&DiffPolynomial> {
        self.r.get(&j)
    }

    /// All entries with labels `m`, `h`, `R[-d]`, ..., `R[d]`.
    pub fn entries(&self) -> Vec<(String, &DiffPolynomial)> {
        let mut out = vec![("m".to_string(), &self.m), ("h".to_string(), &self.h)];
        out.extend(self.r.iter().map(|(j, p)| (format!("R[{j}]"), p)));
        out
    }

    /// Labels of the entries that differ between two sets of the same order.
    pub fn differing_entries(&self, other: &InvariantSet) -> Vec<String> {
        self.entries()
            .into_iter()
            .zip(other.entries())
            .filter(|((_, p), (_, q))| p != q)
            .map(|((label, _), _)| label)
            .collect()
    }
}

/// The frame `∂x^k α ↦ -∂x^{k-1} b`, `∂y^k α ↦ -∂y^{k-1} a` for `k` up to
/// `max_order`.
#[derive(Debug, Clone)]
pub struct FrameSubstitution {
    bindings: BTreeMap<JetVariable, DiffPolynomial>,
}

impl FrameSubstitution {
    pub fn new(alpha: &GaugeParameter, l: &LaplaceOperator, max_order: u32) -> Self {
        let mut bindings = BTreeMap::new();
        let (mut bx, mut ay) = (l.b.clone(), l.a.clone());
        for k in 1..=max_order {
            bindings.insert(alpha.jet_var(k, 0), -&bx);
            bindings.insert(alpha.jet_var(0, k), -&ay);
            bx = bx.total_derivative(Dir::X);
            ay = ay.total_derivative(Dir::Y);
        }
        FrameSubstitution { bindings }
    }

    pub fn bindings(&self) -> &BTreeMap<JetVariable, DiffPolynomial> {
        &self.bindings
    }

    pub fn apply(&self, p: &DiffPolynomial) -> DiffPolynomial {
        p.substitute(&self.bindings)
    }
}

/// Restricts `p` to the frame of `l`. The frame's jet order is the highest
/// `α` jet present in `p`.
pub fn frame_restrict(
    p: &DiffPolynomial,
    alpha: &GaugeParameter,
    l: &LaplaceOperator,
) -> Result<DiffPolynomial> {
    let mut max_order = 0;
    for v in p.jets() {
        if &v.symbol != alpha.symbol() {
            continue;
        }
        if v.is_mixed() {
            return Err(Error::MixedAlphaJet(v));
        }
        if v.order() == 0 {
            return Err(Error::BareAlpha(v));
        }
        max_order = max_order.max(v.order());
    }
    Ok(FrameSubstitution::new(alpha, l, max_order).apply(p))
}

/// `(coefficient function, direction)` of one family of invariants:
/// `(b, x)` for positive indices, `(a, y)` for negative ones.
fn family(l: &LaplaceOperator, positive: bool) -> (&DiffPolynomial, Dir) {
    if positive {
        (&l.b, Dir::X)
    } else {
        (&l.a, Dir::Y)
    }
}

fn rational_binomial(n: u32, k: u32) -> Rational {
    Rational::from_integer(binomial(n as usize, k as usize))
}

/// Basis invariants through complete Bell polynomials.
pub fn invariants_bell(l: &LaplaceOperator, m: &NormalizedM) -> InvariantSet {
    let d = m.order();
    let LaplaceInvariants { h, m: mm, .. } = laplace_invariants(l);
    let mut r = BTreeMap::new();

    // B_n(-f, -∂f, ...) for n = 0..=d, per family
    let bells = |positive: bool| -> Vec<DiffPolynomial> {
        let (f, dir) = family(l, positive);
        let args = negated_derivative_args(f, dir, d as usize);
        (0..=d as usize)
            .map(|n| bell_complete(n, &args).expect("enough arguments"))
            .collect()
    };
    let bell_x = bells(true);
    let bell_y = bells(false);

    for j in 1..=d {
        for (sign, table) in [(1i64, &bell_x), (-1i64, &bell_y)] {
            let value: DiffPolynomial = (j..=d)
                .map(|w| {
                    let coeff = m.coefficient(sign * w as i64);
                    (coeff * &table[(w - j) as usize]).scale(&rational_binomial(w, j))
                })
                .sum();
            r.insert(sign * j as i64, value);
        }
    }
    let mut r0 = m.coefficient(0).clone();
    for w in 1..=d {
        r0 += &(m.coefficient(w as i64) * &bell_x[w as usize]);
        r0 += &(m.coefficient(-(w as i64)) * &bell_y[w as usize]);
    }
    r.insert(0, r0);
    InvariantSet { d, m: mm, h, r }
}

/// Which coefficient `Ω` pairs with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaMode {
    /// `Ω(g) = ∂x g - b g`
    XWithB,
    /// `Ω(g) = ∂y g - a g`
    YWithA,
}

/// `Ω^i(f)`.
pub fn omega_power(
    l: &LaplaceOperator,
    f: &DiffPolynomial,
    mode: OmegaMode,
    i: u32,
) -> DiffPolynomial {
    let (coeff, dir) = match mode {
        OmegaMode::XWithB => (&l.b, Dir::X),
        OmegaMode::YWithA => (&l.a, Dir::Y),
    };
    let mut g = f.clone();
    for _ in 0..i {
        g = &derivative_in(&g, dir, 1) - &(coeff * &g);
    }
    g
}

/// Argument of the `P_i` operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PArgument {
    A,
    B,
}

/// `P_0 = 1`, `P_i(f) = -Ω^{i-1}(f)` for `i >= 1`, with `Ω` in the mode
/// matching `f`.
pub fn p_op(l: &LaplaceOperator, f: PArgument, i: u32) -> DiffPolynomial {
    if i == 0 {
        return DiffPolynomial::one();
    }
    let (arg, mode) = match f {
        PArgument::B => (&l.b, OmegaMode::XWithB),
        PArgument::A => (&l.a, OmegaMode::YWithA),
    };
    -omega_power(l, arg, mode, i - 1)
}

/// Basis invariants through the `P_i` operators.
pub fn invariants_omega(l: &LaplaceOperator, m: &NormalizedM) -> InvariantSet {
    let d = m.order();
    let LaplaceInvariants { h, m: mm, .. } = laplace_invariants(l);
    let pb: Vec<DiffPolynomial> = (0..=d).map(|i| p_op(l, PArgument::B, i)).collect();
    let pa: Vec<DiffPolynomial> = (0..=d).map(|i| p_op(l, PArgument::A, i)).collect();
    let mut r = BTreeMap::new();
    for j in 1..=d {
        for (sign, p) in [(1i64, &pb), (-1i64, &pa)] {
            let value: DiffPolynomial = (0..=d - j)
                .map(|i| {
                    let coeff = m.coefficient(sign * (i + j) as i64);
                    (coeff * &p[i as usize]).scale(&rational_binomial(j + i, j))
                })
                .sum();
            r.insert(sign * j as i64, value);
        }
    }
    let mut r0 = m.coefficient(0).clone();
    for i in 1..=d {
        r0 += &(m.coefficient(i as i64) * &pb[i as usize]);
        r0 += &(m.coefficient(-(i as i64)) * &pa[i as usize]);
    }
    r.insert(0, r0);
    InvariantSet { d, m: mm, h, r }
}

/// True iff `invariant` takes the same value on `(L, M)` and on its gauge
/// transform by `α`.
pub fn is_gauge_invariant<F>(
    l: &LaplaceOperator,
    m: &NormalizedM,
    alpha: &GaugeParameter,
    invariant: F,
) -> bool
where
    F: Fn(&LaplaceOperator, &NormalizedM) -> DiffPolynomial,
{
    let before = invariant(l, m);
    let after = invariant(&l.gauge_action(alpha), &m.gauge_conjugate(alpha));
    before == after
}

/// True iff every one of the `2d + 3` basis invariants is unchanged by the
/// gauge transformation `exp(α)`.
pub fn verify_gauge_invariance(
    l: &LaplaceOperator,
    m: &NormalizedM,
    alpha: &GaugeParameter,
) -> bool {
    let before = invariants_bell(l, m);
    let after = invariants_bell(&l.gauge_action(alpha), &m.gauge_conjugate(alpha));
    before == after
}

/// Frame restriction of the conjugated coefficients of `M`: entry `k` is the
/// restricted coefficient of `Dx^k` (`k > 0`), `Dy^{-k}` (`k < 0`) or the
/// free term (`k = 0`).
pub fn frame_restricted_coefficients(
    l: &LaplaceOperator,
    m: &NormalizedM,
    alpha: &GaugeParameter,
) -> Result<BTreeMap<i64, DiffPolynomial>> {
    let conj = m.gauge_conjugate(alpha);
    let d = m.order() as i64;
    (-d..=d)
        .map(|k| Ok((k, frame_restrict(conj.coefficient(k), alpha, l)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::integer;

    fn s(name: &str) -> DiffPolynomial {
        DiffPolynomial::symbol(name)
    }

    #[test]
    fn laplace_invariants_at_zero_and_generic() {
        let zero = LaplaceOperator::new(
            DiffPolynomial::zero(),
            DiffPolynomial::zero(),
            DiffPolynomial::zero(),
        );
        let got = laplace_invariants(&zero);
        assert!(got.h.is_zero() && got.k.is_zero() && got.m.is_zero());

        let got = laplace_invariants(&LaplaceOperator::generic());
        let expected_h = &(&(&s("a") * &s("b")) - &s("c")) + &DiffPolynomial::jet("a", 1, 0);
        assert_eq!(got.h, expected_h);
        assert!((&(&got.h - &got.k) - &got.m).is_zero());
    }

    #[test]
    fn frame_sends_alpha_x_to_minus_b() {
        let alpha = GaugeParameter::default();
        let l = LaplaceOperator::generic();
        assert_eq!(
            frame_restrict(&alpha.jet(1, 0), &alpha, &l).unwrap(),
            -s("b")
        );
        let p = &alpha.jet(1, 0).pow(2) + &alpha.jet(2, 0);
        let expected = &s("b").pow(2) - &DiffPolynomial::jet("b", 1, 0);
        assert_eq!(frame_restrict(&p, &alpha, &l).unwrap(), expected);
        assert_eq!(frame_restrict(&s("c"), &alpha, &l).unwrap(), s("c"));
    }

    #[test]
    fn frame_rejects_mixed_and_bare_alpha() {
        let alpha = GaugeParameter::default();
        let l = LaplaceOperator::generic();
        assert_eq!(
            frame_restrict(&alpha.jet(1, 1), &alpha, &l),
            Err(Error::MixedAlphaJet(alpha.jet_var(1, 1)))
        );
        assert_eq!(
            frame_restrict(&alpha.jet(0, 0), &alpha, &l),
            Err(Error::BareAlpha(alpha.jet_var(0, 0)))
        );
    }

    #[test]
    fn top_invariants_for_order_five() {
        let set = invariants_bell(&LaplaceOperator::generic(), &NormalizedM::generic(5));
        assert_eq!(set.len(), 13);
        assert_eq!(set.get(5), Some(&s("m[5]")));
        assert_eq!(set.get(-5), Some(&s("m[-5]")));
        let r4 = &s("m[4]") - &(&s("m[5]") * &s("b")).scale(&integer(5));
        assert_eq!(set.get(4), Some(&r4));
    }

    #[test]
    fn order_one_free_invariant() {
        let set = invariants_bell(&LaplaceOperator::generic(), &NormalizedM::generic(1));
        let expected = &(&s("m[0]") - &(&s("b") * &s("m[1]"))) - &(&s("a") * &s("m[-1]"));
        assert_eq!(set.get(0), Some(&expected));
        assert_eq!(
            invariants_omega(&LaplaceOperator::generic(), &NormalizedM::generic(1)).get(1),
            Some(&s("m[1]"))
        );
    }

    #[test]
    fn omega_iterates() {
        let l = LaplaceOperator::generic();
        let b = s("b");
        let bx = DiffPolynomial::jet("b", 1, 0);
        assert_eq!(omega_power(&l, &b, OmegaMode::XWithB, 0), b);
        assert_eq!(omega_power(&l, &b, OmegaMode::XWithB, 1), &bx - &b.pow(2));
        let expected =
            &(&(-DiffPolynomial::jet("b", 2, 0)) + &(&b * &bx).scale(&integer(3))) - &b.pow(3);
        assert_eq!(-omega_power(&l, &b, OmegaMode::XWithB, 2), expected);
    }

    #[test]
    fn low_p_operators() {
        let l = LaplaceOperator::generic();
        assert_eq!(p_op(&l, PArgument::B, 0), DiffPolynomial::one());
        assert_eq!(p_op(&l, PArgument::B, 1), -s("b"));
        assert_eq!(
            p_op(&l, PArgument::B, 2),
            &s("b").pow(2) - &DiffPolynomial::jet("b", 1, 0)
        );
        assert_eq!(
            p_op(&l, PArgument::A, 2),
            &s("a").pow(2) - &DiffPolynomial::jet("a", 0, 1)
        );
    }

    #[test]
    fn invariance_checks() {
        let alpha = GaugeParameter::default();
        let l = LaplaceOperator::generic();
        let m = NormalizedM::generic(3);
        assert!(verify_gauge_invariance(&l, &m, &alpha));

        let fake =
            |l: &LaplaceOperator, _: &NormalizedM| &l.a.derivative(1, 0) + &l.b.derivative(0, 1);
        assert!(!is_gauge_invariant(&l, &m, &alpha, fake));
        let real = |l: &LaplaceOperator, _: &NormalizedM| laplace_invariants(l).k;
        assert!(is_gauge_invariant(&l, &m, &alpha, real));
    }

    #[test]
    fn differing_entries_are_labelled() {
        let l = LaplaceOperator::generic();
        let a = invariants_bell(&l, &NormalizedM::generic(2));
        let mut b = a.clone();
        b.r.insert(-1, DiffPolynomial::zero());
        assert_eq!(a.differing_entries(&b), ["R[-1]"]);
    }
}
