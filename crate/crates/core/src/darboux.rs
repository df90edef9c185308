//! Verification of Darboux intertwining relations `N ∘ L = L1 ∘ M`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::operators::{GaugeParameter, LinearDiffOperator};
use crate::ring::DiffPolynomial;

/// Operators `(N, L, L1, M)` of a candidate Darboux transformation. `L` and
/// `L1` both have principal symbol `Dx Dy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DarbouxQuadruple {
    pub n: LinearDiffOperator,
    pub l: LinearDiffOperator,
    pub l1: LinearDiffOperator,
    pub m: LinearDiffOperator,
}

fn has_laplace_symbol(op: &LinearDiffOperator) -> bool {
    op.principal_symbol()
        .is_ok_and(|s| s == BTreeMap::from([((1, 1), DiffPolynomial::one())]))
}

impl DarbouxQuadruple {
    pub fn new(
        n: LinearDiffOperator,
        l: LinearDiffOperator,
        l1: LinearDiffOperator,
        m: LinearDiffOperator,
    ) -> Result<Self> {
        for (name, op) in [("L", &l), ("L1", &l1)] {
            if !has_laplace_symbol(op) {
                return Err(Error::NotLaplace(format!(
                    "{name} must have principal symbol Dx*Dy"
                )));
            }
        }
        Ok(DarbouxQuadruple { n, l, l1, m })
    }

    /// `N ∘ L - L1 ∘ M`.
    pub fn residual(&self) -> LinearDiffOperator {
        &self.n.compose(&self.l) - &self.l1.compose(&self.m)
    }

    pub fn is_darboux(&self) -> bool {
        self.residual().is_zero()
    }

    /// Order of the transformation, that of `M`.
    pub fn order(&self) -> Option<u32> {
        self.m.order()
    }

    /// Every member conjugated by `exp(α)`.
    pub fn gauge_conjugate(&self, alpha: &GaugeParameter) -> Self {
        DarbouxQuadruple {
            n: self.n.gauge_conjugate(alpha),
            l: self.l.gauge_conjugate(alpha),
            l1: self.l1.gauge_conjugate(alpha),
            m: self.m.gauge_conjugate(alpha),
        }
    }
}

pub fn darboux_residual(q: &DarbouxQuadruple) -> LinearDiffOperator {
    q.residual()
}

/// `(N L - L1 M)^g == N^g L^g - L1^g M^g`.
pub fn verify_darboux_gauge_covariance(q: &DarbouxQuadruple, alpha: &GaugeParameter) -> bool {
    q.residual().gauge_conjugate(alpha) == q.gauge_conjugate(alpha).residual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::LaplaceOperator;

    fn s(name: &str) -> DiffPolynomial {
        DiffPolynomial::symbol(name)
    }

    fn laplace_with_free_term(c: DiffPolynomial) -> LinearDiffOperator {
        LaplaceOperator::new(s("a"), s("b"), c).to_operator()
    }

    fn factorization_instance(l1_free: DiffPolynomial) -> DarbouxQuadruple {
        let ab = &s("a") * &s("b");
        let dy_a = &LinearDiffOperator::dy() + &LinearDiffOperator::multiplication(s("a"));
        let l = laplace_with_free_term(&ab + &DiffPolynomial::jet("a", 1, 0));
        let l1 = laplace_with_free_term(l1_free);
        DarbouxQuadruple::new(dy_a.clone(), l, l1, dy_a).unwrap()
    }

    #[test]
    fn trivial_quadruple() {
        let l = LaplaceOperator::generic().to_operator();
        let q = DarbouxQuadruple::new(l.clone(), l.clone(), l.clone(), l).unwrap();
        assert!(q.residual().is_zero());
        assert_eq!(q.order(), Some(2));
    }

    #[test]
    fn factorization_is_darboux() {
        let free = &(&s("a") * &s("b")) + &DiffPolynomial::jet("b", 0, 1);
        assert!(factorization_instance(free).is_darboux());
    }

    #[test]
    fn perturbed_free_term_leaves_b_y() {
        let q = factorization_instance(&s("a") * &s("b"));
        let expected = LinearDiffOperator::multiplication(DiffPolynomial::jet("b", 0, 1))
            .compose(&(&LinearDiffOperator::dy() + &LinearDiffOperator::multiplication(s("a"))));
        assert_eq!(q.residual(), expected);
        assert!(!q.is_darboux());
    }

    #[test]
    fn covariance_holds_for_valid_and_invalid() {
        let alpha = GaugeParameter::default();
        let valid = factorization_instance(&(&s("a") * &s("b")) + &DiffPolynomial::jet("b", 0, 1));
        assert!(verify_darboux_gauge_covariance(&valid, &alpha));
        assert!(valid.gauge_conjugate(&alpha).is_darboux());
        let invalid = factorization_instance(&s("a") * &s("b"));
        assert!(verify_darboux_gauge_covariance(&invalid, &alpha));
    }

    #[test]
    fn rejects_wrong_symbol() {
        let l = LaplaceOperator::generic().to_operator();
        let err = DarbouxQuadruple::new(l.clone(), LinearDiffOperator::dx(), l.clone(), l);
        assert!(matches!(err, Err(Error::NotLaplace(_))));
    }
}
