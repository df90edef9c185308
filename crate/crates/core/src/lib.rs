//! Exact gauge invariants of pairs `(L, M)` with
//! `L = Dx Dy + a Dx + b Dy + c` and `M` a mixed-derivative-free operator of
//! any order, plus verification of Darboux relations `N L = L1 M`.
//!
//! Everything is computed over exact rationals in a ring of jet variables,
//! so identities are decided by structural equality of canonical forms.
//!
//! ```
//! use darboux_invariants::{invariants_bell, LaplaceOperator, NormalizedM};
//!
//! let set = invariants_bell(&LaplaceOperator::generic(), &NormalizedM::generic(5));
//! assert_eq!(set.get(4).unwrap().to_string(), "m[4] - 5*m[5]*b");
//! ```

pub mod bell;
pub mod cli;
pub mod combinat;
pub mod darboux;
mod error;
pub mod invariants;
pub mod operators;
pub mod ring;
pub mod selftest;
pub mod textio;

pub use bell::{bell_complete, bell_complete_det, bell_partial};
pub use darboux::{darboux_residual, verify_darboux_gauge_covariance, DarbouxQuadruple};
pub use error::{Error, Result};
pub use invariants::{
    frame_restrict, invariants_bell, invariants_omega, laplace_invariants, omega_power, p_op,
    verify_gauge_invariance, FrameSubstitution, InvariantSet, LaplaceInvariants, OmegaMode,
    PArgument,
};
pub use operators::{
    gauge_action_laplace, gauge_conjugate, gauge_conjugate_m, op_apply, op_compose,
    principal_symbol, GaugeParameter, LaplaceOperator, LinearDiffOperator, NormalizedM,
};
pub use ring::{DiffPolynomial, Dir, JetVariable, Monomial, Rational, Symbol};
pub use textio::{
    format_operator, format_polynomial, parse_operator, parse_polynomial, OperatorExpr,
};
