use thiserror::Error;

use crate::ring::JetVariable;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("jet variable {0} is not bound at the evaluation point")]
    UnboundJet(JetVariable),

    #[error("the zero operator has no principal symbol")]
    ZeroOperator,

    #[error("partial Bell polynomial B[{n},{k}] needs k <= n")]
    BadIndex { n: usize, k: usize },

    #[error("Bell polynomial needs {needed} arguments, got {got}")]
    BellArity { needed: usize, got: usize },

    #[error("mixed gauge jet {0} has no frame binding")]
    MixedAlphaJet(JetVariable),

    #[error("undifferentiated gauge jet {0} has no frame binding")]
    BareAlpha(JetVariable),

    #[error("operator has a mixed derivative term Dx^{dx}*Dy^{dy}")]
    MixedTerm { dx: u32, dy: u32 },

    #[error("operator of order {found} does not fit the requested order {requested}")]
    OrderTooSmall { requested: u32, found: u32 },

    #[error("operator is not of the form Dx*Dy + a*Dx + b*Dy + c: {0}")]
    NotLaplace(String),

    #[error("expected a differential polynomial, found a derivative term")]
    NotAPolynomial,

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("negative power at {line}:{column}")]
    NegativePower { line: usize, column: usize },
}
