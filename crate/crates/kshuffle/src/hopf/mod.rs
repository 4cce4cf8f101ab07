//! Hopf structure on the shuffle side: Cartan words and currents, truncated
//! Drinfeld coproducts, exact slope coproducts, the Hopf pairing by residue
//! calculus, Gram matrices with dual bases, truncated universal R-matrices
//! of slope subalgebras, and the primitivity and quasi-triangularity checks.
//!
//! Tensor legs are shuffle elements decorated by commuting Cartan words;
//! every summand is stored in normal order, Cartan word to the left of the
//! shuffle part on the left leg and to the right of it on the right leg, so
//! no commutation rule between Cartan and shuffle factors is ever applied.

mod cartan;
mod checks;
mod coproduct;
mod gram;
mod pairing;
mod tensor;

pub use cartan::{
    cartan_current, CartanContext, CartanCurrent, CartanSeries, CartanWord, CentralKind,
};
pub use checks::{
    bialgebra_check, coassoc_check, primitive_check, primitives_generate,
    quasi_triangularity_check,
};
pub use coproduct::{coproduct_cartan, coproduct_full, coproduct_slope};
pub use gram::{gram_and_dual, rmatrix, PairingTable};
pub use pairing::{
    cartan_pair, cartan_ratio_series, pair, pair_decorated, pair_with, PairingOptions,
};
pub use tensor::{
    CartanPrefactor, TensorElement, TensorElementJson, TensorSummand, Truncation,
};

use crate::exactalg::ExactAlgError;
use crate::quiver::QuiverError;
use crate::shuffle::ShuffleError;

/// Errors from the Hopf layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HopfError {
    #[error("coproduct truncation order {0} is negative")]
    NegativeOrder(i64),
    #[error("slope precondition failed: {test} rejects the element at slope {slope}")]
    SlopeTestFailed { test: &'static str, slope: String },
    #[error("slope dot hdeg {0} is not an integer")]
    NonIntegralSlope(String),
    #[error("Gram matrix at hdeg {0} is singular")]
    SingularGram(String),
    #[error("truncation order {got} is insufficient; the identity needs order {needed}")]
    InsufficientOrder { needed: i64, got: i64 },
    #[error("no word decomposition found within degree window radius {radius}")]
    DecompositionFailed { radius: i64 },
    #[error("expected a {expected:?}-side element")]
    WrongSide { expected: crate::shuffle::Side },
    #[error("Cartan word mixes sides or decorates the wrong leg")]
    CartanSideMismatch,
    #[error("Cartan word pairing with a negative mode exponent needs the antipode")]
    NegativeCartanExponent,
    #[error("tensor coefficient contains leg variables")]
    CoeffHasVariables,
    #[error("mismatched quivers")]
    QuiverMismatch,
    #[error("mismatched prefactors")]
    PrefactorMismatch,
    #[error("{0}")]
    Shuffle(#[from] ShuffleError),
    #[error("{0}")]
    Quiver(#[from] QuiverError),
    #[error("{0}")]
    Alg(#[from] ExactAlgError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
