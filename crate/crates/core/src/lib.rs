//! Exact semigroup expansions of Lie algebras, the H-condition reduction on
//! even cyclic groups, invariant tensors and transgression forms.

pub mod error;
pub mod linalg;
pub mod scalar;
pub mod semigroup;
pub mod lie_algebra;
pub mod expansion;
pub mod invariant_tensor;
pub mod graded_forms;
pub mod fixtures;
pub mod pipeline;

pub use error::{Error, Result};
pub use graded_forms::{FormSymbol, LieValuedForm, ScalarForm};
pub use invariant_tensor::InvariantTensor;
pub use lie_algebra::{ExpandedLabel, KillingProfile, Label, LieAlgebra};
pub use scalar::{QSqrt2, Rational, ScalarExpr};
pub use semigroup::{SelectorQuery, Semigroup};
