pub mod chains;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod quantum;
pub mod report;
pub mod scalar;
pub mod signature;
pub mod suite;
pub mod symfunc;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
pub use signature::{Permutation, Signature, Weight};
