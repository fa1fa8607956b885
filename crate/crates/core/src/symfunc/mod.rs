//! Symmetric functions restricted to what the kernels need: `h_k`, `e_k`, Schur
//! evaluation, weight multiplicities and Littlewood-Richardson coefficients.

mod eval;
mod lr;
mod weights;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{arg, Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational};

pub use eval::{e_eval, h_eval, schur_bialternant, schur_eval, theta_product};
pub use lr::{
    lr_coeff, lr_coeff_oracle, lr_coeff_oracle_with, lr_product, lr_product_oracle, lr_tableaux, pieri_column,
    pieri_row, triple_coeff, LRTableau,
};
pub(crate) use weights::expand_unchecked;
pub use weights::{
    weight_expansion, weight_expansion_with, weight_multiplicity, WeightExpansion,
};

/// A specialization `θ = (θ_1, …, θ_n)` of nonzero rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvaluationPoint(Vec<Rational>);

impl EvaluationPoint {
    pub fn new(theta: Vec<Rational>) -> Result<Self> {
        if theta.is_empty() {
            return arg("evaluation point needs at least one coordinate");
        }
        if theta.iter().any(Zero::is_zero) {
            return arg("evaluation point coordinates must be nonzero");
        }
        Ok(EvaluationPoint(theta))
    }

    /// `θ = 1^n`.
    pub fn ones(n: usize) -> Self {
        EvaluationPoint(vec![Rational::one(); n])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_ones(&self) -> bool {
        self.0.iter().all(One::is_one)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }

    pub fn inverse(&self) -> EvaluationPoint {
        EvaluationPoint(self.0.iter().map(|t| t.recip()).collect())
    }

    pub fn has_repeats(&self) -> bool {
        (0..self.0.len()).any(|i| (i + 1..self.0.len()).any(|j| self.0[i] == self.0[j]))
    }
}

impl FromStr for EvaluationPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let theta = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        EvaluationPoint::new(theta)
    }
}

impl fmt::Display for EvaluationPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        f.write_str(&parts.join(","))
    }
}

/// Bounds on exhaustive enumerations (weight expansions, monomial oracles).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_rank: usize,
    /// Boxes of the signature after translating it to a partition.
    pub max_boxes: i64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_rank: 4,
            max_boxes: 12,
        }
    }
}

impl EnumerationLimits {
    /// Bounds for the monomial-basis Littlewood-Richardson oracle.
    pub const ORACLE: EnumerationLimits = EnumerationLimits {
        max_rank: 3,
        max_boxes: 8,
    };
}
