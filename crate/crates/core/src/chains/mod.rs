//! Monte Carlo for the `θ = 1` chains and the particle-system view of them.

mod checks;
mod sampler;

pub use checks::{check_doob, doob_sides, empirical_check, independent_walk_law};
pub use sampler::{sample_step, simulate, simulate_stream, Sampler};

use serde_json::{json, Value};

use crate::error::Result;
use crate::kernels::{SpectralFunction, TransitionKernel};
use crate::signature::{interlaces, Signature, Weight};

/// Particle coordinates `x_i = λ_i − i` (1-based `i`), strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParticleConfig {
    pub positions: Vec<i64>,
}

impl ParticleConfig {
    pub fn as_weight(&self) -> Weight {
        Weight(self.positions.clone())
    }

    /// Inverse of [`particle_positions`].
    pub fn to_signature(&self) -> Result<Signature> {
        Signature::new(
            self.positions
                .iter()
                .enumerate()
                .map(|(i, x)| x + i as i64 + 1)
                .collect(),
        )
    }
}

pub fn particle_positions(lambda: &Signature) -> ParticleConfig {
    ParticleConfig {
        positions: lambda
            .parts()
            .iter()
            .enumerate()
            .map(|(i, l)| l - i as i64 - 1)
            .collect(),
    }
}

/// Whether `λ → μ` is an allowed one-step move under `T_n(1;F)`.
///
/// Named families use their combinatorial description; anything else falls
/// back to the kernel entry being nonzero.
pub fn in_support(f: &SpectralFunction, lambda: &Signature, mu: &Signature) -> Result<bool> {
    use SpectralFunction::*;
    if lambda.rank() != mu.rank() {
        return Ok(false);
    }
    let d: Vec<i64> = mu.parts().iter().zip(lambda.parts()).map(|(m, l)| m - l).collect();
    Ok(match f {
        BetaMinus(_) => d.iter().all(|&x| x == 0 || x == 1),
        BetaPlus(_) => d.iter().all(|&x| x == 0 || x == -1),
        AlphaMinus(_) => interlaces(lambda, mu)?,
        AlphaPlus(_) => interlaces(mu, lambda)?,
        GammaMinus(_) => d.iter().all(|&x| x >= 0),
        GammaPlus(_) => d.iter().all(|&x| x <= 0),
        _ => !TransitionKernel::at_ones(lambda.rank(), f)?.entry(lambda, mu)?.is_zero(),
    })
}

/// A simulated path `λ^0, λ^1, …, λ^steps`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub states: Vec<Signature>,
    pub seed: u64,
    pub spectral: SpectralFunction,
    pub steps: u64,
}

impl Trajectory {
    pub fn last(&self) -> &Signature {
        self.states.last().expect("a trajectory holds its initial state")
    }

    /// Checks every consecutive pair against [`in_support`].
    pub fn validate(&self) -> Result<bool> {
        for w in self.states.windows(2) {
            if !in_support(&self.spectral, &w[0], &w[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `step,i,position`, one line per step and particle.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,i,position\n");
        for (step, s) in self.states.iter().enumerate() {
            for (i, x) in particle_positions(s).positions.iter().enumerate() {
                out.push_str(&format!("{step},{},{x}\n", i + 1));
            }
        }
        out
    }

    pub fn summary_json(&self) -> Value {
        json!({
            "F": self.spectral.to_string(),
            "n": self.last().rank(),
            "steps": self.steps,
            "seed": self.seed,
            "final": self.last(),
        })
    }
}
