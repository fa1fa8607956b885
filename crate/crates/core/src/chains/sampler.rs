use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{in_support, Trajectory};
use crate::error::{Error, Result};
use crate::kernels::{RowOptions, SpectralFunction, TransitionKernel};
use crate::signature::Signature;

const FIRST_EPS: f64 = 1e-6;
const FINAL_EPS: f64 = 1e-15;

/// Inverse-CDF table for one row, stored for `λ` shifted so that `λ_n = 0`.
///
/// States are ordered by shell `||μ| − |λ||` first, so extending a truncated
/// row only appends intervals and earlier draws keep their meaning.
#[derive(Debug)]
struct CdfRow {
    states: Vec<Signature>,
    cdf: Vec<f64>,
    complete: bool,
    eps: f64,
}

impl CdfRow {
    fn draw(&self, u: f64) -> Option<&Signature> {
        let i = self.cdf.partition_point(|&c| c <= u);
        match self.states.get(i) {
            Some(s) => Some(s),
            None if self.complete || self.eps <= FINAL_EPS => self.states.last(),
            None => None,
        }
    }
}

/// Draws from `T_n(1^n;F)` rows. Rows are cached per shape; `T(λ+c, μ+c) = T(λ, μ)`
/// at `θ = 1`, so only `λ − λ_n` matters.
#[derive(Debug)]
pub struct Sampler {
    kernel: TransitionKernel,
    cache: RwLock<HashMap<Signature, Arc<CdfRow>>>,
}

impl Sampler {
    pub fn new(n: usize, f: &SpectralFunction) -> Result<Self> {
        Ok(Sampler {
            kernel: TransitionKernel::at_ones(n, f)?,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn kernel(&self) -> &TransitionKernel {
        &self.kernel
    }

    fn build(&self, base: &Signature, eps: f64) -> Result<CdfRow> {
        let row = self.kernel.row(base, RowOptions::with_eps(eps))?;
        let complete = row.tail() == 0.0 && row.exactness == crate::kernels::Exactness::Exact;
        let mut entries = row.entries;
        entries.sort_by_key(|(mu, _)| ((mu.size() - base.size()).abs(), mu.clone()));
        let mut acc = 0.0;
        let mut states = Vec::with_capacity(entries.len());
        let mut cdf = Vec::with_capacity(entries.len());
        for (mu, v) in entries {
            let p = v.to_f64();
            if p < 0.0 {
                return Err(Error::Domain(format!("negative transition probability {v} from {base}")));
            }
            acc += p;
            states.push(mu);
            cdf.push(acc);
        }
        Ok(CdfRow {
            states,
            cdf,
            complete,
            eps,
        })
    }

    fn row_for(&self, base: &Signature, min_eps: f64) -> Result<Arc<CdfRow>> {
        if let Some(r) = self.cache.read().unwrap().get(base) {
            if r.complete || r.eps <= min_eps {
                return Ok(r.clone());
            }
        }
        let r = Arc::new(self.build(base, min_eps)?);
        self.cache.write().unwrap().insert(base.clone(), r.clone());
        Ok(r)
    }

    /// One draw `μ ~ T_n(1;F)(λ, ·)`.
    pub fn step<R: Rng + ?Sized>(&self, lambda: &Signature, rng: &mut R) -> Result<Signature> {
        if lambda.rank() != self.kernel.rank() {
            return Err(Error::Argument(format!(
                "{lambda} does not have rank {}",
                self.kernel.rank()
            )));
        }
        let c = lambda.last();
        let base = lambda.shift(-c);
        let u: f64 = rng.random();
        let mut eps = FIRST_EPS;
        loop {
            let row = self.row_for(&base, eps)?;
            // a draw past the listed mass extends the enumeration
            if let Some(mu) = row.draw(u) {
                return Ok(mu.shift(c));
            }
            eps = (eps * 1e-3).max(FINAL_EPS);
        }
    }
}

/// One draw with a fresh sampler; prefer [`Sampler`] for repeated draws.
pub fn sample_step<R: Rng + ?Sized>(lambda: &Signature, f: &SpectralFunction, rng: &mut R) -> Result<Signature> {
    Sampler::new(lambda.rank(), f)?.step(lambda, rng)
}

/// ChaCha20 stream 0 seeded with `seed`.
pub fn simulate(lambda0: &Signature, f: &SpectralFunction, steps: u64, seed: u64) -> Result<Trajectory> {
    simulate_stream(lambda0, f, steps, seed, 0)
}

/// Independent trajectories for one seed come from distinct `stream` values.
pub fn simulate_stream(
    lambda0: &Signature,
    f: &SpectralFunction,
    steps: u64,
    seed: u64,
    stream: u64,
) -> Result<Trajectory> {
    let sampler = Sampler::new(lambda0.rank(), f)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut states = Vec::with_capacity(steps as usize + 1);
    states.push(lambda0.clone());
    for _ in 0..steps {
        let cur = states.last().unwrap();
        let next = sampler.step(cur, &mut rng)?;
        if cfg!(debug_assertions) && !in_support(f, cur, &next)? {
            return Err(Error::Domain(format!("sampled {cur} -> {next} outside the support of {f}")));
        }
        states.push(next);
    }
    Ok(Trajectory {
        states,
        seed,
        spectral: f.clone(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    #[test]
    fn identity_never_moves() {
        let t = simulate(&sig("2,0,-1"), &SpectralFunction::identity(), 20, 1).unwrap();
        assert!(t.states.iter().all(|s| *s == sig("2,0,-1")));
    }

    #[test]
    fn zero_steps() {
        let t = simulate(&sig("1,0"), &"beta-:1/2".parse().unwrap(), 0, 9).unwrap();
        assert_eq!(t.states, vec![sig("1,0")]);
    }

    #[test]
    fn deterministic_and_supported() {
        for f in ["beta-:1/2", "beta+:1/2", "alpha-:1/2", "alpha+:1/3", "gamma-:1/2", "gamma+:1/2"] {
            let f: SpectralFunction = f.parse().unwrap();
            let a = simulate(&sig("1,0,0"), &f, 15, 7).unwrap();
            let b = simulate(&sig("1,0,0"), &f, 15, 7).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.to_csv(), b.to_csv());
            assert!(a.validate().unwrap(), "{f}");
        }
    }

    #[test]
    fn streams_differ() {
        let f: SpectralFunction = "alpha-:1/2".parse().unwrap();
        let a = simulate_stream(&sig("0,0"), &f, 30, 7, 0).unwrap();
        let b = simulate_stream(&sig("0,0"), &f, 30, 7, 1).unwrap();
        assert_ne!(a.states, b.states);
    }
}
