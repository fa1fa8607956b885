use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde_json::json;

use super::particle_positions;
use super::sampler::Sampler;
use crate::error::{arg, Result};
use crate::kernels::{RowOptions, SpectralFunction, TransitionKernel};
use crate::quantum::{kappa_of, pn_entry, ClassFunction, Truncation};
use crate::report::{Deviation, Report};
use crate::scalar::{int, Scalar};
use crate::signature::{dimension, weyl_act, Permutation, Signature};

/// Karlin-McGregor law of `n` independent walks with increment law `P_n(κ)`,
/// taken from particle configuration `x(λ)` to `x(μ)`.
pub fn independent_walk_law(kappa: &ClassFunction, lambda: &Signature, mu: &Signature) -> Result<Scalar> {
    let x = particle_positions(lambda).as_weight();
    let y = particle_positions(mu).as_weight();
    let mut w = Scalar::zero();
    for sigma in Permutation::all(lambda.rank()) {
        let v = pn_entry(kappa, &x, &weyl_act(&sigma, &y)?)?;
        if !v.is_zero() {
            w = w + v * Scalar::Exact(int(sigma.sign()));
        }
    }
    Ok(w)
}

/// `T_n(1;F)(λ,μ)` and `(dim μ/dim λ) · W(λ → μ)`.
pub fn doob_sides(
    kernel: &TransitionKernel,
    walk: &ClassFunction,
    lambda: &Signature,
    mu: &Signature,
) -> Result<(Scalar, Scalar)> {
    let t = kernel.entry(lambda, mu)?;
    let w = independent_walk_law(walk, lambda, mu)?;
    let ratio = Scalar::Exact(dimension(mu) / dimension(lambda));
    Ok((t, w * ratio))
}

/// The `h = dim` transform of independent walks reproduces `T_n(1;F)` on
/// `window × window`. The walk increments come from `κ_{F∘inv}`.
pub fn check_doob(f: &SpectralFunction, n: usize, window: &[Signature]) -> Result<Report> {
    if window.iter().any(|s| s.rank() != n) {
        return arg(format!("window signatures must have rank {n}"));
    }
    let kernel = TransitionKernel::at_ones(n, f)?;
    let sizes = window.iter().map(Signature::size);
    let span = (sizes.clone().max().unwrap_or(0) - sizes.min().unwrap_or(0)) as u64;
    let walk = kappa_of(&f.inverted(), n, Truncation::Size(span))?;
    let relative = f.has_exponential();
    let devs = window
        .par_iter()
        .map(|lambda| -> Result<Deviation> {
            let mut dev = Deviation::new();
            for mu in window {
                let (t, h) = doob_sides(&kernel, &walk, lambda, mu)?;
                let tol = if relative { 1e-9 * t.abs().to_f64() } else { 0.0 };
                dev.record(|| format!("Doob at ({lambda},{mu}): {t} vs {h}"), &t, &h, tol);
            }
            Ok(dev)
        })
        .collect::<Result<Vec<_>>>()?;
    let dev = devs.into_iter().fold(Deviation::new(), Deviation::merge);
    Ok(dev
        .into_report("doob")
        .with("F", f.to_string())
        .with("n", n)
        .with("tolerance", if relative { "1e-9 relative" } else { "exact" }))
}

/// Total-variation distance between `samples` seeded draws from `λ0` and the
/// exact row.
pub fn empirical_check(
    lambda0: &Signature,
    f: &SpectralFunction,
    samples: u64,
    seed: u64,
    delta: f64,
) -> Result<Report> {
    if samples == 0 {
        return arg("samples must be positive");
    }
    let sampler = Sampler::new(lambda0.rank(), f)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<Signature, u64> = BTreeMap::new();
    for _ in 0..samples {
        *counts.entry(sampler.step(lambda0, &mut rng)?).or_default() += 1;
    }
    let row = sampler.kernel().row(lambda0, RowOptions::with_eps(1e-12))?;
    let nf = samples as f64;
    let mut tv = 0.0;
    let mut listed = Vec::new();
    for (mu, p) in &row.entries {
        let c = counts.get(mu).copied().unwrap_or(0);
        tv += (c as f64 / nf - p.to_f64()).abs();
        if c > 0 {
            listed.push(json!({"mu": mu, "count": c, "exact": p.to_string()}));
        }
    }
    for (mu, &c) in &counts {
        if row.get(mu).is_zero() {
            tv += c as f64 / nf;
            listed.push(json!({"mu": mu, "count": c, "exact": "0"}));
        }
    }
    tv = (tv + row.tail()) / 2.0;
    let mut r = Report::new("empirical", tv <= delta);
    r.set("F", f.to_string())
        .set("n", lambda0.rank())
        .set("lambda", serde_json::to_value(lambda0).unwrap())
        .set("samples", samples)
        .set("seed", seed)
        .set("tv", tv)
        .set("delta", delta)
        .set("counts", listed);
    Ok(r)
}
