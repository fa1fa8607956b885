use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::spectral::SpectralFunction;
use super::transition::{displacement_shell, signatures_between, RowOptions, TransitionKernel};
use crate::error::{Error, Result};
use crate::report::{Deviation, Report};
use crate::scalar::{int, Rational, Scalar};
use crate::signature::{dimension, interlaces, Signature};
use crate::symfunc::{lr_coeff, schur_eval, EvaluationPoint};

fn window_bounds(window: &[Signature]) -> (i64, i64) {
    let lo = window.iter().flat_map(|s| s.parts()).copied().min().unwrap_or(0);
    let hi = window.iter().flat_map(|s| s.parts()).copied().max().unwrap_or(0);
    (lo, hi)
}

fn rank_of(window: &[Signature]) -> Result<usize> {
    window
        .first()
        .map(Signature::rank)
        .ok_or_else(|| Error::Argument("empty window".into()))
}

/// Rows at `θ = 1^n` are nonnegative and sum to one (exactly, or within `eps`
/// when the support is infinite).
pub fn check_stochastic(f: &SpectralFunction, window: &[Signature], eps: f64) -> Result<Report> {
    let n = rank_of(window)?;
    let k = TransitionKernel::at_ones(n, f)?;
    let opts = RowOptions::with_eps(eps);
    let devs = window
        .par_iter()
        .map(|lambda| -> Result<Deviation> {
            let mut dev = Deviation::new();
            let row = k.row(lambda, opts)?;
            for (mu, v) in &row.entries {
                dev.require(v.signum() != std::cmp::Ordering::Less, || {
                    format!("negative entry {lambda} -> {mu}: {v}")
                });
            }
            let tol = if row.is_exact() { 0.0 } else { eps };
            dev.record(|| format!("row sum from {lambda}"), &row.total(), &Scalar::one(), tol);
            Ok(dev)
        })
        .collect::<Result<Vec<_>>>()?;
    let dev = devs.into_iter().fold(Deviation::new(), Deviation::merge);
    let (lo, hi) = window_bounds(window);
    Ok(dev
        .into_report("stochastic")
        .with("F", f.to_string())
        .with("n", n)
        .with("window", vec![lo, hi])
        .with("eps", eps))
}

/// `Σ_γ T(θ;F1)(λ,γ) T(θ;F2)(γ,τ) = T(θ;F1F2)(λ,τ)` on `window × window`.
///
/// The intermediate `γ` range is always finite: `γ` lies in the row box of `λ`
/// under `F1` and the column box of `τ` under `F2`, and those can only both be
/// unbounded on the same side if `F1F2` has two-sided infinite support.
pub fn check_semigroup(
    theta: &EvaluationPoint,
    f1: &SpectralFunction,
    f2: &SpectralFunction,
    window: &[Signature],
    eps: f64,
) -> Result<Report> {
    let f12 = f1.times(f2)?;
    let k1 = TransitionKernel::new(theta.clone(), f1)?;
    let k2 = TransitionKernel::new(theta.clone(), f2)?;
    let k12 = TransitionKernel::new(theta.clone(), &f12)?;
    let (s1, s2) = (f1.support(), f2.support());
    let tol = if f1.has_exponential() || f2.has_exponential() { eps } else { 0.0 };
    let devs = window
        .par_iter()
        .map(|lambda| -> Result<Deviation> {
            let mut dev = Deviation::new();
            let mut first: HashMap<Signature, Scalar> = HashMap::new();
            for tau in window {
                let mut lo = Vec::with_capacity(lambda.rank());
                let mut hi = Vec::with_capacity(lambda.rank());
                for (&l, &t) in lambda.parts().iter().zip(tau.parts()) {
                    let a = [s1.hi.map(|h| l - h), s2.lo.map(|x| t + x)];
                    let b = [s1.lo.map(|x| l - x), s2.hi.map(|h| t + h)];
                    let a = a.iter().flatten().max().copied();
                    let b = b.iter().flatten().min().copied();
                    match (a, b) {
                        (Some(a), Some(b)) => {
                            lo.push(a);
                            hi.push(b);
                        }
                        _ => {
                            return Err(Error::Unsupported(
                                "intermediate sum is unbounded".into(),
                            ))
                        }
                    }
                }
                let mut lhs = Scalar::zero();
                if lo.iter().zip(&hi).all(|(a, b)| a <= b) {
                    for gamma in signatures_between(&lo, &hi) {
                        let a = match first.get(&gamma) {
                            Some(a) => a.clone(),
                            None => {
                                let a = k1.entry(lambda, &gamma)?;
                                first.insert(gamma.clone(), a.clone());
                                a
                            }
                        };
                        if a.is_zero() {
                            continue;
                        }
                        lhs = lhs + a * k2.entry(&gamma, tau)?;
                    }
                }
                let rhs = k12.entry(lambda, tau)?;
                dev.record(|| format!("{lambda} -> {tau}"), &lhs, &rhs, tol);
            }
            Ok(dev)
        })
        .collect::<Result<Vec<_>>>()?;
    let dev = devs.into_iter().fold(Deviation::new(), Deviation::merge);
    let (lo, hi) = window_bounds(window);
    Ok(dev
        .into_report("semigroup")
        .with("F1", f1.to_string())
        .with("F2", f2.to_string())
        .with("n", theta.rank())
        .with("theta", theta.to_string())
        .with("window", vec![lo, hi]))
}

/// Both sides of the tensor-product formula for one `(λ, τ)`:
/// `Σ_μ ℙ_n(μ) c_{λμ}^τ s_τ/(s_λ s_μ)` and `T_n(λ, τ)`.
pub fn star_sides(kernel: &TransitionKernel, lambda: &Signature, tau: &Signature) -> Result<(Scalar, Scalar)> {
    let n = kernel.rank();
    let zero = Signature::zero(n);
    let theta = kernel.theta();
    let size = tau.size() - lambda.size();
    let bounds = kernel.support_box(&zero);
    let candidates: Vec<Signature> = match (bounds[0].0, bounds[0].1) {
        (Some(_), Some(_)) => {
            let lo: Vec<i64> = bounds.iter().map(|b| b.0.unwrap()).collect();
            let hi: Vec<i64> = bounds.iter().map(|b| b.1.unwrap()).collect();
            signatures_between(&lo, &hi)
                .into_iter()
                .filter(|m| m.size() == size)
                .collect()
        }
        (Some(_), None) => {
            let base: Vec<i64> = bounds.iter().map(|b| b.0.unwrap()).collect();
            let d = size - base.iter().sum::<i64>();
            if d < 0 {
                Vec::new()
            } else {
                displacement_shell(&base, 1, d)
            }
        }
        (None, Some(_)) => {
            let base: Vec<i64> = bounds.iter().map(|b| b.1.unwrap()).collect();
            let d = base.iter().sum::<i64>() - size;
            if d < 0 {
                Vec::new()
            } else {
                displacement_shell(&base, -1, d)
            }
        }
        (None, None) => unreachable!("two-sided supports are rejected"),
    };
    let s = |x: &Signature| -> Result<Rational> {
        if theta.is_ones() {
            Ok(dimension(x))
        } else {
            schur_eval(x, theta)
        }
    };
    let (sl, st) = (s(lambda)?, s(tau)?);
    let mut lhs = Scalar::zero();
    for mu in candidates {
        let c = lr_coeff(lambda, &mu, tau)?;
        if c == 0 {
            continue;
        }
        let p = kernel.entry(&zero, &mu)?;
        if p.is_zero() {
            continue;
        }
        let w = int(c as i64) * &st / (&sl * s(&mu)?);
        lhs = lhs + p * Scalar::Exact(w);
    }
    Ok((lhs, kernel.entry(lambda, tau)?))
}

/// [`star_sides`] agree for one pair.
pub fn check_star(
    theta: &EvaluationPoint,
    f: &SpectralFunction,
    lambda: &Signature,
    tau: &Signature,
    eps: f64,
) -> Result<Report> {
    check_star_window(theta, f, std::slice::from_ref(lambda), std::slice::from_ref(tau), eps)
}

/// [`star_sides`] agree on every `(λ, τ) ∈ lambdas × taus`.
pub fn check_star_window(
    theta: &EvaluationPoint,
    f: &SpectralFunction,
    lambdas: &[Signature],
    taus: &[Signature],
    eps: f64,
) -> Result<Report> {
    let k = TransitionKernel::new(theta.clone(), f)?;
    let tol = if f.has_exponential() { eps } else { 0.0 };
    let devs = lambdas
        .par_iter()
        .map(|lambda| -> Result<Deviation> {
            let mut dev = Deviation::new();
            for tau in taus {
                let (lhs, rhs) = star_sides(&k, lambda, tau)?;
                dev.record(|| format!("{lambda} -> {tau}"), &lhs, &rhs, tol);
            }
            Ok(dev)
        })
        .collect::<Result<Vec<_>>>()?;
    let dev = devs.into_iter().fold(Deviation::new(), Deviation::merge);
    Ok(dev
        .into_report("star")
        .with("F", f.to_string())
        .with("n", theta.rank())
        .with("theta", theta.to_string()))
}

/// Closed forms for the four α/β families:
/// `param^k s_μ(θ)/(s_λ(θ) ∏F(1/θ_j))` on the family's support, zero elsewhere.
/// `None` for other spectral functions.
pub fn closed_form_entry(
    kernel: &TransitionKernel,
    lambda: &Signature,
    mu: &Signature,
) -> Result<Option<Scalar>> {
    use SpectralFunction::*;
    let diffs: Vec<i64> = mu.parts().iter().zip(lambda.parts()).map(|(m, l)| m - l).collect();
    let total: i64 = diffs.iter().sum();
    let (param, k) = match kernel.spectral() {
        BetaMinus(p) => (p, diffs.iter().all(|d| *d == 0 || *d == 1).then_some(total)),
        BetaPlus(p) => (p, diffs.iter().all(|d| *d == 0 || *d == -1).then_some(-total)),
        AlphaMinus(q) => (q, interlaces(lambda, mu)?.then_some(total)),
        AlphaPlus(q) => (q, interlaces(mu, lambda)?.then_some(-total)),
        _ => return Ok(None),
    };
    let Some(k) = k else {
        return Ok(Some(Scalar::zero()));
    };
    let theta = kernel.theta();
    let ratio = if theta.is_ones() {
        dimension(mu) / dimension(lambda)
    } else {
        schur_eval(mu, theta)? / schur_eval(lambda, theta)?
    };
    let value = if k == 0 { ratio } else { param.pow(k as i32) * ratio };
    Ok(Some(Scalar::Exact(value) * kernel.inverse_normalizer()))
}

/// Determinantal entries equal the closed forms on `window × window`.
pub fn check_closed_forms(theta: &EvaluationPoint, f: &SpectralFunction, window: &[Signature]) -> Result<Report> {
    let k = TransitionKernel::new(theta.clone(), f)?;
    if closed_form_entry(&k, &window[0], &window[0])?.is_none() {
        return Err(Error::Argument(format!(
            "closed forms exist only for the alpha and beta families, not {f}"
        )));
    }
    let devs = window
        .par_iter()
        .map(|lambda| -> Result<Deviation> {
            let mut dev = Deviation::new();
            for mu in window {
                let det = k.entry(lambda, mu)?;
                let closed = closed_form_entry(&k, lambda, mu)?.unwrap();
                dev.record(|| format!("{lambda} -> {mu}"), &det, &closed, 0.0);
            }
            Ok(dev)
        })
        .collect::<Result<Vec<_>>>()?;
    let dev = devs.into_iter().fold(Deviation::new(), Deviation::merge);
    let (lo, hi) = window_bounds(window);
    Ok(dev
        .into_report("lemma212")
        .with("F", f.to_string())
        .with("n", theta.rank())
        .with("theta", theta.to_string())
        .with("window", vec![lo, hi]))
}

/// Float transition rows at `θ = 1`, cached by source.
struct FloatRows<'a> {
    kernel: &'a TransitionKernel,
    rows: HashMap<Signature, Vec<(Signature, f64)>>,
}

impl FloatRows<'_> {
    fn row(&mut self, lambda: &Signature) -> Result<&[(Signature, f64)]> {
        if !self.rows.contains_key(lambda) {
            let r = self.kernel.row(lambda, RowOptions::default())?;
            let v = r.entries.iter().map(|(m, x)| (m.clone(), x.to_f64())).collect();
            self.rows.insert(lambda.clone(), v);
        }
        Ok(&self.rows[lambda])
    }
}

/// `max_{λ,τ ∈ window} |T(1;β(t/k))^k(λ,τ) − T(1;γ(t))(λ,τ)|` for each `k`,
/// with `β−` paired to `γ−` (and `+` to `+`). Returns the distances in order.
pub fn gamma_limit_distances(gamma: &SpectralFunction, window: &[Signature], ks: &[u64]) -> Result<Vec<f64>> {
    let n = rank_of(window)?;
    let (t, minus) = match gamma {
        SpectralFunction::GammaMinus(t) => (t.clone(), true),
        SpectralFunction::GammaPlus(t) => (t.clone(), false),
        other => return Err(Error::Argument(format!("{other} is not an exponential family"))),
    };
    let gk = TransitionKernel::at_ones(n, gamma)?;
    let exact: Vec<Vec<f64>> = window
        .iter()
        .map(|l| window.iter().map(|m| gk.entry(l, m).map(|v| v.to_f64())).collect())
        .collect::<Result<_>>()?;
    ks.par_iter()
        .map(|&k| {
            let p = &t / int(k as i64);
            let beta = if minus {
                SpectralFunction::beta_minus(p)?
            } else {
                SpectralFunction::beta_plus(p)?
            };
            let bk = TransitionKernel::at_ones(n, &beta)?;
            let mut rows = FloatRows {
                kernel: &bk,
                rows: HashMap::new(),
            };
            let mut worst: f64 = 0.0;
            for (i, lambda) in window.iter().enumerate() {
                let mut dist: HashMap<Signature, f64> = HashMap::from([(lambda.clone(), 1.0)]);
                for _ in 0..k {
                    let mut next: HashMap<Signature, f64> = HashMap::with_capacity(dist.len() * 2);
                    for (state, mass) in &dist {
                        for (mu, w) in rows.row(state)? {
                            *next.entry(mu.clone()).or_default() += mass * w;
                        }
                    }
                    next.retain(|_, m| *m > 1e-16);
                    dist = next;
                }
                for (j, tau) in window.iter().enumerate() {
                    let got = dist.get(tau).copied().unwrap_or(0.0);
                    worst = worst.max((got - exact[i][j]).abs());
                }
            }
            Ok(worst)
        })
        .collect()
}

/// The `k`-step Bernoulli kernels converge to the exponential one: distances
/// decrease along `ks` and the last is at most `tol`.
pub fn check_gamma_limit(gamma: &SpectralFunction, window: &[Signature], ks: &[u64], tol: f64) -> Result<Report> {
    let d = gamma_limit_distances(gamma, window, ks)?;
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    let last = d.last().copied().unwrap_or(f64::INFINITY);
    let (lo, hi) = window_bounds(window);
    Ok(Report::new("gamma-limit", decreasing && last <= tol)
        .with("F", gamma.to_string())
        .with("n", rank_of(window)?)
        .with("window", vec![lo, hi])
        .with("k", ks.to_vec())
        .with("distances", d.clone())
        .with("decreasing", decreasing)
        .with("max_abs_error", format!("{last:e}")))
}

/// Sum of a row at `θ = 1` as an exact rational, when the row is exact.
pub fn exact_row_sum(f: &SpectralFunction, lambda: &Signature) -> Result<Option<Rational>> {
    let k = TransitionKernel::at_ones(lambda.rank(), f)?;
    let row = k.row(lambda, RowOptions::default())?;
    if !row.is_exact() {
        return Ok(None);
    }
    Ok(Some(row.entries.iter().fold(Rational::zero(), |acc, (_, v)| {
        acc + v.as_rational().unwrap()
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::window;

    fn sf(s: &str) -> SpectralFunction {
        s.parse().unwrap()
    }

    #[test]
    fn stochastic_beta_and_alpha() {
        let w = window(2, 2);
        assert!(check_stochastic(&sf("beta-:1/2"), &w, 1e-9).unwrap().pass);
        let r = check_stochastic(&sf("alpha-:1/2"), &w, 1e-9).unwrap();
        assert!(r.pass, "{r}");
        let r = check_stochastic(&sf("gamma+:1/2"), &w, 1e-6).unwrap();
        assert!(r.pass, "{r}");
    }

    #[test]
    fn semigroup_small() {
        let w = window(2, 2);
        let one = EvaluationPoint::ones(2);
        let r = check_semigroup(&one, &sf("beta+:1/2"), &sf("beta-:1/3"), &w, 0.0).unwrap();
        assert!(r.pass, "{r}");
        let r = check_semigroup(&one, &SpectralFunction::identity(), &sf("beta-:1/3"), &w, 0.0).unwrap();
        assert!(r.pass, "{r}");
        let r = check_semigroup(&one, &sf("alpha-:1/3"), &sf("beta-:1/2"), &w, 1e-9).unwrap();
        assert!(r.pass, "{r}");
        let theta: EvaluationPoint = "1,1/2".parse().unwrap();
        let r = check_semigroup(&theta, &sf("beta+:1/2"), &sf("beta+:1/2"), &w, 0.0).unwrap();
        assert!(r.pass, "{r}");
    }

    #[test]
    fn star_examples() {
        let theta: EvaluationPoint = "1,1/2".parse().unwrap();
        let l: Signature = "1,0".parse().unwrap();
        let t: Signature = "2,1".parse().unwrap();
        assert!(check_star(&theta, &sf("beta-:1/2"), &l, &t, 0.0).unwrap().pass);
        let w = window(2, 2);
        let r = check_star_window(&theta, &sf("prod(beta-:1/2,beta-:1/3)"), &w, &w, 0.0).unwrap();
        assert!(r.pass, "{r}");
        let r = check_star_window(&EvaluationPoint::ones(2), &sf("alpha-:1/2"), &w, &w, 1e-9).unwrap();
        assert!(r.pass, "{r}");
    }

    #[test]
    fn closed_forms_small() {
        let w = window(2, 2);
        for f in ["beta-:1/2", "beta+:1/3", "alpha-:1/2", "alpha+:1/3"] {
            let r = check_closed_forms(&EvaluationPoint::ones(2), &sf(f), &w).unwrap();
            assert!(r.pass, "{r}");
            let r = check_closed_forms(&"1,3/4".parse().unwrap(), &sf(f), &w).unwrap();
            assert!(r.pass, "{r}");
        }
        assert!(check_closed_forms(&EvaluationPoint::ones(2), &sf("gamma-:1"), &w).is_err());
    }

    #[test]
    fn exact_sums() {
        let l: Signature = "2,0,-1".parse().unwrap();
        assert_eq!(exact_row_sum(&sf("beta+:1/3"), &l).unwrap(), Some(int(1)));
        assert_eq!(exact_row_sum(&sf("alpha+:1/3"), &l).unwrap(), None);
    }
}
