use std::collections::BTreeMap;

use rayon::prelude::*;

use super::class_function::{kappa_of, ClassFunction, Truncation};
use crate::error::{arg, Error, Result};
use crate::kernels::{SpectralFunction, TransitionKernel};
use crate::report::{Deviation, Report};
use crate::scalar::{int, Scalar};
use crate::signature::{dimension, Signature};
use crate::symfunc::{lr_coeff, lr_product};

fn same_rank(kappa: &ClassFunction, sigs: &[&Signature]) -> Result<()> {
    match sigs.iter().find(|s| s.rank() != kappa.rank()) {
        Some(s) => arg(format!("{s} does not have rank {}", kappa.rank())),
        None => Ok(()),
    }
}

fn dim_ratio(mu: &Signature, lambda: &Signature) -> Scalar {
    Scalar::Exact(dimension(mu) / dimension(lambda))
}

/// `Q_n(κ)(λ,μ) = (dim μ/dim λ) Σ_β κ̂(β) c_{λβ}^μ`.
pub fn qn_entry(kappa: &ClassFunction, lambda: &Signature, mu: &Signature) -> Result<Scalar> {
    same_rank(kappa, &[lambda, mu])?;
    let mut s = Scalar::zero();
    for (beta, v) in kappa.terms_of_size(mu.size() - lambda.size()) {
        let c = lr_coeff(lambda, beta, mu)?;
        if c != 0 {
            s = s + v * &Scalar::Exact(int(c as i64));
        }
    }
    Ok(if s.is_zero() { s } else { s * dim_ratio(mu, lambda) })
}

/// All nonzero entries `Q_n(κ)(λ,·)`.
pub fn qn_row(kappa: &ClassFunction, lambda: &Signature) -> Result<BTreeMap<Signature, Scalar>> {
    same_rank(kappa, &[lambda])?;
    let mut acc: BTreeMap<Signature, Scalar> = BTreeMap::new();
    for (beta, v) in kappa.terms() {
        for (mu, c) in lr_product(lambda, beta)? {
            let e = acc.entry(mu).or_insert_with(Scalar::zero);
            *e = &*e + &(v * &Scalar::Exact(int(c as i64)));
        }
    }
    Ok(acc
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(mu, v)| {
            let r = dim_ratio(&mu, lambda);
            (mu, v * r)
        })
        .collect())
}

fn qrw_deviation(
    kappa: &ClassFunction,
    kernel: &TransitionKernel,
    window: &[Signature],
    tol: f64,
) -> Result<Deviation> {
    let devs = window
        .par_iter()
        .map(|lambda| -> Result<Deviation> {
            let mut dev = Deviation::new();
            for mu in window {
                let q = qn_entry(kappa, lambda, mu)?;
                let t = kernel.entry(lambda, mu)?;
                dev.record(|| format!("Q({lambda},{mu}) = {q}, T = {t}"), &q, &t, tol);
            }
            Ok(dev)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(devs.into_iter().fold(Deviation::new(), Deviation::merge))
}

/// Compares `Q_n(κ_{F'})` with `T_n(1^n; F)` on `window × window` for
/// `F' = F` and `F' = F∘inv`. Passes when the inverted pairing holds.
pub fn check_qrw(f: &SpectralFunction, n: usize, window: &[Signature], eps: f64) -> Result<Report> {
    if window.iter().any(|s| s.rank() != n) {
        return arg(format!("window signatures must have rank {n}"));
    }
    let kernel = TransitionKernel::at_ones(n, f)?;
    let truncation = Truncation::Auto {
        tol: eps.min(1e-9),
        max_size: 400,
    };
    let inverted = kappa_of(&f.inverted(), n, truncation)?;
    let direct = kappa_of(f, n, truncation)?;
    let tol = |k: &ClassFunction| if k.tail() > 0.0 || f.has_exponential() { eps } else { 0.0 };
    let inv_dev = qrw_deviation(&inverted, &kernel, window, tol(&inverted))?;
    let dir_dev = qrw_deviation(&direct, &kernel, window, tol(&direct))?;
    let pairing = match (inv_dev.passed(), dir_dev.passed()) {
        (true, true) => "both",
        (true, false) => "inverted",
        (false, true) => "direct",
        (false, false) => "none",
    };
    let direct_err = dir_dev.max_abs_error_string();
    Ok(inv_dev
        .into_report("qrw")
        .with("family", f.family())
        .with("F", f.to_string())
        .with("n", n)
        .with("pairing", pairing)
        .with("direct_max_abs_error", direct_err)
        .with("kappa_tail", format!("{:e}", inverted.tail())))
}

/// Both sides of `Σ_μ Q(0,μ) c_{λμ}^τ dim τ/(dim λ dim μ) = Q(λ,τ)`.
pub fn center_sides(kappa: &ClassFunction, lambda: &Signature, tau: &Signature) -> Result<(Scalar, Scalar)> {
    same_rank(kappa, &[lambda, tau])?;
    let zero = Signature::zero(kappa.rank());
    let mut lhs = Scalar::zero();
    // Q(0,μ) = κ̂(μ) dim μ, so μ runs over the κ terms of the right size
    for (mu, _) in kappa.terms_of_size(tau.size() - lambda.size()) {
        let c = lr_coeff(lambda, mu, tau)?;
        if c == 0 {
            continue;
        }
        let q0 = qn_entry(kappa, &zero, mu)?;
        let w = Scalar::Exact(int(c as i64) * dimension(tau) / (dimension(lambda) * dimension(mu)));
        lhs = lhs + q0 * w;
    }
    Ok((lhs, qn_entry(kappa, lambda, tau)?))
}

pub fn check_center_intertwining(kappa: &ClassFunction, lambda: &Signature, tau: &Signature) -> Result<Report> {
    check_center_window(kappa, std::slice::from_ref(lambda), std::slice::from_ref(tau))
}

/// The center intertwining identity for every `(λ, τ) ∈ lambdas × taus`.
pub fn check_center_window(kappa: &ClassFunction, lambdas: &[Signature], taus: &[Signature]) -> Result<Report> {
    if kappa.tail() > 0.0 {
        return Err(Error::Argument("center intertwining needs a finite expansion".into()));
    }
    let devs = lambdas
        .par_iter()
        .map(|lambda| -> Result<Deviation> {
            let mut dev = Deviation::new();
            for tau in taus {
                let (l, r) = center_sides(kappa, lambda, tau)?;
                dev.record(|| format!("center at ({lambda},{tau}): {l} vs {r}"), &l, &r, 0.0);
            }
            Ok(dev)
        })
        .collect::<Result<Vec<_>>>()?;
    let dev = devs.into_iter().fold(Deviation::new(), Deviation::merge);
    Ok(dev
        .into_report("center")
        .with("n", kappa.rank())
        .with("terms", kappa.len()))
}

/// `Q(κ1) Q(κ2) = Q(κ1 κ2)` on `window × window`; intermediate sums are finite.
pub fn check_morphism(k1: &ClassFunction, k2: &ClassFunction, window: &[Signature]) -> Result<Report> {
    let k12 = k1.multiply(k2)?;
    let tol = if k12.tail() > 0.0 { k12.tail() } else { 0.0 };
    let devs = window
        .par_iter()
        .map(|lambda| -> Result<Deviation> {
            let mut dev = Deviation::new();
            let first = qn_row(k1, lambda)?;
            for tau in window {
                let mut lhs = Scalar::zero();
                for (mu, a) in &first {
                    let b = qn_entry(k2, mu, tau)?;
                    if !b.is_zero() {
                        lhs = lhs + a * &b;
                    }
                }
                let rhs = qn_entry(&k12, lambda, tau)?;
                dev.record(|| format!("morphism at ({lambda},{tau})"), &lhs, &rhs, tol);
            }
            Ok(dev)
        })
        .collect::<Result<Vec<_>>>()?;
    let dev = devs.into_iter().fold(Deviation::new(), Deviation::merge);
    Ok(dev.into_report("morphism").with("n", k1.rank()))
}
