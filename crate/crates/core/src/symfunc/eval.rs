use num_traits::{One, Zero};

use super::EvaluationPoint;
use crate::error::{arg, domain, Result};
use crate::linalg::determinant;
use crate::scalar::Rational;
use crate::signature::Signature;

/// `h_0(θ), …, h_{max}(θ)` by adding one variable at a time.
fn h_table(max: usize, theta: &EvaluationPoint) -> Vec<Rational> {
    let mut h = vec![Rational::zero(); max + 1];
    h[0] = Rational::one();
    for t in theta.coords() {
        for k in 1..=max {
            let prev = &h[k - 1] * t;
            h[k] += prev;
        }
    }
    h
}

/// Complete homogeneous symmetric polynomial `h_k(θ)`; zero for `k < 0`.
pub fn h_eval(k: i64, theta: &EvaluationPoint) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    h_table(k as usize, theta).pop().unwrap()
}

/// Elementary symmetric polynomial `e_k(θ)`; zero outside `0..=n`.
pub fn e_eval(k: i64, theta: &EvaluationPoint) -> Rational {
    let n = theta.rank() as i64;
    if k < 0 || k > n {
        return Rational::zero();
    }
    let k = k as usize;
    let mut e = vec![Rational::zero(); k + 1];
    e[0] = Rational::one();
    for t in theta.coords() {
        for j in (1..=k).rev() {
            let prev = &e[j - 1] * t;
            e[j] += prev;
        }
    }
    e.pop().unwrap()
}

pub fn theta_product(theta: &EvaluationPoint) -> Rational {
    theta.coords().iter().fold(Rational::one(), |acc, t| acc * t)
}

fn check_rank(lambda: &Signature, theta: &EvaluationPoint) -> Result<()> {
    if lambda.rank() != theta.rank() {
        return arg(format!(
            "signature has {} parts but θ has {} coordinates",
            lambda.rank(),
            theta.rank()
        ));
    }
    Ok(())
}

/// Schur polynomial `s_λ(θ)` via the Jacobi-Trudi determinant `det[h_{λ_i − i + j}]`.
///
/// Negative parts are handled by translating to a partition and multiplying by
/// `(θ_1⋯θ_n)^{λ_n}`. Valid at repeated coordinates, including `θ = 1^n`.
pub fn schur_eval(lambda: &Signature, theta: &EvaluationPoint) -> Result<Rational> {
    check_rank(lambda, theta)?;
    let (partition, c) = lambda.to_partition();
    let parts: Vec<i64> = partition.parts().iter().copied().take_while(|&p| p > 0).collect();
    let len = parts.len();
    let value = if len == 0 {
        Rational::one()
    } else {
        let h = h_table((parts[0] as usize) + len, theta);
        let hk = |k: i64| {
            if k < 0 {
                Rational::zero()
            } else {
                h[k as usize].clone()
            }
        };
        let m = (0..len)
            .map(|i| (0..len).map(|j| hk(parts[i] - i as i64 + j as i64)).collect())
            .collect();
        determinant(m)
    };
    // s_λ = (θ_1⋯θ_n)^{-c} s_{λ+c}
    Ok(value * theta_product(theta).pow(-c as i32))
}

/// Bialternant `det[θ_i^{λ_j+n−j}] / det[θ_i^{n−j}]`; needs pairwise distinct `θ`.
pub fn schur_bialternant(lambda: &Signature, theta: &EvaluationPoint) -> Result<Rational> {
    check_rank(lambda, theta)?;
    if theta.has_repeats() {
        return domain("bialternant denominator vanishes at repeated θ coordinates");
    }
    let n = theta.rank();
    let alt = |exps: &dyn Fn(usize) -> i64| {
        let m = theta
            .coords()
            .iter()
            .map(|t| (0..n).map(|j| t.pow(exps(j) as i32)).collect())
            .collect();
        determinant(m)
    };
    let p = lambda.parts();
    let num = alt(&|j| p[j] + (n - 1 - j) as i64);
    let den = alt(&|j| (n - 1 - j) as i64);
    Ok(num / den)
}
