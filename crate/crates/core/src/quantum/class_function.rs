use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{arg, Result};
use crate::kernels::{displacement_shell, signatures_between, FourierSeq, SpectralFunction};
use crate::linalg::determinant;
use crate::scalar::{int, Rational, Scalar};
use crate::signature::{dimension, Signature};
use crate::symfunc::lr_product;

/// Where a class function's coefficients came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Explicit,
    /// `κ_F` expanded up to displacement `max_size` from the finite edge.
    Family { f: SpectralFunction, max_size: u64 },
}

/// How far to expand `κ_F` when `F` has infinitely many coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    /// Smallest size with `1 − Σ κ̂(β) dim β < tol`.
    Auto { tol: f64, max_size: u64 },
    Size(u64),
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Auto {
            tol: 1e-9,
            max_size: 400,
        }
    }
}

/// `κ = Σ_β κ̂(β) χ_β`, finitely many terms.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    n: usize,
    terms: BTreeMap<Signature, Scalar>,
    by_size: BTreeMap<i64, Vec<(Signature, Scalar)>>,
    tail: f64,
    provenance: Provenance,
}

impl ClassFunction {
    /// Explicit finite expansion; zero coefficients are dropped.
    pub fn new(n: usize, terms: BTreeMap<Signature, Scalar>) -> Result<Self> {
        if terms.keys().any(|b| b.rank() != n) {
            return arg(format!("class function terms must have rank {n}"));
        }
        Ok(Self::build(n, terms, 0.0, Provenance::Explicit))
    }

    fn build(n: usize, terms: BTreeMap<Signature, Scalar>, tail: f64, provenance: Provenance) -> Self {
        let terms: BTreeMap<Signature, Scalar> =
            terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut by_size: BTreeMap<i64, Vec<(Signature, Scalar)>> = BTreeMap::new();
        for (b, v) in &terms {
            by_size.entry(b.size()).or_default().push((b.clone(), v.clone()));
        }
        ClassFunction {
            n,
            terms,
            by_size,
            tail,
            provenance,
        }
    }

    /// The character `χ_β`.
    pub fn character(beta: &Signature) -> Self {
        Self::build(
            beta.rank(),
            BTreeMap::from([(beta.clone(), Scalar::one())]),
            0.0,
            Provenance::Explicit,
        )
    }

    /// `χ_β / dim β`, which sends the identity to 1.
    pub fn normalized_character(beta: &Signature) -> Self {
        Self::build(
            beta.rank(),
            BTreeMap::from([(beta.clone(), Scalar::Exact(dimension(beta).recip()))]),
            0.0,
            Provenance::Explicit,
        )
    }

    /// `κ ≡ 1`.
    pub fn one(n: usize) -> Self {
        Self::character(&Signature::zero(n))
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, beta: &Signature) -> Scalar {
        self.terms.get(beta).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> &BTreeMap<Signature, Scalar> {
        &self.terms
    }

    /// Terms `β` with `|β| = size`.
    pub fn terms_of_size(&self, size: i64) -> &[(Signature, Scalar)] {
        self.by_size.get(&size).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Mass not captured by truncation (0 for finite expansions).
    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `κ(identity) = Σ_β κ̂(β) dim β`.
    pub fn value_at_identity(&self) -> Scalar {
        self.terms
            .iter()
            .map(|(b, v)| v * &Scalar::Exact(dimension(b)))
            .sum()
    }

    /// Pointwise product, expanded with Littlewood-Richardson coefficients.
    pub fn multiply(&self, other: &ClassFunction) -> Result<ClassFunction> {
        if self.n != other.n {
            return arg("class functions of different ranks");
        }
        let mut out: BTreeMap<Signature, Scalar> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let xy = x * y;
                for (t, c) in lr_product(a, b)? {
                    let e = out.entry(t).or_insert_with(Scalar::zero);
                    *e = &*e + &(&xy * &Scalar::Exact(int(c as i64)));
                }
            }
        }
        Ok(Self::build(
            self.n,
            out,
            self.tail + other.tail,
            Provenance::Explicit,
        ))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(b, v)| json!({"beta": b, "coeff": v.to_string()}))
            .collect();
        let mut v = json!({"n": self.n, "terms": terms, "tail": format!("{:e}", self.tail)});
        if let Provenance::Family { f, max_size } = &self.provenance {
            v["F"] = f.to_json();
            v["max_size"] = json!(max_size);
        }
        v
    }
}

/// Closed-form coefficient for the α/β families: `(shape of size k, weight)`.
fn named_term(f: &SpectralFunction, n: usize, k: u64) -> Option<(Signature, Rational)> {
    use SpectralFunction::*;
    let one = Rational::one();
    match f {
        BetaPlus(p) if (k as usize) <= n => Some((
            Signature::column(k as usize, n),
            p.pow(k as i32) / (&one + p).pow(n as i32),
        )),
        BetaMinus(p) if (k as usize) <= n => Some((
            Signature::neg_column(k as usize, n),
            p.pow(k as i32) / (&one + p).pow(n as i32),
        )),
        AlphaPlus(q) => Some((
            Signature::row(k as i64, n),
            q.pow(k as i32) * (&one - q).pow(n as i32),
        )),
        AlphaMinus(q) => Some((
            Signature::neg_row(k as i64, n),
            q.pow(k as i32) * (&one - q).pow(n as i32),
        )),
        _ => None,
    }
}

fn uses_table(f: &SpectralFunction) -> bool {
    use SpectralFunction::*;
    matches!(f, BetaPlus(_) | BetaMinus(_) | AlphaPlus(_) | AlphaMinus(_))
}

/// Terms of `κ_F` at displacement `d` from the finite edge of the coefficient box.
fn shell_terms(
    f: &SpectralFunction,
    seq: &FourierSeq,
    n: usize,
    d: u64,
    inv_norm: &Scalar,
) -> Vec<(Signature, Scalar)> {
    if uses_table(f) {
        return named_term(f, n, d)
            .filter(|(_, v)| !v.is_zero())
            .map(|(b, v)| vec![(b, Scalar::Exact(v))])
            .unwrap_or_default();
    }
    let s = seq.support();
    let betas = match (s.lo, s.hi) {
        (Some(lo), Some(hi)) => {
            if d > 0 {
                return Vec::new();
            }
            signatures_between(&vec![lo; n], &vec![hi; n])
        }
        (Some(lo), None) => displacement_shell(&vec![lo; n], 1, d as i64),
        (None, Some(hi)) => displacement_shell(&vec![hi; n], -1, d as i64),
        (None, None) => unreachable!("two-sided supports are rejected"),
    };
    betas
        .into_iter()
        .filter_map(|beta| {
            let b = beta.parts();
            let m: Vec<Vec<Rational>> = (0..n)
                .map(|i| (0..n).map(|j| seq.coeff(b[i] - i as i64 + j as i64)).collect())
                .collect();
            let det = determinant(m);
            (!det.is_zero()).then(|| (beta, Scalar::Exact(det) * inv_norm))
        })
        .collect()
}

/// The class function `κ_F(θ) = ∏_j F(θ_j)/F(1)` in the character basis.
///
/// The α/β families use their closed-form expansions. Everything else goes
/// through `κ̂(β) = det[f(β_i − i + j)] / F(1)^n`.
pub fn kappa_of(f: &SpectralFunction, n: usize, truncation: Truncation) -> Result<ClassFunction> {
    if n == 0 {
        return arg("rank must be positive");
    }
    let seq = FourierSeq::new(f);
    let f1 = f.eval(&Rational::one())?;
    if f1.is_zero() {
        return arg(format!("{f} vanishes at 1, so κ_F is undefined"));
    }
    let inv_norm = (0..n).fold(Scalar::one(), |acc, _| acc * f1.recip());
    let finite = f.is_finite();
    let (limit, tol) = match truncation {
        _ if finite => (if uses_table(f) { n as u64 } else { 0 }, None),
        Truncation::Size(k) => (k, None),
        Truncation::Auto { tol, max_size } => (max_size, Some(tol)),
    };
    let mut terms = BTreeMap::new();
    let mut mass = Scalar::zero();
    let mut d = 0;
    loop {
        for (b, v) in shell_terms(f, &seq, n, d, &inv_norm) {
            mass = mass + &v * &Scalar::Exact(dimension(&b));
            terms.insert(b, v);
        }
        let tail = if finite { 0.0 } else { (1.0 - mass.to_f64()).max(0.0) };
        let done = match tol {
            Some(t) => tail < t,
            None => false,
        };
        if done || d >= limit {
            if let (Some(t), false) = (tol, done) {
                return Err(crate::error::Error::Resource(format!(
                    "κ_F for {f} keeps tail {tail:e} ≥ {t:e} after size {d}"
                )));
            }
            return Ok(ClassFunction::build(
                n,
                terms,
                tail,
                Provenance::Family {
                    f: f.clone(),
                    max_size: d,
                },
            ));
        }
        d += 1;
    }
}
