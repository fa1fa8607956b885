use num_traits::Zero;
use serde_json::{json, Value};

use super::fourier::FourierSeq;
use super::spectral::SpectralFunction;
use crate::error::{arg, domain, Error, Result};
use crate::linalg::determinant;
use crate::scalar::{format_rational, Rational, Scalar};
use crate::signature::{dimension, interlaces, Signature};
use crate::symfunc::{schur_eval, EvaluationPoint};

/// Whether a row lists its full support.
#[derive(Clone, Debug, PartialEq)]
pub enum Exactness {
    Exact,
    /// Enumeration stopped early. `tail` is `1 − Σ entries`; `cap` is set when
    /// a hard displacement cap (rather than the mass criterion) ended it.
    Truncated { tail: f64, cap: Option<u64> },
}

/// Controls enumeration of rows with infinite support.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowOptions {
    /// At `θ = 1`, stop once the listed mass reaches `1 − eps`.
    pub eps: f64,
    /// At `θ = 1`, give up (resource error) past this displacement.
    pub max_displacement: u64,
    /// Away from `θ = 1`, enumerate displacements `0..=cap` and stop.
    pub cap: u64,
}

impl Default for RowOptions {
    fn default() -> Self {
        RowOptions {
            eps: 1e-9,
            max_displacement: 512,
            cap: 16,
        }
    }
}

impl RowOptions {
    pub fn with_eps(eps: f64) -> Self {
        RowOptions {
            eps,
            ..Default::default()
        }
    }
}

/// One row `μ ↦ T_n(θ;F)(λ, μ)`, sorted by `μ`, zero entries omitted.
#[derive(Clone, Debug)]
pub struct KernelRow {
    pub source: Signature,
    pub theta: EvaluationPoint,
    pub spectral: SpectralFunction,
    pub entries: Vec<(Signature, Scalar)>,
    pub exactness: Exactness,
}

impl KernelRow {
    pub fn get(&self, mu: &Signature) -> Scalar {
        match self.entries.binary_search_by(|(m, _)| m.cmp(mu)) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn total(&self) -> Scalar {
        self.entries.iter().map(|(_, v)| v.clone()).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Complete row with rational entries.
    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact && self.entries.iter().all(|(_, v)| v.is_exact())
    }

    pub fn tail(&self) -> f64 {
        match self.exactness {
            Exactness::Exact => 0.0,
            Exactness::Truncated { tail, .. } => tail,
        }
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(mu, v)| json!({"mu": mu, "value": v.to_string()}))
            .collect();
        let tail = match self.exactness {
            Exactness::Exact => "0".to_string(),
            Exactness::Truncated { tail, .. } => format!("{tail:e}"),
        };
        let mut v = json!({
            "n": self.source.rank(),
            "theta": self.theta.coords().iter().map(format_rational).collect::<Vec<_>>(),
            "F": self.spectral.to_json(),
            "lambda": self.source,
            "entries": entries,
            "exact": self.is_exact(),
            "tail": tail,
        });
        if let Exactness::Truncated { cap: Some(k), .. } = self.exactness {
            v["cap"] = json!(k);
        }
        v
    }

    /// `mu,value` lines with a header; `mu` is quoted since it contains commas.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mu,value\n");
        for (mu, v) in &self.entries {
            out.push_str(&format!("\"{mu}\",{v}\n"));
        }
        out
    }
}

/// The matrix `T_n(θ;F)(λ,μ) = (s_μ(θ)/s_λ(θ)) · det[f(λ_j − j − μ_i + i)] / ∏_j F(θ_j^{-1})`.
#[derive(Debug)]
pub struct TransitionKernel {
    theta: EvaluationPoint,
    seq: FourierSeq,
    inv_norm: Scalar,
    ones: bool,
}

impl TransitionKernel {
    pub fn new(theta: EvaluationPoint, f: &SpectralFunction) -> Result<Self> {
        if !theta.is_positive() {
            return arg("kernel parameters θ must be positive");
        }
        let mut norm = Scalar::one();
        for t in theta.coords() {
            norm = norm * f.eval(&t.recip())?;
        }
        if norm.is_zero() {
            return domain("normalizer ∏F(1/θ_j) vanishes");
        }
        Ok(TransitionKernel {
            ones: theta.is_ones(),
            theta,
            seq: FourierSeq::new(f),
            inv_norm: norm.recip(),
        })
    }

    /// Kernel at `θ = 1^n`.
    pub fn at_ones(n: usize, f: &SpectralFunction) -> Result<Self> {
        Self::new(EvaluationPoint::ones(n), f)
    }

    pub fn rank(&self) -> usize {
        self.theta.rank()
    }

    pub fn theta(&self) -> &EvaluationPoint {
        &self.theta
    }

    pub fn spectral(&self) -> &SpectralFunction {
        self.seq.function()
    }

    pub fn fourier(&self) -> &FourierSeq {
        &self.seq
    }

    /// `1/∏F(θ_j^{-1})`.
    pub fn inverse_normalizer(&self) -> &Scalar {
        &self.inv_norm
    }

    fn check(&self, s: &Signature) -> Result<()> {
        if s.rank() != self.rank() {
            return arg(format!(
                "signature {s} has {} parts, kernel rank is {}",
                s.rank(),
                self.rank()
            ));
        }
        Ok(())
    }

    /// Per-coordinate range `μ_i ∈ [λ_i − hi, λ_i − lo]` outside which the
    /// determinant vanishes (`None` for an unbounded side).
    pub fn support_box(&self, lambda: &Signature) -> Vec<(Option<i64>, Option<i64>)> {
        let s = self.seq.support();
        lambda
            .parts()
            .iter()
            .map(|&l| (s.hi.map(|h| l - h), s.lo.map(|lo| l - lo)))
            .collect()
    }

    fn in_box(&self, lambda: &Signature, mu: &Signature) -> bool {
        let s = self.seq.support();
        lambda
            .parts()
            .iter()
            .zip(mu.parts())
            .all(|(l, m)| s.contains(l - m))
    }

    /// `det[f((λ_j − j) − (μ_i − i))]`.
    pub fn minor(&self, lambda: &Signature, mu: &Signature) -> Rational {
        let (l, m) = (lambda.parts(), mu.parts());
        let n = l.len();
        let mat: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.seq.coeff(l[j] - j as i64 - m[i] + i as i64))
                    .collect()
            })
            .collect();
        determinant(mat)
    }

    fn schur_ratio(&self, lambda: &Signature, mu: &Signature) -> Result<Rational> {
        if self.ones {
            return Ok(dimension(mu) / dimension(lambda));
        }
        let sl = schur_eval(lambda, &self.theta)?;
        if sl.is_zero() {
            return domain(format!("s_λ(θ) vanishes at λ = {lambda}"));
        }
        Ok(schur_eval(mu, &self.theta)? / sl)
    }

    pub fn entry(&self, lambda: &Signature, mu: &Signature) -> Result<Scalar> {
        self.check(lambda)?;
        self.check(mu)?;
        if !self.in_box(lambda, mu) {
            return Ok(Scalar::zero());
        }
        let det = self.minor(lambda, mu);
        if det.is_zero() {
            return Ok(Scalar::zero());
        }
        let ratio = self.schur_ratio(lambda, mu)?;
        Ok(Scalar::Exact(det * ratio) * &self.inv_norm)
    }

    /// For a single α factor the determinant vanishes off interlacing pairs.
    fn may_be_nonzero(&self, lambda: &Signature, mu: &Signature) -> bool {
        match self.spectral() {
            SpectralFunction::AlphaPlus(_) => interlaces(mu, lambda).unwrap_or(false),
            SpectralFunction::AlphaMinus(_) => interlaces(lambda, mu).unwrap_or(false),
            _ => true,
        }
    }

    /// Row from `λ`. Finite supports are listed completely; infinite ones are
    /// enumerated by total displacement from the finite edge of the support box.
    pub fn row(&self, lambda: &Signature, opts: RowOptions) -> Result<KernelRow> {
        self.check(lambda)?;
        let bounds = self.support_box(lambda);
        let mut entries = Vec::new();
        let push = |mu: Signature, entries: &mut Vec<(Signature, Scalar)>| -> Result<Scalar> {
            if !self.may_be_nonzero(lambda, &mu) {
                return Ok(Scalar::zero());
            }
            let v = self.entry(lambda, &mu)?;
            if !v.is_zero() {
                entries.push((mu, v.clone()));
            }
            Ok(v)
        };
        let exactness = if bounds.iter().all(|(a, b)| a.is_some() && b.is_some()) {
            let lo: Vec<i64> = bounds.iter().map(|b| b.0.unwrap()).collect();
            let hi: Vec<i64> = bounds.iter().map(|b| b.1.unwrap()).collect();
            for mu in signatures_between(&lo, &hi) {
                push(mu, &mut entries)?;
            }
            Exactness::Exact
        } else {
            let (base, dir): (Vec<i64>, i64) = if bounds[0].1.is_none() {
                (bounds.iter().map(|b| b.0.unwrap()).collect(), 1)
            } else {
                (bounds.iter().map(|b| b.1.unwrap()).collect(), -1)
            };
            let mut mass = Scalar::zero();
            let mut d = 0u64;
            loop {
                for mu in displacement_shell(&base, dir, d as i64) {
                    let v = push(mu, &mut entries)?;
                    mass = mass + v;
                }
                let m = mass.to_f64();
                if self.ones {
                    if m >= 1.0 - opts.eps {
                        break Exactness::Truncated {
                            tail: (1.0 - m).max(0.0),
                            cap: None,
                        };
                    }
                    if d >= opts.max_displacement {
                        return Err(Error::Resource(format!(
                            "row from {lambda} holds mass {m} after displacement {d}; \
                             needed 1 - {:e}",
                            opts.eps
                        )));
                    }
                } else if d >= opts.cap {
                    break Exactness::Truncated {
                        tail: (1.0 - m).abs(),
                        cap: Some(d),
                    };
                }
                d += 1;
            }
        };
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(KernelRow {
            source: lambda.clone(),
            theta: self.theta.clone(),
            spectral: self.spectral().clone(),
            entries,
            exactness,
        })
    }
}

/// Nonincreasing `μ` with `lo_i ≤ μ_i ≤ hi_i`.
pub(crate) fn signatures_between(lo: &[i64], hi: &[i64]) -> Vec<Signature> {
    fn rec(i: usize, lo: &[i64], hi: &[i64], prefix: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if i == lo.len() {
            out.push(Signature::new_unchecked(prefix.clone()));
            return;
        }
        let cap = if i == 0 { hi[0] } else { hi[i].min(prefix[i - 1]) };
        for v in lo[i]..=cap {
            prefix.push(v);
            rec(i + 1, lo, hi, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, lo, hi, &mut Vec::with_capacity(lo.len()), &mut out);
    out
}

/// Nonincreasing `μ = base + dir·d` with `d ≥ 0` componentwise and `Σ d_i = total`.
pub(crate) fn displacement_shell(base: &[i64], dir: i64, total: i64) -> Vec<Signature> {
    fn rec(i: usize, base: &[i64], dir: i64, rem: i64, prefix: &mut Vec<i64>, out: &mut Vec<Signature>) {
        let n = base.len();
        if i == n {
            if rem == 0 {
                out.push(Signature::new_unchecked(prefix.clone()));
            }
            return;
        }
        if i + 1 == n {
            let v = base[i] + dir * rem;
            if i == 0 || v <= prefix[i - 1] {
                prefix.push(v);
                rec(i + 1, base, dir, 0, prefix, out);
                prefix.pop();
            }
            return;
        }
        for d in 0..=rem {
            let v = base[i] + dir * d;
            if i > 0 && v > prefix[i - 1] {
                if dir > 0 {
                    break;
                }
                continue;
            }
            prefix.push(v);
            rec(i + 1, base, dir, rem - d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, base, dir, total, &mut Vec::with_capacity(base.len()), &mut out);
    out
}

/// `ℙ_n(θ;F)(μ) = T_n(θ;F)(0^n, μ)`.
pub fn p0_row(theta: &EvaluationPoint, f: &SpectralFunction, opts: RowOptions) -> Result<KernelRow> {
    let k = TransitionKernel::new(theta.clone(), f)?;
    k.row(&Signature::zero(theta.rank()), opts)
}
