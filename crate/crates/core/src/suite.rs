//! Named verification checks and the desk-scale battery that runs all of them.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::chains::{check_doob, empirical_check};
use crate::error::{arg, Error, Result};
use crate::kernels::{
    check_gamma_limit, check_closed_forms, check_semigroup, check_star_window, check_stochastic, SpectralFunction,
};
use crate::quantum::{
    check_center_window, check_morphism, check_qrw, check_torus, kappa_of, ClassFunction, Truncation,
};
use crate::report::{Deviation, Report};
use crate::scalar::{int, rat, Rational, Scalar};
use crate::signature::{dimension, partitions_of, window, Signature};
use crate::symfunc::{
    lr_product, lr_product_oracle, schur_bialternant, schur_eval, EnumerationLimits, EvaluationPoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Stochastic,
    Semigroup,
    Star,
    Qrw,
    Center,
    Torus,
    Doob,
    ClosedForms,
    Empirical,
    All,
}

impl Check {
    pub const NAMES: [&'static str; 10] = [
        "stochastic",
        "semigroup",
        "star",
        "qrw",
        "center",
        "torus",
        "doob",
        "lemma212",
        "empirical",
        "all",
    ];
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "stochastic" => Check::Stochastic,
            "semigroup" => Check::Semigroup,
            "star" => Check::Star,
            "qrw" => Check::Qrw,
            "center" => Check::Center,
            "torus" => Check::Torus,
            "doob" => Check::Doob,
            "lemma212" => Check::ClosedForms,
            "empirical" => Check::Empirical,
            "all" => Check::All,
            _ => return arg(format!("unknown check {s:?}; expected one of {}", Check::NAMES.join(", "))),
        })
    }
}

/// Parameters for a single check. Unset fields take per-check defaults.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n: usize,
    pub f: Option<SpectralFunction>,
    /// Second factor for the semigroup check; defaults to `f`.
    pub f2: Option<SpectralFunction>,
    pub theta: Option<EvaluationPoint>,
    /// Window half-width: parts in `[−window, window]`.
    pub window: i64,
    pub eps: f64,
    pub lambda: Option<Signature>,
    pub mu: Option<Signature>,
    pub seed: u64,
    pub samples: u64,
    pub delta: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n: 2,
            f: None,
            f2: None,
            theta: None,
            window: 3,
            eps: 1e-9,
            lambda: None,
            mu: None,
            seed: 7,
            samples: 100_000,
            delta: 0.02,
        }
    }
}

fn sf(s: &str) -> SpectralFunction {
    s.parse().expect("built-in spectral function")
}

impl VerifyConfig {
    fn f_or(&self, default: &str) -> SpectralFunction {
        self.f.clone().unwrap_or_else(|| sf(default))
    }

    fn theta(&self) -> Result<EvaluationPoint> {
        match &self.theta {
            Some(t) if t.rank() != self.n => arg(format!("θ has {} coordinates, n = {}", t.rank(), self.n)),
            Some(t) => Ok(t.clone()),
            None => Ok(EvaluationPoint::ones(self.n)),
        }
    }

    fn window(&self) -> Result<Vec<Signature>> {
        if self.n == 0 {
            return arg("n must be positive");
        }
        if self.window < 0 {
            return arg("window must be nonnegative");
        }
        Ok(window(self.n, self.window))
    }

    fn sig_or(&self, s: &Option<Signature>, default: Signature) -> Result<Signature> {
        let s = s.clone().unwrap_or(default);
        if s.rank() != self.n {
            return arg(format!("{s} does not have rank {}", self.n));
        }
        Ok(s)
    }
}

/// Finite class function used by `center` and `torus` for a given `F`.
fn finite_kappa(f: &SpectralFunction, n: usize) -> Result<ClassFunction> {
    if !f.is_finite() {
        return arg(format!("{f} has infinitely many coefficients; a finite class function is needed"));
    }
    kappa_of(f, n, Truncation::default())
}

/// Runs one named check (or the full battery for [`Check::All`]).
pub fn verify(check: Check, cfg: &VerifyConfig) -> Result<Report> {
    let n = cfg.n;
    match check {
        Check::Stochastic => check_stochastic(&cfg.f_or("beta-:1/2"), &cfg.window()?, cfg.eps),
        Check::Semigroup => {
            let f1 = cfg.f_or("beta-:1/2");
            let f2 = cfg.f2.clone().unwrap_or_else(|| f1.clone());
            check_semigroup(&cfg.theta()?, &f1, &f2, &cfg.window()?, cfg.eps)
        }
        Check::Star => {
            let w = cfg.window()?;
            check_star_window(&cfg.theta()?, &cfg.f_or("beta-:1/2"), &w, &w, cfg.eps)
        }
        Check::Qrw => check_qrw(&cfg.f_or("beta+:1/2"), n, &cfg.window()?, cfg.eps),
        Check::Center => {
            let kappa = finite_kappa(&cfg.f_or("beta+:1/2"), n)?;
            match (&cfg.lambda, &cfg.mu) {
                (Some(_), Some(_)) | (Some(_), None) | (None, Some(_)) => {
                    let l = cfg.sig_or(&cfg.lambda, Signature::zero(n))?;
                    let t = cfg.sig_or(&cfg.mu, Signature::zero(n))?;
                    check_center_window(&kappa, &[l], &[t])
                }
                (None, None) => {
                    let w = cfg.window()?;
                    check_center_window(&kappa, &w, &w)
                }
            }
        }
        Check::Torus => {
            let kappa = finite_kappa(&cfg.f_or("beta+:1/2"), n)?;
            let l = cfg.sig_or(&cfg.lambda, Signature::row(1, n))?;
            let m = cfg.sig_or(&cfg.mu, Signature::row(1, n))?;
            check_torus(&kappa, &l, &m, 50, cfg.seed)
        }
        Check::Doob => check_doob(&cfg.f_or("beta-:1/2"), n, &cfg.window()?),
        Check::ClosedForms => check_closed_forms(&cfg.theta()?, &cfg.f_or("beta-:1/2"), &cfg.window()?),
        Check::Empirical => {
            let l = cfg.sig_or(&cfg.lambda, Signature::zero(n))?;
            empirical_check(&l, &cfg.f_or("beta-:1/2"), cfg.samples, cfg.seed, cfg.delta)
        }
        Check::All => verify_all(cfg.seed),
    }
}

/// `lr_product` against the weight-peeling oracle for all partitions with at
/// most `max_boxes` boxes, `n ≤ max_n`.
pub fn lr_oracle_sweep(max_n: usize, max_boxes: i64) -> Result<Report> {
    let limits = EnumerationLimits {
        max_rank: max_n,
        max_boxes: 2 * max_boxes,
    };
    let mut pairs = Vec::new();
    for n in 1..=max_n {
        let parts: Vec<Signature> = (0..=max_boxes).flat_map(|k| partitions_of(k, n)).collect();
        for a in &parts {
            for b in &parts {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    let devs = pairs
        .par_iter()
        .map(|(a, b)| -> Result<Deviation> {
            let mut dev = Deviation::new();
            let fast = lr_product(a, b)?;
            let slow = lr_product_oracle(a, b, limits)?;
            dev.require(fast == slow, || format!("LR products differ for {a} ⊗ {b}"));
            for (t, c) in &fast {
                let x = Scalar::Exact(int(*c as i64));
                let y = Scalar::Exact(int(slow.get(t).copied().unwrap_or(0) as i64));
                dev.record(|| format!("c({a},{b};{t})"), &x, &y, 0.0);
            }
            Ok(dev)
        })
        .collect::<Result<Vec<_>>>()?;
    let dev = devs.into_iter().fold(Deviation::new(), Deviation::merge);
    Ok(dev
        .into_report("lr")
        .with("max_n", max_n)
        .with("max_boxes", max_boxes)
        .with("pairs", pairs.len()))
}

fn random_distinct_theta(rng: &mut ChaCha20Rng, n: usize) -> EvaluationPoint {
    loop {
        let coords: Vec<Rational> = (0..n)
            .map(|_| {
                let num = rng.random_range(1..=9);
                let den = rng.random_range(1..=9);
                let sign = if rng.random_bool(0.2) { -1 } else { 1 };
                rat(sign * num, den)
            })
            .collect();
        if let Ok(t) = EvaluationPoint::new(coords) {
            if !t.has_repeats() {
                return t;
            }
        }
    }
}

/// Jacobi-Trudi against the bialternant on random distinct points, and the
/// value at `1^n` against the dimension.
pub fn schur_consistency(max_n: usize, w: i64, points: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut jobs = Vec::new();
    for n in 1..=max_n {
        let thetas: Vec<EvaluationPoint> = (0..points).map(|_| random_distinct_theta(&mut rng, n)).collect();
        jobs.extend(window(n, w).into_iter().map(|l| (l, thetas.clone())));
    }
    let devs = jobs
        .par_iter()
        .map(|(l, thetas)| -> Result<Deviation> {
            let mut dev = Deviation::new();
            for t in thetas {
                let a = Scalar::Exact(schur_eval(l, t)?);
                let b = Scalar::Exact(schur_bialternant(l, t)?);
                dev.record(|| format!("s_{l}({t})"), &a, &b, 0.0);
            }
            let ones = Scalar::Exact(schur_eval(l, &EvaluationPoint::ones(l.rank()))?);
            dev.record(|| format!("s_{l}(1)"), &ones, &Scalar::Exact(dimension(l)), 0.0);
            Ok(dev)
        })
        .collect::<Result<Vec<_>>>()?;
    let dev = devs.into_iter().fold(Deviation::new(), Deviation::merge);
    Ok(dev.into_report("schur").with("points", points).with("seed", seed))
}

/// Random finite class function `Σ c_β χ_β` over partitions with `|β| ≤ max_size`.
pub fn random_class_function(n: usize, max_size: i64, rng: &mut ChaCha20Rng) -> Result<ClassFunction> {
    let mut terms = std::collections::BTreeMap::new();
    for b in (0..=max_size).flat_map(|k| partitions_of(k, n)) {
        if rng.random_bool(0.6) {
            let c = rat(rng.random_range(1..=9), rng.random_range(1..=9));
            terms.insert(b, Scalar::Exact(c));
        }
    }
    ClassFunction::new(n, terms)
}

fn named(prefix: &str, reports: Vec<Report>) -> Report {
    Report::combine(prefix, reports)
}

/// Every check at desk-scale defaults (`n ≤ 3`, parts in `[−3, 3]` unless the
/// check is heavier), seeded by `seed`.
pub fn verify_all(seed: u64) -> Result<Report> {
    let w = |n| window(n, 3);
    let ones = EvaluationPoint::ones;
    let mut parts = Vec::new();

    parts.push(lr_oracle_sweep(3, 4)?);
    parts.push(schur_consistency(3, 2, 200, seed)?);

    let mut closed = Vec::new();
    for n in 1..=3 {
        for p in ["1/3", "1/2"] {
            for fam in ["beta+", "beta-", "alpha+", "alpha-"] {
                closed.push(check_closed_forms(&ones(n), &sf(&format!("{fam}:{p}")), &w(n))?);
            }
        }
    }
    parts.push(named("lemma212", closed));

    let mut semi = Vec::new();
    let finite = ["beta+:1/2", "beta-:1/3", "laurent{0:1/2,1:1/4,2:1/4}", "prod(beta+:1/3,beta-:1/2)"];
    for n in 1..=3 {
        for a in finite {
            for b in finite {
                semi.push(check_semigroup(&ones(n), &sf(a), &sf(b), &w(n), 0.0)?);
            }
        }
    }
    for (a, b) in [("alpha+:1/2", "alpha+:1/3"), ("alpha-:1/2", "beta-:1/2"), ("alpha+:1/3", "beta+:1/2")] {
        semi.push(check_semigroup(&ones(2), &sf(a), &sf(b), &w(2), 1e-9)?);
    }
    parts.push(named("semigroup", semi));

    let mut stoch = Vec::new();
    for n in 1..=3 {
        for f in ["beta+:1/2", "beta-:1/2", "laurent{-1:1/4,0:1/2,1:1/4}", "alpha+:1/2", "alpha-:1/3"] {
            stoch.push(check_stochastic(&sf(f), &w(n), 1e-9)?);
        }
        for f in ["gamma+:1", "gamma-:1/2"] {
            stoch.push(check_stochastic(&sf(f), &w(n), 1e-6)?);
        }
    }
    parts.push(named("stochastic", stoch));

    let mut star = Vec::new();
    let thetas = [
        ones(2),
        EvaluationPoint::new(vec![rat(1, 1), rat(1, 2)])?,
        EvaluationPoint::new(vec![rat(2, 1), rat(1, 3)])?,
    ];
    for t in &thetas {
        for f in ["beta+:1/2", "beta-:1/3", "prod(beta+:1/2,beta-:1/3)"] {
            star.push(check_star_window(t, &sf(f), &w(2), &w(2), 0.0)?);
        }
    }
    for f in ["beta+:1/2", "beta-:1/3", "prod(beta+:1/2,beta-:1/3)"] {
        star.push(check_star_window(&ones(3), &sf(f), &w(3), &w(3), 0.0)?);
    }
    for f in ["alpha+:1/2", "alpha-:1/3"] {
        star.push(check_star_window(&ones(2), &sf(f), &w(2), &w(2), 1e-9)?);
    }
    parts.push(named("star", star));

    let mut qrw = Vec::new();
    for n in 1..=3 {
        for f in ["beta+:1/2", "beta-:1/3", "alpha+:1/2", "alpha-:1/3", "gamma+:1/2", "gamma-:1/2"] {
            qrw.push(check_qrw(&sf(f), n, &w(n), 1e-9)?);
        }
    }
    parts.push(named("qrw", qrw));

    parts.push(check_gamma_limit(&sf("gamma-:1/2"), &window(2, 2), &[16, 64, 256, 1024], 1e-3)?);

    let mut center = Vec::new();
    for n in 1..=3 {
        let cw = w(n);
        for beta in (0..=3).flat_map(|k| partitions_of(k, n)) {
            center.push(check_center_window(&ClassFunction::normalized_character(&beta), &cw, &cw)?);
        }
        center.push(check_center_window(&finite_kappa(&sf("beta+:1/2"), n)?, &cw, &cw)?);
    }
    let k1 = finite_kappa(&sf("beta+:1/2"), 2)?;
    let k2 = ClassFunction::normalized_character(&"2,1".parse()?);
    center.push(check_morphism(&k1, &k2, &window(2, 2))?);
    parts.push(named("center", center));

    let mut torus = Vec::new();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for n in 1..=3 {
        let small: Vec<Signature> = (0..=3).flat_map(|k| partitions_of(k, n)).collect();
        let kappa = random_class_function(n, 3, &mut rng)?;
        for (i, l) in small.iter().enumerate() {
            for m in &small {
                let triples = if i == 0 && m == &small[0] { 50 } else { 0 };
                torus.push(check_torus(&kappa, l, m, triples, seed)?);
            }
        }
    }
    parts.push(named("torus", torus));

    let mut doob = Vec::new();
    for n in 1..=3 {
        doob.push(check_doob(&sf("beta-:1/2"), n, &w(n))?);
        doob.push(check_doob(&sf("gamma-:1/2"), n, &w(n))?);
    }
    parts.push(named("doob", doob));

    let mut emp = Vec::new();
    for n in 1..=2 {
        for f in ["beta+:1/2", "beta-:1/2", "alpha+:1/2", "alpha-:1/2", "gamma+:1/2", "gamma-:1/2"] {
            emp.push(empirical_check(&Signature::zero(n), &sf(f), 100_000, seed, 0.02)?);
        }
    }
    parts.push(named("empirical", emp));

    Ok(Report::combine("all", parts).with("seed", seed))
}
