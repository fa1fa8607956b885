//! Acceptance battery: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{One, Zero};
use schurwalk::chains::{check_doob, empirical_check, particle_positions};
use schurwalk::kernels::{
    check_gamma_limit, check_semigroup, check_star_window, check_stochastic, SpectralFunction, TransitionKernel,
};
use schurwalk::quantum::{
    check_center_window, check_morphism, check_qrw, check_torus, kappa_of, qn_entry, torus_convolution,
    ClassFunction, Truncation,
};
use schurwalk::scalar::{int, rat};
use schurwalk::signature::{interlaces, partitions_of, window};
use schurwalk::suite::{random_class_function, schur_consistency};
use schurwalk::symfunc::{lr_coeff, lr_coeff_oracle_with, EnumerationLimits, EvaluationPoint};
use schurwalk::{Permutation, Rational, Scalar, Signature, Weight};

type Outcome = Result<(bool, String), String>;

fn sf(s: &str) -> SpectralFunction {
    s.parse().unwrap()
}

fn weyl_dim(l: &[i64]) -> Rational {
    let mut d = Rational::one();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            d *= rat(l[i] - l[j] + (j - i) as i64, (j - i) as i64);
        }
    }
    d
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    Permutation::all(n)
        .into_iter()
        .map(|p| (0..n).map(|j| p.image(j)).collect())
        .collect()
}

fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        let (top, rest) = m.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest {
            let k = row[c] / pivot[c];
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= k * y;
            }
        }
    }
    d
}

fn summarize(reports: &[schurwalk::report::Report]) -> (bool, usize) {
    (reports.iter().all(|r| r.pass), reports.len())
}

fn c1_lr() -> Outcome {
    let limits = EnumerationLimits { max_rank: 3, max_boxes: 8 };
    let mut triples = 0;
    for n in 1..=3 {
        let small: Vec<Signature> = (0..=4).flat_map(|k| partitions_of(k, n)).collect();
        for l in &small {
            for m in &small {
                for t in partitions_of(l.size() + m.size(), n) {
                    let a = lr_coeff(l, m, &t).map_err(|e| e.to_string())?;
                    let b = lr_coeff_oracle_with(l, m, &t, limits).map_err(|e| e.to_string())?;
                    if a != b {
                        return Ok((false, format!("c({l},{m};{t}) = {a}, oracle {b}")));
                    }
                    triples += 1;
                }
            }
        }
    }
    // shifted copies agree with their partition representatives
    let l: Signature = "1,-1,-2".parse().unwrap();
    let m: Signature = "2,0,-1".parse().unwrap();
    let t: Signature = "2,-1,-2".parse().unwrap();
    let shifted = lr_coeff(&l, &m, &t).map_err(|e| e.to_string())?;
    let base = lr_coeff(&l.shift(2), &m.shift(1), &t.shift(3)).map_err(|e| e.to_string())?;
    Ok((shifted == base, format!("{triples} triples, exact")))
}

fn c2_schur() -> Outcome {
    let r = schur_consistency(3, 3, 200, 11).map_err(|e| e.to_string())?;
    Ok((r.pass, format!("{} comparisons", r.get("compared").unwrap())))
}

/// Closed forms at `θ = 1` for the four α/β families.
fn closed_form_oracle(fam: &str, x: &Rational, l: &Signature, m: &Signature) -> Rational {
    let n = l.rank() as i32;
    let d: Vec<i64> = m.parts().iter().zip(l.parts()).map(|(a, b)| a - b).collect();
    let up: i64 = d.iter().sum();
    let ratio = weyl_dim(m.parts()) / weyl_dim(l.parts());
    let one = Rational::one();
    let (ok, k, norm) = match fam {
        "beta-" => (d.iter().all(|&v| v == 0 || v == 1), up, (&one + x).pow(-n)),
        "beta+" => (d.iter().all(|&v| v == 0 || v == -1), -up, (&one + x).pow(-n)),
        "alpha-" => (interlaces(l, m).unwrap(), up, (&one - x).pow(n)),
        "alpha+" => (interlaces(m, l).unwrap(), -up, (&one - x).pow(n)),
        _ => unreachable!(),
    };
    if !ok {
        return Rational::zero();
    }
    x.pow(k as i32) * ratio * norm
}

fn c3_closed_forms() -> Outcome {
    let mut count = 0;
    for n in 1..=3 {
        let w = window(n, 3);
        for p in [rat(1, 3), rat(1, 2)] {
            for fam in ["beta+", "beta-", "alpha+", "alpha-"] {
                let f = sf(&format!("{fam}:{p}"));
                let k = TransitionKernel::at_ones(n, &f).map_err(|e| e.to_string())?;
                for l in &w {
                    for m in &w {
                        let t = k.entry(l, m).map_err(|e| e.to_string())?;
                        let c = Scalar::Exact(closed_form_oracle(fam, &p, l, m));
                        if t != c {
                            return Ok((false, format!("{f}: T({l},{m}) = {t}, closed form {c}")));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok((true, format!("{count} entries, exact")))
}

fn c4_semigroup() -> Outcome {
    let finite = ["beta+:1/2", "beta-:1/3", "laurent{0:1/2,1:1/4,2:1/4}", "prod(beta+:1/3,beta-:1/2)"];
    let mut reports = Vec::new();
    for n in 1..=3 {
        let ones = EvaluationPoint::ones(n);
        for a in finite {
            for b in finite {
                reports.push(check_semigroup(&ones, &sf(a), &sf(b), &window(n, 3), 0.0).map_err(|e| e.to_string())?);
            }
        }
    }
    let mut errors = Vec::new();
    for (a, b) in [("alpha+:1/2", "alpha+:1/3"), ("alpha-:1/2", "alpha-:1/2"), ("alpha-:1/3", "beta-:1/2")] {
        let r = check_semigroup(&EvaluationPoint::ones(2), &sf(a), &sf(b), &window(2, 3), 1e-9)
            .map_err(|e| e.to_string())?;
        errors.push(r.get("max_abs_error").unwrap().as_str().unwrap().to_string());
        reports.push(r);
    }
    let (ok, k) = summarize(&reports);
    Ok((ok, format!("{k} pairs; finite pairs exact; α pairs max error [{}]", errors.join(", "))))
}

fn c5_stochastic() -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=3 {
        let w = window(n, 3);
        for f in ["beta+:1/2", "beta-:1/3", "laurent{-1:1/4,0:1/2,1:1/4}", "prod(beta+:1/2,beta-:1/2)"] {
            let r = check_stochastic(&sf(f), &w, 0.0).map_err(|e| e.to_string())?;
            if r.get("max_abs_error").unwrap() != "0" {
                return Ok((false, format!("{f} row sums not exactly 1")));
            }
            reports.push(r);
        }
        for f in ["alpha+:1/2", "alpha-:1/3", "alpha+:1/3"] {
            reports.push(check_stochastic(&sf(f), &w, 1e-9).map_err(|e| e.to_string())?);
        }
        for f in ["gamma+:1", "gamma-:1/2"] {
            reports.push(check_stochastic(&sf(f), &w, 1e-6).map_err(|e| e.to_string())?);
        }
    }
    let (ok, k) = summarize(&reports);
    Ok((ok, format!("{k} family/rank sweeps")))
}

fn c6_star() -> Outcome {
    let mut reports = Vec::new();
    let thetas = [
        EvaluationPoint::ones(2),
        EvaluationPoint::new(vec![rat(1, 1), rat(1, 2)]).unwrap(),
        EvaluationPoint::new(vec![rat(2, 1), rat(1, 3)]).unwrap(),
    ];
    let finite = ["beta+:1/2", "beta-:1/3", "prod(beta+:1/2,beta-:1/3)"];
    for t in &thetas {
        for f in finite {
            reports.push(check_star_window(t, &sf(f), &window(2, 3), &window(2, 3), 0.0).map_err(|e| e.to_string())?);
        }
    }
    for f in finite {
        let w = window(3, 2);
        reports.push(check_star_window(&EvaluationPoint::ones(3), &sf(f), &w, &w, 0.0).map_err(|e| e.to_string())?);
    }
    for f in ["alpha+:1/2", "alpha-:1/3"] {
        let w = window(2, 3);
        reports.push(check_star_window(&EvaluationPoint::ones(2), &sf(f), &w, &w, 1e-9).map_err(|e| e.to_string())?);
    }
    let (ok, k) = summarize(&reports);
    Ok((ok, format!("{k} sweeps")))
}

fn c7_qrw() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for f in ["beta+:1/2", "beta-:1/3", "alpha+:1/2", "alpha-:1/3", "gamma+:1/2", "gamma-:1/2"] {
        for n in 1..=3 {
            let r = check_qrw(&sf(f), n, &window(n, 3), 1e-9).map_err(|e| e.to_string())?;
            let pairing = r.get("pairing").unwrap().as_str().unwrap().to_string();
            ok &= r.pass && pairing == "inverted";
            if n == 3 {
                lines.push(format!("{f}:{pairing}:{}", r.get("max_abs_error").unwrap().as_str().unwrap()));
            }
        }
    }
    let trivial = check_qrw(&SpectralFunction::identity(), 2, &window(2, 2), 1e-9).map_err(|e| e.to_string())?;
    ok &= trivial.get("pairing").unwrap() == "both";
    Ok((ok, lines.join(" ")))
}

fn c8_gamma() -> Outcome {
    let r = check_gamma_limit(&sf("gamma-:1/2"), &window(2, 2), &[16, 64, 256, 1024], 1e-3)
        .map_err(|e| e.to_string())?;
    Ok((r.pass, format!("distances {}", r.get("distances").unwrap())))
}

fn c9_center() -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=3 {
        let w = window(n, if n == 3 { 2 } else { 3 });
        for beta in (0..=3).flat_map(|k| partitions_of(k, n)) {
            let kappa = ClassFunction::normalized_character(&beta);
            reports.push(check_center_window(&kappa, &w, &w).map_err(|e| e.to_string())?);
        }
        let kappa = kappa_of(&sf("beta+:1/2"), n, Truncation::default()).map_err(|e| e.to_string())?;
        reports.push(check_center_window(&kappa, &w, &w).map_err(|e| e.to_string())?);
    }
    let k1 = kappa_of(&sf("beta-:1/2"), 2, Truncation::default()).unwrap();
    let k2 = ClassFunction::normalized_character(&"1,0".parse().unwrap());
    reports.push(check_morphism(&k1, &k2, &window(2, 2)).map_err(|e| e.to_string())?);
    let (ok, k) = summarize(&reports);
    Ok((ok, format!("{k} class functions, exact")))
}

fn c10_torus() -> Outcome {
    let l: Signature = "1,0".parse().unwrap();
    let (lhs, _) = torus_convolution(&l, &l).map_err(|e| e.to_string())?;
    let expect = BTreeMap::from([
        (Weight(vec![2, 0]), 1),
        (Weight(vec![1, 1]), 2),
        (Weight(vec![0, 2]), 1),
    ]);
    if lhs != expect {
        return Ok((false, "square of the defining character".into()));
    }
    let mut rng = <rand_chacha::ChaCha20Rng as rand::SeedableRng>::seed_from_u64(5);
    let mut pairs = 0;
    let mut ok = true;
    for n in 1..=3 {
        let small: Vec<Signature> = (0..=3).flat_map(|k| partitions_of(k, n)).collect();
        let kappa = random_class_function(n, 3, &mut rng).map_err(|e| e.to_string())?;
        for (i, a) in small.iter().enumerate() {
            for (j, b) in small.iter().enumerate() {
                let triples = if i == 0 && j == 0 { 50 } else { 0 };
                let r = check_torus(&kappa, a, b, triples, 17 + n as u64).map_err(|e| e.to_string())?;
                ok &= r.pass;
                pairs += 1;
            }
        }
    }
    Ok((ok, format!("{pairs} convolutions; 150 Weyl and translation triples")))
}

fn c11_doob() -> Outcome {
    let mut count = 0;
    for n in 1..=3 {
        let w = window(n, 3);
        let p = rat(1, 2);
        let k = TransitionKernel::at_ones(n, &sf("beta-:1/2")).unwrap();
        let up = &p / (int(1) + &p);
        let stay = int(1) / (int(1) + &p);
        let bern = |d: i64| match d {
            0 => stay.clone(),
            1 => up.clone(),
            _ => Rational::zero(),
        };
        for l in &w {
            let x = particle_positions(l).positions;
            for m in &w {
                let y = particle_positions(m).positions;
                let mut km = Rational::zero();
                for s in permutations(n) {
                    let mut term = int(perm_sign(&s));
                    for i in 0..n {
                        term *= bern(y[s[i]] - x[i]);
                    }
                    km += term;
                }
                let h = km * weyl_dim(m.parts()) / weyl_dim(l.parts());
                if k.entry(l, m).unwrap() != Scalar::Exact(h.clone()) {
                    return Ok((false, format!("Krawtchouk at ({l},{m})")));
                }
                count += 1;
            }
        }
    }
    // Charlier: Poisson(t) walks, relative 1e-9
    let t = 0.5f64;
    let mut worst = 0.0f64;
    for n in 1..=3 {
        let k = TransitionKernel::at_ones(n, &sf("gamma-:1/2")).unwrap();
        let pois = |d: i64| -> f64 {
            if d < 0 {
                0.0
            } else {
                (-t).exp() * t.powi(d as i32) / (1..=d).map(|v| v as f64).product::<f64>()
            }
        };
        let w = window(n, 3);
        for l in &w {
            let x = particle_positions(l).positions;
            for m in &w {
                let y = particle_positions(m).positions;
                let mat = (0..n).map(|i| (0..n).map(|j| pois(y[j] - x[i])).collect()).collect();
                let h = det_f64(mat) * (schurwalk::scalar::rational_to_f64(&(weyl_dim(m.parts()) / weyl_dim(l.parts()))));
                let e = k.entry(l, m).unwrap().to_f64();
                if e != 0.0 || h != 0.0 {
                    worst = worst.max((e - h).abs() / e.abs().max(h.abs()));
                }
                count += 1;
            }
        }
    }
    let lib = check_doob(&sf("beta-:1/3"), 3, &window(3, 2)).map_err(|e| e.to_string())?;
    Ok((worst <= 1e-9 && lib.pass, format!("{count} pairs; Krawtchouk exact; Charlier max rel {worst:e}")))
}

fn c12_monte_carlo() -> Outcome {
    let mut worst = 0.0f64;
    let mut ok = true;
    for n in 1..=2 {
        for f in ["beta+:1/2", "beta-:1/2", "alpha+:1/2", "alpha-:1/2", "gamma+:1/2", "gamma-:1/2"] {
            let lambda = Signature::new(vec![1; n]).unwrap();
            let r = empirical_check(&lambda, &sf(f), 100_000, 2024, 0.02).map_err(|e| e.to_string())?;
            worst = worst.max(r.get("tv").unwrap().as_f64().unwrap());
            ok &= r.pass;
        }
    }
    let r = empirical_check(&"0,0".parse().unwrap(), &SpectralFunction::identity(), 10_000, 1, 0.0)
        .map_err(|e| e.to_string())?;
    ok &= r.get("tv").unwrap().as_f64() == Some(0.0);
    Ok((ok, format!("max TV {worst:.4}")))
}

/// Constant term of the Weyl-integration display, expanded over `(σ, τ)`.
fn weyl_integral_oracle(f: &dyn Fn(i64) -> Rational, f1: &Rational, l: &Signature, m: &Signature) -> Rational {
    let n = l.rank();
    let (lp, mp) = (l.parts(), m.parts());
    let mut total = Rational::zero();
    let perms = permutations(n);
    for s in &perms {
        let s_inv = inverse(s);
        for t in &perms {
            let t_inv = inverse(t);
            let mut term = int(perm_sign(s) * perm_sign(t));
            for v in 0..n {
                let a = lp[s_inv[v]] - s_inv[v] as i64;
                let b = mp[t_inv[v]] - t_inv[v] as i64;
                term *= f(b - a);
                if term.is_zero() {
                    break;
                }
            }
            total += term;
        }
    }
    let fact: i64 = (1..=n as i64).product();
    total * weyl_dim(mp) / weyl_dim(lp) / int(fact) / f1.pow(n as i32)
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (j, &i) in p.iter().enumerate() {
        inv[i] = j;
    }
    inv
}

fn c13_weyl_oracle() -> Outcome {
    let mut count = 0;
    let one = Rational::one();
    for (fam, x) in [("alpha+", rat(1, 2)), ("beta+", rat(1, 2)), ("beta-", rat(1, 3)), ("alpha+", rat(1, 3))] {
        let coeff: Box<dyn Fn(i64) -> Rational> = match fam {
            "alpha+" => {
                let q = x.clone();
                Box::new(move |m| if m >= 0 { q.pow(m as i32) } else { Rational::zero() })
            }
            "beta+" => {
                let p = x.clone();
                Box::new(move |m| match m {
                    0 => Rational::one(),
                    1 => p.clone(),
                    _ => Rational::zero(),
                })
            }
            _ => {
                let p = x.clone();
                Box::new(move |m| match m {
                    0 => Rational::one(),
                    -1 => p.clone(),
                    _ => Rational::zero(),
                })
            }
        };
        let f1 = match fam {
            "alpha+" => (&one - &x).recip(),
            _ => &one + &x,
        };
        let f = sf(&format!("{fam}:{x}"));
        for n in 1..=3 {
            let kappa = kappa_of(&f, n, Truncation::default()).map_err(|e| e.to_string())?;
            let w = window(n, 2);
            for l in &w {
                for m in &w {
                    let q = qn_entry(&kappa, l, m).map_err(|e| e.to_string())?;
                    let o = weyl_integral_oracle(&*coeff, &f1, l, m);
                    let exact = Scalar::Exact(o.clone()) == q;
                    let close = (q.to_f64() - schurwalk::scalar::rational_to_f64(&o)).abs() <= 1e-9;
                    if !(exact || (fam == "alpha+" && close)) {
                        return Ok((false, format!("{f}: Q({l},{m}) = {q}, oracle {o}")));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok((true, format!("{count} entries")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("LR oracle equivalence", c1_lr),
        ("Schur consistency", c2_schur),
        ("closed-form kernel entries", c3_closed_forms),
        ("semigroup", c4_semigroup),
        ("stochasticity at θ = 1", c5_stochastic),
        ("tensor-product formula", c6_star),
        ("quantum walk restriction", c7_qrw),
        ("exponential limit", c8_gamma),
        ("center intertwining", c9_center),
        ("torus kernel", c10_torus),
        ("Doob transform", c11_doob),
        ("Monte Carlo", c12_monte_carlo),
        ("Weyl integration oracle", c13_weyl_oracle),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} [{}] {name}: {detail} ({:.2}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
