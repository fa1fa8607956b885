use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::class_function::ClassFunction;
use crate::error::{arg, Result};
use crate::report::{Deviation, Report};
use crate::scalar::{int, Scalar};
use crate::signature::{weyl_act, Permutation, Signature, Weight};
use crate::symfunc::{expand_unchecked, lr_product, weight_multiplicity};

/// `P_n(κ)(x,y) = n_κ(y − x) = Σ_β κ̂(β) n_β(y − x)`.
pub fn pn_entry(kappa: &ClassFunction, x: &Weight, y: &Weight) -> Result<Scalar> {
    if x.rank() != kappa.rank() || y.rank() != kappa.rank() {
        return arg(format!("weights must have rank {}", kappa.rank()));
    }
    let w = y.sub(x);
    let mut s = Scalar::zero();
    for (beta, v) in kappa.terms_of_size(w.size()) {
        let m = weight_multiplicity(beta, &w)?;
        if m != 0 {
            s = s + v * &Scalar::Exact(int(m as i64));
        }
    }
    Ok(s)
}

/// Increment law `n_κ` of the torus walk.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusStep {
    pub law: BTreeMap<Weight, Scalar>,
    pub tail: f64,
}

impl TorusStep {
    pub fn of(kappa: &ClassFunction) -> Self {
        let mut law: BTreeMap<Weight, Scalar> = BTreeMap::new();
        for (beta, v) in kappa.terms() {
            for (w, m) in expand_unchecked(beta).terms {
                let e = law.entry(w).or_insert_with(Scalar::zero);
                *e = &*e + &(v * &Scalar::Exact(int(m as i64)));
            }
        }
        law.retain(|_, v| !v.is_zero());
        TorusStep {
            law,
            tail: kappa.tail(),
        }
    }

    pub fn get(&self, w: &Weight) -> Scalar {
        self.law.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn mass(&self) -> Scalar {
        self.law.values().cloned().sum()
    }

    /// Values are constant on coordinate-permutation orbits.
    pub fn is_symmetric(&self) -> bool {
        self.law
            .iter()
            .all(|(w, v)| self.get(&Weight(w.dominant().parts().to_vec())) == *v)
    }
}

/// Weights of `V_λ ⊗ V_μ` two ways: LR-expanded, and as a convolution.
pub fn torus_convolution(
    lambda: &Signature,
    mu: &Signature,
) -> Result<(BTreeMap<Weight, u64>, BTreeMap<Weight, u64>)> {
    let mut lhs: BTreeMap<Weight, u64> = BTreeMap::new();
    for (tau, c) in lr_product(lambda, mu)? {
        for (w, m) in expand_unchecked(&tau).terms {
            *lhs.entry(w).or_default() += c * m;
        }
    }
    let (a, b) = (expand_unchecked(lambda), expand_unchecked(mu));
    let mut rhs: BTreeMap<Weight, u64> = BTreeMap::new();
    for (x, m) in &a.terms {
        for (y, k) in &b.terms {
            *rhs.entry(x.add(y)).or_default() += m * k;
        }
    }
    Ok((lhs, rhs))
}

fn random_weight(rng: &mut ChaCha20Rng, n: usize, r: i64) -> Weight {
    Weight((0..n).map(|_| rng.random_range(-r..=r)).collect())
}

/// Convolution morphism for `(λ, μ)`, plus Weyl and translation invariance
/// of `P_n(κ)` on `triples` seeded random points.
pub fn check_torus(
    kappa: &ClassFunction,
    lambda: &Signature,
    mu: &Signature,
    triples: usize,
    seed: u64,
) -> Result<Report> {
    let n = kappa.rank();
    let mut conv = Deviation::new();
    let (lhs, rhs) = torus_convolution(lambda, mu)?;
    conv.require(lhs == rhs, || format!("convolution differs for ({lambda},{mu})"));

    let support: Vec<Weight> = TorusStep::of(kappa).law.into_keys().collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut weyl = Deviation::new();
    let mut translation = Deviation::new();
    for _ in 0..triples {
        let x = random_weight(&mut rng, n, 3);
        let step = match support.choose(&mut rng) {
            Some(w) if rng.random_bool(0.75) => w.clone(),
            _ => random_weight(&mut rng, n, 2),
        };
        let y = x.add(&step);
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut rng);
        let sigma = Permutation::new(images)?;
        let base = pn_entry(kappa, &x, &y)?;
        let moved = pn_entry(kappa, &weyl_act(&sigma, &x)?, &weyl_act(&sigma, &y)?)?;
        weyl.record(|| format!("Weyl at ({x:?},{y:?})"), &moved, &base, 0.0);
        let z = random_weight(&mut rng, n, 5);
        let shifted = pn_entry(kappa, &x.add(&z), &y.add(&z))?;
        translation.record(|| format!("translation at ({x:?},{y:?})"), &shifted, &base, 0.0);
    }
    let weyl_pass = weyl.passed();
    let translation_pass = translation.passed();
    let conv_pass = conv.passed();
    Ok(conv
        .merge(weyl)
        .merge(translation)
        .into_report("torus")
        .with("n", n)
        .with("convolution", conv_pass)
        .with("weyl", weyl_pass)
        .with("translation", translation_pass)
        .with("triples", triples)
        .with("seed", seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{kappa_of, Truncation};
    use crate::scalar::rat;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn beta_plus_rank_one() {
        let k = kappa_of(&"beta+:1/2".parse().unwrap(), 1, Truncation::default()).unwrap();
        assert_eq!(pn_entry(&k, &w(&[4]), &w(&[5])).unwrap(), Scalar::Exact(rat(1, 3)));
        assert_eq!(pn_entry(&k, &w(&[4]), &w(&[4])).unwrap(), Scalar::Exact(rat(2, 3)));
        assert!(pn_entry(&k, &w(&[4]), &w(&[6])).unwrap().is_zero());
    }

    #[test]
    fn beta_plus_factorizes() {
        let k = kappa_of(&"beta+:1/2".parse().unwrap(), 2, Truncation::default()).unwrap();
        let step = TorusStep::of(&k);
        let one = [rat(2, 3), rat(1, 3)];
        for a in 0..2 {
            for b in 0..2 {
                let expect = &one[a] * &one[b];
                assert_eq!(step.get(&w(&[a as i64, b as i64])), Scalar::Exact(expect));
            }
        }
        assert_eq!(step.mass(), Scalar::one());
        assert!(step.is_symmetric());
    }

    #[test]
    fn square_of_defining_character() {
        let l: Signature = "1,0".parse().unwrap();
        let (lhs, rhs) = torus_convolution(&l, &l).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, BTreeMap::from([(w(&[2, 0]), 1), (w(&[1, 1]), 2), (w(&[0, 2]), 1)]));
    }

    #[test]
    fn invariances() {
        let k = ClassFunction::character(&"2,1,0".parse().unwrap());
        let r = check_torus(&k, &"1,0,0".parse().unwrap(), &"1,1,0".parse().unwrap(), 50, 3).unwrap();
        assert!(r.pass, "{r}");
    }
}
