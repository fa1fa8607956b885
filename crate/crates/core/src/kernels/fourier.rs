use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::spectral::{SpectralFunction, Support};
use crate::scalar::Rational;

/// Laurent coefficients `f(m)` of a spectral function, memoized.
///
/// Products are convolved lazily; every partial product in the chain keeps its
/// own cache, so repeated determinant entries cost one lookup.
#[derive(Debug)]
pub struct FourierSeq {
    f: SpectralFunction,
    support: Support,
    /// For products: the suffix products `F_i ⋯ F_k` for `i ≥ 1`.
    tail: Option<Box<FourierSeq>>,
    head: Option<Box<FourierSeq>>,
    cache: RwLock<HashMap<i64, Rational>>,
}

fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

impl FourierSeq {
    pub fn new(f: &SpectralFunction) -> Self {
        let (head, tail) = match f {
            SpectralFunction::Product(fs) if fs.len() > 1 => {
                let rest = if fs.len() == 2 {
                    fs[1].clone()
                } else {
                    SpectralFunction::Product(fs[1..].to_vec())
                };
                (
                    Some(Box::new(FourierSeq::new(&fs[0]))),
                    Some(Box::new(FourierSeq::new(&rest))),
                )
            }
            _ => (None, None),
        };
        FourierSeq {
            f: f.clone(),
            support: f.support(),
            head,
            tail,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn function(&self) -> &SpectralFunction {
        &self.f
    }

    pub fn support(&self) -> Support {
        self.support
    }

    /// `f(m)`: the `z^m` coefficient of `F`.
    pub fn coeff(&self, m: i64) -> Rational {
        if !self.support.contains(m) {
            return Rational::zero();
        }
        if let Some(v) = self.cache.read().unwrap().get(&m) {
            return v.clone();
        }
        let v = self.compute(m);
        self.cache.write().unwrap().insert(m, v.clone());
        v
    }

    fn compute(&self, m: i64) -> Rational {
        use SpectralFunction::*;
        match &self.f {
            AlphaPlus(q) => q.pow(m as i32),
            AlphaMinus(q) => q.pow(-m as i32),
            BetaPlus(p) | BetaMinus(p) => {
                if m == 0 {
                    Rational::one()
                } else {
                    p.clone()
                }
            }
            GammaPlus(t) => t.pow(m as i32) / Rational::from_integer(factorial(m as u64)),
            GammaMinus(t) => t.pow(-m as i32) / Rational::from_integer(factorial((-m) as u64)),
            Laurent(c) => c.get(&m).cloned().unwrap_or_else(Rational::zero),
            Product(fs) if fs.len() == 1 => FourierSeq::new(&fs[0]).coeff(m),
            Product(_) => {
                let (g, h) = (self.head.as_ref().unwrap(), self.tail.as_ref().unwrap());
                let (gs, hs) = (g.support(), h.support());
                // k ranges over supp(g) ∩ (m − supp(h)); finite since both
                // infinite sides point the same way.
                let lo = match (gs.lo, hs.hi) {
                    (Some(a), Some(b)) => a.max(m - b),
                    (Some(a), None) => a,
                    (None, Some(b)) => m - b,
                    (None, None) => unreachable!("two-sided products are rejected"),
                };
                let hi = match (gs.hi, hs.lo) {
                    (Some(a), Some(b)) => a.min(m - b),
                    (Some(a), None) => a,
                    (None, Some(b)) => m - b,
                    (None, None) => unreachable!("two-sided products are rejected"),
                };
                let mut acc = Rational::zero();
                for k in lo..=hi {
                    let a = g.coeff(k);
                    if !a.is_zero() {
                        acc += a * h.coeff(m - k);
                    }
                }
                acc
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn seq(s: &str) -> FourierSeq {
        FourierSeq::new(&s.parse().unwrap())
    }

    #[test]
    fn named_coefficients() {
        let b = seq("beta+:1/3");
        assert_eq!((b.coeff(0), b.coeff(1), b.coeff(2)), (int(1), rat(1, 3), int(0)));
        let a = seq("alpha+:1/2");
        assert_eq!((a.coeff(3), a.coeff(-1)), (rat(1, 8), int(0)));
        let a = seq("alpha-:1/2");
        assert_eq!((a.coeff(-2), a.coeff(1)), (rat(1, 4), int(0)));
        let g = seq("gamma-:2");
        assert_eq!(g.coeff(-3), rat(8, 6));
        assert_eq!(g.coeff(1), int(0));
    }

    #[test]
    fn product_coefficients() {
        let f = seq("prod(beta+:1/2,beta+:1/3)");
        assert_eq!(f.coeff(1), rat(5, 6));
        assert_eq!(f.coeff(2), rat(1, 6));
        assert_eq!(f.coeff(3), int(0));
        // (1 − z/2)^{-1}(1 + z/3): f(m) = 2^{-m} + 2^{-(m-1)}/3
        let g = seq("prod(alpha+:1/2,beta+:1/3)");
        assert_eq!(g.coeff(0), int(1));
        assert_eq!(g.coeff(2), rat(1, 4) + rat(1, 6));
        // (1 − q/z)^{-1}(1 − r/z)^{-1}
        let h = seq("prod(alpha-:1/2,alpha-:1/3)");
        assert_eq!(h.coeff(-1), rat(5, 6));
        assert_eq!(h.coeff(-2), rat(1, 4) + rat(1, 6) + rat(1, 9));
    }

    #[test]
    fn mixed_directions_converge() {
        // (1 + z/2)(1 − 1/(3z))^{-1}: f(1) = 1/2, f(0) = 1 + 1/6, f(-1) = 1/3 + 1/18
        let f = seq("prod(alpha-:1/3,beta+:1/2)");
        assert_eq!(f.coeff(1), rat(1, 2));
        assert_eq!(f.coeff(0), rat(7, 6));
        assert_eq!(f.coeff(-1), rat(7, 18));
        assert_eq!(f.coeff(2), int(0));
    }
}
