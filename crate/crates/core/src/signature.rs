//! Signatures, weights, interlacing, Weyl-group action and the dimension formula.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::scalar::{int, Rational};

/// Nonincreasing integer `n`-tuple: a highest weight of `U(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "Vec<i64>")]
pub struct Signature(Vec<i64>);

impl Signature {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.is_empty() {
            return arg("a signature needs at least one part");
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return arg(format!("parts {parts:?} are not nonincreasing"));
        }
        Ok(Signature(parts))
    }

    pub(crate) fn new_unchecked(parts: Vec<i64>) -> Self {
        debug_assert!(!parts.is_empty() && parts.windows(2).all(|w| w[0] >= w[1]));
        Signature(parts)
    }

    pub fn zero(n: usize) -> Self {
        Signature(vec![0; n])
    }

    /// `k 0^{n-1}`.
    pub fn row(k: i64, n: usize) -> Self {
        let mut parts = vec![0; n];
        parts[0] = k;
        Signature::new(parts).expect("k must be nonnegative")
    }

    /// `1^k 0^{n-k}`.
    pub fn column(k: usize, n: usize) -> Self {
        assert!(k <= n);
        Signature((0..n).map(|i| i64::from(i < k)).collect())
    }

    /// `0^{n-1} (-k)`.
    pub fn neg_row(k: i64, n: usize) -> Self {
        let mut parts = vec![0; n];
        parts[n - 1] = -k;
        Signature::new(parts).expect("k must be nonnegative")
    }

    /// `0^{n-k} (-1)^k`.
    pub fn neg_column(k: usize, n: usize) -> Self {
        assert!(k <= n);
        Signature((0..n).map(|i| -i64::from(i >= n - k)).collect())
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Sum of parts (may be negative).
    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn last(&self) -> i64 {
        *self.0.last().unwrap()
    }

    /// Adds `c` to every part.
    pub fn shift(&self, c: i64) -> Signature {
        Signature(self.0.iter().map(|x| x + c).collect())
    }

    /// Translates so the last part is zero; returns the partition and the constant added.
    pub fn to_partition(&self) -> (Signature, i64) {
        let c = -self.last();
        (self.shift(c), c)
    }

    pub fn is_partition(&self) -> bool {
        self.last() >= 0
    }

    /// Sum of `|parts|` - the size used when bounding enumerations over signatures.
    pub fn abs_size(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn as_weight(&self) -> Weight {
        Weight(self.0.clone())
    }
}

impl From<Signature> for Vec<i64> {
    fn from(s: Signature) -> Self {
        s.0
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<i64>::deserialize(d)?;
        Signature::new(parts).map_err(serde::de::Error::custom)
    }
}

fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in {s:?}")))
        })
        .collect()
}

fn write_int_list(f: &mut fmt::Formatter<'_>, xs: &[i64]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Signature::new(parse_int_list(s)?)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_int_list(f, &self.0)
    }
}

/// Point of the weight lattice `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank());
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank());
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Coordinates sorted into nonincreasing (dominant) order.
    pub fn dominant(&self) -> Signature {
        let mut c = self.0.clone();
        c.sort_unstable_by(|a, b| b.cmp(a));
        Signature(c)
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(Weight(parse_int_list(s)?))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_int_list(f, &self.0)
    }
}

/// Permutation of `{0..n}`; `images[j]` is the image of `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return arg(format!("{images:?} is not a permutation"));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Builds a permutation of `{0..n}` from one cycle written with 1-based labels.
    pub fn cycle(n: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for (k, &a) in cycle.iter().enumerate() {
            let b = cycle[(k + 1) % cycle.len()];
            if a == 0 || b == 0 || a > n || b > n {
                return arg(format!("cycle label out of range 1..={n}"));
            }
            images[a - 1] = b - 1;
        }
        Permutation::new(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (j, &i) in self.0.iter().enumerate() {
            inv[i] = j;
        }
        Permutation(inv)
    }

    pub fn sign(&self) -> i64 {
        let mut seen = vec![false; self.0.len()];
        let mut sign = 1;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.0[j];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// All `n!` permutations in lexicographic order of their image vectors.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        out
    }
}

/// `μ_1 ≥ λ_1 ≥ μ_2 ≥ λ_2 ≥ … ≥ μ_n ≥ λ_n`.
pub fn interlaces(lower: &Signature, upper: &Signature) -> Result<bool> {
    if lower.rank() != upper.rank() {
        return arg(format!(
            "interlacing needs equal lengths, got {} and {}",
            lower.rank(),
            upper.rank()
        ));
    }
    let (l, u) = (lower.parts(), upper.parts());
    Ok((0..l.len()).all(|i| u[i] >= l[i] && (i + 1 == l.len() || l[i] >= u[i + 1])))
}

/// `dim λ = ∏_{i<j} (λ_i − i − λ_j + j)/(j − i)`.
pub fn dimension(lambda: &Signature) -> Rational {
    let p = lambda.parts();
    let n = p.len() as i64;
    let mut num = int(1);
    let mut den = int(1);
    for i in 0..n {
        for j in i + 1..n {
            num *= int(p[i as usize] - i - p[j as usize] + j);
            den *= int(j - i);
        }
    }
    let d = num / den;
    debug_assert!(d.is_integer());
    d
}

/// Coordinate permutation: the entry at position `j` moves to position `σ(j)`.
pub fn weyl_act(sigma: &Permutation, x: &Weight) -> Result<Weight> {
    if sigma.len() != x.rank() {
        return arg("permutation and weight have different lengths");
    }
    let mut out = vec![0; x.rank()];
    for (j, &xj) in x.coords().iter().enumerate() {
        out[sigma.image(j)] = xj;
    }
    Ok(Weight(out))
}

/// Every signature of length `n` with all parts in `[lo, hi]`, in lexicographic order.
pub fn signatures_in_box(n: usize, lo: i64, hi: i64) -> Vec<Signature> {
    fn rec(n: usize, lo: i64, cap: i64, prefix: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if prefix.len() == n {
            out.push(Signature(prefix.clone()));
            return;
        }
        for v in lo..=cap {
            prefix.push(v);
            rec(n, lo, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 && lo <= hi {
        rec(n, lo, hi, &mut Vec::with_capacity(n), &mut out);
    }
    out.sort();
    out
}

/// Default verification window: parts in `[-w, w]`.
pub fn window(n: usize, w: i64) -> Vec<Signature> {
    signatures_in_box(n, -w, w)
}

/// Partitions of length `n` (trailing zeros allowed) with exactly `size` boxes.
pub fn partitions_of(size: i64, n: usize) -> Vec<Signature> {
    fn rec(rem: i64, cap: i64, n: usize, prefix: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if prefix.len() == n {
            if rem == 0 {
                out.push(Signature(prefix.clone()));
            }
            return;
        }
        let slots = (n - prefix.len()) as i64;
        for v in (0..=cap.min(rem)).rev() {
            if v * slots < rem {
                break;
            }
            prefix.push(v);
            rec(rem - v, v, n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if size >= 0 && n > 0 {
        rec(size, size, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Signatures of length `n` with `Σ|λ_i| ≤ bound`.
pub fn signatures_with_abs_size(n: usize, bound: i64) -> Vec<Signature> {
    signatures_in_box(n, -bound, bound)
        .into_iter()
        .filter(|s| s.abs_size() <= bound)
        .collect()
}
