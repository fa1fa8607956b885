use std::collections::BTreeMap;

use super::weights::expand_unchecked;
use super::EnumerationLimits;
use crate::error::{arg, Error, Result};
use crate::signature::{Signature, Weight};

/// A Littlewood-Richardson tableau of skew shape `τ∖λ` (partitions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LRTableau {
    pub outer: Signature,
    pub inner: Signature,
    /// `rows[r]` holds the entries of row `r`, left to right.
    pub rows: Vec<Vec<u32>>,
}

impl LRTableau {
    /// Rows read right to left, top to bottom.
    pub fn reading_word(&self) -> Vec<u32> {
        self.rows
            .iter()
            .flat_map(|row| row.iter().rev().copied())
            .collect()
    }

    pub fn content(&self) -> Vec<u64> {
        let mut c = vec![0; self.outer.rank()];
        for &v in self.rows.iter().flatten() {
            c[v as usize - 1] += 1;
        }
        c
    }
}

fn same_rank(sigs: &[&Signature]) -> Result<()> {
    let n = sigs[0].rank();
    if sigs.iter().any(|s| s.rank() != n) {
        return arg("signatures have different ranks");
    }
    Ok(())
}

/// Translates `(λ, μ, τ)` to partitions `(λ − a, μ − b, τ − a − b)`, with `a = λ_n`
/// and `b = μ_n` when `minimal`, otherwise only as far as needed to clear negatives.
/// Returns `None` when the shifted triple can't support a tableau.
fn normalize(
    lambda: &Signature,
    mu: &Signature,
    tau: &Signature,
    minimal: bool,
) -> Option<(Vec<i64>, Vec<i64>, Vec<i64>)> {
    let (l, m) = if minimal {
        (lambda.last(), mu.last())
    } else {
        (lambda.last().min(0), mu.last().min(0))
    };
    let lp: Vec<i64> = lambda.parts().iter().map(|x| x - l).collect();
    let mp: Vec<i64> = mu.parts().iter().map(|x| x - m).collect();
    let tp: Vec<i64> = tau.parts().iter().map(|x| x - l - m).collect();
    let fits = tp.iter().zip(&lp).all(|(t, l)| t >= l);
    let sized = tp.iter().sum::<i64>() == lp.iter().sum::<i64>() + mp.iter().sum::<i64>();
    (fits && sized).then_some((lp, mp, tp))
}

/// Backtracking over fillings of `outer∖inner` with content `content`.
/// Calls `visit` on every complete LR tableau.
fn enumerate(inner: &[i64], content: &[i64], outer: &[i64], visit: &mut dyn FnMut(&[Vec<u32>])) {
    let n = outer.len();
    let mut rows: Vec<Vec<u32>> = (0..n)
        .map(|r| vec![0; (outer[r] - inner[r]) as usize])
        .collect();
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..rows[r].len()).rev().map(move |c| (r, c)))
        .collect();
    let mut count = vec![0i64; n + 1];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        inner: &[i64],
        content: &[i64],
        rows: &mut Vec<Vec<u32>>,
        count: &mut [i64],
        visit: &mut dyn FnMut(&[Vec<u32>]),
    ) {
        if k == cells.len() {
            visit(rows);
            return;
        }
        let (r, c) = cells[k];
        let col = inner[r] + c as i64;
        // right neighbour is already filled (rows go right to left)
        let max_v = if c + 1 < rows[r].len() {
            rows[r][c + 1]
        } else {
            (r + 1) as u32
        };
        let min_v = if r > 0 && col >= inner[r - 1] {
            rows[r - 1][(col - inner[r - 1]) as usize] + 1
        } else {
            1
        };
        for v in min_v..=max_v.min(content.len() as u32) {
            let vi = v as usize;
            if count[vi] >= content[vi - 1] {
                continue;
            }
            if vi > 1 && count[vi] + 1 > count[vi - 1] {
                continue;
            }
            count[vi] += 1;
            rows[r][c] = v;
            rec(k + 1, cells, inner, content, rows, count, visit);
            count[vi] -= 1;
        }
        rows[r][c] = 0;
    }

    rec(0, &cells, inner, content, &mut rows, &mut count, visit);
}

/// Littlewood-Richardson coefficient `c_{λμ}^τ`, the multiplicity of `V_τ` in `V_λ ⊗ V_μ`.
///
/// Negative parts are handled by translating each signature to a partition.
pub fn lr_coeff(lambda: &Signature, mu: &Signature, tau: &Signature) -> Result<u64> {
    same_rank(&[lambda, mu, tau])?;
    let Some((l, m, t)) = normalize(lambda, mu, tau, true) else {
        return Ok(0);
    };
    let mut total = 0;
    enumerate(&l, &m, &t, &mut |_| total += 1);
    Ok(total)
}

/// Every LR tableau counted by [`lr_coeff`]. Partitions are used as given;
/// signatures with negative parts are translated first.
pub fn lr_tableaux(lambda: &Signature, mu: &Signature, tau: &Signature) -> Result<Vec<LRTableau>> {
    same_rank(&[lambda, mu, tau])?;
    let Some((l, m, t)) = normalize(lambda, mu, tau, false) else {
        return Ok(Vec::new());
    };
    let (outer, inner) = (Signature::new_unchecked(t.clone()), Signature::new_unchecked(l.clone()));
    let mut out = Vec::new();
    enumerate(&l, &m, &t, &mut |rows| {
        out.push(LRTableau {
            outer: outer.clone(),
            inner: inner.clone(),
            rows: rows.to_vec(),
        })
    });
    Ok(out)
}

/// Decomposition `s_λ s_μ = Σ_τ c_{λμ}^τ s_τ`, nonzero terms only.
pub fn lr_product(lambda: &Signature, mu: &Signature) -> Result<BTreeMap<Signature, u64>> {
    same_rank(&[lambda, mu])?;
    let n = lambda.rank();
    let shift = lambda.last() + mu.last();
    let l: Vec<i64> = lambda.parts().iter().map(|x| x - lambda.last()).collect();
    let m: Vec<i64> = mu.parts().iter().map(|x| x - mu.last()).collect();
    let target: i64 = l.iter().sum::<i64>() + m.iter().sum::<i64>();
    let width = m[0];

    // candidates: l ⊆ t ⊆ l + m_1, |t| = target
    fn rec(i: usize, l: &[i64], width: i64, rem: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let n = l.len();
        if i == n {
            if rem == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let cap = if i == 0 { l[0] + width } else { prefix[i - 1].min(l[i] + width) };
        for v in l[i]..=cap {
            if v > rem {
                break;
            }
            prefix.push(v);
            rec(i + 1, l, width, rem - v, prefix, out);
            prefix.pop();
        }
    }
    let mut candidates = Vec::new();
    rec(0, &l, width, target, &mut Vec::with_capacity(n), &mut candidates);

    let mut out = BTreeMap::new();
    for t in candidates {
        let mut c = 0;
        enumerate(&l, &m, &t, &mut |_| c += 1);
        if c > 0 {
            let tau = Signature::new_unchecked(t.iter().map(|x| x + shift).collect());
            out.insert(tau, c);
        }
    }
    Ok(out)
}

/// `s_λ s_μ` in the Schur basis computed through weight multisets: convolve the
/// two weight expansions, then repeatedly strip the highest remaining weight's
/// full character.
pub fn lr_product_oracle(
    lambda: &Signature,
    mu: &Signature,
    limits: EnumerationLimits,
) -> Result<BTreeMap<Signature, u64>> {
    same_rank(&[lambda, mu])?;
    let n = lambda.rank();
    if n > limits.max_rank {
        return Err(Error::Resource(format!(
            "oracle rank {n} exceeds the bound {}",
            limits.max_rank
        )));
    }
    let (l, cl) = lambda.to_partition();
    let (m, cm) = mu.to_partition();
    let boxes = l.size() + m.size();
    if boxes > limits.max_boxes {
        return Err(Error::Resource(format!(
            "oracle needs {boxes} boxes, bound is {}",
            limits.max_boxes
        )));
    }
    let (el, em) = (expand_unchecked(&l), expand_unchecked(&m));
    let mut product: BTreeMap<Weight, i64> = BTreeMap::new();
    for (x, a) in &el.terms {
        for (y, b) in &em.terms {
            *product.entry(x.add(y)).or_default() += (a * b) as i64;
        }
    }
    let mut out = BTreeMap::new();
    loop {
        product.retain(|_, c| *c != 0);
        // the lexicographically largest weight is dominant and a highest weight
        let Some((top, &c)) = product.iter().next_back() else {
            break;
        };
        let tau = Signature::new(top.0.clone())
            .map_err(|_| Error::Domain("monomial peel reached a non-dominant weight".into()))?;
        if c < 0 {
            return Err(Error::Domain("negative Schur coefficient in monomial peel".into()));
        }
        for (x, k) in &expand_unchecked(&tau).terms {
            *product.entry(x.clone()).or_default() -= c * *k as i64;
        }
        out.insert(tau.shift(-cl - cm), c as u64);
    }
    Ok(out)
}

/// Independent evaluation of `c_{λμ}^τ` via [`lr_product_oracle`] under
/// [`EnumerationLimits::ORACLE`].
pub fn lr_coeff_oracle(lambda: &Signature, mu: &Signature, tau: &Signature) -> Result<u64> {
    lr_coeff_oracle_with(lambda, mu, tau, EnumerationLimits::ORACLE)
}

pub fn lr_coeff_oracle_with(
    lambda: &Signature,
    mu: &Signature,
    tau: &Signature,
    limits: EnumerationLimits,
) -> Result<u64> {
    same_rank(&[lambda, mu, tau])?;
    if tau.size() != lambda.size() + mu.size() {
        return Ok(0);
    }
    Ok(lr_product_oracle(lambda, mu, limits)?
        .get(tau)
        .copied()
        .unwrap_or(0))
}

/// Horizontal strips: `τ` with `λ ≺ τ` and `|τ| − |λ| = k`.
pub fn pieri_row(lambda: &Signature, k: u64) -> Vec<Signature> {
    let l = lambda.parts();
    let n = l.len();
    fn rec(i: usize, l: &[i64], rem: i64, prefix: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if i == l.len() {
            if rem == 0 {
                out.push(Signature::new_unchecked(prefix.clone()));
            }
            return;
        }
        let cap = if i == 0 { l[0] + rem } else { l[i - 1].min(l[i] + rem) };
        for v in l[i]..=cap {
            prefix.push(v);
            rec(i + 1, l, rem - (v - l[i]), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, l, k as i64, &mut Vec::with_capacity(n), &mut out);
    out.sort();
    out
}

/// Vertical strips: `τ − λ ∈ {0,1}^n` with `k` ones. Empty when `k > n`.
pub fn pieri_column(lambda: &Signature, k: u64) -> Vec<Signature> {
    let n = lambda.rank();
    let mut out = Vec::new();
    if k as usize > n {
        return out;
    }
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as u64 != k {
            continue;
        }
        let parts: Vec<i64> = (0..n)
            .map(|i| lambda.parts()[i] + i64::from(mask >> i & 1 == 1))
            .collect();
        if let Ok(tau) = Signature::new(parts) {
            out.push(tau);
        }
    }
    out.sort();
    out
}

/// `c_{λσν}^τ = Σ_μ c_{λσ}^μ c_{μν}^τ`.
pub fn triple_coeff(lambda: &Signature, sigma: &Signature, nu: &Signature, tau: &Signature) -> Result<u64> {
    same_rank(&[lambda, sigma, nu, tau])?;
    if tau.size() != lambda.size() + sigma.size() + nu.size() {
        return Ok(0);
    }
    let mut total = 0;
    for (mu, c) in lr_product(lambda, sigma)? {
        total += c * lr_coeff(&mu, nu, tau)?;
    }
    Ok(total)
}
