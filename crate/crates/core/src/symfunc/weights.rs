use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::EnumerationLimits;
use crate::error::{arg, Error, Result};
use crate::signature::{Signature, Weight};

/// Weight multiset of `V_λ`: weight `x` ↦ multiplicity `n_λ(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightExpansion {
    pub lambda: Signature,
    pub terms: BTreeMap<Weight, u64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    x: Weight,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    lambda: Signature,
    terms: Vec<TermJson>,
}

impl WeightExpansion {
    pub fn get(&self, x: &Weight) -> u64 {
        self.terms.get(x).copied().unwrap_or(0)
    }

    /// Should equal `dim λ`.
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = ExpansionJson {
            lambda: self.lambda.clone(),
            terms: self
                .terms
                .iter()
                .map(|(x, &mult)| TermJson { x: x.clone(), mult })
                .collect(),
        };
        serde_json::to_value(j).expect("expansion serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: ExpansionJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(WeightExpansion {
            lambda: j.lambda,
            terms: j.terms.into_iter().map(|t| (t.x, t.mult)).collect(),
        })
    }
}

/// Calls `f(ν)` for every `ν` of length `m − 1` interlacing below `top`
/// (`top_{i+1} ≤ ν_i ≤ top_i`), optionally with a prescribed sum.
fn for_each_branch(top: &[i64], sum: Option<i64>, f: &mut dyn FnMut(&[i64])) {
    fn rec(
        top: &[i64],
        i: usize,
        rem: Option<i64>,
        prefix: &mut Vec<i64>,
        f: &mut dyn FnMut(&[i64]),
    ) {
        let m = top.len() - 1;
        if i == m {
            if rem.is_none_or(|r| r == 0) {
                f(prefix);
            }
            return;
        }
        // remaining slots i..m have ν_k ∈ [top[k+1], top[k]]
        let (lo_rest, hi_rest): (i64, i64) = (
            top[i + 2..].iter().sum::<i64>(),
            top[i + 1..m].iter().sum::<i64>(),
        );
        for v in top[i + 1]..=top[i] {
            if let Some(r) = rem {
                let left = r - v;
                if left < lo_rest || left > hi_rest {
                    continue;
                }
            }
            prefix.push(v);
            rec(top, i + 1, rem.map(|r| r - v), prefix, f);
            prefix.pop();
        }
    }
    if top.is_empty() {
        return;
    }
    rec(top, 0, sum, &mut Vec::with_capacity(top.len()), f);
}

/// Number of Gelfand-Tsetlin patterns with top row `top` whose row-sum
/// increments are `content`; equivalently semistandard tableaux of shape
/// `top` and content `content` when `top` is a partition.
fn count_patterns(top: &[i64], content: &[i64], memo: &mut HashMap<Vec<i64>, u64>) -> u64 {
    let m = top.len();
    if m == 0 {
        return 1;
    }
    if let Some(&c) = memo.get(top) {
        return c;
    }
    let below = top.iter().sum::<i64>() - content[m - 1];
    let mut total = 0;
    let mut branches = Vec::new();
    for_each_branch(top, Some(below), &mut |nu| branches.push(nu.to_vec()));
    for nu in branches {
        total += count_patterns(&nu, &content[..m - 1], memo);
    }
    memo.insert(top.to_vec(), total);
    total
}

/// Multiplicity `n_λ(x)` of the weight `x` in `V_λ`.
///
/// Translates `λ` to a partition (and `x` by the same constant), sorts `x` into
/// dominant order and counts semistandard tableaux with that content.
pub fn weight_multiplicity(lambda: &Signature, x: &Weight) -> Result<u64> {
    if lambda.rank() != x.rank() {
        return arg("signature and weight have different ranks");
    }
    let (partition, c) = lambda.to_partition();
    if x.size() + c * x.rank() as i64 != partition.size() {
        return Ok(0);
    }
    let shifted: Vec<i64> = x.dominant().shift(c).parts().to_vec();
    if shifted.iter().any(|&v| v < 0) {
        return Ok(0);
    }
    // dominant content: entries 1..n appear x'_1 ≥ … ≥ x'_n times
    Ok(count_patterns(partition.parts(), &shifted, &mut HashMap::new()))
}

fn expand(top: &[i64], memo: &mut HashMap<Vec<i64>, BTreeMap<Vec<i64>, u64>>) -> BTreeMap<Vec<i64>, u64> {
    if top.is_empty() {
        return BTreeMap::from([(Vec::new(), 1)]);
    }
    if let Some(e) = memo.get(top) {
        return e.clone();
    }
    let total: i64 = top.iter().sum();
    let mut branches = Vec::new();
    for_each_branch(top, None, &mut |nu| branches.push(nu.to_vec()));
    let mut out: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    for nu in branches {
        let last = total - nu.iter().sum::<i64>();
        for (w, c) in expand(&nu, memo) {
            let mut w = w;
            w.push(last);
            *out.entry(w).or_default() += c;
        }
    }
    memo.insert(top.to_vec(), out.clone());
    out
}

pub(crate) fn expand_unchecked(lambda: &Signature) -> WeightExpansion {
    let terms = expand(lambda.parts(), &mut HashMap::new())
        .into_iter()
        .map(|(w, c)| (Weight(w), c))
        .collect();
    WeightExpansion {
        lambda: lambda.clone(),
        terms,
    }
}

/// Full weight multiset of `V_λ` under the default [`EnumerationLimits`].
pub fn weight_expansion(lambda: &Signature) -> Result<WeightExpansion> {
    weight_expansion_with(lambda, EnumerationLimits::default())
}

pub fn weight_expansion_with(lambda: &Signature, limits: EnumerationLimits) -> Result<WeightExpansion> {
    if lambda.rank() > limits.max_rank {
        return Err(Error::Resource(format!(
            "rank {} exceeds the enumeration bound {}",
            lambda.rank(),
            limits.max_rank
        )));
    }
    let boxes = lambda.to_partition().0.size();
    if boxes > limits.max_boxes {
        return Err(Error::Resource(format!(
            "{boxes} boxes exceed the enumeration bound {}",
            limits.max_boxes
        )));
    }
    Ok(expand_unchecked(lambda))
}
