use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{arg, domain, Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// A spectral function `F`: one of the six named families, a Laurent
/// polynomial, or a product of these.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpectralFunction {
    /// `(1 − qz)^{-1}`
    AlphaPlus(Rational),
    /// `(1 − q/z)^{-1}`
    AlphaMinus(Rational),
    /// `1 + pz`
    BetaPlus(Rational),
    /// `1 + p/z`
    BetaMinus(Rational),
    /// `e^{tz}`
    GammaPlus(Rational),
    /// `e^{t/z}`
    GammaMinus(Rational),
    /// `Σ_m c_m z^m`, finitely many nonzero terms.
    Laurent(BTreeMap<i64, Rational>),
    /// Flat product with at most one Laurent factor.
    Product(Vec<SpectralFunction>),
}

/// Range of `m` where `f(m)` may be nonzero; `None` marks an infinite side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Support {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Support {
    pub fn is_finite(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn contains(&self, m: i64) -> bool {
        self.lo.is_none_or(|lo| m >= lo) && self.hi.is_none_or(|hi| m <= hi)
    }

    fn plus(self, other: Support) -> Support {
        Support {
            lo: self.lo.zip(other.lo).map(|(a, b)| a + b),
            hi: self.hi.zip(other.hi).map(|(a, b)| a + b),
        }
    }
}

fn check_unit(name: &str, x: &Rational, closed: bool) -> Result<()> {
    let ok = !x.is_negative() && if closed { x <= &Rational::one() } else { x < &Rational::one() };
    if ok {
        Ok(())
    } else {
        let range = if closed { "[0, 1]" } else { "[0, 1)" };
        arg(format!("{name} parameter {x} outside {range}"))
    }
}

impl SpectralFunction {
    pub fn alpha_plus(q: Rational) -> Result<Self> {
        check_unit("alpha+", &q, false)?;
        Ok(SpectralFunction::AlphaPlus(q))
    }

    pub fn alpha_minus(q: Rational) -> Result<Self> {
        check_unit("alpha-", &q, false)?;
        Ok(SpectralFunction::AlphaMinus(q))
    }

    pub fn beta_plus(p: Rational) -> Result<Self> {
        check_unit("beta+", &p, true)?;
        Ok(SpectralFunction::BetaPlus(p))
    }

    pub fn beta_minus(p: Rational) -> Result<Self> {
        check_unit("beta-", &p, true)?;
        Ok(SpectralFunction::BetaMinus(p))
    }

    pub fn gamma_plus(t: Rational) -> Result<Self> {
        if t.is_negative() {
            return arg(format!("gamma+ parameter {t} is negative"));
        }
        Ok(SpectralFunction::GammaPlus(t))
    }

    pub fn gamma_minus(t: Rational) -> Result<Self> {
        if t.is_negative() {
            return arg(format!("gamma- parameter {t} is negative"));
        }
        Ok(SpectralFunction::GammaMinus(t))
    }

    /// Laurent polynomial; zero coefficients are dropped.
    pub fn laurent(coeffs: BTreeMap<i64, Rational>) -> Result<Self> {
        let coeffs: BTreeMap<i64, Rational> =
            coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if coeffs.is_empty() {
            return arg("Laurent polynomial is identically zero");
        }
        Ok(SpectralFunction::Laurent(coeffs))
    }

    /// `F ≡ 1`.
    pub fn identity() -> Self {
        SpectralFunction::Laurent(BTreeMap::from([(0, Rational::one())]))
    }

    /// Product of factors, flattened, with Laurent factors folded together.
    pub fn product(factors: Vec<SpectralFunction>) -> Result<Self> {
        let mut flat = Vec::new();
        let mut laurent: BTreeMap<i64, Rational> = BTreeMap::from([(0, Rational::one())]);
        let mut stack: Vec<SpectralFunction> = factors.into_iter().rev().collect();
        while let Some(f) = stack.pop() {
            match f {
                SpectralFunction::Product(inner) => stack.extend(inner.into_iter().rev()),
                SpectralFunction::Laurent(c) => laurent = convolve(&laurent, &c),
                named => flat.push(named),
            }
        }
        let laurent = SpectralFunction::laurent(laurent)?;
        if laurent != SpectralFunction::identity() || flat.is_empty() {
            flat.push(laurent);
        }
        let out = if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            SpectralFunction::Product(flat)
        };
        let s = out.support();
        if s.lo.is_none() && s.hi.is_none() {
            return Err(Error::Unsupported(
                "product has coefficients unbounded on both sides".into(),
            ));
        }
        Ok(out)
    }

    /// `F·G`.
    pub fn times(&self, other: &SpectralFunction) -> Result<Self> {
        SpectralFunction::product(vec![self.clone(), other.clone()])
    }

    /// Family tag used in strings and JSON.
    pub fn family(&self) -> &'static str {
        match self {
            SpectralFunction::AlphaPlus(_) => "alpha+",
            SpectralFunction::AlphaMinus(_) => "alpha-",
            SpectralFunction::BetaPlus(_) => "beta+",
            SpectralFunction::BetaMinus(_) => "beta-",
            SpectralFunction::GammaPlus(_) => "gamma+",
            SpectralFunction::GammaMinus(_) => "gamma-",
            SpectralFunction::Laurent(_) => "laurent",
            SpectralFunction::Product(_) => "prod",
        }
    }

    pub fn is_named(&self) -> bool {
        !matches!(self, SpectralFunction::Laurent(_) | SpectralFunction::Product(_))
    }

    /// True when `f(m)` has finitely many nonzero values.
    pub fn is_finite(&self) -> bool {
        self.support().is_finite()
    }

    /// True when some factor is exponential, so normalizers carry `e^c`.
    pub fn has_exponential(&self) -> bool {
        match self {
            SpectralFunction::GammaPlus(t) | SpectralFunction::GammaMinus(t) => !t.is_zero(),
            SpectralFunction::Product(fs) => fs.iter().any(SpectralFunction::has_exponential),
            _ => false,
        }
    }

    pub fn support(&self) -> Support {
        use SpectralFunction::*;
        let fin = |lo, hi| Support {
            lo: Some(lo),
            hi: Some(hi),
        };
        match self {
            AlphaPlus(q) if q.is_zero() => fin(0, 0),
            AlphaMinus(q) if q.is_zero() => fin(0, 0),
            GammaPlus(t) | GammaMinus(t) if t.is_zero() => fin(0, 0),
            BetaPlus(p) => fin(0, if p.is_zero() { 0 } else { 1 }),
            BetaMinus(p) => fin(if p.is_zero() { 0 } else { -1 }, 0),
            AlphaPlus(_) | GammaPlus(_) => Support { lo: Some(0), hi: None },
            AlphaMinus(_) | GammaMinus(_) => Support { lo: None, hi: Some(0) },
            Laurent(c) => fin(*c.keys().next().unwrap(), *c.keys().next_back().unwrap()),
            Product(fs) => fs
                .iter()
                .map(SpectralFunction::support)
                .fold(fin(0, 0), Support::plus),
        }
    }

    /// `F ∘ (z ↦ 1/z)`: swaps the ± labels and reflects Laurent exponents.
    pub fn inverted(&self) -> SpectralFunction {
        use SpectralFunction::*;
        match self {
            AlphaPlus(q) => AlphaMinus(q.clone()),
            AlphaMinus(q) => AlphaPlus(q.clone()),
            BetaPlus(p) => BetaMinus(p.clone()),
            BetaMinus(p) => BetaPlus(p.clone()),
            GammaPlus(t) => GammaMinus(t.clone()),
            GammaMinus(t) => GammaPlus(t.clone()),
            Laurent(c) => Laurent(c.iter().map(|(m, v)| (-m, v.clone())).collect()),
            Product(fs) => Product(fs.iter().map(SpectralFunction::inverted).collect()),
        }
    }

    /// Pointwise value `F(z)`. Exponential families give `e^{c}` symbolically.
    ///
    /// Fails where the Laurent expansion does not converge (`|qz| ≥ 1` for
    /// `alpha+`, `|q/z| ≥ 1` for `alpha-`) and at `z = 0` for negative powers.
    pub fn eval(&self, z: &Rational) -> Result<Scalar> {
        use SpectralFunction::*;
        let need_nonzero = || {
            if z.is_zero() {
                domain("F has a pole at z = 0")
            } else {
                Ok(())
            }
        };
        Ok(match self {
            AlphaPlus(q) => {
                let qz = q * z;
                if qz.abs() >= Rational::one() {
                    return domain(format!("alpha+ series diverges at z = {z}"));
                }
                Scalar::Exact((Rational::one() - qz).recip())
            }
            AlphaMinus(q) => {
                need_nonzero()?;
                let qz = q / z;
                if qz.abs() >= Rational::one() {
                    return domain(format!("alpha- series diverges at z = {z}"));
                }
                Scalar::Exact((Rational::one() - qz).recip())
            }
            BetaPlus(p) => Scalar::Exact(Rational::one() + p * z),
            BetaMinus(p) => {
                need_nonzero()?;
                Scalar::Exact(Rational::one() + p / z)
            }
            GammaPlus(t) => Scalar::scaled(Rational::one(), t * z),
            GammaMinus(t) => {
                need_nonzero()?;
                Scalar::scaled(Rational::one(), t / z)
            }
            Laurent(c) => {
                if c.keys().any(|&m| m < 0) {
                    need_nonzero()?;
                }
                Scalar::Exact(
                    c.iter()
                        .map(|(&m, v)| v * z.pow(m as i32))
                        .fold(Rational::zero(), |a, b| a + b),
                )
            }
            Product(fs) => {
                let mut acc = Scalar::one();
                for f in fs {
                    acc = acc * f.eval(z)?;
                }
                acc
            }
        })
    }

    pub fn to_json(&self) -> Value {
        use SpectralFunction::*;
        let s = |r: &Rational| Value::String(format_rational(r));
        match self {
            AlphaPlus(q) | AlphaMinus(q) => json!({"family": self.family(), "q": s(q)}),
            BetaPlus(p) | BetaMinus(p) => json!({"family": self.family(), "p": s(p)}),
            GammaPlus(t) | GammaMinus(t) => json!({"family": self.family(), "t": s(t)}),
            Laurent(c) => {
                let coeffs: Map<String, Value> =
                    c.iter().map(|(m, v)| (m.to_string(), s(v))).collect();
                json!({"family": "laurent", "coeffs": coeffs})
            }
            Product(fs) => json!({
                "family": "prod",
                "factors": fs.iter().map(SpectralFunction::to_json).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("spectral function JSON: {msg}"));
        let family = v
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing \"family\""))?;
        let param = |key: &str| -> Result<Rational> {
            let raw = v
                .get(key)
                .and_then(Value::as_str)
                .ok_or_else(|| bad(&format!("missing \"{key}\"")))?;
            parse_rational(raw)
        };
        match family {
            "alpha+" => Self::alpha_plus(param("q")?),
            "alpha-" => Self::alpha_minus(param("q")?),
            "beta+" => Self::beta_plus(param("p")?),
            "beta-" => Self::beta_minus(param("p")?),
            "gamma+" => Self::gamma_plus(param("t")?),
            "gamma-" => Self::gamma_minus(param("t")?),
            "laurent" => {
                let obj = v
                    .get("coeffs")
                    .and_then(Value::as_object)
                    .ok_or_else(|| bad("missing \"coeffs\""))?;
                let mut c = BTreeMap::new();
                for (k, val) in obj {
                    let m: i64 = k.parse().map_err(|_| bad("bad exponent"))?;
                    let r = parse_rational(val.as_str().ok_or_else(|| bad("bad coefficient"))?)?;
                    c.insert(m, r);
                }
                Self::laurent(c)
            }
            "prod" => {
                let fs = v
                    .get("factors")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing \"factors\""))?;
                Self::product(fs.iter().map(Self::from_json).collect::<Result<_>>()?)
            }
            other => Err(bad(&format!("unknown family {other:?}"))),
        }
    }
}

fn convolve(a: &BTreeMap<i64, Rational>, b: &BTreeMap<i64, Rational>) -> BTreeMap<i64, Rational> {
    let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
    for (i, x) in a {
        for (j, y) in b {
            *out.entry(i + j).or_insert_with(Rational::zero) += x * y;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Splits on commas that are not nested inside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for SpectralFunction {
    type Err = Error;

    /// `beta-:1/2`, `alpha+:1/3`, `gamma+:0.5`, `prod(beta-:1/2,beta-:1/3)`,
    /// `laurent{-1:1/2,0:1}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot parse spectral function {s:?}"));
        if let Some(body) = s.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
            let factors = split_top_level(body)
                .into_iter()
                .map(str::parse)
                .collect::<Result<Vec<_>>>()?;
            return SpectralFunction::product(factors);
        }
        if let Some(body) = s.strip_prefix("laurent{").and_then(|r| r.strip_suffix('}')) {
            let mut c = BTreeMap::new();
            for term in body.split(',') {
                let (m, v) = term.split_once(':').ok_or_else(bad)?;
                let m: i64 = m.trim().parse().map_err(|_| bad())?;
                let v = parse_rational(v)?;
                *c.entry(m).or_insert_with(Rational::zero) += v;
            }
            return SpectralFunction::laurent(c);
        }
        let (family, param) = s.split_once(':').ok_or_else(bad)?;
        let x = parse_rational(param)?;
        match family.trim() {
            "alpha+" => Self::alpha_plus(x),
            "alpha-" => Self::alpha_minus(x),
            "beta+" => Self::beta_plus(x),
            "beta-" => Self::beta_minus(x),
            "gamma+" => Self::gamma_plus(x),
            "gamma-" => Self::gamma_minus(x),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SpectralFunction::*;
        match self {
            AlphaPlus(x) | AlphaMinus(x) | BetaPlus(x) | BetaMinus(x) | GammaPlus(x)
            | GammaMinus(x) => write!(f, "{}:{}", self.family(), format_rational(x)),
            Laurent(c) => {
                let terms: Vec<String> = c
                    .iter()
                    .map(|(m, v)| format!("{m}:{}", format_rational(v)))
                    .collect();
                write!(f, "laurent{{{}}}", terms.join(","))
            }
            Product(fs) => {
                let parts: Vec<String> = fs.iter().map(ToString::to_string).collect();
                write!(f, "prod({})", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn sf(s: &str) -> SpectralFunction {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in [
            "beta-:1/2",
            "alpha+:1/3",
            "gamma+:1/2",
            "prod(beta-:1/2,beta-:1/3)",
            "laurent{-1:1/2,0:1}",
            "prod(alpha-:1/3,laurent{0:1/2,1:1/2})",
        ] {
            let f = sf(s);
            assert_eq!(f.to_string(), s);
            assert_eq!(SpectralFunction::from_json(&f.to_json()).unwrap(), f);
        }
        assert_eq!(sf("gamma+:0.5"), SpectralFunction::GammaPlus(rat(1, 2)));
        assert!("beta-:2".parse::<SpectralFunction>().is_err());
        assert!("alpha+:1".parse::<SpectralFunction>().is_err());
        assert!("delta:1".parse::<SpectralFunction>().is_err());
    }

    #[test]
    fn products_flatten_and_fold() {
        let f = sf("prod(laurent{0:1,1:1},prod(beta+:1/2,laurent{0:1,1:1}))");
        assert_eq!(
            f,
            SpectralFunction::Product(vec![
                SpectralFunction::BetaPlus(rat(1, 2)),
                SpectralFunction::Laurent(BTreeMap::from([(0, int(1)), (1, int(2)), (2, int(1))])),
            ])
        );
        assert_eq!(sf("prod(laurent{0:1},beta-:1/3)"), sf("beta-:1/3"));
        assert!(matches!(
            "prod(alpha+:1/2,alpha-:1/2)".parse::<SpectralFunction>(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn point_values() {
        let one = int(1);
        assert_eq!(sf("beta+:1/2").eval(&one).unwrap(), rat(3, 2).into());
        assert_eq!(sf("alpha-:1/3").eval(&one).unwrap(), rat(3, 2).into());
        let g = sf("gamma+:1/2").eval(&one).unwrap();
        assert!((g.to_f64() - 0.5f64.exp()).abs() < 1e-15);
        assert!(sf("alpha+:1/2").eval(&int(2)).is_err());
        assert!(sf("beta-:1/2").eval(&int(0)).is_err());
    }

    #[test]
    fn inversion_swaps_labels() {
        assert_eq!(sf("beta+:1/2").inverted(), sf("beta-:1/2"));
        assert_eq!(sf("laurent{-1:1/2,0:1}").inverted(), sf("laurent{0:1,1:1/2}"));
        let f = sf("prod(alpha-:1/3,beta-:1/2)");
        assert_eq!(f.inverted().inverted(), f);
    }

    #[test]
    fn supports() {
        assert_eq!(sf("beta-:1/2").support(), Support { lo: Some(-1), hi: Some(0) });
        assert_eq!(sf("alpha+:1/2").support(), Support { lo: Some(0), hi: None });
        assert_eq!(
            sf("prod(alpha-:1/3,beta+:1/2)").support(),
            Support { lo: None, hi: Some(1) }
        );
    }
}
