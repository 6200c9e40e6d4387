//! `L^p → L^q` compactness and boundedness of `K_α` and `K_α⁺`, and
//! Schatten/Macaev membership, decided in exact rational arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent in `[1, ∞]`, or any real for parsing; `∞` is never a float.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exponent {
    Finite(BigRational),
    Infinity,
}

impl Exponent {
    pub fn finite(x: BigRational) -> Self {
        Exponent::Finite(x)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> BigRational {
        match self {
            Exponent::Finite(x) => x.recip(),
            Exponent::Infinity => BigRational::zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(x) => x.to_f64().unwrap_or(f64::NAN),
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(x) => write!(f, "{x}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => parse_rational(other).map(Exponent::Finite),
        }
    }
}

/// Parses `a/b`, integers and decimals with an optional exponent, exactly:
/// `"1.5"` is `3/2`, `"2.5e-1"` is `1/4`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parameter(format!("cannot parse {s:?} as a rational number"));
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Parameter(format!("{x} is not finite")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentPair {
    pub p: Exponent,
    pub q: Exponent,
}

impl ExponentPair {
    pub fn new(p: Exponent, q: Exponent) -> Result<Self> {
        for (name, e) in [("p", &p), ("q", &q)] {
            if let Exponent::Finite(x) = e {
                if *x < BigRational::one() {
                    return Err(Error::Range(format!("{name} = {x} must be at least 1")));
                }
            }
        }
        Ok(Self { p, q })
    }

    pub fn parse(p: &str, q: &str) -> Result<Self> {
        Self::new(p.parse()?, q.parse()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    K,
    Kplus,
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k" => Ok(OperatorKind::K),
            "kplus" | "k+" => Ok(OperatorKind::Kplus),
            _ => Err(Error::Parameter(format!("unknown operator kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl From<bool> for Answer {
    fn from(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

/// The case of the decision procedure that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `α <= 0`: compact for every pair.
    NonpositiveOrder,
    /// `0 < α < d+1`, `p = 1`: compact iff `q < (d+1)/α`.
    UnitP,
    /// `0 < α < d+1`, `1 < p < (d+1)/(d+1-α)`: compact iff `1/q > 1/p + α/(d+1) - 1`.
    IntermediateP,
    /// `0 < α < d+1`, `p = (d+1)/(d+1-α)`: compact iff `q < ∞`.
    CriticalP,
    /// `0 < α < d+1`, `p > (d+1)/(d+1-α)`: always compact.
    LargeP,
    /// `α = d+1`: compact iff `q < p`.
    CriticalOrder,
    /// `d+1 < α < d+2`, `p < ∞`: compact iff bounded iff
    /// `p > 1/(d+2-α)` and `1/q > 1/p + α - (d+1)`.
    SupercriticalFiniteP,
    /// `d+1 < α < d+2`, `p = ∞`: compact iff bounded iff `q < 1/(α-d-1)`.
    SupercriticalInfiniteP,
    /// `α >= d+2`: bounded for no pair.
    Unbounded,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::NonpositiveOrder => "nonpositive_order",
            Rule::UnitP => "unit_p",
            Rule::IntermediateP => "intermediate_p",
            Rule::CriticalP => "critical_p",
            Rule::LargeP => "large_p",
            Rule::CriticalOrder => "critical_order",
            Rule::SupercriticalFiniteP => "supercritical_finite_p",
            Rule::SupercriticalInfiniteP => "supercritical_infinite_p",
            Rule::Unbounded => "unbounded",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub compact: Answer,
    pub bounded: Answer,
    pub rule: Rule,
}

impl Verdict {
    fn compact_or_unknown(compact: bool, rule: Rule) -> Self {
        let bounded = if compact { Answer::Yes } else { Answer::Unknown };
        Self { compact: compact.into(), bounded, rule }
    }

    fn equivalent(holds: bool, rule: Rule) -> Self {
        Self { compact: holds.into(), bounded: holds.into(), rule }
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Compactness of `K_α` or `K_α⁺` from `L^p` to `L^q`; the answer does not
/// depend on `kind`.
pub fn compactness(alpha: &BigRational, d: u32, pair: &ExponentPair, _kind: OperatorKind) -> Verdict {
    let d1 = int(d as i64 + 1);
    let d2 = int(d as i64 + 2);
    let inv_p = pair.p.reciprocal();
    let inv_q = pair.q.reciprocal();

    if !alpha.is_positive() {
        return Verdict { compact: Answer::Yes, bounded: Answer::Yes, rule: Rule::NonpositiveOrder };
    }
    if *alpha >= d2 {
        return Verdict { compact: Answer::No, bounded: Answer::No, rule: Rule::Unbounded };
    }
    if *alpha > d1 {
        let excess = alpha - &d1;
        return match &pair.p {
            Exponent::Infinity => {
                // q < 1/(α-d-1), i.e. 1/q > α-d-1
                Verdict::equivalent(inv_q > excess, Rule::SupercriticalInfiniteP)
            }
            Exponent::Finite(p) => {
                let lower = (&d2 - alpha).recip();
                let holds = *p > lower && inv_q > &inv_p + &excess;
                Verdict::equivalent(holds, Rule::SupercriticalFiniteP)
            }
        };
    }
    if *alpha == d1 {
        return Verdict::compact_or_unknown(pair.q < pair.p, Rule::CriticalOrder);
    }
    let critical_p = &d1 / (&d1 - alpha);
    match &pair.p {
        Exponent::Finite(p) if p.is_one() => {
            Verdict::compact_or_unknown(inv_q > alpha / &d1, Rule::UnitP)
        }
        Exponent::Finite(p) if *p < critical_p => {
            let bound = &inv_p + alpha / &d1 - BigRational::one();
            Verdict::compact_or_unknown(inv_q > bound, Rule::IntermediateP)
        }
        Exponent::Finite(p) if *p == critical_p => {
            Verdict::compact_or_unknown(!pair.q.is_infinite(), Rule::CriticalP)
        }
        _ => Verdict::compact_or_unknown(true, Rule::LargeP),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchattenMacaev {
    pub schatten: bool,
    pub macaev: bool,
    /// `d/(d+1-α)`, or 0 for finite rank; `None` when `K_α` is not compact.
    pub hausdorff_dim: Option<f64>,
    pub not_compact: bool,
}

/// Membership of `K_α` in `ℒ^p` and `ℒ^{p,∞}`, compared against the
/// Hausdorff dimension `d/(d+1-α)` exactly.
pub fn schatten_macaev(alpha: &BigRational, d: u32, p: &BigRational) -> Result<SchattenMacaev> {
    if !p.is_positive() {
        return Err(Error::Range(format!("p = {p} must be positive")));
    }
    let d1 = int(d as i64 + 1);
    if *alpha >= d1 {
        return Ok(SchattenMacaev { schatten: false, macaev: false, hausdorff_dim: None, not_compact: true });
    }
    if !alpha.is_positive() && alpha.is_integer() {
        return Ok(SchattenMacaev { schatten: true, macaev: true, hausdorff_dim: Some(0.0), not_compact: false });
    }
    let dim = int(d as i64) / (&d1 - alpha);
    Ok(SchattenMacaev {
        schatten: *p > dim,
        macaev: *p >= dim,
        hausdorff_dim: dim.to_f64(),
        not_compact: false,
    })
}
