//! Analytic spectrum of `K_α` on the Bergman space: eigenvalues `μ_n` on
//! degree-`n` homogeneous polynomials, multiplicities, the singular value
//! stream, Schatten/Macaev membership and Dixmier trace estimation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{ln_gamma_ratio, pochhammer_ratio};
use crate::sum::Neumaier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `α = -N` for an integer `N >= 0`: finite rank.
    NonposInteger(u64),
    /// `α < d+1` and `-α` not a natural number.
    Regular,
    /// `α >= d+1`: not compact on `L²`.
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorParams {
    pub alpha: f64,
    pub d: u32,
    pub regime: Regime,
}

impl OperatorParams {
    pub fn new(alpha: f64, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parameter("dimension d must be at least 1".into()));
        }
        if !alpha.is_finite() {
            return Err(Error::Parameter(format!("alpha = {alpha} must be finite")));
        }
        let regime = if alpha <= 0.0 && alpha == alpha.round() {
            Regime::NonposInteger((-alpha) as u64)
        } else if alpha < d as f64 + 1.0 {
            Regime::Regular
        } else {
            Regime::Supercritical
        };
        Ok(Self { alpha, d, regime })
    }

    pub fn dim(&self) -> f64 {
        self.d as f64
    }

    fn require_compact(&self) -> Result<()> {
        match self.regime {
            Regime::Supercritical => Err(Error::Supercritical { alpha: self.alpha, d: self.d }),
            _ => Ok(()),
        }
    }

    /// Largest degree whose eigenvalue may be out of order in absolute value.
    fn prefix_degree(&self) -> u64 {
        self.alpha.abs().ceil() as u64 + 1
    }
}

// Degrees up to this bound use the plain product (α)_n/(d+1)_n.
const DIRECT_DEGREES: u64 = 512;

/// `μ_n = (α)_n / (d+1)_n`, which is `Γ(d+1)Γ(α+n)/(Γ(α)Γ(d+1+n))` and, for
/// `α = -N`, vanishes past `n = N`.
pub fn eigenvalue(params: &OperatorParams, n: u64) -> Result<f64> {
    params.require_compact()?;
    if let Regime::NonposInteger(big_n) = params.regime {
        if n > big_n {
            return Ok(0.0);
        }
    }
    let a = params.alpha;
    let b = params.dim() + 1.0;
    let m = a.abs().ceil() as u64 + DIRECT_DEGREES;
    if n <= m {
        return Ok(pochhammer_ratio(a, b, n));
    }
    // Past m every factor (α+k) is positive; pair Γ(n+α) with Γ(n+d+1) so
    // each log ratio stays O(ln n).
    let head = pochhammer_ratio(a, b, m);
    let (mf, nf) = (m as f64, n as f64);
    let log_tail = ln_gamma_ratio(nf + a, nf + b) - ln_gamma_ratio(mf + a, mf + b);
    Ok(head * log_tail.exp())
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(c).expect("binomial coefficient overflows u64")
}

/// Dimension of the degree-`n` homogeneous polynomials in `d` variables.
pub fn multiplicity(d: u32, n: u64) -> u64 {
    assert!(d >= 1);
    binomial(n + d as u64 - 1, d as u64 - 1)
}

/// `M_n = Σ_{j<=n} m_j = C(n+d, d)`.
pub fn cumulative_count(d: u32, n: u64) -> u64 {
    assert!(d >= 1);
    binomial(n + d as u64, d as u64)
}

/// One degree block of the singular value stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Block {
    pub degree: u64,
    pub value: f64,
    pub multiplicity: u64,
}

/// Degree blocks of `|μ_n|` in non-increasing order; ties keep ascending degree.
#[derive(Debug, Clone)]
pub struct SingularStream {
    params: OperatorParams,
    prefix: Vec<Block>,
    prefix_pos: usize,
    next_tail_degree: u64,
}

impl SingularStream {
    pub fn new(params: OperatorParams) -> Result<Self> {
        params.require_compact()?;
        let n0 = params.prefix_degree();
        let mut prefix = Vec::with_capacity(n0 as usize + 1);
        for n in 0..=n0 {
            prefix.push(Block {
                degree: n,
                value: eigenvalue(&params, n)?.abs(),
                multiplicity: multiplicity(params.d, n),
            });
        }
        // Stable sort keeps ascending degree among equal values.
        prefix.sort_by(|x, y| y.value.total_cmp(&x.value));
        Ok(Self { params, prefix, prefix_pos: 0, next_tail_degree: n0 + 1 })
    }

    pub fn params(&self) -> &OperatorParams {
        &self.params
    }

    fn tail_block(&self) -> Block {
        let n = self.next_tail_degree;
        Block {
            degree: n,
            value: eigenvalue(&self.params, n).expect("compactness checked at construction").abs(),
            multiplicity: multiplicity(self.params.d, n),
        }
    }
}

impl Iterator for SingularStream {
    type Item = Block;

    fn next(&mut self) -> Option<Block> {
        let tail = self.tail_block();
        match self.prefix.get(self.prefix_pos) {
            Some(p) if p.value >= tail.value => {
                self.prefix_pos += 1;
                Some(*p)
            }
            _ => {
                self.next_tail_degree += 1;
                Some(tail)
            }
        }
    }
}

/// One singular value `s_k` with the degree block it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularEntry {
    pub k: u64,
    pub value: f64,
    pub degree: u64,
    pub multiplicity: u64,
}

/// The first `count` singular values, expanded by multiplicity.
pub fn singular_values(params: &OperatorParams, count: usize) -> Result<Vec<SingularEntry>> {
    let mut out = Vec::with_capacity(count);
    for block in SingularStream::new(*params)? {
        for _ in 0..block.multiplicity {
            if out.len() == count {
                return Ok(out);
            }
            out.push(SingularEntry {
                k: out.len() as u64,
                value: block.value,
                degree: block.degree,
                multiplicity: block.multiplicity,
            });
        }
        if out.len() == count {
            return Ok(out);
        }
    }
    unreachable!("singular value stream is infinite")
}

/// `d / (d+1-α)`: the Schatten/Macaev threshold and the Hausdorff dimension
/// of `K_α` in the regular regime.
pub fn schatten_threshold(params: &OperatorParams) -> Option<f64> {
    match params.regime {
        Regime::Regular => Some(params.dim() / (params.dim() + 1.0 - params.alpha)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SchattenSum {
    Converged { value: f64, error_estimate: f64 },
    /// Partial sums `Σ_{n<=N} m_n |μ_n|^p` as evidence.
    Diverged { partial_sums: Vec<(u64, f64)> },
}

impl SchattenSum {
    pub fn value(&self) -> Option<f64> {
        match self {
            SchattenSum::Converged { value, .. } => Some(*value),
            SchattenSum::Diverged { .. } => None,
        }
    }
}

const SCHATTEN_LEVELS: usize = 8;
const SCHATTEN_ELIMINATIONS: usize = 5;

/// `Σ_n m_n |μ_n|^p`; convergence is decided from the threshold, the value is
/// extrapolated from partial sums at geometrically spaced cutoffs.
pub fn schatten_sum(params: &OperatorParams, p: f64) -> Result<SchattenSum> {
    params.require_compact()?;
    if !(p > 0.0) {
        return Err(Error::Parameter(format!("Schatten exponent p = {p} must be positive")));
    }
    let term = |n: u64| -> Result<f64> {
        let mu = eigenvalue(params, n)?.abs();
        Ok(if mu == 0.0 { 0.0 } else { multiplicity(params.d, n) as f64 * mu.powf(p) })
    };

    if let Regime::NonposInteger(big_n) = params.regime {
        let mut acc = Neumaier::new();
        for n in 0..=big_n {
            acc.add(term(n)?);
        }
        return Ok(SchattenSum::Converged { value: acc.value(), error_estimate: 0.0 });
    }

    let n0 = 1024u64.max(4 * params.alpha.abs().ceil() as u64);
    let mut acc = Neumaier::new();
    let mut next = 0u64;
    let mut partial = Vec::with_capacity(SCHATTEN_LEVELS);
    for level in 0..SCHATTEN_LEVELS {
        let cutoff = n0 << level;
        while next <= cutoff {
            acc.add(term(next)?);
            next += 1;
        }
        partial.push((cutoff, acc.value()));
    }

    let converges = p > schatten_threshold(params).expect("regular regime");
    if !converges {
        return Ok(SchattenSum::Diverged { partial_sums: partial });
    }

    // Terms behave like n^e (1 + c/n + ...), so S - S_N expands in N^{e+1-k}.
    let d = params.dim();
    let e = p * (params.alpha - d - 1.0) + d - 1.0;
    let mut table: Vec<f64> = partial.iter().map(|&(_, s)| s).collect();
    let mut prev_column_last = *table.last().unwrap();
    let mut error_estimate = f64::INFINITY;
    for k in 0..SCHATTEN_ELIMINATIONS.min(SCHATTEN_LEVELS - 1) {
        let factor = 2f64.powf(e + 1.0 - k as f64);
        let next_col: Vec<f64> =
            table.windows(2).map(|w| (w[1] - factor * w[0]) / (1.0 - factor)).collect();
        let last = *next_col.last().unwrap();
        error_estimate = (last - prev_column_last).abs();
        prev_column_last = last;
        table = next_col;
    }
    Ok(SchattenSum::Converged { value: prev_column_last, error_estimate })
}

/// Membership verdict; `not_compact` flags the supercritical regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub not_compact: bool,
}

pub fn schatten_member(params: &OperatorParams, p: f64) -> Membership {
    membership(params, p, |p, th| p > th)
}

pub fn macaev_member(params: &OperatorParams, p: f64) -> Membership {
    membership(params, p, |p, th| p >= th)
}

fn membership(params: &OperatorParams, p: f64, cmp: impl Fn(f64, f64) -> bool) -> Membership {
    assert!(p > 0.0, "exponent must be positive");
    match params.regime {
        Regime::NonposInteger(_) => Membership { member: true, not_compact: false },
        Regime::Supercritical => Membership { member: false, not_compact: true },
        Regime::Regular => Membership {
            member: cmp(p, schatten_threshold(params).unwrap()),
            not_compact: false,
        },
    }
}

pub fn hausdorff_dimension(params: &OperatorParams) -> Result<f64> {
    params.require_compact()?;
    Ok(schatten_threshold(params).unwrap_or(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DixmierAccumulator {
    /// `(k, σ_k)` at the end of each degree block, `k` the 0-based index of
    /// the last singular value in the block.
    pub partial_sums: Vec<(u64, f64)>,
    /// `(k, σ_k / ln k)` for the same `k`, restricted to `k >= 2`.
    pub estimates: Vec<(u64, f64)>,
    pub extrapolated: f64,
}

/// Estimates `lim σ_k / ln k` from block sums up to the block containing
/// `k_max`.
///
/// The limit is read off a three-point fit `σ_k = a ln k + A + B k^{-γ}` at
/// `k ≈ k_max^{1/2}, k_max^{3/4}, k_max`, where `k^{-γ}` is the decay of the
/// tail `σ_∞ - σ_k` (for α < 1) or of the remainder after `ln k` (for α = 1).
pub fn dixmier_trace_estimate(params: &OperatorParams, k_max: u64) -> Result<DixmierAccumulator> {
    if params.alpha > 1.0 {
        return Err(Error::NotInMacaev1 { alpha: params.alpha });
    }
    if k_max < 1 {
        return Err(Error::Parameter("k_max must be positive".into()));
    }
    let mut partial_sums = Vec::new();
    let mut estimates = Vec::new();
    let mut sigma = Neumaier::new();
    let mut seen: u64 = 0;
    for block in SingularStream::new(*params)? {
        sigma.add(block.value * block.multiplicity as f64);
        seen += block.multiplicity;
        let k = seen - 1;
        let s = sigma.value();
        partial_sums.push((k, s));
        if k >= 2 {
            estimates.push((k, s / (k as f64).ln()));
        }
        if k >= k_max {
            break;
        }
    }

    let extrapolated = match params.regime {
        Regime::NonposInteger(_) => 0.0,
        _ => {
            let d = params.dim();
            let gamma = if params.alpha < 1.0 { (1.0 - params.alpha) / d } else { 1.0 / d };
            extrapolate_log_slope(&partial_sums, k_max, gamma)
                .unwrap_or_else(|| estimates.last().map_or(0.0, |&(_, e)| e))
        }
    };
    Ok(DixmierAccumulator { partial_sums, estimates, extrapolated })
}

fn extrapolate_log_slope(partial_sums: &[(u64, f64)], k_max: u64, gamma: f64) -> Option<f64> {
    let km = k_max as f64;
    let targets = [km.sqrt(), km.powf(0.75), km];
    let mut picks: Vec<(u64, f64)> = Vec::with_capacity(3);
    for t in targets {
        let pick = partial_sums.iter().rev().find(|&&(k, _)| k >= 2 && (k as f64) <= t)?;
        if picks.last().is_some_and(|last| last.0 == pick.0) {
            return None;
        }
        picks.push(*pick);
    }
    let rows: Vec<[f64; 4]> = picks
        .iter()
        .map(|&(k, s)| {
            let kf = k as f64;
            [kf.ln(), 1.0, kf.powf(-gamma), s]
        })
        .collect();
    solve3(&rows).map(|x| x[0])
}

// Gaussian elimination with partial pivoting on an augmented 3x4 system.
fn solve3(rows: &[[f64; 4]]) -> Option<[f64; 3]> {
    let mut m: Vec<[f64; 4]> = rows.to_vec();
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            for c in col..4 {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let mut s = m[r][3];
        for c in r + 1..3 {
            s -= m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Least-squares slope of `ln s_k` against `ln k` over ranks `k ∈ [K/2, K]`
/// (1-based ranks).
pub fn decay_exponent_fit(params: &OperatorParams, big_k: usize) -> Result<f64> {
    if params.regime != Regime::Regular {
        return Err(Error::Parameter("decay fit needs the regular regime".into()));
    }
    if big_k < 1000 {
        return Err(Error::Parameter(format!("K = {big_k} must be at least 1000")));
    }
    let values = singular_values(params, big_k)?;
    let (mut sx, mut sy, mut sxx, mut sxy, mut cnt) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for rank in big_k / 2..=big_k {
        let x = (rank as f64).ln();
        let y = values[rank - 1].value.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        cnt += 1.0;
    }
    Ok((cnt * sxy - sx * sy) / (cnt * sxx - sx * sx))
}

/// Range of `μ_n(α)^p / μ_n(pα - (p-1)(d+1))` over `n <= n_max`.
pub fn funo_ratio_range(params: &OperatorParams, p: f64, n_max: u64) -> Result<(f64, f64)> {
    let d = params.dim();
    let alpha = params.alpha;
    if !(alpha > 0.0 && alpha < d + 1.0) {
        return Err(Error::Range(format!("alpha = {alpha} must lie in (0, d+1)")));
    }
    let p_max = (d + 1.0) / (d + 1.0 - alpha);
    if !(p > 0.0 && p < p_max) {
        return Err(Error::Range(format!("p = {p} must lie in (0, {p_max})")));
    }
    let beta = p * alpha - (p - 1.0) * (d + 1.0);
    let other = OperatorParams::new(beta, params.d)?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for n in 0..=n_max {
        let r = eigenvalue(params, n)?.powf(p) / eigenvalue(&other, n)?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(alpha: f64, d: u32) -> OperatorParams {
        OperatorParams::new(alpha, d).unwrap()
    }

    #[test]
    fn regime_classification() {
        assert_eq!(params(0.0, 1).regime, Regime::NonposInteger(0));
        assert_eq!(params(-3.0, 2).regime, Regime::NonposInteger(3));
        assert_eq!(params(-2.5, 2).regime, Regime::Regular);
        assert_eq!(params(2.99, 2).regime, Regime::Regular);
        assert_eq!(params(3.0, 2).regime, Regime::Supercritical);
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalue(&params(0.7, 3), 0).unwrap(), 1.0);
        assert!((eigenvalue(&params(1.0, 1), 3).unwrap() - 0.25).abs() < 1e-15);
        assert!((eigenvalue(&params(-0.5, 2), 1).unwrap() + 1.0 / 6.0).abs() < 1e-15);
        assert!(matches!(eigenvalue(&params(2.5, 1), 0), Err(Error::Supercritical { .. })));
    }

    #[test]
    fn nonpositive_integer_truncates() {
        let p = params(-1.0, 1);
        let v: Vec<f64> = (0..4).map(|n| eigenvalue(&p, n).unwrap()).collect();
        assert_eq!(v, vec![1.0, -0.5, 0.0, 0.0]);
    }

    #[test]
    fn eigenvalue_large_degree_matches_closed_form() {
        // d=1, α=1: μ_n = 1/(n+1).
        let p = params(1.0, 1);
        for n in [600u64, 10_000, 1_000_000] {
            let mu = eigenvalue(&p, n).unwrap();
            assert!((mu * (n as f64 + 1.0) - 1.0).abs() < 1e-12, "n = {n}");
        }
        // d=2, α=1: μ_n = 2/((n+1)(n+2)).
        let p = params(1.0, 2);
        let n = 123_456u64;
        let nf = n as f64;
        let mu = eigenvalue(&p, n).unwrap();
        assert!((mu * (nf + 1.0) * (nf + 2.0) / 2.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn recurrence_holds_to_ten_thousand() {
        for &(alpha, d) in &[(0.5, 1), (1.7, 2), (-2.3, 3), (-7.5, 1)] {
            let p = params(alpha, d);
            let mut prev = eigenvalue(&p, 0).unwrap();
            for n in 0..10_000u64 {
                let next = eigenvalue(&p, n + 1).unwrap();
                let lhs = next * (d as f64 + 1.0 + n as f64);
                let rhs = prev * (alpha + n as f64);
                assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs(), "alpha={alpha} n={n}");
                prev = next;
            }
        }
    }

    #[test]
    fn multiplicity_examples_and_counting() {
        assert_eq!(multiplicity(1, 17), 1);
        assert_eq!(multiplicity(2, 3), 4);
        assert_eq!(multiplicity(3, 2), 6);
        for d in 1..=4 {
            let mut total = 0;
            for n in 0..60 {
                total += multiplicity(d, n);
                assert_eq!(total, cumulative_count(d, n));
            }
        }
    }

    #[test]
    fn counting_growth_is_stable() {
        for d in 1..=3u32 {
            let r1 = cumulative_count(d, 1000) as f64 / 1000f64.powi(d as i32);
            let r2 = cumulative_count(d, 10_000) as f64 / 10_000f64.powi(d as i32);
            assert!((r1 / r2 - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn singular_value_examples() {
        let v: Vec<f64> = singular_values(&params(1.0, 1), 4).unwrap().iter().map(|e| e.value).collect();
        let expected = [1.0, 0.5, 1.0 / 3.0, 0.25];
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let v: Vec<f64> = singular_values(&params(1.0, 2), 4).unwrap().iter().map(|e| e.value).collect();
        let expected = [1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0];
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let v: Vec<f64> = singular_values(&params(0.0, 2), 5).unwrap().iter().map(|e| e.value).collect();
        assert_eq!(v, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn nonmonotone_prefix_is_sorted() {
        // α = -4.5: |μ_1| = 4.5/2 > 1 = |μ_0| for d = 1.
        let p = params(-4.5, 1);
        let v = singular_values(&p, 40).unwrap();
        for w in v.windows(2) {
            assert!(w[0].value >= w[1].value);
        }
        assert_eq!(v[0].degree, 2);
    }

    #[test]
    fn ties_ordered_by_degree() {
        // α = -4, d = 1: |μ_1| = |μ_2| = 2.
        let v = singular_values(&params(-4.0, 1), 3).unwrap();
        assert_eq!(v[0].value, v[1].value);
        assert_eq!((v[0].degree, v[1].degree), (1, 2));
    }

    #[test]
    fn schatten_examples() {
        let s = schatten_sum(&params(0.5, 1), 1.0).unwrap();
        assert!((s.value().unwrap() - 2.0).abs() < 1e-9, "{s:?}");
        assert!(matches!(schatten_sum(&params(1.0, 2), 1.0).unwrap(), SchattenSum::Diverged { .. }));
        let s = schatten_sum(&params(0.0, 3), 2.7).unwrap();
        assert_eq!(s.value(), Some(1.0));
    }

    #[test]
    fn schatten_sum_at_p_two_matches_direct_sum() {
        // d=1, α=1, p=2: Σ 1/(n+1)² = π²/6.
        let s = schatten_sum(&params(1.0, 1), 2.0).unwrap();
        let expected = std::f64::consts::PI.powi(2) / 6.0;
        assert!((s.value().unwrap() / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let p = params(1.0, 2);
        assert!(!schatten_member(&p, 1.0).member);
        assert!(macaev_member(&p, 1.0).member);
        assert!(schatten_member(&params(0.5, 1), 0.67).member);
        let p = params(-3.0, 2);
        assert!(schatten_member(&p, 0.1).member && macaev_member(&p, 0.1).member);
        let m = schatten_member(&params(3.5, 2), 4.0);
        assert!(!m.member && m.not_compact);
    }

    #[test]
    fn hausdorff_examples() {
        assert_eq!(hausdorff_dimension(&params(1.0, 2)).unwrap(), 1.0);
        assert_eq!(hausdorff_dimension(&params(-2.0, 2)).unwrap(), 0.0);
        assert!((hausdorff_dimension(&params(0.5, 1)).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn dixmier_examples() {
        let acc = dixmier_trace_estimate(&params(1.0, 1), 1_000_000).unwrap();
        assert!((acc.extrapolated - 1.0).abs() < 0.01, "{}", acc.extrapolated);
        let acc = dixmier_trace_estimate(&params(0.5, 1), 1_000_000).unwrap();
        assert!(acc.extrapolated.abs() < 0.01, "{}", acc.extrapolated);
        let acc = dixmier_trace_estimate(&params(0.0, 2), 1000).unwrap();
        assert_eq!(acc.extrapolated, 0.0);
        assert!(matches!(dixmier_trace_estimate(&params(1.5, 2), 100), Err(Error::NotInMacaev1 { .. })));
    }

    #[test]
    fn dixmier_partial_sums_increase() {
        let acc = dixmier_trace_estimate(&params(0.3, 2), 5000).unwrap();
        for w in acc.partial_sums.windows(2) {
            assert!(w[1].1 > w[0].1);
        }
    }

    #[test]
    fn decay_fit_examples() {
        for &(alpha, d) in &[(1.0, 1), (0.5, 2), (-1.3, 3)] {
            let p = params(alpha, d);
            let slope = decay_exponent_fit(&p, 10_000).unwrap();
            let expected = -(d as f64 + 1.0 - alpha) / d as f64;
            assert!((slope / expected - 1.0).abs() < 0.02, "alpha={alpha} d={d} slope={slope}");
        }
    }

    #[test]
    fn funo_examples() {
        let (lo, hi) = funo_ratio_range(&params(0.5, 1), 1.0, 1000).unwrap();
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 1.0).abs() < 1e-14);
        let (lo, hi) = funo_ratio_range(&params(0.5, 1), 1.2, 100_000).unwrap();
        assert!(lo > 0.0 && hi.is_finite() && hi / lo < 10.0);
        let (lo, hi) = funo_ratio_range(&params(1.5, 2), 1.1, 100_000).unwrap();
        assert!(lo > 0.0 && hi.is_finite());
        assert!(matches!(funo_ratio_range(&params(0.5, 1), 2.0, 10), Err(Error::Range(_))));
    }

    proptest! {
        #[test]
        fn recurrence_ratio(alpha in -6.0f64..2.9, d in 1u32..4, n in 0u64..5000) {
            let p = OperatorParams::new(alpha, d).unwrap();
            prop_assume!(p.regime == Regime::Regular);
            let a = eigenvalue(&p, n).unwrap();
            let b = eigenvalue(&p, n + 1).unwrap();
            prop_assume!(a != 0.0);
            let expected = (alpha + n as f64).abs() / (d as f64 + 1.0 + n as f64);
            prop_assert!(((b / a).abs() - expected).abs() <= 1e-11 * expected);
        }

        #[test]
        fn monotone_tail(alpha in -6.0f64..2.9, d in 1u32..4) {
            let p = OperatorParams::new(alpha, d).unwrap();
            prop_assume!(p.regime == Regime::Regular && alpha < d as f64 + 1.0);
            let start = alpha.abs().floor() as u64 + 1;
            let mut prev = eigenvalue(&p, start).unwrap().abs();
            for n in start + 1..start + 300 {
                let cur = eigenvalue(&p, n).unwrap().abs();
                prop_assert!(cur < prev);
                prev = cur;
            }
        }

        #[test]
        fn stream_is_non_increasing(alpha in -8.0f64..2.9, d in 1u32..4) {
            let p = OperatorParams::new(alpha, d).unwrap();
            prop_assume!(p.regime != Regime::Supercritical);
            let v = singular_values(&p, 300).unwrap();
            for w in v.windows(2) {
                prop_assert!(w[0].value >= w[1].value);
            }
        }

        #[test]
        fn operator_norm_is_one(alpha in 0.0f64..2.9, d in 1u32..4) {
            let p = OperatorParams::new(alpha, d).unwrap();
            prop_assume!(p.regime != Regime::Supercritical);
            prop_assert_eq!(singular_values(&p, 1).unwrap()[0].value, 1.0);
        }

        #[test]
        fn macaev_boundary(alpha in -3.0f64..1.9, d in 1u32..3) {
            let p = OperatorParams::new(alpha, d).unwrap();
            prop_assume!(p.regime == Regime::Regular);
            let th = schatten_threshold(&p).unwrap();
            prop_assert!(macaev_member(&p, th).member);
            prop_assert!(!schatten_member(&p, th).member);
        }
    }
}
