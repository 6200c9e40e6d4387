//! Discrete oracles for `K_α`: the Galerkin diagonal on monomials, the
//! fractional radial operators `R^{s,t}` acting on coefficient vectors, and
//! Nyström matrices with a dense Hermitian eigensolver.

pub mod eigen;
pub mod nystrom;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

pub use eigen::{eigensolve, hermitian_eigenvalues, jacobi_eigenvalues, HermitianMatrix};
pub use nystrom::{
    finite_rank_check, nystrom_assemble, nystrom_grid, spectrum_compare, KernelKind, NystromMatrix,
    SpectrumRow, SpectrumTable,
};

use crate::error::{Error, Result};
use crate::specfun::{log_gamma, pochhammer, pochhammer_ratio};
use crate::spectral::{eigenvalue, multiplicity, OperatorParams};

/// Multi-index `k = (k_1, …, k_d)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MonomialIndex(pub Vec<u32>);

impl MonomialIndex {
    pub fn zero(d: u32) -> Self {
        Self(vec![0; d as usize])
    }

    pub fn dim(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&k| k as u64).sum()
    }

    /// `c_k² = Γ(d+1+|k|) / (Γ(d+1) Π k_j!)`, so that `c_k z^k` has unit norm.
    pub fn norm_constant_sqr(&self) -> f64 {
        let d = self.dim() as f64;
        let lg = |x: f64| log_gamma(x).expect("positive argument").log_abs;
        let mut log = lg(d + 1.0 + self.degree() as f64) - lg(d + 1.0);
        for &k in &self.0 {
            log -= lg(k as f64 + 1.0);
        }
        log.exp()
    }

    /// `z^k`.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.0.iter().zip(z).map(|(&k, c)| c.powu(k)).product()
    }

    /// All indices of degree `n` in `d` variables, lexicographically descending.
    pub fn of_degree(d: u32, n: u64) -> Vec<Self> {
        let mut out = Vec::with_capacity(multiplicity(d, n) as usize);
        let mut current = vec![0u32; d as usize];
        fill(&mut current, 0, n as u32, &mut out);
        out
    }

    /// All indices with `|k| <= n`, ordered by degree.
    pub fn up_to_degree(d: u32, n: u64) -> Vec<Self> {
        (0..=n).flat_map(|m| Self::of_degree(d, m)).collect()
    }
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MonomialIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MonomialIndex(current.clone()));
        return;
    }
    for k in (0..=remaining).rev() {
        current[pos] = k;
        fill(current, pos + 1, remaining - k, out);
    }
}

/// Finitely supported coefficients `f = Σ f_k z^k` of degree at most `max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    d: u32,
    max_degree: u64,
    coefficients: BTreeMap<MonomialIndex, Complex64>,
}

impl CoefficientVector {
    pub fn new(d: u32, max_degree: u64) -> Self {
        Self { d, max_degree, coefficients: BTreeMap::new() }
    }

    pub fn monomial(k: MonomialIndex, value: Complex64) -> Self {
        let mut f = Self::new(k.dim(), k.degree());
        f.insert(k, value).expect("degree within bound");
        f
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn max_degree(&self) -> u64 {
        self.max_degree
    }

    pub fn insert(&mut self, k: MonomialIndex, value: Complex64) -> Result<()> {
        if k.dim() != self.d {
            return Err(Error::Parameter(format!("index has {} variables, expected {}", k.dim(), self.d)));
        }
        if k.degree() > self.max_degree {
            return Err(Error::Parameter(format!("degree {} exceeds bound {}", k.degree(), self.max_degree)));
        }
        self.coefficients.insert(k, value);
        Ok(())
    }

    pub fn get(&self, k: &MonomialIndex) -> Complex64 {
        self.coefficients.get(k).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MonomialIndex, &Complex64)> {
        self.coefficients.iter()
    }

    /// `max_k |f_k - g_k|` over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, v) in &self.coefficients {
            worst = worst.max((v - other.get(k)).norm());
        }
        for (k, v) in &other.coefficients {
            worst = worst.max((v - self.get(k)).norm());
        }
        worst
    }
}

/// Each monomial of degree `<= n_cap` paired with its eigenvalue `μ_{|k|}`.
pub fn galerkin_diagonal(params: &OperatorParams, n_cap: u64) -> Result<Vec<(MonomialIndex, f64)>> {
    let mut out = Vec::new();
    for n in 0..=n_cap {
        let mu = eigenvalue(params, n)?;
        out.extend(MonomialIndex::of_degree(params.d, n).into_iter().map(|k| (k, mu)));
    }
    Ok(out)
}

fn is_negative_integer(x: f64) -> bool {
    x < 0.0 && x == x.round()
}

fn check_radial_params(d: u32, s: f64, t: f64) -> Result<()> {
    let d = d as f64;
    if !(s.is_finite() && t.is_finite()) {
        return Err(Error::Parameter("s and t must be finite".into()));
    }
    if is_negative_integer(d + s) || is_negative_integer(d + s + t) {
        return Err(Error::Parameter(format!("d+s = {} and d+s+t = {} must not be negative integers", d + s, d + s + t)));
    }
    Ok(())
}

/// Multiplier of `R^{s,t}` on degree `n`: `(d+1+s+t)_n / (d+1+s)_n`.
pub fn radial_multiplier(d: u32, s: f64, t: f64, n: u64) -> Result<f64> {
    check_radial_params(d, s, t)?;
    let base = d as f64 + 1.0 + s;
    Ok(pochhammer_ratio(base + t, base, n))
}

/// `R^{s,t} f`, scaling the degree-`n` part by [`radial_multiplier`].
pub fn radial_diff_apply(s: f64, t: f64, f: &CoefficientVector) -> Result<CoefficientVector> {
    check_radial_params(f.dim(), s, t)?;
    let mut factors = Vec::with_capacity(f.max_degree() as usize + 1);
    for n in 0..=f.max_degree() {
        factors.push(radial_multiplier(f.dim(), s, t, n)?);
    }
    let mut out = CoefficientVector::new(f.dim(), f.max_degree());
    for (k, v) in f.iter() {
        out.coefficients.insert(k.clone(), v * factors[k.degree() as usize]);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZhzReport {
    /// Coefficients of `h`, lowest degree first.
    pub h: Vec<f64>,
    /// Largest relative mismatch over coefficients `N+1..=M`.
    pub residual: f64,
}

/// Applies `R^{s,t}` to the Taylor coefficients of `(1-x)^{-(d+1+s+N)}`,
/// fits `h` of degree `N` from the first `N+1` coefficients of
/// `h(x)(1-x)^{-(d+1+s+N+t)}`, and checks coefficients `N+1..=M`.
pub fn zhz_check(d: u32, s: f64, t: f64, big_n: u32, big_m: u32) -> Result<ZhzReport> {
    check_radial_params(d, s, t)?;
    if big_m < big_n + 20 {
        return Err(Error::Parameter(format!("truncation M = {big_m} must be at least N + 20")));
    }
    let a = d as f64 + 1.0 + s + big_n as f64;
    let lambda = a + t;
    let m = big_m as usize;
    let mut b = Vec::with_capacity(m + 1);
    let mut g = Vec::with_capacity(m + 1);
    let mut fact = 1.0;
    for j in 0..=m {
        if j > 0 {
            fact *= j as f64;
        }
        b.push(radial_multiplier(d, s, t, j as u64)? * pochhammer(a, j as u64) / fact);
        g.push(pochhammer(lambda, j as u64) / fact);
    }
    let n = big_n as usize;
    let mut h = vec![0.0; n + 1];
    for j in 0..=n {
        let known: f64 = (0..j).map(|i| h[i] * g[j - i]).sum();
        h[j] = (b[j] - known) / g[0];
    }
    let mut residual: f64 = 0.0;
    for j in n + 1..=m {
        let predicted: f64 = (0..=n).map(|i| h[i] * g[j - i]).sum();
        let scale = b[j].abs().max(f64::MIN_POSITIVE);
        residual = residual.max((b[j] - predicted).abs() / scale);
    }
    Ok(ZhzReport { h, residual })
}
