//! Integrals over the unit ball: Forelli–Rudin integrals
//! `J_{c,t}(z) = ∫ (1-|w|²)^t / |1-⟨z,w⟩|^{c+t} dv(w)` by series, closed form
//! and quadrature, the annulus integral `I_α`, Berezin transforms of `K_α`,
//! the trace integral and the compactness probe `H_z`.

pub mod grid;
pub mod kernel;

use num_complex::Complex64;
use serde::Serialize;

pub use grid::{BallGrid, GridLayout, GridSpec};
pub use kernel::{holomorphic_power, inner, norm_sqr, KernelField};

use crate::error::{Error, Result};
use crate::specfun::{hyp2f1, hyp2f1_capped, log_gamma, HypergeometricQuery, DEFAULT_MAX_TERMS};

/// Default relative tolerance for the internal two-grid comparison.
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;
pub const FR_QUADRATURE_MAX_RADIUS: f64 = 0.999;
pub const BEREZIN_MAX_RADIUS: f64 = 0.95;

/// Parameters of `J_{c,t}` evaluated at `|z| = r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FRQuery {
    pub c: f64,
    pub t: f64,
    pub r: f64,
}

impl FRQuery {
    pub fn new(c: f64, t: f64, r: f64) -> Result<Self> {
        if !(t > -1.0) {
            return Err(Error::Range(format!("t = {t} must exceed -1")));
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Range(format!("radius {r} outside [0, 1]")));
        }
        if !c.is_finite() {
            return Err(Error::Parameter("c must be finite".into()));
        }
        Ok(Self { c, t, r })
    }
}

fn ln_gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(|g| g.log_abs)
}

/// `Γ(1+d)Γ(1+t)/Γ(1+d+t) = ∫ (1-|w|²)^t dv`.
pub fn weighted_volume(d: u32, t: f64) -> Result<f64> {
    let d = d as f64;
    Ok((ln_gamma(1.0 + d)? + ln_gamma(1.0 + t)? - ln_gamma(1.0 + d + t)?).exp())
}

/// `J_{c,t}(r) = Γ(1+d)Γ(1+t)/Γ(1+d+t) · ₂F₁(β/2, β/2; 1+d+t; r²)`, `β = c+t`.
pub fn fr_series(q: &FRQuery, d: u32, tol: f64) -> Result<f64> {
    fr_series_capped(q, d, tol, DEFAULT_MAX_TERMS)
}

pub fn fr_series_capped(q: &FRQuery, d: u32, tol: f64, max_terms: usize) -> Result<f64> {
    let beta = q.c + q.t;
    let hq = HypergeometricQuery::new(0.5 * beta, 0.5 * beta, 1.0 + d as f64 + q.t, q.r * q.r);
    Ok(weighted_volume(d, q.t)? * hyp2f1_capped(&hq, tol, max_terms)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Boundary {
    Finite(f64),
    Infinite,
}

/// Value of `J_{β-γ,γ}` on the unit sphere:
/// `Γ(d+1)Γ(γ+1)Γ(d+γ+1-β)/Γ(d+γ+1-β/2)²` when `β < d+1+γ`.
pub fn fr_boundary(beta: f64, gamma: f64, d: u32) -> Result<Boundary> {
    if !(gamma > -1.0) {
        return Err(Error::Range(format!("gamma = {gamma} must exceed -1")));
    }
    let df = d as f64;
    if !(beta < df + 1.0 + gamma) {
        return Ok(Boundary::Infinite);
    }
    let log = ln_gamma(df + 1.0)? + ln_gamma(gamma + 1.0)? + ln_gamma(df + gamma + 1.0 - beta)?
        - 2.0 * ln_gamma(df + gamma + 1.0 - 0.5 * beta)?;
    Ok(Boundary::Finite(log.exp()))
}

fn check_grid_dim(grid: &BallGrid, d: u32) -> Result<()> {
    if grid.dim() != d {
        return Err(Error::Parameter(format!("grid dimension {} does not match d = {d}", grid.dim())));
    }
    Ok(())
}

// Integrates on `grid` and, when the grid has a refinable layout, on the
// doubled grid; a disagreement above 10·tol (relative) is an error.
fn two_grid<F>(grid: &BallGrid, tol: f64, f: F) -> Result<f64>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    let coarse = grid.integrate(&f);
    if let Some(fine) = grid.refined() {
        let fine = fine?.integrate(&f);
        let difference = (coarse - fine).abs();
        let limit = 10.0 * tol * fine.abs();
        if difference > limit {
            return Err(Error::GridTooCoarse { difference, limit });
        }
    }
    Ok(coarse)
}

/// Direct quadrature of `J_{c,t}(z)` at `z = (z_radius, 0, …, 0)`.
pub fn fr_quadrature(c: f64, t: f64, z_radius: f64, grid: &BallGrid, tol: f64) -> Result<f64> {
    FRQuery::new(c, t, z_radius)?;
    if z_radius > FR_QUADRATURE_MAX_RADIUS {
        return Err(Error::Range(format!("quadrature radius {z_radius} exceeds {FR_QUADRATURE_MAX_RADIUS}")));
    }
    let exponent = -(c + t);
    two_grid(grid, tol, |w| {
        let weight = if t == 0.0 { 1.0 } else { (1.0 - norm_sqr(w)).powf(t) };
        // ⟨z,w⟩ = z_radius · conj(w₁)
        let m = (Complex64::new(1.0, 0.0) - w[0].conj() * z_radius).norm();
        weight * m.powf(exponent)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AsymptoticRegime {
    Bounded,
    Log,
    Power { exponent: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub regime: AsymptoticRegime,
    /// Fitted exponent `e` in `J(r_{k+1}) - J(r_k) ∝ (1-r²)^e`.
    pub slope: f64,
    /// `(r, J(r))` samples.
    pub samples: Vec<(f64, f64)>,
}

pub fn default_classify_radii() -> Vec<f64> {
    (2..=6).map(|k| 1.0 - 10f64.powi(-k)).collect()
}

const CLASSIFY_TOL: f64 = 1e-13;
const CLASSIFY_MAX_TERMS: usize = 400_000_000;
const LOG_BAND: f64 = 0.05;
const DECISIVE: f64 = 0.1;

/// Classifies the growth of `J_{c,t}(r)` as `r → 1`.
///
/// Successive differences of `J` at radii approaching 1 scale like
/// `(1-r²)^e` with `e = d+1-c` in every regime: `J(1) - J(r)` for bounded,
/// constant steps for the logarithm, and the power itself for blow-up. A
/// least-squares fit of `ln|ΔJ|` against `ln(1-r²)` recovers `e`; `|e| <= 0.05`
/// reads as logarithmic, `|e| >= 0.1` as bounded or power, anything between
/// is ambiguous.
pub fn fr_asymptotic_classify(c: f64, t: f64, d: u32, radii: &[f64]) -> Result<AsymptoticFit> {
    if radii.len() < 3 {
        return Err(Error::Parameter("need at least three radii".into()));
    }
    if radii.windows(2).any(|w| !(w[0] < w[1])) || radii[0] <= 0.0 || radii[radii.len() - 1] >= 1.0 {
        return Err(Error::Parameter("radii must increase strictly inside (0, 1)".into()));
    }
    let mut samples = Vec::with_capacity(radii.len());
    for &r in radii {
        let q = FRQuery::new(c, t, r)?;
        samples.push((r, fr_series_capped(&q, d, CLASSIFY_TOL, CLASSIFY_MAX_TERMS)?));
    }
    let scale = samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for w in samples.windows(2) {
        let delta = w[1].1 - w[0].1;
        if delta.abs() <= 1e-14 * scale {
            continue;
        }
        let r = w[1].0;
        xs.push(((1.0 - r) * (1.0 + r)).ln());
        ys.push(delta.abs().ln());
    }
    if xs.len() < 2 {
        // J is constant to rounding.
        return Ok(AsymptoticFit { regime: AsymptoticRegime::Bounded, slope: f64::INFINITY, samples });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let regime = if slope.abs() <= LOG_BAND {
        AsymptoticRegime::Log
    } else if slope >= DECISIVE {
        AsymptoticRegime::Bounded
    } else if slope <= -DECISIVE {
        AsymptoticRegime::Power { exponent: slope }
    } else {
        return Err(Error::AmbiguousFit { slope });
    };
    Ok(AsymptoticFit { regime, slope, samples })
}

/// Annulus integral
/// `I_α(r, z) = Σ_j ((α/2)_j)² Γ(d+1)/(j!(j+d)!) (1 - r^{2(j+d)}) |z|^{2j}`,
/// summed as `F(|z|²) - r^{2d} F(r²|z|²)` with `F = ₂F₁(α/2, α/2; d+1; ·)`.
pub fn i_alpha(alpha: f64, r: f64, z_radius: f64, d: u32, tol: f64) -> Result<f64> {
    let df = d as f64;
    if !(alpha < df + 1.0) {
        return Err(Error::Range(format!("alpha = {alpha} must be below d + 1")));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Range(format!("inner radius {r} outside [0, 1)")));
    }
    if !(0.0..=1.0).contains(&z_radius) {
        return Err(Error::Range(format!("radius {z_radius} outside [0, 1]")));
    }
    let a = 0.5 * alpha;
    let outer = hyp2f1(&HypergeometricQuery::new(a, a, df + 1.0, z_radius * z_radius), tol)?;
    if r == 0.0 {
        return Ok(outer);
    }
    let inner_arg = r * r * z_radius * z_radius;
    let inner = hyp2f1(&HypergeometricQuery::new(a, a, df + 1.0, inner_arg), tol)?;
    Ok(outer - r.powi(2 * d as i32) * inner)
}

/// `Γ(d+1)Γ(d+1-α)/Γ(d+1-α/2)²`, the supremum of `I_α`.
pub fn i_alpha_bound(alpha: f64, d: u32) -> Result<f64> {
    let df = d as f64;
    Ok((ln_gamma(df + 1.0)? + ln_gamma(df + 1.0 - alpha)? - 2.0 * ln_gamma(df + 1.0 - 0.5 * alpha)?).exp())
}

/// Berezin transform of `K_α`: `(1-|z|²)^{d+1-α}`.
pub fn berezin_closed(alpha: f64, d: u32, z_radius: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z_radius) {
        return Err(Error::Range(format!("radius {z_radius} outside [0, 1)")));
    }
    Ok((1.0 - z_radius * z_radius).powf(d as f64 + 1.0 - alpha))
}

/// `(1-|z|²)^{d+1} ∫ (1-⟨w,z⟩)^{-α} (1-⟨z,w⟩)^{-(d+1)} dv(w)` by quadrature.
pub fn berezin_quadrature(alpha: f64, d: u32, z_radius: f64, grid: &BallGrid, tol: f64) -> Result<f64> {
    check_grid_dim(grid, d)?;
    if !(0.0..=BEREZIN_MAX_RADIUS).contains(&z_radius) {
        return Err(Error::Range(format!("radius {z_radius} outside [0, {BEREZIN_MAX_RADIUS}]")));
    }
    let d1 = d as f64 + 1.0;
    let one = Complex64::new(1.0, 0.0);
    let integral = two_grid(grid, tol, |w| {
        // ⟨w,z⟩ = w₁ z_radius
        let zw = w[0] * z_radius;
        let k_alpha = (-(one - zw).ln() * alpha).exp();
        let k_z = (-(one - zw.conj()).ln() * d1).exp();
        (k_alpha * k_z).re
    })?;
    Ok((1.0 - z_radius * z_radius).powf(d1) * integral)
}

/// `Tr K_α = Γ(d+1)Γ(1-α)/Γ(d+1-α)` for `α < 1`.
pub fn trace_formula(alpha: f64, d: u32) -> Result<f64> {
    if !(alpha < 1.0) {
        return Err(Error::NotTraceClass { alpha });
    }
    let df = d as f64;
    Ok((ln_gamma(df + 1.0)? + ln_gamma(1.0 - alpha)? - ln_gamma(df + 1.0 - alpha)?).exp())
}

/// `‖H_z‖_q^q = (1-|z|²)^s J_{c',0}(z)` with `c' = s + q(d+1)/p + q(α-d-1)`.
pub fn probe_norm(alpha: f64, d: u32, p: f64, q: f64, s: f64, z_radius: f64, tol: f64) -> Result<f64> {
    let df = d as f64;
    if !(p >= 1.0 && p.is_finite() && q >= 1.0 && q.is_finite()) {
        return Err(Error::Parameter(format!("probe exponents p = {p}, q = {q} must be finite and >= 1")));
    }
    let k = s / q - (1.0 - 1.0 / p) * (df + 1.0);
    if !(s > 0.0) || k < -1e-9 || (k - k.round()).abs() > 1e-9 {
        return Err(Error::Parameter(format!(
            "s/q - (1 - 1/p)(d+1) = {k} must be a nonnegative integer"
        )));
    }
    if !(0.0..1.0).contains(&z_radius) {
        return Err(Error::Range(format!("radius {z_radius} outside [0, 1)")));
    }
    let c = s + q * (df + 1.0) / p + q * (alpha - df - 1.0);
    let j = fr_series(&FRQuery::new(c, 0.0, z_radius)?, d, tol)?;
    Ok((1.0 - z_radius * z_radius).powf(s) * j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn fr_series_examples() {
        for d in 1..4 {
            for t in [0.0, 1.0, 2.5] {
                let v = fr_series(&FRQuery::new(1.3, t, 0.0).unwrap(), d, 1e-14).unwrap();
                assert!(rel(v, weighted_volume(d, t).unwrap()) < 1e-14);
            }
        }
        let v = fr_series(&FRQuery::new(1.0, 0.0, 1.0).unwrap(), 1, 1e-14).unwrap();
        assert!(rel(v, 4.0 / PI) < 1e-13);
        // Γ(2.5)² = (3√π/4)²
        let v = fr_series(&FRQuery::new(1.0, 0.0, 1.0).unwrap(), 2, 1e-14).unwrap();
        assert!(rel(v, 2.0 / (9.0 * PI / 16.0)) < 1e-13);
        let q = FRQuery::new(2.0, 0.0, 1.0).unwrap();
        assert!(matches!(fr_series(&q, 1, 1e-12), Err(Error::Divergence { .. })));
    }

    #[test]
    fn fr_boundary_examples() {
        for d in 1..5 {
            match fr_boundary(0.0, 0.0, d).unwrap() {
                Boundary::Finite(v) => assert!((v - 1.0).abs() < 1e-14),
                Boundary::Infinite => panic!("expected finite"),
            }
        }
        match fr_boundary(1.0, 0.0, 1).unwrap() {
            Boundary::Finite(v) => assert!(rel(v, 4.0 / PI) < 1e-13),
            Boundary::Infinite => panic!("expected finite"),
        }
        assert_eq!(fr_boundary(2.0, 0.0, 1).unwrap(), Boundary::Infinite);
    }

    #[test]
    fn fr_quadrature_constant_kernel() {
        for d in 1..3 {
            let g = BallGrid::reduced(d);
            for t in [0.0, 1.0] {
                let v = fr_quadrature(-t, t, 0.7, &g, DEFAULT_QUAD_TOL).unwrap();
                assert!(rel(v, weighted_volume(d, t).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn fr_quadrature_examples() {
        let g = BallGrid::reduced(1);
        let q = fr_quadrature(1.0, 0.0, 0.5, &g, DEFAULT_QUAD_TOL).unwrap();
        let s = fr_series(&FRQuery::new(1.0, 0.0, 0.5).unwrap(), 1, 1e-15).unwrap();
        assert!(rel(q, s) < 1e-6);
    }

    #[test]
    fn too_coarse_grid_is_reported() {
        let g = BallGrid::new(GridSpec { d: 1, layout: GridLayout::Polar, radial: 3, angular: 4, disk_radial: 0 })
            .unwrap();
        let r = fr_quadrature(2.5, 0.0, 0.9, &g, DEFAULT_QUAD_TOL);
        assert!(matches!(r, Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn classify_examples() {
        let radii = default_classify_radii();
        for d in 1..3 {
            let df = d as f64;
            let fit = fr_asymptotic_classify(df, 0.0, d, &radii).unwrap();
            assert_eq!(fit.regime, AsymptoticRegime::Bounded, "d={d} slope={}", fit.slope);
            let fit = fr_asymptotic_classify(df + 1.0, 0.0, d, &radii).unwrap();
            assert_eq!(fit.regime, AsymptoticRegime::Log, "d={d} slope={}", fit.slope);
            let fit = fr_asymptotic_classify(df + 2.0, 0.0, d, &radii).unwrap();
            match fit.regime {
                AsymptoticRegime::Power { exponent } => assert!((exponent + 1.0).abs() < 0.03),
                other => panic!("d={d}: {other:?}"),
            }
        }
    }

    #[test]
    fn i_alpha_examples() {
        for d in 1..4 {
            for alpha in [-1.5, 0.5, 1.0, 2.2] {
                if alpha >= d as f64 + 1.0 {
                    continue;
                }
                let v = i_alpha(alpha, 0.0, 1.0, d, 1e-14).unwrap();
                assert!(rel(v, i_alpha_bound(alpha, d).unwrap()) < 1e-13);
                let v = i_alpha(alpha, 0.6, 0.0, d, 1e-14).unwrap();
                assert!(rel(v, 1.0 - 0.6f64.powi(2 * d as i32)) < 1e-14);
                let lo = i_alpha(alpha, 0.4, 0.3, d, 1e-14).unwrap();
                let hi = i_alpha(alpha, 0.4, 0.7, d, 1e-14).unwrap();
                assert!(lo <= hi);
            }
        }
    }

    #[test]
    fn berezin_examples() {
        assert_eq!(berezin_closed(0.7, 2, 0.0).unwrap(), 1.0);
        assert_eq!(berezin_closed(3.0, 2, 0.8).unwrap(), 1.0);
        assert!((berezin_closed(0.5, 1, 0.6).unwrap() - 0.512).abs() < 1e-15);
        let g = BallGrid::reduced(1);
        let v = berezin_quadrature(1.0, 1, 0.5, &g, DEFAULT_QUAD_TOL).unwrap();
        assert!((v - 0.75).abs() < 1e-6);
        let v = berezin_quadrature(1.0, 1, 0.0, &g, DEFAULT_QUAD_TOL).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_examples() {
        assert!((trace_formula(0.0, 3).unwrap() - 1.0).abs() < 1e-14);
        assert!((trace_formula(0.5, 1).unwrap() - 2.0).abs() < 1e-14);
        assert!((trace_formula(-1.0, 2).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!(matches!(trace_formula(1.0, 2), Err(Error::NotTraceClass { .. })));
    }

    #[test]
    fn probe_examples() {
        // d=1, α=1, p=4, q=2: s/2 - 3/2 ∈ ℕ.
        let s = 9.0;
        let v0 = probe_norm(1.0, 1, 4.0, 2.0, s, 0.0, 1e-14).unwrap();
        let c = s + 2.0 * 2.0 / 4.0 + 2.0 * (1.0 - 2.0);
        assert!(rel(v0, weighted_volume(1, 0.0).unwrap()) < 1e-14 && c > 0.0);
        let vals: Vec<f64> =
            [0.9, 0.99, 0.999].iter().map(|&r| probe_norm(1.0, 1, 4.0, 2.0, s, r, 1e-12).unwrap()).collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2] && vals[2] < 1e-3);
        // p = 4/3, q = 4: 1/q = 1/p + α/(d+1) - 1 holds with equality.
        let s = 6.0;
        let vals: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&r| probe_norm(1.0, 1, 4.0 / 3.0, 4.0, s, r, 1e-12).unwrap())
            .collect();
        assert!(vals.iter().all(|&v| v > 0.5), "{vals:?}");
        assert!(matches!(probe_norm(1.0, 1, 4.0, 2.0, 4.0, 0.5, 1e-12), Err(Error::Parameter(_))));
    }
}
