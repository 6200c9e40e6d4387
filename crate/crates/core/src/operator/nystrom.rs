//! Nyström matrices `A_ij = √(w_i w_j) K(z_i, z_j)` on ball quadrature grids.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::eigen::{eigensolve, hermitian_eigenvalues, HermitianMatrix};
use crate::ballquad::{holomorphic_power, inner, BallGrid, GridSpec};
use crate::error::{Error, Result};
use crate::spectral::{singular_values, OperatorParams, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelKind {
    /// `(1 - ⟨z,w⟩)^{-α}`
    Holomorphic,
    /// `|1 - ⟨z,w⟩|^{-α}`
    Absolute,
}

#[derive(Debug, Clone)]
pub struct NystromMatrix {
    pub kind: KernelKind,
    pub alpha: f64,
    pub matrix: HermitianMatrix,
}

/// Relative threshold separating a finite-rank block from rounding noise.
pub const RANK_THRESHOLD: f64 = 1e-10;

fn kernel(kind: KernelKind, alpha: f64, z: &[Complex64], w: &[Complex64]) -> Complex64 {
    match kind {
        KernelKind::Holomorphic => holomorphic_power(z, w, alpha),
        KernelKind::Absolute => {
            Complex64::new((Complex64::new(1.0, 0.0) - inner(z, w)).norm().powf(-alpha), 0.0)
        }
    }
}

/// Assembles the lower triangle and mirrors it, so the matrix is exactly Hermitian.
pub fn nystrom_assemble(alpha: f64, grid: &BallGrid, kind: KernelKind) -> NystromMatrix {
    let d = grid.dim() as usize;
    let (coords, weights) = grid.materialize();
    let n = weights.len();
    let sqrt_w: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let mut data = vec![Complex64::default(); n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let zi = &coords[i * d..(i + 1) * d];
        for j in 0..=i {
            let zj = &coords[j * d..(j + 1) * d];
            row[j] = kernel(kind, alpha, zi, zj) * (sqrt_w[i] * sqrt_w[j]);
        }
    });
    for i in 0..n {
        for j in 0..i {
            data[j * n + i] = data[i * n + j].conj();
        }
        data[i * n + i].im = 0.0;
    }
    let matrix = HermitianMatrix::from_rows(n, data).expect("square by construction");
    NystromMatrix { kind, alpha, matrix }
}

/// Product grid for `K_α` spectra: 8 Gauss–Legendre nodes in `r²` and
/// `angular` trapezoid nodes per angle.
pub fn nystrom_grid(d: u32, angular: usize) -> Result<BallGrid> {
    BallGrid::new(GridSpec::product(d, 8, 8, angular))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub nodes: usize,
    pub computed: Vec<f64>,
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub targets: Vec<f64>,
    pub rows: Vec<SpectrumRow>,
    /// Errors are non-increasing along `rows`.
    pub monotone: bool,
    /// Smallest ratio between consecutive errors.
    pub min_reduction: f64,
}

/// Compares the top `top_k` Nyström magnitudes on each grid with the
/// multiplicity-expanded analytic singular values.
pub fn spectrum_compare(params: &OperatorParams, grids: &[BallGrid], top_k: usize) -> Result<SpectrumTable> {
    if params.regime == Regime::Supercritical {
        return Err(Error::Supercritical { alpha: params.alpha, d: params.d });
    }
    let targets: Vec<f64> = singular_values(params, top_k)?.into_iter().map(|e| e.value).collect();
    let mut rows = Vec::with_capacity(grids.len());
    for grid in grids {
        if grid.dim() != params.d {
            return Err(Error::Parameter(format!("grid dimension {} does not match d = {}", grid.dim(), params.d)));
        }
        let m = nystrom_assemble(params.alpha, grid, KernelKind::Holomorphic);
        let mut computed = eigensolve(&m.matrix)?;
        computed.truncate(top_k);
        computed.resize(top_k, 0.0);
        let max_error = computed.iter().zip(&targets).map(|(c, t)| (c - t).abs()).fold(0.0, f64::max);
        rows.push(SpectrumRow { nodes: grid.len(), computed, max_error });
    }
    let monotone = rows.windows(2).all(|w| w[1].max_error <= w[0].max_error);
    let min_reduction = rows.windows(2).map(|w| w[0].max_error / w[1].max_error).fold(f64::INFINITY, f64::min);
    Ok(SpectrumTable { targets, rows, monotone, min_reduction })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// `binomial(N+d, d)`, the rank of `K_{-N}`.
    pub holomorphic_rank: u64,
    pub leading: f64,
    /// Largest magnitude counted as zero, relative to `leading`.
    pub gap_below: f64,
}

/// Numerical rank of the Nyström matrix of `K_{-N}` (Holomorphic) or
/// `K⁺_{-2N}` (Absolute).
pub fn finite_rank_check(big_n: u32, d: u32, kind: KernelKind, grid: &BallGrid) -> Result<RankReport> {
    if grid.dim() != d {
        return Err(Error::Parameter(format!("grid dimension {} does not match d = {d}", grid.dim())));
    }
    let alpha = match kind {
        KernelKind::Holomorphic => -(big_n as f64),
        KernelKind::Absolute => -2.0 * big_n as f64,
    };
    let m = nystrom_assemble(alpha, grid, kind);
    let values = eigensolve(&m.matrix)?;
    let leading = values[0];
    let rank = values.iter().take_while(|&&v| v > RANK_THRESHOLD * leading).count();
    let gap_below = values.get(rank).map_or(0.0, |v| v / leading);
    let holomorphic_rank = crate::spectral::cumulative_count(d, big_n as u64);
    Ok(RankReport { rank, holomorphic_rank, leading, gap_below })
}

/// Smallest signed eigenvalue, for positivity checks.
pub fn min_eigenvalue(m: &NystromMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(&m.matrix)?[0])
}
