//! Quadrature grids on the unit ball of `ℂ^d` for the normalized volume `dv`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_unit;
use crate::sum::NeumaierComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GridLayout {
    /// `d = 1`: Gauss–Legendre in `r` against `2r dr`, trapezoid in the angle.
    Polar,
    /// `d >= 2`: nodes `(r u, r √(1-|u|²), 0, …)` with `u` in the unit disk
    /// weighted by `(d-1)(1-|u|²)^{d-2}`. Exact only for integrands that
    /// depend on `w` through `w₁` and `|w|`.
    Slice,
    /// Full tensor rule: Gauss–Legendre in `r²`, stick-breaking Gauss–Legendre
    /// for the squared moduli on the sphere, trapezoid in every angle.
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub d: u32,
    pub layout: GridLayout,
    pub radial: usize,
    pub angular: usize,
    /// Inner-disk nodes (`Slice`) or nodes per stick-breaking level (`Product`).
    pub disk_radial: usize,
}

pub const DEFAULT_RADIAL: usize = 128;
pub const DEFAULT_ANGULAR: usize = 256;
pub const DEFAULT_DISK_RADIAL: usize = 64;

impl GridSpec {
    /// Default rule for integrands that only see `w₁` and `|w|`.
    pub fn reduced(d: u32) -> Self {
        if d == 1 {
            Self { d, layout: GridLayout::Polar, radial: DEFAULT_RADIAL, angular: DEFAULT_ANGULAR, disk_radial: 0 }
        } else {
            Self {
                d,
                layout: GridLayout::Slice,
                radial: DEFAULT_RADIAL,
                angular: DEFAULT_ANGULAR,
                disk_radial: DEFAULT_DISK_RADIAL,
            }
        }
    }

    pub fn product(d: u32, radial: usize, sphere_radial: usize, angular: usize) -> Self {
        Self { d, layout: GridLayout::Product, radial, angular, disk_radial: if d == 1 { 0 } else { sphere_radial } }
    }

    pub fn refined(&self) -> Self {
        Self { radial: 2 * self.radial, angular: 2 * self.angular, disk_radial: 2 * self.disk_radial, ..*self }
    }

    pub fn node_count(&self) -> usize {
        let d = self.d as usize;
        match self.layout {
            GridLayout::Polar => self.radial * self.angular,
            GridLayout::Slice => self.radial * self.disk_radial * self.angular,
            GridLayout::Product => {
                self.radial * self.disk_radial.pow(d as u32 - 1) * self.angular.pow(d as u32)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Parameter("grid dimension must be at least 1".into()));
        }
        if self.radial == 0 || self.angular == 0 {
            return Err(Error::Parameter("grid needs radial and angular nodes".into()));
        }
        match self.layout {
            GridLayout::Polar if self.d != 1 => Err(Error::Parameter("polar layout is for d = 1".into())),
            GridLayout::Slice if self.d < 2 => Err(Error::Parameter("slice layout is for d >= 2".into())),
            GridLayout::Slice if self.disk_radial == 0 => {
                Err(Error::Parameter("slice layout needs inner-disk nodes".into()))
            }
            GridLayout::Product if self.d >= 2 && self.disk_radial == 0 => {
                Err(Error::Parameter("product layout needs sphere nodes".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
struct RadialRule {
    r: Vec<f64>,
    w: Vec<f64>,
}

#[derive(Debug, Clone)]
enum Storage {
    Polar { radial: RadialRule, angles: Vec<Complex64> },
    Slice { radial: RadialRule, disk: Vec<(f64, f64, f64)>, angles: Vec<Complex64> },
    Explicit { coords: Vec<Complex64>, weights: Vec<f64> },
}

/// Nodes with positive weights on `B^d`; weights sum to 1.
#[derive(Debug, Clone)]
pub struct BallGrid {
    d: u32,
    spec: Option<GridSpec>,
    storage: Storage,
}

fn unit_angles(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect()
}

// Gauss–Legendre in r against 2d r^{2d-1} dr.
fn radial_in_r(n: usize, d: u32) -> RadialRule {
    let (x, w) = gauss_legendre_unit(n);
    let two_d = 2.0 * d as f64;
    let w = x.iter().zip(&w).map(|(r, w)| w * two_d * r.powi(2 * d as i32 - 1)).collect();
    RadialRule { r: x, w }
}

// Gauss–Legendre in u = r² against d u^{d-1} du.
fn radial_in_r_squared(n: usize, d: u32) -> RadialRule {
    let (u, w) = gauss_legendre_unit(n);
    let df = d as f64;
    let w = u.iter().zip(&w).map(|(u, w)| w * df * u.powi(d as i32 - 1)).collect();
    RadialRule { r: u.iter().map(|u| u.sqrt()).collect(), w }
}

impl BallGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let storage = match spec.layout {
            GridLayout::Polar => Storage::Polar { radial: radial_in_r(spec.radial, 1), angles: unit_angles(spec.angular) },
            GridLayout::Slice => {
                let (s, ws) = gauss_legendre_unit(spec.disk_radial);
                let dm1 = spec.d as f64 - 1.0;
                let disk = s
                    .iter()
                    .zip(&ws)
                    .map(|(&s, &w)| (s.sqrt(), (1.0 - s).sqrt(), w * dm1 * (1.0 - s).powi(spec.d as i32 - 2)))
                    .collect();
                Storage::Slice { radial: radial_in_r(spec.radial, spec.d), disk, angles: unit_angles(spec.angular) }
            }
            GridLayout::Product => {
                let (coords, weights) = product_nodes(&spec);
                Storage::Explicit { coords, weights }
            }
        };
        Ok(Self { d: spec.d, spec: Some(spec), storage })
    }

    /// Default grid for integrands depending on `w₁` and `|w|` only.
    pub fn reduced(d: u32) -> Self {
        Self::new(GridSpec::reduced(d)).expect("default spec is valid")
    }

    /// Grid from explicit nodes (`d` coordinates per node, row-major).
    pub fn from_nodes(d: u32, coords: Vec<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if d == 0 || coords.len() != weights.len() * d as usize {
            return Err(Error::Parameter("node array does not match weights and dimension".into()));
        }
        for (i, node) in coords.chunks(d as usize).enumerate() {
            let norm2: f64 = node.iter().map(|c| c.norm_sqr()).sum();
            if !(norm2 < 1.0) {
                return Err(Error::Parameter(format!("node {i} lies outside the open ball")));
            }
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::Parameter("weights must be positive".into()));
        }
        Ok(Self { d, spec: None, storage: Storage::Explicit { coords, weights } })
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn spec(&self) -> Option<&GridSpec> {
        self.spec.as_ref()
    }

    pub fn len(&self) -> usize {
        match &self.storage {
            Storage::Polar { radial, angles } => radial.r.len() * angles.len(),
            Storage::Slice { radial, disk, angles } => radial.r.len() * disk.len() * angles.len(),
            Storage::Explicit { weights, .. } => weights.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The same layout with every node count doubled.
    pub fn refined(&self) -> Option<Result<Self>> {
        self.spec.map(|s| Self::new(s.refined()))
    }

    /// Explicit node coordinates (row-major, `d` per node) and weights.
    pub fn materialize(&self) -> (Vec<Complex64>, Vec<f64>) {
        let d = self.d as usize;
        let mut coords = Vec::with_capacity(self.len() * d);
        let mut weights = Vec::with_capacity(self.len());
        self.for_each_chunk_node(|_, w, wt| {
            coords.extend_from_slice(w);
            weights.push(wt);
        });
        (coords, weights)
    }

    fn chunk_count(&self) -> usize {
        match &self.storage {
            Storage::Polar { radial, .. } | Storage::Slice { radial, .. } => radial.r.len(),
            Storage::Explicit { weights, .. } => weights.len().div_ceil(EXPLICIT_CHUNK),
        }
    }

    // Calls f(node, weight) for every node of chunk `c`.
    fn visit_chunk(&self, c: usize, mut f: impl FnMut(&[Complex64], f64)) {
        let d = self.d as usize;
        match &self.storage {
            Storage::Polar { radial, angles } => {
                let (r, wr) = (radial.r[c], radial.w[c] / angles.len() as f64);
                for e in angles {
                    f(&[e * r], wr);
                }
            }
            Storage::Slice { radial, disk, angles } => {
                let (r, wr) = (radial.r[c], radial.w[c] / angles.len() as f64);
                let mut node = vec![Complex64::new(0.0, 0.0); d];
                for &(rho, comp, wd) in disk {
                    node[1] = Complex64::new(r * comp, 0.0);
                    for e in angles {
                        node[0] = e * (r * rho);
                        f(&node, wr * wd);
                    }
                }
            }
            Storage::Explicit { coords, weights } => {
                let lo = c * EXPLICIT_CHUNK;
                let hi = (lo + EXPLICIT_CHUNK).min(weights.len());
                for i in lo..hi {
                    f(&coords[i * d..(i + 1) * d], weights[i]);
                }
            }
        }
    }

    fn for_each_chunk_node(&self, mut f: impl FnMut(usize, &[Complex64], f64)) {
        for c in 0..self.chunk_count() {
            self.visit_chunk(c, |w, wt| f(c, w, wt));
        }
    }

    /// `Σ_i w_i f(z_i)`, compensated per chunk and combined in chunk order so
    /// the result does not depend on thread scheduling.
    pub fn integrate_complex<F>(&self, f: F) -> Complex64
    where
        F: Fn(&[Complex64]) -> Complex64 + Sync,
    {
        let partial: Vec<NeumaierComplex> = (0..self.chunk_count())
            .into_par_iter()
            .map(|c| {
                let mut acc = NeumaierComplex::new();
                self.visit_chunk(c, |w, wt| acc.add(f(w) * wt));
                acc
            })
            .collect();
        let mut total = NeumaierComplex::new();
        for p in partial {
            total.add(p.value());
        }
        total.value()
    }

    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&[Complex64]) -> f64 + Sync,
    {
        self.integrate_complex(|w| Complex64::new(f(w), 0.0)).re
    }

    pub fn total_weight(&self) -> f64 {
        self.integrate(|_| 1.0)
    }
}

const EXPLICIT_CHUNK: usize = 4096;

fn product_nodes(spec: &GridSpec) -> (Vec<Complex64>, Vec<f64>) {
    let d = spec.d as usize;
    let radial = radial_in_r_squared(spec.radial, spec.d);
    let angles = unit_angles(spec.angular);
    let angle_w = 1.0 / spec.angular as f64;

    // Squared moduli (s_1, …, s_d) uniform on the simplex, by stick breaking:
    // level j draws x_j with density (d-1-j)(1-x)^{d-2-j}.
    let mut moduli: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
    if d >= 2 {
        let (x, wx) = gauss_legendre_unit(spec.disk_radial);
        for j in 0..d - 1 {
            let k = (d - 1 - j) as f64;
            let mut next = Vec::with_capacity(moduli.len() * x.len());
            for (prefix, w) in &moduli {
                let used: f64 = prefix.iter().sum();
                let remaining = 1.0 - used;
                for (xi, wi) in x.iter().zip(&wx) {
                    let mut p = prefix.clone();
                    p.push(remaining * xi);
                    next.push((p, w * wi * k * (1.0 - xi).powi(d as i32 - 2 - j as i32)));
                }
            }
            moduli = next;
        }
    }
    let moduli: Vec<(Vec<f64>, f64)> = moduli
        .into_iter()
        .map(|(mut s, w)| {
            let used: f64 = s.iter().sum();
            s.push((1.0 - used).max(0.0));
            (s.iter().map(|v| v.sqrt()).collect(), w)
        })
        .collect();

    let n_ang = angles.len().pow(d as u32);
    let total = radial.r.len() * moduli.len() * n_ang;
    let mut coords = Vec::with_capacity(total * d);
    let mut weights = Vec::with_capacity(total);
    for (r, wr) in radial.r.iter().zip(&radial.w) {
        for (m, wm) in &moduli {
            for a in 0..n_ang {
                let mut idx = a;
                for j in 0..d {
                    let e = angles[idx % angles.len()];
                    idx /= angles.len();
                    coords.push(e * (r * m[j]));
                }
                weights.push(wr * wm * angle_w.powi(d as i32));
            }
        }
    }
    (coords, weights)
}
