//! Dense Hermitian eigenvalues: Householder reduction to a real tridiagonal
//! matrix followed by implicit QL, and cyclic Jacobi on the real embedding as
//! an independent cross-check.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_DIMENSION: usize = 5000;
const QL_MAX_ITERATIONS: usize = 60;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major square matrix, assumed Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Parameter(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Eigenvalues in ascending order.
pub fn hermitian_eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    if a.n > MAX_DIMENSION {
        return Err(Error::Parameter(format!("dimension {} exceeds {MAX_DIMENSION}", a.n)));
    }
    let (mut diag, mut off) = tridiagonalize(a);
    tridiagonal_ql(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

/// Eigenvalue magnitudes, non-increasing.
pub fn eigensolve(a: &HermitianMatrix) -> Result<Vec<f64>> {
    let mut v: Vec<f64> = hermitian_eigenvalues(a)?.into_iter().map(f64::abs).collect();
    v.sort_by(|x, y| y.total_cmp(x));
    Ok(v)
}

// Returns the diagonal and the moduli of the subdiagonal; a diagonal unitary
// similarity makes the complex subdiagonal real without changing eigenvalues.
fn tridiagonalize(a: &HermitianMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.n;
    let mut m = a.data.clone();
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![Complex64::default(); n];
    let mut p = vec![Complex64::default(); n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let norm: f64 = (lo..n).map(|i| m[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = m[lo * n + k];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in lo..n {
            v[i] = m[i * n + k];
        }
        v[lo] -= alpha;
        let vnorm: f64 = (lo..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in &mut v[lo..n] {
            *vi /= vnorm;
        }
        // p = A v on the trailing block, w = p - (v* p) v, A -= 2(v w* + w v*);
        // only the lower triangle is read and written.
        for pi in &mut p[lo..n] {
            *pi = Complex64::default();
        }
        for i in lo..n {
            let row = &m[i * n + lo..i * n + i];
            let vi = v[i];
            let mut acc = m[i * n + i] * vi;
            for (j, a) in row.iter().enumerate() {
                let jj = lo + j;
                acc += a * v[jj];
                p[jj] += a.conj() * vi;
            }
            p[i] += acc;
        }
        let kv: Complex64 = (lo..n).map(|i| v[i].conj() * p[i]).sum();
        for i in lo..n {
            p[i] -= kv * v[i];
        }
        for i in lo..n {
            let (vi, wi) = (2.0 * v[i], 2.0 * p[i]);
            let row = &mut m[i * n + lo..i * n + i + 1];
            for ((entry, pj), vj) in row.iter_mut().zip(&p[lo..=i]).zip(&v[lo..=i]) {
                *entry -= vi * pj.conj() + wi * vj.conj();
            }
        }
        m[lo * n + k] = alpha;
        for i in lo + 1..n {
            m[i * n + k] = Complex64::default();
        }
    }
    let diag = (0..n).map(|i| m[i * n + i].re).collect();
    for (i, e) in off.iter_mut().enumerate() {
        *e = m[(i + 1) * n + i].norm();
    }
    (diag, off)
}

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix;
// `diag` is overwritten with the eigenvalues.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n <= 1 {
        return Ok(());
    }
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    // Couplings below rounding of the whole matrix are dropped; the absolute
    // floor keeps clusters of near-zero eigenvalues from stalling.
    let norm = diag.iter().map(|x| x.abs()).fold(0.0, f64::max) + 2.0 * off.iter().fold(0.0, |a: f64, b| a.max(b.abs()));
    let floor = 0.5 * f64::EPSILON * norm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITERATIONS {
                return Err(Error::NoConvergence { sweeps: iter });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues in ascending order by cyclic Jacobi on the real symmetric
/// embedding `[[Re A, -Im A], [Im A, Re A]]`, whose spectrum is that of `A`
/// with every eigenvalue doubled.
pub fn jacobi_eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = a.n;
    let m2 = 2 * n;
    let mut s = vec![0.0; m2 * m2];
    for i in 0..n {
        for j in 0..n {
            let z = a.get(i, j);
            s[i * m2 + j] = z.re;
            s[(i + n) * m2 + j + n] = z.re;
            s[(i + n) * m2 + j] = z.im;
            s[i * m2 + j + n] = -z.im;
        }
    }
    let scale = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off = |s: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..m2 {
            for j in 0..m2 {
                if i != j {
                    acc += s[i * m2 + j] * s[i * m2 + j];
                }
            }
        }
        acc.sqrt()
    };
    let mut sweeps = 0;
    while off(&s) > 1e-13 * scale {
        sweeps += 1;
        if sweeps > JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..m2 {
            for q in p + 1..m2 {
                let apq = s[p * m2 + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (s[q * m2 + q] - s[p * m2 + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let sn = t * c;
                for k in 0..m2 {
                    let akp = s[k * m2 + p];
                    let akq = s[k * m2 + q];
                    s[k * m2 + p] = c * akp - sn * akq;
                    s[k * m2 + q] = sn * akp + c * akq;
                }
                for k in 0..m2 {
                    let apk = s[p * m2 + k];
                    let aqk = s[q * m2 + k];
                    s[p * m2 + k] = c * apk - sn * aqk;
                    s[q * m2 + k] = sn * apk + c * aqk;
                }
            }
        }
    }
    let mut all: Vec<f64> = (0..m2).map(|i| s[i * m2 + i]).collect();
    all.sort_by(f64::total_cmp);
    Ok(all.into_iter().step_by(2).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut data = vec![Complex64::default(); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            for j in 0..i {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                data[i * n + j] = z;
                data[j * n + i] = z.conj();
            }
        }
        HermitianMatrix::from_rows(n, data).unwrap()
    }

    #[test]
    fn diagonal_input_is_sorted_by_magnitude() {
        let d = [0.5, -3.0, 2.0, 0.0, -0.1];
        let a = HermitianMatrix::from_fn(5, |i, j| if i == j { Complex64::new(d[i], 0.0) } else { Complex64::default() });
        assert_eq!(eigensolve(&a).unwrap(), vec![3.0, 2.0, 0.5, 0.1, 0.0]);
    }

    #[test]
    fn rank_one_outer_product() {
        let w = [0.1f64, 0.2, 0.3, 0.4];
        let a = HermitianMatrix::from_fn(4, |i, j| Complex64::new((w[i] * w[j]).sqrt(), 0.0));
        let v = eigensolve(&a).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-14);
        assert!(v[1..].iter().all(|&x| x <= 1e-12));
    }

    #[test]
    fn ql_and_jacobi_agree() {
        for (n, seed) in [(1, 1), (2, 2), (7, 3), (30, 4), (64, 5)] {
            let a = random_hermitian(n, seed);
            let x = hermitian_eigenvalues(&a).unwrap();
            let y = jacobi_eigenvalues(&a).unwrap();
            let scale = a.frobenius_norm();
            for (u, v) in x.iter().zip(&y) {
                assert!((u - v).abs() <= 1e-12 * scale, "n={n}: {u} vs {v}");
            }
        }
    }

    #[test]
    fn trace_and_frobenius_are_preserved() {
        let a = random_hermitian(120, 9);
        let ev = hermitian_eigenvalues(&a).unwrap();
        let trace: f64 = (0..120).map(|i| a.get(i, i).re).sum();
        assert!((ev.iter().sum::<f64>() - trace).abs() < 1e-11);
        let fro: f64 = ev.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((fro - a.frobenius_norm()).abs() < 1e-11 * fro);
    }

    #[test]
    fn known_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let a = HermitianMatrix::from_rows(
            2,
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0)],
        )
        .unwrap();
        let v = hermitian_eigenvalues(&a).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && (v[1] - 3.0).abs() < 1e-15);
    }
}
