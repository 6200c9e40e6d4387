use bergman_core::ballquad::{
    berezin_closed, berezin_quadrature, fr_quadrature, fr_series, i_alpha, trace_formula, BallGrid, FRQuery,
    DEFAULT_QUAD_TOL,
};
use bergman_core::spectral::{schatten_sum, OperatorParams};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn quadrature_matches_series_on_sweep() {
    for d in 1..=2u32 {
        let grid = BallGrid::reduced(d);
        let df = d as f64;
        for c in [0.5, df, df + 1.5] {
            for t in [0.0, 1.0] {
                for r in [0.3, 0.8] {
                    let q = fr_quadrature(c, t, r, &grid, DEFAULT_QUAD_TOL).unwrap();
                    let s = fr_series(&FRQuery::new(c, t, r).unwrap(), d, 1e-15).unwrap();
                    assert!(rel(q, s) <= 1e-6, "d={d} c={c} t={t} r={r}: {q} vs {s}");
                }
            }
        }
    }
    let q = fr_quadrature(3.0, 0.0, 0.9, &BallGrid::reduced(2), DEFAULT_QUAD_TOL).unwrap();
    let s = fr_series(&FRQuery::new(3.0, 0.0, 0.9).unwrap(), 2, 1e-15).unwrap();
    assert!(rel(q, s) <= 1e-5);
}

#[test]
fn berezin_quadrature_matches_closed_form() {
    for d in 1..=2u32 {
        let grid = BallGrid::reduced(d);
        for alpha in [-0.5, 1.0, d as f64 + 0.5] {
            for r in [0.0, 0.5, 0.9] {
                let q = berezin_quadrature(alpha, d, r, &grid, DEFAULT_QUAD_TOL).unwrap();
                let c = berezin_closed(alpha, d, r).unwrap();
                assert!(rel(q, c) <= 1e-6, "d={d} alpha={alpha} r={r}: {q} vs {c}");
            }
        }
    }
    let q = berezin_quadrature(1.5, 2, 0.9, &BallGrid::reduced(2), DEFAULT_QUAD_TOL).unwrap();
    assert!((q - 0.19f64.powf(1.5)).abs() <= 1e-5);
}

#[test]
fn full_ball_annulus_equals_series() {
    for d in 1..=3u32 {
        for alpha in [-1.2, 0.4, 1.0, d as f64 + 0.7] {
            for z in [0.0, 0.5, 0.9, 1.0] {
                if z == 1.0 && alpha >= d as f64 + 1.0 {
                    continue;
                }
                let a = i_alpha(alpha, 0.0, z, d, 1e-14).unwrap();
                let s = fr_series(&FRQuery::new(alpha, 0.0, z).unwrap(), d, 1e-14).unwrap();
                assert!((a - s).abs() <= 1e-9 * s.abs(), "d={d} alpha={alpha} z={z}");
            }
        }
    }
}

#[test]
fn annulus_integral_is_monotone() {
    for d in 1..=2u32 {
        for alpha in [-0.5, 0.8, d as f64 + 0.2] {
            let rs = [0.0, 0.2, 0.5, 0.8, 0.95];
            let zs = [0.0, 0.3, 0.6, 0.9, 1.0];
            for &z in &zs {
                let v: Vec<f64> = rs.iter().map(|&r| i_alpha(alpha, r, z, d, 1e-14).unwrap()).collect();
                assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-14), "d={d} alpha={alpha} z={z}: {v:?}");
            }
            for &r in &rs {
                let v: Vec<f64> = zs.iter().map(|&z| i_alpha(alpha, r, z, d, 1e-14).unwrap()).collect();
                assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-14), "d={d} alpha={alpha} r={r}: {v:?}");
            }
        }
    }
}

// Signed eigenvalue sum Σ m_n μ_n by direct summation; the terms decay like
// n^{α-2}, so for α < 0 two million degrees leave a tail below 1e-10.
fn signed_trace(alpha: f64, d: u32) -> f64 {
    let df = d as f64;
    let (mut mu, mut mult, mut total) = (1.0f64, 1.0f64, 0.0f64);
    for n in 0..2_000_000u64 {
        let nf = n as f64;
        total += mu * mult;
        mu *= (alpha + nf) / (df + 1.0 + nf);
        // m_{n+1} = m_n (n+d)/(n+1)
        mult *= (nf + df) / (nf + 1.0);
    }
    total
}

#[test]
fn trace_formula_matches_singular_value_sum_for_positive_operators() {
    for (d, alpha) in [(1, 0.5), (2, 0.3), (3, 0.0), (2, 0.9)] {
        let params = OperatorParams::new(alpha, d).unwrap();
        let sum = schatten_sum(&params, 1.0).unwrap().value().unwrap();
        let closed = trace_formula(alpha, d).unwrap();
        assert!(rel(sum, closed) <= 1e-8, "d={d} alpha={alpha}: {sum} vs {closed}");
    }
    assert!((trace_formula(0.5, 1).unwrap() - 2.0).abs() < 1e-14);
}

#[test]
fn trace_formula_is_the_signed_eigenvalue_sum() {
    for (d, alpha) in [(3, -0.7), (2, -1.5), (1, -0.2)] {
        let closed = trace_formula(alpha, d).unwrap();
        let signed = signed_trace(alpha, d);
        assert!(rel(signed, closed) <= 1e-8, "d={d} alpha={alpha}: {signed} vs {closed}");
    }
    // For -1 < α < 0 every μ_n with n >= 1 is negative, so ‖K_α‖_1 = 2 - Tr K_α.
    let params = OperatorParams::new(-0.7, 3).unwrap();
    let norm = schatten_sum(&params, 1.0).unwrap().value().unwrap();
    assert!(rel(norm, 2.0 - trace_formula(-0.7, 3).unwrap()) <= 1e-8);
}
