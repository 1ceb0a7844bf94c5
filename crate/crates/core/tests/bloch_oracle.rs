//! Q¹ of the glued qubit pairs against hand-written z-axis entropy formulas.
//!
//! On the z axis with excited population `s`, the glued pair splits as
//! `Δ(s) = (1−λ)[S(B(ρ)) − S(C(ρ))] − λ h(s)`, and the inner outputs have
//! closed-form spectra.

use proptest::prelude::*;
use qglue::coherent_info::{self, OptimizerConfig};

fn h(x: f64) -> f64 {
    let t = |y: f64| if y <= 0.0 { 0.0 } else { -y * y.log2() };
    t(x) + t(1.0 - x)
}

fn amplitude_delta(p: f64, l: f64, s: f64) -> f64 {
    (1.0 - l) * (h((1.0 - p) * s) - h(p * s)) - l * h(s)
}

/// Complement of dephasing on `diag(1−s, s)`: Gram matrix of two states with
/// overlap `1−2p`.
fn dephrasure_delta(p: f64, l: f64, s: f64) -> f64 {
    let disc = (1.0 - 16.0 * s * (1.0 - s) * p * (1.0 - p)).max(0.0).sqrt();
    (1.0 - l) * (h(s) - h((1.0 + disc) / 2.0)) - l * h(s)
}

/// Dense grid then a shrinking local grid; no shared code with the library.
fn brute_max(f: impl Fn(f64) -> f64) -> f64 {
    let n = 20_000;
    let (mut best_s, mut best) = (0.0, f(0.0));
    for k in 1..=n {
        let s = k as f64 / n as f64;
        let v = f(s);
        if v > best {
            (best_s, best) = (s, v);
        }
    }
    let mut w = 1.0 / n as f64;
    for _ in 0..40 {
        for k in -10..=10 {
            let s = (best_s + w * k as f64 / 10.0).clamp(0.0, 1.0);
            let v = f(s);
            if v > best {
                (best_s, best) = (s, v);
            }
        }
        w *= 0.5;
    }
    best.max(0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn amplitude_glued_matches_formula(p in 0.01f64..0.99, l in 0.0f64..1.0) {
        let r = coherent_info::q1_amplitude_glued(p, l, &OptimizerConfig::default()).unwrap();
        let qb = brute_max(|s| amplitude_delta(p, l, s));
        let qc = brute_max(|s| -amplitude_delta(p, l, s));
        prop_assert!((r.q1_b - qb).abs() < 1e-9, "Q1(B) {} vs {}", r.q1_b, qb);
        prop_assert!((r.q1_c - qc).abs() < 1e-9, "Q1(C) {} vs {}", r.q1_c, qc);
    }

    #[test]
    fn dephrasure_matches_formula_below_g(p in 0.01f64..0.49, frac in 0.0f64..1.0) {
        let l = frac * qglue::qubit_models::g_curve(p).unwrap();
        let r = coherent_info::q1_dephrasure(p, l, &OptimizerConfig::default()).unwrap();
        let qb = brute_max(|s| dephrasure_delta(p, l, s));
        prop_assert!((r.q1_b - qb).abs() < 1e-9, "Q1(B) {} vs {}", r.q1_b, qb);
    }
}

#[test]
fn plain_amplitude_damping() {
    // λ = 0 is the bare channel: positive exactly for p < ½.
    let cfg = OptimizerConfig::default();
    for p in [0.1, 0.3, 0.45] {
        let r = coherent_info::q1_amplitude_glued(p, 0.0, &cfg).unwrap();
        let want = brute_max(|s| amplitude_delta(p, 0.0, s));
        assert!((r.q1_b - want).abs() < 1e-10);
    }
    let r = coherent_info::q1_amplitude_glued(0.6, 0.0, &cfg).unwrap();
    assert!(r.q1_b < 1e-12);
}
