//! Kernel-norm quadrature anchors, decay-slope checks, rate fitting, and
//! the convolution bounds.

mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::rel_err;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slabflow::decay::{
    convolution_bound, fit_rate, kernel_norm, HatSpace, Kernel, Multiplier, Profile,
    QuadratureSpec,
};
use slabflow::Error;

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn slope(times: &[f64], values: &[f64]) -> f64 {
    fit_rate(times, values).unwrap().exponent
}

fn norm_at(t: f64, kernel: Kernel, mult: Multiplier, space: HatSpace, quad: &QuadratureSpec) -> f64 {
    let profile = Profile::gaussian();
    kernel_norm(t, kernel, mult, space, &profile, quad).unwrap().value
}

/// At t = 0 with the plain L1 kernel, the norm is the profile's own hat-L1
/// norm: the gaussian integrates to pi over the plane.
#[test]
fn kernel_norm_at_zero_time_is_profile_norm() {
    let quad = QuadratureSpec::default();
    let v = norm_at(0.0, Kernel::L1, Multiplier::None, HatSpace::L1Hat, &quad);
    assert!(rel_err(v, PI) <= 1e-10, "got {v}, want pi");
}

#[test]
fn kernel_norm_reports_tail_and_warning() {
    // A profile that does not decay within the truncation radius must flag.
    let fat = Profile::new(|_| 1.0, vec![1.0], 0);
    let quad = QuadratureSpec::default();
    let out = kernel_norm(0.0, Kernel::L1, Multiplier::None, HatSpace::L1Hat, &fat, &quad).unwrap();
    assert!(out.accuracy_warning);
    let sharp = kernel_norm(
        0.0,
        Kernel::L1,
        Multiplier::None,
        HatSpace::L1Hat,
        &Profile::gaussian(),
        &quad,
    )
    .unwrap();
    assert!(!sharp.accuracy_warning);
    assert!(sharp.tail_estimate < 1e-10 * sharp.value);
}

#[test]
fn heat_kernel_slope_is_minus_one() {
    let quad = QuadratureSpec::default();
    let ts = logspace(1e3, 1e5, 13);
    let vs: Vec<f64> = ts
        .iter()
        .map(|&t| norm_at(t, Kernel::HeatG, Multiplier::None, HatSpace::L1Hat, &quad))
        .collect();
    let s = slope(&ts, &vs);
    assert!((s - (-1.0)).abs() <= 0.1, "heat kernel slope {s:.3}");
}

#[test]
fn horizontal_gradient_slope_is_minus_three_halves() {
    let quad = QuadratureSpec::default();
    let ts = logspace(1e3, 1e5, 13);
    let vs: Vec<f64> = ts
        .iter()
        .map(|&t| {
            norm_at(t, Kernel::L1, Multiplier::GradH, HatSpace::L1Hat, &quad)
                + norm_at(t, Kernel::L2, Multiplier::GradH, HatSpace::L1Hat, &quad)
        })
        .collect();
    let s = slope(&ts, &vs);
    assert!((s - (-1.5)).abs() <= 0.1, "gradient slope {s:.3}");
}

#[test]
fn kernel_norms_nonincreasing_in_time() {
    let quad = QuadratureSpec::default();
    for kernel in [Kernel::L1, Kernel::L2, Kernel::HeatG] {
        let mut prev = f64::INFINITY;
        for &t in &logspace(1.0, 1e4, 17) {
            let v = norm_at(t, kernel, Multiplier::None, HatSpace::L1Hat, &quad);
            assert!(
                v <= prev * (1.0 + 1e-12),
                "{kernel:?} increased at t={t}: {v} > {prev}"
            );
            prev = v;
        }
    }
}

/// Doubling the truncation radius or the node budget moves the reported
/// norms by less than 0.1% up to t = 1e4.
#[test]
fn quadrature_convergence() {
    let base = QuadratureSpec::default();
    let wide = QuadratureSpec {
        r_max: 12.0,
        n_r: base.n_r + 8,
        ..base.clone()
    };
    let fine = QuadratureSpec {
        n_r: base.n_r * 2,
        n_phi: base.n_phi * 2,
        ..base.clone()
    };
    for &t in &[1.0, 100.0, 1e4] {
        for space in [HatSpace::L1Hat, HatSpace::L2Hat] {
            let v0 = norm_at(t, Kernel::L1, Multiplier::None, space, &base);
            let v1 = norm_at(t, Kernel::L1, Multiplier::None, space, &wide);
            let v2 = norm_at(t, Kernel::L1, Multiplier::None, space, &fine);
            assert!(rel_err(v1, v0) < 1e-3, "radius doubling moved the value");
            assert!(rel_err(v2, v0) < 1e-3, "node doubling moved the value");
        }
    }
}

/// Excising a neighborhood of q = 0 turns the algebraic decay exponential:
/// the slow ray at the origin is what produces the power laws.
#[test]
fn decay_is_carried_by_small_horizontal_frequencies() {
    let cut = QuadratureSpec {
        r_min: 1.0,
        ..QuadratureSpec::default()
    };
    let ts = logspace(1e3, 1e4, 9);
    let vs: Vec<f64> = ts
        .iter()
        .map(|&t| norm_at(t, Kernel::L1, Multiplier::None, HatSpace::L1Hat, &cut))
        .collect();
    let s = slope(&ts, &vs);
    assert!(s < -3.0, "restricted spectrum should decay fast, slope {s:.2}");
}

#[test]
fn fit_rate_exact_power_law() {
    let ts = logspace(10.0, 1e4, 9);
    let vs: Vec<f64> = ts.iter().map(|t| t.powf(-1.0)).collect();
    let fit = fit_rate(&ts, &vs).unwrap();
    assert_relative_eq!(fit.exponent, -1.0, max_relative = 1e-12);
    assert!(fit.stderr <= 1e-12);
    assert!(fit.r_squared > 1.0 - 1e-12);
    assert_eq!(fit.window, (10.0, 1e4));
}

#[test]
fn fit_rate_noisy_power_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    let ts = logspace(10.0, 1e4, 25);
    let vs: Vec<f64> = ts
        .iter()
        .map(|t| 3.7 * t.powf(-1.5) * (1.0 + 0.01 * (rng.random::<f64>() - 0.5)))
        .collect();
    let fit = fit_rate(&ts, &vs).unwrap();
    assert!(
        (-1.55..=-1.45).contains(&fit.exponent),
        "noisy exponent {:.4}",
        fit.exponent
    );
}

#[test]
fn fit_rate_constant_series() {
    let ts = logspace(10.0, 1e3, 7);
    let vs = vec![2.5; 7];
    let fit = fit_rate(&ts, &vs).unwrap();
    assert!(fit.exponent.abs() <= 1e-14);
}

#[test]
fn fit_rate_rejects_bad_input() {
    assert!(matches!(
        fit_rate(&[10.0, 20.0], &[1.0, 2.0]),
        Err(Error::InsufficientData { .. })
    ));
    let ts = [10.0, 9.0, 20.0, 30.0, 40.0];
    assert!(fit_rate(&ts, &[1.0; 5]).is_err());
    let ts = [0.5, 2.0, 3.0, 4.0, 5.0];
    assert!(fit_rate(&ts, &[1.0; 5]).is_err());
    let ts = [10.0, 20.0, 30.0, 40.0, 50.0];
    assert!(fit_rate(&ts, &[1.0, 1.0, 0.0, 1.0, 1.0]).is_err());
}

#[test]
fn convolution_bound_empty_interval() {
    let b = convolution_bound(0.0, 1.5, 0.5, 16).unwrap();
    assert_eq!(b.algebraic, 0.0);
    assert_eq!(b.exponential, 0.0);
}

/// Adaptive-refinement oracle: split panels until the value stabilizes.
fn adaptive_oracle(t: f64, f: impl Fn(f64) -> f64 + Copy) -> f64 {
    fn simpson(f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn adapt(f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() < 1e-12 * whole.abs().max(1e-12) {
            left + right
        } else {
            adapt(f, a, m, left, depth - 1) + adapt(f, m, b, right, depth - 1)
        }
    }
    let seams = [0.0, 1.0f64.min(t), (t - 1.0).max(0.0), t];
    let mut edges: Vec<f64> = seams.to_vec();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    edges
        .windows(2)
        .map(|w| adapt(f, w[0], w[1], simpson(f, w[0], w[1]), 30))
        .sum()
}

#[test]
fn convolution_bound_matches_adaptive_oracle() {
    for (t, mu, nu) in [(10.0, 1.5, 0.5), (100.0, 1.0, 1.0), (37.0, 2.0, 1.0)] {
        let b = convolution_bound(t, mu, nu, 16).unwrap();
        let bra = |x: f64| x.max(1.0);
        let alg = adaptive_oracle(t, |tau| bra(t - tau).powf(-mu) * bra(tau).powf(-(1.0 + nu)));
        let expo = adaptive_oracle(t, |tau| (-(t - tau)).exp() * bra(tau).powf(-nu));
        assert!(rel_err(b.algebraic, alg) <= 1e-6, "algebraic {} vs {}", b.algebraic, alg);
        assert!(rel_err(b.exponential, expo) <= 1e-6);
    }
}

/// The bracket-weighted ratios stay inside a narrow band as t grows.
#[test]
fn convolution_ratios_stay_bounded() {
    let mut rats = Vec::new();
    for &t in &[10.0, 100.0, 1000.0] {
        rats.push(convolution_bound(t, 1.5, 0.5, 16).unwrap().algebraic_ratio);
    }
    let band = rats.iter().cloned().fold(0.0, f64::max) / rats.iter().cloned().fold(f64::MAX, f64::min);
    assert!(band < 1.2, "algebraic ratio band {band:.3}");

    let mut rats = Vec::new();
    for &t in &[10.0, 100.0, 1000.0] {
        rats.push(convolution_bound(t, 1.5, 1.0, 16).unwrap().exponential_ratio);
    }
    let band = rats.iter().cloned().fold(0.0, f64::max) / rats.iter().cloned().fold(f64::MAX, f64::min);
    assert!(band < 1.5, "exponential ratio band {band:.3}");
}
