//! Gauss-Legendre rules and composite panel integration.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess for the i-th positive root.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_deriv(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate `f` over `[a, b]` with one `n`-point Gauss-Legendre panel.
pub fn integrate_panel(a: f64, b: f64, nodes: &[f64], weights: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (&x, &w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Composite rule over consecutive panels given by `edges`.
pub fn integrate_composite(edges: &[f64], nodes: &[f64], weights: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    edges
        .windows(2)
        .map(|e| integrate_panel(e[0], e[1], nodes, weights, &f))
        .sum()
}

/// Panel edges for `[0, r_max]` with dyadic geometric refinement toward 0:
/// `[0, r 2^{1-P}], ..., [r/2, r]`. The innermost panel absorbs the origin.
pub fn dyadic_edges(r_max: f64, panels: usize) -> Vec<f64> {
    assert!(panels >= 1 && r_max > 0.0);
    let mut edges = Vec::with_capacity(panels + 1);
    edges.push(0.0);
    for i in (0..panels).rev() {
        edges.push(r_max * 0.5f64.powi(i as i32));
    }
    edges
}
