//! Quadrature engine over the continuous frequency space `R^2 x N` for the
//! decay of the linearized propagator kernels, plus log-log rate fitting
//! and the convolution bounds used to close Duhamel estimates.
//!
//! The late-time behavior is controlled by an `O(t^{-1/2})`-wide
//! neighborhood of `q = 0`, so the radial rule refines geometrically toward
//! the origin; uniform grids underresolve that layer and corrupt fitted
//! slopes.

use crate::dispersion::{dispersion, semigroup_factors};
use crate::error::{Error, Result};
use crate::par;
use crate::quadrature::{dyadic_edges, gauss_legendre};

/// Kernel factor selected inside [`kernel_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    L1,
    L2,
    DtL1,
    DtL2,
    /// Pure slow-mode heat factor `exp(-q t / Xi^2)`.
    HeatG,
}

impl Kernel {
    pub fn label(self) -> &'static str {
        match self {
            Kernel::L1 => "L1",
            Kernel::L2 => "L2",
            Kernel::DtL1 => "dtL1",
            Kernel::DtL2 => "dtL2",
            Kernel::HeatG => "heatG",
        }
    }

    fn factor(self, q: f64, k: u32, t: f64) -> f64 {
        match self {
            Kernel::HeatG => {
                let d = dispersion(q, k).expect("k >= 1");
                (-q / (d.xi_sym * d.xi_sym) * t).exp()
            }
            _ => {
                let d = dispersion(q, k).expect("k >= 1");
                let f = semigroup_factors(t, &d);
                match self {
                    Kernel::L1 => f.l1,
                    Kernel::L2 => f.l2,
                    Kernel::DtL1 => f.dt_l1.abs(),
                    Kernel::DtL2 => f.dt_l2.abs(),
                    Kernel::HeatG => unreachable!(),
                }
            }
        }
    }
}

/// Horizontal/vertical multiplier applied on top of the kernel factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplier {
    None,
    /// `sqrt(q)`, one horizontal derivative.
    GradH,
    /// `q`, two horizontal derivatives.
    GradH2,
    /// `k pi`, one vertical derivative.
    D3,
}

impl Multiplier {
    pub fn label(self) -> &'static str {
        match self {
            Multiplier::None => "id",
            Multiplier::GradH => "gradh",
            Multiplier::GradH2 => "gradh2",
            Multiplier::D3 => "d3",
        }
    }

    fn eval(self, q: f64, k: u32) -> f64 {
        match self {
            Multiplier::None => 1.0,
            Multiplier::GradH => q.sqrt(),
            Multiplier::GradH2 => q,
            Multiplier::D3 => k as f64 * std::f64::consts::PI,
        }
    }
}

/// Which frequency-space norm to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HatSpace {
    L1Hat,
    L2Hat,
}

impl HatSpace {
    pub fn label(self) -> &'static str {
        match self {
            HatSpace::L1Hat => "hatL1",
            HatSpace::L2Hat => "hatL2",
        }
    }
}

/// Analytic test profile: a radial function of `q = xi^2 + eta^2` times
/// finitely many vertical weights, so that every weighted `W^{s,1}`-type
/// hypothesis of the kernel estimates holds at once.
pub struct Profile {
    radial: Box<dyn Fn(f64) -> f64 + Sync + Send>,
    pub vertical_weights: Vec<f64>,
    /// Declared smoothness order (informational).
    pub smoothness: u32,
}

impl Profile {
    pub fn new(
        radial: impl Fn(f64) -> f64 + Sync + Send + 'static,
        vertical_weights: Vec<f64>,
        smoothness: u32,
    ) -> Self {
        Profile {
            radial: Box::new(radial),
            vertical_weights,
            smoothness,
        }
    }

    /// The default profile `exp(-q)` concentrated on `k = 1`.
    pub fn gaussian() -> Self {
        Profile::new(|q| (-q).exp(), vec![1.0], 8)
    }

    fn eval(&self, q: f64, k: u32) -> f64 {
        let a = self
            .vertical_weights
            .get((k - 1) as usize)
            .copied()
            .unwrap_or(0.0);
        a * (self.radial)(q)
    }
}

/// Polar quadrature layout over the truncated plane `|（xi, eta)| <= R`.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    /// Radial truncation of the horizontal plane.
    pub r_max: f64,
    /// Inner radial cutoff; zero integrates down to the origin. A positive
    /// value excises the slow `q -> 0` ray.
    pub r_min: f64,
    /// Total radial node budget; split into 8-node Gauss-Legendre panels
    /// on dyadic subintervals refined toward `r = r_min`.
    pub n_r: usize,
    /// Uniform angular node count.
    pub n_phi: usize,
    /// Vertical mode cutoff.
    pub k_cut: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            r_max: 6.0,
            r_min: 0.0,
            n_r: 112,
            n_phi: 8,
            k_cut: 8,
        }
    }
}

/// A kernel norm value with its truncation diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct KernelNorm {
    pub value: f64,
    /// Estimate of the mass beyond `r_max` (same scale as `value`).
    pub tail_estimate: f64,
    /// Set when the tail estimate exceeds 1% of the value.
    pub accuracy_warning: bool,
}

/// Evaluate `sum_k int m(xi, eta, k, t) |p(xi, eta, k)| d xi d eta` (or its
/// squared-integrand L^2 version) for the selected kernel and multiplier.
pub fn kernel_norm(
    t: f64,
    kernel: Kernel,
    mult: Multiplier,
    space: HatSpace,
    profile: &Profile,
    quad: &QuadratureSpec,
) -> Result<KernelNorm> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("t must be nonnegative, got {t}")));
    }
    if quad.r_max <= 0.0 || quad.n_r == 0 || quad.n_phi == 0 || quad.k_cut == 0 {
        return Err(Error::InvalidArgument("quadrature spec must be positive".into()));
    }
    let panels = quad.n_r.div_ceil(8).max(1);
    let per_panel = (quad.n_r / panels).clamp(2, 8);
    let (nodes, weights) = gauss_legendre(per_panel);
    let coarse = if quad.r_min > 0.0 {
        // Log-uniform panels on [r_min, r_max].
        let ratio = quad.r_max / quad.r_min;
        (0..=panels)
            .map(|i| quad.r_min * ratio.powf(i as f64 / panels as f64))
            .collect()
    } else {
        dyadic_edges(quad.r_max, panels)
    };
    // Bisect every panel: halves an octave's width where the integrand
    // turns over, at twice the node cost.
    let mut edges = Vec::with_capacity(2 * coarse.len());
    for w in coarse.windows(2) {
        edges.push(w[0]);
        edges.push(0.5 * (w[0] + w[1]));
    }
    edges.push(*coarse.last().unwrap());
    let k_hi = (quad.k_cut as usize).min(profile.vertical_weights.len());
    let dphi = 2.0 * std::f64::consts::PI / quad.n_phi as f64;

    let accumulate = |e: &[f64]| -> f64 {
        par::sum_indexed(e.len() - 1, |pi| {
            let (a, b) = (e[pi], e[pi + 1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut acc = 0.0;
            for k in 1..=k_hi {
                for (&x, &w) in nodes.iter().zip(&weights) {
                    let r = mid + half * x;
                    for jphi in 0..quad.n_phi {
                        let phi = dphi * jphi as f64;
                        let xi = r * phi.cos();
                        let eta = r * phi.sin();
                        let q = xi * xi + eta * eta;
                        let f = kernel.factor(q, k as u32, t)
                            * mult.eval(q, k as u32)
                            * profile.eval(q, k as u32).abs();
                        let integrand = match space {
                            HatSpace::L1Hat => f,
                            HatSpace::L2Hat => f * f,
                        };
                        acc += w * half * integrand * r * dphi;
                    }
                }
            }
            acc
        })
    };

    let inner = accumulate(&edges);
    // One dyadic octave beyond r_max, doubled, stands in for the tail.
    let tail_edges = [quad.r_max, 2.0 * quad.r_max];
    let tail = 2.0 * accumulate(&tail_edges);

    let (value, tail_estimate) = match space {
        HatSpace::L1Hat => (inner, tail),
        HatSpace::L2Hat => (inner.sqrt(), tail.sqrt()),
    };
    Ok(KernelNorm {
        value,
        tail_estimate,
        accuracy_warning: tail_estimate > 0.01 * value,
    })
}

/// Fitted algebraic decay exponent on log-log axes.
#[derive(Debug, Clone, Copy)]
pub struct RateFit {
    pub exponent: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub r_squared: f64,
    pub n_samples: usize,
}

/// Least-squares slope of `log(value)` against `log(time)`.
///
/// Times must be strictly increasing and greater than 1 (inside the
/// `<t> = t` regime), values positive, and at least five samples are
/// required for a meaningful exponent.
pub fn fit_rate(times: &[f64], values: &[f64]) -> Result<RateFit> {
    if times.len() != values.len() {
        return Err(Error::InvalidArgument("times and values must have equal length".into()));
    }
    if times.len() < 5 {
        return Err(Error::InsufficientData {
            needed: 5,
            got: times.len(),
        });
    }
    for w in times.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidArgument("times must be strictly increasing".into()));
        }
    }
    if times[0] <= 1.0 {
        return Err(Error::InvalidArgument("fit times must exceed 1".into()));
    }
    if values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument("fit values must be positive".into()));
    }

    let n = times.len() as f64;
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let tss: f64 = ys.iter().map(|y| (y - ybar).powi(2)).sum();
    let dof = (times.len() - 2) as f64;
    let stderr = (rss / dof / sxx).sqrt();
    let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { 1.0 };
    Ok(RateFit {
        exponent: slope,
        stderr,
        window: (times[0], *times.last().unwrap()),
        r_squared,
        n_samples: times.len(),
    })
}

/// Both convolution integrals behind the Duhamel closure, with the
/// bracket-weighted ratios that the bound asserts stay bounded in `t`.
#[derive(Debug, Clone, Copy)]
pub struct ConvolutionBound {
    /// `int_0^t <t - tau>^{-mu} <tau>^{-1-nu} d tau`.
    pub algebraic: f64,
    /// `algebraic * <t>^mu`.
    pub algebraic_ratio: f64,
    /// `int_0^t e^{-(t - tau)} <tau>^{-nu} d tau`.
    pub exponential: f64,
    /// `exponential * <t>^nu`.
    pub exponential_ratio: f64,
}

#[inline]
fn bracket(x: f64) -> f64 {
    x.max(1.0)
}

/// Numerically evaluate both convolution integrals. `nquad` is the
/// Gauss-Legendre node count per panel; panels split at the bracket kinks
/// `tau = 1`, `tau = t - 1` and refine dyadically inside the smooth bulk.
pub fn convolution_bound(t: f64, mu: f64, nu: f64, nquad: usize) -> Result<ConvolutionBound> {
    if !(mu > 0.0 && nu > 0.0) {
        return Err(Error::InvalidArgument("mu and nu must be positive".into()));
    }
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("t must be nonnegative, got {t}")));
    }
    let n = nquad.clamp(2, 64);
    let (nodes, weights) = gauss_legendre(n);

    let alg = if t == 0.0 {
        0.0
    } else {
        let f = |tau: f64| bracket(t - tau).powf(-mu) * bracket(tau).powf(-(1.0 + nu));
        let edges = convolution_edges(t);
        crate::quadrature::integrate_composite(&edges, &nodes, &weights, f)
    };
    let expo = if t == 0.0 {
        0.0
    } else {
        let f = |tau: f64| (-(t - tau)).exp() * bracket(tau).powf(-nu);
        let edges = convolution_edges(t);
        crate::quadrature::integrate_composite(&edges, &nodes, &weights, f)
    };
    Ok(ConvolutionBound {
        algebraic: alg,
        algebraic_ratio: alg * bracket(t).powf(mu),
        exponential: expo,
        exponential_ratio: expo * bracket(t).powf(nu),
    })
}

/// Panel edges on `[0, t]`: kinks at 1 and `t - 1`, dyadic refinement of
/// the bulk toward both ends.
fn convolution_edges(t: f64) -> Vec<f64> {
    let mut edges = vec![0.0];
    if t <= 2.0 {
        if t > 1.0 {
            edges.push(1.0);
            if t - 1.0 > 1.0 {
                edges.push(t - 1.0);
            }
        }
        edges.push(t);
        edges.dedup_by(|a, b| (*a - *b).abs() < 1e-300);
        return edges;
    }
    edges.push(1.0);
    let mid = 0.5 * t;
    let mut left = 1.0f64;
    while left * 2.0 < mid {
        left *= 2.0;
        edges.push(left);
    }
    edges.push(mid);
    let mut right = vec![t, t - 1.0];
    let mut off = 1.0f64;
    while off * 2.0 < mid {
        off *= 2.0;
        right.push(t - off);
    }
    right.reverse();
    edges.extend(right);
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    edges
}
