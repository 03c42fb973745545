//! Per-mode spectrum of the linearized temperature equation.
//!
//! Each mode `(xi, eta, k)` of the second-order equation
//! `theta'' + Xi theta' + (q / Xi) theta = 0`, with `q = xi^2 + eta^2` and
//! `Xi = q + pi^2 k^2`, has real characteristic roots
//! `lambda_{+-} = (-Xi +- sigma)/2`, `sigma = sqrt(Xi^2 - 4 q / Xi)`.
//! The slow root governs the algebraic decay of the temperature field and
//! sits in `[-2q/Xi^2, -q/Xi^2]`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Spectrum of one mode: symbols and characteristic roots.
#[derive(Debug, Clone, Copy)]
pub struct ModeDispersion {
    /// Horizontal symbol `xi^2 + eta^2`.
    pub q: f64,
    /// Full symbol `q + pi^2 k^2`.
    pub xi_sym: f64,
    /// Root gap `lambda_plus - lambda_minus`, bounded below by
    /// `sqrt(pi^4 - 4)` for `k >= 1`.
    pub sigma: f64,
    /// Slow root, in `[-2q/Xi^2, -q/Xi^2]`.
    pub lambda_plus: f64,
    /// Fast root, in `[-Xi, -Xi/2]`.
    pub lambda_minus: f64,
}

/// Evaluate the mode spectrum. `k = 0` is rejected: the temperature field
/// is odd in z and has no cosine modes.
///
/// The slow root is computed by the rationalized form
/// `lambda_plus = -2q / (Xi^2 (1 + sqrt(1 - 4q/Xi^3)))`; the naive
/// `(sigma - Xi)/2` difference loses every significant digit once
/// `q / Xi^3` drops below machine precision.
pub fn dispersion(q: f64, k: u32) -> Result<ModeDispersion> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "vertical wavenumber k must be >= 1 for temperature modes".into(),
        ));
    }
    if !(q >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "horizontal symbol q must be nonnegative, got {q}"
        )));
    }
    let xi_sym = q + PI * PI * (k as f64) * (k as f64);
    let ratio = 4.0 * q / (xi_sym * xi_sym * xi_sym);
    let lambda_plus = -2.0 * q / (xi_sym * xi_sym * (1.0 + (1.0 - ratio).sqrt()));
    let lambda_minus = -xi_sym - lambda_plus;
    Ok(ModeDispersion {
        q,
        xi_sym,
        sigma: lambda_plus - lambda_minus,
        lambda_plus,
        lambda_minus,
    })
}

/// Propagator factors of one mode at time `t`.
#[derive(Debug, Clone, Copy)]
pub struct SemigroupFactors {
    /// `(e^{l+ t} + e^{l- t}) / 2`, in `(0, 1]`.
    pub l1: f64,
    /// `(e^{l+ t} - e^{l- t}) / sigma`, nonnegative.
    pub l2: f64,
    /// Time derivative of `l1`; equals `-Xi/2` at `t = 0`.
    pub dt_l1: f64,
    /// Time derivative of `l2`; equals `1` at `t = 0`.
    pub dt_l2: f64,
}

pub fn semigroup_factors(t: f64, d: &ModeDispersion) -> SemigroupFactors {
    let ep = (d.lambda_plus * t).exp();
    let em = (d.lambda_minus * t).exp();
    SemigroupFactors {
        l1: 0.5 * (ep + em),
        l2: (ep - em) / d.sigma,
        dt_l1: 0.5 * (d.lambda_plus * ep + d.lambda_minus * em),
        dt_l2: (d.lambda_plus * ep - d.lambda_minus * em) / d.sigma,
    }
}
