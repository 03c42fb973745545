//! Exact solution operators for the linearized dynamics: the heat semigroup
//! for vorticity, the two-parameter propagator of the second-order
//! temperature equation, and the coupled per-mode 3x3 system solved by a
//! scaling-and-squaring matrix exponential.

use std::f64::consts::PI;

use crate::dispersion::{dispersion, semigroup_factors};
use crate::elliptic::{FieldRole, VectorField};
use crate::error::{Error, Result};
use crate::par;
use crate::quadrature::{dyadic_edges, gauss_legendre};
use crate::spectral::{Parity, SpectralScalar};
use crate::C64;

/// Multiply every coefficient by `exp(-(xi^2 + eta^2 + pi^2 k^2) t)`.
pub fn heat_propagate(f: &SpectralScalar, t: f64) -> Result<SpectralScalar> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("t must be nonnegative, got {t}")));
    }
    let dom = f.domain.clone();
    let mut out = f.clone();
    par::for_each_outer(&mut out.coeff, |k, mut plane| {
        for n in 0..dom.nx {
            for m in 0..dom.ny {
                plane[[n, m]] *= (-dom.symbol(n, m, k) * t).exp();
            }
        }
    });
    Ok(out)
}

/// Per-mode homogeneous solution of
/// `theta'' + Xi theta' + (q/Xi) theta = 0` with data
/// `(theta(0), theta'(0)) = (theta0, theta1)`:
/// `L1(t) theta0 + L2(t) (Xi/2 theta0 + theta1)`.
pub fn theta_mode_solution(q: f64, k: u32, theta0: C64, theta1: C64, t: f64) -> Result<C64> {
    let d = dispersion(q, k)?;
    let f = semigroup_factors(t, &d);
    Ok(theta0 * f.l1 + (theta0 * (0.5 * d.xi_sym) + theta1) * f.l2)
}

/// Solve the linearized temperature equation for a full field, with an
/// optional inhomogeneous term handled by composite Gauss-Legendre
/// quadrature of the Duhamel convolution.
///
/// `forcing(tau)` must return an odd field on the same domain; `nquad` is
/// the total node budget, split into 8-node panels with dyadic refinement
/// toward `tau = t` where the kernel `L2(t - tau)` varies fastest.
pub fn solve_theta_linear(
    theta0: &SpectralScalar,
    theta1: &SpectralScalar,
    forcing: Option<&(dyn Fn(f64) -> SpectralScalar + Sync)>,
    t: f64,
    nquad: usize,
) -> Result<SpectralScalar> {
    if theta0.parity != Parity::Odd {
        return Err(Error::ParityMismatch {
            expected: Parity::Odd,
            got: theta0.parity,
        });
    }
    theta0.check_compatible(theta1)?;
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("t must be nonnegative, got {t}")));
    }
    if forcing.is_some() && nquad < 2 {
        return Err(Error::InvalidArgument(
            "nquad must be >= 2 when a forcing term is present".into(),
        ));
    }

    let dom = theta0.domain.clone();
    let mut out = SpectralScalar::zeros(&theta0.domain, Parity::Odd);
    {
        let c0 = &theta0.coeff;
        let c1 = &theta1.coeff;
        par::for_each_outer(&mut out.coeff, |k, mut plane| {
            if k == 0 {
                return;
            }
            for n in 0..dom.nx {
                for m in 0..dom.ny {
                    let xi = dom.xi(n);
                    let eta = dom.eta(m);
                    let q = xi * xi + eta * eta;
                    let d = dispersion(q, k as u32).expect("k >= 1");
                    let f = semigroup_factors(t, &d);
                    let a = c0[[k, n, m]];
                    let b = c1[[k, n, m]];
                    plane[[n, m]] = a * f.l1 + (a * (0.5 * d.xi_sym) + b) * f.l2;
                }
            }
        });
    }

    if let Some(forcing) = forcing {
        if t > 0.0 {
            let panels = nquad.div_ceil(8).max(1);
            let per_panel = (nquad / panels).clamp(2, 8);
            let (nodes, weights) = gauss_legendre(per_panel);
            // Dyadic refinement of [0, t] toward the tau = t end, where the
            // short-time kernel variation lives.
            let edges: Vec<f64> = dyadic_edges(t, panels).iter().map(|e| t - e).rev().collect();
            for win in edges.windows(2) {
                let (a, b) = (win[0], win[1]);
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                for (&x, &w) in nodes.iter().zip(&weights) {
                    let tau = mid + half * x;
                    let fs = forcing(tau);
                    fs.check_compatible(&out)?;
                    let dt = t - tau;
                    let fc = &fs.coeff;
                    par::for_each_outer(&mut out.coeff, |k, mut plane| {
                        if k == 0 {
                            return;
                        }
                        for n in 0..dom.nx {
                            for m in 0..dom.ny {
                                let xi = dom.xi(n);
                                let eta = dom.eta(m);
                                let q = xi * xi + eta * eta;
                                let d = dispersion(q, k as u32).expect("k >= 1");
                                let f = semigroup_factors(dt, &d);
                                plane[[n, m]] += fc[[k, n, m]] * (w * half * f.l2);
                            }
                        }
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Exact propagation of one mode of the coupled linear system
/// `w1' = -Xi w1 + i eta th`, `w2' = -Xi w2 - i xi th`,
/// `th' = (i eta w1 - i xi w2)/Xi`, for `k >= 1`.
pub fn coupled_mode_exact(xi: f64, eta: f64, k: u32, state: [C64; 3], t: f64) -> Result<[C64; 3]> {
    if k == 0 {
        return Err(Error::InvalidArgument("coupled modes require k >= 1".into()));
    }
    let q = xi * xi + eta * eta;
    let big_xi = q + PI * PI * (k as f64) * (k as f64);
    let i = C64::new(0.0, 1.0);
    let a = [
        [C64::new(-big_xi, 0.0), C64::new(0.0, 0.0), i * eta],
        [C64::new(0.0, 0.0), C64::new(-big_xi, 0.0), -i * xi],
        [i * (eta / big_xi), -i * (xi / big_xi), C64::new(0.0, 0.0)],
    ];
    let e = expm3(scale3(&a, t));
    Ok(apply3(&e, &state))
}

/// Exact linear evolution of a full (vorticity, temperature) pair:
/// `w3` decays by pure heat; each `(w1, w2, theta)` mode evolves by the
/// constant-coefficient 3x3 system above.
pub fn exact_linear_coupled(
    omega: &VectorField,
    theta: &SpectralScalar,
    t: f64,
) -> Result<(VectorField, SpectralScalar)> {
    if omega.role != FieldRole::Vorticity {
        return Err(Error::Contract("linear propagation expects a vorticity-class field".into()));
    }
    if theta.parity != Parity::Odd {
        return Err(Error::ParityMismatch {
            expected: Parity::Odd,
            got: theta.parity,
        });
    }
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("t must be nonnegative, got {t}")));
    }
    let dom = theta.domain.clone();
    let w3 = heat_propagate(&omega.components[2], t)?;

    let mut w1 = SpectralScalar::zeros(&dom, Parity::Odd);
    let mut w2 = SpectralScalar::zeros(&dom, Parity::Odd);
    let mut th = SpectralScalar::zeros(&dom, Parity::Odd);

    let c1 = &omega.components[0].coeff;
    let c2 = &omega.components[1].coeff;
    let ct = &theta.coeff;

    let kd = dom.kmax + 1;
    let rows: Vec<Vec<[C64; 3]>> = par::map_indexed(kd, |k| {
        let mut plane = vec![[C64::new(0.0, 0.0); 3]; dom.nx * dom.ny];
        if k == 0 {
            return plane;
        }
        for n in 0..dom.nx {
            let xi = dom.xi(n);
            for m in 0..dom.ny {
                let eta = dom.eta(m);
                let state = [c1[[k, n, m]], c2[[k, n, m]], ct[[k, n, m]]];
                plane[n * dom.ny + m] =
                    coupled_mode_exact(xi, eta, k as u32, state, t).expect("k >= 1");
            }
        }
        plane
    });
    for (k, plane) in rows.iter().enumerate() {
        for n in 0..dom.nx {
            for m in 0..dom.ny {
                let s = plane[n * dom.ny + m];
                w1.coeff[[k, n, m]] = s[0];
                w2.coeff[[k, n, m]] = s[1];
                th.coeff[[k, n, m]] = s[2];
            }
        }
    }

    let omega_out = VectorField::new([w1, w2, w3], FieldRole::Vorticity)?;
    Ok((omega_out, th))
}

type Mat3 = [[C64; 3]; 3];

fn scale3(a: &Mat3, s: f64) -> Mat3 {
    let mut out = *a;
    for row in &mut out {
        for v in row {
            *v *= s;
        }
    }
    out
}

fn mul3(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = C64::new(0.0, 0.0);
            for l in 0..3 {
                acc += a[i][l] * b[l][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn apply3(a: &Mat3, x: &[C64; 3]) -> [C64; 3] {
    let mut out = [C64::new(0.0, 0.0); 3];
    for i in 0..3 {
        for l in 0..3 {
            out[i] += a[i][l] * x[l];
        }
    }
    out
}

fn inf_norm3(a: &Mat3) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 3x3 complex matrix exponential by scaling and squaring with a Taylor
/// evaluation of the scaled block. Robust for arbitrarily stiff stable
/// matrices; no eigenvector conditioning enters.
pub(crate) fn expm3(a: Mat3) -> Mat3 {
    let norm = inf_norm3(&a);
    let squarings = if norm > 0.0625 {
        ((norm / 0.0625).log2().ceil() as u32).min(64)
    } else {
        0
    };
    let scaled = scale3(&a, 0.5f64.powi(squarings as i32));

    let mut result = [[C64::new(0.0, 0.0); 3]; 3];
    for (i, row) in result.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    let mut term = result;
    for j in 1..=16 {
        term = mul3(&term, &scaled);
        for r in 0..3 {
            for c in 0..3 {
                term[r][c] /= j as f64;
                result[r][c] += term[r][c];
            }
        }
    }
    for _ in 0..squarings {
        result = mul3(&result, &result);
    }
    result
}
