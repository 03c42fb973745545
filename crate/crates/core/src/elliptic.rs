//! Spectral inversion of `-Laplace` under Dirichlet and Neumann wall
//! conditions, vector calculus on the slab, and velocity recovery from
//! vorticity.
//!
//! Vorticity-class vectors carry parities (odd, odd, even), velocity-class
//! (even, even, odd). Velocity recovery inverts componentwise with the
//! boundary condition matching each stream-function component: Dirichlet
//! for the horizontal vorticity parts, Neumann for the vertical one.

use crate::error::{Error, Result};
use crate::par;
use crate::spectral::{deriv, Axis3, Domain, Parity, SpectralScalar};
use crate::C64;

use std::sync::Arc;

/// Parity signature of a three-component field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldRole {
    /// Parities (odd, odd, even): curls of velocities live here.
    Vorticity,
    /// Parities (even, even, odd): slip-condition velocities live here.
    Velocity,
    Generic,
}

impl FieldRole {
    pub fn parities(self) -> Option<[Parity; 3]> {
        match self {
            FieldRole::Vorticity => Some([Parity::Odd, Parity::Odd, Parity::Even]),
            FieldRole::Velocity => Some([Parity::Even, Parity::Even, Parity::Odd]),
            FieldRole::Generic => None,
        }
    }
}

/// Three spectral components with a declared role.
#[derive(Clone)]
pub struct VectorField {
    pub components: [SpectralScalar; 3],
    pub role: FieldRole,
}

impl VectorField {
    pub fn new(components: [SpectralScalar; 3], role: FieldRole) -> Result<Self> {
        if let Some(expected) = role.parities() {
            for (c, &p) in components.iter().zip(expected.iter()) {
                if c.parity != p {
                    return Err(Error::ParityMismatch {
                        expected: p,
                        got: c.parity,
                    });
                }
            }
        }
        Ok(VectorField { components, role })
    }

    pub fn zeros(domain: &Arc<Domain>, role: FieldRole) -> Self {
        let parities = role
            .parities()
            .unwrap_or([Parity::Even, Parity::Even, Parity::Even]);
        VectorField {
            components: [
                SpectralScalar::zeros(domain, parities[0]),
                SpectralScalar::zeros(domain, parities[1]),
                SpectralScalar::zeros(domain, parities[2]),
            ],
            role,
        }
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.components[0].domain
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    /// Euclidean combination of component H^m norms.
    pub fn sobolev_norm(&self, m: u32) -> f64 {
        self.components
            .iter()
            .map(|c| c.sobolev_norm(m).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0)
    }
}

/// Solve `-Laplace psi = f` with `psi = 0` on the walls: coefficientwise
/// division by the full symbol, which never vanishes on odd fields.
pub fn invert_dirichlet(f: &SpectralScalar) -> Result<SpectralScalar> {
    if f.parity != Parity::Odd {
        return Err(Error::ParityMismatch {
            expected: Parity::Odd,
            got: f.parity,
        });
    }
    let dom = f.domain.clone();
    let mut out = f.clone();
    par::for_each_outer(&mut out.coeff, |k, mut plane| {
        if k == 0 {
            return;
        }
        for n in 0..dom.nx {
            for m in 0..dom.ny {
                plane[[n, m]] /= dom.symbol(n, m, k);
            }
        }
    });
    Ok(out)
}

/// How [`invert_neumann`] treats a nonzero mean mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanPolicy {
    /// Error out unless the mean mode is negligible.
    Reject,
    /// Silently project the mean mode away.
    Project,
}

/// Solve `-Laplace psi = f` with `d_z psi = 0` on the walls. The solution
/// is fixed by zeroing the free constant; the `(0,0,0)` mode of `f` must
/// vanish (or be projected away) for solvability.
pub fn invert_neumann(f: &SpectralScalar, mean_policy: MeanPolicy) -> Result<SpectralScalar> {
    if f.parity != Parity::Even {
        return Err(Error::ParityMismatch {
            expected: Parity::Even,
            got: f.parity,
        });
    }
    if mean_policy == MeanPolicy::Reject {
        let mean = f.mean_mode().norm();
        if mean > 1e-12 * f.l2_norm().max(f64::MIN_POSITIVE) {
            return Err(Error::SingularMode);
        }
    }
    let dom = f.domain.clone();
    let mut out = f.clone();
    par::for_each_outer(&mut out.coeff, |k, mut plane| {
        for n in 0..dom.nx {
            for m in 0..dom.ny {
                let sym = dom.symbol(n, m, k);
                if sym > 0.0 {
                    plane[[n, m]] /= sym;
                } else {
                    plane[[n, m]] = C64::new(0.0, 0.0);
                }
            }
        }
    });
    Ok(out)
}

/// Standard curl assembled from spectral derivatives. A velocity-class
/// input yields a vorticity-class output and vice versa.
pub fn curl(v: &VectorField) -> Result<VectorField> {
    let [vx, vy, vz] = &v.components;
    let c1 = sub(&deriv(vz, Axis3::Y), &deriv(vy, Axis3::Z))?;
    let c2 = sub(&deriv(vx, Axis3::Z), &deriv(vz, Axis3::X))?;
    let c3 = sub(&deriv(vy, Axis3::X), &deriv(vx, Axis3::Y))?;
    let role = match v.role {
        FieldRole::Velocity => FieldRole::Vorticity,
        FieldRole::Vorticity => FieldRole::Velocity,
        FieldRole::Generic => FieldRole::Generic,
    };
    VectorField::new([c1, c2, c3], role)
}

/// `sum_i d_i v_i`. Odd for vorticity-class fields, even for
/// velocity-class ones.
pub fn divergence(v: &VectorField) -> Result<SpectralScalar> {
    let [vx, vy, vz] = &v.components;
    let mut out = deriv(vx, Axis3::X);
    out.axpy(1.0, &deriv(vy, Axis3::Y))?;
    out.axpy(1.0, &deriv(vz, Axis3::Z))?;
    Ok(out)
}

/// Relative divergence of a vector field against its own norm.
pub fn divergence_rel(v: &VectorField) -> Result<f64> {
    let d = divergence(v)?;
    let scale = v.sobolev_norm(1).max(f64::MIN_POSITIVE);
    Ok(d.l2_norm() / scale)
}

/// Recover the unique slip-condition velocity with `curl u = w`,
/// `div u = 0`: invert the Poisson problem componentwise (Dirichlet for the
/// horizontal parts, Neumann for the vertical) and take the curl of the
/// stream function. The `(0,0,0)` mode of `w_3` must vanish, and the
/// recovered horizontal means are gauge-fixed to zero.
pub fn velocity_from_vorticity(w: &VectorField) -> Result<VectorField> {
    let div = divergence_rel(w)?;
    if div > 1e-10 {
        return Err(Error::Contract(format!(
            "vorticity must be divergence-free, relative divergence {div:.3e}"
        )));
    }
    velocity_from_vorticity_unchecked(w)
}

/// Velocity recovery without the divergence gate, for the integration loop
/// where divergence drift is monitored rather than enforced per call.
pub(crate) fn velocity_from_vorticity_unchecked(w: &VectorField) -> Result<VectorField> {
    if w.role != FieldRole::Vorticity {
        return Err(Error::Contract(format!(
            "velocity recovery needs a vorticity-class field, got {:?}",
            w.role
        )));
    }
    let phi1 = invert_dirichlet(&w.components[0])?;
    let phi2 = invert_dirichlet(&w.components[1])?;
    let phi3 = invert_neumann(&w.components[2], MeanPolicy::Reject)?;
    let u1 = sub(&deriv(&phi3, Axis3::Y), &deriv(&phi2, Axis3::Z))?;
    let u2 = sub(&deriv(&phi1, Axis3::Z), &deriv(&phi3, Axis3::X))?;
    let u3 = sub(&deriv(&phi2, Axis3::X), &deriv(&phi1, Axis3::Y))?;
    VectorField::new([u1, u2, u3], FieldRole::Velocity)
}

fn sub(a: &SpectralScalar, b: &SpectralScalar) -> Result<SpectralScalar> {
    let mut out = a.clone();
    out.axpy(-1.0, b)?;
    Ok(out)
}
