use ndarray::Zip;

use crate::elliptic::{
    divergence, invert_dirichlet, velocity_from_vorticity_unchecked, FieldRole, VectorField,
};
use crate::error::{Error, Result};
use crate::spectral::{deriv, Axis3, Parity, PhysicalScalar, SpectralScalar};
use crate::C64;

use super::State;

/// Explicit part of the tendency: everything except the heat dissipation of
/// the vorticity, which the integrating factor applies exactly.
pub struct Tendency {
    pub domega: [SpectralScalar; 3],
    pub dtheta: SpectralScalar,
    /// Sup of the velocity components on the grid (None in linear-only mode,
    /// which transports nothing).
    pub max_u: Option<f64>,
}

/// Full nonlinear tendency. The advection and stretching terms are
/// assembled in flux form `f1_i = sum_j d_j (u_i w_j - u_j w_i)`, which is
/// analytically identical for divergence-free fields and keeps both
/// `div(f1) = 0` and the horizontal mean of the third component exactly
/// zero at coefficient level.
pub fn rhs(s: &State, dealias: bool, linear_only: bool) -> Result<Tendency> {
    let u = velocity_from_vorticity_unchecked(&s.omega)?;

    // Buoyancy part (d2 theta, -d1 theta, 0) enters spectrally.
    let mut f1 = [
        deriv(&s.theta, Axis3::Y),
        negate(deriv(&s.theta, Axis3::X)),
        SpectralScalar::zeros(&s.theta.domain, Parity::Even),
    ];

    if linear_only {
        let mut dtheta = negate(u.components[2].clone());
        dtheta.apply_dealias_mask();
        return Ok(Tendency {
            domega: f1,
            dtheta,
            max_u: None,
        });
    }

    let u_phys: Vec<PhysicalScalar> = u.components.iter().map(|c| c.to_physical()).collect();
    let w_phys: Vec<PhysicalScalar> =
        s.omega.components.iter().map(|c| c.to_physical()).collect();
    let th_phys = s.theta.to_physical();
    let max_u = u_phys.iter().map(|p| p.max_abs()).fold(0.0f64, f64::max);

    // p[i][j] = u_i w_j in spectral space (off-diagonal entries only).
    let mut p: [[Option<SpectralScalar>; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let par = u.components[i].parity.product(s.omega.components[j].parity);
            p[i][j] = Some(pointwise(&u_phys[i], &w_phys[j], par, dealias));
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let flux = sub_owned(
                p[i][j].as_ref().unwrap().clone(),
                p[j][i].as_ref().unwrap(),
            )?;
            f1[i].axpy(1.0, &deriv(&flux, axis_of(j)))?;
        }
    }

    // d theta/dt = -div(u theta) - u3, using div u = 0.
    let mut dtheta = negate(u.components[2].clone());
    for j in 0..3 {
        let par = u.components[j].parity.product(s.theta.parity);
        let flux = pointwise(&u_phys[j], &th_phys, par, dealias);
        dtheta.axpy(-1.0, &deriv(&flux, axis_of(j)))?;
    }

    if dealias {
        for c in &mut f1 {
            c.apply_dealias_mask();
        }
        dtheta.apply_dealias_mask();
    }
    // The flux form has no horizontal-mean source for the vertical
    // component; pin the gauge exactly.
    f1[2].coeff[[0, 0, 0]] = C64::new(0.0, 0.0);

    debug_assert!(f1[0].parity == Parity::Odd && f1[2].parity == Parity::Even);
    Ok(Tendency {
        domega: f1,
        dtheta,
        max_u: Some(max_u),
    })
}

/// The inhomogeneous term of the decoupled second-order temperature
/// equation, assembled from the current state only: time derivatives of
/// `u`, `w`, `theta` are reconstructed from the equations of motion.
pub fn compute_f2(s: &State, dealias: bool) -> Result<SpectralScalar> {
    let dom = s.theta.domain.clone();
    let u = velocity_from_vorticity_unchecked(&s.omega)?;
    let tend = rhs(s, dealias, false)?;

    // d omega/dt = Laplace omega + f1.
    let mut domega_full = VectorField::zeros(&dom, FieldRole::Vorticity);
    for i in 0..3 {
        let mut lap = s.omega.components[i].clone();
        scale_by_symbol(&mut lap, -1.0);
        domega_full.components[i] = tend.domega[i].clone();
        domega_full.components[i].axpy(1.0, &lap)?;
    }
    let du = velocity_from_vorticity_unchecked(&domega_full)?;
    let dtheta = &tend.dtheta;

    let u_phys: Vec<PhysicalScalar> = u.components.iter().map(|c| c.to_physical()).collect();
    let du_phys: Vec<PhysicalScalar> = du.components.iter().map(|c| c.to_physical()).collect();
    let w_phys: Vec<PhysicalScalar> =
        s.omega.components.iter().map(|c| c.to_physical()).collect();

    // Advective scalars appearing under the Poisson inversions.
    const VEL: [Parity; 3] = [Parity::Even, Parity::Even, Parity::Odd];
    const VOR: [Parity; 3] = [Parity::Odd, Parity::Odd, Parity::Even];
    let u_grad_w1 = advect(&u_phys, VEL, &s.omega.components[0], dealias)?;
    let u_grad_w2 = advect(&u_phys, VEL, &s.omega.components[1], dealias)?;
    let w_grad_u1 = advect(&w_phys, VOR, &u.components[0], dealias)?;
    let w_grad_u2 = advect(&w_phys, VOR, &u.components[1], dealias)?;
    let u_grad_th = advect(&u_phys, VEL, &s.theta, dealias)?;
    let u_grad_dth = advect(&u_phys, VEL, dtheta, dealias)?;
    let du_grad_th = advect(&du_phys, VEL, &s.theta, dealias)?;

    // f2 = -du.grad(theta) - u.grad(dtheta) + Laplace(u.grad theta)
    //      + d1 (-L)^-1 (u.grad w2) - d2 (-L)^-1 (u.grad w1)
    //      + d1 (-L)^-1 (w.grad u2) - d2 (-L)^-1 (w.grad u1).
    let mut f2 = negate(du_grad_th);
    f2.axpy(-1.0, &u_grad_dth)?;
    let mut lap_ugt = u_grad_th;
    scale_by_symbol(&mut lap_ugt, -1.0);
    f2.axpy(1.0, &lap_ugt)?;
    f2.axpy(1.0, &deriv(&invert_dirichlet(&u_grad_w2)?, Axis3::X))?;
    f2.axpy(-1.0, &deriv(&invert_dirichlet(&u_grad_w1)?, Axis3::Y))?;
    f2.axpy(1.0, &deriv(&invert_dirichlet(&w_grad_u2)?, Axis3::X))?;
    f2.axpy(-1.0, &deriv(&invert_dirichlet(&w_grad_u1)?, Axis3::Y))?;
    if dealias {
        f2.apply_dealias_mask();
    }
    if f2.parity != Parity::Odd {
        return Err(Error::Contract("f2 must land in the odd class".into()));
    }
    Ok(f2)
}

/// Relative divergence diagnostic of the state's vorticity.
pub fn divergence_diagnostic(s: &State) -> Result<f64> {
    let d = divergence(&s.omega)?;
    Ok(d.l2_norm() / s.omega.sobolev_norm(1).max(f64::MIN_POSITIVE))
}

/// `sum_j c_j d_j field` with the carrier sampled in physical space.
fn advect(
    carrier_phys: &[PhysicalScalar],
    carrier_parity: [Parity; 3],
    field: &SpectralScalar,
    dealias: bool,
) -> Result<SpectralScalar> {
    let mut out: Option<SpectralScalar> = None;
    for (j, cp) in carrier_phys.iter().enumerate() {
        let g = deriv(field, axis_of(j));
        let gp = g.to_physical();
        let par = carrier_parity[j].product(g.parity);
        let term = pointwise(cp, &gp, par, dealias);
        match &mut out {
            None => out = Some(term),
            Some(acc) => acc.axpy(1.0, &term)?,
        }
    }
    Ok(out.expect("three carrier components"))
}

fn axis_of(j: usize) -> Axis3 {
    match j {
        0 => Axis3::X,
        1 => Axis3::Y,
        _ => Axis3::Z,
    }
}

fn pointwise(
    a: &PhysicalScalar,
    b: &PhysicalScalar,
    parity: Parity,
    dealias: bool,
) -> SpectralScalar {
    let mut prod = a.clone();
    Zip::from(&mut prod.values).and(&b.values).for_each(|x, &y| *x *= y);
    let mut out = prod.to_spectral(parity);
    if dealias {
        out.apply_dealias_mask();
    }
    out
}

fn negate(mut f: SpectralScalar) -> SpectralScalar {
    f.scale(-1.0);
    f
}

fn sub_owned(mut a: SpectralScalar, b: &SpectralScalar) -> Result<SpectralScalar> {
    a.axpy(-1.0, b)?;
    Ok(a)
}

/// Multiply coefficients by `s * (xi^2 + eta^2 + pi^2 k^2)`.
pub(crate) fn scale_by_symbol(f: &mut SpectralScalar, s: f64) {
    let dom = f.domain.clone();
    crate::par::for_each_outer(&mut f.coeff, |k, mut plane| {
        for n in 0..dom.nx {
            for m in 0..dom.ny {
                plane[[n, m]] *= s * dom.symbol(n, m, k);
            }
        }
    });
}
