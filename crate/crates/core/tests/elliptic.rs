//! Poisson inversion residuals, vector-calculus identities, and the
//! velocity recovery round trip with its norm bound.

mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::*;
use slabflow::elliptic::{
    curl, divergence, invert_dirichlet, invert_neumann, velocity_from_vorticity, FieldRole,
    MeanPolicy, VectorField,
};
use slabflow::sim::gen_initial;
use slabflow::spectral::{deriv, Axis3, Domain, Parity, SpectralScalar};
use slabflow::{C64, Error};

fn laplacian(f: &SpectralScalar) -> SpectralScalar {
    let xx = deriv(&deriv(f, Axis3::X), Axis3::X);
    let yy = deriv(&deriv(f, Axis3::Y), Axis3::Y);
    let zz = deriv(&deriv(f, Axis3::Z), Axis3::Z);
    let mut out = xx;
    out.axpy(1.0, &yy).unwrap();
    out.axpy(1.0, &zz).unwrap();
    out
}

#[test]
fn dirichlet_single_modes() {
    let dom = domain_small();
    let mut f = SpectralScalar::zeros(&dom, Parity::Odd);
    f.set_mode(0, 0, 1, C64::new(1.0, 0.0));
    let psi = invert_dirichlet(&f).unwrap();
    assert_relative_eq!(psi.mode(0, 0, 1).re, 1.0 / (PI * PI), max_relative = 1e-14);

    // sin(2 pi x / L) sin(3 pi z) divides by (2 pi / L)^2 + 9 pi^2.
    let mut g = SpectralScalar::zeros(&dom, Parity::Odd);
    g.set_mode(1, 0, 3, C64::new(0.0, -0.5));
    g.set_mode(dom.nx - 1, 0, 3, C64::new(0.0, 0.5));
    let psi_g = invert_dirichlet(&g).unwrap();
    let xi = 2.0 * PI / dom.l;
    assert_relative_eq!(
        psi_g.mode(1, 0, 3).im,
        -0.5 / (xi * xi + 9.0 * PI * PI),
        max_relative = 1e-14
    );
}

#[test]
fn dirichlet_residual_on_random_fields() {
    let dom = domain_small();
    let f = random_spectral(&dom, Parity::Odd, 4, 4, 17);
    let psi = invert_dirichlet(&f).unwrap();
    let mut res = laplacian(&psi);
    res.scale(-1.0);
    res.axpy(-1.0, &f).unwrap();
    assert!(res.l2_norm() <= 1e-12 * f.l2_norm());
    // H^{m+2} bound with the explicit constant 1/pi^2 at m = 0.
    assert!(psi.l2_norm() <= f.l2_norm() / (PI * PI) * (1.0 + 1e-12));
}

#[test]
fn dirichlet_rejects_even_fields() {
    let dom = domain_small();
    let f = random_spectral(&dom, Parity::Even, 2, 2, 18);
    assert!(matches!(invert_dirichlet(&f), Err(Error::ParityMismatch { .. })));
}

#[test]
fn neumann_single_mode_and_mean_gauge() {
    let dom = domain_small();
    let mut f = SpectralScalar::zeros(&dom, Parity::Even);
    f.set_mode(0, 0, 1, C64::new(1.0, 0.0));
    let psi = invert_neumann(&f, MeanPolicy::Reject).unwrap();
    assert_relative_eq!(psi.mode(0, 0, 1).re, 1.0 / (PI * PI), max_relative = 1e-14);
    assert_eq!(psi.mean_mode().norm(), 0.0);
}

#[test]
fn neumann_rejects_constant_forcing() {
    let dom = domain_small();
    let mut f = SpectralScalar::zeros(&dom, Parity::Even);
    f.set_mode(0, 0, 0, C64::new(1.0, 0.0));
    assert!(matches!(
        invert_neumann(&f, MeanPolicy::Reject),
        Err(Error::SingularMode)
    ));
    // The projection policy solves the projected problem instead.
    let psi = invert_neumann(&f, MeanPolicy::Project).unwrap();
    assert_eq!(psi.mean_mode().norm(), 0.0);
}

#[test]
fn neumann_residual_on_zero_mean_fields() {
    let dom = domain_small();
    let mut f = random_spectral(&dom, Parity::Even, 4, 4, 19);
    f.coeff[[0, 0, 0]] = C64::new(0.0, 0.0);
    let psi = invert_neumann(&f, MeanPolicy::Reject).unwrap();
    let mut res = laplacian(&psi);
    res.scale(-1.0);
    res.axpy(-1.0, &f).unwrap();
    assert!(res.l2_norm() <= 1e-12 * f.l2_norm());
}

#[test]
fn curl_of_shear_profile() {
    let dom = domain_small();
    // u = (cos(pi z), 0, 0) has curl (0, d3 u1, 0) = (0, -pi sin(pi z), 0).
    let mut u1 = SpectralScalar::zeros(&dom, Parity::Even);
    u1.set_mode(0, 0, 1, C64::new(1.0, 0.0));
    let u = VectorField::new(
        [
            u1,
            SpectralScalar::zeros(&dom, Parity::Even),
            SpectralScalar::zeros(&dom, Parity::Odd),
        ],
        FieldRole::Velocity,
    )
    .unwrap();
    let w = curl(&u).unwrap();
    assert_eq!(w.role, FieldRole::Vorticity);
    assert_relative_eq!(w.components[1].mode(0, 0, 1).re, -PI, max_relative = 1e-14);
    assert!(w.components[0].l2_norm() + w.components[2].l2_norm() <= 1e-14);
}

#[test]
fn curl_of_gradient_vanishes() {
    let dom = domain_small();
    let psi = random_spectral(&dom, Parity::Even, 4, 4, 23);
    let grad = VectorField::new(
        [
            deriv(&psi, Axis3::X),
            deriv(&psi, Axis3::Y),
            deriv(&psi, Axis3::Z),
        ],
        FieldRole::Velocity,
    )
    .unwrap();
    let w = curl(&grad).unwrap();
    assert!(w.l2_norm() <= 1e-12 * psi.sobolev_norm(2));
}

#[test]
fn divergence_of_curl_vanishes() {
    let dom = domain_small();
    let v = VectorField::new(
        [
            random_spectral(&dom, Parity::Even, 4, 4, 29),
            random_spectral(&dom, Parity::Even, 4, 4, 30),
            random_spectral(&dom, Parity::Odd, 4, 4, 31),
        ],
        FieldRole::Velocity,
    )
    .unwrap();
    let w = curl(&v).unwrap();
    let d = divergence(&w).unwrap();
    assert_eq!(d.parity, Parity::Odd);
    assert!(d.l2_norm() <= 1e-12 * v.sobolev_norm(2));
}

#[test]
fn divergence_of_horizontal_wave() {
    let dom = domain_small();
    // v = (sin(2 pi x / L), 0, 0): div v = (2 pi / L) cos(2 pi x / L).
    let mut v1 = SpectralScalar::zeros(&dom, Parity::Even);
    v1.set_mode(1, 0, 0, C64::new(0.0, -0.5));
    v1.set_mode(dom.nx - 1, 0, 0, C64::new(0.0, 0.5));
    let v = VectorField::new(
        [
            v1,
            SpectralScalar::zeros(&dom, Parity::Even),
            SpectralScalar::zeros(&dom, Parity::Odd),
        ],
        FieldRole::Velocity,
    )
    .unwrap();
    let d = divergence(&v).unwrap();
    assert_eq!(d.parity, Parity::Even);
    let xi = 2.0 * PI / dom.l;
    assert_relative_eq!(d.mode(1, 0, 0).re, 0.5 * xi, max_relative = 1e-13);
}

#[test]
fn velocity_recovery_inverts_shear_curl() {
    let dom = domain_small();
    // w = (0, -pi sin(pi z), 0) recovers u1 = cos(pi z) with zero mean gauge.
    let mut w2 = SpectralScalar::zeros(&dom, Parity::Odd);
    w2.set_mode(0, 0, 1, C64::new(-PI, 0.0));
    let w = VectorField::new(
        [
            SpectralScalar::zeros(&dom, Parity::Odd),
            w2,
            SpectralScalar::zeros(&dom, Parity::Even),
        ],
        FieldRole::Vorticity,
    )
    .unwrap();
    let u = velocity_from_vorticity(&w).unwrap();
    assert_relative_eq!(u.components[0].mode(0, 0, 1).re, 1.0, max_relative = 1e-13);
    assert!(u.components[1].l2_norm() + u.components[2].l2_norm() <= 1e-13);
    assert_eq!(u.components[0].mean_mode().norm(), 0.0);
}

#[test]
fn velocity_recovery_of_zero_is_zero() {
    let dom = domain_small();
    let w = VectorField::zeros(&dom, FieldRole::Vorticity);
    let u = velocity_from_vorticity(&w).unwrap();
    assert_eq!(u.l2_norm(), 0.0);
}

#[test]
fn velocity_recovery_round_trips() {
    let dom = domain_small();
    let state = gen_initial(&dom, 4242, 1.0, 0.25, 3).unwrap();
    let w = state.omega;
    let u = velocity_from_vorticity(&w).unwrap();
    let back = curl(&u).unwrap();
    for (a, b) in back.components.iter().zip(&w.components) {
        let mut d = a.clone();
        d.axpy(-1.0, b).unwrap();
        assert!(d.l2_norm() <= 1e-10 * w.sobolev_norm(1).max(1e-30));
    }
    let d = divergence(&u).unwrap();
    assert!(d.l2_norm() <= 1e-12 * u.sobolev_norm(1));
}

#[test]
fn velocity_recovery_norm_bound() {
    let dom = domain_small();
    for seed in [5, 6, 7, 8] {
        let state = gen_initial(&dom, seed, 1.0, 0.15, 3).unwrap();
        let w = state.omega;
        let u = velocity_from_vorticity(&w).unwrap();
        for m in 0..=2u32 {
            let grad_u_hm = {
                let mut acc = 0.0;
                for c in &u.components {
                    for ax in [Axis3::X, Axis3::Y, Axis3::Z] {
                        acc += deriv(c, ax).sobolev_norm(m).powi(2);
                    }
                }
                acc.sqrt()
            };
            let ratio = (u.components[2].sobolev_norm(m + 1) + grad_u_hm) / w.sobolev_norm(m);
            assert!(ratio <= 4.0, "m={m}: recovery ratio {ratio:.3}");
        }
    }
}

#[test]
fn velocity_recovery_rejects_nonzero_mean_w3() {
    let dom = domain_small();
    let mut w3 = SpectralScalar::zeros(&dom, Parity::Even);
    w3.set_mode(0, 0, 0, C64::new(1.0, 0.0));
    let w = VectorField::new(
        [
            SpectralScalar::zeros(&dom, Parity::Odd),
            SpectralScalar::zeros(&dom, Parity::Odd),
            w3,
        ],
        FieldRole::Vorticity,
    )
    .unwrap();
    assert!(matches!(
        velocity_from_vorticity(&w),
        Err(Error::SingularMode)
    ));
}

#[test]
fn velocity_recovery_rejects_divergent_input() {
    let dom = domain_small();
    let w = VectorField::new(
        [
            random_spectral(&dom, Parity::Odd, 3, 3, 55),
            random_spectral(&dom, Parity::Odd, 3, 3, 56),
            random_spectral(&dom, Parity::Even, 3, 3, 57),
        ],
        FieldRole::Vorticity,
    )
    .unwrap();
    assert!(matches!(
        velocity_from_vorticity(&w),
        Err(Error::Contract(_))
    ));
}

#[test]
fn recovered_velocity_satisfies_slip_conditions() {
    let dom = domain_small();
    let state = gen_initial(&dom, 99, 1.0, 0.2, 3).unwrap();
    let u = velocity_from_vorticity(&state.omega).unwrap();
    assert_eq!(u.components[0].parity, Parity::Even);
    assert_eq!(u.components[1].parity, Parity::Even);
    assert_eq!(u.components[2].parity, Parity::Odd);
    let norm = u.sobolev_norm(1).max(1e-30);
    // u3 vanishes on the walls, d3 u1 / d3 u2 vanish on the walls.
    assert!(u.components[2].eval_at(0.3, 0.7, 0.0).abs() <= 1e-11 * norm);
    assert!(u.components[2].eval_at(0.3, 0.7, 1.0).abs() <= 1e-11 * norm);
    for c in &u.components[..2] {
        let dz = deriv(c, Axis3::Z);
        assert!(dz.eval_at(1.0, 2.0, 0.0).abs() <= 1e-10 * norm);
        assert!(dz.eval_at(1.0, 2.0, 1.0).abs() <= 1e-10 * norm);
    }
}

#[test]
fn domain_validation() {
    assert!(Domain::new(2.0 * PI, 12, 12, 5, 7).is_err()); // nz too small
    assert!(Domain::new(2.0 * PI, 7, 12, 5, 9).is_err()); // odd nx
    assert!(Domain::new(-1.0, 12, 12, 5, 9).is_err());
    assert!(Domain::new(2.0 * PI, 12, 12, 0, 9).is_err());
}
