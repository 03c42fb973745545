use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elliptic::{curl, FieldRole, VectorField};
use crate::error::Result;
use crate::spectral::{lambda_pow, Domain, Parity, SpectralScalar};
use crate::C64;

use super::State;

/// Deterministic random initial data.
///
/// The vorticity is the curl of a random velocity-class potential, so it is
/// divergence-free at coefficient level and its vertical component has no
/// horizontal-mean content. Coefficient magnitudes fall off like
/// `exp(-falloff |kappa|)`, Hermitian symmetry is built in, and both fields
/// are scaled so the primary energy monitor equals `amplitude`.
pub fn gen_initial(
    domain: &Arc<Domain>,
    seed: u64,
    amplitude: f64,
    falloff: f64,
    m_prime: u32,
) -> Result<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pot = VectorField::new(
        [
            random_scalar(domain, Parity::Even, falloff, &mut rng),
            random_scalar(domain, Parity::Even, falloff, &mut rng),
            random_scalar(domain, Parity::Odd, falloff, &mut rng),
        ],
        FieldRole::Velocity,
    )?;
    let mut omega = curl(&pot)?;
    let mut theta = random_scalar(domain, Parity::Odd, falloff, &mut rng);

    for c in &mut omega.components {
        c.apply_dealias_mask();
    }
    theta.apply_dealias_mask();

    let e1 = theta.sobolev_norm(m_prime + 1)
        + omega.sobolev_norm(m_prime)
        + lambda_pow(&omega.components[2], -1.0)?.l2_norm();
    let scale = if e1 > 0.0 { amplitude / e1 } else { 0.0 };
    for c in &mut omega.components {
        c.scale(scale);
    }
    theta.scale(scale);

    State::new(omega, theta, 0.0)
}

/// Hermitian-symmetric random field with spectral falloff. Draw order is a
/// fixed raster scan, so equal seeds give bit-identical fields.
fn random_scalar(
    domain: &Arc<Domain>,
    parity: Parity,
    falloff: f64,
    rng: &mut ChaCha8Rng,
) -> SpectralScalar {
    let mut f = SpectralScalar::zeros(domain, parity);
    let (nx, ny) = (domain.nx, domain.ny);
    let k_lo = if parity == Parity::Odd { 1 } else { 0 };
    for k in k_lo..=domain.kmax {
        for n in 0..nx {
            let nc = (nx - n) % nx;
            for m in 0..ny {
                let mc = (ny - m) % ny;
                if (nc, mc) < (n, m) {
                    continue;
                }
                if !(domain.keep_x(n) && domain.keep_y(m)) {
                    continue;
                }
                let kappa = domain.symbol(n, m, k).sqrt();
                let mag = (-falloff * kappa).exp();
                let (g1, g2) = gauss_pair(rng);
                if (nc, mc) == (n, m) {
                    f.coeff[[k, n, m]] = C64::new(mag * g1, 0.0);
                } else {
                    let c = C64::new(mag * g1, mag * g2);
                    f.coeff[[k, n, m]] = c;
                    f.coeff[[k, nc, mc]] = c.conj();
                }
            }
        }
    }
    f
}

fn gauss_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let phi = 2.0 * std::f64::consts::PI * u2;
    (r * phi.cos(), r * phi.sin())
}
