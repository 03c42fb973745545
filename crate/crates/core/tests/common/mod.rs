//! Shared fixtures: seeded band-limited random fields and brute-force
//! reference transforms, kept independent of the library's FFT path.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slabflow::spectral::{Domain, Parity, PhysicalScalar, SpectralScalar};
use slabflow::C64;

pub fn domain_small() -> Arc<Domain> {
    Domain::new(2.0 * PI, 12, 12, 5, 9).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Hermitian random field, band-limited to `|n|, |m| <= hband`, `k <= kband`.
pub fn random_spectral(
    domain: &Arc<Domain>,
    parity: Parity,
    hband: i64,
    kband: usize,
    seed: u64,
) -> SpectralScalar {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralScalar::zeros(domain, parity);
    let (nx, ny) = (domain.nx, domain.ny);
    let k_lo = if parity == Parity::Odd { 1 } else { 0 };
    for k in k_lo..=kband.min(domain.kmax) {
        for n in 0..nx {
            let sn = Domain::signed(n, nx);
            if sn.abs() > hband {
                continue;
            }
            let nc = (nx - n) % nx;
            for m in 0..ny {
                let sm = Domain::signed(m, ny);
                if sm.abs() > hband {
                    continue;
                }
                let mc = (ny - m) % ny;
                if (nc, mc) < (n, m) {
                    continue;
                }
                let re: f64 = rng.random::<f64>() - 0.5;
                let im: f64 = rng.random::<f64>() - 0.5;
                if (nc, mc) == (n, m) {
                    f.coeff[[k, n, m]] = C64::new(re, 0.0);
                } else {
                    f.coeff[[k, n, m]] = C64::new(re, im);
                    f.coeff[[k, nc, mc]] = C64::new(re, -im);
                }
            }
        }
    }
    f
}

/// Brute-force synthesis: evaluate the series mode by mode at every grid
/// point. O(N^2), used only as an oracle.
pub fn naive_synthesis(f: &SpectralScalar) -> PhysicalScalar {
    let dom = &f.domain;
    let (nz, nx, ny) = dom.physical_shape();
    let mut out = Array3::<f64>::zeros((nz, nx, ny));
    for l in 0..nz {
        let z = (l as f64 + 0.5) / nz as f64;
        for i in 0..nx {
            let x = i as f64 * dom.l / nx as f64;
            for j in 0..ny {
                let y = j as f64 * dom.l / ny as f64;
                out[[l, i, j]] = f.eval_at(x, y, z);
            }
        }
    }
    PhysicalScalar::from_values(&f.domain, out).unwrap()
}

/// Brute-force analysis by direct quadrature sums of the basis projections.
pub fn naive_analysis(p: &PhysicalScalar, parity: Parity) -> SpectralScalar {
    let dom = &p.domain;
    let (nz, nx, ny) = dom.physical_shape();
    let mut out = SpectralScalar::zeros(&p.domain, parity);
    let k_lo = if parity == Parity::Odd { 1 } else { 0 };
    for k in k_lo..=dom.kmax {
        let vert_scale = if k == 0 { 1.0 } else { 2.0 } / nz as f64;
        for n in 0..nx {
            if n == nx / 2 {
                continue;
            }
            let xi = dom.xi(n);
            for m in 0..ny {
                if m == ny / 2 {
                    continue;
                }
                let eta = dom.eta(m);
                let mut acc = C64::new(0.0, 0.0);
                for l in 0..nz {
                    let z = (l as f64 + 0.5) / nz as f64;
                    let vert = match parity {
                        Parity::Odd => (k as f64 * PI * z).sin(),
                        Parity::Even => (k as f64 * PI * z).cos(),
                    };
                    for i in 0..nx {
                        let x = i as f64 * dom.l / nx as f64;
                        for j in 0..ny {
                            let y = j as f64 * dom.l / ny as f64;
                            let phase = C64::new(0.0, -(xi * x + eta * y)).exp();
                            acc += p.values[[l, i, j]] * phase * vert;
                        }
                    }
                }
                out.coeff[[k, n, m]] = acc * (vert_scale / (nx * ny) as f64);
            }
        }
    }
    out
}

/// Max coefficient distance between two spectral fields.
pub fn coeff_dist(a: &SpectralScalar, b: &SpectralScalar) -> f64 {
    a.coeff
        .iter()
        .zip(b.coeff.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Max coefficient magnitude.
pub fn coeff_scale(a: &SpectralScalar) -> f64 {
    a.coeff.iter().map(|c| c.norm()).fold(0.0, f64::max)
}
