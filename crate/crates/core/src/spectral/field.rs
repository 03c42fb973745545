use std::sync::Arc;

use ndarray::Array3;

use crate::error::{Error, Result};
use crate::C64;

use super::{Domain, Parity};

/// Scalar field in mixed representation: complex horizontal Fourier
/// coefficients times vertical sine or cosine modes.
///
/// Coefficients are the plain series amplitudes, so a single unit
/// coefficient at `(0, 0, k=1)` with odd parity synthesizes to
/// `sin(pi z)`. Storage is `(k, n_xi, n_eta)` with `k` outermost; the
/// `k = 0` plane of an odd field is identically zero.
#[derive(Clone)]
pub struct SpectralScalar {
    pub domain: Arc<Domain>,
    pub parity: Parity,
    pub coeff: Array3<C64>,
}

impl SpectralScalar {
    pub fn zeros(domain: &Arc<Domain>, parity: Parity) -> Self {
        SpectralScalar {
            domain: domain.clone(),
            parity,
            coeff: Array3::zeros(domain.spectral_shape()),
        }
    }

    pub fn from_coeff(domain: &Arc<Domain>, parity: Parity, coeff: Array3<C64>) -> Result<Self> {
        if coeff.dim() != domain.spectral_shape() {
            return Err(Error::GridMismatch {
                expected: domain.spectral_shape(),
                got: coeff.dim(),
            });
        }
        Ok(SpectralScalar {
            domain: domain.clone(),
            parity,
            coeff,
        })
    }

    /// Set a single mode; `k` is the vertical wavenumber itself.
    pub fn set_mode(&mut self, n: usize, m: usize, k: usize, value: C64) {
        self.coeff[[k, n, m]] = value;
    }

    pub fn mode(&self, n: usize, m: usize, k: usize) -> C64 {
        self.coeff[[k, n, m]]
    }

    /// The `(xi, eta, k) = 0` mean-mode coefficient (zero by construction
    /// for odd fields).
    pub fn mean_mode(&self) -> C64 {
        self.coeff[[0, 0, 0]]
    }

    pub fn is_finite(&self) -> bool {
        self.coeff.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(&mut self, s: f64) {
        self.coeff.mapv_inplace(|c| c * s);
    }

    /// `self += s * other`; domains and parities must agree.
    pub fn axpy(&mut self, s: f64, other: &SpectralScalar) -> Result<()> {
        self.check_compatible(other)?;
        ndarray::Zip::from(&mut self.coeff)
            .and(&other.coeff)
            .for_each(|a, &b| *a += b * s);
        Ok(())
    }

    pub fn check_compatible(&self, other: &SpectralScalar) -> Result<()> {
        if !self.domain.same_grid(&other.domain) {
            return Err(Error::DomainMismatch);
        }
        if self.parity != other.parity {
            return Err(Error::ParityMismatch {
                expected: self.parity,
                got: other.parity,
            });
        }
        Ok(())
    }

    /// Zero every horizontal mode outside the two-thirds band.
    pub fn apply_dealias_mask(&mut self) {
        let dom = self.domain.clone();
        crate::par::for_each_outer(&mut self.coeff, |_, mut plane| {
            for n in 0..dom.nx {
                let kx = dom.keep_x(n);
                for m in 0..dom.ny {
                    if !(kx && dom.keep_y(m)) {
                        plane[[n, m]] = C64::new(0.0, 0.0);
                    }
                }
            }
        });
    }

    /// Largest relative deviation from Hermitian symmetry in `(n, m)`,
    /// measured against the largest coefficient magnitude.
    pub fn hermitian_defect(&self) -> f64 {
        let (kd, nx, ny) = self.coeff.dim();
        let scale = self
            .coeff
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for k in 0..kd {
            for n in 0..nx {
                let nc = (nx - n) % nx;
                for m in 0..ny {
                    let mc = (ny - m) % ny;
                    let d = (self.coeff[[k, n, m]] - self.coeff[[k, nc, mc]].conj()).norm();
                    worst = worst.max(d);
                }
            }
        }
        worst / scale
    }

    /// Point evaluation by direct summation over all retained modes.
    /// Slow; intended for boundary checks and test oracles.
    pub fn eval_at(&self, x: f64, y: f64, z: f64) -> f64 {
        let dom = &self.domain;
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..=dom.kmax {
            let vert = match self.parity {
                Parity::Odd => (k as f64 * std::f64::consts::PI * z).sin(),
                Parity::Even => (k as f64 * std::f64::consts::PI * z).cos(),
            };
            if vert == 0.0 && self.parity == Parity::Odd && k == 0 {
                continue;
            }
            for n in 0..dom.nx {
                let xi = dom.xi(n);
                for m in 0..dom.ny {
                    let eta = dom.eta(m);
                    let phase = C64::new(0.0, xi * x + eta * y).exp();
                    acc += self.coeff[[k, n, m]] * phase * vert;
                }
            }
        }
        acc.re
    }
}

/// Real-valued samples of a field on the collocation grid
/// `x_i = i L / Nx`, `y_j = j L / Ny`, `z_l = (l + 1/2)/Nz`,
/// stored `(l, i, j)` with `l` outermost.
#[derive(Clone)]
pub struct PhysicalScalar {
    pub domain: Arc<Domain>,
    pub values: Array3<f64>,
}

impl PhysicalScalar {
    pub fn zeros(domain: &Arc<Domain>) -> Self {
        PhysicalScalar {
            domain: domain.clone(),
            values: Array3::zeros(domain.physical_shape()),
        }
    }

    pub fn from_values(domain: &Arc<Domain>, values: Array3<f64>) -> Result<Self> {
        if values.dim() != domain.physical_shape() {
            return Err(Error::GridMismatch {
                expected: domain.physical_shape(),
                got: values.dim(),
            });
        }
        Ok(PhysicalScalar {
            domain: domain.clone(),
            values,
        })
    }

    /// Sample an arbitrary function on the collocation grid.
    pub fn from_fn(domain: &Arc<Domain>, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let (nz, nx, ny) = domain.physical_shape();
        let mut values = Array3::zeros((nz, nx, ny));
        for l in 0..nz {
            let z = (l as f64 + 0.5) / nz as f64;
            for i in 0..nx {
                let x = i as f64 * domain.l / nx as f64;
                for j in 0..ny {
                    let y = j as f64 * domain.l / ny as f64;
                    values[[l, i, j]] = f(x, y, z);
                }
            }
        }
        PhysicalScalar {
            domain: domain.clone(),
            values,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}
