use ndarray::{Array3, Axis, Zip};

use crate::error::{Error, Result};
use crate::par;
use crate::C64;

use super::{Parity, PhysicalScalar, SpectralScalar};

impl SpectralScalar {
    /// Synthesize onto the collocation grid: vertical sine/cosine synthesis
    /// per horizontal plane, then an inverse 2D FFT per z-level. The result
    /// is real up to roundoff for Hermitian-symmetric coefficients; the
    /// imaginary part is discarded.
    pub fn to_physical(&self) -> PhysicalScalar {
        let dom = self.domain.clone();
        let (nz, nx, ny) = dom.physical_shape();
        let mut tmp = Array3::<C64>::zeros((nz, nx, ny));
        let coeff = &self.coeff;
        let parity = self.parity;
        par::for_each_outer(&mut tmp, |l, mut plane| {
            let k_lo = if parity == Parity::Odd { 1 } else { 0 };
            for k in k_lo..=dom.kmax {
                let b = match parity {
                    Parity::Odd => dom.sin_basis(k, l),
                    Parity::Even => dom.cos_basis(k, l),
                };
                let cp = coeff.index_axis(Axis(0), k);
                Zip::from(&mut plane).and(&cp).for_each(|t, &c| *t += c * b);
            }
            dom.fft().inverse(&mut plane);
        });

        let mut out = PhysicalScalar::zeros(&self.domain);
        par::for_each_outer(&mut out.values, |l, mut vplane| {
            let tp = tmp.index_axis(Axis(0), l);
            Zip::from(&mut vplane).and(&tp).for_each(|v, &c| *v = c.re);
        });
        out
    }
}

impl PhysicalScalar {
    /// Analyze collocation samples into the given parity class.
    ///
    /// The midpoint z-grid makes both vertical families orthogonal under the
    /// plain sum, so the analysis is exact for band-limited fields. The
    /// unpaired Nyquist rows `n = Nx/2`, `m = Ny/2` are dropped to keep
    /// Hermitian symmetry closed under differentiation.
    pub fn to_spectral(&self, parity: Parity) -> SpectralScalar {
        let dom = self.domain.clone();
        let (nz, nx, ny) = dom.physical_shape();
        let mut planes = Array3::<C64>::zeros((nz, nx, ny));
        let values = &self.values;
        par::for_each_outer(&mut planes, |l, mut plane| {
            let vp = values.index_axis(Axis(0), l);
            Zip::from(&mut plane)
                .and(&vp)
                .for_each(|c, &v| *c = C64::new(v, 0.0));
            dom.fft().forward(&mut plane);
        });

        let mut out = SpectralScalar::zeros(&self.domain, parity);
        let horiz_scale = 1.0 / (nx * ny) as f64;
        par::for_each_outer(&mut out.coeff, |k, mut cplane| {
            if parity == Parity::Odd && k == 0 {
                return;
            }
            let vert_scale = if k == 0 { 1.0 } else { 2.0 } / nz as f64;
            let s = horiz_scale * vert_scale;
            for l in 0..nz {
                let b = match parity {
                    Parity::Odd => dom.sin_basis(k, l),
                    Parity::Even => dom.cos_basis(k, l),
                };
                let pp = planes.index_axis(Axis(0), l);
                Zip::from(&mut cplane)
                    .and(&pp)
                    .for_each(|c, &p| *c += p * (b * s));
            }
            let half_x = nx / 2;
            let half_y = ny / 2;
            for m in 0..ny {
                cplane[[half_x, m]] = C64::new(0.0, 0.0);
            }
            for n in 0..nx {
                cplane[[n, half_y]] = C64::new(0.0, 0.0);
            }
        });
        out
    }

    /// Analysis with an explicit grid check, for callers holding a foreign
    /// domain handle.
    pub fn to_spectral_on(&self, domain: &std::sync::Arc<super::Domain>, parity: Parity) -> Result<SpectralScalar> {
        if !self.domain.same_grid(domain) {
            return Err(Error::DomainMismatch);
        }
        Ok(self.to_spectral(parity))
    }
}
