use ndarray::Axis;

use crate::par;

use super::SpectralScalar;

/// Frequency-space Lebesgue exponent for [`SpectralScalar::hat_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HatExponent {
    One,
    Two,
    Inf,
}

/// Vertical L^2 weight of mode `k`: the plain sine/cosine amplitudes carry
/// `int_0^1 sin^2(k pi z) dz = 1/2` for `k >= 1` and `1` for the constant
/// cosine mode, so norms switch to the unitary convention internally.
#[inline]
fn vert_weight(k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        0.5
    }
}

impl SpectralScalar {
    /// Discrete H^m norm: `sqrt(sum (1 + |kappa|^2)^m |f^|^2 w)` with the
    /// horizontal quadrature weight `w = (2 pi / L)^2` per mode standing in
    /// for `d xi d eta`.
    pub fn sobolev_norm(&self, m: u32) -> f64 {
        let dom = &self.domain;
        let w = dom.mode_weight();
        let kd = dom.kmax + 1;
        let sum = par::sum_indexed(kd, |k| {
            let plane = self.coeff.index_axis(Axis(0), k);
            let nu = vert_weight(k);
            let mut acc = 0.0;
            for n in 0..dom.nx {
                for mi in 0..dom.ny {
                    let sym = 1.0 + dom.symbol(n, mi, k);
                    acc += sym.powi(m as i32) * plane[[n, mi]].norm_sqr() * nu;
                }
            }
            acc * w
        });
        sum.sqrt()
    }

    /// Plain L^2 norm (`sobolev_norm` at `m = 0`).
    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0)
    }

    /// Squared homogeneous norm `sum |kappa|^{2m} |f^|^2 w`, so that
    /// `homogeneous_sobolev_sq(1)` is the squared L^2 norm of the gradient.
    pub fn homogeneous_sobolev_sq(&self, m: u32) -> f64 {
        let dom = &self.domain;
        let w = dom.mode_weight();
        let kd = dom.kmax + 1;
        par::sum_indexed(kd, |k| {
            let plane = self.coeff.index_axis(Axis(0), k);
            let nu = vert_weight(k);
            let mut acc = 0.0;
            for n in 0..dom.nx {
                for mi in 0..dom.ny {
                    let sym = dom.symbol(n, mi, k);
                    acc += sym.powi(m as i32) * plane[[n, mi]].norm_sqr() * nu;
                }
            }
            acc * w
        })
    }

    /// Frequency-space L^p norm over `R^2 x N`, Riemann-approximated with
    /// the same per-mode weight as [`sobolev_norm`].
    pub fn hat_norm(&self, p: HatExponent) -> f64 {
        let dom = &self.domain;
        let w = dom.mode_weight();
        let kd = dom.kmax + 1;
        match p {
            HatExponent::One => par::sum_indexed(kd, |k| {
                let plane = self.coeff.index_axis(Axis(0), k);
                let nu = vert_weight(k).sqrt();
                plane.iter().map(|c| c.norm() * nu).sum::<f64>() * w
            }),
            HatExponent::Two => {
                let s = par::sum_indexed(kd, |k| {
                    let plane = self.coeff.index_axis(Axis(0), k);
                    let nu = vert_weight(k);
                    plane.iter().map(|c| c.norm_sqr() * nu).sum::<f64>() * w
                });
                s.sqrt()
            }
            HatExponent::Inf => {
                let per_k = par::map_indexed(kd, |k| {
                    let plane = self.coeff.index_axis(Axis(0), k);
                    let nu = vert_weight(k).sqrt();
                    plane.iter().map(|c| c.norm() * nu).fold(0.0f64, f64::max)
                });
                per_k.into_iter().fold(0.0, f64::max)
            }
        }
    }

    /// Sup norm of the synthesized field on the collocation grid.
    pub fn linf_physical(&self) -> f64 {
        self.to_physical().max_abs()
    }
}
