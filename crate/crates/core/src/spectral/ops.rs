use std::f64::consts::PI;

use ndarray::Zip;

use crate::error::{Error, Result};
use crate::par;
use crate::C64;

use super::{Parity, SpectralScalar};

/// Differentiation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis3 {
    X,
    Y,
    Z,
}

/// Spectral partial derivative. Horizontal derivatives multiply by
/// `i xi` / `i eta` and keep the parity; the z derivative swaps parity with
/// the coefficient maps `sin -> +k pi cos` and `cos -> -k pi sin`.
pub fn deriv(f: &SpectralScalar, axis: Axis3) -> SpectralScalar {
    let dom = f.domain.clone();
    match axis {
        Axis3::X => {
            let mut out = f.clone();
            par::for_each_outer(&mut out.coeff, |_, mut plane| {
                for n in 0..dom.nx {
                    let factor = C64::new(0.0, dom.xi(n));
                    for m in 0..dom.ny {
                        plane[[n, m]] *= factor;
                    }
                }
            });
            out
        }
        Axis3::Y => {
            let mut out = f.clone();
            par::for_each_outer(&mut out.coeff, |_, mut plane| {
                for n in 0..dom.nx {
                    for m in 0..dom.ny {
                        plane[[n, m]] *= C64::new(0.0, dom.eta(m));
                    }
                }
            });
            out
        }
        Axis3::Z => {
            let mut out = SpectralScalar::zeros(&f.domain, f.parity.flip());
            let sign = match f.parity {
                Parity::Odd => 1.0,
                Parity::Even => -1.0,
            };
            let src = &f.coeff;
            par::for_each_outer(&mut out.coeff, |k, mut plane| {
                if k == 0 {
                    return;
                }
                let factor = sign * k as f64 * PI;
                let sp = src.index_axis(ndarray::Axis(0), k);
                Zip::from(&mut plane).and(&sp).for_each(|o, &c| *o = c * factor);
            });
            out
        }
    }
}

/// Fractional Laplacian power: scale each coefficient by
/// `(xi^2 + eta^2 + pi^2 k^2)^(alpha/2)`.
///
/// For negative `alpha` the `(0,0,0)` mode is excluded; an even field whose
/// mean mode is not negligible against its L^2 norm is rejected.
pub fn lambda_pow(f: &SpectralScalar, alpha: f64) -> Result<SpectralScalar> {
    if alpha < 0.0 && f.parity == Parity::Even {
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
                let factor = if sym > 0.0 { sym.powf(alpha / 2.0) } else { 0.0 };
                plane[[n, m]] *= factor;
            }
        }
    });
    Ok(out)
}

/// Dealiased pointwise product. Output parity follows the sine/cosine
/// algebra: equal parities multiply to even, mixed to odd.
pub fn product(a: &SpectralScalar, b: &SpectralScalar) -> Result<SpectralScalar> {
    product_with_dealias(a, b, true)
}

/// Pointwise product with the two-thirds mask optionally disabled
/// (vertical truncation back to `kmax` always applies).
pub fn product_with_dealias(
    a: &SpectralScalar,
    b: &SpectralScalar,
    dealias: bool,
) -> Result<SpectralScalar> {
    if !a.domain.same_grid(&b.domain) {
        return Err(Error::DomainMismatch);
    }
    let out_parity = a.parity.product(b.parity);
    let (pa, pb) = if dealias {
        let mut am = a.clone();
        let mut bm = b.clone();
        am.apply_dealias_mask();
        bm.apply_dealias_mask();
        (am.to_physical(), bm.to_physical())
    } else {
        (a.to_physical(), b.to_physical())
    };
    let mut prod = pa;
    Zip::from(&mut prod.values)
        .and(&pb.values)
        .for_each(|x, &y| *x *= y);
    let mut out = prod.to_spectral(out_parity);
    if dealias {
        out.apply_dealias_mask();
    }
    Ok(out)
}
