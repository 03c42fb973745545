//! Mixed transform layer: horizontal discrete Fourier series on a periodic
//! square of side `L`, crossed with vertical sine (odd) or cosine (even)
//! series on `(0,1)`. Covers transforms, differentiation, fractional
//! Laplacian powers, norms and dealiased products.

mod domain;
mod fft;
mod field;
mod norms;
mod ops;
mod transform;

pub use domain::{Domain, Parity};
pub use field::{PhysicalScalar, SpectralScalar};
pub use norms::HatExponent;
pub use ops::{deriv, lambda_pow, product, product_with_dealias, Axis3};
