//! Pseudo-spectral toolkit for incompressible, buoyancy-driven flow in the slab
//! `[0,L)^2 x (0,1)`: mixed Fourier x sine/cosine transforms with parity
//! bookkeeping, spectral Poisson inversion under Dirichlet/Neumann conditions,
//! exact per-mode linear propagators, a frequency-space quadrature engine for
//! kernel decay rates, and an integrating-factor pseudo-spectral time stepper
//! for the full nonlinear vorticity/temperature system.
//!
//! Heavy kernels are data-parallel over disjoint spectral planes when the
//! `parallel` feature (default) is enabled; disabling it yields a sequential
//! build with identical, bit-reproducible results.

pub mod decay;
pub mod dispersion;
pub mod elliptic;
pub mod error;
pub mod par;
pub mod propagator;
pub mod quadrature;
pub mod sim;
pub mod spectral;

pub use error::Error;
pub use spectral::{Domain, Parity, PhysicalScalar, SpectralScalar};

/// Complex coefficient type used throughout the spectral layer.
pub type C64 = num_complex::Complex<f64>;
