//! Pseudo-spectral time integration of the full nonlinear
//! vorticity/temperature system with integrating-factor Runge-Kutta
//! stepping, parity and divergence enforcement, and decay observables.

mod initial;
mod monitors;
mod rhs;
mod stepper;

pub use initial::gen_initial;
pub use monitors::{MonitorSample, TimeSeries, MONITOR_COLUMNS, OBSERVABLES};
pub use rhs::{compute_f2, rhs, Tendency};
pub use stepper::{run, step, HeatFactors, ObservableFit, RunFailure, RunOutput};

use crate::elliptic::{FieldRole, VectorField};
use crate::error::{Error, Result};
use crate::spectral::{Parity, SpectralScalar};

/// Dynamical state: vorticity (odd, odd, even), temperature (odd), time.
#[derive(Clone)]
pub struct State {
    pub omega: VectorField,
    pub theta: SpectralScalar,
    pub time: f64,
    pub step_index: u64,
}

impl std::fmt::Debug for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("State")
            .field("time", &self.time)
            .field("step_index", &self.step_index)
            .finish()
    }
}

impl State {
    pub fn new(omega: VectorField, theta: SpectralScalar, time: f64) -> Result<Self> {
        if omega.role != FieldRole::Vorticity {
            return Err(Error::Contract("state vorticity must be vorticity-class".into()));
        }
        if theta.parity != Parity::Odd {
            return Err(Error::ParityMismatch {
                expected: Parity::Odd,
                got: theta.parity,
            });
        }
        if !omega.domain().same_grid(&theta.domain) {
            return Err(Error::DomainMismatch);
        }
        Ok(State {
            omega,
            theta,
            time,
            step_index: 0,
        })
    }

    pub fn domain(&self) -> &std::sync::Arc<crate::spectral::Domain> {
        &self.theta.domain
    }

    pub fn is_finite(&self) -> bool {
        self.omega.is_finite() && self.theta.is_finite()
    }
}

/// Time integration scheme (integrating factor on the stiff heat part).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Ifrk2,
    Ifrk4,
}

/// Stepper configuration.
#[derive(Debug, Clone)]
pub struct StepperConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Two-thirds dealiasing of quadratic products (default on).
    pub dealias: bool,
    /// Drop the advective and stretching terms, keeping buoyancy coupling.
    pub linear_only: bool,
    /// Re-solve `w <- curl(velocity(w))` every this many steps.
    pub projection_stride: Option<u64>,
    /// Sample monitors every this many steps.
    pub monitor_stride: u64,
    /// Sobolev order of the primary energy monitor (capped at 8).
    pub m_prime: u32,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            dt: 1e-2,
            t_end: 1.0,
            scheme: Scheme::Ifrk4,
            dealias: true,
            linear_only: false,
            projection_stride: None,
            monitor_stride: 10,
            m_prime: 3,
        }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if self.t_end < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "t_end must be nonnegative, got {}",
                self.t_end
            )));
        }
        if self.monitor_stride == 0 {
            return Err(Error::InvalidArgument("monitor_stride must be >= 1".into()));
        }
        if self.m_prime > 8 {
            return Err(Error::InvalidArgument(format!(
                "m_prime is capped at 8, got {}",
                self.m_prime
            )));
        }
        Ok(())
    }
}
