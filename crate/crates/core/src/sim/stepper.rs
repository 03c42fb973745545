//! Integrating-factor Runge-Kutta stepping: the stiff heat decay of the
//! vorticity is applied exactly per mode, everything else explicitly.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array3;

use crate::decay::{fit_rate, RateFit};
use crate::dispersion::dispersion;
use crate::elliptic::{curl, velocity_from_vorticity_unchecked, VectorField};
use crate::error::{Error, Result};
use crate::par;
use crate::spectral::{Domain, SpectralScalar};

use super::monitors::{compute_sample, RunningSups, SampleStash};
use super::rhs::{rhs, Tendency};
use super::{MonitorSample, Scheme, State, StepperConfig, TimeSeries, OBSERVABLES};

/// Per-mode heat factors `exp(-Xi dt)` and `exp(-Xi dt / 2)`, cached for
/// one (domain, dt) pair.
pub struct HeatFactors {
    dt: f64,
    half: Array3<f64>,
    full: Array3<f64>,
}

impl HeatFactors {
    pub fn new(domain: &Arc<Domain>, dt: f64) -> Self {
        let shape = domain.spectral_shape();
        let mut half = Array3::zeros(shape);
        let mut full = Array3::zeros(shape);
        for k in 0..shape.0 {
            for n in 0..shape.1 {
                for m in 0..shape.2 {
                    let sym = domain.symbol(n, m, k);
                    half[[k, n, m]] = (-sym * dt * 0.5).exp();
                    full[[k, n, m]] = (-sym * dt).exp();
                }
            }
        }
        HeatFactors { dt, half, full }
    }
}

/// RK working pair: the three vorticity components plus temperature.
#[derive(Clone)]
struct Fields {
    w: VectorField,
    th: SpectralScalar,
}

impl Fields {
    fn from_state(s: &State) -> Self {
        Fields {
            w: s.omega.clone(),
            th: s.theta.clone(),
        }
    }

    fn from_tendency(t: Tendency) -> Self {
        let [w1, w2, w3] = t.domega;
        Fields {
            w: VectorField {
                components: [w1, w2, w3],
                role: crate::elliptic::FieldRole::Vorticity,
            },
            th: t.dtheta,
        }
    }

    /// `self += a * other` on all four components.
    fn axpy(&mut self, a: f64, other: &Fields) -> Result<()> {
        for (x, y) in self.w.components.iter_mut().zip(&other.w.components) {
            x.axpy(a, y)?;
        }
        self.th.axpy(a, &other.th)
    }

    /// Apply the heat factor to the vorticity components (temperature has
    /// no dissipative factor: its equation is first-order transport).
    fn heat(&mut self, fac: &Array3<f64>) {
        for c in &mut self.w.components {
            let f = fac;
            par::for_each_outer(&mut c.coeff, |k, mut plane| {
                let fp = f.index_axis(ndarray::Axis(0), k);
                ndarray::Zip::from(&mut plane).and(&fp).for_each(|v, &s| *v *= s);
            });
        }
    }

    fn heated(&self, fac: &Array3<f64>) -> Fields {
        let mut out = self.clone();
        out.heat(fac);
        out
    }

    fn into_state(self, time: f64, step_index: u64) -> State {
        State {
            omega: self.w,
            theta: self.th,
            time,
            step_index,
        }
    }
}

fn tendency(f: &Fields, time: f64, cfg: &StepperConfig) -> Result<Fields> {
    let s = State {
        omega: f.w.clone(),
        theta: f.th.clone(),
        time,
        step_index: 0,
    };
    let t = rhs(&s, cfg.dealias, cfg.linear_only)?;
    if let Some(max_u) = t.max_u {
        let dom = &f.th.domain;
        let wave = (2.0 * PI * dom.nx as f64 / (3.0 * dom.l)).max(PI * dom.kmax as f64);
        let cfl = cfg.dt * max_u * wave;
        if cfl > 0.5 {
            return Err(Error::Cfl {
                t: time,
                dt: cfg.dt,
                limit: 0.5 / (max_u * wave),
            });
        }
    }
    Ok(Fields::from_tendency(t))
}

/// Advance one step. Parities are preserved structurally; the horizontal
/// mean of the vertical vorticity is pinned to zero after the update.
pub fn step(s: &State, cfg: &StepperConfig, factors: &HeatFactors) -> Result<State> {
    debug_assert_eq!(factors.dt, cfg.dt);
    let dt = cfg.dt;
    let y = Fields::from_state(s);
    let mut next = match cfg.scheme {
        Scheme::Ifrk2 => {
            let g1 = tendency(&y, s.time, cfg)?;
            let mut mid = y.clone();
            mid.axpy(0.5 * dt, &g1)?;
            mid.heat(&factors.half);
            let g2 = tendency(&mid, s.time + 0.5 * dt, cfg)?;
            let mut out = y.heated(&factors.full);
            out.axpy(dt, &g2.heated(&factors.half))?;
            out
        }
        Scheme::Ifrk4 => {
            let g1 = tendency(&y, s.time, cfg)?;
            let mut a = y.clone();
            a.axpy(0.5 * dt, &g1)?;
            a.heat(&factors.half);
            let g2 = tendency(&a, s.time + 0.5 * dt, cfg)?;

            let mut b = y.heated(&factors.half);
            b.axpy(0.5 * dt, &g2)?;
            let g3 = tendency(&b, s.time + 0.5 * dt, cfg)?;

            let mut c = y.heated(&factors.full);
            c.axpy(dt, &g3.heated(&factors.half))?;
            let g4 = tendency(&c, s.time + dt, cfg)?;

            let mut out = y.heated(&factors.full);
            out.axpy(dt / 6.0, &g1.heated(&factors.full))?;
            out.axpy(dt / 3.0, &g2.heated(&factors.half))?;
            out.axpy(dt / 3.0, &g3.heated(&factors.half))?;
            out.axpy(dt / 6.0, &g4)?;
            out
        }
    };

    next.w.components[2].coeff[[0, 0, 0]] = crate::C64::new(0.0, 0.0);
    let new_time = (s.step_index + 1) as f64 * cfg.dt;
    let out = next.into_state(new_time, s.step_index + 1);
    if !out.is_finite() {
        return Err(Error::BlowUp { t: out.time });
    }
    Ok(out)
}

/// One fitted decay observable of a run.
#[derive(Debug, Clone)]
pub struct ObservableFit {
    pub name: &'static str,
    pub target: f64,
    /// None when the window holds fewer than five positive samples.
    pub fit: Option<RateFit>,
}

#[derive(Debug)]
pub struct RunOutput {
    pub series: TimeSeries,
    pub final_state: State,
    pub fits: Vec<ObservableFit>,
    /// Fit window `[5, min(t_end, t*/2)]`, where `t*` is the e-folding time
    /// of the slowest retained mode; beyond it the finite period makes the
    /// decay exponential and the fit meaningless.
    pub window: (f64, f64),
    pub window_valid: bool,
}

/// A failed run still carries the samples collected before the failure.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    pub time: f64,
    pub partial: TimeSeries,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "run failed at t={}: {}", self.time, self.error)
    }
}

impl std::error::Error for RunFailure {}

/// March to `t_end`, sampling monitors every `monitor_stride` steps (plus
/// the final step) and fitting the decay observables inside the valid
/// window. `on_sample` sees every emitted sample together with the state it
/// was computed from.
pub fn run(
    cfg: &StepperConfig,
    s0: State,
    mut on_sample: impl FnMut(&State, &MonitorSample),
) -> std::result::Result<RunOutput, RunFailure> {
    cfg.validate().map_err(|error| RunFailure {
        time: s0.time,
        error,
        partial: TimeSeries::default(),
    })?;
    let factors = HeatFactors::new(s0.domain(), cfg.dt);
    let n_steps = (cfg.t_end / cfg.dt).round() as u64;

    let mut series = TimeSeries::default();
    let mut sups = RunningSups::default();
    let mut stash: Option<SampleStash> = None;
    let mut state = s0;

    let sample_now = |state: &State,
                          sups: &mut RunningSups,
                          stash: &mut Option<SampleStash>,
                          series: &mut TimeSeries,
                          on_sample: &mut dyn FnMut(&State, &MonitorSample)|
     -> Result<()> {
        let u = velocity_from_vorticity_unchecked(&state.omega)?;
        let max_u = u
            .components
            .iter()
            .map(|c| c.linf_physical())
            .fold(0.0f64, f64::max);
        let (sample, new_stash) =
            compute_sample(state, &u, cfg.m_prime, max_u, stash.as_ref(), sups)?;
        series.samples.push(sample);
        *stash = Some(new_stash);
        on_sample(state, series.samples.last().unwrap());
        Ok(())
    };

    // Fresh runs emit the initial sample; resumed runs already emitted it
    // as the final sample of the previous segment.
    if state.step_index == 0 {
        if let Err(error) = sample_now(&state, &mut sups, &mut stash, &mut series, &mut on_sample) {
            let time = state.time;
            return Err(RunFailure {
                error,
                time,
                partial: series,
            });
        }
    }

    while state.step_index < n_steps {
        state = match step(&state, cfg, &factors) {
            Ok(s) => s,
            Err(error) => {
                let time = state.time;
                return Err(RunFailure {
                    error,
                    time,
                    partial: series,
                });
            }
        };
        if let Some(stride) = cfg.projection_stride {
            if stride > 0 && state.step_index % stride == 0 {
                match velocity_from_vorticity_unchecked(&state.omega).and_then(|u| curl(&u)) {
                    Ok(w) => state.omega = w,
                    Err(error) => {
                        let time = state.time;
                        return Err(RunFailure {
                            error,
                            time,
                            partial: series,
                        });
                    }
                }
            }
        }
        if state.step_index % cfg.monitor_stride == 0 || state.step_index == n_steps {
            if let Err(error) =
                sample_now(&state, &mut sups, &mut stash, &mut series, &mut on_sample)
            {
                let time = state.time;
                return Err(RunFailure {
                    error,
                    time,
                    partial: series,
                });
            }
        }
    }

    let (window, window_valid, fits) = fit_observables(&series, state.domain(), cfg.t_end);
    Ok(RunOutput {
        series,
        final_state: state,
        fits,
        window,
        window_valid,
    })
}

/// Fit every decay observable over `[5, min(t_end, t*/2)]` with
/// `t* = 1/|lambda_plus(q_min, k=1)|`, `q_min = (2 pi / L)^2`.
pub fn fit_observables(
    series: &TimeSeries,
    domain: &Arc<Domain>,
    t_end: f64,
) -> ((f64, f64), bool, Vec<ObservableFit>) {
    let q_min = (2.0 * PI / domain.l).powi(2);
    let t_star = 1.0
        / dispersion(q_min, 1)
            .map(|d| d.lambda_plus.abs())
            .unwrap_or(f64::MIN_POSITIVE)
            .max(f64::MIN_POSITIVE);
    let window = (5.0, (0.5 * t_star).min(t_end));
    let mut fits = Vec::new();
    let mut any = false;
    for &(name, target) in OBSERVABLES {
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for s in &series.samples {
            let v = s.column(name).unwrap_or(f64::NAN);
            if s.time >= window.0 && s.time <= window.1 && v > 0.0 {
                ts.push(s.time);
                vs.push(v);
            }
        }
        let fit = fit_rate(&ts, &vs).ok();
        any |= fit.is_some();
        fits.push(ObservableFit { name, target, fit });
    }
    (window, any && window.1 > window.0, fits)
}
