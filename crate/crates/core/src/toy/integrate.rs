use super::field::VectorField;
use super::state::PolarState;
use super::{Result, ToyError};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    /// Time-symmetric, so it commutes with the reversing involution.
    ImplicitMidpoint,
    Rk4,
}

/// Step settings shared by [`integrate`] and [`Stepper`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub scheme: Scheme,
    pub dt: f64,
    /// Increment tolerance of the midpoint fixed-point iteration, relative to `max(1, |x|)`.
    pub stage_tol: f64,
    pub max_stage_iters: usize,
    /// `ρ` must stay inside `(lo, hi)`.
    pub rho_window: (f64, f64),
}

impl StepConfig {
    pub fn new(scheme: Scheme, dt: f64) -> Self {
        StepConfig {
            scheme,
            dt,
            stage_tol: 1e-13,
            max_stage_iters: 100,
            rho_window: (0.0, f64::INFINITY),
        }
    }

    pub fn with_window(mut self, lo: f64, hi: f64) -> Self {
        self.rho_window = (lo, hi);
        self
    }

    pub fn with_stage_tol(mut self, tol: f64) -> Self {
        self.stage_tol = tol;
        self
    }
}

/// Advances a single state through fixed steps.
pub struct Stepper<F> {
    field: F,
    config: StepConfig,
    state: [f64; 3],
    steps: u64,
}

fn axpy(x: &[f64; 3], a: f64, d: &[f64; 3]) -> [f64; 3] {
    [x[0] + a * d[0], x[1] + a * d[1], x[2] + a * d[2]]
}

impl<F: VectorField> Stepper<F> {
    pub fn new(field: F, state0: PolarState, config: StepConfig) -> Result<Self> {
        if !(config.dt > 0.0 && config.dt.is_finite()) {
            return Err(ToyError::BadArgument(format!(
                "dt = {} must be positive",
                config.dt
            )));
        }
        if state0.rho.is_nan() || state0.rho <= 0.0 {
            return Err(ToyError::NonpositiveRho(state0.rho));
        }
        let stepper = Stepper {
            field,
            config,
            state: state0.to_array(),
            steps: 0,
        };
        stepper.check_domain()?;
        Ok(stepper)
    }

    pub fn state(&self) -> PolarState {
        PolarState::from_array(self.state)
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.config.dt
    }

    fn rates(&self, x: &[f64; 3]) -> [f64; 3] {
        self.field.polar_rates(&PolarState::from_array(*x))
    }

    fn check_domain(&self) -> Result<()> {
        let (lo, hi) = self.config.rho_window;
        let rho = self.state[1];
        if !self.state.iter().all(|v| v.is_finite()) || !(rho > lo && rho < hi) || rho <= 0.0 {
            return Err(ToyError::DomainExit {
                t: self.time(),
                rho,
            });
        }
        Ok(())
    }

    pub fn step(&mut self) -> Result<PolarState> {
        let h = self.config.dt;
        let x = self.state;
        let next = match self.config.scheme {
            Scheme::Rk4 => {
                let k1 = self.rates(&x);
                let k2 = self.rates(&axpy(&x, 0.5 * h, &k1));
                let k3 = self.rates(&axpy(&x, 0.5 * h, &k2));
                let k4 = self.rates(&axpy(&x, h, &k3));
                std::array::from_fn(|i| {
                    x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                })
            }
            Scheme::ImplicitMidpoint => self.midpoint_stage(&x)?,
        };
        self.state = next;
        self.steps += 1;
        self.check_domain()?;
        Ok(self.state())
    }

    /// Solves `x₁ = x₀ + h f((x₀ + x₁)/2)` by fixed-point iteration from the Euler guess.
    fn midpoint_stage(&self, x0: &[f64; 3]) -> Result<[f64; 3]> {
        let h = self.config.dt;
        let mut x1 = axpy(x0, h, &self.rates(x0));
        for _ in 0..self.config.max_stage_iters {
            let mid = std::array::from_fn(|i| 0.5 * (x0[i] + x1[i]));
            let next = axpy(x0, h, &self.rates(&mid));
            let converged = (0..3)
                .all(|i| (next[i] - x1[i]).abs() <= self.config.stage_tol * next[i].abs().max(1.0));
            x1 = next;
            if converged {
                return Ok(x1);
            }
            if !x1.iter().all(|v| v.is_finite()) {
                break;
            }
        }
        Err(ToyError::StepFailure { t: self.time() })
    }
}

/// Samples of one orbit at `t = 0, dt, 2dt, …`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PolarState>,
    pub scheme: Scheme,
    pub dt: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> PolarState {
        *self
            .states
            .last()
            .expect("a trajectory holds at least the initial state")
    }

    pub fn rho_range(&self) -> (f64, f64) {
        self.states
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s.rho), hi.max(s.rho))
            })
    }
}

/// Number of steps of size `dt` covering `[0, t_end]`.
pub fn step_count(t_end: f64, dt: f64) -> Result<u64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(ToyError::BadArgument(format!("dt = {dt} must be positive")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(ToyError::BadArgument(format!(
            "t_end = {t_end} must be nonnegative"
        )));
    }
    Ok((t_end / dt).round() as u64)
}

pub fn integrate<F: VectorField>(
    field: F,
    state0: PolarState,
    t_end: f64,
    config: StepConfig,
) -> Result<Trajectory> {
    let n = step_count(t_end, config.dt)?;
    let mut stepper = Stepper::new(field, state0, config)?;
    let mut states = Vec::with_capacity(n as usize + 1);
    states.push(state0);
    for _ in 0..n {
        states.push(stepper.step()?);
    }
    Ok(Trajectory {
        times: (0..=n).map(|i| i as f64 * config.dt).collect(),
        states,
        scheme: config.scheme,
        dt: config.dt,
    })
}

/// Final state only, without storing the orbit.
pub fn flow<F: VectorField>(
    field: F,
    state0: PolarState,
    t_end: f64,
    config: StepConfig,
) -> Result<PolarState> {
    let n = step_count(t_end, config.dt)?;
    let mut stepper = Stepper::new(field, state0, config)?;
    for _ in 0..n {
        stepper.step()?;
    }
    Ok(stepper.state())
}
