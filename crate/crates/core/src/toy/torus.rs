use super::equilibria::{classify_equilibrium, find_equilibria, EquilibriumKind};
use super::field::VectorField;
use super::integrate::{step_count, Scheme, StepConfig, Stepper};
use super::model::ToyModel;
use super::state::PolarState;
use super::{Result, ToyError};
use serde::Serialize;
use std::f64::consts::TAU;

/// Frequencies of the invariant 2-torus traced by an orbit around a center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusFrequencies {
    /// `2π / T` with `T` the mean return time to `{y = 0, ρ > ρ₀}`.
    pub omega_section: f64,
    /// Mean `φ̇` over the whole return periods observed.
    pub omega_phase: f64,
    /// `max |ρ - ρ₀|` along the orbit.
    pub amplitude: f64,
    pub rho0: f64,
    pub returns: usize,
}

#[derive(Debug, Clone, Copy)]
struct Crossing {
    t: f64,
    rho: f64,
    phi: f64,
}

/// Cubic Hermite interpolant on `[0, 1]` from values and slopes (slopes already scaled by the step).
fn hermite(p0: f64, m0: f64, p1: f64, m1: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * p0
        + (s3 - 2.0 * s2 + s) * m0
        + (-2.0 * s3 + 3.0 * s2) * p1
        + (s3 - s2) * m1
}

/// Root in `[0, 1]` of the Hermite cubic for `y`, which changes sign there.
fn hermite_root(p0: f64, m0: f64, p1: f64, m1: f64) -> f64 {
    let (mut a, mut b) = (0.0, 1.0);
    let neg_at_a = p0 < 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if (hermite(p0, m0, p1, m1, mid) < 0.0) == neg_at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn locate_crossing<F: VectorField>(
    field: &F,
    t0: f64,
    h: f64,
    x0: &PolarState,
    x1: &PolarState,
) -> Crossing {
    let d0 = field.polar_rates(x0);
    let d1 = field.polar_rates(x1);
    let s = hermite_root(x0.y, h * d0[0], x1.y, h * d1[0]);
    Crossing {
        t: t0 + s * h,
        rho: hermite(x0.rho, h * d0[1], x1.rho, h * d1[1], s),
        phi: hermite(x0.phi, h * d0[2], x1.phi, h * d1[2], s),
    }
}

/// Integrates from `state0` with the implicit midpoint rule and measures the
/// section and phase frequencies of the orbit.
pub fn torus_frequencies(
    model: &ToyModel,
    state0: PolarState,
    t_end: f64,
    dt: f64,
) -> Result<TorusFrequencies> {
    let n = step_count(t_end, dt)?;
    let mut stepper = Stepper::new(model, state0, StepConfig::new(Scheme::ImplicitMidpoint, dt))?;
    let mut crossings = Vec::new();
    let (mut rho_min, mut rho_max) = (state0.rho, state0.rho);
    let mut prev = state0;
    for i in 0..n {
        let next = stepper.step()?;
        if (prev.y > 0.0 && next.y <= 0.0) || (prev.y < 0.0 && next.y >= 0.0) {
            crossings.push(locate_crossing(&model, i as f64 * dt, dt, &prev, &next));
        }
        rho_min = rho_min.min(next.rho);
        rho_max = rho_max.max(next.rho);
        prev = next;
    }

    let centers: Vec<f64> = find_equilibria(model, rho_min, rho_max)?
        .into_iter()
        .filter(|&r| {
            matches!(classify_equilibrium(model, r), Ok(info) if info.kind == EquilibriumKind::Center)
        })
        .collect();
    let [rho0] = centers[..] else {
        return Err(ToyError::NotACenterOrbit(format!(
            "expected one center inside rho in [{rho_min}, {rho_max}], found {}",
            centers.len()
        )));
    };

    let section: Vec<Crossing> = crossings.into_iter().filter(|c| c.rho > rho0).collect();
    if section.len() < 2 {
        return Err(ToyError::NotACenterOrbit(format!(
            "{} section crossing(s) before t = {t_end}; need at least two",
            section.len()
        )));
    }
    let (first, last) = (section[0], section[section.len() - 1]);
    let returns = section.len() - 1;
    let span = last.t - first.t;
    Ok(TorusFrequencies {
        omega_section: TAU * returns as f64 / span,
        omega_phase: (last.phi - first.phi) / span,
        amplitude: (rho_max - rho0).max(rho0 - rho_min),
        rho0,
        returns,
    })
}
