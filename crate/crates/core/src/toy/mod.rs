//! Numerical laboratory for the reversible system
//!
//! ```text
//! ẏ = u_μ(|z|²),   ż = i z W_μ(|z|²) + z y v_μ(|z|²)
//! ```
//!
//! reversible under `G: (y, z) ↦ (-y, z̄)`. In polar form `z = √ρ e^{iφ}` the
//! `(y, ρ)` subsystem decouples from the phase. Positive roots `ρ₀` of `u`
//! give `G`-invariant cycles whose Floquet matrix is
//! `[[0, u'(ρ₀)], [2ρ₀ v(ρ₀), 0]]`; closed `(y, ρ)` orbits around centers give
//! invariant 2-tori.

pub mod equilibria;
pub mod field;
pub mod integral;
pub mod integrate;
pub mod model;
pub mod polynomial;
pub mod quadrature;
pub mod roots;
pub mod state;
pub mod torus;

pub use equilibria::{
    classify_equilibrium, equilibrium_at_origin, find_equilibria, floquet_residual, product_grid,
    sweep, EquilibriumInfo, EquilibriumKind, ExponentPair, SweepRecord,
};
pub use field::{eval_field, perturb, reversibility_residual, PerturbedField, VectorField};
pub use integral::{first_integral, FirstIntegral};
pub use integrate::{flow, integrate, Scheme, StepConfig, Stepper, Trajectory};
pub use model::{ModelConfig, ModelFamily, ToyModel};
pub use polynomial::{AffinePolynomial, Polynomial};
pub use state::{apply_involution, CartesianState, PolarState, State, StateDerivative};
pub use torus::{torus_frequencies, TorusFrequencies};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToyError {
    #[error("InvalidModel: {0}")]
    InvalidModel(String),
    #[error("BadArgument: {0}")]
    BadArgument(String),
    #[error("NonpositiveRho: rho = {0} must be positive")]
    NonpositiveRho(f64),
    #[error("SingularIntegrand: {0}")]
    SingularIntegrand(String),
    #[error("StepFailure: midpoint stage iteration did not converge at t = {t}")]
    StepFailure { t: f64 },
    #[error("DomainExit: rho = {rho} left the working interval at t = {t}")]
    DomainExit { t: f64, rho: f64 },
    #[error("NotAnEquilibrium: u({rho0}) = {residual}")]
    NotAnEquilibrium { rho0: f64, residual: f64 },
    #[error("DegenerateEquilibrium: u'(rho0) v(rho0) vanishes at rho0 = {rho0}")]
    DegenerateEquilibrium { rho0: f64 },
    #[error("NotACenterOrbit: {0}")]
    NotACenterOrbit(String),
}

impl ToyError {
    pub fn kind(&self) -> &'static str {
        match self {
            ToyError::InvalidModel(_) => "InvalidModel",
            ToyError::BadArgument(_) => "BadArgument",
            ToyError::NonpositiveRho(_) => "NonpositiveRho",
            ToyError::SingularIntegrand(_) => "SingularIntegrand",
            ToyError::StepFailure { .. } => "StepFailure",
            ToyError::DomainExit { .. } => "DomainExit",
            ToyError::NotAnEquilibrium { .. } => "NotAnEquilibrium",
            ToyError::DegenerateEquilibrium { .. } => "DegenerateEquilibrium",
            ToyError::NotACenterOrbit(_) => "NotACenterOrbit",
        }
    }
}

pub type Result<T> = std::result::Result<T, ToyError>;
