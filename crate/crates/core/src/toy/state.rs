use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

/// Point `(y, ρ, φ)` with `z = √ρ e^{iφ}`.
///
/// Integrated trajectories keep `phi` unwrapped; [`PolarState::wrapped`]
/// reduces it to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarState {
    pub y: f64,
    pub rho: f64,
    pub phi: f64,
}

impl PolarState {
    pub fn new(y: f64, rho: f64, phi: f64) -> Self {
        PolarState { y, rho, phi }
    }

    pub fn wrapped(self) -> Self {
        PolarState {
            phi: self.phi.rem_euclid(TAU),
            ..self
        }
    }

    pub fn to_cartesian(self) -> CartesianState {
        CartesianState {
            y: self.y,
            z: Complex64::from_polar(self.rho.max(0.0).sqrt(), self.phi),
        }
    }

    pub(crate) fn to_array(self) -> [f64; 3] {
        [self.y, self.rho, self.phi]
    }

    pub(crate) fn from_array(a: [f64; 3]) -> Self {
        PolarState {
            y: a[0],
            rho: a[1],
            phi: a[2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CartesianState {
    pub y: f64,
    pub z: Complex64,
}

impl CartesianState {
    pub fn new(y: f64, z: Complex64) -> Self {
        CartesianState { y, z }
    }

    /// Polar form with `phi ∈ [0, 2π)`.
    pub fn to_polar(self) -> PolarState {
        PolarState {
            y: self.y,
            rho: self.z.norm_sqr(),
            phi: self.z.arg().rem_euclid(TAU),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum State {
    Cartesian(CartesianState),
    Polar(PolarState),
}

impl State {
    pub fn cartesian(y: f64, z: Complex64) -> Self {
        State::Cartesian(CartesianState { y, z })
    }

    pub fn polar(y: f64, rho: f64, phi: f64) -> Self {
        State::Polar(PolarState { y, rho, phi })
    }

    pub fn to_polar(self) -> PolarState {
        match self {
            State::Cartesian(c) => c.to_polar(),
            State::Polar(p) => p,
        }
    }

    pub fn to_cartesian(self) -> CartesianState {
        match self {
            State::Cartesian(c) => c,
            State::Polar(p) => p.to_cartesian(),
        }
    }
}

/// Time derivative in the same coordinates as the state it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum StateDerivative {
    Cartesian { y: f64, z: Complex64 },
    Polar { y: f64, rho: f64, phi: f64 },
}

/// The reversing involution `G: (y, z) ↦ (-y, z̄)`, i.e. `(y, ρ, φ) ↦ (-y, ρ, -φ)`.
pub fn apply_involution(state: State) -> State {
    match state {
        State::Cartesian(c) => State::Cartesian(CartesianState {
            y: -c.y,
            z: c.z.conj(),
        }),
        State::Polar(p) => State::Polar(involution_polar(p)),
    }
}

pub fn involution_polar(p: PolarState) -> PolarState {
    PolarState {
        y: -p.y,
        rho: p.rho,
        phi: -p.phi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_examples() {
        let s = State::cartesian(0.3, Complex64::new(1.0, 2.0));
        assert_eq!(
            apply_involution(s),
            State::cartesian(-0.3, Complex64::new(1.0, -2.0))
        );
        let fixed = State::cartesian(0.0, Complex64::new(0.7, 0.0));
        assert_eq!(apply_involution(fixed), fixed);
        let p = State::polar(0.2, 0.4, 1.1);
        assert_eq!(apply_involution(p), State::polar(-0.2, 0.4, -1.1));
    }

    #[test]
    fn polar_roundtrip() {
        let c = CartesianState::new(0.1, Complex64::new(-0.6, -0.2));
        let p = c.to_polar();
        assert!(p.phi >= 0.0 && p.phi < TAU);
        let back = p.to_cartesian();
        assert!((back.z - c.z).norm() < 1e-15);
        assert_eq!(back.y, c.y);
    }

    #[test]
    fn wrapping() {
        let p = PolarState::new(0.0, 1.0, -0.5).wrapped();
        assert!((p.phi - (TAU - 0.5)).abs() < 1e-15);
    }
}
