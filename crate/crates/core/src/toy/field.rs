use super::model::ToyModel;
use super::polynomial::Polynomial;
use super::state::{involution_polar, PolarState, State, StateDerivative};
use num_complex::Complex64;

/// A vector field on `(y, ρ, φ)` space.
pub trait VectorField {
    /// `(ẏ, ρ̇, φ̇)` at `s`.
    fn polar_rates(&self, s: &PolarState) -> [f64; 3];
}

impl VectorField for ToyModel {
    fn polar_rates(&self, s: &PolarState) -> [f64; 3] {
        [
            self.u.eval(s.rho),
            2.0 * s.rho * s.y * self.v.eval(s.rho),
            self.w.eval(s.rho),
        ]
    }
}

impl<F: VectorField + ?Sized> VectorField for &F {
    fn polar_rates(&self, s: &PolarState) -> [f64; 3] {
        (**self).polar_rates(s)
    }
}

/// Evaluates the model in the coordinates of `state`.
pub fn eval_field(state: &State, model: &ToyModel) -> StateDerivative {
    match *state {
        State::Cartesian(c) => {
            let r = c.z.norm_sqr();
            let i = Complex64::i();
            StateDerivative::Cartesian {
                y: model.u.eval(r),
                z: i * c.z * model.w.eval(r) + c.z * c.y * model.v.eval(r),
            }
        }
        State::Polar(p) => {
            let [y, rho, phi] = model.polar_rates(&p);
            StateDerivative::Polar { y, rho, phi }
        }
    }
}

/// `max ‖DG·V(G(w)) + V(w)‖` over the samples; zero for a `G`-reversible field.
pub fn reversibility_residual<F: VectorField + ?Sized>(field: &F, samples: &[State]) -> f64 {
    // DG = diag(-1, 1, -1) in (y, ρ, φ)
    samples
        .iter()
        .map(|s| {
            let w = s.to_polar();
            let v = field.polar_rates(&w);
            let vg = field.polar_rates(&involution_polar(w));
            let d = [-vg[0] + v[0], vg[1] + v[1], -vg[2] + v[2]];
            (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
        })
        .fold(0.0, f64::max)
}

/// The model plus the reversible perturbation
/// `ẏ += ε f(ρ) cos φ`, `ρ̇ += ε ρ g(ρ) sin φ`, `φ̇ += ε y h(ρ) sin φ`.
#[derive(Debug, Clone)]
pub struct PerturbedField<'a> {
    pub model: &'a ToyModel,
    pub eps: f64,
    pub f: Polynomial,
    pub g: Polynomial,
    pub h: Polynomial,
}

impl VectorField for PerturbedField<'_> {
    fn polar_rates(&self, s: &PolarState) -> [f64; 3] {
        let [dy, drho, dphi] = self.model.polar_rates(s);
        if self.eps == 0.0 {
            return [dy, drho, dphi];
        }
        let (sin, cos) = s.phi.sin_cos();
        [
            dy + self.eps * self.f.eval(s.rho) * cos,
            drho + self.eps * s.rho * self.g.eval(s.rho) * sin,
            dphi + self.eps * s.y * self.h.eval(s.rho) * sin,
        ]
    }
}

pub fn perturb(
    model: &ToyModel,
    eps: f64,
    f: Polynomial,
    g: Polynomial,
    h: Polynomial,
) -> PerturbedField<'_> {
    PerturbedField {
        model,
        eps,
        f,
        g,
        h,
    }
}
