use super::model::ToyModel;
use super::quadrature;
use super::roots::find_roots;
use super::state::State;
use super::{Result, ToyError};

pub const QUAD_TOL: f64 = 1e-12;

/// `E = y² - Q(ρ)` with `Q(ρ) = ∫_{ρ_ref}^{ρ} u(η) / (η v(η)) dη`.
///
/// The base point fixes the additive constant; only differences of `E` carry
/// meaning.
pub fn first_integral(state: &State, model: &ToyModel, rho_ref: f64) -> Result<f64> {
    let p = state.to_polar();
    let fi = FirstIntegral::new(model, rho_ref, p.rho.min(rho_ref), p.rho.max(rho_ref))?;
    fi.eval(p.y, p.rho)
}

/// First integral with the integrand checked once on a `ρ` window.
#[derive(Debug, Clone)]
pub struct FirstIntegral<'a> {
    model: &'a ToyModel,
    rho_ref: f64,
    lo: f64,
    hi: f64,
}

impl<'a> FirstIntegral<'a> {
    /// Checks that `v` does not vanish on `[lo, hi] ∪ {ρ_ref}`.
    pub fn new(model: &'a ToyModel, rho_ref: f64, lo: f64, hi: f64) -> Result<Self> {
        if rho_ref.is_nan() || rho_ref <= 0.0 {
            return Err(ToyError::NonpositiveRho(rho_ref));
        }
        if lo.is_nan() || lo <= 0.0 {
            return Err(ToyError::NonpositiveRho(lo));
        }
        let (lo, hi) = (lo.min(rho_ref), hi.max(rho_ref));
        check_v_nonvanishing(model, lo, hi)?;
        Ok(FirstIntegral {
            model,
            rho_ref,
            lo,
            hi,
        })
    }

    pub fn q(&self, rho: f64) -> Result<f64> {
        if rho.is_nan() || rho <= 0.0 {
            return Err(ToyError::NonpositiveRho(rho));
        }
        if rho < self.lo || rho > self.hi {
            check_v_nonvanishing(self.model, rho.min(self.lo), rho.max(self.hi))?;
        }
        let (u, v) = (&self.model.u, &self.model.v);
        let quad = quadrature::integrate(
            |eta| u.eval(eta) / (eta * v.eval(eta)),
            self.rho_ref,
            rho,
            QUAD_TOL,
            1e-15,
        );
        if !quad.value.is_finite() {
            return Err(ToyError::SingularIntegrand(format!(
                "integral to rho = {rho} is not finite"
            )));
        }
        Ok(quad.value)
    }

    pub fn eval(&self, y: f64, rho: f64) -> Result<f64> {
        Ok(y * y - self.q(rho)?)
    }
}

fn check_v_nonvanishing(model: &ToyModel, lo: f64, hi: f64) -> Result<()> {
    let v = &model.v;
    let scan = 256;
    let mut min_abs = f64::INFINITY;
    let mut scale = 0.0f64;
    for i in 0..=scan {
        let x = lo + (hi - lo) * i as f64 / scan as f64;
        min_abs = min_abs.min(v.eval(x).abs());
        scale = scale.max(v.magnitude(x));
    }
    if min_abs <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(ToyError::SingularIntegrand(format!(
            "v vanishes on [{lo}, {hi}]"
        )));
    }
    if let Some(r) = find_roots(v, lo, hi, scan).first() {
        return Err(ToyError::SingularIntegrand(format!(
            "v vanishes at rho = {r}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy::polynomial::Polynomial;

    // closed-form antiderivative for u = 0.5 - ρ, v = 1, ρ_ref = 1
    fn closed_form(y: f64, rho: f64) -> f64 {
        y * y + rho - 0.5 * rho.ln() - 1.0
    }

    #[test]
    fn matches_closed_form() {
        let m = ToyModel::default_model(0.5);
        let e = first_integral(&State::polar(0.1, 0.4, 0.0), &m, 1.0).unwrap();
        assert!((e - closed_form(0.1, 0.4)).abs() < 1e-12);
        assert!((e - (-0.131_854_634_062_922_5)).abs() < 1e-9);
        for &rho in &[0.05, 0.3, 0.5, 1.0, 1.7] {
            let e = first_integral(&State::polar(-0.2, rho, 0.0), &m, 1.0).unwrap();
            assert!((e - closed_form(-0.2, rho)).abs() < 1e-12, "rho = {rho}");
        }
    }

    #[test]
    fn cycle_is_extremum_along_fix_g() {
        let m = ToyModel::default_model(0.5);
        let at = |rho| first_integral(&State::polar(0.0, rho, 0.0), &m, 1.0).unwrap();
        let e0 = at(0.5);
        assert!(at(0.49) > e0 && at(0.51) > e0);
    }

    #[test]
    fn errors() {
        let m = ToyModel::default_model(0.5);
        assert!(matches!(
            first_integral(&State::polar(0.0, 0.0, 0.0), &m, 1.0),
            Err(ToyError::NonpositiveRho(_))
        ));
        assert!(matches!(
            first_integral(&State::polar(0.0, 0.5, 0.0), &m, -1.0),
            Err(ToyError::NonpositiveRho(_))
        ));
        let vanishing = ToyModel::from_polynomials(
            Polynomial::new(vec![0.5, -1.0]),
            Polynomial::new(vec![-0.7, 1.0]),
            Polynomial::constant(1.0),
        );
        assert!(matches!(
            first_integral(&State::polar(0.0, 0.5, 0.0), &vanishing, 1.0),
            Err(ToyError::SingularIntegrand(_))
        ));
        assert!(first_integral(&State::polar(0.0, 0.5, 0.0), &vanishing, 0.6).is_ok());
    }
}
