use super::field::VectorField;
use super::model::{ModelFamily, ToyModel};
use super::roots::{find_roots, SCAN_CELLS};
use super::state::PolarState;
use super::{Result, ToyError};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

pub const ORIGIN_TOL: f64 = 1e-12;

/// Positive roots `ρ₀` of `u` in `[lo, hi]`; each is a cycle `{y = 0, ρ = ρ₀}`.
pub fn find_equilibria(model: &ToyModel, lo: f64, hi: f64) -> Result<Vec<f64>> {
    find_equilibria_with(model, lo, hi, SCAN_CELLS)
}

pub fn find_equilibria_with(model: &ToyModel, lo: f64, hi: f64, cells: usize) -> Result<Vec<f64>> {
    if lo.is_nan() || lo <= 0.0 {
        return Err(ToyError::NonpositiveRho(lo));
    }
    Ok(find_roots(&model.u, lo, hi, cells))
}

/// Whether `(y, z) = (0, 0)` is an equilibrium, i.e. `u_μ(0) = 0`.
pub fn equilibrium_at_origin(model: &ToyModel) -> bool {
    model.u.eval(0.0).abs() <= ORIGIN_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquilibriumKind {
    Saddle,
    Center,
}

/// The Floquet exponents `±χ`, either a real pair or a purely imaginary pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExponentPair {
    /// `±chi`, `chi > 0`.
    Real(f64),
    /// `±i·beta`, `beta > 0`.
    Imaginary(f64),
}

impl ExponentPair {
    pub fn from_chi_squared(chi2: f64) -> Self {
        if chi2 > 0.0 {
            ExponentPair::Real(chi2.sqrt())
        } else {
            ExponentPair::Imaginary((-chi2).sqrt())
        }
    }

    /// `[+χ, -χ]`.
    pub fn values(&self) -> [Complex64; 2] {
        let chi = match *self {
            ExponentPair::Real(x) => Complex64::new(x, 0.0),
            ExponentPair::Imaginary(b) => Complex64::new(0.0, b),
        };
        [chi, -chi]
    }

    pub fn chi_squared(&self) -> f64 {
        match *self {
            ExponentPair::Real(x) => x * x,
            ExponentPair::Imaginary(b) => -b * b,
        }
    }

    pub fn modulus(&self) -> f64 {
        match *self {
            ExponentPair::Real(x) | ExponentPair::Imaginary(x) => x,
        }
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ExponentPair::Real(x) => write!(f, "±{x}"),
            ExponentPair::Imaginary(b) => write!(f, "±{b}i"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumInfo {
    pub rho0: f64,
    pub kind: EquilibriumKind,
    /// `[[0, u'(ρ₀)], [2ρ₀ v(ρ₀), 0]]`, the Floquet matrix of the cycle.
    pub floquet_matrix: [[f64; 2]; 2],
    pub exponents: ExponentPair,
    /// `W(ρ₀)`, the frequency of the cycle.
    pub cycle_frequency: f64,
}

pub fn classify_equilibrium(model: &ToyModel, rho0: f64) -> Result<EquilibriumInfo> {
    if rho0.is_nan() || rho0 <= 0.0 {
        return Err(ToyError::NonpositiveRho(rho0));
    }
    let (u0, du) = model.u.eval_with_derivative(rho0);
    let u_tol = 1e-10 * model.u.magnitude(rho0).max(1.0);
    if u0.abs() > u_tol {
        return Err(ToyError::NotAnEquilibrium { rho0, residual: u0 });
    }
    let v0 = model.v.eval(rho0);
    let product = du * v0;
    let scale = model.u.derivative().magnitude(rho0) * model.v.magnitude(rho0);
    if product.abs() <= 1e-12 * scale.max(1.0) {
        return Err(ToyError::DegenerateEquilibrium { rho0 });
    }
    let chi2 = 2.0 * rho0 * product;
    Ok(EquilibriumInfo {
        rho0,
        kind: if product > 0.0 {
            EquilibriumKind::Saddle
        } else {
            EquilibriumKind::Center
        },
        floquet_matrix: [[0.0, du], [2.0 * rho0 * v0, 0.0]],
        exponents: ExponentPair::from_chi_squared(chi2),
        cycle_frequency: model.w.eval(rho0),
    })
}

/// Floquet-coordinate residuals around the cycle at `ρ₀`.
///
/// With `x = φ` and `X = (y, ρ - ρ₀)`, returns the maxima over the circle
/// `|X| = radius` of `|ẋ - W(ρ₀)|` and `‖Ẋ - ΛX‖`.
pub fn floquet_residual(model: &ToyModel, rho0: f64, radius: f64) -> Result<(f64, f64)> {
    let info = classify_equilibrium(model, rho0)?;
    if radius.is_nan() || radius <= 0.0 || radius >= rho0 {
        return Err(ToyError::BadArgument(format!(
            "radius = {radius} must lie in (0, rho0 = {rho0})"
        )));
    }
    let lam = info.floquet_matrix;
    let samples = 720;
    let mut r1 = 0.0f64;
    let mut r2 = 0.0f64;
    for j in 0..samples {
        let theta = std::f64::consts::TAU * j as f64 / samples as f64;
        let (sin, cos) = theta.sin_cos();
        let (y, d) = (radius * cos, radius * sin);
        let [dy, drho, dphi] = model.polar_rates(&PolarState::new(y, rho0 + d, 0.0));
        r1 = r1.max((dphi - info.cycle_frequency).abs());
        let ey = dy - (lam[0][0] * y + lam[0][1] * d);
        let ed = drho - (lam[1][0] * y + lam[1][1] * d);
        r2 = r2.max(ey.hypot(ed));
    }
    Ok((r1, r2))
}

/// One grid point of a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub mu: Vec<f64>,
    pub origin_equilibrium: bool,
    pub equilibria: Vec<EquilibriumInfo>,
    /// Roots of `u` where `u'v` vanishes.
    pub degenerate: Vec<f64>,
}

pub fn sweep_point(family: &ModelFamily, mu: &[f64], lo: f64, hi: f64) -> Result<SweepRecord> {
    let model = family.at(mu)?;
    let mut equilibria = Vec::new();
    let mut degenerate = Vec::new();
    for rho0 in find_equilibria(&model, lo, hi)? {
        match classify_equilibrium(&model, rho0) {
            Ok(info) => equilibria.push(info),
            Err(ToyError::DegenerateEquilibrium { .. }) => degenerate.push(rho0),
            Err(e) => return Err(e),
        }
    }
    Ok(SweepRecord {
        mu: mu.to_vec(),
        origin_equilibrium: equilibrium_at_origin(&model),
        equilibria,
        degenerate,
    })
}

/// Equilibria and their classification at every grid point, in grid order.
pub fn sweep(
    family: &ModelFamily,
    grid: &[Vec<f64>],
    lo: f64,
    hi: f64,
) -> Result<Vec<SweepRecord>> {
    grid.par_iter()
        .map(|mu| sweep_point(family, mu, lo, hi))
        .collect()
}

/// Cartesian product of per-axis values; the last axis varies fastest.
pub fn product_grid(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy::polynomial::{AffinePolynomial, Polynomial};

    #[test]
    fn equilibria_examples() {
        let m = ToyModel::default_model(0.5);
        assert_eq!(find_equilibria(&m, 0.01, 2.0).unwrap(), vec![0.5]);
        let two = ToyModel::from_polynomials(
            Polynomial::from_roots(-1.0, &[0.3, 0.9]),
            Polynomial::constant(1.0),
            Polynomial::new(vec![1.0, 1.0]),
        );
        let r = find_equilibria(&two, 0.01, 2.0).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - 0.3).abs() < 1e-13 && (r[1] - 0.9).abs() < 1e-13);
        assert!(find_equilibria(&ToyModel::default_model(-1.0), 0.01, 2.0)
            .unwrap()
            .is_empty());
        assert!(find_equilibria(&m, 0.0, 2.0).is_err());
    }

    #[test]
    fn origin_flag() {
        assert!(equilibrium_at_origin(&ToyModel::default_model(0.0)));
        assert!(!equilibrium_at_origin(&ToyModel::default_model(0.5)));
        let grid: Vec<f64> = (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect();
        let signs: Vec<bool> = grid
            .iter()
            .map(|&mu| ToyModel::default_model(mu).u.eval(0.0) > 0.0)
            .collect();
        let flips: Vec<usize> = (1..grid.len())
            .filter(|&i| signs[i] != signs[i - 1])
            .collect();
        assert_eq!(flips.len(), 1);
        let i = flips[0];
        assert!(grid[i - 1] <= 0.0 && grid[i] >= 0.0);
    }

    #[test]
    fn classify_center_and_saddle() {
        let info = classify_equilibrium(&ToyModel::default_model(0.5), 0.5).unwrap();
        assert_eq!(info.kind, EquilibriumKind::Center);
        assert_eq!(info.floquet_matrix, [[0.0, -1.0], [1.0, 0.0]]);
        assert_eq!(info.exponents, ExponentPair::Imaginary(1.0));
        assert_eq!(info.exponents.to_string(), "±1i");
        assert_eq!(info.cycle_frequency, 1.5);

        let info = classify_equilibrium(&ToyModel::default_saddle_model(0.5), 0.5).unwrap();
        assert_eq!(info.kind, EquilibriumKind::Saddle);
        assert_eq!(info.exponents, ExponentPair::Real(1.0));
    }

    #[test]
    fn classify_errors() {
        let double = ToyModel::from_polynomials(
            Polynomial::from_roots(1.0, &[0.5, 0.5]),
            Polynomial::constant(1.0),
            Polynomial::constant(1.0),
        );
        assert!(matches!(
            classify_equilibrium(&double, 0.5),
            Err(ToyError::DegenerateEquilibrium { .. })
        ));
        assert!(matches!(
            classify_equilibrium(&ToyModel::default_model(0.5), 0.7),
            Err(ToyError::NotAnEquilibrium { .. })
        ));
    }

    #[test]
    fn floquet_residual_small_radius() {
        let m = ToyModel::default_model(0.5);
        let (r1, r2) = floquet_residual(&m, 0.5, 1e-2).unwrap();
        assert!((r1 - 1e-2).abs() < 1e-12);
        assert!(r2 <= 1e-4 * (1.0 + 1e-9));
        let (r1, r2) = floquet_residual(&m, 0.5, 1e-9).unwrap();
        assert!(r1 < 1e-8 && r2 < 1e-16);
        assert!(floquet_residual(&m, 0.5, 0.0).is_err());
    }

    #[test]
    fn sweep_linear_family() {
        let fam = ModelFamily::default_family(1.0);
        let grid = vec![vec![0.25], vec![0.5], vec![0.75]];
        let recs = sweep(&fam, &grid, 0.01, 2.0).unwrap();
        for (rec, mu) in recs.iter().zip([0.25, 0.5, 0.75]) {
            assert_eq!(rec.equilibria.len(), 1);
            assert!((rec.equilibria[0].rho0 - mu).abs() < 1e-13);
            assert_eq!(rec.equilibria[0].kind, EquilibriumKind::Center);
            assert!(!rec.origin_equilibrium);
        }
        assert!(sweep(&fam, &[], 0.01, 2.0).unwrap().is_empty());
    }

    #[test]
    fn sweep_quadratic_family() {
        // u = -ρ² + μ₁ρ - μ₂ has roots with sum μ₁ and product μ₂
        let fam = ModelFamily::new(
            2,
            AffinePolynomial::new(vec![
                vec![0.0, 0.0, -1.0],
                vec![0.0, 1.0, 0.0],
                vec![-1.0, 0.0, 0.0],
            ]),
            AffinePolynomial::fixed(&[1.0], 2),
            AffinePolynomial::fixed(&[1.0, 1.0], 2),
        )
        .unwrap();
        let axes = vec![
            (0..7).map(|i| 0.2 * i as f64 - 0.2).collect::<Vec<_>>(),
            (0..7).map(|i| 0.05 * i as f64 - 0.07).collect::<Vec<_>>(),
        ];
        let grid = product_grid(&axes);
        assert_eq!(grid.len(), 49);
        let (lo, hi) = (0.01, 2.0);
        for rec in sweep(&fam, &grid, lo, hi).unwrap() {
            let (sum, prod) = (rec.mu[0], rec.mu[1]);
            let disc = sum * sum - 4.0 * prod;
            let expected: Vec<f64> = if disc > 0.0 {
                let sq = disc.sqrt();
                vec![(sum - sq) / 2.0, (sum + sq) / 2.0]
            } else {
                Vec::new()
            };
            let expected: Vec<f64> = expected
                .into_iter()
                .filter(|r| *r > lo && *r < hi)
                .collect();
            assert_eq!(rec.equilibria.len(), expected.len(), "mu = {:?}", rec.mu);
            for (info, r) in rec.equilibria.iter().zip(&expected) {
                assert!((info.rho0 - r).abs() < 1e-12);
                // u'(ρ) = μ₁ - 2ρ and v = 1
                let sign = sum - 2.0 * r;
                let kind = if sign > 0.0 {
                    EquilibriumKind::Saddle
                } else {
                    EquilibriumKind::Center
                };
                assert_eq!(info.kind, kind);
            }
            assert_eq!(rec.origin_equilibrium, prod.abs() <= ORIGIN_TOL);
        }
    }

    #[test]
    fn grid_order() {
        let g = product_grid(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(
            g,
            vec![
                vec![1.0, 3.0],
                vec![1.0, 4.0],
                vec![2.0, 3.0],
                vec![2.0, 4.0]
            ]
        );
        assert_eq!(product_grid(&[vec![], vec![1.0]]).len(), 0);
    }
}
