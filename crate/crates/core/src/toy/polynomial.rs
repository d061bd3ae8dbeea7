use serde::{Deserialize, Serialize};

/// Real polynomial in `ρ`, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    /// `scale · ∏ (ρ - root)`.
    pub fn from_roots(scale: f64, roots: &[f64]) -> Self {
        let mut coeffs = vec![scale];
        for &r in roots {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
        Polynomial { coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        }
    }

    /// `Σ |c_i| |x|^i`, the natural scale for rounding error in `eval(x)`.
    pub fn magnitude(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

/// Polynomial in `ρ` whose coefficients are affine in the parameter `μ ∈ R^s`.
///
/// Row `d` holds `[c₀, c₁, …, c_s]`, meaning the `ρ^d` coefficient is
/// `c₀ + c₁μ₁ + … + c_sμ_s`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AffinePolynomial {
    pub rows: Vec<Vec<f64>>,
}

impl AffinePolynomial {
    pub fn new(rows: Vec<Vec<f64>>) -> Self {
        AffinePolynomial { rows }
    }

    /// A polynomial that does not depend on `μ`.
    pub fn fixed(coeffs: &[f64], s: usize) -> Self {
        AffinePolynomial {
            rows: coeffs
                .iter()
                .map(|&c| {
                    let mut row = vec![0.0; s + 1];
                    row[0] = c;
                    row
                })
                .collect(),
        }
    }

    pub fn at(&self, mu: &[f64]) -> Polynomial {
        Polynomial {
            coeffs: self
                .rows
                .iter()
                .map(|row| row[0] + row[1..].iter().zip(mu).map(|(c, m)| c * m).sum::<f64>())
                .collect(),
        }
    }

    /// Every row must have `s + 1` finite entries.
    pub fn check_shape(&self, s: usize) -> Result<(), String> {
        for (d, row) in self.rows.iter().enumerate() {
            if row.len() != s + 1 {
                return Err(format!(
                    "row {d} has {} entries, expected s + 1 = {}",
                    row.len(),
                    s + 1
                ));
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(format!("row {d} has a non-finite coefficient"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_and_derivative() {
        // 1 - 2x + 3x^2
        let p = Polynomial::new(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 9.0);
        assert_eq!(p.derivative().coeffs, vec![-2.0, 6.0]);
        assert_eq!(p.eval_with_derivative(2.0), (9.0, 10.0));
        assert_eq!(Polynomial::default().eval(3.0), 0.0);
        assert_eq!(Polynomial::default().eval_with_derivative(3.0), (0.0, 0.0));
    }

    #[test]
    fn from_roots_vanishes_at_roots() {
        let p = Polynomial::from_roots(-1.0, &[0.3, 0.9]);
        assert!(p.eval(0.3).abs() < 1e-15);
        assert!(p.eval(0.9).abs() < 1e-15);
        assert!(p.eval(0.5) > 0.0);
    }

    #[test]
    fn affine_evaluation() {
        // (0.1 + 2 mu1 - mu2) + (1 + mu1) rho
        let a = AffinePolynomial::new(vec![vec![0.1, 2.0, -1.0], vec![1.0, 1.0, 0.0]]);
        let p = a.at(&[0.5, 0.25]);
        assert!((p.coeffs[0] - 0.85).abs() < 1e-15);
        assert!((p.coeffs[1] - 1.5).abs() < 1e-15);
        assert!(a.check_shape(2).is_ok());
        assert!(a.check_shape(1).is_err());
    }
}
