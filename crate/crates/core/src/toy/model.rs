use super::polynomial::{AffinePolynomial, Polynomial};
use super::{Result, ToyError};
use serde::{Deserialize, Serialize};

/// On-disk description of a model family and a parameter value.
///
/// ```json
/// {"s": 1, "mu": [0.5], "u": [[0, 1], [-1, 0]], "v": [[1, 0]], "w": [[1, 0], [1, 0]]}
/// ```
///
/// Each of `u`, `v`, `w` is a table indexed by `[degree in ρ][affine in μ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub s: usize,
    pub mu: Vec<f64>,
    pub u: AffinePolynomial,
    pub v: AffinePolynomial,
    pub w: AffinePolynomial,
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| ToyError::InvalidModel(e.to_string()))
    }
}

/// The `(u, v, W)` family without a chosen parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFamily {
    pub s: usize,
    pub u: AffinePolynomial,
    pub v: AffinePolynomial,
    pub w: AffinePolynomial,
}

impl ModelFamily {
    pub fn new(
        s: usize,
        u: AffinePolynomial,
        v: AffinePolynomial,
        w: AffinePolynomial,
    ) -> Result<Self> {
        if s == 0 {
            return Err(ToyError::InvalidModel(
                "the model needs s >= 1 parameters".into(),
            ));
        }
        for (name, p) in [("u", &u), ("v", &v), ("w", &w)] {
            p.check_shape(s)
                .map_err(|e| ToyError::InvalidModel(format!("{name}: {e}")))?;
        }
        Ok(ModelFamily { s, u, v, w })
    }

    /// `u = μ₁ - ρ`, `v = ±1`, `W = 1 + ρ`.
    pub fn default_family(v_sign: f64) -> Self {
        ModelFamily {
            s: 1,
            u: AffinePolynomial::new(vec![vec![0.0, 1.0], vec![-1.0, 0.0]]),
            v: AffinePolynomial::new(vec![vec![v_sign.signum(), 0.0]]),
            w: AffinePolynomial::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]),
        }
    }

    pub fn at(&self, mu: &[f64]) -> Result<ToyModel> {
        if mu.len() != self.s {
            return Err(ToyError::InvalidModel(format!(
                "mu has {} components, expected s = {}",
                mu.len(),
                self.s
            )));
        }
        if mu.iter().any(|m| !m.is_finite()) {
            return Err(ToyError::InvalidModel("mu must be finite".into()));
        }
        Ok(ToyModel {
            u: self.u.at(mu),
            v: self.v.at(mu),
            w: self.w.at(mu),
            mu: mu.to_vec(),
            family: self.clone(),
        })
    }
}

/// A concrete member of the family: `ẏ = u(|z|²)`, `ż = i z W(|z|²) + z y v(|z|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyModel {
    pub family: ModelFamily,
    pub mu: Vec<f64>,
    pub u: Polynomial,
    pub v: Polynomial,
    pub w: Polynomial,
}

impl ToyModel {
    /// The default family at `μ₁ = mu1` with `v = 1`.
    pub fn default_model(mu1: f64) -> Self {
        ModelFamily::default_family(1.0)
            .at(&[mu1])
            .expect("default family is well formed")
    }

    /// The default family at `μ₁ = mu1` with `v = -1`.
    pub fn default_saddle_model(mu1: f64) -> Self {
        ModelFamily::default_family(-1.0)
            .at(&[mu1])
            .expect("default family is well formed")
    }

    /// Wraps fixed polynomials as a one-parameter family that ignores `μ`.
    pub fn from_polynomials(u: Polynomial, v: Polynomial, w: Polynomial) -> Self {
        let family = ModelFamily {
            s: 1,
            u: AffinePolynomial::fixed(&u.coeffs, 1),
            v: AffinePolynomial::fixed(&v.coeffs, 1),
            w: AffinePolynomial::fixed(&w.coeffs, 1),
        };
        ToyModel {
            family,
            mu: vec![0.0],
            u,
            v,
            w,
        }
    }

    pub fn from_config(config: &ModelConfig) -> Result<Self> {
        ModelFamily::new(
            config.s,
            config.u.clone(),
            config.v.clone(),
            config.w.clone(),
        )?
        .at(&config.mu)
    }

    pub fn to_config(&self) -> ModelConfig {
        ModelConfig {
            s: self.family.s,
            mu: self.mu.clone(),
            u: self.family.u.clone(),
            v: self.family.v.clone(),
            w: self.family.w.clone(),
        }
    }

    /// Verifies `W > 0` on `[lo, hi]` at `samples + 1` evenly spaced points.
    pub fn check_w_positive(&self, lo: f64, hi: f64, samples: usize) -> Result<()> {
        let samples = samples.max(1);
        for i in 0..=samples {
            let rho = lo + (hi - lo) * i as f64 / samples as f64;
            let w = self.w.eval(rho);
            if w.is_nan() || w <= 0.0 {
                return Err(ToyError::InvalidModel(format!(
                    "W(rho) must be positive on the working interval; W({rho}) = {w}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_model_coefficients() {
        let m = ToyModel::default_model(0.5);
        assert_eq!(m.u.coeffs, vec![0.5, -1.0]);
        assert_eq!(m.v.coeffs, vec![1.0]);
        assert_eq!(m.w.coeffs, vec![1.0, 1.0]);
        assert_eq!(ToyModel::default_saddle_model(0.5).v.coeffs, vec![-1.0]);
    }

    #[test]
    fn spec_roundtrip_and_errors() {
        let text = r#"{"s": 1, "mu": [0.5], "u": [[0, 1], [-1, 0]], "v": [[1, 0]], "w": [[1, 0], [1, 0]]}"#;
        let config = ModelConfig::from_json(text).unwrap();
        let m = ToyModel::from_config(&config).unwrap();
        assert_eq!(m, ToyModel::default_model(0.5));
        assert_eq!(m.to_config(), config);

        let bad_row = r#"{"s": 1, "mu": [0.5], "u": [[0, 1, 2]], "v": [[1, 0]], "w": [[1, 0]]}"#;
        let config = ModelConfig::from_json(bad_row).unwrap();
        assert!(matches!(
            ToyModel::from_config(&config),
            Err(ToyError::InvalidModel(_))
        ));

        let bad_mu =
            r#"{"s": 2, "mu": [0.5], "u": [[0, 1, 0]], "v": [[1, 0, 0]], "w": [[1, 0, 0]]}"#;
        let config = ModelConfig::from_json(bad_mu).unwrap();
        assert!(ToyModel::from_config(&config).is_err());

        assert!(ModelConfig::from_json("{\"s\": 1}").is_err());
    }

    #[test]
    fn w_positivity() {
        let m = ToyModel::default_model(0.5);
        assert!(m.check_w_positive(0.0, 2.0, 100).is_ok());
        assert!(m.check_w_positive(-3.0, 0.0, 100).is_err());
    }
}
