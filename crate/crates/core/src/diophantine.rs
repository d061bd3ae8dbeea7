//! Finite-cutoff Diophantine tests for frequency vectors.
//!
//! Integer vectors are measured with the 1-norm `|k| = Σ|k_j|`. Every check
//! enumerates `0 < |k| ≤ k_max`, taking one representative of each `±k` pair
//! (the one whose first nonzero entry is positive), in order of increasing
//! `|k|` and then lexicographically. Violation witnesses are the first
//! offending lattice point in that order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiophantineError {
    #[error("BadTau: tau = {tau} must exceed max(n - 1, 0) = {bound}")]
    BadTau { tau: f64, bound: f64 },
    #[error("EmptyVector: the frequency vector has no components")]
    EmptyVector,
    #[error("NonFinite: frequency components must be finite")]
    NonFinite,
    #[error("BadParams: {0}")]
    BadParams(String),
    #[error("DegenerateBox: {0}")]
    DegenerateBox(String),
}

pub type Result<T> = std::result::Result<T, DiophantineError>;

/// Tangential frequencies `omega` and, optionally, normal frequencies `beta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyVector {
    pub omega: Vec<f64>,
    pub beta: Vec<f64>,
}

impl FrequencyVector {
    pub fn new(omega: Vec<f64>) -> Self {
        FrequencyVector {
            omega,
            beta: Vec::new(),
        }
    }

    pub fn with_normal(omega: Vec<f64>, beta: Vec<f64>) -> Self {
        FrequencyVector { omega, beta }
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    fn validate(&self) -> Result<()> {
        if self.omega.is_empty() {
            return Err(DiophantineError::EmptyVector);
        }
        if self.omega.iter().chain(&self.beta).any(|x| !x.is_finite()) {
            return Err(DiophantineError::NonFinite);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiophantineParams {
    pub gamma: f64,
    pub tau: f64,
    pub k_max: u32,
}

impl DiophantineParams {
    pub fn new(gamma: f64, tau: f64, k_max: u32) -> Self {
        DiophantineParams { gamma, tau, k_max }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(DiophantineError::BadParams(format!(
                "gamma = {} must be positive",
                self.gamma
            )));
        }
        validate_tau(self.tau, n)?;
        validate_k_max(self.k_max)
    }
}

fn validate_tau(tau: f64, n: usize) -> Result<()> {
    let bound = (n as f64 - 1.0).max(0.0);
    if tau <= bound || !tau.is_finite() {
        return Err(DiophantineError::BadTau { tau, bound });
    }
    Ok(())
}

fn validate_k_max(k_max: u32) -> Result<()> {
    if k_max == 0 {
        return Err(DiophantineError::BadParams(
            "k_max must be at least 1".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub k: Vec<i64>,
    /// Empty unless the check involved normal frequencies.
    pub l: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub pass: bool,
    pub witness: Option<Witness>,
    pub min_product: f64,
    pub k_max: u32,
}

/// Canonical lattice points `0 < |k|₁ ≤ k_max` with their weights `|k|^τ`.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    points: Vec<i64>,
    norms: Vec<u32>,
    weights: Vec<f64>,
}

impl Lattice {
    pub fn new(dim: usize, k_max: u32, tau: f64) -> Self {
        let mut points = Vec::new();
        let mut norms = Vec::new();
        let mut buf = vec![0i64; dim];
        for norm in 1..=k_max {
            enumerate_norm(&mut buf, 0, norm as i64, false, &mut |k| {
                points.extend_from_slice(k);
                norms.push(norm);
            });
        }
        let weights = norms.iter().map(|&m| f64::from(m).powf(tau)).collect();
        Lattice {
            dim,
            points,
            norms,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn norm(&self, i: usize) -> u32 {
        self.norms[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i64], f64)> + '_ {
        self.points
            .chunks_exact(self.dim.max(1))
            .zip(self.weights.iter().copied())
    }

    fn dot(&self, i: usize, omega: &[f64]) -> f64 {
        dot2(
            self.point(i)
                .iter()
                .zip(omega)
                .map(|(&k, &w)| (k as f64, w)),
        )
    }

    fn min_product(&self, omega: &[f64]) -> f64 {
        (0..self.len())
            .map(|i| self.dot(i, omega).abs() * self.weights[i])
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum product and the first index (in lattice order) with product below `gamma`.
    fn scan(&self, omega: &[f64], gamma: f64) -> (f64, Option<usize>) {
        let mut min = f64::INFINITY;
        let mut first = None;
        for i in 0..self.len() {
            let prod = self.dot(i, omega).abs() * self.weights[i];
            if prod < gamma && first.is_none() {
                first = Some(i);
            }
            min = min.min(prod);
        }
        (min, first)
    }

    fn passes(&self, omega: &[f64], gamma: f64) -> bool {
        (0..self.len()).all(|i| self.dot(i, omega).abs() * self.weights[i] >= gamma)
    }
}

/// Dot product in twice the working precision (error-free transformations
/// `TwoProduct` and `TwoSum`), rounded once at the end.
fn dot2(terms: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for (a, b) in terms {
        let prod = a * b;
        let prod_err = a.mul_add(b, -prod);
        let t = sum + prod;
        let z = t - sum;
        let sum_err = (sum - (t - z)) + (prod - z);
        sum = t;
        comp += prod_err + sum_err;
    }
    sum + comp
}

/// Visits the vectors of exact 1-norm `remaining` in positions `pos..`, in
/// lexicographic order. Until a nonzero entry has been placed (`signed` false)
/// only nonnegative values are allowed, which selects one of each `±k` pair.
fn enumerate_norm(
    buf: &mut [i64],
    pos: usize,
    remaining: i64,
    signed: bool,
    visit: &mut dyn FnMut(&[i64]),
) {
    if pos + 1 == buf.len() {
        if remaining == 0 {
            if signed {
                buf[pos] = 0;
                visit(buf);
            }
            return;
        }
        if signed {
            buf[pos] = -remaining;
            visit(buf);
        }
        buf[pos] = remaining;
        visit(buf);
        return;
    }
    let lo = if signed { -remaining } else { 0 };
    for v in lo..=remaining {
        buf[pos] = v;
        enumerate_norm(buf, pos + 1, remaining - v.abs(), signed || v != 0, visit);
    }
}

/// Best constant `γ` supported by `omega` up to the cutoff: the minimum of
/// `|⟨ω,k⟩|·|k|^τ` over `0 < |k| ≤ k_max`.
pub fn min_quality(omega: &FrequencyVector, tau: f64, k_max: u32) -> Result<f64> {
    omega.validate()?;
    validate_tau(tau, omega.dim())?;
    validate_k_max(k_max)?;
    Ok(Lattice::new(omega.dim(), k_max, tau).min_product(&omega.omega))
}

/// Finite-cutoff test of `|⟨ω,k⟩| ≥ γ|k|^{-τ}`. Normal frequencies are ignored.
pub fn check_diophantine(
    omega: &FrequencyVector,
    params: &DiophantineParams,
) -> Result<CheckResult> {
    omega.validate()?;
    params.validate(omega.dim())?;
    let lattice = Lattice::new(omega.dim(), params.k_max, params.tau);
    let (min, first) = lattice.scan(&omega.omega, params.gamma);
    Ok(CheckResult {
        pass: first.is_none(),
        witness: first.map(|i| Witness {
            k: lattice.point(i).to_vec(),
            l: Vec::new(),
        }),
        min_product: min,
        k_max: params.k_max,
    })
}

/// Integer vectors `l ∈ Z^q` with `|l| ≤ 2`, ordered by norm then lexicographically.
fn small_normal_vectors(q: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; q]];
    let mut buf = vec![0i64; q];
    if q > 0 {
        for norm in 1..=2 {
            enumerate_norm(&mut buf, 0, norm, true, &mut |l| out.push(l.to_vec()));
        }
    }
    out
}

/// Finite-cutoff test of `|⟨ω,k⟩ + ⟨β,l⟩| ≥ γ|k|^{-τ}` for all `0 < |k| ≤ k_max`
/// and all `|l| ≤ 2`. With no normal frequencies this is [`check_diophantine`].
pub fn check_affine_diophantine(
    freq: &FrequencyVector,
    params: &DiophantineParams,
) -> Result<CheckResult> {
    freq.validate()?;
    params.validate(freq.dim())?;
    let lattice = Lattice::new(freq.dim(), params.k_max, params.tau);
    // both signs of l: only k is reduced to a canonical representative
    let ls = small_normal_vectors(freq.beta.len());

    let mut min = f64::INFINITY;
    let mut witness = None;
    for i in 0..lattice.len() {
        let k = lattice.point(i);
        for l in &ls {
            let terms = k.iter().zip(&freq.omega).chain(l.iter().zip(&freq.beta));
            let value = dot2(terms.map(|(&n, &w)| (n as f64, w)));
            let prod = value.abs() * lattice.weights[i];
            if prod < params.gamma && witness.is_none() {
                witness = Some(Witness {
                    k: lattice.point(i).to_vec(),
                    l: l.clone(),
                });
            }
            min = min.min(prod);
        }
    }
    Ok(CheckResult {
        pass: witness.is_none(),
        witness,
        min_product: min,
        k_max: params.k_max,
    })
}

/// Axis-aligned box `[lo_1, hi_1] × … × [lo_n, hi_n]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl FrequencyBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(DiophantineError::DegenerateBox(format!(
                "bounds of lengths {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(l, h)| h <= l || !l.is_finite() || !h.is_finite())
        {
            return Err(DiophantineError::DegenerateBox(
                "every side needs finite lo < hi".into(),
            ));
        }
        Ok(FrequencyBox { lo, hi })
    }

    /// Builds a box from interleaved bounds `lo_1, hi_1, lo_2, hi_2, …`.
    pub fn from_interleaved(bounds: &[f64]) -> Result<Self> {
        if !bounds.len().is_multiple_of(2) {
            return Err(DiophantineError::DegenerateBox(
                "bounds must come in lo,hi pairs".into(),
            ));
        }
        let lo = bounds.iter().step_by(2).copied().collect();
        let hi = bounds.iter().skip(1).step_by(2).copied().collect();
        FrequencyBox::new(lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
}

/// The `index`-th uniform sample of the box for `seed`.
///
/// Each sample draws from its own ChaCha8 stream (`stream = index`), so the
/// value does not depend on evaluation order or thread count.
pub fn sample_point(bx: &FrequencyBox, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    bx.lo
        .iter()
        .zip(&bx.hi)
        .map(|(&lo, &hi)| lo + (hi - lo) * rng.random::<f64>())
        .collect()
}

/// Fraction of uniformly sampled frequency vectors in `bx` that pass
/// [`check_diophantine`] with `params`.
pub fn measure_estimate(
    bx: &FrequencyBox,
    params: &DiophantineParams,
    n_samples: u64,
    seed: u64,
) -> Result<f64> {
    params.validate(bx.dim())?;
    if n_samples == 0 {
        return Err(DiophantineError::BadParams(
            "n_samples must be at least 1".into(),
        ));
    }
    let lattice = Lattice::new(bx.dim(), params.k_max, params.tau);
    let passed: u64 = (0..n_samples)
        .into_par_iter()
        .map(|i| u64::from(lattice.passes(&sample_point(bx, seed, i), params.gamma)))
        .sum();
    Ok(passed as f64 / n_samples as f64)
}
