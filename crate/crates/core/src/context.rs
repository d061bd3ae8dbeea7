//! Integer characteristics of generic families of reducible invariant tori.
//!
//! A [`KamContext`] names one of the four classical settings (Hamiltonian
//! isotropic, volume preserving, general dissipative, reversible) together
//! with its integer parameters. [`profile`] derives the phase-space dimension,
//! the number of internal parameters and the shape of the Floquet spectrum.
//! [`destroy_resonant`] and [`excite_modes`] implement the two passages between
//! torus dimensions that keep `dim M` and `s` fixed.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    /// The phenomenon cannot occur in this context for structural reasons.
    #[error("Impossible: {0}")]
    Impossible(String),
    /// The context admits the passage, but not with this many external parameters.
    #[error("InfeasibleParameters: {0}")]
    InfeasibleParameters(String),
    #[error("BadOrder: {0}")]
    BadOrder(String),
    #[error("NotContext2: {0}")]
    NotContext2(String),
    #[error("InvalidContext: {0}")]
    InvalidContext(String),
}

impl ContextError {
    /// Short tag used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            ContextError::Impossible(_) => "Impossible",
            ContextError::InfeasibleParameters(_) => "InfeasibleParameters",
            ContextError::BadOrder(_) => "BadOrder",
            ContextError::NotContext2(_) => "NotContext2",
            ContextError::InvalidContext(_) => "InvalidContext",
        }
    }
}

pub type Result<T> = std::result::Result<T, ContextError>;

/// One of the four KAM contexts with its integer parameters.
///
/// `n` is always the torus dimension and `s` the number of external
/// parameters. Use [`KamContext::volume_preserving`] to build the volume
/// preserving variant, which rejects `p = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "context")]
pub enum KamContext {
    HamiltonianIsotropic { n: u32, p: u32, s: u32 },
    VolumePreserving { n: u32, p: u32, s: u32 },
    GeneralDissipative { n: u32, p: u32, s: u32 },
    Reversible { n: u32, a: u32, b: u32, s: u32 },
}

impl KamContext {
    pub fn hamiltonian(n: u32, p: u32, s: u32) -> Self {
        KamContext::HamiltonianIsotropic { n, p, s }
    }

    pub fn volume_preserving(n: u32, p: u32, s: u32) -> Result<Self> {
        if p == 0 {
            return Err(ContextError::InvalidContext(
                "the volume preserving (n,0,s) context does not exist".into(),
            ));
        }
        Ok(KamContext::VolumePreserving { n, p, s })
    }

    pub fn dissipative(n: u32, p: u32, s: u32) -> Self {
        KamContext::GeneralDissipative { n, p, s }
    }

    pub fn reversible(n: u32, a: u32, b: u32, s: u32) -> Self {
        KamContext::Reversible { n, a, b, s }
    }

    /// Checks the invariants that the enum itself cannot express.
    pub fn validate(&self) -> Result<()> {
        match *self {
            KamContext::VolumePreserving { p: 0, .. } => Err(ContextError::InvalidContext(
                "the volume preserving (n,0,s) context does not exist".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn n(&self) -> u32 {
        match *self {
            KamContext::HamiltonianIsotropic { n, .. }
            | KamContext::VolumePreserving { n, .. }
            | KamContext::GeneralDissipative { n, .. }
            | KamContext::Reversible { n, .. } => n,
        }
    }

    pub fn s(&self) -> u32 {
        match *self {
            KamContext::HamiltonianIsotropic { s, .. }
            | KamContext::VolumePreserving { s, .. }
            | KamContext::GeneralDissipative { s, .. }
            | KamContext::Reversible { s, .. } => s,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KamContext::HamiltonianIsotropic { .. } => "HamiltonianIsotropic",
            KamContext::VolumePreserving { .. } => "VolumePreserving",
            KamContext::GeneralDissipative { .. } => "GeneralDissipative",
            KamContext::Reversible { .. } => "Reversible",
        }
    }
}

impl fmt::Display for KamContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            KamContext::HamiltonianIsotropic { n, p, s } => {
                write!(f, "Hamiltonian isotropic ({n},{p},{s})")
            }
            KamContext::VolumePreserving { n, p, s } => {
                write!(f, "volume preserving ({n},{p},{s})")
            }
            KamContext::GeneralDissipative { n, p, s } => {
                write!(f, "general dissipative ({n},{p},{s})")
            }
            KamContext::Reversible { n, a, b, s } => write!(f, "reversible ({n},{a},{b},{s})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectrumShape {
    /// Zero exponents plus pairs `±λ`.
    PlusMinusPairsWithZeros,
    TraceZero,
    Unconstrained,
}

/// Reversible context 1 (`a ≥ b`) or context 2 (`a < b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReversibleClass {
    Context1,
    Context2,
}

impl ReversibleClass {
    pub fn of(a: u32, b: u32) -> Self {
        if a >= b {
            ReversibleClass::Context1
        } else {
            ReversibleClass::Context2
        }
    }
}

/// Derived integer characteristics of a context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ContextProfile {
    pub dim_m: u64,
    /// Codimension of the tori, `dim M - n`.
    pub m: u64,
    pub s_lower_bound: u64,
    /// Number of internal parameters. Negative when `s` is below the lower bound.
    pub c: i64,
    pub c_minus_s: i64,
    /// Number of nonzero Floquet exponents.
    pub g: u64,
    pub zero_floquet_multiplicity: u64,
    pub spectrum_shape: SpectrumShape,
    #[serde(rename = "class", skip_serializing_if = "Option::is_none")]
    pub reversible_class: Option<ReversibleClass>,
}

impl ContextProfile {
    /// Whether `s` reaches the minimum for generic occurrence of the tori.
    pub fn is_generic(&self, s: u32) -> bool {
        u64::from(s) >= self.s_lower_bound
    }
}

/// `0` for `n ∈ {0, 1}`, `1` otherwise.
pub fn big_delta(n: u32) -> u32 {
    u32::from(n >= 2)
}

/// Kronecker delta `δ_{1p}`.
pub fn delta_1p(p: u32) -> u32 {
    u32::from(p == 1)
}

pub fn profile(ctx: &KamContext) -> ContextProfile {
    let (dim_m, m, s_lower, c_minus_s, g, shape, class) = match *ctx {
        KamContext::HamiltonianIsotropic { n, p, .. } => {
            let (n, p) = (i64::from(n), i64::from(p));
            (
                2 * (n + p),
                n + 2 * p,
                0,
                n,
                2 * p,
                SpectrumShape::PlusMinusPairsWithZeros,
                None,
            )
        }
        KamContext::VolumePreserving { n, p, .. } => {
            let dp = i64::from(delta_1p(p));
            let lower = (i64::from(big_delta(n)) - dp).max(0);
            let (n, p) = (i64::from(n), i64::from(p));
            (n + p, p, lower, dp, p - dp, SpectrumShape::TraceZero, None)
        }
        KamContext::GeneralDissipative { n, p, .. } => {
            let lower = i64::from(big_delta(n));
            let (n, p) = (i64::from(n), i64::from(p));
            (n + p, p, lower, 0, p, SpectrumShape::Unconstrained, None)
        }
        KamContext::Reversible { n, a, b, .. } => {
            let class = ReversibleClass::of(a, b);
            let lower = (i64::from(big_delta(n)) + i64::from(b) - i64::from(a)).max(0);
            let (n, a, b) = (i64::from(n), i64::from(a), i64::from(b));
            (
                n + a + b,
                a + b,
                lower,
                a - b,
                2 * a.min(b),
                SpectrumShape::PlusMinusPairsWithZeros,
                Some(class),
            )
        }
    };
    let s = i64::from(ctx.s());
    ContextProfile {
        dim_m: dim_m as u64,
        m: m as u64,
        s_lower_bound: s_lower as u64,
        c: c_minus_s + s,
        c_minus_s,
        g: g as u64,
        zero_floquet_multiplicity: c_minus_s.unsigned_abs(),
        spectrum_shape: shape,
        reversible_class: class,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilySmoothness {
    Smooth,
    WhitneyCantorLike,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitionResult {
    pub target: KamContext,
    pub r: u32,
    pub family_smoothness: FamilySmoothness,
    pub note: String,
}

/// Proper destruction of a smooth family of `r`-fold resonant `n`-tori into
/// families of `(n - r)`-tori.
pub fn destroy_resonant(ctx: &KamContext, r: u32) -> Result<TransitionResult> {
    ctx.validate()?;
    match *ctx {
        KamContext::GeneralDissipative { .. } => {
            return Err(ContextError::Impossible(
                "in the general dissipative context c = s cannot change for fixed s".into(),
            ))
        }
        KamContext::VolumePreserving { p, .. } if p != 1 || r != 1 => {
            return Err(ContextError::Impossible(format!(
                "volume preserving destruction requires p = 1 and r = 1 (got p = {p}, r = {r})"
            )))
        }
        _ => {}
    }

    let n = ctx.n();
    if n < 2 || r < 1 || r > n - 1 {
        return Err(ContextError::BadOrder(format!(
            "destruction needs n >= 2 and 1 <= r <= n - 1 (got n = {n}, r = {r})"
        )));
    }

    let c = profile(ctx).c;
    if c < i64::from(r) {
        return Err(ContextError::InfeasibleParameters(format!(
            "c = {c} internal parameters, need c >= r = {r}"
        )));
    }

    let mut notes = Vec::new();
    let target = match *ctx {
        KamContext::HamiltonianIsotropic { n, p, s } => KamContext::hamiltonian(n - r, p + r, s),
        KamContext::VolumePreserving { n, s, .. } => {
            // c' = s must reach Δ_{n-1}
            if n >= 3 && s < 1 {
                return Err(ContextError::InfeasibleParameters(format!(
                    "volume preserving destruction with n = {n} >= 3 needs s >= 1"
                )));
            }
            notes.push("predicted by parameter counting only; not established in the literature");
            KamContext::VolumePreserving { n: n - 1, p: 2, s }
        }
        KamContext::Reversible { n, a, b, s } => {
            let bound = i64::from(big_delta(n - r)) + i64::from(b) + i64::from(r) - i64::from(a);
            if i64::from(s) < bound {
                return Err(ContextError::InfeasibleParameters(format!(
                    "reversible destruction needs s >= Δ(n-r) + b + r - a = {bound} (got s = {s})"
                )));
            }
            KamContext::reversible(n - r, a, b + r, s)
        }
        KamContext::GeneralDissipative { .. } => unreachable!(),
    };

    let family_smoothness = if r == n - 1 {
        FamilySmoothness::Smooth
    } else {
        FamilySmoothness::WhitneyCantorLike
    };
    if r < n - 1 && c == i64::from(r) {
        notes.push("c = r with r < n - 1: smoothness of the destroyed family is not settled");
    }

    Ok(TransitionResult {
        target,
        r,
        family_smoothness,
        note: notes.join("; "),
    })
}

/// Excitation of `r` pairs of purely imaginary Floquet exponents of `n`-tori,
/// producing a family of `(n + r)`-tori.
pub fn excite_modes(ctx: &KamContext, r: u32) -> Result<TransitionResult> {
    ctx.validate()?;
    let mut note = String::new();
    let target = match *ctx {
        KamContext::GeneralDissipative { .. } => {
            return Err(ContextError::Impossible(
                "generic dissipative Floquet matrices have no pairs of opposite exponents".into(),
            ))
        }
        KamContext::VolumePreserving { p, .. } if p != 2 => {
            return Err(ContextError::Impossible(format!(
                "volume preserving excitation needs p = 2 (got p = {p})"
            )))
        }
        KamContext::VolumePreserving { n, s, .. } => {
            if r != 1 {
                return Err(ContextError::BadOrder(format!(
                    "volume preserving (n,2,s) excitation has r = 1 (got r = {r})"
                )));
            }
            KamContext::VolumePreserving { n: n + 1, p: 1, s }
        }
        KamContext::HamiltonianIsotropic { n, p, s } => {
            if r < 1 || r > p {
                return Err(ContextError::BadOrder(format!(
                    "Hamiltonian excitation needs 1 <= r <= p = {p} (got r = {r})"
                )));
            }
            KamContext::hamiltonian(n + r, p - r, s)
        }
        KamContext::Reversible { n, a, b, s } => {
            let pairs = a.min(b);
            if pairs < 1 || r < 1 || r > pairs {
                return Err(ContextError::BadOrder(format!(
                    "reversible excitation needs 1 <= r <= min(a,b) = {pairs} (got r = {r})"
                )));
            }
            if a < b {
                note = format!(
                    "reversible context 2: {} new exponent pair(s) appear, zero-exponent defect {}",
                    r.min(b - a),
                    2 * r.min(b - a)
                );
            }
            KamContext::reversible(n + r, a, b - r, s)
        }
    };
    let family_smoothness = if ctx.n() == 0 && r == 1 {
        FamilySmoothness::Smooth
    } else {
        FamilySmoothness::WhitneyCantorLike
    };
    Ok(TransitionResult {
        target,
        r,
        family_smoothness,
        note,
    })
}

/// Zero-exponent bookkeeping for excitation in the reversible context 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Context2Report {
    /// Zero Floquet exponents of the excited tori, `|b - a - r|`.
    pub kappa1: u32,
    /// The count `(b - a) + r` expected from the conventional contexts.
    pub kappa2: u32,
    pub defect: u32,
    /// Number of new pairs of nonzero exponents.
    pub d: u32,
    pub c_prime_minus_s: i64,
    pub resulting_class: ReversibleClass,
}

pub fn context2_excitation_diagnostics(ctx: &KamContext, r: u32) -> Result<Context2Report> {
    let KamContext::Reversible { a, b, .. } = *ctx else {
        return Err(ContextError::NotContext2(format!(
            "{ctx} is not reversible"
        )));
    };
    if a >= b {
        return Err(ContextError::NotContext2(format!(
            "a = {a} >= b = {b} is the reversible context 1"
        )));
    }
    if r < 1 || r > a {
        return Err(ContextError::BadOrder(format!(
            "context 2 excitation needs 1 <= r <= a = {a} (got r = {r})"
        )));
    }
    let gap = b - a;
    let kappa1 = gap.abs_diff(r);
    let kappa2 = gap + r;
    Ok(Context2Report {
        kappa1,
        kappa2,
        defect: kappa2 - kappa1,
        d: gap.min(r),
        c_prime_minus_s: i64::from(r) - i64::from(gap),
        resulting_class: ReversibleClass::of(a, b - r),
    })
}
