//! Scalar tower: exact Gaussian rationals for inputs, arbitrary-precision
//! complex floats for everything that needs roots, and the tolerance policy
//! shared by every numerical decision in the crate.

pub(crate) mod approx;
mod gaussian;
pub mod poly;

pub use approx::{decimal_digits, format_real, kth_root_scalar, ComplexApprox, Real};
pub use gaussian::GaussianRational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Smallest supported working precision in bits.
pub const MIN_PRECISION_BITS: usize = 64;
/// Largest supported working precision; keeps every derived tolerance
/// representable as a normal `f64`.
pub const MAX_PRECISION_BITS: usize = 2048;

/// Numerical tolerances, all derived from one precision value so that a run is
/// reproducible from the profile alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceProfile {
    pub precision_bits: usize,
    /// Relative pivot threshold below which an entry counts as zero.
    pub eps_rank: f64,
    /// Radius used when merging approximate eigenvalues into clusters.
    pub eps_cluster: f64,
    /// Absolute bound a verified output must meet.
    pub eps_residual: f64,
    pub seed: u64,
}

impl ToleranceProfile {
    pub fn with_precision(precision_bits: usize) -> Self {
        let p = precision_bits as i32;
        let eps_rank = 2f64.powi(-(p / 4));
        ToleranceProfile {
            precision_bits,
            eps_rank,
            eps_cluster: eps_rank,
            eps_residual: 2f64.powi(-(p / 2)),
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_PRECISION_BITS..=MAX_PRECISION_BITS).contains(&self.precision_bits) {
            return Err(Error::PreconditionViolated(format!(
                "precision must lie in [{MIN_PRECISION_BITS}, {MAX_PRECISION_BITS}] bits, got {}",
                self.precision_bits
            )));
        }
        for (name, eps) in [
            ("eps_rank", self.eps_rank),
            ("eps_cluster", self.eps_cluster),
            ("eps_residual", self.eps_residual),
        ] {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::PreconditionViolated(format!(
                    "{name} must lie in (0, 1), got {eps}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile::with_precision(256)
    }
}

/// Outcome of comparing a magnitude against a scaled zero threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Negligibility {
    Zero,
    /// Within a factor 8 above the threshold: too close to call.
    Fragile,
    Significant,
}

/// Field operations shared by the exact and the approximate scalar.
///
/// Linear algebra in this crate is written once against this trait. The exact
/// scalar decides zero-ness exactly; the approximate one compares against
/// `eps_rank` times a caller-supplied scale.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// Construction context (the working precision for floats, nothing for
    /// exact values).
    type Ctx: Copy + fmt::Debug + PartialEq + Send + Sync;
    /// Monotone size measure used for pivoting.
    type Mag: Clone + PartialOrd + fmt::Debug;
    /// Whether zero tests on this scalar are exact.
    const EXACT: bool;

    fn context(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    fn from_gaussian(v: &GaussianRational, ctx: Self::Ctx) -> Self;

    /// Exact zero test (no tolerance).
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; `None` for an exact zero.
    fn recip(&self) -> Option<Self>;

    fn magnitude(&self) -> Self::Mag;
    fn zero_mag(ctx: Self::Ctx) -> Self::Mag;
    fn classify(mag: &Self::Mag, scale: &Self::Mag, tol: &ToleranceProfile) -> Negligibility;
    /// `max(1, m)^e`, the reference size of an `e`-fold product.
    fn power_scale(m: &Self::Mag, e: usize) -> Self::Mag;

    fn to_approx(&self, precision: usize) -> ComplexApprox;

    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self.clone() * &r)
    }
}
