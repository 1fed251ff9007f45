//! Verdicts and constructive solutions of `A₁X₁ᵏ + A₂X₂ᵏ = C`.
//!
//! Everything up to the final k-th roots is exact. The problem is reduced to
//! `X̃₁ᵏ + J X̃₂ᵏ = C̃` with `J = gBg⁻¹ = N′ ⊕ (⊕ J_{0,m_s})`, `B = A₁⁻¹A₂`
//! and `C̃ = g A₁⁻¹ C g⁻¹`. A route then picks an exact `T`, after which
//! `X̃₁ = (C̃ − JT)^{1/k}` and `X̃₂ = T^{1/k}` are the only approximate steps.

mod routes;
mod rowctl;


use std::fmt;

use crate::arithmetic::{GaussianRational, ToleranceProfile};
use crate::error::{Error, Result};
use crate::jordan::CoreNilpotentForm;
use crate::linalg::{inverse, nullity, ApproxMat, ExactMat, Mat};
use crate::powers::matrix_kth_root;

pub use routes::{
    build_rank_criterion_t, choose_mu, membership_n3, non_surjectivity_witness, solve_full_nilpotent, solve_invertible,
    solve_low_dim, solve_one_nilpotent_block, solve_rank_criterion, Membership, WitnessCheck, WitnessChecker,
};

/// Default number of random attempts in the open region.
pub const DEFAULT_RETRIES: usize = 64;

#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub a1: ExactMat,
    pub a2: ExactMat,
    pub k: u32,
    pub target: Option<ExactMat>,
    pub profile: ToleranceProfile,
    pub retries: usize,
}

impl ProblemInstance {
    pub fn new(a1: ExactMat, a2: ExactMat, k: u32) -> Self {
        ProblemInstance { a1, a2, k, target: None, profile: ToleranceProfile::default(), retries: DEFAULT_RETRIES }
    }

    pub fn with_target(mut self, c: ExactMat) -> Self {
        self.target = Some(c);
        self
    }

    pub fn with_profile(mut self, profile: ToleranceProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn with_retries(mut self, retries: usize) -> Self {
        self.retries = retries;
        self
    }

    pub fn n(&self) -> usize {
        self.a1.n()
    }

    fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        if self.k < 2 {
            return Err(Error::PreconditionViolated(format!("k = {} must be at least 2", self.k)));
        }
        let n = self.a1.n();
        let square = |m: &ExactMat| m.is_square() && m.n() == n;
        if !square(&self.a1) || !square(&self.a2) || !self.target.as_ref().is_none_or(square) {
            return Err(Error::DimensionMismatch("A₁, A₂ and C must be square of the same size".into()));
        }
        Ok(())
    }
}

/// The instance in core-nilpotent coordinates.
#[derive(Debug, Clone)]
pub struct ReducedInstance {
    /// `A₁⁻¹A₂`.
    pub b: ExactMat,
    pub form: CoreNilpotentForm,
    /// `gBg⁻¹`.
    pub j: ExactMat,
    /// `g A₁⁻¹ C g⁻¹`.
    pub target: Option<ExactMat>,
}

impl ReducedInstance {
    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn r0(&self) -> usize {
        self.form.r0()
    }

    fn target(&self) -> Result<&ExactMat> {
        self.target.as_ref().ok_or_else(|| Error::PreconditionViolated("no target matrix given".into()))
    }
}

pub fn reduce(inst: &ProblemInstance) -> Result<ReducedInstance> {
    inst.validate()?;
    let tol = &inst.profile;
    let a1_inv = inverse(&inst.a1, tol)?;
    let b = &a1_inv * &inst.a2;
    let form = CoreNilpotentForm::from_matrix(&b, tol)?;
    let j = form.reduced();
    let target = inst.target.as_ref().map(|c| form.to_reduced_coords(&(&a1_inv * c)));
    Ok(ReducedInstance { b, form, j, target })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictTag {
    Surjective,
    NotSurjective,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictReason {
    R0AtMostOne,
    MillerObstruction,
    LowDimInequality,
    OpenRegion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub reason: VerdictReason,
    pub n: usize,
    pub k: u32,
    pub r0: usize,
}

pub fn verdict(n: usize, k: u32, r0: usize) -> Result<Verdict> {
    if k < 2 || r0 > n {
        return Err(Error::PreconditionViolated(format!("need k ≥ 2 and r₀ ≤ n, got n={n} k={k} r₀={r0}")));
    }
    use VerdictReason::*;
    use VerdictTag::*;
    let (tag, reason) = if r0 <= 1 {
        (Surjective, R0AtMostOne)
    } else if n <= k as usize * (r0 - 1) {
        (NotSurjective, MillerObstruction)
    } else if n == 3 || n == 4 {
        (Surjective, LowDimInequality)
    } else {
        (Unknown, OpenRegion)
    };
    Ok(Verdict { tag, reason, n, k, r0 })
}

/// Verdict for a pair, with `r₀ = nullity(A₂)`.
pub fn instance_verdict(inst: &ProblemInstance) -> Result<Verdict> {
    inst.validate()?;
    inverse(&inst.a1, &inst.profile)?;
    verdict(inst.n(), inst.k, nullity(&inst.a2, &inst.profile)?)
}

/// The construction that produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Invertible,
    FullNilpotent,
    OneNilpotentBlock,
    RankCriterion,
    FullRowSpace,
    ScalarShift,
    MillerAbsorb,
    Membership,
    MillerCertificate,
    ZeroCoefficient,
    RandomSearch,
    Exhausted,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Invertible => "invertible",
            Route::FullNilpotent => "full_nilpotent",
            Route::OneNilpotentBlock => "one_nilpotent_block",
            Route::RankCriterion => "rank_criterion",
            Route::FullRowSpace => "full_row_space",
            Route::ScalarShift => "scalar_shift",
            Route::MillerAbsorb => "miller_absorb",
            Route::Membership => "membership_n3",
            Route::MillerCertificate => "miller_certificate",
            Route::ZeroCoefficient => "zero_coefficient",
            Route::RandomSearch => "random_search",
            Route::Exhausted => "exhausted",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a target is outside the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// For every `T`, `C − JT` keeps a nilpotent Jordan block of size at
    /// least `block`, while a k-th power of an `n × n` matrix has none larger
    /// than `bound = ⌈n/k⌉`.
    MillerBound { block: usize, bound: usize },
    /// `A₂ = 0`, so the image is the set of `A₁Xᵏ`; the nilpotent partition
    /// of `A₁⁻¹C` has no k-th root.
    NotAPower { partition: Vec<usize> },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::MillerBound { block, bound } => {
                write!(f, "every C - JT has a nilpotent block of size >= {block} > {bound}")
            }
            Certificate::NotAPower { partition } => write!(f, "nilpotent partition {partition:?} is not a k-th power"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x1: ApproxMat,
    pub x2: ApproxMat,
    /// `‖A₁X₁ᵏ + A₂X₂ᵏ − C‖∞`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Solved(Solution),
    NotInImage(Certificate),
    Unresolved(String),
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub outcome: Outcome,
    pub route: Route,
}

impl DecompositionResult {
    pub fn is_solved(&self) -> bool {
        matches!(self.outcome, Outcome::Solved(_))
    }

    pub fn is_not_in_image(&self) -> bool {
        matches!(self.outcome, Outcome::NotInImage(_))
    }

    pub fn solution(&self) -> Option<&Solution> {
        match &self.outcome {
            Outcome::Solved(s) => Some(s),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self.outcome {
            Outcome::Solved(_) => "solved",
            Outcome::NotInImage(_) => "not_in_image",
            Outcome::Unresolved(_) => "unresolved",
        }
    }
}

/// `‖A₁X₁ᵏ + A₂X₂ᵏ − C‖∞`.
pub fn residual(a1: &ExactMat, a2: &ExactMat, c: &ExactMat, x1: &ApproxMat, x2: &ApproxMat, k: u32) -> f64 {
    let p = x1.precision();
    let lhs = &(&a1.to_approx(p) * &x1.pow(k)) + &(&a2.to_approx(p) * &x2.pow(k));
    (&lhs - &c.to_approx(p)).norm_inf_f64()
}

/// Roots of `C̃ − JT` and `T`, moved back to the original coordinates and
/// checked against the original equation.
fn finish(inst: &ProblemInstance, red: &ReducedInstance, t: &ExactMat, route: Route) -> Result<DecompositionResult> {
    let tol = &inst.profile;
    let p = tol.precision_bits;
    let ct = red.target()?;
    let m = ct - &(&red.j * t);
    let y1 = matrix_kth_root(&m, inst.k, tol)?;
    let y2 = matrix_kth_root(t, inst.k, tol)?;
    let g = red.form.g.to_approx(p);
    let g_inv = red.form.g_inv.to_approx(p);
    let x1 = &(&g_inv * &y1) * &g;
    let x2 = &(&g_inv * &y2) * &g;
    let c = inst.target.as_ref().expect("target checked above");
    let res = residual(&inst.a1, &inst.a2, c, &x1, &x2, inst.k);
    if !(res <= tol.eps_residual) {
        return Err(Error::IllConditioned(format!("solution residual {res:e} exceeds tolerance via route {route}")));
    }
    Ok(DecompositionResult { outcome: Outcome::Solved(Solution { x1, x2, residual: res }), route })
}

fn not_in_image(cert: Certificate, route: Route) -> DecompositionResult {
    DecompositionResult { outcome: Outcome::NotInImage(cert), route }
}

/// Decomposes the target of `inst`.
///
/// Dispatch: `r₀ = 0` invertible route; `r₀ = 1` full nilpotent or one
/// nilpotent block; `n ∈ {3, 4}` with `r₀ ≥ 2` the low-dimension cases
/// (including the exact membership test when `n = 3` is not surjective);
/// otherwise Miller certificate, exact decision for `A₂ = 0`, structured
/// constructions and finally a seeded random search.
pub fn solve(inst: &ProblemInstance) -> Result<DecompositionResult> {
    let red = reduce(inst)?;
    red.target()?;
    solve_reduced(inst, &red)
}

fn solve_reduced(inst: &ProblemInstance, red: &ReducedInstance) -> Result<DecompositionResult> {
    let n = red.n();
    let r0 = red.r0();
    let k = inst.k;
    let v = verdict(n, k, r0)?;
    match r0 {
        0 => return finish(inst, red, &routes::invertible_t(red)?, Route::Invertible),
        1 if red.form.core_dim() == 0 => {
            return finish(inst, red, &routes::full_nilpotent_t(red.target()?, &inst.profile)?, Route::FullNilpotent)
        }
        1 => return finish(inst, red, &routes::one_block_t(red, k, &inst.profile)?, Route::OneNilpotentBlock),
        _ => {}
    }
    if n == 3 && r0 == 2 && v.tag == VerdictTag::NotSurjective {
        return routes::membership_reduced(inst, red);
    }
    if (n == 3 || n == 4) && v.tag == VerdictTag::Surjective {
        return routes::low_dim_reduced(inst, red);
    }
    routes::general_reduced(inst, red)
}

/// Problem `X₁ᵏ + J X₂ᵏ = C` as an instance.
fn unit_instance(j: &ExactMat, c: &ExactMat, k: u32, tol: &ToleranceProfile) -> ProblemInstance {
    ProblemInstance::new(Mat::identity(j.n(), ()), j.clone(), k).with_target(c.clone()).with_profile(*tol)
}

fn scalar(v: i64) -> GaussianRational {
    GaussianRational::from_int(v)
}
