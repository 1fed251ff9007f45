use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arithmetic::{GaussianRational, Scalar, ToleranceProfile};
use crate::error::{Error, Result};
use crate::jordan::{CoreNilpotentForm, TailPermutation};
use crate::linalg::{
    char_poly, constrained_basis_completion, det, extend_to_basis, greedy_independent, inverse, rank, unit_vector,
    ExactMat, Mat,
};
use crate::powers::{is_kth_power, zero_partition_by_ranks};

use super::rowctl::{complete_t, RowControl};
use super::{
    finish, not_in_image, reduce, scalar, unit_instance, Certificate, DecompositionResult, Outcome, ProblemInstance,
    ReducedInstance, Route,
};

type G = GaussianRational;

/// Attempts of the structured sweeps before giving up.
const SWEEP_ATTEMPTS: u64 = 24;

fn ceil_div(n: usize, k: u32) -> usize {
    n.div_ceil(k as usize)
}

/// `C̃` seen through the tail permutation: `C^P = [[C₁₁, C₁₂], [C₂₁, C₂₂]]`
/// with `C₂₂` of size `r₀`, and `W` the span of its last `r₀` rows.
struct Blocks {
    tp: TailPermutation,
    cp: ExactMat,
    nr: usize,
    r0: usize,
    /// `dim W`.
    m: usize,
    rank21: usize,
    d: ExactMat,
}

impl Blocks {
    fn new(form: &CoreNilpotentForm, ct: &ExactMat, tol: &ToleranceProfile) -> Result<Self> {
        let n = ct.n();
        let tp = form.tail_permutation();
        let cp = tp.apply(ct);
        let r0 = form.r0();
        let nr = n - r0;
        let m = rank(&cp.block(nr, 0, r0, n), tol)?;
        let rank21 = if nr == 0 { 0 } else { rank(&cp.block(nr, 0, r0, nr), tol)? };
        let d = cp.block(nr, nr, r0, r0);
        Ok(Blocks { tp, cp, nr, r0, m, rank21, d })
    }

    fn n(&self) -> usize {
        self.cp.n()
    }

    fn c21_is_zero(&self) -> bool {
        self.rank21 == 0
    }

    fn bottom(&self) -> Vec<Vec<G>> {
        (self.nr..self.n()).map(|i| self.cp.row(i)).collect()
    }

    fn with_top(&self, top: &[Vec<G>]) -> ExactMat {
        let mut rows = top.to_vec();
        rows.extend(self.bottom());
        Mat::from_rows(rows, ()).expect("square by construction")
    }
}

/// `T` with `C̃ − JT = M` for the permuted choice `mt`, if one is a k-th power.
fn t_for(
    red: &ReducedInstance,
    blk: &Blocks,
    mt: &ExactMat,
    k: u32,
    invertible: bool,
    tol: &ToleranceProfile,
) -> Result<Option<ExactMat>> {
    let rc = RowControl::new(&red.form, tol)?;
    let forced = rc.forced_rows(red.target()?, &blk.tp.unapply(mt))?;
    complete_t(&forced, k, invertible, tol)
}

fn small_row(rng: &mut ChaCha8Rng, len: usize) -> Vec<G> {
    (0..len).map(|_| scalar(rng.gen_range(-2..=2))).collect()
}

fn add_scaled(row: &mut [G], other: &[G], s: &G) {
    for (a, b) in row.iter_mut().zip(other) {
        *a = a.clone() + b.clone() * s;
    }
}

// ---------------------------------------------------------------- r₀ = 0

pub(super) fn invertible_t(red: &ReducedInstance) -> Result<ExactMat> {
    let ct = red.target()?;
    let lambda = ct.shift_above_spectrum();
    let n = ct.n();
    let shifted = ct - &Mat::identity(n, ()).scale(&scalar(lambda));
    let core_inv = inverse(&red.form.core, &ToleranceProfile::default())?;
    Ok(&core_inv * &shifted)
}

/// `X₁ = λ^{1/k} I`, `X₂ = (B⁻¹(C − λI))^{1/k}` with `λ = 1 + ⌈‖C‖∞⌉`.
pub fn solve_invertible(b: &ExactMat, c: &ExactMat, k: u32, tol: &ToleranceProfile) -> Result<DecompositionResult> {
    let inst = unit_instance(b, c, k, tol);
    let red = reduce(&inst)?;
    if red.r0() != 0 {
        return Err(Error::PreconditionViolated("B must be invertible".into()));
    }
    finish(&inst, &red, &invertible_t(&red)?, Route::Invertible)
}

// ------------------------------------------------------- J = J_{0,n}

/// `T` for `C − J_{0,n}T` invertible (last row of `C` nonzero) or with a
/// single simple zero eigenvalue (last row zero).
pub(super) fn full_nilpotent_t(c: &ExactMat, tol: &ToleranceProfile) -> Result<ExactMat> {
    let n = c.n();
    let mut t = ExactMat::zeros(n, n, ());
    if n == 0 {
        return Ok(t);
    }
    let rows = c.to_rows();
    if !rows[n - 1].iter().all(Scalar::is_zero) {
        let order: Vec<usize> = (0..n).rev().collect();
        let basis = greedy_independent(&rows, &order, n, tol)?;
        let others: Vec<usize> = (0..n).filter(|i| !basis.contains(i)).collect();
        let coords: Vec<usize> = others.iter().map(|i| i + 1).collect();
        let chosen: Vec<Vec<G>> = basis.iter().map(|&i| rows[i].clone()).collect();
        let fill = constrained_basis_completion(&chosen, n, &coords, (), tol)?;
        t.set_row(0, &unit_vector(n, 0, ()));
        for (&row, v) in coords.iter().zip(&fill) {
            t.set_row(row, v);
        }
    } else {
        let lambda = scalar(c.block(0, 0, n - 1, n - 1).shift_above_spectrum());
        t.set(0, n - 1, scalar(1));
        for i in 1..n {
            t.set(i, i - 1, lambda.clone());
        }
    }
    Ok(t)
}

pub fn solve_full_nilpotent(c: &ExactMat, k: u32, tol: &ToleranceProfile) -> Result<DecompositionResult> {
    let j = Mat::jordan_block(&G::default(), c.n(), ());
    let inst = unit_instance(&j, c, k, tol);
    let red = reduce(&inst)?;
    finish(&inst, &red, &full_nilpotent_t(red.target()?, tol)?, Route::FullNilpotent)
}

// ------------------------------------------------- one nilpotent block

/// First `λ = 1, 2, …` with `det(C₁₁ − λᵏ J′) ≠ 0`; returns `(λ, λᵏ)`.
pub fn choose_mu(c11: &ExactMat, jp: &ExactMat, k: u32) -> Result<(i64, G)> {
    if det(jp).is_zero() {
        return Err(Error::PreconditionViolated("J′ must be invertible".into()));
    }
    for lambda in 1..=(c11.n() as i64 + 1) {
        let mu = scalar(lambda).pow(k);
        if !det(&(c11 - &jp.scale(&mu))).is_zero() {
            return Ok((lambda, mu));
        }
    }
    Err(Error::InvariantViolation("determinant vanished at more points than its degree".into()))
}

/// `T = [[μI, Q], [0, T′]]` with `Q = N′⁻¹C₁₂` and `T′` from the full
/// nilpotent construction on `C₂₂`.
pub(super) fn one_block_t(red: &ReducedInstance, k: u32, tol: &ToleranceProfile) -> Result<ExactMat> {
    let ct = red.target()?;
    let n = ct.n();
    let c0 = red.form.core_dim();
    let n0 = n - c0;
    let core = &red.form.core;
    let (_, mu) = choose_mu(&ct.block(0, 0, c0, c0), core, k)?;
    let q = &inverse(core, tol)? * &ct.block(0, c0, c0, n0);
    let tail = full_nilpotent_t(&ct.block(c0, c0, n0, n0), tol)?;
    let mut t = ExactMat::zeros(n, n, ());
    t.set_block(0, 0, &Mat::identity(c0, ()).scale(&mu));
    t.set_block(0, c0, &q);
    t.set_block(c0, c0, &tail);
    Ok(t)
}

pub fn solve_one_nilpotent_block(j: &ExactMat, c: &ExactMat, k: u32, tol: &ToleranceProfile) -> Result<DecompositionResult> {
    let inst = unit_instance(j, c, k, tol);
    let red = reduce(&inst)?;
    if red.r0() != 1 || red.form.core_dim() == 0 {
        return Err(Error::PreconditionViolated(
            "needs exactly one nilpotent block and at least one invertible block".into(),
        ));
    }
    finish(&inst, &red, &one_block_t(&red, k, tol)?, Route::OneNilpotentBlock)
}

// ------------------------------------------------------ rank criterion

/// Top rows `c̃_{j_i} + η_i e_{j_i}` for a selection `j_i` of the `W` rows
/// with independent `C₂₁` parts, then rows completing those parts to a basis.
/// Each attempt doubles `η` and, after the first, perturbs the completing
/// rows by seeded small multiples of the selected rows plus a random tail
/// part. Accepted when the coefficient of `z^{r₀−m}` in the characteristic
/// polynomial is nonzero and `T` can be made invertible.
fn rank_criterion_in(red: &ReducedInstance, blk: &Blocks, k: u32, tol: &ToleranceProfile) -> Result<Option<ExactMat>> {
    if blk.rank21 != blk.m {
        return Err(Error::PreconditionViolated(format!(
            "rank(C₂₁) = {} differs from dim W = {}",
            blk.rank21, blk.m
        )));
    }
    let (n, nr, r0, m) = (blk.n(), blk.nr, blk.r0, blk.m);
    let w = blk.bottom();
    let pi1: Vec<Vec<G>> = w.iter().map(|r| r[..nr].to_vec()).collect();
    let sel = greedy_independent(&pi1, &(0..r0).collect::<Vec<_>>(), nr, tol)?;
    let base: Vec<Vec<G>> = sel.iter().map(|&s| pi1[s].clone()).collect();
    let comp = extend_to_basis(&base, nr, (), tol)?;
    for attempt in 0..SWEEP_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt);
        let scale = scalar(1i64 << attempt.min(40));
        let mut top = Vec::with_capacity(nr);
        for (i, &s) in sel.iter().enumerate() {
            let mut row = w[s].clone();
            row[nr + s] = row[nr + s].clone() + scalar(i as i64 + 1) * &scale;
            top.push(row);
        }
        for &u in &comp {
            let mut row = unit_vector::<G>(n, u, ());
            if attempt > 0 {
                for &s in &sel {
                    add_scaled(&mut row[..nr], &pi1[s], &scalar(rng.gen_range(-2..=2)));
                }
                row[nr..].clone_from_slice(&small_row(&mut rng, r0));
            }
            top.push(row);
        }
        let mt = blk.with_top(&top);
        if char_poly(&mt)[r0 - m].is_zero() {
            continue;
        }
        if let Some(t) = t_for(red, blk, &mt, k, true, tol)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

fn blocks(red: &ReducedInstance, tol: &ToleranceProfile) -> Result<Blocks> {
    Blocks::new(&red.form, red.target()?, tol)
}

/// An invertible `T` such that `C − JT` has nonzero coefficient of
/// `z^{r₀−m}`, so all its nilpotent blocks have size one.
pub fn build_rank_criterion_t(j: &ExactMat, c: &ExactMat, tol: &ToleranceProfile) -> Result<ExactMat> {
    let red = reduce(&unit_instance(j, c, 2, tol))?;
    let blk = blocks(&red, tol)?;
    let t = rank_criterion_in(&red, &blk, 2, tol)?
        .ok_or_else(|| Error::InvariantViolation("rank criterion sweep exhausted".into()))?;
    Ok(red.form.from_reduced_coords(&t))
}

pub fn solve_rank_criterion(j: &ExactMat, c: &ExactMat, k: u32, tol: &ToleranceProfile) -> Result<DecompositionResult> {
    let inst = unit_instance(j, c, k, tol);
    let red = reduce(&inst)?;
    let blk = blocks(&red, tol)?;
    let t = rank_criterion_in(&red, &blk, k, tol)?
        .ok_or_else(|| Error::InvariantViolation("rank criterion sweep exhausted".into()))?;
    finish(&inst, &red, &t, Route::RankCriterion)
}

// ------------------------------------------------ other constructions

/// `dim W = r₀`: complete the `W` rows to a basis so `C − JT` is invertible.
fn full_row_space_in(red: &ReducedInstance, blk: &Blocks, k: u32, tol: &ToleranceProfile) -> Result<Option<ExactMat>> {
    let n = blk.n();
    let w = blk.bottom();
    let comp = extend_to_basis(&w, n, (), tol)?;
    for attempt in 0..SWEEP_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt);
        let top: Vec<Vec<G>> = comp
            .iter()
            .map(|&u| {
                let mut row = unit_vector::<G>(n, u, ());
                if attempt > 0 {
                    row[u] = scalar(rng.gen_range(1..=3));
                    for r in &w {
                        add_scaled(&mut row, r, &scalar(rng.gen_range(-2..=2)));
                    }
                }
                row
            })
            .collect();
        let mt = blk.with_top(&top);
        if det(&mt).is_zero() {
            continue;
        }
        if let Some(t) = t_for(red, blk, &mt, k, false, tol)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// `C̃₁₁ − νI` in the top rows with `ν` above the spectrum of `C̃₁₁`; the
/// nilpotent structure of the result is that of `C₂₂` when `C₂₁ = 0`.
fn shift_in(red: &ReducedInstance, blk: &Blocks, k: u32, tol: &ToleranceProfile) -> Result<Option<ExactMat>> {
    let nr = blk.nr;
    let nu = scalar(blk.cp.block(0, 0, nr, nr).shift_above_spectrum());
    let mut mt = blk.cp.clone();
    for i in 0..nr {
        mt.set(i, i, mt.get(i, i).clone() - &nu);
    }
    if !is_kth_power(&mt, k, tol)?.0 {
        return Ok(None);
    }
    t_for(red, blk, &mt, k, false, tol)
}

/// Zero top rows, so `C − JT ∼ 0 ⊕ C₂₂` when `C₂₁ = 0`.
fn absorb_in(red: &ReducedInstance, blk: &Blocks, k: u32, tol: &ToleranceProfile) -> Result<Option<ExactMat>> {
    let top = vec![vec![G::default(); blk.n()]; blk.nr];
    let mt = blk.with_top(&top);
    if !is_kth_power(&mt, k, tol)?.0 {
        return Ok(None);
    }
    t_for(red, blk, &mt, k, false, tol)
}

fn expect_t(t: Option<ExactMat>, route: Route) -> Result<ExactMat> {
    t.ok_or_else(|| Error::InvariantViolation(format!("construction {route} found no admissible T")))
}

// ---------------------------------------------------- n ∈ {3, 4}

fn is_nilpotent(d: &ExactMat) -> bool {
    d.pow(d.n() as u32).is_zero()
}

/// Shared case split for `r₀ = 2` in dimension 3 or 4. Returns `None` in the
/// one case with no construction: `C₂₁ = 0` and `C₂₂` nonzero nilpotent
/// when the Miller root is not allowed.
fn low_dim_case(red: &ReducedInstance, blk: &Blocks, k: u32, absorb: bool, tol: &ToleranceProfile) -> Result<Option<(Route, ExactMat)>> {
    let (route, t) = if blk.m == blk.r0 {
        (Route::FullRowSpace, full_row_space_in(red, blk, k, tol)?)
    } else if blk.m == 0 {
        (Route::ScalarShift, shift_in(red, blk, k, tol)?)
    } else if blk.rank21 == blk.m {
        (Route::RankCriterion, rank_criterion_in(red, blk, k, tol)?)
    } else if is_nilpotent(&blk.d) {
        if !absorb {
            return Ok(None);
        }
        (Route::MillerAbsorb, absorb_in(red, blk, k, tol)?)
    } else {
        (Route::ScalarShift, shift_in(red, blk, k, tol)?)
    };
    Ok(Some((route, expect_t(t, route)?)))
}

pub(super) fn low_dim_reduced(inst: &ProblemInstance, red: &ReducedInstance) -> Result<DecompositionResult> {
    let tol = &inst.profile;
    let blk = blocks(red, tol)?;
    let (route, t) = low_dim_case(red, &blk, inst.k, true, tol)?.expect("absorb always allowed here");
    finish(inst, red, &t, route)
}

fn check_low_dim_regime(n: usize, r0: usize, k: u32) -> Result<()> {
    if !(n == 3 || n == 4) || r0 != 2 || n <= k as usize {
        return Err(Error::OutOfRegime(format!(
            "low-dimension constructions need n ∈ {{3,4}}, r₀ = 2 and n > k(r₀ − 1); got n={n} r₀={r0} k={k}"
        )));
    }
    Ok(())
}

pub fn solve_low_dim(j: &ExactMat, c: &ExactMat, k: u32, tol: &ToleranceProfile) -> Result<DecompositionResult> {
    let inst = unit_instance(j, c, k, tol);
    let red = reduce(&inst)?;
    check_low_dim_regime(red.n(), red.r0(), k)?;
    low_dim_reduced(&inst, &red)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    InImage,
    NotInImage,
}

fn in_excluded_set(blk: &Blocks) -> bool {
    blk.c21_is_zero() && !blk.d.is_zero() && blk.d.pow(2).is_zero()
}

fn check_n3_regime(n: usize, r0: usize, k: u32) -> Result<()> {
    if n != 3 || r0 != 2 || k < 3 {
        return Err(Error::OutOfRegime(format!("membership test needs n = 3, r₀ = 2, k ≥ 3; got n={n} r₀={r0} k={k}")));
    }
    Ok(())
}

/// Image membership for `n = 3`, `r₀ = 2`, `k ≥ 3`.
///
/// The test runs in the core-nilpotent coordinates of `j`, which coincide
/// with its Jordan coordinates (for a matrix already in Jordan form they are
/// the given ones). The target is outside the image exactly when, there,
/// `C = [[μ, u], [0, M]]` with `M ≠ 0` and `M² = 0`.
pub fn membership_n3(j: &ExactMat, c: &ExactMat, k: u32, tol: &ToleranceProfile) -> Result<Membership> {
    let red = reduce(&unit_instance(j, c, k, tol))?;
    check_n3_regime(red.n(), red.r0(), k)?;
    let blk = blocks(&red, tol)?;
    Ok(if in_excluded_set(&blk) { Membership::NotInImage } else { Membership::InImage })
}

pub(super) fn membership_reduced(inst: &ProblemInstance, red: &ReducedInstance) -> Result<DecompositionResult> {
    let tol = &inst.profile;
    check_n3_regime(red.n(), red.r0(), inst.k)?;
    let blk = blocks(red, tol)?;
    if in_excluded_set(&blk) {
        return Ok(not_in_image(Certificate::MillerBound { block: 2, bound: ceil_div(3, inst.k) }, Route::Membership));
    }
    let (route, t) = low_dim_case(red, &blk, inst.k, false, tol)?
        .ok_or_else(|| Error::InvariantViolation("target outside the excluded set has no construction".into()))?;
    finish(inst, red, &t, route)
}

// ------------------------------------------------------ general path

pub(super) fn general_reduced(inst: &ProblemInstance, red: &ReducedInstance) -> Result<DecompositionResult> {
    let tol = &inst.profile;
    let k = inst.k;
    let n = red.n();
    let ct = red.target()?;
    let blk = blocks(red, tol)?;

    if blk.c21_is_zero() {
        let block = zero_partition_by_ranks(&blk.d, tol)?.largest();
        let bound = ceil_div(n, k);
        if block > bound {
            return Ok(not_in_image(Certificate::MillerBound { block, bound }, Route::MillerCertificate));
        }
    }
    if red.j.is_zero() {
        let (ok, _) = is_kth_power(ct, k, tol)?;
        if ok {
            return finish(inst, red, &ExactMat::zeros(n, n, ()), Route::ZeroCoefficient);
        }
        let partition = zero_partition_by_ranks(ct, tol)?.into_vec();
        return Ok(not_in_image(Certificate::NotAPower { partition }, Route::ZeroCoefficient));
    }
    if blk.m == blk.r0 {
        if let Some(t) = full_row_space_in(red, &blk, k, tol)? {
            return finish(inst, red, &t, Route::FullRowSpace);
        }
    }
    if blk.rank21 == blk.m {
        if let Some(t) = rank_criterion_in(red, &blk, k, tol)? {
            return finish(inst, red, &t, Route::RankCriterion);
        }
    }
    if blk.c21_is_zero() {
        if let Some(t) = shift_in(red, &blk, k, tol)? {
            return finish(inst, red, &t, Route::ScalarShift);
        }
        if let Some(t) = absorb_in(red, &blk, k, tol)? {
            return finish(inst, red, &t, Route::MillerAbsorb);
        }
    }
    if let Some(t) = random_search(red, k, inst.retries, tol)? {
        return finish(inst, red, &t, Route::RandomSearch);
    }
    Ok(DecompositionResult {
        outcome: Outcome::Unresolved(format!(
            "no construction applies and {} random attempts found no solution",
            inst.retries
        )),
        route: Route::Exhausted,
    })
}

fn random_t(rng: &mut ChaCha8Rng, n: usize) -> ExactMat {
    Mat::from_fn(n, n, (), |_, _| scalar(rng.gen_range(-3..=3)))
}

/// Seeded random `T`, accepted when both `C̃ − JT` and `T` are k-th powers.
fn random_search(red: &ReducedInstance, k: u32, retries: usize, tol: &ToleranceProfile) -> Result<Option<ExactMat>> {
    let ct = red.target()?;
    let n = ct.n();
    let mut rng = ChaCha8Rng::seed_from_u64(tol.seed);
    for _ in 0..retries {
        let t = random_t(&mut rng, n);
        let m = ct - &(&red.j * &t);
        if is_kth_power(&m, k, tol)?.0 && is_kth_power(&t, k, tol)?.0 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

// ----------------------------------------------- non-surjectivity witness

/// Outcome of testing one `T` against a witness target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessCheck {
    pub is_kth_power: bool,
    pub largest_zero_block: usize,
}

/// Checks that `C − JT` is never a k-th power for the witness `C`.
#[derive(Debug, Clone)]
pub struct WitnessChecker {
    pub j: ExactMat,
    pub c: ExactMat,
    pub k: u32,
    pub r0: usize,
    /// `⌈n/k⌉`, the largest nilpotent block a k-th power can have.
    pub bound: usize,
}

impl WitnessChecker {
    pub fn check(&self, t: &ExactMat, tol: &ToleranceProfile) -> Result<WitnessCheck> {
        let m = &self.c - &(&self.j * t);
        let largest_zero_block = zero_partition_by_ranks(&m, tol)?.largest();
        let is_kth_power = is_kth_power(&m, self.k, tol)?.0;
        Ok(WitnessCheck { is_kth_power, largest_zero_block })
    }

    /// Whether one check agrees with the obstruction: no k-th power, and a
    /// nilpotent block of size at least `r₀` beyond the bound.
    pub fn holds(&self, c: &WitnessCheck) -> bool {
        !c.is_kth_power && c.largest_zero_block >= self.r0 && c.largest_zero_block > self.bound
    }

    /// Number of seeded random `T` (entries in `[-3, 3]`) for which the
    /// obstruction holds.
    pub fn random_trials(&self, trials: usize, seed: u64, tol: &ToleranceProfile) -> Result<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut held = 0;
        for _ in 0..trials {
            let t = random_t(&mut rng, self.j.n());
            if self.holds(&self.check(&t, tol)?) {
                held += 1;
            }
        }
        Ok(held)
    }
}

/// Target with `C^P₂₁ = 0` and `C^P₂₂ = J_{0,r₀}` in the core-nilpotent
/// coordinates of `j`, pulled back to the coordinates of `j`.
pub fn non_surjectivity_witness(j: &ExactMat, k: u32, tol: &ToleranceProfile) -> Result<(ExactMat, WitnessChecker)> {
    let n = j.n();
    let form = CoreNilpotentForm::from_matrix(j, tol)?;
    let r0 = form.r0();
    if r0 < 2 || n > k as usize * (r0 - 1) {
        return Err(Error::OutOfRegime(format!("witness needs r₀ ≥ 2 and n ≤ k(r₀ − 1); got n={n} k={k} r₀={r0}")));
    }
    let mut cp = ExactMat::zeros(n, n, ());
    cp.set_block(n - r0, n - r0, &Mat::jordan_block(&G::default(), r0, ()));
    let c = form.from_reduced_coords(&form.tail_permutation().unapply(&cp));
    let checker = WitnessChecker { j: j.clone(), c: c.clone(), k, r0, bound: ceil_div(n, k) };
    Ok((c, checker))
}
