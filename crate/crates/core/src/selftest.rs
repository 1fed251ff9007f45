//! The acceptance suite. Every criterion runs at the default 256-bit profile,
//! checks its own tolerance and fails when it exceeds its time limit.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arithmetic::{GaussianRational, Scalar, ToleranceProfile};
use crate::decomposer::{
    membership_n3, non_surjectivity_witness, residual, solve, verdict, DecompositionResult, Membership,
    ProblemInstance, VerdictTag,
};
use crate::jordan::{jordan_form, JordanStructure};
use crate::linalg::{det, distance_inf, inverse, rank, ExactMat, Mat};
use crate::powers::{is_kth_power, matrix_kth_root, miller_power};
use crate::sampling::{self, TailShape};

type G = GaussianRational;
type Outcome = std::result::Result<String, String>;

/// `2^{-128}`, the residual bound at 256 bits.
const RESIDUAL_BOUND: f64 = 2.938_735_877_055_719e-39;

pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub limit: Duration,
    check: fn() -> Outcome,
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<22} {:>8.2}s / {:>3}s  {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.title,
            self.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, title, secs, check| Criterion { id, title, limit: Duration::from_secs(secs), check };
    vec![
        c("table_n3", "verdicts for n = 3 match the reference table", 1, table_n3),
        c("table_n4", "verdicts for n = 4 match the reference table", 1, table_n4),
        c("miller_oracle", "Miller partition equals rank-of-powers count", 5, miller_oracle),
        c("r0_at_most_one", "r0 <= 1 instances are solved", 60, r0_at_most_one),
        c("n3_k2_r0_2", "n = 3, k = 2, r0 = 2 targets are solved", 30, n3_k2),
        c("n3_membership", "n = 3, k >= 3, r0 = 2 membership is consistent", 120, n3_membership),
        c("n4_cells", "n = 4 surjective cells solve, others have witnesses", 120, n4_cells),
        c("root_roundtrip", "k-th roots of invertible matrices", 30, root_roundtrip),
        c("jordan_roundtrip", "planted Jordan structures are recovered", 30, jordan_roundtrip),
        c("conjugation", "outcomes are invariant under conjugation", 60, conjugation),
    ]
}

pub fn run(c: &Criterion) -> CriterionReport {
    let start = Instant::now();
    let outcome = (c.check)();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if elapsed > c.limit {
        passed = false;
        detail = format!("time limit exceeded; {detail}");
    }
    CriterionReport { id: c.id, title: c.title, passed, detail, elapsed, limit: c.limit }
}

pub fn run_all() -> Vec<CriterionReport> {
    criteria().iter().map(run).collect()
}

fn ok<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn jordan(blocks: &[(G, usize)]) -> ExactMat {
    sampling::jordan_matrix(blocks)
}

fn zero() -> G {
    G::default()
}

/// Gaussian-rational matrix with entries of height at most 10, resampled until invertible.
fn invertible_gaussian(rng: &mut ChaCha8Rng, n: usize) -> ExactMat {
    loop {
        let m = sampling::matrix(rng, n, 10, true);
        if !det(&m).is_zero() {
            return m;
        }
    }
}

/// Nonzero Gaussian rational of height at most 10.
fn nonzero_gaussian(rng: &mut ChaCha8Rng) -> G {
    loop {
        let g = sampling::gaussian(rng, 10, true);
        if !g.is_zero() {
            return g;
        }
    }
}

/// Random Jordan matrix of size `n` with exactly `r0` nilpotent blocks.
fn jordan_with_r0(rng: &mut ChaCha8Rng, n: usize, r0: usize) -> ExactMat {
    loop {
        let parts = sampling::partition(rng, n);
        if parts.len() < r0 {
            continue;
        }
        let mut idx: Vec<usize> = (0..parts.len()).collect();
        for i in (1..idx.len()).rev() {
            idx.swap(i, rng.gen_range(0..=i));
        }
        let zeros = &idx[..r0];
        let blocks: Vec<(G, usize)> = parts
            .iter()
            .enumerate()
            .map(|(i, &s)| (if zeros.contains(&i) { zero() } else { G::from_int(rng.gen_range(1..=3)) }, s))
            .collect();
        return jordan(&blocks);
    }
}

fn check_solved(a1: &ExactMat, a2: &ExactMat, c: &ExactMat, k: u32, r: &DecompositionResult) -> std::result::Result<(), String> {
    let s = r.solution().ok_or_else(|| format!("{} via {} for k={k}, C={c:?}", r.status(), r.route))?;
    let res = residual(a1, a2, c, &s.x1, &s.x2, k);
    ensure(res <= RESIDUAL_BOUND, || format!("residual {res:e} via {}", r.route))
}

fn solve_pair(a1: &ExactMat, a2: &ExactMat, c: &ExactMat, k: u32) -> std::result::Result<DecompositionResult, String> {
    ok(solve(&ProblemInstance::new(a1.clone(), a2.clone(), k).with_target(c.clone())))
}

fn random_tail(rng: &mut ChaCha8Rng, b: &ExactMat, c: &ExactMat) -> ExactMat {
    let shape = [TailShape::ClearLeft, TailShape::Nilpotent, TailShape::Zero][rng.gen_range(0..3)];
    sampling::tail_degenerate(rng, b, c, shape)
}

// ------------------------------------------------------------------ tables

fn table_check(n: usize, rows: &[&[bool]], columns: impl Fn(u32) -> usize) -> Outcome {
    let mut cells = 0;
    for (r0, row) in rows.iter().enumerate() {
        for k in 2..=5u32 {
            let v = ok(verdict(n, k, r0))?;
            let got = match v.tag {
                VerdictTag::Surjective => true,
                VerdictTag::NotSurjective => false,
                VerdictTag::Unknown => return Err(format!("unknown verdict at r0={r0} k={k}")),
            };
            ensure(got == row[columns(k)], || format!("mismatch at r0={r0} k={k}"))?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells agree"))
}

fn table_n3() -> Outcome {
    table_check(3, &[&[true, true], &[true, true], &[true, false]], |k| usize::from(k >= 3))
}

fn table_n4() -> Outcome {
    table_check(
        4,
        &[&[true, true, true], &[true, true, true], &[true, true, false], &[false, false, false]],
        |k| (k as usize - 2).min(2),
    )
}

// ---------------------------------------------------------------- Miller

/// Block sizes of a nilpotent matrix from the ranks of its powers.
fn blocks_from_ranks(m: &ExactMat) -> std::result::Result<Vec<usize>, String> {
    let n = m.n();
    let mut ranks = vec![n];
    let mut pw = ExactMat::exact_identity(n);
    while *ranks.last().expect("nonempty") > 0 {
        pw = &pw * m;
        ranks.push(ok(rank(&pw, &tol()))?);
    }
    let mut sizes = Vec::new();
    for s in 1..ranks.len() {
        let at_least = ranks[s - 1] - ranks[s];
        let longer = if s + 1 < ranks.len() { ranks[s] - ranks[s + 1] } else { 0 };
        sizes.extend(std::iter::repeat_n(s, at_least - longer));
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sizes)
}

fn miller_oracle() -> Outcome {
    let mut cases = 0;
    for k in 2..=6u32 {
        for n in 1..=12 {
            let j = Mat::jordan_block(&zero(), n, ());
            let want = blocks_from_ranks(&j.pow(k))?;
            ensure(miller_power(n, k).into_vec() == want, || format!("n={n} k={k}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (n, k) pairs agree"))
}

// ----------------------------------------------------------- constructive

fn r0_at_most_one() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let k = rng.gen_range(2..=4);
        let parts = sampling::partition(&mut rng, n);
        let zero_at = if rng.gen_bool(0.7) { Some(rng.gen_range(0..parts.len())) } else { None };
        let blocks: Vec<(G, usize)> = parts
            .iter()
            .enumerate()
            .map(|(i, &s)| (if Some(i) == zero_at { zero() } else { nonzero_gaussian(&mut rng) }, s))
            .collect();
        let (a2, _) = sampling::conjugate(&mut rng, &jordan(&blocks), 2);
        let a1 = invertible_gaussian(&mut rng, n);
        let c = sampling::matrix(&mut rng, n, 10, true);
        check_solved(&a1, &a2, &c, k, &solve_pair(&a1, &a2, &c, k)?)?;
    }
    Ok("200 instances solved".into())
}

fn n3_forms(rng: &mut ChaCha8Rng) -> Vec<ExactMat> {
    vec![jordan(&[(zero(), 2), (zero(), 1)]), jordan(&[(nonzero_gaussian(rng), 1), (zero(), 1), (zero(), 1)])]
}

fn n3_k2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let id = ExactMat::exact_identity(3);
    let forms = n3_forms(&mut rng);
    let mut solved = 0;
    for i in 0..100 {
        let j = &forms[i % 2];
        let c = sampling::matrix(&mut rng, 3, 10, true);
        check_solved(&id, j, &c, 2, &solve_pair(&id, j, &c, 2)?)?;
        solved += 1;
    }
    for j in &forms {
        for shape in [TailShape::ClearLeft, TailShape::Nilpotent, TailShape::Zero] {
            for _ in 0..10 {
                let c = sampling::matrix(&mut rng, 3, 10, true);
                let c = sampling::tail_degenerate(&mut rng, j, &c, shape);
                check_solved(&id, j, &c, 2, &solve_pair(&id, j, &c, 2)?)?;
                solved += 1;
            }
        }
    }
    Ok(format!("{solved} targets solved"))
}

fn n3_membership() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let id = ExactMat::exact_identity(3);
    let forms = n3_forms(&mut rng);
    let mut e23 = ExactMat::exact_zeros(3);
    e23.set(1, 2, G::from_int(1));
    let (mut inside, mut outside) = (0, 0);
    for i in 0..=200 {
        let j = &forms[i % 2];
        let k = rng.gen_range(3..=5);
        let c = if i == 200 {
            e23.clone()
        } else {
            let c = sampling::matrix(&mut rng, 3, 10, true);
            if rng.gen_bool(0.5) { random_tail(&mut rng, j, &c) } else { c }
        };
        match ok(membership_n3(j, &c, k, &tol()))? {
            Membership::InImage => {
                check_solved(&id, j, &c, k, &solve_pair(&id, j, &c, k)?)?;
                inside += 1;
            }
            Membership::NotInImage => {
                for _ in 0..100 {
                    let t = Mat::from_fn(3, 3, (), |_, _| sampling::gaussian(&mut rng, 3, true));
                    let power = ok(is_kth_power(&(&c - &(j * &t)), k, &tol()))?.0;
                    ensure(!power, || format!("C - JT is a {k}-th power for C={c:?}, T={t:?}"))?;
                }
                outside += 1;
            }
        }
    }
    ensure(outside > 0, || "no target outside the image was sampled".into())?;
    Ok(format!("{inside} in the image and solved, {outside} outside with 100 random T each"))
}

fn n4_cells() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let id = ExactMat::exact_identity(4);
    let (mut solved, mut witnesses) = (0, 0);
    for r0 in 0..=3 {
        for k in 2..=5u32 {
            if ok(verdict(4, k, r0))?.tag == VerdictTag::Surjective {
                for _ in 0..100 {
                    let j = jordan_with_r0(&mut rng, 4, r0);
                    let c = sampling::matrix(&mut rng, 4, 10, true);
                    let c = if r0 >= 2 && rng.gen_bool(0.5) { random_tail(&mut rng, &j, &c) } else { c };
                    check_solved(&id, &j, &c, k, &solve_pair(&id, &j, &c, k)?)?;
                    solved += 1;
                }
            } else {
                for _ in 0..4 {
                    let j = jordan_with_r0(&mut rng, 4, r0);
                    let (c, checker) = ok(non_surjectivity_witness(&j, k, &tol()))?;
                    let held = ok(checker.random_trials(100, rng.gen(), &tol()))?;
                    ensure(held == 100, || format!("witness for r0={r0} k={k} failed {} of 100 trials", 100 - held))?;
                    let r = solve_pair(&id, &j, &c, k)?;
                    ensure(r.is_not_in_image(), || format!("witness reported {} via {}", r.status(), r.route))?;
                    witnesses += 1;
                }
            }
        }
    }
    Ok(format!("{solved} targets solved in surjective cells, {witnesses} witnesses checked"))
}

// ---------------------------------------------------------- roots, Jordan

fn root_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(2..=5);
        let m = invertible_gaussian(&mut rng, n);
        let x = ok(matrix_kth_root(&m, k, &tol()))?;
        let res = distance_inf(&x.pow(k), &m);
        ensure(res <= RESIDUAL_BOUND, || format!("residual {res:e} for n={n} k={k}"))?;
        worst = worst.max(res);
    }
    Ok(format!("200 roots, worst residual {worst:e}"))
}

fn exact_blocks(s: &JordanStructure) -> Option<Vec<(String, usize)>> {
    let mut v: Vec<(String, usize)> =
        s.blocks.iter().map(|b| b.exact.as_ref().map(|e| (e.to_string(), b.size))).collect::<Option<_>>()?;
    v.sort();
    Some(v)
}

fn jordan_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let blocks: Vec<(G, usize)> = sampling::partition(&mut rng, n)
            .into_iter()
            .map(|s| (G::from_int(rng.gen_range(-3..=3)), s))
            .collect();
        let planted = JordanStructure::from_exact(&blocks, 256);
        let g = loop {
            let g = sampling::matrix(&mut rng, n, 4, false);
            if !det(&g).is_zero() {
                break g;
            }
        };
        let b = &(&g * &jordan(&blocks)) * &ok(inverse(&g, &tol()))?;
        let d = ok(jordan_form(&b, &tol()))?;
        ensure(exact_blocks(&d.structure) == exact_blocks(&planted), || {
            format!("planted {blocks:?}, recovered {:?}", exact_blocks(&d.structure))
        })?;
        let res = distance_inf(&(&(&d.p * &d.j) * &d.p_inv), &b);
        ensure(res <= RESIDUAL_BOUND, || format!("similarity residual {res:e}"))?;
    }
    Ok("100 planted structures recovered".into())
}

// ------------------------------------------------------------ equivariance

fn conjugation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut counts = [0usize; 3];
    for _ in 0..50 {
        let n = rng.gen_range(2..=4);
        let k = rng.gen_range(2..=4);
        let r0 = rng.gen_range(0..=n.min(3));
        let j = jordan_with_r0(&mut rng, n, r0);
        let a1 = invertible_gaussian(&mut rng, n);
        let a2 = &a1 * &j;
        let c = if r0 >= 2 && n <= k as usize * (r0 - 1) && rng.gen_bool(0.5) {
            &a1 * &ok(non_surjectivity_witness(&j, k, &tol()))?.0
        } else {
            sampling::matrix(&mut rng, n, 5, true)
        };
        let g = sampling::invertible(&mut rng, n, 2);
        let g_inv = ok(inverse(&g, &tol()))?;
        let conj = |m: &ExactMat| &(&g * m) * &g_inv;
        let inst = |a1: ExactMat, a2: ExactMat, c: ExactMat| {
            ProblemInstance::new(a1, a2, k).with_target(c).with_retries(16)
        };
        let before = ok(solve(&inst(a1.clone(), a2.clone(), c.clone())))?;
        let after = ok(solve(&inst(conj(&a1), conj(&a2), conj(&c))))?;
        ensure(before.status() == after.status(), || {
            format!("{} via {} became {} via {}", before.status(), before.route, after.status(), after.route)
        })?;
        counts[usize::from(before.is_not_in_image()) + 2 * usize::from(!before.is_solved() && !before.is_not_in_image())] += 1;
    }
    Ok(format!("50 trials agree ({} solved, {} not in image, {} unresolved)", counts[0], counts[1], counts[2]))
}
