//! Seeded generators for random exact matrices, shared by the self-test and
//! the test suites.

use rand::Rng;

use crate::arithmetic::{GaussianRational, ToleranceProfile};
use crate::jordan::CoreNilpotentForm;
use crate::linalg::{det, inverse, ExactMat, Mat};

/// Gaussian rational with numerators in `[-bound, bound]` and denominators in
/// `[1, bound]`; the imaginary part is zero unless `complex` is set.
pub fn gaussian<R: Rng>(rng: &mut R, bound: i64, complex: bool) -> GaussianRational {
    let re = GaussianRational::ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound));
    if !complex {
        return re;
    }
    let im = GaussianRational::ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound));
    re + im * &GaussianRational::i()
}

pub fn matrix<R: Rng>(rng: &mut R, n: usize, bound: i64, complex: bool) -> ExactMat {
    Mat::from_fn(n, n, (), |_, _| gaussian(rng, bound, complex))
}

/// Small-integer matrix, resampled until invertible.
pub fn invertible<R: Rng>(rng: &mut R, n: usize, bound: i64) -> ExactMat {
    loop {
        let g = Mat::from_fn(n, n, (), |_, _| GaussianRational::from_int(rng.gen_range(-bound..=bound)));
        if !crate::arithmetic::Scalar::is_zero(&det(&g)) {
            return g;
        }
    }
}

/// `g M g⁻¹` for a random small-integer `g`; returns the conjugate and `g`.
pub fn conjugate<R: Rng>(rng: &mut R, m: &ExactMat, bound: i64) -> (ExactMat, ExactMat) {
    let g = invertible(rng, m.n(), bound);
    let g_inv = inverse(&g, &ToleranceProfile::default()).expect("invertible by construction");
    (&(&g * m) * &g_inv, g)
}

/// Jordan matrix `⊕ J_{λ,m}` from (eigenvalue, size) pairs.
pub fn jordan_matrix(blocks: &[(GaussianRational, usize)]) -> ExactMat {
    let bs: Vec<ExactMat> = blocks.iter().map(|(l, s)| Mat::jordan_block(l, *s, ())).collect();
    Mat::block_diag(&bs, ())
}

/// Random partition of `n` into parts, largest first.
pub fn partition<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// How `tail_degenerate` reshapes the tail rows of a target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailShape {
    /// `C₂₁ = 0`.
    ClearLeft,
    /// `C₂₁ = 0` and `C₂₂` strictly upper bidiagonal with nonzero superdiagonal.
    Nilpotent,
    /// `C₂₁ = 0` and `C₂₂ = 0`, so the span `W` of the tail rows is zero.
    Zero,
}

/// Reshapes the rows of `c` that no `T` can change in `C − BT`, seen in the
/// tail-permuted core-nilpotent coordinates of `b`.
pub fn tail_degenerate<R: Rng>(rng: &mut R, b: &ExactMat, c: &ExactMat, shape: TailShape) -> ExactMat {
    let tol = ToleranceProfile::default();
    let form = CoreNilpotentForm::from_matrix(b, &tol).expect("exact core-nilpotent form");
    let tp = form.tail_permutation();
    let n = b.n();
    let nr = n - form.r0();
    let mut cp = tp.apply(&form.to_reduced_coords(c));
    for i in nr..n {
        for j in 0..n {
            let v = match (j < nr, shape) {
                (true, _) => GaussianRational::default(),
                (false, TailShape::ClearLeft) => continue,
                (false, TailShape::Zero) => GaussianRational::default(),
                (false, TailShape::Nilpotent) if j == i + 1 => GaussianRational::from_int(rng.gen_range(1..=3)),
                (false, TailShape::Nilpotent) => GaussianRational::default(),
            };
            cp.set(i, j, v);
        }
    }
    form.from_reduced_coords(&tp.unapply(&cp))
}
