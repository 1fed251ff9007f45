use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arithmetic::{GaussianRational, Scalar, ToleranceProfile};
use crate::error::{Error, Result};
use crate::jordan::CoreNilpotentForm;
use crate::linalg::{extend_to_basis, inverse, unit_vector, ExactMat, Mat, RowSpan};
use crate::powers::is_kth_power;

type G = GaussianRational;

/// Which rows of `C − JT` a choice of `T` controls, for `J = N′ ⊕ (⊕ J_{0,m_s})`.
///
/// Rows of the invertible part are `c_i − (N′T)_i`, rows inside a nilpotent
/// block are `c_i − t_{i+1}` and the last row of each block is `c_i`
/// whatever `T` is. So any `M` agreeing with `C` on those last rows is
/// `C − JT` for a `T` fixed up to the first row of every nilpotent block.
#[derive(Debug, Clone)]
pub(crate) struct RowControl {
    pub n: usize,
    pub core_inv: ExactMat,
    /// First row of each nilpotent block.
    pub starts: Vec<usize>,
    /// Last row of each nilpotent block.
    pub lasts: Vec<usize>,
}

impl RowControl {
    pub fn new(form: &CoreNilpotentForm, tol: &ToleranceProfile) -> Result<Self> {
        let core_inv = inverse(&form.core, tol)?;
        let mut starts = Vec::new();
        let mut lasts = Vec::new();
        let mut at = form.core_dim();
        for &m in &form.zero_partition {
            starts.push(at);
            lasts.push(at + m - 1);
            at += m;
        }
        Ok(RowControl { n: form.n(), core_inv, starts, lasts })
    }

    pub fn core_dim(&self) -> usize {
        self.core_inv.n()
    }

    /// Rows of `T` forced by `M = C − JT`; `None` at the free rows.
    pub fn forced_rows(&self, c: &ExactMat, m: &ExactMat) -> Result<Vec<Option<Vec<G>>>> {
        let n = self.n;
        let d = c - m;
        for &l in &self.lasts {
            if !d.row_slice(l).iter().all(Scalar::is_zero) {
                return Err(Error::InvariantViolation(format!("row {l} of C − JT cannot be changed by T")));
            }
        }
        let mut rows: Vec<Option<Vec<G>>> = vec![None; n];
        let c0 = self.core_dim();
        if c0 > 0 {
            let top = &self.core_inv * &d.block(0, 0, c0, n);
            for (i, row) in rows.iter_mut().enumerate().take(c0) {
                *row = Some(top.row(i));
            }
        }
        for (&s, &l) in self.starts.iter().zip(&self.lasts) {
            for i in s..l {
                rows[i + 1] = Some(d.row(i));
            }
        }
        Ok(rows)
    }
}

/// Fills the free rows of `T` so that `T` is a k-th power.
///
/// Tries, in order: a completion to an invertible matrix by unit vectors,
/// zero free rows, then seeded small-integer free rows. Every candidate is
/// checked exactly. With `invertible` only the first is allowed.
pub(crate) fn complete_t(
    forced: &[Option<Vec<G>>],
    k: u32,
    invertible: bool,
    tol: &ToleranceProfile,
) -> Result<Option<ExactMat>> {
    let n = forced.len();
    let fixed: Vec<Vec<G>> = forced.iter().flatten().cloned().collect();
    let free: Vec<usize> = (0..n).filter(|&i| forced[i].is_none()).collect();
    let build = |fill: &[Vec<G>]| -> ExactMat {
        let mut it = fill.iter();
        let rows: Vec<Vec<G>> =
            forced.iter().map(|r| r.clone().unwrap_or_else(|| it.next().expect("one fill per free row").clone())).collect();
        Mat::from_rows(rows, ()).expect("square by construction")
    };

    let mut span = RowSpan::new(n, tol);
    let mut independent = true;
    for r in &fixed {
        independent &= span.insert(r)?;
    }
    if independent {
        let added = extend_to_basis(&fixed, n, (), tol)?;
        let fill: Vec<Vec<G>> = added.iter().map(|&i| unit_vector(n, i, ())).collect();
        return Ok(Some(build(&fill)));
    }
    if invertible {
        return Ok(None);
    }
    let zero = vec![vec![G::default(); n]; free.len()];
    let t = build(&zero);
    if is_kth_power(&t, k, tol)?.0 {
        return Ok(Some(t));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e11);
    for _ in 0..24 {
        let fill: Vec<Vec<G>> =
            free.iter().map(|_| (0..n).map(|_| G::from_int(rng.gen_range(-2..=2))).collect()).collect();
        let t = build(&fill);
        if is_kth_power(&t, k, tol)?.0 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}
