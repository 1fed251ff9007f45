use crate::arithmetic::ToleranceProfile;
use crate::error::{Error, Result};
use crate::linalg::{inverse, kernel_with_free, rank, rref, ExactMat, Mat};

use super::chains::nilpotent_chains;
use super::permutation::{tail_permutation, TailPermutation};

/// Exact similarity `g B g⁻¹ = N′ ⊕ (⊕ J_{0,m_s})`.
///
/// `N′` is the (invertible) restriction of `B` to the range of `B^q` for `q`
/// large enough, written in an echelon basis; the nilpotent part is in Jordan
/// form with block sizes non-increasing. No eigenvalue is ever computed, so
/// everything stays over the Gaussian rationals.
#[derive(Debug, Clone)]
pub struct CoreNilpotentForm {
    pub g: ExactMat,
    pub g_inv: ExactMat,
    pub core: ExactMat,
    pub zero_partition: Vec<usize>,
}

impl CoreNilpotentForm {
    pub fn from_matrix(b: &ExactMat, tol: &ToleranceProfile) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::DimensionMismatch("core-nilpotent form of a non-square matrix".into()));
        }
        let n = b.n();
        let mut power = ExactMat::identity(n, ());
        let mut prev_rank = n;
        loop {
            let next = &power * b;
            let r = rank(&next, tol)?;
            if r == prev_rank {
                break;
            }
            power = next;
            prev_rank = r;
        }
        // range of B^q: echelon rows of (B^q)ᵀ carry an identity at their pivots
        let e = rref(&power.transpose(), tol)?;
        let range: Vec<Vec<_>> = (0..e.rank()).map(|i| e.reduced.row(i)).collect();
        let image = b * &Mat::from_cols(&range, n, ());
        let core = image.submatrix(&e.pivots, &(0..range.len()).collect::<Vec<_>>());

        let (null, free) = kernel_with_free(&power, &power.max_magnitude(), tol)?;
        let v = Mat::from_cols(&null, n, ());
        let restricted = (b * &v).submatrix(&free, &(0..null.len()).collect::<Vec<_>>());
        let chains = nilpotent_chains(&restricted, tol)?;

        let mut columns = range;
        columns.extend(chains.columns.iter().map(|q| v.mul_vec(q)));
        let g_inv = Mat::from_cols(&columns, n, ());
        let g = inverse(&g_inv, tol)?;
        let form = CoreNilpotentForm { g, g_inv, core, zero_partition: chains.sizes };
        if &(&form.g * b) * &form.g_inv != form.reduced() {
            return Err(Error::InvariantViolation("core-nilpotent similarity does not hold exactly".into()));
        }
        Ok(form)
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn n0(&self) -> usize {
        self.zero_partition.iter().sum()
    }

    pub fn r0(&self) -> usize {
        self.zero_partition.len()
    }

    /// Size of the invertible part.
    pub fn core_dim(&self) -> usize {
        self.n() - self.n0()
    }

    pub fn nilpotent_part(&self) -> ExactMat {
        let zero = Default::default();
        let blocks: Vec<ExactMat> = self.zero_partition.iter().map(|&m| Mat::jordan_block(&zero, m, ())).collect();
        Mat::block_diag(&blocks, ())
    }

    /// `N′ ⊕ (⊕ J_{0,m_s})`.
    pub fn reduced(&self) -> ExactMat {
        self.core.direct_sum(&self.nilpotent_part())
    }

    pub fn tail_permutation(&self) -> TailPermutation {
        tail_permutation(self.n(), &self.zero_partition).expect("partition fits by construction")
    }

    /// `g M g⁻¹`.
    pub fn to_reduced_coords(&self, m: &ExactMat) -> ExactMat {
        &(&self.g * m) * &self.g_inv
    }

    /// `g⁻¹ M g`.
    pub fn from_reduced_coords(&self, m: &ExactMat) -> ExactMat {
        &(&self.g_inv * m) * &self.g
    }
}
