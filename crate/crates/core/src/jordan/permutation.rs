use crate::arithmetic::GaussianRational;
use crate::error::{Error, Result};
use crate::linalg::{ExactMat, Mat};

use super::JordanStructure;

/// The permutation `σ` that sends the last index of every nilpotent block to
/// the final `r₀` positions, keeping everything else in order.
///
/// Indices are 0-based. The matrix `p` has `p[i][σ(i)] = 1`, so
/// `Pᵀ C P` places entry `C[i][j]` at `(σ(i), σ(j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailPermutation {
    pub sigma: Vec<usize>,
    /// Last index of each nilpotent block, in block order.
    pub ell: Vec<usize>,
    pub p: ExactMat,
}

impl TailPermutation {
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn r0(&self) -> usize {
        self.ell.len()
    }

    /// `C^P = Pᵀ C P`.
    pub fn apply(&self, c: &ExactMat) -> ExactMat {
        let n = self.n();
        let mut out = ExactMat::zeros(n, n, ());
        for i in 0..n {
            for j in 0..n {
                out.set(self.sigma[i], self.sigma[j], c.get(i, j).clone());
            }
        }
        out
    }

    /// Inverse of [`TailPermutation::apply`].
    pub fn unapply(&self, cp: &ExactMat) -> ExactMat {
        let n = self.n();
        ExactMat::from_fn(n, n, (), |i, j| cp.get(self.sigma[i], self.sigma[j]).clone())
    }
}

/// `σ` for a matrix of size `n` whose nilpotent blocks, placed last, have the
/// given sizes. With 1-based `ℓ_s = n − n₀ + m₁ + … + m_s`: `σ(i) = i` up to
/// `n − n₀`, `σ(ℓ_s) = n − r₀ + s`, and every other index moves down by the
/// number of `ℓ_s` before it.
pub fn tail_permutation(n: usize, partition: &[usize]) -> Result<TailPermutation> {
    let n0: usize = partition.iter().sum();
    if n0 > n || partition.contains(&0) {
        return Err(Error::PreconditionViolated(format!("partition {partition:?} does not fit dimension {n}")));
    }
    let r0 = partition.len();
    let mut ell = Vec::with_capacity(r0);
    let mut acc = n - n0;
    for &m in partition {
        acc += m;
        ell.push(acc);
    }
    let sigma: Vec<usize> = (1..=n)
        .map(|i| {
            if i <= n - n0 {
                i
            } else if let Some(s) = ell.iter().position(|&l| l == i) {
                n - r0 + s + 1
            } else {
                i - ell.iter().filter(|&&l| l < i).count()
            }
        })
        .map(|x| x - 1)
        .collect();
    let p = Mat::from_fn(n, n, (), |i, j| GaussianRational::from_int((sigma[i] == j) as i64));
    Ok(TailPermutation { sigma, ell: ell.into_iter().map(|l| l - 1).collect(), p })
}

pub fn nilpotent_tail_permutation(structure: &JordanStructure) -> Result<TailPermutation> {
    structure.check_canonical()?;
    tail_permutation(structure.n(), &structure.zero_partition())
}
