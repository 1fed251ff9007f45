//! k-th powers of nilpotent structure: Miller's formula for the power of a
//! single nilpotent block, its blockwise extension, witness search and
//! matrix k-th roots.

use std::fmt;

use crate::arithmetic::{kth_root_scalar, ComplexApprox, GaussianRational, Scalar, ToleranceProfile};
use crate::error::{Error, Result};
use crate::jordan::{jordan_form, nilpotent_chains, sizes_from_nullities, Spectral};
use crate::linalg::{inverse, rref_with_scale, ApproxMat, ExactMat, Mat};

/// Largest weight accepted by the exhaustive witness search.
pub const MAX_WITNESS_WEIGHT: usize = 32;

/// Weakly decreasing list of positive block sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl From<&[usize]> for Partition {
    fn from(parts: &[usize]) -> Self {
        Partition::new(parts.to_vec())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn check_order(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::PreconditionViolated(format!("power order k = {k} must be at least 2")));
    }
    Ok(())
}

/// Block sizes of `J_{0,n}^k`: `k − m` blocks of size `⌊n/k⌋` and `m` of size
/// `⌈n/k⌉` where `m = n mod k`. For `n ≤ k` this is `n` blocks of size one.
pub fn miller_power(n: usize, k: u32) -> Partition {
    let k = k as usize;
    if n <= k {
        return Partition(vec![1; n]);
    }
    let (q, m) = (n / k, n % k);
    let mut parts = vec![q + 1; m];
    parts.extend(std::iter::repeat_n(q, k - m));
    Partition::new(parts)
}

pub fn partition_power(p: &Partition, k: u32) -> Partition {
    Partition::new(p.parts().iter().flat_map(|&s| miller_power(s, k).into_vec()).collect())
}

/// Partitions of `n` in decreasing lexicographic order.
struct Partitions {
    current: Option<Vec<usize>>,
}

impl Partitions {
    fn new(n: usize) -> Self {
        Partitions { current: Some(if n == 0 { Vec::new() } else { vec![n] }) }
    }
}

impl Iterator for Partitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut p = out.clone();
        // drop trailing ones, then decrement the last part > 1 and refill
        let mut ones = 0;
        while p.last() == Some(&1) {
            p.pop();
            ones += 1;
        }
        if let Some(last) = p.pop() {
            let part = last - 1;
            let mut rest = ones + 1;
            p.push(part);
            while rest > 0 {
                let take = rest.min(part);
                p.push(take);
                rest -= take;
            }
            self.current = Some(p);
        }
        Some(out)
    }
}

/// Lexicographically largest `p` with `partition_power(p, k) = target`.
pub fn kth_power_witness(target: &Partition, k: u32) -> Result<Partition> {
    check_order(k)?;
    let w = target.weight();
    if w > MAX_WITNESS_WEIGHT {
        return Err(Error::PreconditionViolated(format!(
            "witness search is limited to weight {MAX_WITNESS_WEIGHT}, got {w}"
        )));
    }
    Partitions::new(w)
        .map(Partition)
        .find(|p| &partition_power(p, k) == target)
        .ok_or(Error::NotAPower { k })
}

/// Nilpotent block sizes from the nullities of successive powers.
pub fn zero_partition_by_ranks<S: Scalar>(m: &Mat<S>, tol: &ToleranceProfile) -> Result<Partition> {
    let n = m.n();
    let base = m.max_magnitude();
    let mut nullities = vec![0];
    let mut power = Mat::identity(n, m.ctx());
    for j in 1..=n {
        power = &power * m;
        let nu = n - rref_with_scale(&power, &S::power_scale(&base, j), tol)?.rank();
        if nu == *nullities.last().expect("nonempty") {
            break;
        }
        nullities.push(nu);
    }
    Ok(Partition(sizes_from_nullities(&nullities)))
}

fn zero_partition<S: Spectral>(m: &Mat<S>, tol: &ToleranceProfile) -> Result<Partition> {
    if S::EXACT {
        zero_partition_by_ranks(m, tol)
    } else {
        Ok(Partition(jordan_form(m, tol)?.structure.zero_partition()))
    }
}

/// Whether `m` is a k-th power, with the witness partition for its nilpotent part.
pub fn is_kth_power<S: Spectral>(m: &Mat<S>, k: u32, tol: &ToleranceProfile) -> Result<(bool, Option<Partition>)> {
    let zero = zero_partition(m, tol)?;
    match kth_power_witness(&zero, k) {
        Ok(w) => Ok((true, Some(w))),
        Err(Error::NotAPower { .. }) => Ok((false, None)),
        Err(e) => Err(e),
    }
}

/// Exact nilpotent `Y` with `Yᵏ = ⊕ J_{0,q}` for the partition `q = target`.
pub fn nilpotent_kth_root(target: &Partition, k: u32, tol: &ToleranceProfile) -> Result<ExactMat> {
    let witness = kth_power_witness(target, k)?;
    let zero = GaussianRational::default();
    let blocks: Vec<ExactMat> = witness.parts().iter().map(|&s| Mat::jordan_block(&zero, s, ())).collect();
    let x = Mat::block_diag(&blocks, ());
    let chains = nilpotent_chains(&x.pow(k), tol)?;
    debug_assert_eq!(chains.sizes, target.parts());
    let r = Mat::from_cols(&chains.columns, x.n(), ());
    let r_inv = inverse(&r, tol)?;
    Ok(&(&r_inv * &x) * &r)
}

/// `binom(1/k, j)` for `j = 0..m`.
fn binomial_series(k: u32, m: usize) -> Vec<GaussianRational> {
    let a = GaussianRational::ratio(1, k as i64);
    let mut out = Vec::with_capacity(m);
    let mut c = GaussianRational::from_int(1);
    for j in 0..m {
        out.push(c.clone());
        c = c * &(a.clone() - GaussianRational::from_int(j as i64)) * &GaussianRational::ratio(1, j as i64 + 1);
    }
    out
}

/// Principal root of `J_{λ,m}`: `λ^{1/k} Σ_j binom(1/k, j) (N/λ)^j`.
fn jordan_block_root(lambda: &ComplexApprox, m: usize, k: u32) -> ApproxMat {
    let p = lambda.precision();
    let root = kth_root_scalar(lambda, k);
    let inv = lambda.recip().expect("nonzero eigenvalue");
    let mut coeffs = Vec::with_capacity(m);
    let mut scale = root;
    for b in binomial_series(k, m) {
        coeffs.push(b.to_approx(p) * &scale);
        scale = scale * &inv;
    }
    Mat::from_fn(m, m, p, |i, j| if j >= i { coeffs[j - i].clone() } else { ComplexApprox::zero(p) })
}

/// A matrix `X` with `Xᵏ = m`, verified to `eps_residual`.
pub fn matrix_kth_root<S: Spectral>(m: &Mat<S>, k: u32, tol: &ToleranceProfile) -> Result<ApproxMat> {
    check_order(k)?;
    let p = tol.precision_bits;
    let d = jordan_form(m, tol)?;
    let s = &d.structure;
    let zero = Partition(s.zero_partition());
    let mut blocks: Vec<ApproxMat> =
        s.blocks.iter().filter(|b| !b.is_zero()).map(|b| jordan_block_root(&b.eigenvalue, b.size, k)).collect();
    if !zero.is_empty() {
        blocks.push(nilpotent_kth_root(&zero, k, tol)?.to_approx(p));
    }
    let y = Mat::block_diag(&blocks, p);
    let x = &(&d.p * &y) * &d.p_inv;
    let residual = (&x.pow(k) - &m.to_approx(p)).norm_inf_f64();
    if !(residual <= tol.eps_residual) {
        return Err(Error::IllConditioned(format!("k-th root residual {residual:e} exceeds tolerance")));
    }
    Ok(x)
}

#[cfg(test)]
mod tests;
