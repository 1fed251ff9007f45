use crate::arithmetic::{Scalar, ToleranceProfile};
use crate::error::{Error, Result};
use crate::linalg::{kernel_with_free, kernel_with_scale, rref_with_scale, Mat, RowSpan};

/// Jordan chains of a nilpotent operator, longest first.
#[derive(Debug, Clone)]
pub(crate) struct ChainBasis<S: Scalar> {
    pub sizes: Vec<usize>,
    /// Basis vectors: for each chain generator `v` of length `s`, the run
    /// `K^{s−1}v, …, Kv, v`.
    pub columns: Vec<Vec<S>>,
}

/// Block counts from the nullities `ν_j` of `K^j`: the number of blocks of
/// size exactly `s` is `(ν_s − ν_{s−1}) − (ν_{s+1} − ν_s)`.
pub(crate) fn sizes_from_nullities(nullities: &[usize]) -> Vec<usize> {
    let at_least = |j: usize| -> usize {
        if j == 0 || j >= nullities.len() {
            return 0;
        }
        nullities[j] - nullities[j - 1]
    };
    let mut sizes = Vec::new();
    for s in (1..nullities.len()).rev() {
        let exact = at_least(s) - at_least(s + 1);
        sizes.extend(std::iter::repeat_n(s, exact));
    }
    sizes
}

/// Chains of the nilpotent matrix `k` built from canonical echelon kernels.
///
/// A set of chains is a basis exactly when the chain bottoms are independent,
/// so generators are taken greedily from a kernel basis of `K^s` for
/// decreasing `s`, keeping those whose bottom `K^{s−1}v` is new.
pub(crate) fn nilpotent_chains<S: Scalar>(k: &Mat<S>, tol: &ToleranceProfile) -> Result<ChainBasis<S>> {
    let a = k.n();
    let ctx = k.ctx();
    if a == 0 {
        return Ok(ChainBasis { sizes: Vec::new(), columns: Vec::new() });
    }
    let base = k.max_magnitude();
    let mut powers = vec![Mat::identity(a, ctx)];
    let mut nullities = vec![0];
    while *nullities.last().expect("nonempty") < a {
        let j = powers.len();
        if j > a {
            return Err(Error::IllConditioned("restricted operator is not nilpotent at this precision".into()));
        }
        let next = &powers[j - 1] * k;
        let scale = S::power_scale(&base, j);
        let r = rref_with_scale(&next, &scale, tol)?.rank();
        nullities.push(a - r);
        powers.push(next);
    }
    let sizes = sizes_from_nullities(&nullities);
    let top = nullities.len() - 1;

    let mut bottoms = RowSpan::new(a, tol);
    let mut generators: Vec<(usize, Vec<S>)> = Vec::new();
    for s in (1..=top).rev() {
        let want = sizes.iter().filter(|&&x| x == s).count();
        if want == 0 {
            continue;
        }
        let scale = S::power_scale(&base, s);
        let candidates = kernel_with_scale(&powers[s], &scale, tol)?;
        let bottom_scale = S::power_scale(&base, s - 1);
        let mut got = 0;
        for v in candidates {
            if got == want {
                break;
            }
            let b = powers[s - 1].mul_vec(&v);
            if bottoms.insert_with_scale(&b, Some(&bottom_scale))? {
                generators.push((s, v));
                got += 1;
            }
        }
        if got < want {
            return Err(Error::IllConditioned(format!("found {got} of {want} chains of length {s}")));
        }
    }
    let mut columns = Vec::with_capacity(a);
    for (s, v) in &generators {
        let mut run = vec![v.clone()];
        for _ in 1..*s {
            let prev = k.mul_vec(run.last().expect("nonempty"));
            run.push(prev);
        }
        run.reverse();
        columns.extend(run);
    }
    Ok(ChainBasis { sizes, columns })
}

/// Chains of `B − λI` on the generalized eigenspace of `λ`, expressed in the
/// ambient coordinates. `mult` is the algebraic multiplicity.
pub(crate) fn eigen_chains<S: Scalar>(b: &Mat<S>, lambda: &S, mult: usize, tol: &ToleranceProfile) -> Result<ChainBasis<S>> {
    let n = b.n();
    let ctx = b.ctx();
    let shifted = b - &Mat::identity(n, ctx).scale(lambda);
    let base = shifted.max_magnitude();
    let power = shifted.pow(mult as u32);
    let (basis, free) = kernel_with_free(&power, &S::power_scale(&base, mult), tol)?;
    if basis.len() != mult {
        return Err(Error::IllConditioned(format!(
            "generalized eigenspace has dimension {} but multiplicity is {mult}",
            basis.len()
        )));
    }
    // the kernel basis has an identity in its free coordinates, so those rows
    // of (B − λI)V are the coordinates of the restriction
    let v = Mat::from_cols(&basis, n, ctx);
    let image = &shifted * &v;
    let restricted = image.submatrix(&free, &(0..mult).collect::<Vec<_>>());
    let chains = nilpotent_chains(&restricted, tol)?;
    let columns = chains.columns.iter().map(|q| v.mul_vec(q)).collect();
    Ok(ChainBasis { sizes: chains.sizes, columns })
}
