//! Jordan canonical form, the nilpotent statistics of a matrix and the
//! permutation that moves the last row of every nilpotent block to the end.

mod chains;
mod core_form;
mod permutation;

pub use core_form::CoreNilpotentForm;
pub use permutation::{nilpotent_tail_permutation, tail_permutation, TailPermutation};

pub(crate) use chains::{nilpotent_chains, sizes_from_nullities};

use std::cmp::Ordering;

use crate::arithmetic::approx::{real_from_f64, recognize_rational};
use crate::arithmetic::poly::{self, to_approx};
use crate::arithmetic::{ComplexApprox, GaussianRational, Scalar, ToleranceProfile};
use crate::error::{Error, Result};
use crate::linalg::{char_poly, inverse, ApproxMat, ExactMat, Mat};

#[derive(Debug, Clone, PartialEq)]
pub struct JordanBlock {
    pub eigenvalue: ComplexApprox,
    /// The eigenvalue itself when it is a Gaussian rational known exactly.
    pub exact: Option<GaussianRational>,
    pub size: usize,
}

impl JordanBlock {
    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(e) => Scalar::is_zero(e),
            None => Scalar::is_zero(&self.eigenvalue),
        }
    }
}

/// Block list in canonical order: nonzero eigenvalues first, nilpotent blocks last.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanStructure {
    pub blocks: Vec<JordanBlock>,
}

impl JordanStructure {
    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// Number of nilpotent blocks.
    pub fn r0(&self) -> usize {
        self.blocks.iter().filter(|b| b.is_zero()).count()
    }

    pub fn r_prime(&self) -> usize {
        self.blocks.len() - self.r0()
    }

    /// Total size of the nilpotent blocks.
    pub fn n0(&self) -> usize {
        self.blocks.iter().filter(|b| b.is_zero()).map(|b| b.size).sum()
    }

    /// Nilpotent block sizes, largest first.
    pub fn zero_partition(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.blocks.iter().filter(|b| b.is_zero()).map(|b| b.size).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        p
    }

    /// Checks the canonical layout: every nilpotent block after every
    /// invertible one, nilpotent sizes non-increasing.
    pub fn check_canonical(&self) -> Result<()> {
        let first_zero = self.blocks.iter().position(JordanBlock::is_zero).unwrap_or(self.blocks.len());
        if self.blocks[first_zero..].iter().any(|b| !b.is_zero()) {
            return Err(Error::BadOrdering("a nonzero-eigenvalue block follows a nilpotent block".into()));
        }
        let tail: Vec<usize> = self.blocks[first_zero..].iter().map(|b| b.size).collect();
        if tail.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadOrdering(format!("nilpotent block sizes {tail:?} are not non-increasing")));
        }
        Ok(())
    }

    /// Structure with exact eigenvalues, mainly for building test inputs.
    pub fn from_exact(blocks: &[(GaussianRational, usize)], precision: usize) -> Self {
        JordanStructure {
            blocks: blocks
                .iter()
                .map(|(l, s)| JordanBlock { eigenvalue: l.to_approx(precision), exact: Some(l.clone()), size: *s })
                .collect(),
        }
    }

    pub fn matrix(&self, precision: usize) -> ApproxMat {
        let blocks: Vec<ApproxMat> =
            self.blocks.iter().map(|b| Mat::jordan_block(&b.eigenvalue, b.size, precision)).collect();
        Mat::block_diag(&blocks, precision)
    }

    /// The Jordan matrix over the exact scalars, when every eigenvalue is exact.
    pub fn exact_matrix(&self) -> Option<ExactMat> {
        let blocks: Option<Vec<ExactMat>> =
            self.blocks.iter().map(|b| b.exact.as_ref().map(|l| Mat::jordan_block(l, b.size, ()))).collect();
        blocks.map(|bs| Mat::block_diag(&bs, ()))
    }
}

/// `B = P J P⁻¹` with `J` in canonical order.
#[derive(Debug, Clone)]
pub struct JordanDecomposition {
    pub p: ApproxMat,
    pub p_inv: ApproxMat,
    pub j: ApproxMat,
    pub structure: JordanStructure,
    /// Direct sum of the nonzero-eigenvalue blocks.
    pub j_prime: ApproxMat,
    /// `‖P J P⁻¹ − B‖∞` as verified.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroStats {
    pub r0: usize,
    pub r_prime: usize,
    pub n0: usize,
    pub partition: Vec<usize>,
}

pub fn zero_stats(d: &JordanDecomposition) -> ZeroStats {
    let s = &d.structure;
    ZeroStats { r0: s.r0(), r_prime: s.r_prime(), n0: s.n0(), partition: s.zero_partition() }
}

/// Scalars that know how to compute a Jordan form of their matrices.
pub trait Spectral: Scalar {
    fn jordan_form(m: &Mat<Self>, tol: &ToleranceProfile) -> Result<JordanDecomposition>;
}

pub fn jordan_form<S: Spectral>(m: &Mat<S>, tol: &ToleranceProfile) -> Result<JordanDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("Jordan form of {}x{} matrix", m.rows(), m.cols())));
    }
    S::jordan_form(m, tol)
}

struct EigenGroup {
    value: ComplexApprox,
    exact: Option<GaussianRational>,
    sizes: Vec<usize>,
    columns: Vec<Vec<ComplexApprox>>,
}

fn modulus_order(a: &ComplexApprox, b: &ComplexApprox, tol: &ToleranceProfile) -> Ordering {
    let (ma, mb) = (a.abs(), b.abs());
    let p = a.precision();
    let one = real_from_f64(1.0, p);
    let big = if ma > one { ma.clone() } else { one };
    let gap = if ma > mb { ma.clone() - &mb } else { mb.clone() - &ma };
    if gap > big * real_from_f64(tol.eps_cluster, p) {
        return mb.partial_cmp(&ma).unwrap_or(Ordering::Equal);
    }
    let arg = |z: &ComplexApprox| {
        let (x, y) = z.to_c64();
        y.atan2(x)
    };
    arg(a).partial_cmp(&arg(b)).unwrap_or(Ordering::Equal)
}

fn assemble(b_approx: &ApproxMat, mut groups: Vec<EigenGroup>, tol: &ToleranceProfile) -> Result<JordanDecomposition> {
    let p = b_approx.precision();
    let n = b_approx.n();
    let (mut zeros, mut nonzero): (Vec<EigenGroup>, Vec<EigenGroup>) = groups
        .drain(..)
        .partition(|g| g.exact.as_ref().map_or_else(|| Scalar::is_zero(&g.value), Scalar::is_zero));
    nonzero.sort_by(|a, b| modulus_order(&a.value, &b.value, tol));
    nonzero.append(&mut zeros);

    let mut blocks = Vec::new();
    let mut columns = Vec::with_capacity(n);
    for g in nonzero {
        for &s in &g.sizes {
            blocks.push(JordanBlock { eigenvalue: g.value.clone(), exact: g.exact.clone(), size: s });
        }
        columns.extend(g.columns);
    }
    if columns.len() != n {
        return Err(Error::IllConditioned(format!("collected {} of {n} Jordan basis vectors", columns.len())));
    }
    let structure = JordanStructure { blocks };
    let pm = Mat::from_cols(&columns, n, p);
    let p_inv = inverse(&pm, tol)?;
    let j = structure.matrix(p);
    let back = &(&pm * &j) * &p_inv;
    let residual = (&back - b_approx).norm_inf_f64();
    if !(residual <= tol.eps_residual) {
        return Err(Error::IllConditioned(format!("Jordan similarity residual {residual:e} exceeds tolerance")));
    }
    let nz: Vec<ApproxMat> = structure
        .blocks
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| Mat::jordan_block(&b.eigenvalue, b.size, p))
        .collect();
    let j_prime = Mat::block_diag(&nz, p);
    Ok(JordanDecomposition { p: pm, p_inv, j, structure, j_prime, residual })
}

fn check_separation(values: &[ComplexApprox], tol: &ToleranceProfile) -> Result<()> {
    let radius = 4.0 * tol.eps_cluster;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            let d = (a.clone() - b).abs().to_f64().value();
            if d < radius {
                return Err(Error::IllConditioned(format!("distinct eigenvalues only {d:e} apart")));
            }
        }
    }
    Ok(())
}

/// An approximate root that is in fact a Gaussian rational, confirmed by exact
/// evaluation.
fn recognize_root(factor: &[GaussianRational], root: &ComplexApprox) -> Option<GaussianRational> {
    let re = recognize_rational(&root.re)?;
    let im = recognize_rational(&root.im)?;
    let q = GaussianRational::new(re, im);
    Scalar::is_zero(&poly::eval(factor, &q)).then_some(q)
}

impl Spectral for GaussianRational {
    /// Exact characteristic polynomial and square-free factorization give the
    /// multiplicities exactly. Linear factors give exact eigenvalues whose
    /// chains are computed without rounding; the remaining roots are
    /// approximated and handled numerically.
    fn jordan_form(m: &ExactMat, tol: &ToleranceProfile) -> Result<JordanDecomposition> {
        let p = tol.precision_bits;
        let n = m.n();
        let chi = char_poly(m);
        let zero_mult = chi.iter().take_while(|c| Scalar::is_zero(*c)).count();
        let rest = chi[zero_mult..].to_vec();
        let mut exact_eigs: Vec<(GaussianRational, usize)> = Vec::new();
        let mut approx_eigs: Vec<(ComplexApprox, usize)> = Vec::new();
        if zero_mult > 0 {
            exact_eigs.push((GaussianRational::default(), zero_mult));
        }
        for (factor, mult) in poly::square_free(&rest) {
            if factor.len() == 2 {
                exact_eigs.push((-factor[0].clone(), mult));
                continue;
            }
            for root in poly::poly_roots(&to_approx(&factor, p), tol)? {
                match recognize_root(&factor, &root) {
                    Some(q) => exact_eigs.push((q, mult)),
                    None => approx_eigs.push((root, mult)),
                }
            }
        }
        let all: Vec<ComplexApprox> = exact_eigs
            .iter()
            .map(|(l, _)| l.to_approx(p))
            .chain(approx_eigs.iter().map(|(l, _)| l.clone()))
            .collect();
        check_separation(&all, tol)?;

        let m_approx = m.to_approx(p);
        let mut groups = Vec::new();
        for (lambda, mult) in exact_eigs {
            let chains = chains::eigen_chains(m, &lambda, mult, tol)?;
            groups.push(EigenGroup {
                value: lambda.to_approx(p),
                exact: Some(lambda),
                sizes: chains.sizes,
                columns: chains.columns.iter().map(|c| c.iter().map(|x| x.to_approx(p)).collect()).collect(),
            });
        }
        for (lambda, mult) in approx_eigs {
            let chains = chains::eigen_chains(&m_approx, &lambda, mult, tol)?;
            groups.push(EigenGroup { value: lambda, exact: None, sizes: chains.sizes, columns: chains.columns });
        }
        debug_assert_eq!(groups.iter().map(|g| g.sizes.iter().sum::<usize>()).sum::<usize>(), n);
        assemble(&m_approx, groups, tol)
    }
}

impl Spectral for ComplexApprox {
    /// Hessenberg characteristic polynomial, all roots, single-linkage
    /// clustering at `eps_cluster`; each cluster mean is one eigenvalue with
    /// the cluster size as multiplicity.
    fn jordan_form(m: &ApproxMat, tol: &ToleranceProfile) -> Result<JordanDecomposition> {
        let n = m.n();
        if n == 0 {
            return assemble(m, Vec::new(), tol);
        }
        let chi = char_poly(m);
        let roots = poly::poly_roots(&chi, tol)?;
        let p = m.precision();

        // single linkage by union-find over pairs closer than the radius
        let mut parent: Vec<usize> = (0..roots.len()).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let scale = 1.0f64.max(roots[i].abs().to_f64().value());
                let d = (roots[i].clone() - &roots[j]).abs().to_f64().value();
                if d <= tol.eps_cluster * scale {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        let mut label: Vec<Option<usize>> = vec![None; roots.len()];
        for i in 0..roots.len() {
            let r = find(&mut parent, i);
            match label[r] {
                Some(c) => clusters[c].push(i),
                None => {
                    label[r] = Some(clusters.len());
                    clusters.push(vec![i]);
                }
            }
        }
        let centers: Vec<(ComplexApprox, usize)> = clusters
            .iter()
            .map(|c| {
                let sum = c.iter().fold(ComplexApprox::zero(p), |acc, &i| acc + &roots[i]);
                let inv = ComplexApprox::from_i64(c.len() as i64, p).recip().expect("nonempty");
                (sum * &inv, c.len())
            })
            .collect();
        check_separation(&centers.iter().map(|(c, _)| c.clone()).collect::<Vec<_>>(), tol)?;

        let mut groups = Vec::new();
        for (lambda, mult) in centers {
            let negligible = lambda.abs().to_f64().value() <= tol.eps_cluster;
            let lambda = if negligible { ComplexApprox::zero(p) } else { lambda };
            let chains = chains::eigen_chains(m, &lambda, mult, tol)?;
            groups.push(EigenGroup { value: lambda, exact: None, sizes: chains.sizes, columns: chains.columns });
        }
        assemble(m, groups, tol)
    }
}

#[cfg(test)]
mod tests;
