use crate::arithmetic::{Negligibility, Scalar, ToleranceProfile};
use crate::error::{Error, Result};

use super::Mat;

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon<S: Scalar> {
    pub reduced: Mat<S>,
    pub pivots: Vec<usize>,
}

impl<S: Scalar> Echelon<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn ill(what: &str) -> Error {
    Error::IllConditioned(format!("{what}: pivot within a factor 8 of the zero threshold"))
}

/// Gauss–Jordan elimination choosing pivots only among the first
/// `pivot_cols` columns. Pivot choice is the largest magnitude, ties to the
/// lowest row index.
fn eliminate<S: Scalar>(m: &Mat<S>, pivot_cols: usize, scale: &S::Mag, tol: &ToleranceProfile) -> Result<Echelon<S>> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let ctx = a.ctx();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let mut best = r;
        let mut best_mag = a.get(r, c).magnitude();
        for i in r + 1..rows {
            let mag = a.get(i, c).magnitude();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        match S::classify(&best_mag, scale, tol) {
            Negligibility::Zero => {
                for i in r..rows {
                    a.set(i, c, S::zero(ctx));
                }
                continue;
            }
            Negligibility::Fragile => return Err(ill("elimination")),
            Negligibility::Significant => {}
        }
        if best != r {
            let (rb, rr) = (a.row(best), a.row(r));
            a.set_row(best, &rr);
            a.set_row(r, &rb);
        }
        let inv = a.get(r, c).recip().expect("significant pivot");
        let pivot_row: Vec<S> = a.row_slice(r).iter().map(|x| x.clone() * &inv).collect();
        a.set_row(r, &pivot_row);
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..cols {
                if pivot_row[j].is_zero() {
                    continue;
                }
                let v = a.get(i, j).clone() - f.clone() * &pivot_row[j];
                a.set(i, j, v);
            }
            a.set(i, c, S::zero(ctx));
        }
        pivots.push(c);
        r += 1;
    }
    Ok(Echelon { reduced: a, pivots })
}

pub fn rref<S: Scalar>(m: &Mat<S>, tol: &ToleranceProfile) -> Result<Echelon<S>> {
    eliminate(m, m.cols(), &m.max_magnitude(), tol)
}

/// As [`rref`], but entries are judged against an externally supplied scale
/// (for instance the size a power of a matrix would have without cancellation).
pub fn rref_with_scale<S: Scalar>(m: &Mat<S>, scale: &S::Mag, tol: &ToleranceProfile) -> Result<Echelon<S>> {
    eliminate(m, m.cols(), scale, tol)
}

/// Numerical rank; exact for exact scalars.
pub fn rank<S: Scalar>(m: &Mat<S>, tol: &ToleranceProfile) -> Result<usize> {
    Ok(rref(m, tol)?.rank())
}

pub fn nullity<S: Scalar>(m: &Mat<S>, tol: &ToleranceProfile) -> Result<usize> {
    Ok(m.cols() - rank(m, tol)?)
}

/// Kernel basis from the echelon form: one vector per free column, with a 1 in
/// that column, ordered by column index.
pub fn kernel<S: Scalar>(m: &Mat<S>, tol: &ToleranceProfile) -> Result<Vec<Vec<S>>> {
    kernel_with_scale(m, &m.max_magnitude(), tol)
}

pub fn kernel_with_scale<S: Scalar>(m: &Mat<S>, scale: &S::Mag, tol: &ToleranceProfile) -> Result<Vec<Vec<S>>> {
    Ok(kernel_with_free(m, scale, tol)?.0)
}

/// Kernel basis together with the free column carrying each vector's 1.
pub fn kernel_with_free<S: Scalar>(
    m: &Mat<S>,
    scale: &S::Mag,
    tol: &ToleranceProfile,
) -> Result<(Vec<Vec<S>>, Vec<usize>)> {
    let e = rref_with_scale(m, scale, tol)?;
    let ctx = m.ctx();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&f| !is_pivot[f]).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![S::zero(ctx); n];
            v[f] = S::one(ctx);
            for (i, &p) in e.pivots.iter().enumerate() {
                v[p] = -e.reduced.get(i, f).clone();
            }
            v
        })
        .collect();
    Ok((basis, free))
}

pub fn inverse<S: Scalar>(m: &Mat<S>, tol: &ToleranceProfile) -> Result<Mat<S>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("inverse of {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.n();
    let ctx = m.ctx();
    let mut aug = Mat::zeros(n, 2 * n, ctx);
    aug.set_block(0, 0, m);
    aug.set_block(0, n, &Mat::identity(n, ctx));
    let e = eliminate(&aug, n, &m.max_magnitude(), tol)?;
    if e.rank() < n {
        return Err(Error::Singular);
    }
    Ok(e.reduced.block(0, n, n, n))
}

/// Determinant by pivoted elimination, without any tolerance.
pub fn det<S: Scalar>(m: &Mat<S>) -> S {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.n();
    let ctx = m.ctx();
    let mut a = m.clone();
    let mut acc = S::one(ctx);
    for c in 0..n {
        let mut best = c;
        let mut best_mag = a.get(c, c).magnitude();
        for i in c + 1..n {
            let mag = a.get(i, c).magnitude();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if a.get(best, c).is_zero() {
            return S::zero(ctx);
        }
        if best != c {
            let (rb, rc) = (a.row(best), a.row(c));
            a.set_row(best, &rc);
            a.set_row(c, &rb);
            acc = -acc;
        }
        let piv = a.get(c, c).clone();
        let inv = piv.recip().expect("non-zero pivot");
        acc = acc * &piv;
        for i in c + 1..n {
            let f = a.get(i, c).clone() * &inv;
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = a.get(i, j).clone() - f.clone() * a.get(c, j);
                a.set(i, j, v);
            }
        }
    }
    acc
}

/// Solves `M x = b` for square invertible `M`.
pub fn solve_vec<S: Scalar>(m: &Mat<S>, b: &[S], tol: &ToleranceProfile) -> Result<Vec<S>> {
    Ok(inverse(m, tol)?.mul_vec(b))
}

/// Incrementally maintained span of row vectors.
#[derive(Debug, Clone)]
pub struct RowSpan<S: Scalar> {
    dim: usize,
    basis: Vec<(usize, Vec<S>)>,
    tol: ToleranceProfile,
}

impl<S: Scalar> RowSpan<S> {
    pub fn new(dim: usize, tol: &ToleranceProfile) -> Self {
        RowSpan { dim, basis: Vec::new(), tol: *tol }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    fn residual(&self, v: &[S]) -> Vec<S> {
        let mut r = v.to_vec();
        for (p, b) in &self.basis {
            let f = r[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y;
                }
            }
        }
        r
    }

    /// Reduces `v`; returns the pivot position of the residual if it is not
    /// negligible.
    fn reduce(&self, v: &[S], scale: Option<&S::Mag>) -> Result<Option<(usize, Vec<S>)>> {
        assert_eq!(v.len(), self.dim);
        let Some(first) = v.first() else { return Ok(None) };
        let ctx = first.context();
        let scale = match scale {
            Some(s) => s.clone(),
            None => v.iter().map(S::magnitude).fold(S::zero_mag(ctx), |a, b| if b > a { b } else { a }),
        };
        let r = self.residual(v);
        let mut best = 0;
        let mut best_mag = S::zero_mag(ctx);
        for (j, x) in r.iter().enumerate() {
            let mag = x.magnitude();
            if mag > best_mag {
                best = j;
                best_mag = mag;
            }
        }
        match S::classify(&best_mag, &scale, &self.tol) {
            Negligibility::Zero => Ok(None),
            Negligibility::Fragile => Err(ill("span membership")),
            Negligibility::Significant => Ok(Some((best, r))),
        }
    }

    pub fn contains(&self, v: &[S]) -> Result<bool> {
        Ok(self.reduce(v, None)?.is_none())
    }

    /// Adds `v` if it is independent of the current span; reports whether it was.
    pub fn insert(&mut self, v: &[S]) -> Result<bool> {
        self.insert_with_scale(v, None)
    }

    /// As [`RowSpan::insert`] with the residual judged against `scale` instead
    /// of the size of `v`.
    pub fn insert_with_scale(&mut self, v: &[S], scale: Option<&S::Mag>) -> Result<bool> {
        match self.reduce(v, scale)? {
            None => Ok(false),
            Some((p, r)) => {
                let inv = r[p].recip().expect("significant pivot");
                let row = r.into_iter().map(|x| x * &inv).collect();
                self.basis.push((p, row));
                Ok(true)
            }
        }
    }
}

pub fn unit_vector<S: Scalar>(n: usize, i: usize, ctx: S::Ctx) -> Vec<S> {
    let mut v = vec![S::zero(ctx); n];
    v[i] = S::one(ctx);
    v
}

/// Indices of a greedily chosen maximal independent subset, scanning `order`.
pub fn greedy_independent<S: Scalar>(vectors: &[Vec<S>], order: &[usize], dim: usize, tol: &ToleranceProfile) -> Result<Vec<usize>> {
    let mut span = RowSpan::new(dim, tol);
    let mut chosen = Vec::new();
    for &i in order {
        if span.insert(&vectors[i])? {
            chosen.push(i);
        }
    }
    Ok(chosen)
}

/// Standard vectors (by index, ascending) that extend `rows` to a basis.
pub fn extend_to_basis<S: Scalar>(rows: &[Vec<S>], dim: usize, ctx: S::Ctx, tol: &ToleranceProfile) -> Result<Vec<usize>> {
    let mut span = RowSpan::new(dim, tol);
    for r in rows {
        if !span.insert(r)? {
            return Err(Error::PreconditionViolated("rows are linearly dependent".into()));
        }
    }
    let mut added = Vec::new();
    for i in 0..dim {
        if span.len() == dim {
            break;
        }
        if span.insert(&unit_vector(dim, i, ctx))? {
            added.push(i);
        }
    }
    Ok(added)
}

/// `T_𝓘 = (t_{i, j+1})_{i, j ∈ 𝓘}` with 0-based indices, so every index must be
/// below `n − 1`.
pub fn shift_submatrix<S: Scalar>(t: &Mat<S>, idx: &[usize]) -> Result<Mat<S>> {
    let n = t.n();
    if idx.is_empty() {
        return Err(Error::PreconditionViolated("index set must be nonempty".into()));
    }
    if let Some(&bad) = idx.iter().find(|&&i| i + 1 >= n) {
        return Err(Error::IndexOutOfRange { index: bad, dim: n });
    }
    let cols: Vec<usize> = idx.iter().map(|i| i + 1).collect();
    Ok(t.submatrix(idx, &cols))
}

/// Completes independent `rows` in `F^n` by `q = n − rows.len()` vectors `t`
/// such that `rows ∪ t` is a basis and the projections of the `t` onto
/// `coords` form a basis of `F^q`.
///
/// Step `j` takes the first unit vector `y` outside the span of the previous
/// projections, lifts it by zero-padding and then adds `w = 0` or the first
/// unit vector of `ker π` (ascending index) that leaves the current span.
pub fn constrained_basis_completion<S: Scalar>(
    rows: &[Vec<S>],
    n: usize,
    coords: &[usize],
    ctx: S::Ctx,
    tol: &ToleranceProfile,
) -> Result<Vec<Vec<S>>> {
    let q = coords.len();
    if rows.len() + q != n {
        return Err(Error::DimensionMismatch(format!(
            "{} rows plus {q} coordinates does not equal dimension {n}",
            rows.len()
        )));
    }
    if let Some(&bad) = coords.iter().find(|&&c| c >= n) {
        return Err(Error::IndexOutOfRange { index: bad, dim: n });
    }
    let mut full = RowSpan::new(n, tol);
    for r in rows {
        if !full.insert(r)? {
            return Err(Error::PreconditionViolated("rows are linearly dependent".into()));
        }
    }
    let off: Vec<usize> = (0..n).filter(|i| !coords.contains(i)).collect();
    let mut proj = RowSpan::new(q, tol);
    let mut out = Vec::with_capacity(q);
    for _ in 0..q {
        let mut picked = None;
        for c in 0..q {
            if !proj.contains(&unit_vector::<S>(q, c, ctx))? {
                picked = Some(c);
                break;
            }
        }
        let c = picked.ok_or_else(|| Error::InvariantViolation("projection span already full".into()))?;
        let lift = unit_vector::<S>(n, coords[c], ctx);
        let mut accepted = None;
        for w in std::iter::once(None).chain(off.iter().copied().map(Some)) {
            let mut t = lift.clone();
            if let Some(x) = w {
                t[x] = S::one(ctx);
            }
            if full.insert(&t)? {
                accepted = Some(t);
                break;
            }
        }
        let t = accepted.ok_or_else(|| Error::InvariantViolation("no admissible kernel adjustment".into()))?;
        proj.insert(&unit_vector::<S>(q, c, ctx))?;
        out.push(t);
    }
    Ok(out)
}
