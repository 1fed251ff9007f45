use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dashu_ratio::RBig;

use crate::arithmetic::{ComplexApprox, GaussianRational, Real, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix.
///
/// Everything the solver manipulates is square, but kernels and row sets are
/// naturally rectangular, so the shape is general.
#[derive(Clone, PartialEq)]
pub struct Mat<S: Scalar> {
    rows: usize,
    cols: usize,
    ctx: S::Ctx,
    data: Vec<S>,
}

pub type ExactMat = Mat<GaussianRational>;
pub type ApproxMat = Mat<ComplexApprox>;

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize, ctx: S::Ctx) -> Self {
        Mat { rows, cols, ctx, data: vec![S::zero(ctx); rows * cols] }
    }

    pub fn identity(n: usize, ctx: S::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.data[i * n + i] = S::one(ctx);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, ctx: S::Ctx, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, ctx, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>, ctx: S::Ctx) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} entries, expected {c}",
                rows[bad].len()
            )));
        }
        Ok(Mat { rows: r, cols: c, ctx, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]], ctx: S::Ctx) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), c, ctx, |i, j| S::from_i64(rows[i][j], ctx))
    }

    pub fn diag(values: &[S], ctx: S::Ctx) -> Self {
        let n = values.len();
        Self::from_fn(n, n, ctx, |i, j| if i == j { values[i].clone() } else { S::zero(ctx) })
    }

    /// Jordan block `J_{λ,m}`.
    pub fn jordan_block(lambda: &S, m: usize, ctx: S::Ctx) -> Self {
        Self::from_fn(m, m, ctx, |i, j| {
            if i == j {
                lambda.clone()
            } else if j == i + 1 {
                S::one(ctx)
            } else {
                S::zero(ctx)
            }
        })
    }

    pub fn block_diag(blocks: &[Mat<S>], ctx: S::Ctx) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(r, c, ctx);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Dimension of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_slice(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_row(&mut self, i: usize, v: &[S]) {
        assert_eq!(v.len(), self.cols);
        self.data[i * self.cols..(i + 1) * self.cols].clone_from_slice(v);
    }

    pub fn from_cols(cols: &[Vec<S>], rows: usize, ctx: S::Ctx) -> Self {
        Self::from_fn(rows, cols.len(), ctx, |i, j| cols[j][i].clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat<S>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), self.ctx, |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Contiguous block `[r0, r0+r) × [c0, c0+c)`.
    pub fn block(&self, r0: usize, c0: usize, r: usize, c: usize) -> Self {
        Self::from_fn(r, c, self.ctx, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.ctx, |i, j| self.get(j, i).clone())
    }

    pub fn map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, ctx, data: self.data.iter().map(f).collect() }
    }

    pub fn to_approx(&self, precision: usize) -> ApproxMat {
        self.map(precision, |x| x.to_approx(precision))
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(self.ctx, |x| x.clone() * s)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows, self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row_slice(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(self.ctx), |acc, (a, b)| acc + a.clone() * b)
            })
            .collect()
    }

    /// `v^T M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).fold(S::zero(self.ctx), |acc, i| acc + v[i].clone() * self.get(i, j)))
            .collect()
    }

    /// Largest entry magnitude.
    pub fn max_magnitude(&self) -> S::Mag {
        self.data
            .iter()
            .map(S::magnitude)
            .fold(S::zero_mag(self.ctx), |a, b| if b > a { b } else { a })
    }

    fn check_same_shape(&self, rhs: &Self, op: &str) {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "{op}: shape {}x{} vs {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::block_diag(&[self.clone(), other.clone()], self.ctx)
    }
}

impl ExactMat {
    pub fn exact_from_i64(rows: &[&[i64]]) -> Self {
        Self::from_i64_rows(rows, ())
    }

    pub fn exact_identity(n: usize) -> Self {
        Self::identity(n, ())
    }

    pub fn exact_zeros(n: usize) -> Self {
        Self::zeros(n, n, ())
    }

    /// Row-sum norm with `|z|` bounded above by `|Re z| + |Im z|`; equal to
    /// the infinity norm for real matrices and never smaller in general.
    pub fn norm_inf_bound(&self) -> RBig {
        (0..self.rows)
            .map(|i| self.row_slice(i).iter().fold(RBig::ZERO, |acc, z| acc + z.abs_bound()))
            .fold(RBig::ZERO, |a, b| if b > a { b } else { a })
    }

    /// `1 + ⌈‖M‖∞⌉` (with the bound above), an integer above the spectral radius.
    pub fn shift_above_spectrum(&self) -> i64 {
        let bound = self.norm_inf_bound();
        let ceil = bound.ceil();
        1 + i64::try_from(ceil).expect("norm fits in i64")
    }
}

impl ApproxMat {
    pub fn precision(&self) -> usize {
        self.ctx
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> Real {
        let zero = crate::arithmetic::ComplexApprox::zero(self.ctx).re;
        (0..self.rows)
            .map(|i| self.row_slice(i).iter().fold(zero.clone(), |acc, z| acc + z.abs()))
            .fold(zero.clone(), |a, b| if b > a { b } else { a })
    }

    pub fn norm_inf_f64(&self) -> f64 {
        self.norm_inf().to_f64().value()
    }
}

/// `‖a − b‖∞` between an approximate matrix and an exact one.
pub fn distance_inf(a: &ApproxMat, b: &ExactMat) -> f64 {
    (a - &b.to_approx(a.precision())).norm_inf_f64()
}

impl<'a, S: Scalar> Add<&'a Mat<S>> for &'a Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: &'a Mat<S>) -> Mat<S> {
        self.check_same_shape(rhs, "add");
        Mat {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }
}

impl<'a, S: Scalar> Sub<&'a Mat<S>> for &'a Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: &'a Mat<S>) -> Mat<S> {
        self.check_same_shape(rhs, "sub");
        Mat {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }
}

impl<'a, S: Scalar> Mul<&'a Mat<S>> for &'a Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: &'a Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, rhs.rows, "mul: inner dimensions differ");
        let mut out: Mat<S> = Mat::zeros(self.rows, rhs.cols, self.ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b;
                }
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &Mat<S> {
    type Output = Mat<S>;
    fn neg(self) -> Mat<S> {
        self.map(self.ctx, |x| -x.clone())
    }
}

impl<S: Scalar> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row_slice(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_powers() {
        let j = ExactMat::jordan_block(&GaussianRational::default(), 3, ());
        assert!(!j.pow(2).is_zero());
        assert!(j.pow(3).is_zero());
        let a = ExactMat::exact_from_i64(&[&[1, 2], &[3, 4]]);
        let b = ExactMat::exact_from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(&a * &b, ExactMat::exact_from_i64(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.pow(0), ExactMat::exact_identity(2));
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![GaussianRational::from_int(1)], vec![]];
        assert!(matches!(ExactMat::from_rows(rows, ()), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn shift_above_spectrum_matches_examples() {
        assert_eq!(ExactMat::exact_zeros(3).shift_above_spectrum(), 1);
        let c = ExactMat::exact_from_i64(&[&[3, 0], &[0, 3]]);
        assert_eq!(c.shift_above_spectrum(), 4);
        let c = ExactMat::from_rows(vec![vec!["1/2+1/3i".parse().unwrap()]], ()).unwrap();
        assert_eq!(c.shift_above_spectrum(), 2);
    }
}
