//! Univariate polynomials, stored as coefficient vectors from the constant
//! term upward.

use super::approx::{binary_exponent, real_from_f64, real_from_int};
use super::{ComplexApprox, GaussianRational, Real, Scalar, ToleranceProfile};
use crate::error::{Error, Result};

pub type ExactPoly = Vec<GaussianRational>;

fn trim(p: &mut ExactPoly) {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(p: &[GaussianRational]) -> Option<usize> {
    p.iter().rposition(|c| !Scalar::is_zero(c))
}

pub fn eval<S: Scalar>(p: &[S], x: &S) -> S {
    let mut acc = S::zero(x.context());
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &[GaussianRational]) -> ExactPoly {
    let mut out: ExactPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.clone() * &GaussianRational::from_int(i as i64))
        .collect();
    trim(&mut out);
    out
}

pub fn sub(a: &[GaussianRational], b: &[GaussianRational]) -> ExactPoly {
    let len = a.len().max(b.len());
    let zero = GaussianRational::default();
    let mut out: ExactPoly = (0..len)
        .map(|i| a.get(i).unwrap_or(&zero).clone() - b.get(i).unwrap_or(&zero))
        .collect();
    trim(&mut out);
    out
}

pub fn mul(a: &[GaussianRational], b: &[GaussianRational]) -> ExactPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GaussianRational::default(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder. Panics on division by the zero polynomial.
pub fn divrem(a: &[GaussianRational], b: &[GaussianRational]) -> (ExactPoly, ExactPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = b[db].recip().expect("non-zero lead");
    let mut rem: ExactPoly = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![GaussianRational::default(); rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let coef = rem[dr].clone() * &lead_inv;
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            rem[shift + j] = rem[shift + j].clone() - coef.clone() * bj;
        }
        quot[shift] = coef;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub fn monic(p: &[GaussianRational]) -> ExactPoly {
    match degree(p) {
        None => Vec::new(),
        Some(d) => {
            let inv = p[d].recip().expect("non-zero lead");
            p[..=d].iter().map(|c| c.clone() * &inv).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[GaussianRational], b: &[GaussianRational]) -> ExactPoly {
    let mut x = monic(a);
    let mut y = monic(b);
    while degree(&y).is_some() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = monic(&r);
    }
    monic(&x)
}

/// Square-free decomposition `p = c · ∏ fᵢ^{mᵢ}` (Yun). Returns the non-constant
/// monic factors with their multiplicities, in increasing multiplicity.
pub fn square_free(p: &[GaussianRational]) -> Vec<(ExactPoly, usize)> {
    let f = monic(p);
    if degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut mult = 1;
    while degree(&b).unwrap_or(0) > 0 {
        let a = gcd(&b, &d);
        let next_b = divrem(&b, &a).0;
        let next_c = divrem(&d, &a).0;
        if degree(&a).unwrap_or(0) > 0 {
            out.push((a, mult));
        }
        d = sub(&next_c, &derivative(&next_b));
        b = next_b;
        mult += 1;
    }
    out
}

pub fn to_approx(p: &[GaussianRational], precision: usize) -> Vec<ComplexApprox> {
    p.iter().map(|c| c.to_approx(precision)).collect()
}

fn eval_with_derivative(p: &[ComplexApprox], x: &ComplexApprox) -> (ComplexApprox, ComplexApprox) {
    let prec = x.precision();
    let mut v = ComplexApprox::zero(prec);
    let mut dv = ComplexApprox::zero(prec);
    for c in p.iter().rev() {
        dv = dv * x + &v;
        v = v * x + c;
    }
    (v, dv)
}

fn max_coeff(p: &[ComplexApprox]) -> Real {
    p.iter().map(|c| c.max_abs()).fold(real_from_int(0, 64), |a, b| if b > a { b } else { a })
}

/// All `d` roots, with multiplicity, of a monic polynomial given by its
/// coefficients `[a₀, …, a_{d−1}, 1]`.
///
/// Aberth–Ehrlich simultaneous iteration at the coefficients' precision,
/// followed by Newton polishing. Each root is accepted only if
/// `|p(r)| <= eps_rank · (1 + max|aᵢ|)^d`.
pub fn poly_roots(coeffs: &[ComplexApprox], tol: &ToleranceProfile) -> Result<Vec<ComplexApprox>> {
    let d = coeffs.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
        Error::PreconditionViolated("polynomial must have degree at least 1".into())
    })?;
    let prec = coeffs[d].precision();
    let one = ComplexApprox::one(prec);
    if (coeffs[d].clone() - &one).max_abs() > real_from_f64(tol.eps_residual, prec) {
        return Err(Error::PreconditionViolated("polynomial must be monic".into()));
    }
    // trailing zero roots are exact
    let zeros = coeffs.iter().take_while(|c| Scalar::is_zero(*c)).count();
    let p = &coeffs[zeros..];
    let dd = d - zeros;
    let mut roots = vec![ComplexApprox::zero(prec); zeros];
    if dd == 0 {
        return Ok(roots);
    }
    if dd == 1 {
        roots.push(-p[0].clone());
        return Ok(roots);
    }

    let bound = real_from_int(1, prec) + max_coeff(&p[..dd]);
    let radius = bound.to_f64().value().min(1e300);
    let mut z: Vec<ComplexApprox> = (0..dd)
        .map(|j| {
            let ang = 2.0 * std::f64::consts::PI * (j as f64) / (dd as f64) + 0.4;
            ComplexApprox::from_f64(0.5 * radius * ang.cos(), 0.5 * radius * ang.sin(), prec)
        })
        .collect();

    let stop = -(prec as isize) + 4;
    let mut converged = false;
    for _ in 0..(40 + 4 * prec) {
        let mut worst = isize::MIN;
        for i in 0..dd {
            let (v, dv) = eval_with_derivative(p, &z[i]);
            if Scalar::is_zero(&v) {
                continue;
            }
            let Some(dinv) = dv.recip() else { continue };
            let ratio = v * &dinv;
            let mut sum = ComplexApprox::zero(prec);
            for j in 0..dd {
                if j != i {
                    if let Some(r) = (z[i].clone() - &z[j]).recip() {
                        sum = sum + &r;
                    }
                }
            }
            let denom = one.clone() - ratio.clone() * &sum;
            let step = match denom.recip() {
                Some(r) => ratio * &r,
                None => ratio,
            };
            let scale = binary_exponent(&z[i].max_abs()).unwrap_or(0).max(0);
            if let Some(e) = binary_exponent(&step.max_abs()) {
                worst = worst.max(e - scale);
            }
            z[i] = z[i].clone() - &step;
        }
        if worst < stop {
            converged = true;
            break;
        }
    }

    for r in z.iter_mut() {
        for _ in 0..4 {
            let (v, dv) = eval_with_derivative(p, r);
            match dv.recip() {
                Some(inv) if !Scalar::is_zero(&v) => *r = r.clone() - &(v * &inv),
                _ => break,
            }
        }
    }

    let limit = {
        let base = real_from_int(1, prec) + max_coeff(coeffs);
        let mut lim = real_from_f64(tol.eps_rank, prec);
        for _ in 0..d {
            lim *= &base;
        }
        lim
    };
    for r in &z {
        let v = eval(p, r);
        if v.max_abs() > limit {
            return Err(Error::NonConvergence(format!(
                "root residual above bound after {} iterations (converged: {converged})",
                40 + 4 * prec
            )));
        }
    }
    roots.extend(z);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    fn from_roots(rs: &[GaussianRational]) -> ExactPoly {
        rs.iter().fold(vec![q(1)], |acc, r| mul(&acc, &[-r.clone(), q(1)]))
    }

    fn sorted_c64(roots: &[ComplexApprox]) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = roots.iter().map(|r| r.to_c64()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn roots_of_small_examples() {
        let tol = ToleranceProfile::default();
        let r = poly_roots(&to_approx(&[q(-1), q(0), q(1)], 256), &tol).unwrap();
        let v = sorted_c64(&r);
        assert!((v[0].0 + 1.0).abs() < 1e-30 && (v[1].0 - 1.0).abs() < 1e-30);

        let r = poly_roots(&to_approx(&[q(0), q(0), q(0), q(1)], 256), &tol).unwrap();
        assert!(r.iter().all(Scalar::is_zero));

        let r = poly_roots(&to_approx(&[q(2), q(-3), q(1)], 256), &tol).unwrap();
        for (root, want) in sorted_c64(&r).iter().zip([1.0, 2.0]) {
            // back-substitution: p(want) = 0 exactly, so the root must sit on it
            assert!((root.0 - want).abs() < 1e-30 && root.1.abs() < 1e-30);
        }
    }

    #[test]
    fn recovers_planted_rational_roots() {
        let tol = ToleranceProfile::default();
        let planted = [
            GaussianRational::ratio(1, 3),
            GaussianRational::from_parts(-2, 1, 1, 2),
            q(5),
            GaussianRational::from_parts(0, 1, -7, 4),
            q(-1),
        ];
        let p = from_roots(&planted);
        let roots = poly_roots(&to_approx(&p, 256), &tol).unwrap();
        for want in &planted {
            let w = want.to_approx(256);
            let best = roots
                .iter()
                .map(|r| (r.clone() - &w).abs().to_f64().value())
                .fold(f64::INFINITY, f64::min);
            assert!(best < tol.eps_cluster, "{want} not recovered: {best}");
        }
    }

    #[test]
    fn multiple_roots_still_meet_residual_bound() {
        let tol = ToleranceProfile::default();
        let p = from_roots(&[q(2), q(2), q(2), q(-1)]);
        let roots = poly_roots(&to_approx(&p, 256), &tol).unwrap();
        assert_eq!(roots.len(), 4);
    }

    #[test]
    fn rejects_non_monic_and_constant() {
        let tol = ToleranceProfile::default();
        assert!(poly_roots(&to_approx(&[q(1), q(2)], 128), &tol).is_err());
        assert!(poly_roots(&to_approx(&[q(1)], 128), &tol).is_err());
    }

    #[test]
    fn square_free_splits_multiplicities() {
        let p = from_roots(&[q(1), q(1), q(1), q(2), q(3), q(3)]);
        let parts = square_free(&p);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], (from_roots(&[q(2)]), 1));
        assert_eq!(parts[1], (from_roots(&[q(3)]), 2));
        assert_eq!(parts[2], (from_roots(&[q(1)]), 3));
        let p = from_roots(&[q(1), q(1), q(1), q(2), q(3), q(3), q(4), q(4), q(4)]);
        let parts = square_free(&p);
        assert_eq!(parts[2], (from_roots(&[q(1), q(4)]), 3));
    }

    #[test]
    fn divrem_reconstructs() {
        let a = from_roots(&[q(1), q(-2), GaussianRational::i(), q(7)]);
        let b = vec![q(3), GaussianRational::ratio(1, 2), q(2)];
        let (quot, rem) = divrem(&a, &b);
        let back = sub(&mul(&quot, &b), &sub(&a, &rem));
        assert!(back.is_empty());
    }
}
