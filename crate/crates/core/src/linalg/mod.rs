//! Dense matrices over either scalar kind, elimination-based kernels and the
//! characteristic polynomial.

mod charpoly;
mod elim;
mod mat;

pub use charpoly::{berkowitz, char_poly, hessenberg_char_poly};
pub use elim::{
    constrained_basis_completion, det, extend_to_basis, greedy_independent, inverse, kernel, kernel_with_free, kernel_with_scale, nullity, rank, rref, rref_with_scale,
    shift_submatrix, solve_vec, unit_vector, Echelon, RowSpan,
};
pub use mat::{distance_inf, ApproxMat, ExactMat, Mat};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{GaussianRational, Scalar, ToleranceProfile};
    use crate::error::Error;
    use proptest::prelude::*;

    type G = GaussianRational;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn m(rows: &[&[i64]]) -> ExactMat {
        ExactMat::exact_from_i64(rows)
    }

    fn poly(cs: &[i64]) -> Vec<G> {
        cs.iter().map(|&c| G::from_int(c)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ExactMat::exact_identity(3), &tol()).unwrap(), 3);
        assert_eq!(rank(&ExactMat::exact_zeros(4), &tol()).unwrap(), 0);
        let j = ExactMat::jordan_block(&G::default(), 3, ());
        assert_eq!(rank(&j, &tol()).unwrap(), 2);
    }

    #[test]
    fn fragile_pivot_is_reported() {
        let t = tol();
        let tiny = 3.0 * t.eps_rank;
        let a = ApproxMat::from_fn(2, 2, 256, |i, j| {
            let v = match (i, j) {
                (0, 0) => 1.0,
                (1, 1) => tiny,
                _ => 0.0,
            };
            crate::arithmetic::ComplexApprox::from_f64(v, 0.0, 256)
        });
        assert!(matches!(rank(&a, &t), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&m(&[&[1, 0], &[0, 2]])), poly(&[2, -3, 1]));
        let j = ExactMat::jordan_block(&G::default(), 4, ());
        assert_eq!(char_poly(&j), poly(&[0, 0, 0, 0, 1]));
    }

    #[test]
    fn char_poly_factors_for_zero_row_shape() {
        // 𝓘 = {1, 2} (0-based), one zero row, first row e₀; T_𝓘 invertible
        let t = m(&[&[1, 0, 0, 0], &[0, 0, 0, 0], &[3, 1, 2, 5], &[-1, 4, 1, 2]]);
        let sub = shift_submatrix(&t, &[1, 2]).unwrap();
        assert_eq!(sub, m(&[&[0, 0], &[2, 5]]));
        let t = m(&[&[1, 0, 0, 0], &[0, 0, 0, 0], &[3, 1, 2, 5], &[-1, 4, 1, 2]]);
        // z^m (z − 1) χ_{T'} where T' is the lower-right block acting on {2,3}
        let tail = t.block(2, 2, 2, 2);
        let chi_tail = char_poly(&tail);
        let expect = crate::arithmetic::poly::mul(&crate::arithmetic::poly::mul(&poly(&[0, 1]), &poly(&[-1, 1])), &chi_tail);
        assert_eq!(char_poly(&t), expect);
    }

    #[test]
    fn shift_submatrix_definition() {
        let t = ExactMat::from_fn(4, 4, (), |i, j| G::from_int((10 * (i + 1) + j + 1) as i64));
        assert_eq!(shift_submatrix(&t, &[0]).unwrap(), m(&[&[12]]));
        assert_eq!(shift_submatrix(&t, &[0, 2]).unwrap(), m(&[&[12, 14], &[32, 34]]));
        assert!(matches!(shift_submatrix(&t, &[3]), Err(Error::IndexOutOfRange { index: 3, dim: 4 })));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&ExactMat::exact_identity(3), &tol()).unwrap(), ExactMat::exact_identity(3));
        let d = m(&[&[2, 0], &[0, 4]]);
        let inv = inverse(&d, &tol()).unwrap();
        assert_eq!(inv, ExactMat::diag(&[G::ratio(1, 2), G::ratio(1, 4)], ()));
        assert!(matches!(inverse(&m(&[&[1, 2], &[2, 4]]), &tol()), Err(Error::Singular)));
    }

    #[test]
    fn completion_examples() {
        let t = tol();
        let e1 = vec![G::from_int(1), G::from_int(0)];
        let out = constrained_basis_completion(&[e1], 2, &[1], (), &t).unwrap();
        assert_eq!(out, vec![vec![G::from_int(0), G::from_int(1)]]);

        let out = constrained_basis_completion::<G>(&[], 3, &[1, 2], (), &t);
        assert!(out.is_err(), "two coordinates cannot complete an empty set in dimension 3");

        let row = vec![G::from_int(1), G::from_int(1), G::from_int(0)];
        let out = constrained_basis_completion(std::slice::from_ref(&row), 3, &[1, 2], (), &t).unwrap();
        let mut all = vec![row];
        all.extend(out.iter().cloned());
        assert_eq!(rank(&ExactMat::from_rows(all, ()).unwrap(), &t).unwrap(), 3);
        let proj = ExactMat::from_rows(out, ()).unwrap().submatrix(&[0, 1], &[1, 2]);
        assert!(!det(&proj).is_zero());
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = kernel(&a, &tol()).unwrap();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Scalar::is_zero));
    }

    fn principal_minor_sums(a: &ExactMat) -> Vec<G> {
        let n = a.n();
        let mut out = vec![G::default(); n + 1];
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let size = idx.len();
            let minor = if size == 0 { G::from_int(1) } else { det(&a.submatrix(&idx, &idx)) };
            let sign = if size.is_multiple_of(2) { G::from_int(1) } else { G::from_int(-1) };
            out[n - size] = out[n - size].clone() + sign * &minor;
        }
        out
    }

    fn arb_entry() -> impl Strategy<Value = G> {
        (-9i64..10, 1i64..6, -3i64..4).prop_map(|(a, b, c)| G::from_parts(a, b, c, 1))
    }

    fn arb_square(max_n: usize) -> impl Strategy<Value = ExactMat> {
        (1..=max_n).prop_flat_map(|n| {
            prop::collection::vec(arb_entry(), n * n)
                .prop_map(move |v| ExactMat::from_fn(n, n, (), |i, j| v[i * n + j].clone()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn char_poly_is_principal_minor_sums(a in arb_square(5)) {
            prop_assert_eq!(char_poly(&a), principal_minor_sums(&a));
        }

        #[test]
        fn berkowitz_and_hessenberg_agree(a in arb_square(5)) {
            let t = tol();
            let exact = berkowitz(&a);
            let approx = hessenberg_char_poly(&a.to_approx(t.precision_bits));
            let scale = exact.iter().map(|c| c.to_approx(256).abs().to_f64().value()).fold(1.0, f64::max);
            for (e, x) in exact.iter().zip(&approx) {
                let d = (x.clone() - &e.to_approx(256)).abs().to_f64().value();
                prop_assert!(d <= t.eps_residual * scale, "{} vs {:?}", e, x);
            }
        }

        #[test]
        fn rank_plus_nullity(a in arb_square(6)) {
            let t = tol();
            let r = rank(&a, &t).unwrap();
            let k = kernel(&a, &t).unwrap();
            prop_assert_eq!(r + k.len(), a.n());
            for v in &k {
                prop_assert!(a.mul_vec(v).iter().all(Scalar::is_zero));
            }
        }

        #[test]
        fn inverse_multiplies_back(a in arb_square(5)) {
            let t = tol();
            if let Ok(inv) = inverse(&a, &t) {
                prop_assert_eq!(&a * &inv, ExactMat::exact_identity(a.n()));
            } else {
                prop_assert!(det(&a).is_zero());
            }
        }

        #[test]
        fn completion_meets_both_rank_conditions(n in 1usize..=8, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let t = tol();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let count = rng.gen_range(0..=n);
            let mut rows: Vec<Vec<G>> = Vec::new();
            let mut span = RowSpan::new(n, &t);
            while rows.len() < count {
                let v: Vec<G> = (0..n).map(|_| G::from_int(rng.gen_range(-2..3))).collect();
                if span.insert(&v).unwrap() {
                    rows.push(v);
                }
            }
            let q = n - count;
            let mut coords: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                coords.swap(i, j);
            }
            coords.truncate(q);
            coords.sort_unstable();
            let ts = constrained_basis_completion(&rows, n, &coords, (), &t).unwrap();
            let mut all = rows.clone();
            all.extend(ts.iter().cloned());
            if n > 0 {
                prop_assert_eq!(rank(&ExactMat::from_rows(all, ()).unwrap(), &t).unwrap(), n);
            }
            if q > 0 {
                let proj = ExactMat::from_rows(ts, ()).unwrap().submatrix(&(0..q).collect::<Vec<_>>(), &coords);
                prop_assert_eq!(rank(&proj, &t).unwrap(), q);
            }
        }
    }
}
