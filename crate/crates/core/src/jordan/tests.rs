use super::*;
use crate::linalg::rank;
use crate::sampling;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type G = GaussianRational;

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn summary(s: &JordanStructure) -> Vec<(String, usize)> {
    s.blocks
        .iter()
        .map(|b| (b.exact.as_ref().map_or_else(|| format!("{:?}", b.eigenvalue.to_c64()), |e| e.to_string()), b.size))
        .collect()
}

fn owned(v: &[(&str, usize)]) -> Vec<(String, usize)> {
    v.iter().map(|(a, b)| (a.to_string(), *b)).collect()
}

#[test]
fn small_examples() {
    let d = jordan_form(&ExactMat::exact_from_i64(&[&[2, 0], &[0, 2]]), &tol()).unwrap();
    assert_eq!(summary(&d.structure), owned(&[("2", 1), ("2", 1)]));
    let d = jordan_form(&ExactMat::exact_from_i64(&[&[0, 1], &[0, 0]]), &tol()).unwrap();
    assert_eq!(summary(&d.structure), owned(&[("0", 2)]));
}

#[test]
fn planted_conjugate_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let j = sampling::jordan_matrix(&[(G::from_int(3), 2), (G::default(), 1)]);
    let (b, _) = sampling::conjugate(&mut rng, &j, 3);
    let d = jordan_form(&b, &tol()).unwrap();
    assert_eq!(summary(&d.structure), owned(&[("3", 2), ("0", 1)]));
    assert!(d.residual <= tol().eps_residual);
}

#[test]
fn ordering_of_nonzero_eigenvalues() {
    let j = sampling::jordan_matrix(&[
        (G::default(), 1),
        (G::from_int(1), 1),
        (G::from_int(-2), 1),
        (G::from_int(2), 2),
        (G::default(), 2),
    ]);
    let d = jordan_form(&j, &tol()).unwrap();
    assert_eq!(summary(&d.structure), owned(&[("2", 2), ("-2", 1), ("1", 1), ("0", 2), ("0", 1)]));
    d.structure.check_canonical().unwrap();
}

#[test]
fn irrational_eigenvalues_are_approximated() {
    let b = ExactMat::exact_from_i64(&[&[0, 1, 0], &[2, 0, 0], &[0, 0, 0]]);
    let d = jordan_form(&b, &tol()).unwrap();
    assert_eq!(d.structure.blocks.len(), 3);
    assert_eq!(d.structure.zero_partition(), vec![1]);
    let (x, _) = d.structure.blocks[0].eigenvalue.to_c64();
    assert!((x.abs() - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn approximate_input_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let j = sampling::jordan_matrix(&[(G::from_int(2), 2), (G::from_int(-1), 1), (G::default(), 1)]);
    let (b, _) = sampling::conjugate(&mut rng, &j, 2);
    let d = jordan_form(&b.to_approx(256), &tol()).unwrap();
    let sizes: Vec<usize> = d.structure.blocks.iter().map(|b| b.size).collect();
    assert_eq!(sizes, vec![2, 1, 1]);
    assert_eq!(d.structure.r0(), 1);
    assert!(d.residual <= tol().eps_residual);
}

#[test]
fn zero_stats_examples() {
    let j = sampling::jordan_matrix(&[(G::from_int(2), 1), (G::default(), 2), (G::default(), 1)]);
    let z = zero_stats(&jordan_form(&j, &tol()).unwrap());
    assert_eq!(z, ZeroStats { r0: 2, r_prime: 1, n0: 3, partition: vec![2, 1] });
    let z = zero_stats(&jordan_form(&ExactMat::exact_identity(3), &tol()).unwrap());
    assert_eq!((z.r0, z.n0), (0, 0));
    let z = zero_stats(&jordan_form(&ExactMat::jordan_block(&G::default(), 4, ()), &tol()).unwrap());
    assert_eq!((z.r0, z.n0), (1, 4));
}

#[test]
fn permutation_examples() {
    let s = JordanStructure::from_exact(&[(G::from_int(5), 1), (G::default(), 2), (G::default(), 1)], 128);
    let t = nilpotent_tail_permutation(&s).unwrap();
    assert_eq!(t.ell, vec![2, 3]);
    assert_eq!(t.sigma, vec![0, 1, 2, 3]);

    let s = JordanStructure::from_exact(&[(G::default(), 2), (G::default(), 2)], 128);
    let t = nilpotent_tail_permutation(&s).unwrap();
    assert_eq!(t.ell, vec![1, 3]);
    assert_eq!(t.sigma, vec![0, 2, 1, 3]);

    let s = JordanStructure::from_exact(&[(G::from_int(1), 2), (G::from_int(3), 1)], 128);
    assert_eq!(nilpotent_tail_permutation(&s).unwrap().sigma, vec![0, 1, 2]);
}

#[test]
fn bad_ordering_rejected() {
    let s = JordanStructure::from_exact(&[(G::default(), 1), (G::from_int(1), 1)], 128);
    assert!(matches!(nilpotent_tail_permutation(&s), Err(Error::BadOrdering(_))));
    let s = JordanStructure::from_exact(&[(G::default(), 1), (G::default(), 2)], 128);
    assert!(matches!(nilpotent_tail_permutation(&s), Err(Error::BadOrdering(_))));
}

#[test]
fn core_form_is_identity_on_canonical_input() {
    let j = sampling::jordan_matrix(&[(G::from_int(2), 2), (G::default(), 3), (G::default(), 1)]);
    let f = CoreNilpotentForm::from_matrix(&j, &tol()).unwrap();
    assert_eq!(f.g, ExactMat::exact_identity(6));
    assert_eq!(f.zero_partition, vec![3, 1]);
    let j = sampling::jordan_matrix(&[(G::default(), 2), (G::default(), 2)]);
    let f = CoreNilpotentForm::from_matrix(&j, &tol()).unwrap();
    assert_eq!(f.g, ExactMat::exact_identity(4));
}

fn planted<R: Rng>(rng: &mut R, n: usize) -> Vec<(G, usize)> {
    sampling::partition(rng, n).into_iter().map(|s| (G::from_int(rng.gen_range(-3..=3)), s)).collect()
}

/// Canonical block multiset of a planted list, for comparison.
fn canonical(blocks: &[(G, usize)]) -> Vec<(String, usize)> {
    let s = JordanStructure::from_exact(blocks, 256);
    let d = jordan_form(&s.exact_matrix().unwrap(), &tol()).unwrap();
    summary(&d.structure)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planted_structures_recovered(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks = planted(&mut rng, n);
        let j = sampling::jordan_matrix(&blocks);
        let (b, _) = sampling::conjugate(&mut rng, &j, 3);
        let d = jordan_form(&b, &tol()).unwrap();
        prop_assert_eq!(summary(&d.structure), canonical(&blocks));
        prop_assert!(d.residual <= tol().eps_residual);
        prop_assert_eq!(d.structure.r0(), n - rank(&b, &tol()).unwrap());
    }

    #[test]
    fn core_form_matches_jordan_statistics(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks = planted(&mut rng, n);
        let (b, _) = sampling::conjugate(&mut rng, &sampling::jordan_matrix(&blocks), 3);
        let f = CoreNilpotentForm::from_matrix(&b, &tol()).unwrap();
        let d = jordan_form(&b, &tol()).unwrap();
        prop_assert_eq!(f.zero_partition.clone(), d.structure.zero_partition());
        prop_assert_eq!(f.core_dim(), n - d.structure.n0());
    }

    #[test]
    fn tail_rows_are_the_ell_rows(seed in any::<u64>(), n in 1usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n0 = rng.gen_range(0..=n);
        let part = sampling::partition(&mut rng, n0);
        let t = tail_permutation(n, &part).unwrap();
        let c = sampling::matrix(&mut rng, n, 5, true);
        let cp = t.apply(&c);
        prop_assert_eq!(&t.p.transpose() * &(&c * &t.p), cp.clone());
        let r0 = part.len();
        for (s, &l) in t.ell.iter().enumerate() {
            let moved: Vec<G> = t.sigma.iter().map(|&j| cp.get(n - r0 + s, j).clone()).collect();
            prop_assert_eq!(moved, c.row(l));
        }
        prop_assert_eq!(t.unapply(&cp), c);
    }
}
