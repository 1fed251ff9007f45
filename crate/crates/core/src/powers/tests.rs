use super::*;
use crate::linalg::{distance_inf, rank};
use crate::sampling;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type G = GaussianRational;

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn part(v: &[usize]) -> Partition {
    Partition::from(v)
}

/// Block sizes of a nilpotent matrix counted directly from ranks of powers:
/// the number of blocks of size at least `s` is `rank(K^{s−1}) − rank(K^s)`.
fn blocks_by_rank(k: &ExactMat) -> Vec<usize> {
    let n = k.n();
    let mut ranks = vec![n];
    let mut pw = ExactMat::exact_identity(n);
    while *ranks.last().unwrap() > 0 {
        pw = &pw * k;
        ranks.push(rank(&pw, &tol()).unwrap());
    }
    let mut sizes = Vec::new();
    for s in 1..ranks.len() {
        let at_least = ranks[s - 1] - ranks[s];
        let longer = if s + 1 < ranks.len() { ranks[s] - ranks[s + 1] } else { 0 };
        sizes.extend(std::iter::repeat_n(s, at_least - longer));
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

#[test]
fn miller_examples() {
    assert_eq!(miller_power(5, 2), part(&[3, 2]));
    assert_eq!(miller_power(4, 3), part(&[2, 1, 1]));
    assert_eq!(miller_power(3, 5), part(&[1, 1, 1]));
}

#[test]
fn partition_power_examples() {
    assert_eq!(partition_power(&part(&[4]), 2), part(&[2, 2]));
    assert_eq!(partition_power(&part(&[2, 2]), 2), part(&[1, 1, 1, 1]));
    assert_eq!(partition_power(&part(&[5, 3]), 2), part(&[3, 2, 2, 1]));
    let m = sampling::jordan_matrix(&[(G::default(), 5), (G::default(), 3)]);
    assert_eq!(blocks_by_rank(&m.pow(2)), vec![3, 2, 2, 1]);
}

#[test]
fn miller_matches_rank_of_powers() {
    for k in 2..=6u32 {
        for n in 1..=12 {
            let j = ExactMat::jordan_block(&G::default(), n, ());
            assert_eq!(miller_power(n, k).into_vec(), blocks_by_rank(&j.pow(k)), "n={n} k={k}");
        }
    }
}

#[test]
fn partitions_enumerated_in_decreasing_order() {
    let all: Vec<Vec<usize>> = Partitions::new(5).collect();
    assert_eq!(
        all,
        vec![vec![5], vec![4, 1], vec![3, 2], vec![3, 1, 1], vec![2, 2, 1], vec![2, 1, 1, 1], vec![1, 1, 1, 1, 1]]
    );
    assert_eq!(Partitions::new(12).count(), 77);
    assert_eq!(Partitions::new(0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
}

#[test]
fn witness_examples() {
    assert_eq!(kth_power_witness(&part(&[2, 2]), 2).unwrap(), part(&[4]));
    assert_eq!(kth_power_witness(&part(&[2]), 3), Err(Error::NotAPower { k: 3 }));
    assert_eq!(kth_power_witness(&part(&[1, 1, 1]), 2).unwrap(), part(&[2, 1]));
    assert_eq!(kth_power_witness(&Partition::default(), 4).unwrap(), Partition::default());
}

#[test]
fn witness_is_exhaustive() {
    for k in 2..=4u32 {
        for w in 1..=9 {
            for target in Partitions::new(w).map(Partition) {
                let found = kth_power_witness(&target, k);
                let any = Partitions::new(w).map(Partition).any(|p| partition_power(&p, k) == target);
                assert_eq!(found.is_ok(), any);
                // a single block's power has largest part at most ⌈w/k⌉
                if target.largest() > w.div_ceil(k as usize) {
                    assert!(found.is_err());
                }
            }
        }
    }
}

#[test]
fn is_kth_power_examples() {
    assert_eq!(is_kth_power(&ExactMat::exact_identity(3), 5, &tol()).unwrap(), (true, Some(Partition::default())));
    let j2 = ExactMat::jordan_block(&G::default(), 2, ());
    assert_eq!(is_kth_power(&j2, 3, &tol()).unwrap(), (false, None));
    let jj = sampling::jordan_matrix(&[(G::default(), 2), (G::default(), 2)]);
    assert_eq!(is_kth_power(&jj, 2, &tol()).unwrap(), (true, Some(part(&[4]))));
    assert_eq!(is_kth_power(&jj.to_approx(256), 2, &tol()).unwrap(), (true, Some(part(&[4]))));
}

#[test]
fn root_examples() {
    let x = matrix_kth_root(&ExactMat::exact_identity(3), 4, &tol()).unwrap();
    assert!(distance_inf(&x, &ExactMat::exact_identity(3)) < 1e-60);
    let x = matrix_kth_root(&ExactMat::exact_from_i64(&[&[4, 0], &[0, 9]]), 2, &tol()).unwrap();
    assert!(distance_inf(&x, &ExactMat::exact_from_i64(&[&[2, 0], &[0, 3]])) < 1e-60);
    let x = matrix_kth_root(&ExactMat::jordan_block(&G::from_int(1), 2, ()), 2, &tol()).unwrap();
    let want = ExactMat::from_rows(vec![vec![G::from_int(1), G::ratio(1, 2)], vec![G::default(), G::from_int(1)]], ())
        .unwrap();
    assert!(distance_inf(&x, &want) < 1e-60);
}

#[test]
fn root_of_nilpotent_part() {
    let m = sampling::jordan_matrix(&[(G::from_int(-4), 1), (G::default(), 2), (G::default(), 2)]);
    let x = matrix_kth_root(&m, 2, &tol()).unwrap();
    assert!(distance_inf(&x.pow(2), &m) <= tol().eps_residual);
    assert!(matches!(matrix_kth_root(&ExactMat::jordan_block(&G::default(), 2, ()), 2, &tol()), Err(Error::NotAPower { .. })));
    let y = nilpotent_kth_root(&part(&[1, 1, 1]), 2, &tol()).unwrap();
    assert!(y.pow(2).is_zero() && !y.is_zero());
}

#[test]
fn order_one_rejected() {
    assert!(matches!(kth_power_witness(&part(&[1]), 1), Err(Error::PreconditionViolated(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn root_roundtrip_invertible(seed in any::<u64>(), n in 1usize..=4, k in 2u32..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = sampling::invertible(&mut rng, n, 5);
        let x = matrix_kth_root(&m, k, &tol()).unwrap();
        prop_assert!(distance_inf(&x.pow(k), &m) <= tol().eps_residual);
    }

    #[test]
    fn root_roundtrip_planted_nilpotent(seed in any::<u64>(), k in 2u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weight = rng.gen_range(1..=4);
        let w = Partition::new(sampling::partition(&mut rng, weight));
        let mut blocks: Vec<(G, usize)> = vec![(G::from_int(rng.gen_range(1..=3)), 1)];
        blocks.extend(partition_power(&w, k).parts().iter().map(|&s| (G::default(), s)));
        let (m, _) = sampling::conjugate(&mut rng, &sampling::jordan_matrix(&blocks), 2);
        let x = matrix_kth_root(&m, k, &tol()).unwrap();
        prop_assert!(distance_inf(&x.pow(k), &m) <= tol().eps_residual);
    }
}
