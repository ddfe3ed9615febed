use dualitylab::linalg::field::{crt, random_primes, rational_reconstruct};
use dualitylab::linalg::{kernel, q, q_frac, rank, Field, PrimeField, QMatrix, Rationals, SparseVec, SubspaceBasis, Q};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> QMatrix {
    QMatrix::from_triplets(&Rationals, rows, cols, entries.iter().enumerate().map(|(k, &v)| (k / cols, k % cols, q(v))))
}

fn small_matrix(max: usize) -> impl Strategy<Value = QMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(-3i64..=3, r * c).prop_map(move |e| matrix(r, c, &e)))
}

fn sparse_vectors(count: usize, dim: usize) -> impl Strategy<Value = Vec<SparseVec<Q>>> {
    prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -2i64..=2], dim), 0..=count).prop_map(|vs| {
        vs.into_iter().map(|v| v.into_iter().enumerate().filter(|(_, x)| *x != 0).map(|(i, x)| (i, q(x))).collect()).collect()
    })
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_column_count(m in small_matrix(8)) {
        let k = kernel(&m);
        prop_assert_eq!(rank(&m) + k.dim(), m.cols());
        for v in k.vectors() {
            let dense: Vec<Q> = (0..m.cols()).map(|c| v.iter().find(|(i, _)| *i == c).map_or(q(0), |(_, x)| x.clone())).collect();
            prop_assert!(m.apply(&dense).iter().all(|x| *x == q(0)));
        }
    }

    #[test]
    fn rank_is_transpose_invariant(m in small_matrix(7)) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn rref_is_idempotent(vs in sparse_vectors(10, 12)) {
        let a = SubspaceBasis::span(&Rationals, 12, vs.iter());
        let b = SubspaceBasis::span(&Rationals, 12, a.vectors().iter());
        prop_assert_eq!(a.vectors(), b.vectors());
        prop_assert_eq!(a.pivot_cols(), b.pivot_cols());
    }

    #[test]
    fn prime_rank_equals_rational_rank_for_small_entries(m in small_matrix(8), seed in any::<u64>()) {
        // Hadamard's bound keeps every minor below the 61-bit prime
        let p = random_primes(seed, 1, 62)[0];
        let f = PrimeField::new(p).unwrap();
        prop_assert_eq!(rank(&m.reduce(&f).unwrap()), rank(&m));
    }

    #[test]
    fn kron_mixed_product_and_trace(a in small_matrix(3), b in small_matrix(3)) {
        let (n, k) = (a.rows().min(a.cols()), b.rows().min(b.cols()));
        let a = QMatrix::from_triplets(&Rationals, n, n, a.iter().filter(|(r, c, _)| *r < n && *c < n).map(|(r, c, v)| (r, c, v.clone())));
        let b = QMatrix::from_triplets(&Rationals, k, k, b.iter().filter(|(r, c, _)| *r < k && *c < k).map(|(r, c, v)| (r, c, v.clone())));
        let c = a.pow(2).add(&QMatrix::identity(&Rationals, n));
        let d = b.transpose();
        prop_assert_eq!(a.kron(&b).mul(&c.kron(&d)), a.mul(&c).kron(&b.mul(&d)));
        prop_assert_eq!(a.kron(&b).trace(), a.trace() * b.trace());
        prop_assert_eq!(a.kron(&b).transpose(), a.transpose().kron(&b.transpose()));
    }

    #[test]
    fn crt_then_reconstruction_recovers_fractions(num in -100_000i64..100_000, den in 1i64..100_000, seed in any::<u64>()) {
        let x = q_frac(num, den);
        let primes = random_primes(seed, 2, 62);
        let residues: Vec<(u64, u64)> = primes.iter().map(|&p| {
            let f = PrimeField::new(p).unwrap();
            let r = f.from_q(&x).unwrap();
            (f.to_scalar(&r).to_string().parse().unwrap(), p)
        }).collect();
        let (a, m) = crt(&residues);
        prop_assert_eq!(rational_reconstruct(&a, &m), Some(x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// `dim A + dim B = dim(A + B) + dim(A ∩ B)` in a 20-dimensional ambient space.
    #[test]
    fn subspace_dimension_formula(a in sparse_vectors(12, 20), b in sparse_vectors(12, 20)) {
        let sa = SubspaceBasis::span(&Rationals, 20, a.iter());
        let sb = SubspaceBasis::span(&Rationals, 20, b.iter());
        let sum = sa.sum(&sb).unwrap();
        let cap = sa.intersection(&sb).unwrap();
        prop_assert_eq!(sa.dim() + sb.dim(), sum.dim() + cap.dim());
        prop_assert!(cap.is_subspace_of(&sa).unwrap() && cap.is_subspace_of(&sb).unwrap());
        prop_assert!(sa.is_subspace_of(&sum).unwrap() && sb.is_subspace_of(&sum).unwrap());
    }
}

#[test]
fn intersection_of_coordinate_planes() {
    let e = |i: usize| vec![(i, q(1))];
    let a = SubspaceBasis::span(&Rationals, 4, [e(0), e(1)].iter());
    let b = SubspaceBasis::span(&Rationals, 4, [e(1), e(2)].iter());
    let cap = a.intersection(&b).unwrap();
    assert_eq!(cap.dim(), 1);
    assert!(cap.contains(&e(1)));
}
