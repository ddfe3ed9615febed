use dualitylab::engine::trace_pairing_j;
use dualitylab::forms::{build_space, Family, FormedSpace, InvariantForm};
use dualitylab::linalg::{inverse, q, QMatrix, Rationals, Q};
use dualitylab::tensor::{
    casimir_op, casimir_pair_op, contraction_op, contraction_op_in_basis, derivation_action, perm_op, power_tensor_op, swap_op,
};
use proptest::prelude::*;

fn formed() -> impl Strategy<Value = (Family, usize)> {
    prop_oneof![Just((Family::SoOdd, 1)), Just((Family::SoEven, 1)), Just((Family::SoEven, 2)), Just((Family::Sp, 1)), Just((Family::Sp, 2))]
}

fn ints(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, len)
}

fn lie(s: &FormedSpace, c: &[i64]) -> QMatrix {
    let b = s.lie_basis();
    b.combine(&c[..b.dim()].iter().map(|&x| q(x)).collect::<Vec<_>>())
}

fn square(n: usize, v: &[i64]) -> QMatrix {
    QMatrix::from_triplets(&Rationals, n, n, (0..n * n).map(|k| (k / n, k % n, q(v[k]))))
}

fn setup() -> impl Strategy<Value = ((Family, usize), Vec<i64>, Vec<i64>)> {
    formed().prop_flat_map(|(f, r)| {
        let m = f.lie_dim(f.dim_for_rank(r));
        (Just((f, r)), ints(m), ints(m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phi_is_a_lie_homomorphism(((f, r), a, b) in setup(), d in 1usize..=3) {
        let s = build_space(f, r).unwrap();
        let n = s.dim();
        let (x, y) = (lie(&s, &a), lie(&s, &b));
        let px = derivation_action(n, d, &x, "x").unwrap().matrix;
        let py = derivation_action(n, d, &y, "y").unwrap().matrix;
        let pxy = derivation_action(n, d, &x.commutator(&y), "xy").unwrap().matrix;
        prop_assert_eq!(px.commutator(&py), pxy);
    }

    #[test]
    fn swaps_and_contractions_commute_with_phi(((f, r), a, _b) in setup(), d in 2usize..=3) {
        let s = build_space(f, r).unwrap();
        let x = derivation_action(s.dim(), d, &lie(&s, &a), "x").unwrap().matrix;
        for i in 1..=d {
            for j in (i + 1)..=d {
                let sw = swap_op(&s, d, i, j).unwrap().matrix;
                let g = contraction_op(&s, d, i, j).unwrap().matrix;
                prop_assert!(x.commutator(&sw).is_zero());
                prop_assert!(x.commutator(&g).is_zero());
            }
        }
    }

    #[test]
    fn contraction_is_basis_independent(((f, r), a, _b) in setup(), shift in 1i64..=3) {
        let s = build_space(f, r).unwrap();
        let n = s.dim();
        // unipotent upper triangular change of basis, always invertible
        let vals: Vec<i64> = (0..n * n).map(|k| if k / n == k % n { 1 } else if k / n < k % n { a[k % a.len()] + shift } else { 0 }).collect();
        let p = square(n, &vals);
        prop_assert!(inverse(&p).is_some());
        let basis: Vec<Vec<Q>> = (0..n).map(|c| (0..n).map(|rr| p.get(rr, c)).collect()).collect();
        let other = contraction_op_in_basis(&s, 2, 1, 2, &basis).unwrap().matrix;
        prop_assert_eq!(other, contraction_op(&s, 2, 1, 2).unwrap().matrix);
    }

    #[test]
    fn casimir_is_central_and_basis_free(((f, r), a, b) in setup()) {
        let s = build_space(f, r).unwrap();
        let basis = s.lie_basis();
        let m = basis.dim();
        // an invertible recombination: identity plus a strictly upper part
        let rows: Vec<Vec<Q>> = (0..m).map(|i| (0..m).map(|j| if i == j { q(1) } else if i < j { q(b[(i + j) % b.len()]) } else { q(0) }).collect()).collect();
        let other = basis.recombined(&rows);
        let c1 = casimir_op(&s, &basis, 1, 1, InvariantForm::Trace).unwrap().matrix;
        prop_assert_eq!(&c1, &casimir_op(&s, &other, 1, 1, InvariantForm::Trace).unwrap().matrix);
        prop_assert!(c1.commutator(&lie(&s, &a)).is_zero());
        let p1 = casimir_pair_op(&s, &basis, 2, 1, 2, InvariantForm::Trace).unwrap().matrix;
        prop_assert_eq!(p1, casimir_pair_op(&s, &other, 2, 1, 2, InvariantForm::Trace).unwrap().matrix);
    }

    /// `Tr(X(l)·b·Y) = (-1)^{Σl} Tr(b·Y')` where `Y = ⊗θ(u_i⊗w_i)` and
    /// `Y' = ⊗θ(u_i⊗X^{l_i}w_i)`, for `b` in `B_2`.
    #[test]
    fn power_transport_identity(((f, r), a, _b) in setup(), l in prop::collection::vec(0u32..=2, 2), coefs in ints(3), vecs in prop::collection::vec(ints(4), 4)) {
        let s = build_space(f, r).unwrap();
        let n = s.dim();
        let x = lie(&s, &a);
        let id = QMatrix::identity(&Rationals, n * n);
        let b = id.scale(&q(coefs[0]))
            .add(&swap_op(&s, 2, 1, 2).unwrap().matrix.scale(&q(coefs[1])))
            .add(&contraction_op(&s, 2, 1, 2).unwrap().matrix.scale(&q(coefs[2])));
        let v = |k: usize| -> Vec<Q> { (0..n).map(|i| q(vecs[k][i % 4] + i as i64 % 2)).collect() };
        let (u1, w1, u2, w2) = (v(0), v(1), v(2), v(3));
        let y = s.theta_op(&u1, &w1).unwrap().kron(&s.theta_op(&u2, &w2).unwrap());
        let y2 = s.theta_op(&u1, &x.pow(l[0]).apply(&w1)).unwrap().kron(&s.theta_op(&u2, &x.pow(l[1]).apply(&w2)).unwrap());
        let xl = power_tensor_op(n, &x, &l, "x").unwrap().matrix;
        let sign = if (l[0] + l[1]) % 2 == 0 { q(1) } else { q(-1) };
        prop_assert_eq!(xl.mul(&b).mul(&y).trace(), sign * b.mul(&y2).trace());
    }

    #[test]
    fn j_pairing_matches_kronecker_trace(((f, r), a, b) in setup(), c in ints(3)) {
        let s = build_space(f, r).unwrap();
        let n = s.dim();
        let xs = [square(n, &(0..n * n).map(|k| a[k % a.len()] + (k % 3) as i64).collect::<Vec<_>>()), square(n, &(0..n * n).map(|k| b[k % b.len()]).collect::<Vec<_>>())];
        let bm = swap_op(&s, 2, 1, 2).unwrap().matrix.scale(&q(c[0])).add(&contraction_op(&s, 2, 1, 2).unwrap().matrix.scale(&q(c[1])));
        prop_assert_eq!(trace_pairing_j(&bm, n, &xs).unwrap(), bm.mul(&xs[0].kron(&xs[1])).trace());
    }
}

#[test]
fn contraction_relations() {
    for (f, r) in [(Family::SoOdd, 1), (Family::SoEven, 2), (Family::Sp, 1), (Family::Sp, 2)] {
        let s = build_space(f, r).unwrap();
        let n = s.dim() as i64;
        let g = contraction_op(&s, 2, 1, 2).unwrap().matrix;
        let sw = swap_op(&s, 2, 1, 2).unwrap().matrix;
        let eps = if f == Family::Sp { -1 } else { 1 };
        assert_eq!(g.mul(&g), g.scale(&q(n)), "{f:?}");
        assert_eq!(g.mul(&sw), g.scale(&q(eps)), "{f:?}");
        assert_eq!(sw.mul(&g), g.scale(&q(eps)), "{f:?}");
    }
}

#[test]
fn place_permutations_compose() {
    let s = build_space(Family::Sp, 1).unwrap();
    let perms: [[usize; 3]; 3] = [[1, 2, 0], [1, 0, 2], [2, 1, 0]];
    for a in &perms {
        for b in &perms {
            let ab: Vec<usize> = (0..3).map(|k| a[b[k]]).collect();
            let lhs = perm_op(&s, 3, a).unwrap().matrix.mul(&perm_op(&s, 3, b).unwrap().matrix);
            assert_eq!(lhs, perm_op(&s, 3, &ab).unwrap().matrix);
        }
    }
}
