use dualitylab::forms::{build_space, Family, FormedSpace};
use dualitylab::linalg::{q, QMatrix, Rationals, Q};
use dualitylab::nilpotent::{build_nilpotent, centralizer_lie, Partition};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = (Family, usize)> {
    prop_oneof![Just(Family::SoOdd), Just(Family::SoEven), Just(Family::Sp)].prop_flat_map(|f| (Just(f), 1usize..=3))
}

fn ints(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, len)
}

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

fn square(n: usize, v: &[i64]) -> QMatrix {
    QMatrix::from_triplets(&Rationals, n, n, (0..n * n).map(|k| (k / n, k % n, q(v[k]))))
}

fn lie_element(s: &FormedSpace, coefs: &[i64]) -> QMatrix {
    let b = s.lie_basis();
    b.combine(&qs(&coefs[..b.dim()]))
}

fn epsilon(f: Family) -> Q {
    q(if f == Family::Sp { -1 } else { 1 })
}

proptest! {
    #[test]
    fn iota_is_an_anti_involution(((f, r), a, b) in family().prop_flat_map(|(f, r)| {
        let n = f.dim_for_rank(r);
        (Just((f, r)), ints(n * n), ints(n * n))
    })) {
        let s = build_space(f, r).unwrap();
        let n = s.dim();
        let (x, y) = (square(n, &a), square(n, &b));
        prop_assert_eq!(s.iota(&s.iota(&x).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(s.iota(&x.mul(&y)).unwrap(), s.iota(&y).unwrap().mul(&s.iota(&x).unwrap()));
        prop_assert_eq!(s.iota(&x).unwrap().trace(), x.trace());
    }

    #[test]
    fn iota_is_the_form_adjoint(((f, r), a, u, v) in family().prop_flat_map(|(f, r)| {
        let n = f.dim_for_rank(r);
        (Just((f, r)), ints(n * n), ints(n), ints(n))
    })) {
        let s = build_space(f, r).unwrap();
        let x = square(s.dim(), &a);
        let (u, v) = (qs(&u), qs(&v));
        prop_assert_eq!(s.pair(&x.apply(&v), &u).unwrap(), s.pair(&v, &s.iota(&x).unwrap().apply(&u)).unwrap());
    }

    #[test]
    fn lie_elements_are_iota_antisymmetric(((f, r), c) in family().prop_flat_map(|(f, r)| (Just((f, r)), ints(f.lie_dim(f.dim_for_rank(r)))))) {
        let s = build_space(f, r).unwrap();
        let x = lie_element(&s, &c);
        prop_assert_eq!(s.iota(&x).unwrap(), x.neg());
        prop_assert!(s.in_lie_algebra(&x));
    }

    #[test]
    fn rank_one_product_trace(((f, r), vs) in family().prop_flat_map(|(f, r)| {
        let n = f.dim_for_rank(r);
        (Just((f, r)), prop::collection::vec((ints(n), ints(n)), 1..=5))
    })) {
        let s = build_space(f, r).unwrap();
        let pairs: Vec<(Vec<Q>, Vec<Q>)> = vs.iter().map(|(u, w)| (qs(u), qs(w))).collect();
        let mut prod = QMatrix::identity(&Rationals, s.dim());
        for (u, w) in &pairs {
            prod = prod.mul(&s.theta_op(u, w).unwrap());
        }
        // independent oracle: <w_1,u_2><w_2,u_3>…<w_k,u_1> from the Gram matrix
        let g = s.gram().unwrap();
        let k = pairs.len();
        let mut expected = q(1);
        for i in 0..k {
            let (w, u) = (&pairs[i].1, &pairs[(i + 1) % k].0);
            let mut acc = q(0);
            for (a, b, gv) in g.iter() {
                acc += &w[a] * gv * &u[b];
            }
            expected *= acc;
        }
        prop_assert_eq!(prod.trace(), expected.clone());
        prop_assert_eq!(s.trace_rank_one_product(&pairs).unwrap(), expected);
    }

    #[test]
    fn iota_of_rank_one_operator(((f, r), u, w) in family().prop_flat_map(|(f, r)| {
        let n = f.dim_for_rank(r);
        (Just((f, r)), ints(n), ints(n))
    })) {
        let s = build_space(f, r).unwrap();
        let (u, w) = (qs(&u), qs(&w));
        let lhs = s.iota(&s.theta_op(&u, &w).unwrap()).unwrap();
        prop_assert_eq!(lhs, s.theta_op(&w, &u).unwrap().scale(&epsilon(f)));
    }

    /// `Tr(θ(Xu⊗w)) = Tr(θ(u⊗ι(X)w)) = -Tr(θ(u⊗Xw))` for `X ∈ g`.
    #[test]
    fn trace_transport_through_iota(((f, r), c, u, w) in family().prop_flat_map(|(f, r)| {
        let n = f.dim_for_rank(r);
        (Just((f, r)), ints(f.lie_dim(n)), ints(n), ints(n))
    })) {
        let s = build_space(f, r).unwrap();
        let x = lie_element(&s, &c);
        let (u, w) = (qs(&u), qs(&w));
        let lhs = s.theta_op(&x.apply(&u), &w).unwrap().trace();
        prop_assert_eq!(lhs.clone(), s.theta_op(&u, &s.iota(&x).unwrap().apply(&w)).unwrap().trace());
        prop_assert_eq!(lhs, -s.theta_op(&u, &x.apply(&w)).unwrap().trace());
    }

    #[test]
    fn bracket_stays_in_the_algebra(((f, r), a, b) in family().prop_flat_map(|(f, r)| {
        let m = f.lie_dim(f.dim_for_rank(r));
        (Just((f, r)), ints(m), ints(m))
    })) {
        let s = build_space(f, r).unwrap();
        let (x, y) = (lie_element(&s, &a), lie_element(&s, &b));
        prop_assert!(s.lie_basis().contains(&x.commutator(&y)));
    }
}

/// The literal sign `Tr(θ(Xu⊗w)) = -Tr(θ(u⊗ι(X)w))` fails on a witness.
#[test]
fn literal_transport_sign_fails() {
    let s = build_space(Family::SoOdd, 1).unwrap();
    let x = s.f(1, 1);
    let u = s.unit(1);
    let w = s.unit(-1);
    let lhs = s.theta_op(&x.apply(&u), &w).unwrap().trace();
    let literal = -s.theta_op(&u, &s.iota(&x).unwrap().apply(&w)).unwrap().trace();
    assert_ne!(lhs, q(0));
    assert_ne!(lhs, literal);
}

/// `dim g_e` is constant along the orbit: conjugating by a Cayley transform
/// of a Lie element leaves it unchanged.
#[test]
fn centralizer_dimension_is_conjugation_invariant() {
    for (f, r, p) in [(Family::Sp, 2, "2,1,1"), (Family::Sp, 2, "2,2"), (Family::SoOdd, 2, "3,1,1"), (Family::SoEven, 2, "3,1"), (Family::Sp, 3, "4,2")] {
        let s = build_space(f, r).unwrap();
        let basis = s.lie_basis();
        let datum = build_nilpotent(&s, &p.parse::<Partition>().unwrap()).unwrap();
        let coefs: Vec<Q> = (0..basis.dim()).map(|k| q(((k * 7 + 3) % 5) as i64 - 2)).collect();
        let y = basis.combine(&coefs).scale(&dualitylab::linalg::q_frac(1, 7));
        let g = s.cayley(&y).expect("invertible");
        let ginv = dualitylab::linalg::inverse(&g).unwrap();
        // g preserves the form
        let gram = s.gram().unwrap();
        assert_eq!(&g.transpose().mul(gram).mul(&g), gram);
        let e2 = g.mul(&datum.e).mul(&ginv);
        assert!(basis.contains(&e2));
        let c2 = centralizer_lie(&s, &basis, &e2).unwrap();
        assert_eq!(c2.len(), datum.centralizer_dim(), "{f:?} {p}");
    }
}

/// `dim g_e` against the closed formulas in the transposed partition.
#[test]
fn centralizer_dimension_formula() {
    let cases: &[(Family, usize, &str)] = &[
        (Family::Sp, 1, "2"),
        (Family::Sp, 2, "4"),
        (Family::Sp, 2, "2,2"),
        (Family::Sp, 2, "2,1,1"),
        (Family::Sp, 3, "6"),
        (Family::Sp, 3, "4,2"),
        (Family::Sp, 3, "4,1,1"),
        (Family::Sp, 3, "3,3"),
        (Family::Sp, 3, "2,2,2"),
        (Family::Sp, 3, "2,2,1,1"),
        (Family::Sp, 3, "2,1,1,1,1"),
        (Family::SoOdd, 1, "3"),
        (Family::SoOdd, 2, "5"),
        (Family::SoOdd, 2, "3,1,1"),
        (Family::SoOdd, 2, "2,2,1"),
        (Family::SoOdd, 3, "3,3,1"),
        (Family::SoOdd, 3, "3,2,2"),
        (Family::SoEven, 2, "3,1"),
        (Family::SoEven, 2, "2,2"),
        (Family::SoEven, 3, "5,1"),
        (Family::SoEven, 3, "3,1,1,1"),
        (Family::SoEven, 3, "2,2,1,1"),
        (Family::SoEven, 3, "3,3"),
    ];
    for &(f, r, p) in cases {
        let part: Partition = p.parse().unwrap();
        let parts = part.parts();
        let largest = parts.iter().copied().max().unwrap();
        let transpose_sq: usize = (1..=largest).map(|i| parts.iter().filter(|&&x| x >= i).count().pow(2)).sum();
        let odd = parts.iter().filter(|&&x| x % 2 == 1).count();
        let expected = if f == Family::Sp { (transpose_sq + odd) / 2 } else { (transpose_sq - odd) / 2 };
        let s = build_space(f, r).unwrap();
        let datum = build_nilpotent(&s, &part).unwrap();
        assert_eq!(datum.centralizer_dim(), expected, "{f:?} {p}");
    }
}
