use dualitylab::forms::{build_space, Family};
use dualitylab::linalg::{q, rank};
use dualitylab::nilpotent::{
    build_nilpotent, cartan_basis, check_even_good, check_multiplicity_condition, chi, grading_from_h, multiplicity_violations, sl2_complete, Partition,
};
use proptest::prelude::*;

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn valid(f: Family, n: usize) -> Vec<Partition> {
    partitions(n, n).into_iter().map(|p| Partition::new(p).unwrap()).filter(|p| p.validate(f, n).is_ok()).collect()
}

const CASES: [(Family, usize); 7] = [(Family::Sp, 1), (Family::Sp, 2), (Family::Sp, 3), (Family::SoOdd, 2), (Family::SoOdd, 3), (Family::SoEven, 2), (Family::SoEven, 3)];

#[test]
fn jordan_type_matches_partition() {
    for (f, r) in CASES {
        let s = build_space(f, r).unwrap();
        for p in valid(f, s.dim()) {
            let d = build_nilpotent(&s, &p).unwrap();
            assert!(s.lie_basis().contains(&d.e), "{f:?} {p}");
            for k in 0..=p.largest() {
                assert_eq!(rank(&d.e.pow(k as u32)), p.power_rank(k), "{f:?} {p} power {k}");
            }
            for x in &d.centralizer {
                assert!(x.commutator(&d.e).is_zero());
            }
        }
    }
}

#[test]
fn dynkin_gradings_are_good_and_parity_decides_evenness() {
    for (f, r) in CASES {
        let s = build_space(f, r).unwrap();
        let basis = s.lie_basis();
        for p in valid(f, s.dim()) {
            let d = build_nilpotent(&s, &p).unwrap();
            if d.e.is_zero() {
                continue;
            }
            let t = sl2_complete(&s, &basis, &d.e).unwrap();
            assert_eq!(t.h.commutator(&t.e), t.e.scale(&q(2)));
            assert_eq!(t.h.commutator(&t.f), t.f.scale(&q(-2)));
            assert_eq!(t.e.commutator(&t.f), t.h);
            assert_eq!(t.h_diag.len(), cartan_basis(&s).len());
            let g = grading_from_h(&s, &basis, &t.h_diag).unwrap();
            let report = check_even_good(&basis, &g, &d.e).unwrap();
            let same_parity = p.parts().iter().all(|x| x % 2 == p.parts()[0] % 2);
            assert!(report.good, "{f:?} {p}: {:?}", report.failures);
            assert_eq!(report.even, same_parity, "{f:?} {p}");
            for (k, x) in basis.elements().iter().enumerate() {
                if g.degrees[k] != -2 {
                    assert_eq!(chi(&basis, &d.e, x).unwrap(), q(0));
                }
            }
            assert_ne!(chi(&basis, &d.e, &t.f).unwrap(), q(0));
        }
    }
}

proptest! {
    #[test]
    fn multiplicity_condition_is_the_absence_of_violations(idx in 0usize..64, d in 1usize..=4, fam in 0usize..3) {
        let (f, n) = [(Family::Sp, 8), (Family::SoOdd, 9), (Family::SoEven, 8)][fam];
        let all = valid(f, n);
        let p = &all[idx % all.len()];
        let viol = multiplicity_violations(p, f, d);
        prop_assert_eq!(check_multiplicity_condition(p, f, d), viol.is_empty());
        for s in viol {
            let r = p.multiplicity(s);
            prop_assert!(r % 2 == 0 && r <= 2 * d);
            prop_assert_eq!(s % 2, if f == Family::Sp { 0 } else { 1 });
        }
        // raising d can only add violations
        prop_assert!(multiplicity_violations(p, f, d).len() <= multiplicity_violations(p, f, d + 1).len());
    }
}
