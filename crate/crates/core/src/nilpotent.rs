//! Nilpotent elements from Jordan partitions, their centralizers, sl2
//! triples, gradings and the multiplicity condition on part sizes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::forms::{Family, FormedSpace, LieBasis};
use crate::linalg::{express_in_span, kernel, q, rank, QMatrix, Rationals, SparseVec, SubspaceBasis, Q};

/// A partition, stored as weakly decreasing parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Parse("a partition needs at least one positive part".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// `[1^n]`.
    pub fn trivial(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn largest(&self) -> usize {
        self.parts[0]
    }

    /// `r_s`: how often `s` occurs.
    pub fn multiplicity(&self, s: usize) -> usize {
        self.parts.iter().filter(|&&p| p == s).count()
    }

    /// Map from part size to multiplicity, ascending by size.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `#{parts > k}`, the drop `rank(e^k) - rank(e^{k+1})` for a nilpotent of this type.
    pub fn parts_exceeding(&self, k: usize) -> usize {
        self.parts.iter().filter(|&&p| p > k).count()
    }

    /// `rank(e^k)` for a nilpotent of this Jordan type.
    pub fn power_rank(&self, k: usize) -> usize {
        self.parts.iter().map(|&p| p.saturating_sub(k)).sum()
    }

    /// Checks the size and the parity rule of the family.
    pub fn validate(&self, family: Family, n: usize) -> Result<()> {
        if self.size() != n {
            return Err(Error::PartitionSum { sum: self.size(), n });
        }
        let restricted = |s: usize| match family {
            Family::SoOdd | Family::SoEven => s % 2 == 0,
            Family::Sp => s % 2 == 1,
            Family::Gl => false,
        };
        for (s, r) in self.multiplicities().into_iter().rev() {
            if restricted(s) && r % 2 == 1 {
                return Err(Error::Parity { part: s, multiplicity: r, family: family.to_string() });
            }
        }
        Ok(())
    }

    pub fn to_comma_string(&self) -> String {
        self.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_comma_string())
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad part '{p}' in partition"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    /// Two blocks of equal size exchanged by the form.
    Paired,
    /// One block on a nondegenerate subspace.
    SelfPaired,
    /// A block of a `gl` nilpotent.
    Plain,
}

/// A Jordan chain `start, e·start, …, e^{size-1}·start` with `e^size·start = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanChain {
    pub size: usize,
    pub kind: ChainKind,
    pub start: Vec<Q>,
}

#[derive(Clone, Debug)]
pub struct NilpotentDatum {
    pub e: QMatrix,
    pub partition: Partition,
    pub chains: Vec<JordanChain>,
    pub centralizer: Vec<QMatrix>,
}

impl NilpotentDatum {
    pub fn centralizer_dim(&self) -> usize {
        self.centralizer.len()
    }
}

fn rank_two(space: &FormedSpace, x: &[Q], y: &[Q]) -> QMatrix {
    // θ(x⊗y) - ε θ(y⊗x) lies in the Lie algebra for any x, y
    let a = space.theta_op(x, y).expect("formed");
    let b = space.theta_op(y, x).expect("formed");
    a.sub(&b.scale(&q(space.family().epsilon())))
}

/// Builds a nilpotent of the given Jordan type together with its chains and
/// centralizer.
pub fn build_nilpotent(space: &FormedSpace, partition: &Partition) -> Result<NilpotentDatum> {
    let fam = space.family();
    partition.validate(fam, space.dim())?;
    let n = space.dim();
    let mut e = QMatrix::zeros(&Rationals, n, n);
    let mut chains = Vec::new();

    if fam == Family::Gl {
        let mut next = 1i64;
        for &s in partition.parts() {
            for k in 0..s as i64 - 1 {
                e = e.add(&space.e(next + k + 1, next + k));
            }
            chains.push(JordanChain { size: s, kind: ChainKind::Plain, start: space.unit(next) });
            next += s as i64;
        }
    } else {
        let mut labels = 1..=space.rank() as i64;
        let mut take = |k: usize| -> Vec<i64> { (0..k).map(|_| labels.next().expect("labels suffice")).collect() };
        let mut odd_self_paired: Vec<(usize, Vec<i64>)> = Vec::new();
        for (&s, &r) in partition.multiplicities().iter().rev() {
            for _ in 0..r / 2 {
                let a = take(s);
                for k in 0..s - 1 {
                    e = e.add(&space.f(a[k + 1], a[k]));
                }
                chains.push(JordanChain { size: s, kind: ChainKind::Paired, start: space.unit(a[0]) });
                chains.push(JordanChain { size: s, kind: ChainKind::Paired, start: space.unit(-a[s - 1]) });
            }
            if r % 2 == 1 {
                if fam == Family::Sp {
                    let m = s / 2;
                    let a = take(m);
                    for k in 0..m - 1 {
                        e = e.add(&space.f(a[k + 1], a[k]));
                    }
                    e = e.add(&space.f(-a[m - 1], a[m - 1]));
                    chains.push(JordanChain { size: s, kind: ChainKind::SelfPaired, start: space.unit(a[0]) });
                } else {
                    odd_self_paired.push((s, take(s / 2)));
                }
            }
        }
        // anisotropic middle vectors: v_0 first, then v_b ± v_{-b}
        let mut middles: Vec<Vec<Q>> = Vec::new();
        if fam == Family::SoOdd {
            middles.push(space.unit(0));
        }
        while middles.len() < odd_self_paired.len() {
            let b = take(1)[0];
            let (u, w) = (space.unit(b), space.unit(-b));
            middles.push(u.iter().zip(&w).map(|(x, y)| x + y).collect());
            middles.push(u.iter().zip(&w).map(|(x, y)| x - y).collect());
        }
        if middles.len() != odd_self_paired.len() {
            return Err(Error::Internal("unbalanced odd blocks".into()));
        }
        for ((s, a), w) in odd_self_paired.into_iter().zip(middles) {
            let m = s / 2;
            for k in 0..m.saturating_sub(1) {
                e = e.add(&space.f(a[k + 1], a[k]));
            }
            if m > 0 {
                e = e.add(&rank_two(space, &w, &space.unit(-a[m - 1])));
            }
            let start = if m > 0 { space.unit(a[0]) } else { w };
            chains.push(JordanChain { size: s, kind: ChainKind::SelfPaired, start });
        }
    }

    if !space.in_lie_algebra(&e) {
        return Err(Error::Internal("constructed nilpotent left the Lie algebra".into()));
    }
    check_jordan_type(&e, partition)?;
    let basis = space.lie_basis();
    let centralizer = centralizer_lie(space, &basis, &e)?;
    Ok(NilpotentDatum { e, partition: partition.clone(), chains, centralizer })
}

/// Confirms `rank(e^k) - rank(e^{k+1}) = #{parts > k}` for every `k`.
pub fn check_jordan_type(e: &QMatrix, partition: &Partition) -> Result<()> {
    let mut power = QMatrix::identity(&Rationals, e.rows());
    for k in 0..=partition.largest() {
        let r = rank(&power);
        if r != partition.power_rank(k) {
            return Err(Error::Internal(format!("rank of e^{k} is {r}, expected {}", partition.power_rank(k))));
        }
        power = power.mul(e);
    }
    Ok(())
}

/// Basis of `g_e = {X ∈ g : [X,e] = 0}`, as matrices whose flattenings are in RREF.
pub fn centralizer_lie(space: &FormedSpace, basis: &LieBasis, e: &QMatrix) -> Result<Vec<QMatrix>> {
    if !space.in_lie_algebra(e) || !basis.contains(e) {
        return Err(Error::NotInAlgebra(space.algebra_label()));
    }
    let n = space.dim();
    let m = basis.dim();
    // column k of the system is flatten([g_k, e])
    let mut entries = Vec::new();
    for (k, g) in basis.elements().iter().enumerate() {
        for (c, v) in g.commutator(e).flatten() {
            entries.push((c, k, v));
        }
    }
    let system = QMatrix::from_triplets(&Rationals, n * n, m, entries);
    let coefs = kernel(&system);
    let mats: Vec<SparseVec<Q>> = coefs
        .vectors()
        .iter()
        .map(|c| {
            let mut dense = vec![Q::zero(); m];
            for (k, v) in c {
                dense[*k] = v.clone();
            }
            basis.combine(&dense).flatten()
        })
        .collect();
    let span = SubspaceBasis::span(&Rationals, n * n, mats.iter());
    Ok(span.vectors().iter().map(|v| QMatrix::unflatten(&Rationals, n, n, v)).collect())
}

/// Diagonal Cartan basis: `F_{i,i}` for `i > 0`, or `E_{i,i}` for `gl`.
pub fn cartan_basis(space: &FormedSpace) -> Vec<QMatrix> {
    match space.family() {
        Family::Gl => space.indices().iter().map(|&i| space.e(i, i)).collect(),
        _ => (1..=space.rank() as i64).map(|i| space.f(i, i)).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct Sl2Triple {
    pub e: QMatrix,
    pub h: QMatrix,
    pub f: QMatrix,
    /// Coefficients of `h` on [`cartan_basis`].
    pub h_diag: Vec<Q>,
}

fn solve(dim: usize, columns: &[SparseVec<Q>], target: &SparseVec<Q>) -> Option<Vec<Q>> {
    express_in_span(&Rationals, dim, columns, target)
}

fn stack(a: &QMatrix, b: &QMatrix, nn: usize) -> SparseVec<Q> {
    let mut v = a.flatten();
    v.extend(b.flatten().into_iter().map(|(c, x)| (c + nn, x)));
    v
}

/// Completes `e` to an sl2 triple with diagonal `h`.
pub fn sl2_complete(space: &FormedSpace, basis: &LieBasis, e: &QMatrix) -> Result<Sl2Triple> {
    if !basis.contains(e) {
        return Err(Error::NotInAlgebra(space.algebra_label()));
    }
    if e.is_zero() {
        return Err(Error::NoSl2);
    }
    let n = space.dim();
    let nn = n * n;
    let zero = QMatrix::zeros(&Rationals, n, n);
    let cartan = cartan_basis(space);
    // h = Σ a_k H_k with [h,e] = 2e and h = [e, Y]
    let mut cols: Vec<SparseVec<Q>> = cartan.iter().map(|hk| stack(&hk.commutator(e), hk, nn)).collect();
    cols.extend(basis.elements().iter().map(|g| stack(&zero, &e.commutator(g).neg(), nn)));
    let target = stack(&e.scale(&q(2)), &zero, nn);
    let sol = solve(2 * nn, &cols, &target).ok_or_else(|| Error::Internal("no diagonal neutral element found".into()))?;
    let h_diag: Vec<Q> = sol[..cartan.len()].to_vec();
    let mut h = zero.clone();
    for (a, hk) in h_diag.iter().zip(&cartan) {
        h = h.add_scaled(hk, a);
    }
    // f with [e,f] = h and [h,f] = -2f
    let cols: Vec<SparseVec<Q>> =
        basis.elements().iter().map(|g| stack(&e.commutator(g), &h.commutator(g).add(&g.scale(&q(2))), nn)).collect();
    let target = stack(&h, &zero, nn);
    let coefs = solve(2 * nn, &cols, &target).ok_or_else(|| Error::Internal("no nilnegative partner found".into()))?;
    let f = basis.combine(&coefs);
    debug_assert_eq!(h.commutator(e), e.scale(&q(2)));
    Ok(Sl2Triple { e: e.clone(), h, f, h_diag })
}

/// An integer grading of `g` by a diagonal element, with the parabolic split.
#[derive(Clone, Debug)]
pub struct GradingData {
    pub h_diag: Vec<Q>,
    /// Eigenvalue of `h` on each basis vector of `V`, by label.
    pub col: BTreeMap<i64, i64>,
    /// Degree of each Lie basis element, in basis order.
    pub degrees: Vec<i64>,
    /// Basis positions of `p` (degree ≥ 0) and `m` (degree < 0).
    pub p_basis: Vec<usize>,
    pub m_basis: Vec<usize>,
}

impl GradingData {
    /// Degree of `v_{i_1}⊗…⊗v_{i_d}`: the sum of `col(i_k)`.
    pub fn tensor_degree(&self, labels: &[i64]) -> i64 {
        labels.iter().map(|i| self.col[i]).sum()
    }

    pub fn is_even(&self) -> bool {
        self.degrees.iter().all(|d| d % 2 == 0)
    }

    /// Positions of basis elements of the given degree.
    pub fn piece(&self, j: i64) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&k| self.degrees[k] == j).collect()
    }
}

/// Grading of `g` by `h = Σ a_k H_k` over [`cartan_basis`].
pub fn grading_from_h(space: &FormedSpace, basis: &LieBasis, h_diag: &[Q]) -> Result<GradingData> {
    let cartan = cartan_basis(space);
    if h_diag.len() != cartan.len() {
        return Err(Error::Grading(format!("expected {} coefficients, got {}", cartan.len(), h_diag.len())));
    }
    let mut h = QMatrix::zeros(&Rationals, space.dim(), space.dim());
    for (a, hk) in h_diag.iter().zip(&cartan) {
        h = h.add_scaled(hk, a);
    }
    let mut col = BTreeMap::new();
    for &i in space.indices() {
        let p = space.pos(i);
        let v = h.get(p, p);
        if !v.is_integer() {
            return Err(Error::Grading(format!("eigenvalue {v} on v_{i} is not an integer")));
        }
        col.insert(i, v.to_integer().to_i64().ok_or_else(|| Error::Grading("eigenvalue out of range".into()))?);
    }
    if space.family().is_formed() {
        for &i in space.indices() {
            if col[&i] + col[&-i] != 0 {
                return Err(Error::Grading(format!("col({i}) + col({}) is not zero", -i)));
            }
        }
    }
    let mut degrees = Vec::with_capacity(basis.dim());
    for (g, &(i, j)) in basis.elements().iter().zip(basis.labels()) {
        let deg = col[&i] - col[&j];
        if h.commutator(g) != g.scale(&q(deg)) {
            return Err(Error::Grading(format!("basis element ({i},{j}) is not homogeneous of degree {deg}")));
        }
        degrees.push(deg);
    }
    let p_basis = (0..degrees.len()).filter(|&k| degrees[k] >= 0).collect();
    let m_basis = (0..degrees.len()).filter(|&k| degrees[k] < 0).collect();
    Ok(GradingData { h_diag: h_diag.to_vec(), col, degrees, p_basis, m_basis })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessReport {
    pub even: bool,
    pub good: bool,
    pub failures: Vec<String>,
}

/// Tests the three conditions of a good grading and evenness, by ranks of
/// `ad_e` between graded pieces.
pub fn check_even_good(basis: &LieBasis, grading: &GradingData, e: &QMatrix) -> Result<GoodnessReport> {
    let mut failures = Vec::new();
    let coords = basis.coords(e).ok_or_else(|| Error::NotInAlgebra("the Lie algebra".into()))?;
    if coords.iter().zip(&grading.degrees).any(|(c, &d)| !c.is_zero() && d != 2) {
        failures.push("e is not homogeneous of degree 2".to_string());
    }
    let lo = *grading.degrees.iter().min().unwrap_or(&0);
    let hi = *grading.degrees.iter().max().unwrap_or(&0);
    for j in (lo - 2)..=hi {
        let src = grading.piece(j);
        let dst = grading.piece(j + 2);
        if src.is_empty() && dst.is_empty() {
            continue;
        }
        let mut entries = Vec::new();
        for (row, &k) in src.iter().enumerate() {
            let img = basis.coords(&e.commutator(&basis.elements()[k])).expect("bracket stays in g");
            for (col, &t) in dst.iter().enumerate() {
                if !img[t].is_zero() {
                    entries.push((row, col, img[t].clone()));
                }
            }
        }
        let r = rank(&QMatrix::from_triplets(&Rationals, src.len(), dst.len(), entries));
        if j <= -1 && r < src.len() {
            failures.push(format!("ad_e: g_{j} -> g_{} is not injective (rank {r}, dim {})", j + 2, src.len()));
        }
        if j >= -1 && r < dst.len() {
            failures.push(format!("ad_e: g_{j} -> g_{} is not surjective (rank {r}, dim {})", j + 2, dst.len()));
        }
    }
    Ok(GoodnessReport { even: grading.is_even(), good: failures.is_empty(), failures })
}

/// `χ(X) = Tr(ad_e ∘ ad_X)`.
pub fn chi(basis: &LieBasis, e: &QMatrix, x: &QMatrix) -> Result<Q> {
    basis.killing(e, x)
}

/// For every part size `s` of the restricted parity that occurs, `r_s` is odd or `r_s > 2d`.
/// The parity is odd `s` for orthogonal families and even `s` for `sp`; `gl` has no condition.
pub fn check_multiplicity_condition(partition: &Partition, family: Family, d: usize) -> bool {
    let relevant = |s: usize| match family {
        Family::SoOdd | Family::SoEven => s % 2 == 1,
        Family::Sp => s % 2 == 0,
        Family::Gl => false,
    };
    partition.multiplicities().into_iter().filter(|(s, _)| relevant(*s)).all(|(_, r)| r % 2 == 1 || r > 2 * d)
}

/// Part sizes that violate the multiplicity condition.
pub fn multiplicity_violations(partition: &Partition, family: Family, d: usize) -> Vec<usize> {
    partition
        .multiplicities()
        .into_iter()
        .filter(|&(s, r)| {
            let relevant = match family {
                Family::SoOdd | Family::SoEven => s % 2 == 1,
                Family::Sp => s % 2 == 0,
                Family::Gl => false,
            };
            relevant && r % 2 == 0 && r <= 2 * d
        })
        .map(|(s, _)| s)
        .collect()
}

/// Eigenvalues of a diagonal matrix, in label order.
pub fn diagonal_entries(h: &QMatrix) -> Vec<Q> {
    (0..h.rows()).map(|i| h.get(i, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::build_space;

    fn datum(fam: Family, r: usize, parts: &[usize]) -> (FormedSpace, NilpotentDatum) {
        let s = build_space(fam, r).unwrap();
        let p = Partition::new(parts.to_vec()).unwrap();
        let d = build_nilpotent(&s, &p).unwrap();
        (s, d)
    }

    #[test]
    fn trivial_partition_gives_zero() {
        for fam in [Family::SoOdd, Family::SoEven, Family::Sp, Family::Gl] {
            let s = build_space(fam, 2).unwrap();
            let d = build_nilpotent(&s, &Partition::trivial(s.dim())).unwrap();
            assert!(d.e.is_zero());
            assert_eq!(d.centralizer_dim(), s.lie_basis().dim());
        }
    }

    #[test]
    fn sp2_regular() {
        let (s, d) = datum(Family::Sp, 1, &[2]);
        assert!(d.e.mul(&d.e).is_zero());
        assert_eq!(rank(&d.e), 1);
        assert_eq!(s.iota(&d.e).unwrap(), d.e.neg());
    }

    #[test]
    fn so5_three_one_one_ranks() {
        let (_, d) = datum(Family::SoOdd, 2, &[3, 1, 1]);
        assert_eq!(rank(&d.e), 2);
        assert_eq!(rank(&d.e.pow(2)), 1);
        assert_eq!(rank(&d.e.pow(3)), 0);
    }

    #[test]
    fn so6_three_one_one_one_uses_split_middle() {
        let (s, d) = datum(Family::SoEven, 3, &[3, 1, 1, 1]);
        assert_eq!(d.e, s.f(3, 1).add(&s.f(-3, 1)));
    }

    #[test]
    fn parity_errors_name_the_part() {
        let s = build_space(Family::Sp, 2).unwrap();
        let err = build_nilpotent(&s, &"3,1".parse().unwrap()).unwrap_err();
        assert_eq!(err, Error::Parity { part: 3, multiplicity: 1, family: "sp".into() });
        let s = build_space(Family::SoEven, 2).unwrap();
        assert!(matches!(build_nilpotent(&s, &"2,1,1".parse().unwrap()), Err(Error::Parity { part: 2, .. })));
        assert!(matches!(build_nilpotent(&s, &"2,1".parse().unwrap()), Err(Error::PartitionSum { .. })));
    }

    #[test]
    fn sp4_regular_centralizer_has_dim_two() {
        let (_, d) = datum(Family::Sp, 2, &[4]);
        assert_eq!(d.centralizer_dim(), 2);
        for x in &d.centralizer {
            assert!(x.commutator(&d.e).is_zero());
        }
    }

    #[test]
    fn chains_reproduce_jordan_decomposition() {
        let (s, d) = datum(Family::SoOdd, 3, &[3, 3, 1]);
        let mut vectors: Vec<SparseVec<Q>> = Vec::new();
        for c in &d.chains {
            let mut v = c.start.clone();
            for _ in 0..c.size {
                vectors.push(v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect());
                v = d.e.apply(&v);
            }
            assert!(v.iter().all(|x| x.is_zero()));
        }
        assert_eq!(SubspaceBasis::span(&Rationals, s.dim(), vectors.iter()).dim(), s.dim());
    }

    #[test]
    fn sl2_for_sp2_upper_root() {
        let s = build_space(Family::Sp, 1).unwrap();
        let b = s.lie_basis();
        let e = s.e(1, -1);
        let t = sl2_complete(&s, &b, &e).unwrap();
        // h = diag(1,-1) on (v_1, v_{-1})
        assert_eq!(t.h.get(s.pos(1), s.pos(1)), q(1));
        assert_eq!(t.h.get(s.pos(-1), s.pos(-1)), q(-1));
        assert_eq!(t.e.commutator(&t.f), t.h);
        assert_eq!(t.h.commutator(&t.f), t.f.scale(&q(-2)));
        assert!(matches!(sl2_complete(&s, &b, &QMatrix::zeros(&Rationals, 2, 2)), Err(Error::NoSl2)));
    }

    #[test]
    fn sl2_for_sp4_regular_has_odd_eigenvalues() {
        let (s, d) = datum(Family::Sp, 2, &[4]);
        let t = sl2_complete(&s, &s.lie_basis(), &d.e).unwrap();
        let mut eig: Vec<Q> = diagonal_entries(&t.h);
        eig.sort();
        assert_eq!(eig, vec![q(-3), q(-1), q(1), q(3)]);
    }

    #[test]
    fn zero_grading() {
        let s = build_space(Family::SoOdd, 2).unwrap();
        let b = s.lie_basis();
        let g = grading_from_h(&s, &b, &[q(0), q(0)]).unwrap();
        assert_eq!(g.p_basis.len(), b.dim());
        assert!(g.m_basis.is_empty());
        assert_eq!(g.col[&0], 0);
        assert!(grading_from_h(&s, &b, &[crate::linalg::q_frac(1, 2), q(0)]).is_err());
    }

    #[test]
    fn dynkin_gradings_are_even_and_good() {
        for (fam, r, parts) in [(Family::Sp, 1, vec![2]), (Family::Sp, 2, vec![4])] {
            let (s, d) = datum(fam, r, &parts);
            let b = s.lie_basis();
            let t = sl2_complete(&s, &b, &d.e).unwrap();
            let g = grading_from_h(&s, &b, &t.h_diag).unwrap();
            let rep = check_even_good(&b, &g, &d.e).unwrap();
            assert!(rep.even && rep.good, "{rep:?}");
        }
    }

    #[test]
    fn degenerate_zero_grading_for_zero_element() {
        let s = build_space(Family::Sp, 1).unwrap();
        let b = s.lie_basis();
        let g = grading_from_h(&s, &b, &[q(0)]).unwrap();
        let rep = check_even_good(&b, &g, &QMatrix::zeros(&Rationals, 2, 2)).unwrap();
        assert!(rep.even && rep.good);
    }

    #[test]
    fn chi_examples() {
        let (s, d) = datum(Family::Sp, 2, &[4]);
        let b = s.lie_basis();
        let t = sl2_complete(&s, &b, &d.e).unwrap();
        assert_eq!(chi(&b, &d.e, &d.e).unwrap(), q(0));
        assert_ne!(chi(&b, &d.e, &t.f).unwrap(), q(0));
        let g = grading_from_h(&s, &b, &t.h_diag).unwrap();
        for (k, x) in b.elements().iter().enumerate() {
            if g.degrees[k] != -2 {
                assert_eq!(chi(&b, &d.e, x).unwrap(), q(0));
            }
        }
    }

    #[test]
    fn multiplicity_condition_examples() {
        let p = |s: &str| s.parse::<Partition>().unwrap();
        assert!(check_multiplicity_condition(&p("3,1,1,1"), Family::SoEven, 2));
        assert!(!check_multiplicity_condition(&p("3,1,1"), Family::SoOdd, 1));
        assert!(check_multiplicity_condition(&p("2,1,1,1,1"), Family::Sp, 2));
        assert_eq!(multiplicity_violations(&p("3,1,1"), Family::SoOdd, 1), vec![1]);
    }
}
