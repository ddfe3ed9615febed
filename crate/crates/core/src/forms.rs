//! Formed spaces `(V, <,>)`, the adjoint involution, rank-one operators and
//! the standard bases `F_{i,j}` of the classical Lie algebras.
//!
//! Basis vectors are labelled by signed indices. For `so_{2r+1}` the labels are
//! `-r..=r`, for `so_{2r}` and `sp_{2r}` they are `-r..=r` without `0`, and for
//! `gl_n` they are `1..=n`. Coordinates follow the labels in ascending order.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{inverse, q, q_frac, Echelon, QMatrix, Rationals, SparseVec, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    SoOdd,
    SoEven,
    Sp,
    Gl,
}

impl Family {
    pub fn is_formed(self) -> bool {
        self != Family::Gl
    }

    pub fn is_orthogonal(self) -> bool {
        matches!(self, Family::SoOdd | Family::SoEven)
    }

    /// Sign `ε` with `<u,w> = ε <w,u>`.
    pub fn epsilon(self) -> i64 {
        if self == Family::Sp {
            -1
        } else {
            1
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::SoOdd => "so-odd",
            Family::SoEven => "so-even",
            Family::Sp => "sp",
            Family::Gl => "gl",
        }
    }

    /// Dimension of `V` for the given rank (`gl` takes the dimension itself).
    pub fn dim_for_rank(self, r: usize) -> usize {
        match self {
            Family::SoOdd => 2 * r + 1,
            Family::SoEven | Family::Sp => 2 * r,
            Family::Gl => r,
        }
    }

    /// Dimension of the Lie algebra acting on a space of dimension `n`.
    pub fn lie_dim(self, n: usize) -> usize {
        match self {
            Family::SoOdd | Family::SoEven => n * (n - 1) / 2,
            Family::Sp => n * (n + 1) / 2,
            Family::Gl => n * n,
        }
    }

    /// Label such as `so_5` or `sp_4`.
    pub fn algebra_label(self, n: usize) -> String {
        match self {
            Family::SoOdd | Family::SoEven => format!("so_{n}"),
            Family::Sp => format!("sp_{n}"),
            Family::Gl => format!("gl_{n}"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "so-odd" => Ok(Family::SoOdd),
            "so-even" => Ok(Family::SoEven),
            "sp" => Ok(Family::Sp),
            "gl" => Ok(Family::Gl),
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// Which invariant form dualizes the Lie algebra basis in Casimir operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvariantForm {
    /// `(X,Y) = Tr(XY)/2` on `so`/`sp`, `Tr(XY)` on `gl`. The factor makes
    /// `F_{p,p}` self-dual.
    Trace,
    /// `(X,Y) = Tr(ad_X ad_Y)`.
    Killing,
}

impl InvariantForm {
    pub fn name(self) -> &'static str {
        match self {
            InvariantForm::Trace => "trace",
            InvariantForm::Killing => "killing",
        }
    }
}

impl FromStr for InvariantForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace" | "trace-form" => Ok(InvariantForm::Trace),
            "killing" => Ok(InvariantForm::Killing),
            other => Err(Error::Parse(format!("unknown normalization '{other}'"))),
        }
    }
}

fn sgn(i: i64) -> i64 {
    i.signum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormedSpace {
    family: Family,
    r: usize,
    n: usize,
    indices: Vec<i64>,
    gram: Option<QMatrix>,
    gram_inv: Option<QMatrix>,
}

/// Builds `V` with its form. For `gl` the second argument is `dim V`.
pub fn build_space(family: Family, r: usize) -> Result<FormedSpace> {
    if r == 0 {
        return Err(Error::InvalidRank);
    }
    let ri = r as i64;
    let indices: Vec<i64> = match family {
        Family::SoOdd => (-ri..=ri).collect(),
        Family::SoEven | Family::Sp => (-ri..=ri).filter(|&i| i != 0).collect(),
        Family::Gl => (1..=ri).collect(),
    };
    let n = indices.len();
    let mut space = FormedSpace { family, r, n, indices, gram: None, gram_inv: None };
    if family.is_formed() {
        let mut entries = Vec::new();
        for &i in &space.indices {
            let v = if family == Family::Sp { sgn(i) } else { 1 };
            entries.push((space.pos(i), space.pos(-i), q(v)));
        }
        let gram = QMatrix::from_triplets(&Rationals, n, n, entries);
        space.gram_inv = Some(inverse(&gram).expect("standard form is nondegenerate"));
        space.gram = Some(gram);
    }
    Ok(space)
}

impl FormedSpace {
    pub fn family(&self) -> Family {
        self.family
    }
    pub fn rank(&self) -> usize {
        self.r
    }
    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    /// Coordinate position of the basis vector with label `i`.
    pub fn pos(&self, i: i64) -> usize {
        let r = self.r as i64;
        let p = match self.family {
            Family::SoOdd => i + r,
            Family::SoEven | Family::Sp => {
                if i < 0 {
                    i + r
                } else {
                    i + r - 1
                }
            }
            Family::Gl => i - 1,
        };
        assert!(self.indices.get(p as usize) == Some(&i), "label {i} is not in the index set");
        p as usize
    }

    pub fn label(&self, pos: usize) -> i64 {
        self.indices[pos]
    }

    pub fn has_label(&self, i: i64) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn unit(&self, i: i64) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.n];
        v[self.pos(i)] = Q::one();
        v
    }

    /// Matrix unit `E_{i,j}` (labels).
    pub fn e(&self, i: i64, j: i64) -> QMatrix {
        QMatrix::from_triplets(&Rationals, self.n, self.n, [(self.pos(i), self.pos(j), Q::one())])
    }

    fn require_form(&self, op: &'static str) -> Result<&QMatrix> {
        self.gram.as_ref().ok_or(Error::Unsupported { op, family: self.family.to_string() })
    }

    pub fn gram(&self) -> Result<&QMatrix> {
        self.require_form("the bilinear form")
    }

    /// `<u, w> = u^T G w`.
    pub fn pair(&self, u: &[Q], w: &[Q]) -> Result<Q> {
        let g = self.require_form("the bilinear form")?;
        let gw = g.apply(w);
        Ok(u.iter().zip(&gw).fold(Q::zero(), |acc, (a, b)| acc + a * b))
    }

    /// Dual basis vector `v^q` with `<v_p, v^q> = δ_pq`.
    pub fn dual_vector(&self, qlabel: i64) -> Result<Vec<Q>> {
        self.require_form("the dual basis")?;
        let c = if self.family == Family::Sp { sgn(qlabel) } else { 1 };
        let mut v = vec![Q::zero(); self.n];
        v[self.pos(-qlabel)] = q(c);
        Ok(v)
    }

    /// Form adjoint `ι(X) = G^{-1} X^T G`, so that `<Xv,u> = <v, ι(X)u>`.
    pub fn iota(&self, x: &QMatrix) -> Result<QMatrix> {
        let g = self.require_form("iota")?;
        x.check_shape(self.n, self.n)?;
        Ok(self.gram_inv.as_ref().expect("formed").mul(&x.transpose()).mul(g))
    }

    /// The rank-one operator `θ(u⊗w): v ↦ <w,v> u`.
    pub fn theta_op(&self, u: &[Q], w: &[Q]) -> Result<QMatrix> {
        let g = self.require_form("theta")?;
        // row vector w^T G
        let wg = g.transpose().apply(w);
        let mut entries = Vec::new();
        for (a, ua) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, gb) in wg.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                entries.push((a, b, ua * gb));
            }
        }
        Ok(QMatrix::from_triplets(&Rationals, self.n, self.n, entries))
    }

    /// `Tr(θ(u_1⊗w_1)⋯θ(u_k⊗w_k)) = <w_1,u_2><w_2,u_3>⋯<w_k,u_1>`.
    pub fn trace_rank_one_product(&self, pairs: &[(Vec<Q>, Vec<Q>)]) -> Result<Q> {
        self.require_form("rank-one trace products")?;
        if pairs.is_empty() {
            return Err(Error::Index("at least one rank-one factor is required".into()));
        }
        let k = pairs.len();
        let mut acc = Q::one();
        for i in 0..k {
            let f = self.pair(&pairs[i].1, &pairs[(i + 1) % k].0)?;
            if f.is_zero() {
                return Ok(Q::zero());
            }
            acc *= f;
        }
        Ok(acc)
    }

    /// `X ∈ g`: for formed families `ι(X) = -X`; every matrix is in `gl`.
    pub fn in_lie_algebra(&self, x: &QMatrix) -> bool {
        if x.rows() != self.n || x.cols() != self.n {
            return false;
        }
        match self.family {
            Family::Gl => true,
            _ => self.iota(x).map(|i| i.add(x).is_zero()).unwrap_or(false),
        }
    }

    /// `F_{i,j} = E_{i,j} - θ_{i,j} E_{-j,-i}`.
    pub fn f(&self, i: i64, j: i64) -> QMatrix {
        let theta = match self.family {
            Family::Sp => sgn(i) * sgn(j),
            Family::Gl => return self.e(i, j),
            _ => 1,
        };
        self.e(i, j).sub(&self.e(-j, -i).scale(&q(theta)))
    }

    /// Cayley transform `(1-X)(1+X)^{-1}`; for `X ∈ g` this preserves the form.
    pub fn cayley(&self, x: &QMatrix) -> Option<QMatrix> {
        let id = QMatrix::identity(&Rationals, self.n);
        let inv = inverse(&id.add(x))?;
        Some(id.sub(x).mul(&inv))
    }

    pub fn lie_basis(&self) -> LieBasis {
        let r = self.r as i64;
        let mut labels: Vec<(i64, i64)> = Vec::new();
        match self.family {
            Family::Gl => {
                for i in 1..=r {
                    for j in 1..=r {
                        labels.push((i, j));
                    }
                }
            }
            fam => {
                for i in 1..=r {
                    labels.push((i, i));
                }
                for i in 1..=r {
                    for j in (i + 1)..=r {
                        labels.extend([(i, j), (i, -j), (-i, j), (-i, -j)]);
                    }
                }
                match fam {
                    Family::SoOdd => {
                        for i in 1..=r {
                            labels.extend([(0, i), (0, -i)]);
                        }
                    }
                    Family::Sp => {
                        for i in 1..=r {
                            labels.extend([(-i, i), (i, -i)]);
                        }
                    }
                    _ => {}
                }
            }
        }
        let elements = labels.iter().map(|&(i, j)| self.f(i, j)).collect();
        LieBasis::new(self.n, labels, elements)
    }

    /// Diagonal matrix with the given entries, listed by label order.
    pub fn diag(&self, entries: &[Q]) -> QMatrix {
        assert_eq!(entries.len(), self.n);
        QMatrix::from_triplets(&Rationals, self.n, self.n, entries.iter().enumerate().map(|(i, x)| (i, i, x.clone())))
    }

    /// Value of the chosen invariant form on two Lie algebra elements.
    pub fn trace_form(&self, x: &QMatrix, y: &QMatrix) -> Q {
        let t = x.mul(y).trace();
        if self.family.is_formed() {
            t * q_frac(1, 2)
        } else {
            t
        }
    }
}

/// An ordered basis of a matrix Lie algebra with a coordinate solver.
#[derive(Clone, Debug)]
pub struct LieBasis {
    n: usize,
    labels: Vec<(i64, i64)>,
    elements: Vec<QMatrix>,
    // rows [flatten(g_k) | e_k]; reducing [X | 0] leaves [0 | -coords]
    solver: Echelon<Rationals>,
}

impl LieBasis {
    /// Wraps linearly independent `n×n` matrices as a basis of their span.
    pub fn new(n: usize, labels: Vec<(i64, i64)>, elements: Vec<QMatrix>) -> Self {
        let m = elements.len();
        let mut solver = Echelon::new(&Rationals, n * n + m);
        for (k, g) in elements.iter().enumerate() {
            let mut row = g.flatten();
            row.push((n * n + k, Q::one()));
            let grew = solver.insert(&row);
            assert!(grew, "basis elements are linearly independent");
        }
        LieBasis { n, labels, elements, solver }
    }

    /// A basis with the same span built from the given independent combinations.
    pub fn recombined(&self, coefficient_rows: &[Vec<Q>]) -> Self {
        let elements: Vec<QMatrix> = coefficient_rows.iter().map(|c| self.combine(c)).collect();
        let labels = (0..elements.len() as i64).map(|k| (k, k)).collect();
        LieBasis::new(self.n, labels, elements)
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }
    pub fn space_dim(&self) -> usize {
        self.n
    }
    pub fn labels(&self) -> &[(i64, i64)] {
        &self.labels
    }
    pub fn elements(&self) -> &[QMatrix] {
        &self.elements
    }

    pub fn combine(&self, coefs: &[Q]) -> QMatrix {
        let mut acc = QMatrix::zeros(&Rationals, self.n, self.n);
        for (c, g) in coefs.iter().zip(&self.elements) {
            if !c.is_zero() {
                acc = acc.add_scaled(g, c);
            }
        }
        acc
    }

    /// Coordinates of `x` in this basis, `None` if `x` is outside the span.
    pub fn coords(&self, x: &QMatrix) -> Option<Vec<Q>> {
        let nn = self.n * self.n;
        let mut acc = vec![Q::zero(); nn + self.dim()];
        for (c, v) in x.flatten() {
            acc[c] = v;
        }
        self.solver.reduce_dense(&mut acc);
        if acc[..nn].iter().any(|v| !v.is_zero()) {
            return None;
        }
        Some(acc[nn..].iter().map(|v| -v).collect())
    }

    pub fn contains(&self, x: &QMatrix) -> bool {
        self.coords(x).is_some()
    }

    /// Matrix of `ad_X` in this basis (column `b` holds the coordinates of `[X, g_b]`).
    pub fn ad(&self, x: &QMatrix) -> Result<QMatrix> {
        let m = self.dim();
        let mut entries = Vec::new();
        for (b, g) in self.elements.iter().enumerate() {
            let c = self.coords(&x.commutator(g)).ok_or_else(|| Error::NotInAlgebra("the span of the Lie basis".into()))?;
            for (a, v) in c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                entries.push((a, b, v));
            }
        }
        Ok(QMatrix::from_triplets(&Rationals, m, m, entries))
    }

    /// `Tr(ad_X ad_Y)`.
    pub fn killing(&self, x: &QMatrix, y: &QMatrix) -> Result<Q> {
        Ok(self.ad(x)?.mul(&self.ad(y)?).trace())
    }

    /// Gram matrix of the chosen invariant form on this basis.
    pub fn form_gram(&self, space: &FormedSpace, form: InvariantForm) -> Result<QMatrix> {
        let m = self.dim();
        let mut entries = Vec::new();
        match form {
            InvariantForm::Trace => {
                for a in 0..m {
                    for b in 0..m {
                        entries.push((a, b, space.trace_form(&self.elements[a], &self.elements[b])));
                    }
                }
            }
            InvariantForm::Killing => {
                let ads: Vec<QMatrix> = self.elements.iter().map(|g| self.ad(g)).collect::<Result<_>>()?;
                for a in 0..m {
                    for b in 0..m {
                        entries.push((a, b, ads[a].mul(&ads[b]).trace()));
                    }
                }
            }
        }
        Ok(QMatrix::from_triplets(&Rationals, m, m, entries))
    }

    /// Dual basis `g*_a` with `(g_a, g*_b) = δ_ab` for the chosen form.
    pub fn dual_elements(&self, space: &FormedSpace, form: InvariantForm) -> Result<Vec<QMatrix>> {
        let gram = self.form_gram(space, form)?;
        let inv = inverse(&gram).ok_or_else(|| Error::Unsupported {
            op: "a dual basis for a degenerate invariant form",
            family: space.algebra_label(),
        })?;
        // g*_c = Σ_b (M^{-1})_{b,c} g_b
        let inv_t = inv.transpose();
        Ok((0..self.dim())
            .map(|c| {
                let coefs: Vec<Q> = (0..self.dim()).map(|b| inv_t.get(c, b)).collect();
                self.combine(&coefs)
            })
            .collect())
    }

    /// Flattened elements, for use as rows of a subspace basis.
    pub fn flat_rows(&self) -> Vec<SparseVec<Q>> {
        self.elements.iter().map(|g| g.flatten()).collect()
    }
}

impl FormedSpace {
    pub fn algebra_label(&self) -> String {
        self.family.algebra_label(self.n)
    }
}

/// Matrix `ι(X) + X` of the linear map `End(V) → End(V)` on flattened
/// coordinates; its kernel is the Lie algebra.
pub fn iota_plus_id_matrix(space: &FormedSpace) -> Result<QMatrix> {
    let n = space.dim();
    let mut entries = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let unit = QMatrix::from_triplets(&Rationals, n, n, [(a, b, Q::one())]);
            let img = space.iota(&unit)?.add(&unit);
            for (c, v) in img.flatten() {
                entries.push((c, a * n + b, v));
            }
        }
    }
    Ok(QMatrix::from_triplets(&Rationals, n * n, n * n, entries))
}
