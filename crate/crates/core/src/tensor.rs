//! Operators on `V^{⊗d}`.
//!
//! The basis tensor `v_{i_1}⊗…⊗v_{i_d}` has index `Σ_k pos(i_k)·n^{d-k}`:
//! mixed radix over the labels in ascending order, first slot most
//! significant. Slots are numbered from 1.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{Family, FormedSpace, InvariantForm, LieBasis};
use crate::linalg::{q, Field, FieldScalar, QMatrix, Rationals, SparseMatrix, Q};

/// How an operator was built, kept for reports and for ordering generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Recipe {
    Identity,
    /// Place permutation, 0-based images of the slots.
    Perm(Vec<usize>),
    Contraction(usize, usize),
    Position { slot: usize, name: String },
    Power { name: String, exponents: Vec<u32> },
    Derivation { name: String },
    CasimirPair { i: usize, j: usize, form: InvariantForm },
    Casimir { slot: usize, form: InvariantForm },
    TensorPower { name: String },
    Product(Box<Recipe>, Box<Recipe>),
    Named(String),
}

impl Recipe {
    /// Short stable tag; generators are explored in the order of their tags.
    pub fn tag(&self) -> String {
        match self {
            Recipe::Identity => "id".into(),
            Recipe::Perm(w) => format!("perm[{}]", w.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")),
            Recipe::Contraction(i, j) => format!("gamma_{i}{j}"),
            Recipe::Position { slot, name } => format!("{name}^({slot})"),
            Recipe::Power { name, exponents } => {
                format!("{name}({})", exponents.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
            Recipe::Derivation { name } => format!("phi({name})"),
            Recipe::CasimirPair { i, j, form } => format!("casimir_{i}{j}[{}]", form.name()),
            Recipe::Casimir { slot, form } => format!("kappa^({slot})[{}]", form.name()),
            Recipe::TensorPower { name } => format!("{name}^(x)"),
            Recipe::Product(a, b) => format!("{}*{}", a.tag(), b.tag()),
            Recipe::Named(s) => s.clone(),
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator {
    pub n: usize,
    pub d: usize,
    pub matrix: QMatrix,
    pub recipe: Recipe,
}

impl TensorOperator {
    pub fn new(n: usize, d: usize, matrix: QMatrix, recipe: Recipe) -> Self {
        let size = n.pow(d as u32);
        assert_eq!((matrix.rows(), matrix.cols()), (size, size), "operator size must be n^d");
        TensorOperator { n, d, matrix, recipe }
    }

    pub fn identity(n: usize, d: usize) -> Self {
        Self::new(n, d, QMatrix::identity(&Rationals, n.pow(d as u32)), Recipe::Identity)
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn compose(&self, other: &TensorOperator) -> TensorOperator {
        assert_eq!((self.n, self.d), (other.n, other.d));
        TensorOperator::new(
            self.n,
            self.d,
            self.matrix.mul(&other.matrix),
            Recipe::Product(Box::new(self.recipe.clone()), Box::new(other.recipe.clone())),
        )
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.recipe = Recipe::Named(name.into());
        self
    }

    /// Image over another field, e.g. a prime field.
    pub fn reduce<G: Field>(&self, target: &G) -> Option<SparseMatrix<G>> {
        self.matrix.reduce(target)
    }
}

fn check_slot(d: usize, k: usize) -> Result<()> {
    if k == 0 || k > d {
        return Err(Error::Index(format!("slot {k} is outside 1..={d}")));
    }
    Ok(())
}

/// Decodes a tensor index into per-slot coordinate positions.
pub fn decode(n: usize, d: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; d];
    for k in (0..d).rev() {
        out[k] = idx % n;
        idx /= n;
    }
    out
}

pub fn encode(n: usize, digits: &[usize]) -> usize {
    digits.iter().fold(0, |acc, &x| acc * n + x)
}

/// Embeds an operator on `V^{⊗m}` into `V^{⊗d}`, acting on the listed slots
/// (in that order, first listed slot most significant) and trivially elsewhere.
pub fn embed_slots(n: usize, d: usize, slots: &[usize], m: &QMatrix) -> Result<QMatrix> {
    for &s in slots {
        check_slot(d, s)?;
    }
    let k = slots.len();
    let small = n.pow(k as u32);
    m.check_shape(small, small)?;
    let cols_of_m = m.transpose();
    let size = n.pow(d as u32);
    let mut entries = Vec::new();
    for col in 0..size {
        let digits = decode(n, d, col);
        let local: Vec<usize> = slots.iter().map(|&s| digits[s - 1]).collect();
        let c = encode(n, &local);
        for (r, v) in cols_of_m.row(c) {
            let mut out = digits.clone();
            for (t, &s) in decode(n, k, *r).iter().zip(slots) {
                out[s - 1] = *t;
            }
            entries.push((encode(n, &out), col, v.clone()));
        }
    }
    Ok(QMatrix::from_triplets(&Rationals, size, size, entries))
}

/// Place permutation: the tensor factor in slot `k` moves to slot `w(k)`
/// (`w` is 0-based), so `σ(w)σ(w') = σ(ww')`.
pub fn perm_op(space: &FormedSpace, d: usize, w: &[usize]) -> Result<TensorOperator> {
    let n = space.dim();
    let mut seen = vec![false; d];
    if w.len() != d || w.iter().any(|&x| x >= d || std::mem::replace(&mut seen[x], true)) {
        return Err(Error::Index(format!("{w:?} is not a permutation of {d} slots")));
    }
    let size = n.pow(d as u32);
    let entries = (0..size).map(|col| {
        let digits = decode(n, d, col);
        let mut out = vec![0; d];
        for k in 0..d {
            out[w[k]] = digits[k];
        }
        (encode(n, &out), col, Q::one())
    });
    Ok(TensorOperator::new(n, d, QMatrix::from_triplets(&Rationals, size, size, entries), Recipe::Perm(w.to_vec())))
}

/// The transposition of slots `i` and `j` (1-based).
pub fn swap_op(space: &FormedSpace, d: usize, i: usize, j: usize) -> Result<TensorOperator> {
    check_slot(d, i)?;
    check_slot(d, j)?;
    let mut w: Vec<usize> = (0..d).collect();
    w.swap(i - 1, j - 1);
    perm_op(space, d, &w)
}

/// Two-slot contraction `u⊗w ↦ <u,w> Σ_p v_p ⊗ v^p`.
fn contraction_matrix(space: &FormedSpace) -> Result<QMatrix> {
    let gram = space.gram()?;
    let n = space.dim();
    let mut entries = Vec::new();
    for (a, b, g) in gram.iter() {
        for &p in space.indices() {
            let dual = space.dual_vector(p)?;
            let pp = space.pos(p);
            for (y, c) in dual.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                entries.push((pp * n + y, a * n + b, g * c));
            }
        }
    }
    Ok(QMatrix::from_triplets(&Rationals, n * n, n * n, entries))
}

/// `γ_ij(u) = <u_i,u_j> Σ_p u_1⊗…⊗v_p⊗…⊗v^p⊗…⊗u_d` with `v_p` in slot `i`
/// and `v^p` in slot `j`.
pub fn contraction_op(space: &FormedSpace, d: usize, i: usize, j: usize) -> Result<TensorOperator> {
    if i == j {
        return Err(Error::Index(format!("contraction needs two distinct slots, got {i} twice")));
    }
    let m = contraction_matrix(space)?;
    let matrix = embed_slots(space.dim(), d, &[i, j], &m)?;
    Ok(TensorOperator::new(space.dim(), d, matrix, Recipe::Contraction(i, j)))
}

/// The same contraction computed from an arbitrary basis `b_p` of `V` and
/// its dual `<b_p, b^q> = δ_pq`.
pub fn contraction_op_in_basis(space: &FormedSpace, d: usize, i: usize, j: usize, basis: &[Vec<Q>]) -> Result<TensorOperator> {
    let n = space.dim();
    if basis.len() != n {
        return Err(Error::Index("a basis of V needs n vectors".into()));
    }
    let gram_entries: Vec<(usize, usize, Q)> =
        (0..n).flat_map(|p| (0..n).map(move |r| (p, r))).map(|(p, r)| (p, r, space.pair(&basis[p], &basis[r]).unwrap())).collect();
    let m = QMatrix::from_triplets(&Rationals, n, n, gram_entries);
    let minv = crate::linalg::inverse(&m).ok_or_else(|| Error::Index("vectors are not a basis".into()))?;
    // b^q = Σ_r (M^{-1})_{r,q} b_r
    let dual: Vec<Vec<Q>> = (0..n)
        .map(|qq| (0..n).fold(vec![Q::zero(); n], |acc, r| acc.iter().zip(&basis[r]).map(|(a, b)| a + minv.get(r, qq) * b).collect()))
        .collect();
    let mut element = vec![Q::zero(); n * n];
    for p in 0..n {
        for (x, bx) in basis[p].iter().enumerate() {
            for (y, dy) in dual[p].iter().enumerate() {
                element[x * n + y] += bx * dy;
            }
        }
    }
    let gram = space.gram()?;
    let mut entries = Vec::new();
    for (a, b, g) in gram.iter() {
        for (row, c) in element.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            entries.push((row, a * n + b, g * c));
        }
    }
    let two = QMatrix::from_triplets(&Rationals, n * n, n * n, entries);
    Ok(TensorOperator::new(n, d, embed_slots(n, d, &[i, j], &two)?, Recipe::Contraction(i, j)))
}

/// `X^{(k)} = 1^{⊗(k-1)} ⊗ X ⊗ 1^{⊗(d-k)}`.
pub fn position_op(n: usize, d: usize, k: usize, x: &QMatrix, name: &str) -> Result<TensorOperator> {
    let matrix = embed_slots(n, d, &[k], x)?;
    Ok(TensorOperator::new(n, d, matrix, Recipe::Position { slot: k, name: name.to_string() }))
}

/// `X(l) = X^{l_1} ⊗ … ⊗ X^{l_d}`.
pub fn power_tensor_op(n: usize, x: &QMatrix, l: &[u32], name: &str) -> Result<TensorOperator> {
    x.check_shape(n, n)?;
    let mut m = QMatrix::identity(&Rationals, 1);
    for &e in l {
        m = m.kron(&x.pow(e));
    }
    Ok(TensorOperator::new(n, l.len(), m, Recipe::Power { name: name.to_string(), exponents: l.to_vec() }))
}

/// `M^{⊗d}`, e.g. the action of a group element.
pub fn tensor_power_op(n: usize, d: usize, m: &QMatrix, name: &str) -> Result<TensorOperator> {
    m.check_shape(n, n)?;
    let mut acc = QMatrix::identity(&Rationals, 1);
    for _ in 0..d {
        acc = acc.kron(m);
    }
    Ok(TensorOperator::new(n, d, acc, Recipe::TensorPower { name: name.to_string() }))
}

/// `φ(X) = Σ_k X^{(k)}`.
pub fn derivation_action(n: usize, d: usize, x: &QMatrix, name: &str) -> Result<TensorOperator> {
    let size = n.pow(d as u32);
    let mut acc = QMatrix::zeros(&Rationals, size, size);
    for k in 1..=d {
        acc = acc.add(&embed_slots(n, d, &[k], x)?);
    }
    Ok(TensorOperator::new(n, d, acc, Recipe::Derivation { name: name.to_string() }))
}

/// `Σ_g g ⊗ g*` on `V⊗V`.
pub fn casimir_tensor(space: &FormedSpace, basis: &LieBasis, form: InvariantForm) -> Result<QMatrix> {
    let duals = basis.dual_elements(space, form)?;
    let n = space.dim();
    let mut acc = QMatrix::zeros(&Rationals, n * n, n * n);
    for (g, gs) in basis.elements().iter().zip(&duals) {
        acc = acc.add(&g.kron(gs));
    }
    Ok(acc)
}

/// `Σ_g g^{(i)} (g*)^{(j)}`.
pub fn casimir_pair_op(space: &FormedSpace, basis: &LieBasis, d: usize, i: usize, j: usize, form: InvariantForm) -> Result<TensorOperator> {
    if i >= j {
        return Err(Error::Index(format!("Casimir pair needs i < j, got ({i},{j})")));
    }
    let two = casimir_tensor(space, basis, form)?;
    let matrix = embed_slots(space.dim(), d, &[i, j], &two)?;
    Ok(TensorOperator::new(space.dim(), d, matrix, Recipe::CasimirPair { i, j, form }))
}

/// `Σ_g g g*` acting on `V`.
pub fn casimir_matrix(space: &FormedSpace, basis: &LieBasis, form: InvariantForm) -> Result<QMatrix> {
    let duals = basis.dual_elements(space, form)?;
    let n = space.dim();
    Ok(basis.elements().iter().zip(&duals).fold(QMatrix::zeros(&Rationals, n, n), |acc, (g, gs)| acc.add(&g.mul(gs))))
}

/// The Casimir element at slot `k`.
pub fn casimir_op(space: &FormedSpace, basis: &LieBasis, d: usize, k: usize, form: InvariantForm) -> Result<TensorOperator> {
    let c = casimir_matrix(space, basis, form)?;
    let matrix = embed_slots(space.dim(), d, &[k], &c)?;
    Ok(TensorOperator::new(space.dim(), d, matrix, Recipe::Casimir { slot: k, form }))
}

/// An element of `O(V) \ SO(V)`: swap `v_1 ↔ v_{-1}` for even `n`, `-1` for odd `n`.
pub fn reflection(space: &FormedSpace) -> Result<QMatrix> {
    let n = space.dim();
    match space.family() {
        Family::SoOdd => Ok(QMatrix::identity(&Rationals, n).scale(&q(-1))),
        Family::SoEven => {
            let mut entries: Vec<(usize, usize, Q)> = Vec::new();
            for &i in space.indices() {
                let target = if i.abs() == 1 { -i } else { i };
                entries.push((space.pos(target), space.pos(i), Q::one()));
            }
            Ok(QMatrix::from_triplets(&Rationals, n, n, entries))
        }
        fam => Err(Error::Unsupported { op: "an orthogonal reflection", family: fam.to_string() }),
    }
}

/// Generators of the Brauer image `B_d`: adjacent transpositions and `γ_12`.
pub fn brauer_generators(space: &FormedSpace, d: usize) -> Result<Vec<TensorOperator>> {
    let mut gens = Vec::new();
    for k in 1..d {
        gens.push(swap_op(space, d, k, k + 1)?);
    }
    if d >= 2 {
        gens.push(contraction_op(space, d, 1, 2)?);
    }
    Ok(gens)
}

/// Generators of `S_d`: adjacent transpositions.
pub fn symmetric_generators(space: &FormedSpace, d: usize) -> Result<Vec<TensorOperator>> {
    (1..d).map(|k| swap_op(space, d, k, k + 1)).collect()
}

/// `e^{(k)}` for every slot.
pub fn nilpotent_positions(n: usize, d: usize, e: &QMatrix) -> Result<Vec<TensorOperator>> {
    (1..=d).map(|k| position_op(n, d, k, e, "e")).collect()
}

/// Plain-text dump: a header followed by `row col value` triplets.
pub fn write_dump<F: Field>(n: usize, d: usize, recipe: &Recipe, normalization: Option<InvariantForm>, m: &SparseMatrix<F>) -> String {
    let mut out = String::new();
    out.push_str("# dualitylab operator\n");
    out.push_str(&format!("n {n}\nd {d}\nrecipe {}\n", recipe.tag()));
    out.push_str(&format!("normalization {}\n", normalization.map_or("none", |f| f.name())));
    out.push_str(&format!("field {}\n", m.field().describe()));
    out.push_str(&format!("entries {}\n", m.nnz()));
    for (r, c, v) in m.iter() {
        out.push_str(&format!("{r} {c} {}\n", m.field().to_scalar(v)));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dump {
    pub n: usize,
    pub d: usize,
    pub recipe: String,
    pub normalization: String,
    pub field: String,
    pub entries: Vec<(usize, usize, FieldScalar)>,
}

/// Parses a dump produced by [`write_dump`].
pub fn read_dump(text: &str) -> Result<Dump> {
    let bad = |m: &str| Error::Parse(format!("operator dump: {m}"));
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let mut header = |key: &str| -> Result<String> {
        let line = lines.next().ok_or_else(|| bad(&format!("missing {key}")))?;
        line.strip_prefix(key).map(|s| s.trim().to_string()).ok_or_else(|| bad(&format!("expected {key}")))
    };
    let n: usize = header("n")?.parse().map_err(|_| bad("bad n"))?;
    let d: usize = header("d")?.parse().map_err(|_| bad("bad d"))?;
    let recipe = header("recipe")?;
    let normalization = header("normalization")?;
    let field = header("field")?;
    let count: usize = header("entries")?.parse().map_err(|_| bad("bad entry count"))?;
    let modulus: Option<u64> = match field.strip_prefix("prime:") {
        Some(p) => Some(p.parse().map_err(|_| bad("bad modulus"))?),
        None if field == "rational" => None,
        None => return Err(bad("unknown field")),
    };
    let mut entries = Vec::with_capacity(count);
    for line in lines {
        let mut it = line.split_whitespace();
        let (Some(r), Some(c), Some(v)) = (it.next(), it.next(), it.next()) else {
            return Err(bad("short triplet"));
        };
        let r: usize = r.parse().map_err(|_| bad("bad row"))?;
        let c: usize = c.parse().map_err(|_| bad("bad column"))?;
        let value = match modulus {
            Some(m) => FieldScalar::Prime { residue: v.parse().map_err(|_| bad("bad residue"))?, modulus: m },
            None => FieldScalar::Rational(v.parse::<Q>().map_err(|_| bad("bad rational"))?),
        };
        entries.push((r, c, value));
    }
    if entries.len() != count {
        return Err(bad("entry count does not match"));
    }
    Ok(Dump { n, d, recipe, normalization, field, entries })
}

impl Dump {
    /// Rebuilds a rational matrix from a rational dump.
    pub fn to_qmatrix(&self) -> Result<QMatrix> {
        let size = self.n.pow(self.d as u32);
        let mut entries = Vec::with_capacity(self.entries.len());
        for (r, c, v) in &self.entries {
            match v {
                FieldScalar::Rational(x) => entries.push((*r, *c, x.clone())),
                FieldScalar::Prime { .. } => return Err(Error::Parse("dump is not over the rationals".into())),
            }
        }
        Ok(QMatrix::from_triplets(&Rationals, size, size, entries))
    }
}
