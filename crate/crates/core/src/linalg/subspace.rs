//! Gaussian elimination, row spaces, kernels and subspace arithmetic.
//!
//! Pivoting is leftmost column first; among candidate rows the earliest
//! inserted one wins. Every public result is brought to reduced row-echelon
//! form so that equal subspaces have identical bases.

use super::field::Field;
use super::sparse::{SparseMatrix, SparseVec};
use super::LinalgError;

/// Rows denser than this fraction of the ambient dimension are stored densely.
const DENSE_FILL: f64 = 0.3;

#[derive(Clone, Debug)]
enum Row<E> {
    Sparse(SparseVec<E>),
    Dense { start: usize, vals: Vec<E> },
}

impl<E: Clone> Row<E> {
    fn for_each_nonzero<F: Field<Elem = E>>(&self, f: &F, mut g: impl FnMut(usize, &E)) {
        match self {
            Row::Sparse(v) => v.iter().for_each(|(c, x)| g(*c, x)),
            Row::Dense { start, vals } => {
                for (i, x) in vals.iter().enumerate() {
                    if !f.is_zero(x) {
                        g(start + i, x);
                    }
                }
            }
        }
    }

    fn to_sparse<F: Field<Elem = E>>(&self, f: &F) -> SparseVec<E> {
        let mut out = Vec::new();
        self.for_each_nonzero(f, |c, x| out.push((c, x.clone())));
        out
    }
}

fn pack_row<F: Field>(f: &F, dense: &[F::Elem], pivot: usize) -> Row<F::Elem> {
    let nnz = dense[pivot..].iter().filter(|x| !f.is_zero(x)).count();
    if nnz as f64 > DENSE_FILL * dense.len() as f64 {
        Row::Dense { start: pivot, vals: dense[pivot..].to_vec() }
    } else {
        Row::Sparse(
            dense[pivot..]
                .iter()
                .enumerate()
                .filter(|(_, x)| !f.is_zero(x))
                .map(|(i, x)| (pivot + i, x.clone()))
                .collect(),
        )
    }
}

/// Incremental row-echelon basis. Rows are normalized (pivot entry 1) but not
/// back-reduced until [`Echelon::into_basis`].
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    rows: Vec<Row<F::Elem>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F, dim: usize) -> Self {
        Echelon { field: field.clone(), dim, rows: Vec::new(), pivots: Vec::new(), pivot_row: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    fn scatter(&self, v: &[(usize, F::Elem)]) -> Vec<F::Elem> {
        let mut acc = vec![self.field.zero(); self.dim];
        for (c, x) in v {
            acc[*c] = x.clone();
        }
        acc
    }

    /// Reduces a dense vector in place against the current rows. On return the
    /// vector vanishes on every pivot column.
    pub fn reduce_dense(&self, acc: &mut [F::Elem]) {
        let f = &self.field;
        for c in 0..self.dim {
            if f.is_zero(&acc[c]) {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                let coef = acc[c].clone();
                self.rows[r].for_each_nonzero(f, |j, x| f.sub_mul_assign(&mut acc[j], &coef, x));
            }
        }
    }

    /// True if the sparse vector lies in the span of the rows.
    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        let mut acc = self.scatter(v);
        self.reduce_dense(&mut acc);
        acc.iter().all(|x| self.field.is_zero(x))
    }

    /// Inserts a vector; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: &[(usize, F::Elem)]) -> bool {
        let acc = self.scatter(v);
        self.insert_dense(acc)
    }

    pub fn insert_dense(&mut self, mut acc: Vec<F::Elem>) -> bool {
        assert_eq!(acc.len(), self.dim);
        self.reduce_dense(&mut acc);
        let f = self.field.clone();
        let Some(pivot) = acc.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&acc[pivot]);
        for x in acc[pivot..].iter_mut() {
            if !f.is_zero(x) {
                *x = f.mul(x, &inv);
            }
        }
        self.pivot_row[pivot] = Some(self.rows.len());
        self.pivots.push(pivot);
        self.rows.push(pack_row(&f, &acc, pivot));
        true
    }

    /// Back-substitutes into reduced row-echelon form.
    pub fn into_basis(self) -> SubspaceBasis<F> {
        let f = self.field;
        let dim = self.dim;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.pivots[r]);
        let mut is_pivot = vec![false; dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        // reduced[i] is the final row whose pivot is the i-th smallest pivot
        let mut reduced: Vec<Option<SparseVec<F::Elem>>> = vec![None; order.len()];
        let mut slot_of_pivot = vec![usize::MAX; dim];
        for (slot, &r) in order.iter().enumerate() {
            slot_of_pivot[self.pivots[r]] = slot;
        }
        let mut acc = vec![f.zero(); dim];
        for slot in (0..order.len()).rev() {
            let r = order[slot];
            let pivot = self.pivots[r];
            let mut nz: Vec<usize> = Vec::new();
            self.rows[r].for_each_nonzero(&f, |c, x| {
                acc[c] = x.clone();
                nz.push(c);
            });
            for &c in &nz {
                if c == pivot || !is_pivot[c] || f.is_zero(&acc[c]) {
                    continue;
                }
                let coef = acc[c].clone();
                let other = reduced[slot_of_pivot[c]].as_ref().expect("later rows reduced first");
                for (j, x) in other {
                    f.sub_mul_assign(&mut acc[*j], &coef, x);
                }
            }
            let mut out = Vec::new();
            for c in pivot..dim {
                if !f.is_zero(&acc[c]) {
                    out.push((c, std::mem::replace(&mut acc[c], f.zero())));
                }
            }
            reduced[slot] = Some(out);
        }
        let rows: Vec<SparseVec<F::Elem>> = reduced.into_iter().map(|r| r.expect("all rows reduced")).collect();
        let pivots = rows.iter().map(|r| r[0].0).collect();
        SubspaceBasis { field: f, ambient_dim: dim, rows, pivots }
    }

    /// The current rows as sparse vectors (echelon, not reduced).
    pub fn rows_sparse(&self) -> Vec<SparseVec<F::Elem>> {
        self.rows.iter().map(|r| r.to_sparse(&self.field)).collect()
    }
}

/// Subspace of `F^ambient_dim` held as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis<F: Field> {
    field: F,
    ambient_dim: usize,
    rows: Vec<SparseVec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> SubspaceBasis<F> {
    pub fn zero(field: &F, ambient_dim: usize) -> Self {
        SubspaceBasis { field: field.clone(), ambient_dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient_dim: usize) -> Self {
        let rows = (0..ambient_dim).map(|i| vec![(i, field.one())]).collect();
        SubspaceBasis { field: field.clone(), ambient_dim, rows, pivots: (0..ambient_dim).collect() }
    }

    /// Row space of the given vectors.
    pub fn span<'a, I>(field: &F, ambient_dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec<F::Elem>>,
        F::Elem: 'a,
    {
        let mut ech = Echelon::new(field, ambient_dim);
        for v in vectors {
            if ech.rank() == ambient_dim {
                break;
            }
            ech.insert(v);
        }
        ech.into_basis()
    }

    /// Assembles a basis from rows already in reduced row-echelon form.
    /// The caller guarantees the form; it is checked in debug builds.
    pub fn from_rref_rows(field: &F, ambient_dim: usize, rows: Vec<SparseVec<F::Elem>>) -> Self {
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        debug_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(rows.iter().all(|r| field.is_one(&r[0].1)));
        SubspaceBasis { field: field.clone(), ambient_dim, rows, pivots }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn vectors(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }
    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    pub fn as_matrix(&self) -> SparseMatrix<F> {
        SparseMatrix::from_rows(&self.field, self.ambient_dim, self.rows.clone())
    }

    /// Residual of `v` after subtracting its projection along the pivots.
    pub fn residual(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut acc = vec![f.zero(); self.ambient_dim];
        for (c, x) in v {
            acc[*c] = x.clone();
        }
        // In RREF the coefficient of row i is simply v[pivot_i].
        let coefs: Vec<(usize, F::Elem)> = self
            .pivots
            .iter()
            .enumerate()
            .filter(|(_, p)| !f.is_zero(&acc[**p]))
            .map(|(i, p)| (i, acc[*p].clone()))
            .collect();
        for (i, coef) in coefs {
            for (c, x) in &self.rows[i] {
                f.sub_mul_assign(&mut acc[*c], &coef, x);
            }
        }
        acc.into_iter().enumerate().filter(|(_, x)| !f.is_zero(x)).collect()
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.residual(v).is_empty()
    }

    /// Coordinates of `v` in this basis, if it is a member.
    pub fn coordinates(&self, v: &[(usize, F::Elem)]) -> Option<Vec<F::Elem>> {
        if !self.contains(v) {
            return None;
        }
        let f = &self.field;
        Some(
            self.pivots
                .iter()
                .map(|p| match v.binary_search_by_key(p, |(c, _)| *c) {
                    Ok(i) => v[i].1.clone(),
                    Err(_) => f.zero(),
                })
                .collect(),
        )
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim.to_string(),
                found: other.ambient_dim.to_string(),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        Ok(Self::span(&self.field, self.ambient_dim, self.rows.iter().chain(&other.rows)))
    }

    /// Intersection by the Zassenhaus construction: reduce `[a | a]` and
    /// `[b | 0]`; rows whose left half vanishes span the intersection.
    pub fn intersection(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let n = self.ambient_dim;
        let mut ech = Echelon::new(&self.field, 2 * n);
        for a in &self.rows {
            let doubled: SparseVec<F::Elem> =
                a.iter().cloned().chain(a.iter().map(|(c, x)| (c + n, x.clone()))).collect();
            ech.insert(&doubled);
        }
        for b in &other.rows {
            ech.insert(b);
        }
        let reduced = ech.into_basis();
        let inter: Vec<SparseVec<F::Elem>> = reduced
            .rows
            .iter()
            .filter(|r| r[0].0 >= n)
            .map(|r| r.iter().map(|(c, x)| (c - n, x.clone())).collect())
            .collect();
        Ok(Self::span(&self.field, n, inter.iter()))
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok(self.dim() <= other.dim() && self.rows.iter().all(|v| other.contains(v)))
    }

    pub fn equals(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok(self == other)
    }

    /// Reduction of every row into another field (e.g. rationals to `F_p`).
    /// Pivots stay 1, so the image is again a reduced basis of the same dimension.
    pub fn map_field<G: Field>(&self, target: &G, mut f: impl FnMut(&F::Elem) -> Option<G::Elem>) -> Option<SubspaceBasis<G>> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let mut out = Vec::with_capacity(r.len());
            for (c, x) in r {
                let y = f(x)?;
                if !target.is_zero(&y) {
                    out.push((*c, y));
                }
            }
            rows.push(out);
        }
        Some(SubspaceBasis { field: target.clone(), ambient_dim: self.ambient_dim, rows, pivots: self.pivots.clone() })
    }
}

/// Row space and rank of a matrix.
pub fn rref<F: Field>(m: &SparseMatrix<F>) -> (SubspaceBasis<F>, usize) {
    let basis = SubspaceBasis::span(m.field(), m.cols(), m.row_vecs().iter());
    let rank = basis.dim();
    (basis, rank)
}

pub fn rank<F: Field>(m: &SparseMatrix<F>) -> usize {
    let mut ech = Echelon::new(m.field(), m.cols());
    for row in m.row_vecs() {
        if ech.rank() == m.cols() {
            break;
        }
        ech.insert(row);
    }
    ech.rank()
}

/// Null space `{v : m·v = 0}`.
pub fn kernel<F: Field>(m: &SparseMatrix<F>) -> SubspaceBasis<F> {
    kernel_of_rows(m.field(), m.cols(), m.row_vecs().iter())
}

/// Null space of the matrix whose rows are the given equations.
pub fn kernel_of_rows<'a, F, I>(field: &F, cols: usize, rows: I) -> SubspaceBasis<F>
where
    F: Field,
    I: IntoIterator<Item = &'a SparseVec<F::Elem>>,
    F::Elem: 'a,
{
    let row_space = SubspaceBasis::span(field, cols, rows);
    kernel_from_rref(&row_space)
}

/// Null space read off a reduced row-echelon basis of the row space.
pub fn kernel_from_rref<F: Field>(row_space: &SubspaceBasis<F>) -> SubspaceBasis<F> {
    let f = row_space.field();
    let cols = row_space.ambient_dim();
    let mut is_pivot = vec![false; cols];
    for &p in row_space.pivot_cols() {
        is_pivot[p] = true;
    }
    // column-wise view of the non-pivot entries
    let mut by_col: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); cols];
    for (i, row) in row_space.vectors().iter().enumerate() {
        for (c, x) in row.iter().skip(1) {
            by_col[*c].push((row_space.pivot_cols()[i], x.clone()));
        }
    }
    let mut vectors: Vec<SparseVec<F::Elem>> = Vec::new();
    for free in (0..cols).filter(|c| !is_pivot[*c]) {
        let mut v: SparseVec<F::Elem> = by_col[free].iter().map(|(p, x)| (*p, f.neg(x))).collect();
        v.push((free, f.one()));
        v.sort_by_key(|(c, _)| *c);
        vectors.push(v);
    }
    SubspaceBasis::span(f, cols, vectors.iter())
}

/// Solves `target = Σ c_i · vectors[i]`, returning some solution if one exists.
pub fn express_in_span<F: Field>(field: &F, dim: usize, vectors: &[SparseVec<F::Elem>], target: &[(usize, F::Elem)]) -> Option<Vec<F::Elem>> {
    let k = vectors.len();
    let mut ech = Echelon::new(field, dim + k);
    for (i, v) in vectors.iter().enumerate() {
        let mut aug = v.clone();
        aug.push((dim + i, field.one()));
        ech.insert(&aug);
    }
    let mut acc = vec![field.zero(); dim + k];
    for (c, x) in target {
        acc[*c] = x.clone();
    }
    ech.reduce_dense(&mut acc);
    if acc[..dim].iter().any(|x| !field.is_zero(x)) {
        return None;
    }
    Some(acc[dim..].iter().map(|x| field.neg(x)).collect())
}

/// Solves `A x = b` for square nonsingular `A`; `None` if singular.
pub fn solve_square<F: Field>(a: &SparseMatrix<F>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let f = a.field();
    let n = a.rows();
    assert!(a.is_square() && b.len() == n);
    // x expresses b in the span of A's columns
    let cols: Vec<SparseVec<F::Elem>> = a.transpose().into_row_vecs();
    if rank(a) < n {
        return None;
    }
    let target: SparseVec<F::Elem> = b.iter().enumerate().filter(|(_, x)| !f.is_zero(x)).map(|(i, x)| (i, x.clone())).collect();
    express_in_span(f, n, &cols, &target)
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<F: Field>(a: &SparseMatrix<F>) -> Option<SparseMatrix<F>> {
    let f = a.field();
    let n = a.rows();
    assert!(a.is_square());
    let mut ech = Echelon::new(f, 2 * n);
    for (i, row) in a.row_vecs().iter().enumerate() {
        let mut aug = row.clone();
        aug.push((n + i, f.one()));
        ech.insert(&aug);
    }
    let basis = ech.into_basis();
    if basis.dim() < n || basis.pivot_cols()[n - 1] >= n {
        return None;
    }
    // rows of the reduced [A | I] are [I | A^{-1}]
    let rows = basis.vectors()[..n]
        .iter()
        .map(|r| r.iter().filter(|(c, _)| *c >= n).map(|(c, x)| (c - n, x.clone())).collect())
        .collect();
    Some(SparseMatrix::from_rows(f, n, rows))
}
