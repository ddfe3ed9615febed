use std::fmt;

use super::field::{Field, Rationals};
use super::LinalgError;

/// Sparse vector: strictly increasing coordinates, no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Row-major sparse matrix over a field. Each row is a sorted coordinate
/// list; zero entries are never stored.
#[derive(Clone, PartialEq)]
pub struct SparseMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<F::Elem>>,
}

/// Sparse matrix with rational entries.
pub type QMatrix = SparseMatrix<Rationals>;

impl<F: Field> fmt::Debug for SparseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, {} nnz) [", self.rows, self.cols, self.nnz())?;
        for (r, c, v) in self.iter().take(32) {
            write!(f, " ({r},{c})={:?}", v)?;
        }
        if self.nnz() > 32 {
            write!(f, " ...")?;
        }
        write!(f, " ]")
    }
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        SparseMatrix { field: field.clone(), rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, field.one())]).collect();
        SparseMatrix { field: field.clone(), rows: n, cols: n, data }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(field: &F, rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, F::Elem)>,
    {
        let mut data: Vec<SparseVec<F::Elem>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            data[r].push((c, v));
        }
        for row in &mut data {
            *row = normalize_row(field, std::mem::take(row));
        }
        SparseMatrix { field: field.clone(), rows, cols, data }
    }

    /// Builds a matrix from already sorted sparse rows. Zero entries are dropped.
    pub fn from_rows(field: &F, cols: usize, rows: Vec<SparseVec<F::Elem>>) -> Self {
        let data: Vec<_> = rows
            .into_iter()
            .map(|row| {
                debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
                row.into_iter().filter(|(c, v)| {
                    assert!(*c < cols, "column {c} outside {cols}");
                    !field.is_zero(v)
                }).collect()
            })
            .collect();
        SparseMatrix { field: field.clone(), rows: data.len(), cols, data }
    }

    pub fn from_dense(field: &F, dense: &[Vec<F::Elem>]) -> Self {
        let cols = dense.first().map_or(0, |r| r.len());
        let rows = dense
            .iter()
            .map(|row| {
                assert_eq!(row.len(), cols, "ragged dense matrix");
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !field.is_zero(v))
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        Self::from_rows(field, cols, rows)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }
    pub fn row(&self, r: usize) -> &[(usize, F::Elem)] {
        &self.data[r]
    }
    pub fn row_vecs(&self) -> &[SparseVec<F::Elem>] {
        &self.data
    }
    pub fn into_row_vecs(self) -> Vec<SparseVec<F::Elem>> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.data[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.iter() {
            data[c].push((r, v.clone()));
        }
        SparseMatrix { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        if self.field.is_zero(s) {
            return Self::zeros(&self.field, self.rows, self.cols);
        }
        let f = &self.field;
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, f.mul(v, s))).collect())
            .collect();
        SparseMatrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, f.neg(v))).collect())
            .collect();
        SparseMatrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `self + s * other`
    pub fn add_scaled(&self, other: &Self, s: &F::Elem) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| axpy_sparse(f, a, b, s))
            .collect();
        SparseMatrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &self.field.one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &self.field.neg(&self.field.one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = &self.field;
        let mut acc = vec![f.zero(); other.cols];
        let mut touched = vec![false; other.cols];
        let mut idx: Vec<usize> = Vec::new();
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    if !touched[*c] {
                        touched[*c] = true;
                        idx.push(*c);
                    }
                    let t = f.mul(a, b);
                    acc[*c] = f.add(&acc[*c], &t);
                }
            }
            idx.sort_unstable();
            let mut out = Vec::with_capacity(idx.len());
            for &c in &idx {
                let v = std::mem::replace(&mut acc[c], f.zero());
                touched[c] = false;
                if !f.is_zero(&v) {
                    out.push((c, v));
                }
            }
            idx.clear();
            data.push(out);
        }
        SparseMatrix { field: f.clone(), rows: self.rows, cols: other.cols, data }
    }

    /// `self · other − other · self`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(&self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> F::Elem {
        assert!(self.is_square());
        let f = &self.field;
        (0..self.rows).fold(f.zero(), |acc, i| f.add(&acc, &self.get(i, i)))
    }

    /// Kronecker product `self ⊗ other`, with `other` as the fast index.
    pub fn kron(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for a_row in &self.data {
            for b_row in &other.data {
                let mut out = Vec::with_capacity(a_row.len() * b_row.len());
                for (ca, va) in a_row {
                    for (cb, vb) in b_row {
                        out.push((ca * other.cols + cb, f.mul(va, vb)));
                    }
                }
                data.push(out);
            }
        }
        SparseMatrix { field: f.clone(), rows: self.rows * other.rows, cols: self.cols * other.cols, data }
    }

    /// Matrix times a dense column vector.
    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        self.data
            .iter()
            .map(|row| row.iter().fold(f.zero(), |acc, (c, a)| f.add(&acc, &f.mul(a, &v[*c]))))
            .collect()
    }

    /// Row-major flattening `(r, c) ↦ r·cols + c` as a sparse vector.
    pub fn flatten(&self) -> SparseVec<F::Elem> {
        self.iter().map(|(r, c, v)| (r * self.cols + c, v.clone())).collect()
    }

    pub fn unflatten(field: &F, rows: usize, cols: usize, v: &[(usize, F::Elem)]) -> Self {
        Self::from_triplets(field, rows, cols, v.iter().map(|(i, x)| (i / cols, i % cols, x.clone())))
    }

    /// Maps every entry into another field. Returns `None` if some entry has no image.
    pub fn map_field<G: Field>(&self, target: &G, mut f: impl FnMut(&F::Elem) -> Option<G::Elem>) -> Option<SparseMatrix<G>> {
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut out = Vec::with_capacity(row.len());
            for (c, v) in row {
                let w = f(v)?;
                if !target.is_zero(&w) {
                    out.push((*c, w));
                }
            }
            data.push(out);
        }
        Some(SparseMatrix { field: target.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn check_shape(&self, rows: usize, cols: usize) -> Result<(), LinalgError> {
        if (self.rows, self.cols) != (rows, cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("{rows}x{cols}"),
                found: format!("{}x{}", self.rows, self.cols),
            });
        }
        Ok(())
    }
}

impl QMatrix {
    /// Reduction modulo a prime, if every denominator is invertible.
    pub fn reduce<G: Field>(&self, target: &G) -> Option<SparseMatrix<G>> {
        self.map_field(target, |v| target.from_q(v))
    }
}

fn normalize_row<F: Field>(field: &F, mut row: SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    row.sort_by_key(|(c, _)| *c);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = field.add(lv, &v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !field.is_zero(v));
    out
}

/// `a + s·b` for sorted sparse vectors.
pub fn axpy_sparse<F: Field>(f: &F, a: &[(usize, F::Elem)], b: &[(usize, F::Elem)], s: &F::Elem) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = f.mul(s, &b[j].1);
            if !f.is_zero(&v) {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(s, &b[j].1));
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{q, Q};

    fn qm(rows: &[&[i64]]) -> QMatrix {
        let dense: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
        QMatrix::from_dense(&Rationals, &dense)
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = QMatrix::from_triplets(&Rationals, 2, 2, vec![(0, 0, q(1)), (0, 0, q(-1)), (1, 0, q(2)), (1, 0, q(3))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), q(5));
    }

    #[test]
    fn product_and_transpose() {
        let a = qm(&[&[1, 2], &[0, 1]]);
        let b = qm(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), qm(&[&[2, 1], &[1, 0]]));
        assert_eq!(a.transpose(), qm(&[&[1, 0], &[2, 1]]));
        assert_eq!(a.commutator(&a), QMatrix::zeros(&Rationals, 2, 2));
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = QMatrix::identity(&Rationals, 2);
        let i3 = QMatrix::identity(&Rationals, 3);
        assert_eq!(i2.kron(&i3), QMatrix::identity(&Rationals, 6));
    }

    #[test]
    fn flatten_roundtrip() {
        let a = qm(&[&[1, 0, 3], &[0, -2, 0]]);
        let back = QMatrix::unflatten(&Rationals, 2, 3, &a.flatten());
        assert_eq!(a, back);
    }
}
