//! Torus gradings used to split subspaces of `V^{⊗d}` and `End(V^{⊗d})`
//! into independent blocks.
//!
//! A torus is a space of diagonal matrices `t` on `V`; each coordinate of `V`
//! gets an integer weight vector. A tensor basis vector has the sum of its
//! slot weights, and the matrix unit `E_{R,C}` has weight `w(R) - w(C)`.
//! Operators that are homogeneous for the torus map blocks to blocks, so
//! closures, commutants and kernels can be computed one block at a time.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::forms::FormedSpace;
use crate::linalg::{kernel_of_rows, Field, QMatrix, Rationals, SparseMatrix, SparseVec, SubspaceBasis, Q};
use crate::tensor::decode;

/// Integer weights of the coordinates of `V` under a diagonal torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torus {
    /// `weights[i]` is the weight vector of coordinate `i` of `V`.
    pub weights: Vec<Vec<i64>>,
}

impl Torus {
    pub fn trivial(n: usize) -> Self {
        Torus { weights: vec![Vec::new(); n] }
    }

    pub fn rank(&self) -> usize {
        self.weights.first().map_or(0, |w| w.len())
    }

    /// Largest torus inside the diagonal of the Lie algebra of `space`
    /// for which every listed matrix on `V` is homogeneous.
    pub fn for_matrices(space: &FormedSpace, matrices: &[&QMatrix]) -> Self {
        let n = space.dim();
        // unknowns: t_0..t_{n-1}; constraints are rows of a homogeneous system
        let mut rows: Vec<SparseVec<Q>> = Vec::new();
        if space.family().is_formed() {
            for &i in space.indices() {
                let (a, b) = (space.pos(i), space.pos(-i));
                if a < b {
                    rows.push(vec![(a, Q::one()), (b, Q::one())]);
                } else if a == b {
                    rows.push(vec![(a, Q::one())]);
                }
            }
        }
        for m in matrices {
            let mut first: Option<(usize, usize)> = None;
            for (r, c, _) in m.iter() {
                match first {
                    None => first = Some((r, c)),
                    Some((r0, c0)) => {
                        // (t_r - t_c) - (t_r0 - t_c0) = 0
                        let mut acc: HashMap<usize, i64> = HashMap::new();
                        *acc.entry(r).or_default() += 1;
                        *acc.entry(c).or_default() -= 1;
                        *acc.entry(r0).or_default() -= 1;
                        *acc.entry(c0).or_default() += 1;
                        let mut row: SparseVec<Q> = acc.into_iter().filter(|(_, v)| *v != 0).map(|(k, v)| (k, Q::from_integer(v.into()))).collect();
                        row.sort_by_key(|x| x.0);
                        if !row.is_empty() {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        let ker = kernel_of_rows(&Rationals, n, rows.iter());
        let mut weights = vec![Vec::with_capacity(ker.dim()); n];
        for v in ker.vectors() {
            let lcm = v.iter().fold(num_bigint::BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
            let mut dense = vec![0i64; n];
            for (i, x) in v {
                dense[*i] = (x * Q::from_integer(lcm.clone())).to_integer().to_i64().expect("small weights");
            }
            for (i, w) in dense.into_iter().enumerate() {
                weights[i].push(w);
            }
        }
        Torus { weights }
    }

    fn add_into(&self, acc: &mut [i64], coord: usize, sign: i64) {
        for (a, w) in acc.iter_mut().zip(&self.weights[coord]) {
            *a += sign * w;
        }
    }

    /// Weight of a tensor basis index.
    pub fn tensor_weight(&self, n: usize, d: usize, idx: usize) -> Vec<i64> {
        let mut acc = vec![0; self.rank()];
        for c in decode(n, d, idx) {
            self.add_into(&mut acc, c, 1);
        }
        acc
    }

    /// Degree of a matrix on `V`, if it is homogeneous.
    pub fn matrix_degree(&self, m: &QMatrix) -> Option<Vec<i64>> {
        let mut deg: Option<Vec<i64>> = None;
        for (r, c, _) in m.iter() {
            let mut acc = vec![0; self.rank()];
            self.add_into(&mut acc, r, 1);
            self.add_into(&mut acc, c, -1);
            match &deg {
                None => deg = Some(acc),
                Some(d0) if *d0 != acc => return None,
                _ => {}
            }
        }
        Some(deg.unwrap_or_else(|| vec![0; self.rank()]))
    }

    /// Splits a matrix on `V` into homogeneous components, ordered by degree.
    pub fn components(&self, m: &QMatrix) -> Vec<QMatrix> {
        let mut parts: Vec<(Vec<i64>, Vec<(usize, usize, Q)>)> = Vec::new();
        for (r, c, v) in m.iter() {
            let mut acc = vec![0; self.rank()];
            self.add_into(&mut acc, r, 1);
            self.add_into(&mut acc, c, -1);
            match parts.iter_mut().find(|(d, _)| *d == acc) {
                Some((_, e)) => e.push((r, c, v.clone())),
                None => parts.push((acc, vec![(r, c, v.clone())])),
            }
        }
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        parts.into_iter().map(|(_, e)| QMatrix::from_triplets(&Rationals, m.rows(), m.cols(), e)).collect()
    }
}

/// A partition of ambient coordinates into degree blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    ambient: usize,
    block_of: Vec<u32>,
    local: Vec<u32>,
    blocks: Vec<Vec<usize>>,
    degrees: Vec<Vec<i64>>,
    lookup: HashMap<Vec<i64>, usize>,
    /// Tensor size `n^d` for operator gradings; `None` for vector gradings.
    op_size: Option<usize>,
}

impl Grading {
    fn from_keys(ambient: usize, key: impl Fn(usize) -> Vec<i64>, op_size: Option<usize>) -> Self {
        let mut lookup: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut degrees: Vec<Vec<i64>> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = vec![0u32; ambient];
        let mut local = vec![0u32; ambient];
        for c in 0..ambient {
            let k = key(c);
            let b = *lookup.entry(k.clone()).or_insert_with(|| {
                degrees.push(k);
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            block_of[c] = b as u32;
            local[c] = blocks[b].len() as u32;
            blocks[b].push(c);
        }
        Grading { ambient, block_of, local, blocks, degrees, lookup, op_size }
    }

    /// Grading of `End(V^{⊗d})` (flattened row-major) by the torus.
    pub fn operators(torus: &Torus, n: usize, d: usize) -> Self {
        let size = n.pow(d as u32);
        let tw: Vec<Vec<i64>> = (0..size).map(|i| torus.tensor_weight(n, d, i)).collect();
        Self::from_keys(
            size * size,
            |c| {
                let (r, col) = (c / size, c % size);
                tw[r].iter().zip(&tw[col]).map(|(a, b)| a - b).collect()
            },
            Some(size),
        )
    }

    /// Grading of `V^{⊗d}` by the torus.
    pub fn vectors(torus: &Torus, n: usize, d: usize) -> Self {
        let size = n.pow(d as u32);
        Self::from_keys(size, |i| torus.tensor_weight(n, d, i), None)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
    pub fn block(&self, b: usize) -> &[usize] {
        &self.blocks[b]
    }
    pub fn degree(&self, b: usize) -> &[i64] {
        &self.degrees[b]
    }
    pub fn block_of_degree(&self, deg: &[i64]) -> Option<usize> {
        self.lookup.get(deg).copied()
    }
    pub fn op_size(&self) -> Option<usize> {
        self.op_size
    }
    pub fn largest_block(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    pub fn locate(&self, coord: usize) -> (usize, usize) {
        (self.block_of[coord] as usize, self.local[coord] as usize)
    }

    /// Block and local coordinates of a homogeneous vector; `None` if it is
    /// not homogeneous. The zero vector maps to `Some((None, []))`.
    pub fn localize<E: Clone>(&self, v: &[(usize, E)]) -> Option<(Option<usize>, SparseVec<E>)> {
        let Some(&(c0, _)) = v.first() else {
            return Some((None, Vec::new()));
        };
        let b = self.block_of[c0] as usize;
        let mut out = Vec::with_capacity(v.len());
        for (c, x) in v {
            if self.block_of[*c] as usize != b {
                return None;
            }
            out.push((self.local[*c] as usize, x.clone()));
        }
        Some((Some(b), out))
    }

    pub fn globalize<E: Clone>(&self, b: usize, v: &[(usize, E)]) -> SparseVec<E> {
        v.iter().map(|(l, x)| (self.blocks[b][*l], x.clone())).collect()
    }

    /// Degree of an operator in this operator grading, if homogeneous.
    pub fn operator_degree<F: Field>(&self, m: &SparseMatrix<F>) -> Option<Option<usize>> {
        let size = self.op_size.expect("operator grading");
        let mut block: Option<usize> = None;
        for (r, c, _) in m.iter() {
            let b = self.block_of[r * size + c] as usize;
            match block {
                None => block = Some(b),
                Some(b0) if b0 != b => return None,
                _ => {}
            }
        }
        Some(block)
    }

    /// Shift between blocks induced by a homogeneous operator of block `g`:
    /// the block containing `deg(α) + deg(g)`.
    pub fn shifted(&self, alpha: usize, g: usize) -> Option<usize> {
        let deg: Vec<i64> = self.degrees[alpha].iter().zip(&self.degrees[g]).map(|(a, b)| a + b).collect();
        self.block_of_degree(&deg)
    }
}

/// A subspace stored as one reduced basis per block.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSubspace<F: Field> {
    pub blocks: Vec<SubspaceBasis<F>>,
}

impl<F: Field> GradedSubspace<F> {
    pub fn zero(field: &F, grading: &Grading) -> Self {
        GradedSubspace { blocks: (0..grading.block_count()).map(|b| SubspaceBasis::zero(field, grading.block(b).len())).collect() }
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }

    /// The canonical flat reduced basis in ambient coordinates.
    pub fn flat(&self, grading: &Grading) -> SubspaceBasis<F> {
        let field = self.blocks.first().map(|b| b.field().clone());
        let Some(field) = field else {
            panic!("graded subspace without blocks");
        };
        let mut rows: Vec<SparseVec<F::Elem>> =
            self.blocks.iter().enumerate().flat_map(|(b, basis)| basis.vectors().iter().map(move |v| grading.globalize(b, v))).collect();
        rows.sort_by_key(|r| r[0].0);
        SubspaceBasis::from_rref_rows(&field, grading.ambient(), rows)
    }

    /// Splits a flat subspace spanned by homogeneous vectors into blocks.
    pub fn from_homogeneous<'a, I>(field: &F, grading: &Grading, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec<F::Elem>>,
        F::Elem: 'a,
    {
        let mut per: Vec<Vec<SparseVec<F::Elem>>> = vec![Vec::new(); grading.block_count()];
        for v in vectors {
            let (b, local) = grading.localize(v).expect("homogeneous vector");
            if let Some(b) = b {
                per[b].push(local);
            }
        }
        GradedSubspace {
            blocks: per.iter().enumerate().map(|(b, vs)| SubspaceBasis::span(field, grading.block(b).len(), vs.iter())).collect(),
        }
    }

    pub fn contains_flat(&self, grading: &Grading, v: &[(usize, F::Elem)]) -> bool {
        // split an arbitrary vector into block components
        let mut per: HashMap<usize, SparseVec<F::Elem>> = HashMap::new();
        for (c, x) in v {
            let (b, l) = grading.locate(*c);
            per.entry(b).or_default().push((l, x.clone()));
        }
        per.into_iter().all(|(b, mut local)| {
            local.sort_by_key(|x| x.0);
            self.blocks[b].contains(&local)
        })
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a.is_subspace_of(b).expect("same block sizes"))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        GradedSubspace { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.intersection(b).expect("same block sizes")).collect() }
    }

    pub fn sum(&self, other: &Self) -> Self {
        GradedSubspace { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sum(b).expect("same block sizes")).collect() }
    }

    /// Pivot columns of every block, used to compare bases across primes.
    pub fn pivot_signature(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.pivot_cols().to_vec()).collect()
    }
}
