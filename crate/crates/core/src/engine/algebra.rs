//! Field-generic block algorithms: unital closure, commutant and graded kernels.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::grading::{GradedSubspace, Grading};
use crate::error::{Error, Result};
use crate::linalg::{kernel, Echelon, Field, SparseMatrix, SparseVec, SubspaceBasis};

fn block_of_generator<F: Field>(grading: &Grading, g: &SparseMatrix<F>) -> Result<Option<usize>> {
    grading.operator_degree(g).ok_or_else(|| Error::Internal("generator is not homogeneous for the chosen torus".into()))
}

/// Smallest unital algebra containing `gens`, explored breadth-first by left
/// multiplication with the generators in the given order.
pub fn closure<F: Field>(field: &F, grading: &Grading, gens: &[SparseMatrix<F>]) -> Result<GradedSubspace<F>> {
    let size = grading.op_size().ok_or_else(|| Error::Internal("closure needs an operator grading".into()))?;
    let mut active: Vec<(usize, SparseMatrix<F>)> = Vec::new();
    for g in gens {
        g.check_shape(size, size)?;
        if let Some(b) = block_of_generator(grading, g)? {
            active.push((b, g.clone()));
        }
    }
    let mut ech: Vec<Option<Echelon<F>>> = vec![None; grading.block_count()];
    let mut queue: VecDeque<SparseMatrix<F>> = VecDeque::new();
    let push = |m: SparseMatrix<F>, ech: &mut Vec<Option<Echelon<F>>>, queue: &mut VecDeque<SparseMatrix<F>>| -> Result<()> {
        let flat = m.flatten();
        let (b, local) = grading.localize(&flat).ok_or_else(|| Error::Internal("product left the grading".into()))?;
        let Some(b) = b else { return Ok(()) };
        let slot = ech[b].get_or_insert_with(|| Echelon::new(field, grading.block(b).len()));
        if slot.insert(&local) {
            queue.push_back(m);
        }
        Ok(())
    };
    push(SparseMatrix::identity(field, size), &mut ech, &mut queue)?;
    while let Some(m) = queue.pop_front() {
        for (_, g) in &active {
            push(g.mul(&m), &mut ech, &mut queue)?;
        }
    }
    Ok(GradedSubspace {
        blocks: ech
            .into_iter()
            .enumerate()
            .map(|(b, e)| match e {
                Some(e) => e.into_basis(),
                None => SubspaceBasis::zero(field, grading.block(b).len()),
            })
            .collect(),
    })
}

/// `{T : gT = Tg for all g}`, solved block by block.
pub fn commutant<F: Field>(field: &F, grading: &Grading, gens: &[SparseMatrix<F>]) -> Result<GradedSubspace<F>> {
    let size = grading.op_size().ok_or_else(|| Error::Internal("commutant needs an operator grading".into()))?;
    let mut active: Vec<(usize, SparseMatrix<F>, SparseMatrix<F>)> = Vec::new();
    for g in gens {
        g.check_shape(size, size)?;
        if let Some(b) = block_of_generator(grading, g)? {
            active.push((b, g.clone(), g.transpose()));
        }
    }
    let blocks: Vec<SubspaceBasis<F>> = (0..grading.block_count())
        .into_par_iter()
        .map(|alpha| {
            let coords = grading.block(alpha);
            let mut triplets: Vec<(usize, usize, F::Elem)> = Vec::new();
            let mut offset = 0usize;
            for (gb, g, gt) in &active {
                let Some(target) = grading.shifted(alpha, *gb) else { continue };
                for (u, &coord) in coords.iter().enumerate() {
                    let (r, c) = (coord / size, coord % size);
                    // g E_{rc}: column r of g lands in column c
                    for (x, v) in gt.row(r) {
                        let (tb, tl) = grading.locate(x * size + c);
                        debug_assert_eq!(tb, target);
                        triplets.push((offset + tl, u, v.clone()));
                    }
                    // E_{rc} g: row c of g lands in row r
                    for (y, v) in g.row(c) {
                        let (tb, tl) = grading.locate(r * size + y);
                        debug_assert_eq!(tb, target);
                        triplets.push((offset + tl, u, field.neg(v)));
                    }
                }
                offset += grading.block(target).len();
            }
            let sys = SparseMatrix::from_triplets(field, offset, coords.len(), triplets);
            kernel(&sys)
        })
        .collect();
    Ok(GradedSubspace { blocks })
}

/// Common kernel of the operators `gens` on `V^{⊗d}`, block by block.
pub fn graded_kernel<F: Field>(field: &F, grading: &Grading, gens: &[SparseMatrix<F>]) -> Result<GradedSubspace<F>> {
    let size = grading.ambient();
    for g in gens {
        g.check_shape(size, size)?;
    }
    // transpose so that columns are read as rows
    let cols: Vec<SparseMatrix<F>> = gens.iter().map(|g| g.transpose()).collect();
    let blocks: Vec<SubspaceBasis<F>> = (0..grading.block_count())
        .into_par_iter()
        .map(|alpha| {
            let coords = grading.block(alpha);
            let mut triplets: Vec<(usize, usize, F::Elem)> = Vec::new();
            let mut offset = 0usize;
            for gt in &cols {
                for (u, &coord) in coords.iter().enumerate() {
                    for (x, v) in gt.row(coord) {
                        triplets.push((offset + x, u, v.clone()));
                    }
                }
                offset += size;
            }
            let sys = SparseMatrix::from_triplets(field, offset, coords.len(), triplets);
            kernel(&sys)
        })
        .collect();
    Ok(GradedSubspace { blocks })
}

/// Vectors of `space` fixed by `m`, for a subspace stable under `m`.
pub fn fixed_subspace<F: Field>(field: &F, grading: &Grading, space: &GradedSubspace<F>, m: &SparseMatrix<F>) -> Result<GradedSubspace<F>> {
    let basis = space.flat(grading);
    let k = basis.dim();
    let id = SparseMatrix::identity(field, grading.ambient());
    let shifted = m.sub(&id);
    // columns: images of the basis vectors under m - 1
    let mut triplets: Vec<(usize, usize, F::Elem)> = Vec::new();
    for (j, v) in basis.vectors().iter().enumerate() {
        let img = apply_sparse(field, &shifted, v);
        for (i, x) in img {
            triplets.push((i, j, x));
        }
    }
    let sys = SparseMatrix::from_triplets(field, grading.ambient(), k, triplets);
    let coeffs = kernel(&sys);
    let fixed: Vec<SparseVec<F::Elem>> = coeffs
        .vectors()
        .iter()
        .map(|c| {
            let mut acc: SparseVec<F::Elem> = Vec::new();
            for (j, x) in c {
                acc = crate::linalg::sparse::axpy_sparse(field, &acc, &basis.vectors()[*j], x);
            }
            acc
        })
        .collect();
    Ok(GradedSubspace::from_homogeneous(field, grading, fixed.iter()))
}

/// `m·v` for a sparse vector `v`.
pub fn apply_sparse<F: Field>(field: &F, m: &SparseMatrix<F>, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut dense = vec![field.zero(); m.cols()];
    for (i, x) in v {
        dense[*i] = x.clone();
    }
    m.apply(&dense).into_iter().enumerate().filter(|(_, x)| !field.is_zero(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::grading::Torus;
    use crate::forms::{build_space, Family};
    use crate::linalg::{PrimeField, Rationals};
    use crate::tensor::{brauer_generators, derivation_action};

    #[test]
    fn brauer_closure_and_commutant_have_dimension_three() {
        let s = build_space(Family::SoOdd, 2).unwrap();
        let torus = Torus::for_matrices(&s, &[]);
        let gr = Grading::operators(&torus, 5, 2);
        let gens: Vec<_> = brauer_generators(&s, 2).unwrap().into_iter().map(|g| g.matrix).collect();
        let b2 = closure(&Rationals, &gr, &gens).unwrap();
        assert_eq!(b2.dim(), 3);
        let phis: Vec<_> = s.lie_basis().elements().iter().map(|x| derivation_action(5, 2, x, "x").unwrap().matrix).collect();
        let comm = commutant(&Rationals, &gr, &phis).unwrap();
        assert_eq!(comm, b2);
        let p = PrimeField::new(2305843009213693951).unwrap();
        let phis_p: Vec<_> = phis.iter().map(|m| m.reduce(&p).unwrap()).collect();
        assert_eq!(commutant(&p, &gr, &phis_p).unwrap().dim(), 3);
    }

    #[test]
    fn empty_generators() {
        let s = build_space(Family::Sp, 1).unwrap();
        let gr = Grading::operators(&Torus::for_matrices(&s, &[]), 2, 2);
        assert_eq!(closure(&Rationals, &gr, &[]).unwrap().dim(), 1);
        assert_eq!(commutant(&Rationals, &gr, &[]).unwrap().dim(), 16);
    }

    #[test]
    fn invariants_in_degree_two() {
        let s = build_space(Family::Sp, 2).unwrap();
        let gr = Grading::vectors(&Torus::for_matrices(&s, &[]), 4, 2);
        let phis: Vec<_> = s.lie_basis().elements().iter().map(|x| derivation_action(4, 2, x, "x").unwrap().matrix).collect();
        assert_eq!(graded_kernel(&Rationals, &gr, &phis).unwrap().dim(), 1);
    }
}
