//! Operator algebras on `V^{⊗d}`: closures, commutants, invariants and the
//! trace pairing, computed modulo random primes and certified over `Q`.

pub mod algebra;
pub mod grading;
pub mod trace;

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

pub use grading::{GradedSubspace, Grading, Torus};
pub use trace::{trace_monomial, trace_pairing_j};

use crate::error::{Error, Result};
use crate::linalg::field::{crt, random_primes, rational_reconstruct};
use crate::linalg::{Field, PrimeField, QMatrix, Rationals, SparseMatrix, SparseVec, SubspaceBasis, Q};
use crate::tensor::TensorOperator;

/// How a result was obtained.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    /// Primes the prescreen ran over.
    pub primes: Vec<u64>,
    /// True when the basis was checked exactly over `Q`.
    pub rational_certified: bool,
    /// `lift`, `direct` or `modular`.
    pub method: String,
    /// Primes whose reduced answer disagreed with the accepted one.
    pub collisions: Vec<String>,
    pub millis: u128,
}

/// Arithmetic backend requested by the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Prime prescreen, then certification over `Q`.
    Rational,
    /// A single prime; no rational certification.
    Prime(Option<u64>),
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub backend: Backend,
    pub seed: u64,
    pub prime_count: usize,
    /// Rational certification runs when the ambient dimension is at most this,
    /// or when `n^d` is at most `certify_tensor_limit`.
    pub certify_ambient_limit: usize,
    pub certify_tensor_limit: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { backend: Backend::Rational, seed: 0, prime_count: 3, certify_ambient_limit: 2000, certify_tensor_limit: 50 }
    }
}

impl EngineConfig {
    pub fn primes(&self) -> Result<Vec<u64>> {
        match self.backend {
            Backend::Prime(Some(p)) => {
                PrimeField::new(p)?;
                Ok(vec![p])
            }
            Backend::Prime(None) => Ok(random_primes(self.seed, 1, 62)),
            Backend::Rational => Ok(random_primes(self.seed, self.prime_count.max(1), 62)),
        }
    }

    fn certify(&self, ambient: usize, tensor_size: usize) -> bool {
        self.backend == Backend::Rational && (ambient <= self.certify_ambient_limit || tensor_size <= self.certify_tensor_limit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Extremum {
    /// Reduction can only lose rank: trust the largest answer.
    Max,
    /// Reduction can only grow kernels: trust the smallest answer.
    Min,
}

trait Task: Sync {
    fn run<F: Field>(&self, field: &F) -> Result<GradedSubspace<F>>;
    fn verify(&self, candidate: &GradedSubspace<Rationals>) -> bool;
    fn extremum(&self) -> Extremum;
}

/// A subspace of `V^{⊗d}` or `End(V^{⊗d})` with its provenance.
#[derive(Clone, Debug)]
pub struct ComputedSpace {
    pub grading: Arc<Grading>,
    pub dim: usize,
    pub exact: Option<GradedSubspace<Rationals>>,
    pub modular: Option<(PrimeField, GradedSubspace<PrimeField>)>,
    pub provenance: Provenance,
}

/// Outcome of comparing two computed subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub holds: bool,
    /// True when decided with exact rational bases.
    pub exact: bool,
}

fn run_task<T: Task>(task: &T, cfg: &EngineConfig, grading: &Arc<Grading>, certify: bool) -> Result<ComputedSpace> {
    let start = Instant::now();
    let primes = cfg.primes()?;
    let results: Vec<(u64, Result<GradedSubspace<PrimeField>>)> = primes
        .par_iter()
        .map(|&p| {
            let field = PrimeField::new(p).expect("checked prime");
            (p, task.run(&field))
        })
        .collect();
    let mut prov = Provenance { primes: primes.clone(), ..Default::default() };
    let mut ok: Vec<(PrimeField, GradedSubspace<PrimeField>)> = Vec::new();
    for (p, r) in results {
        match r {
            Ok(s) => ok.push((PrimeField::new(p).expect("checked prime"), s)),
            Err(e) => prov.collisions.push(format!("prime {p}: {e}")),
        }
    }
    let chosen = match task.extremum() {
        Extremum::Max => ok.iter().map(|(_, s)| s.dim()).max(),
        Extremum::Min => ok.iter().map(|(_, s)| s.dim()).min(),
    };
    let mut agreeing: Vec<(PrimeField, GradedSubspace<PrimeField>)> = Vec::new();
    if let Some(target) = chosen {
        let sig = ok.iter().find(|(_, s)| s.dim() == target).map(|(_, s)| s.pivot_signature());
        for (f, s) in ok {
            if Some(s.pivot_signature()) == sig {
                agreeing.push((f, s));
            } else {
                prov.collisions.push(format!("prime {}: dimension {} against {}", f.modulus(), s.dim(), target));
            }
        }
    }
    let modular = agreeing.first().cloned();
    if !certify {
        let (field, space) = modular.ok_or_else(|| Error::Internal("no prime produced a result".into()))?;
        prov.method = "modular".into();
        prov.millis = start.elapsed().as_millis();
        return Ok(ComputedSpace { grading: grading.clone(), dim: space.dim(), exact: None, modular: Some((field, space)), provenance: prov });
    }
    let mut exact = None;
    if !agreeing.is_empty() {
        if let Some(lifted) = lift(&agreeing) {
            if task.verify(&lifted) {
                exact = Some(lifted);
                prov.method = "lift".into();
            }
        }
    }
    let exact = match exact {
        Some(e) => e,
        None => {
            prov.method = "direct".into();
            task.run(&Rationals)?
        }
    };
    if let Some((f, s)) = &modular {
        if s.dim() != exact.dim() {
            prov.collisions.push(format!("prime {}: dimension {} against rational {}", f.modulus(), s.dim(), exact.dim()));
        }
    }
    prov.rational_certified = true;
    prov.millis = start.elapsed().as_millis();
    Ok(ComputedSpace { grading: grading.clone(), dim: exact.dim(), exact: Some(exact), modular, provenance: prov })
}

/// Rational reconstruction of reduced bases that share pivots across primes.
fn lift(results: &[(PrimeField, GradedSubspace<PrimeField>)]) -> Option<GradedSubspace<Rationals>> {
    let (_, first) = &results[0];
    let mut blocks = Vec::with_capacity(first.blocks.len());
    for (b, basis) in first.blocks.iter().enumerate() {
        let mut rows: Vec<SparseVec<Q>> = Vec::with_capacity(basis.dim());
        for (i, _) in basis.vectors().iter().enumerate() {
            let mut cols: Vec<usize> = results.iter().flat_map(|(_, s)| s.blocks[b].vectors()[i].iter().map(|(c, _)| *c)).collect();
            cols.sort_unstable();
            cols.dedup();
            let mut row: SparseVec<Q> = Vec::with_capacity(cols.len());
            for c in cols {
                let residues: Vec<(u64, u64)> = results
                    .iter()
                    .map(|(f, s)| {
                        let v = &s.blocks[b].vectors()[i];
                        let r = v.binary_search_by_key(&c, |x| x.0).map(|k| v[k].1).unwrap_or(0);
                        (r, f.modulus())
                    })
                    .collect();
                let (a, m): (BigInt, BigInt) = crt(&residues);
                let x = rational_reconstruct(&a, &m)?;
                if x != Q::from_integer(0.into()) {
                    row.push((c, x));
                }
            }
            rows.push(row);
        }
        blocks.push(SubspaceBasis::from_rref_rows(&Rationals, basis.ambient_dim(), rows));
    }
    Some(GradedSubspace { blocks })
}

fn reduce_all<F: Field>(field: &F, ms: &[QMatrix]) -> Result<Vec<SparseMatrix<F>>> {
    ms.iter()
        .map(|m| m.reduce(field).ok_or_else(|| Error::Internal(format!("denominator vanishes in {}", field.describe()))))
        .collect()
}

fn reduce_space<F: Field>(field: &F, s: &GradedSubspace<Rationals>) -> Result<GradedSubspace<F>> {
    let blocks = s
        .blocks
        .iter()
        .map(|b| b.map_field(field, |x| field.from_q(x)).ok_or_else(|| Error::Internal(format!("basis does not reduce in {}", field.describe()))))
        .collect::<Result<Vec<_>>>()?;
    Ok(GradedSubspace { blocks })
}

struct ClosureTask<'a> {
    grading: &'a Grading,
    gens: Vec<QMatrix>,
}

impl Task for ClosureTask<'_> {
    fn run<F: Field>(&self, field: &F) -> Result<GradedSubspace<F>> {
        algebra::closure(field, self.grading, &reduce_all(field, &self.gens)?)
    }
    fn verify(&self, c: &GradedSubspace<Rationals>) -> bool {
        let size = self.grading.op_size().expect("operator grading");
        let id = QMatrix::identity(&Rationals, size);
        if !c.contains_flat(self.grading, &id.flatten()) {
            return false;
        }
        if !self.gens.iter().all(|g| c.contains_flat(self.grading, &g.flatten())) {
            return false;
        }
        // left multiplication by generators preserves the span
        let flat = c.flat(self.grading);
        flat.vectors().par_iter().all(|v| {
            let m = QMatrix::unflatten(&Rationals, size, size, v);
            self.gens.iter().all(|g| c.contains_flat(self.grading, &g.mul(&m).flatten()))
        })
    }
    fn extremum(&self) -> Extremum {
        Extremum::Max
    }
}

struct CommutantTask<'a> {
    grading: &'a Grading,
    gens: Vec<QMatrix>,
}

impl Task for CommutantTask<'_> {
    fn run<F: Field>(&self, field: &F) -> Result<GradedSubspace<F>> {
        algebra::commutant(field, self.grading, &reduce_all(field, &self.gens)?)
    }
    fn verify(&self, c: &GradedSubspace<Rationals>) -> bool {
        let size = self.grading.op_size().expect("operator grading");
        let flat = c.flat(self.grading);
        flat.vectors().par_iter().all(|v| {
            let m = QMatrix::unflatten(&Rationals, size, size, v);
            self.gens.iter().all(|g| g.mul(&m) == m.mul(g))
        })
    }
    fn extremum(&self) -> Extremum {
        Extremum::Min
    }
}

struct KernelTask<'a> {
    grading: &'a Grading,
    gens: Vec<QMatrix>,
    fixed_by: Option<QMatrix>,
}

impl Task for KernelTask<'_> {
    fn run<F: Field>(&self, field: &F) -> Result<GradedSubspace<F>> {
        let k = algebra::graded_kernel(field, self.grading, &reduce_all(field, &self.gens)?)?;
        match &self.fixed_by {
            Some(m) => algebra::fixed_subspace(field, self.grading, &k, &reduce_all(field, std::slice::from_ref(m))?[0]),
            None => Ok(k),
        }
    }
    fn verify(&self, c: &GradedSubspace<Rationals>) -> bool {
        let flat = c.flat(self.grading);
        flat.vectors().iter().all(|v| {
            self.gens.iter().all(|g| algebra::apply_sparse(&Rationals, g, v).is_empty())
                && self.fixed_by.as_ref().map_or(true, |m| algebra::apply_sparse(&Rationals, m, v) == *v)
        })
    }
    fn extremum(&self) -> Extremum {
        Extremum::Min
    }
}

struct IntersectionTask<'a> {
    a: &'a GradedSubspace<Rationals>,
    b: &'a GradedSubspace<Rationals>,
}

impl Task for IntersectionTask<'_> {
    fn run<F: Field>(&self, field: &F) -> Result<GradedSubspace<F>> {
        Ok(reduce_space(field, self.a)?.intersection(&reduce_space(field, self.b)?))
    }
    fn verify(&self, c: &GradedSubspace<Rationals>) -> bool {
        c.is_subspace_of(self.a) && c.is_subspace_of(self.b)
    }
    fn extremum(&self) -> Extremum {
        Extremum::Min
    }
}

/// Shared setting for a family of computations on one tensor power.
#[derive(Clone, Debug)]
pub struct OperatorContext {
    pub n: usize,
    pub d: usize,
    pub torus: Torus,
    pub grading: Arc<Grading>,
    pub config: EngineConfig,
}

/// A closed unital algebra of operators on `V^{⊗d}`.
#[derive(Clone, Debug)]
pub struct OperatorAlgebra {
    pub n: usize,
    pub d: usize,
    /// Recipe tags of the generators, in exploration order.
    pub generators: Vec<String>,
    pub closed: bool,
    pub space: ComputedSpace,
}

impl OperatorAlgebra {
    pub fn dim(&self) -> usize {
        self.space.dim
    }

    /// Exact basis elements as matrices, when certified.
    pub fn exact_elements(&self) -> Option<Vec<QMatrix>> {
        let size = self.n.pow(self.d as u32);
        let flat = self.space.exact.as_ref()?.flat(&self.space.grading);
        Some(flat.vectors().iter().map(|v| QMatrix::unflatten(&Rationals, size, size, v)).collect())
    }
}

impl OperatorContext {
    pub fn new(n: usize, d: usize, torus: Torus, config: EngineConfig) -> Self {
        let grading = Arc::new(Grading::operators(&torus, n, d));
        OperatorContext { n, d, torus, grading, config }
    }

    pub fn size(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    fn certify(&self) -> bool {
        self.config.certify(self.grading.ambient(), self.size())
    }

    fn check(&self, ops: &[TensorOperator]) -> Result<()> {
        for op in ops {
            if (op.n, op.d) != (self.n, self.d) {
                return Err(Error::Index(format!("operator {} lives on ({}, {}), expected ({}, {})", op.recipe.tag(), op.n, op.d, self.n, self.d)));
            }
        }
        Ok(())
    }

    /// Smallest unital algebra containing the generators.
    pub fn span_closure(&self, generators: &[TensorOperator]) -> Result<OperatorAlgebra> {
        self.check(generators)?;
        let mut sorted: Vec<&TensorOperator> = generators.iter().collect();
        sorted.sort_by_key(|g| g.recipe.tag());
        let task = ClosureTask { grading: &self.grading, gens: sorted.iter().map(|g| g.matrix.clone()).collect() };
        let space = run_task(&task, &self.config, &self.grading, self.certify())?;
        Ok(OperatorAlgebra { n: self.n, d: self.d, generators: sorted.iter().map(|g| g.recipe.tag()).collect(), closed: true, space })
    }

    /// All operators commuting with the generators.
    pub fn commutant(&self, generators: &[TensorOperator]) -> Result<OperatorAlgebra> {
        self.check(generators)?;
        self.commutant_of_matrices(generators.iter().map(|g| g.matrix.clone()).collect(), generators.iter().map(|g| g.recipe.tag()).collect())
    }

    /// Commutant of an algebra; uses its exact basis when available.
    pub fn commutant_of_algebra(&self, alg: &OperatorAlgebra) -> Result<OperatorAlgebra> {
        match alg.exact_elements() {
            Some(ms) => {
                let tags = (0..ms.len()).map(|i| format!("basis[{i}]")).collect();
                self.commutant_of_matrices(ms, tags)
            }
            None => Err(Error::Unsupported { op: "commutant of an uncertified algebra", family: "prime backend".into() }),
        }
    }

    fn commutant_of_matrices(&self, gens: Vec<QMatrix>, tags: Vec<String>) -> Result<OperatorAlgebra> {
        let task = CommutantTask { grading: &self.grading, gens };
        let space = run_task(&task, &self.config, &self.grading, self.certify())?;
        Ok(OperatorAlgebra { n: self.n, d: self.d, generators: tags, closed: true, space })
    }

    /// Intersection of two algebras computed in this context.
    pub fn intersection(&self, a: &OperatorAlgebra, b: &OperatorAlgebra) -> Result<OperatorAlgebra> {
        let space = intersect_spaces(&a.space, &b.space, &self.config, self.certify())?;
        Ok(OperatorAlgebra { n: self.n, d: self.d, generators: vec![format!("{} ∩ {}", a.generators.len(), b.generators.len())], closed: true, space })
    }
}

fn same_grading(a: &Arc<Grading>, b: &Arc<Grading>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn intersect_spaces(a: &ComputedSpace, b: &ComputedSpace, cfg: &EngineConfig, certify: bool) -> Result<ComputedSpace> {
    if !same_grading(&a.grading, &b.grading) {
        return Err(Error::Internal("intersection of spaces with different gradings".into()));
    }
    match (&a.exact, &b.exact) {
        (Some(ea), Some(eb)) => run_task(&IntersectionTask { a: ea, b: eb }, cfg, &a.grading, certify),
        _ => match (&a.modular, &b.modular) {
            (Some((fa, sa)), Some((fb, sb))) if fa == fb => {
                let s = sa.intersection(sb);
                let prov = Provenance { primes: vec![fa.modulus()], method: "modular".into(), ..Default::default() };
                Ok(ComputedSpace { grading: a.grading.clone(), dim: s.dim(), exact: None, modular: Some((fa.clone(), s)), provenance: prov })
            }
            _ => Err(Error::Internal("spaces were computed over different fields".into())),
        },
    }
}

impl ComputedSpace {
    fn same_kind<'a>(&'a self, other: &'a Self) -> Result<Kind<'a>> {
        if !same_grading(&self.grading, &other.grading) {
            return Err(Error::Internal("comparison of spaces with different gradings".into()));
        }
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return Ok(Kind::Exact(a, b));
        }
        match (&self.modular, &other.modular) {
            (Some((fa, a)), Some((fb, b))) if fa == fb => Ok(Kind::Modular(a, b)),
            _ => Err(Error::Internal("spaces were computed over different fields".into())),
        }
    }

    pub fn equals(&self, other: &Self) -> Result<Comparison> {
        Ok(match self.same_kind(other)? {
            Kind::Exact(a, b) => Comparison { holds: a == b, exact: true },
            Kind::Modular(a, b) => Comparison { holds: a == b, exact: false },
        })
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<Comparison> {
        Ok(match self.same_kind(other)? {
            Kind::Exact(a, b) => Comparison { holds: a.is_subspace_of(b), exact: true },
            Kind::Modular(a, b) => Comparison { holds: a.is_subspace_of(b), exact: false },
        })
    }

    /// Flat exact basis, when certified.
    pub fn exact_flat(&self) -> Option<SubspaceBasis<Rationals>> {
        self.exact.as_ref().map(|e| e.flat(&self.grading))
    }
}

enum Kind<'a> {
    Exact(&'a GradedSubspace<Rationals>, &'a GradedSubspace<Rationals>),
    Modular(&'a GradedSubspace<PrimeField>, &'a GradedSubspace<PrimeField>),
}

/// Common kernel of the `gens` on `V^{⊗d}`, optionally restricted to the
/// vectors fixed by `fixed_by`. Kernel vectors must be homogeneous for the
/// torus, which holds for invariants when the torus lies in the Lie algebra.
pub fn invariant_vectors(n: usize, d: usize, torus: &Torus, gens: &[TensorOperator], fixed_by: Option<&QMatrix>, cfg: &EngineConfig) -> Result<ComputedSpace> {
    let grading = Arc::new(Grading::vectors(torus, n, d));
    let task = KernelTask { grading: &grading, gens: gens.iter().map(|g| g.matrix.clone()).collect(), fixed_by: fixed_by.cloned() };
    let certify = cfg.certify(grading.ambient(), grading.ambient());
    run_task(&task, cfg, &grading, certify)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{build_space, Family};
    use crate::tensor::{brauer_generators, derivation_action};

    fn phis(s: &crate::forms::FormedSpace, d: usize) -> Vec<TensorOperator> {
        s.lie_basis().elements().iter().map(|x| derivation_action(s.dim(), d, x, "x").unwrap()).collect()
    }

    #[test]
    fn certified_brauer_duality_sp4() {
        let s = build_space(Family::Sp, 2).unwrap();
        let ctx = OperatorContext::new(4, 2, Torus::for_matrices(&s, &[]), EngineConfig::default());
        let b2 = ctx.span_closure(&brauer_generators(&s, 2).unwrap()).unwrap();
        let comm = ctx.commutant(&phis(&s, 2)).unwrap();
        assert_eq!(b2.dim(), 3);
        assert!(b2.space.provenance.rational_certified);
        assert_eq!(b2.space.provenance.method, "lift");
        assert_eq!(comm.space.equals(&b2.space).unwrap(), Comparison { holds: true, exact: true });
        let bi = ctx.commutant_of_algebra(&comm).unwrap();
        let phi_alg = ctx.span_closure(&phis(&s, 2)).unwrap();
        assert!(bi.space.equals(&phi_alg.space).unwrap().holds);
        let cap = ctx.intersection(&b2, &phi_alg).unwrap();
        assert!(cap.dim() >= 1);
    }

    #[test]
    fn prime_backend_skips_certification() {
        let s = build_space(Family::SoOdd, 1).unwrap();
        let cfg = EngineConfig { backend: Backend::Prime(Some(1_000_000_007)), ..Default::default() };
        let ctx = OperatorContext::new(3, 2, Torus::for_matrices(&s, &[]), cfg);
        let b2 = ctx.span_closure(&brauer_generators(&s, 2).unwrap()).unwrap();
        assert_eq!(b2.dim(), 3);
        assert!(!b2.space.provenance.rational_certified);
        assert_eq!(b2.space.provenance.primes, vec![1_000_000_007]);
    }

    #[test]
    fn so_vs_o_invariants() {
        let s = build_space(Family::SoEven, 2).unwrap();
        let torus = Torus::for_matrices(&s, &[]);
        let cfg = EngineConfig::default();
        let refl = crate::tensor::tensor_power_op(4, 4, &crate::tensor::reflection(&s).unwrap(), "r").unwrap();
        let so = invariant_vectors(4, 4, &torus, &phis(&s, 4), None, &cfg).unwrap();
        let o = invariant_vectors(4, 4, &torus, &phis(&s, 4), Some(&refl.matrix), &cfg).unwrap();
        assert_eq!((so.dim, o.dim), (4, 3));
    }
}
