//! The registered scenarios.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dualitylab::engine::{invariant_vectors, trace_monomial, trace_pairing_j, Backend, Comparison, OperatorAlgebra, OperatorContext, Torus};
use dualitylab::forms::{build_space, Family, FormedSpace, InvariantForm, LieBasis};
use dualitylab::linalg::{express_in_span, q, rank, QMatrix, Rationals, SparseVec, SubspaceBasis, Q};
use dualitylab::nilpotent::{
    build_nilpotent, centralizer_lie, check_even_good, check_multiplicity_condition, chi, grading_from_h, multiplicity_violations, sl2_complete,
    NilpotentDatum,
};
use dualitylab::tensor::{
    brauer_generators, casimir_matrix, casimir_op, casimir_pair_op, contraction_op, derivation_action, nilpotent_positions, power_tensor_op, reflection,
    swap_op, symmetric_generators, tensor_power_op, TensorOperator,
};

use crate::config::{ConfigError, Resolved, Scenario, ScenarioConfig};
use crate::report::ExperimentReport;

/// Why a scenario could not produce a report.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("engine error: {0}")]
    Engine(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Engine(_) => 1,
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.0)
    }
}

impl From<dualitylab::Error> for RunError {
    fn from(e: dualitylab::Error) -> Self {
        use dualitylab::Error as E;
        match e {
            E::Internal(_) | E::Linalg(_) | E::NoSl2 | E::Grading(_) => RunError::Engine(e.to_string()),
            other => RunError::Config(other.to_string()),
        }
    }
}

type R<T> = Result<T, RunError>;

/// Runs one configuration and returns its report.
pub fn run_scenario(config: &ScenarioConfig) -> R<ExperimentReport> {
    let res = config.resolve()?;
    let mut rep = ExperimentReport::new(config.clone(), res.scenario.name(), res.space.algebra_label());
    if let Some(e) = res.table.lookup(res.space.family(), &res.partition) {
        rep.normality_entry = Some(e.describe());
    }
    let start = Instant::now();
    match res.scenario {
        Scenario::BrauerDuality => brauer_duality(&res, &mut rep)?,
        Scenario::VustA => vust_a(&res, &mut rep)?,
        Scenario::VustBcd => vust_bcd(&res, &mut rep, false)?,
        Scenario::ConditionExplorer => vust_bcd(&res, &mut rep, true)?,
        Scenario::DoubleCentralizer => double_centralizer(&res, &mut rep)?,
        Scenario::IntersectionRemark => intersection_remark(&res, &mut rep)?,
        Scenario::CasimirIdentity => casimir_identity(&res, &mut rep)?,
        Scenario::SoVsO => so_vs_o(&res, &mut rep)?,
        Scenario::GradingAudit => grading_audit(&res, &mut rep)?,
        Scenario::TraceIdentities => trace_identities(&res, &mut rep)?,
    }
    rep.phase("total", start.elapsed().as_millis());
    Ok(rep)
}

fn timed<T>(rep: &mut ExperimentReport, name: &str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    rep.phase(name, t.elapsed().as_millis());
    out
}

fn require_formed(res: &Resolved) -> R<()> {
    if res.space.family().is_formed() {
        Ok(())
    } else {
        Err(RunError::Config(format!("scenario {} needs an orthogonal or symplectic family", res.scenario)))
    }
}

fn phi_ops(n: usize, d: usize, mats: &[QMatrix], prefix: &str) -> dualitylab::Result<Vec<TensorOperator>> {
    let width = mats.len().to_string().len();
    mats.iter().enumerate().map(|(k, x)| derivation_action(n, d, x, &format!("{prefix}[{k:0width$}]"))).collect()
}

/// A basis of the span of `mats` made of torus-homogeneous matrices.
fn homogeneous_basis(torus: &Torus, n: usize, mats: &[QMatrix]) -> Vec<QMatrix> {
    let comps: Vec<SparseVec<Q>> = mats.iter().flat_map(|m| torus.components(m)).map(|m| m.flatten()).collect();
    let span = SubspaceBasis::span(&Rationals, n * n, comps.iter());
    span.vectors().iter().map(|v| QMatrix::unflatten(&Rationals, n, n, v)).collect()
}

fn gl_centralizer(e: &QMatrix) -> R<Vec<QMatrix>> {
    let gl = build_space(Family::Gl, e.rows())?;
    Ok(centralizer_lie(&gl, &gl.lie_basis(), e)?)
}

fn verdict(c: Comparison) -> String {
    format!("{}{}", if c.holds { "yes" } else { "no" }, if c.exact { " (exact over Q)" } else { " (modulo p)" })
}

/// Equality verdicts must be exact unless a prime backend was requested.
fn certified(res: &Resolved, c: Comparison) -> bool {
    c.holds && (c.exact || res.engine.backend != Backend::Rational)
}

fn record(rep: &mut ExperimentReport, name: &str, a: &OperatorAlgebra) {
    rep.dim(name, a.dim());
    rep.provenance(name, &a.space.provenance);
}

/// Nilpotent, its torus and an operator context on `V^{⊗d}`.
struct Setup {
    datum: NilpotentDatum,
    torus: Torus,
    ctx: OperatorContext,
}

fn setup(res: &Resolved, rep: &mut ExperimentReport) -> R<Setup> {
    let datum = timed(rep, "nilpotent", || build_nilpotent(&res.space, &res.partition))?;
    let torus = Torus::for_matrices(&res.space, &[&datum.e]);
    let ctx = OperatorContext::new(res.space.dim(), res.d, torus.clone(), res.engine.clone());
    rep.dim("dim g_e", datum.centralizer_dim());
    rep.measure("torus rank", torus.rank());
    rep.measure("operator blocks", format!("{} (largest {})", ctx.grading.block_count(), ctx.grading.largest_block()));
    Ok(Setup { datum, torus, ctx })
}

fn double_factorial_odd(d: usize) -> usize {
    (1..=d).map(|k| 2 * k - 1).product()
}

fn factorial(d: usize) -> usize {
    (1..=d).product()
}

fn brauer_duality(res: &Resolved, rep: &mut ExperimentReport) -> R<()> {
    let cit = Scenario::BrauerDuality.citation();
    let s = &res.space;
    let (n, d, fam) = (s.dim(), res.d, s.family());
    let ctx = OperatorContext::new(n, d, Torus::for_matrices(s, &[]), res.engine.clone());
    let (gens, label) = if fam.is_formed() { (brauer_generators(s, d)?, "B_d") } else { (symmetric_generators(s, d)?, "S_d") };
    let b = timed(rep, "closure", || ctx.span_closure(&gens))?;
    let phis = phi_ops(n, d, s.lie_basis().elements(), "g")?;
    let c = timed(rep, "commutant", || ctx.commutant(&phis))?;
    record(rep, label, &b);
    record(rep, "End_g", &c);
    let cont = b.space.is_subspace_of(&c.space)?;
    rep.check(format!("{label} ⊆ End_g"), "yes", verdict(cont), cont.holds, cit);
    // SO(V) has extra invariants once 2d reaches dim V in even dimension
    let equality_expected = !(fam == Family::SoEven && 2 * d >= n);
    if equality_expected {
        rep.check(format!("dim {label} = dim End_g"), c.dim(), b.dim(), b.dim() == c.dim(), cit);
        let eq = c.space.equals(&b.space)?;
        rep.check(format!("{label} = End_g"), "yes (exact over Q)", verdict(eq), certified(res, eq), cit);
    } else {
        rep.observe(format!("dim {label} vs dim End_g"), format!("{} vs {}", b.dim(), c.dim()), cit);
        rep.notes.push("so-even with 2d ≥ n: End_so may exceed B_d; only containment is asserted".into());
    }
    let faithful = match fam {
        Family::SoOdd | Family::SoEven | Family::Gl => n >= d,
        Family::Sp => s.rank() >= d,
    };
    if faithful {
        let expected = if fam.is_formed() { double_factorial_odd(d) } else { factorial(d) };
        rep.check(format!("dim {label} (faithful range)"), expected, b.dim(), b.dim() == expected, cit);
    }
    Ok(())
}

fn vust_a(res: &Resolved, rep: &mut ExperimentReport) -> R<()> {
    let cit = Scenario::VustA.citation();
    if res.space.family() != Family::Gl {
        return Err(RunError::Config("vust-a needs family gl".into()));
    }
    let st = setup(res, rep)?;
    let (n, d) = (res.space.dim(), res.d);
    let mut gens = symmetric_generators(&res.space, d)?;
    gens.extend(nilpotent_positions(n, d, &st.datum.e)?);
    let a = timed(rep, "closure S_d[e]", || st.ctx.span_closure(&gens))?;
    let gle = homogeneous_basis(&st.torus, n, &st.datum.centralizer);
    let c = timed(rep, "commutant gl_e", || st.ctx.commutant(&phi_ops(n, d, &gle, "gl_e")?))?;
    record(rep, "S_d[e]", &a);
    record(rep, "End_gl_e", &c);
    let cont = a.space.is_subspace_of(&c.space)?;
    rep.check("S_d[e] ⊆ End_gl_e", "yes", verdict(cont), cont.holds, cit);
    rep.check("dim S_d[e] = dim End_gl_e", c.dim(), a.dim(), a.dim() == c.dim(), cit);
    let eq = a.space.equals(&c.space)?;
    rep.check("S_d[e] = End_gl_e", "yes (exact over Q)", verdict(eq), certified(res, eq), cit);
    Ok(())
}

/// Hypotheses of the main theorem: normal orbit closure and the multiplicity condition.
fn hypotheses(res: &Resolved, rep: &mut ExperimentReport, required: bool) -> R<bool> {
    let fam = res.space.family();
    let cond = check_multiplicity_condition(&res.partition, fam, res.d);
    let viol = multiplicity_violations(&res.partition, fam, res.d);
    rep.measure("multiplicity condition", if cond { "holds".to_string() } else { format!("fails at part sizes {viol:?}") });
    let normal = match res.table.lookup(fam, &res.partition) {
        Some(e) => e.normal,
        None if required => {
            return Err(RunError::Config(format!("no normality entry for {} {} in the table; add one with a citation", fam.name(), res.partition)));
        }
        None => {
            rep.notes.push(format!("no normality entry for {}", res.partition));
            false
        }
    };
    Ok(cond && normal)
}

fn bde_generators(res: &Resolved, e: &QMatrix) -> R<Vec<TensorOperator>> {
    let mut gens = brauer_generators(&res.space, res.d)?;
    gens.extend(nilpotent_positions(res.space.dim(), res.d, e)?);
    Ok(gens)
}

fn vust_bcd(res: &Resolved, rep: &mut ExperimentReport, explorer: bool) -> R<()> {
    require_formed(res)?;
    let cit = if explorer { Scenario::ConditionExplorer.citation() } else { Scenario::VustBcd.citation() };
    let hyp = hypotheses(res, rep, !explorer)?;
    let st = setup(res, rep)?;
    let (n, d) = (res.space.dim(), res.d);
    let gens = bde_generators(res, &st.datum.e)?;
    let a = timed(rep, "closure B_d[e]", || st.ctx.span_closure(&gens))?;
    let ge = homogeneous_basis(&st.torus, n, &st.datum.centralizer);
    let c = timed(rep, "commutant g_e", || st.ctx.commutant(&phi_ops(n, d, &ge, "g_e")?))?;
    record(rep, "B_d[e]", &a);
    record(rep, "End_g_e", &c);
    let cont = a.space.is_subspace_of(&c.space)?;
    rep.check("B_d[e] ⊆ End_g_e", "yes", verdict(cont), cont.holds, "containment B_d[e] ⊆ End_g_e, checked directly");
    let eq = a.space.equals(&c.space)?;
    if hyp && !explorer {
        rep.check("dim B_d[e] = dim End_g_e", c.dim(), a.dim(), a.dim() == c.dim(), cit);
        rep.check("B_d[e] = End_g_e", "yes (exact over Q)", verdict(eq), certified(res, eq), cit);
    } else {
        rep.observe("dim B_d[e] vs dim End_g_e", format!("{} vs {}", a.dim(), c.dim()), cit);
        rep.observe("B_d[e] = End_g_e", verdict(eq), cit);
        if !explorer {
            rep.notes.push("hypotheses fail; equality is reported without a verdict".into());
        }
    }
    Ok(())
}

/// `φ(U(gl_e)) ∩ φ(U(g))`.
fn intersection(res: &Resolved, rep: &mut ExperimentReport, st: &Setup) -> R<OperatorAlgebra> {
    let (n, d) = (res.space.dim(), res.d);
    let gle = homogeneous_basis(&st.torus, n, &gl_centralizer(&st.datum.e)?);
    rep.dim("dim gl_e", gle.len());
    let gl_e = timed(rep, "closure phi(U(gl_e))", || st.ctx.span_closure(&phi_ops(n, d, &gle, "gl_e")?))?;
    let g = timed(rep, "closure phi(U(g))", || st.ctx.span_closure(&phi_ops(n, d, res.space.lie_basis().elements(), "g")?))?;
    let cap = timed(rep, "intersection", || st.ctx.intersection(&gl_e, &g))?;
    record(rep, "phi(U(gl_e))", &gl_e);
    record(rep, "phi(U(g))", &g);
    record(rep, "phi(U(gl_e)) ∩ phi(U(g))", &cap);
    Ok(cap)
}

fn double_centralizer(res: &Resolved, rep: &mut ExperimentReport) -> R<()> {
    require_formed(res)?;
    let cit = Scenario::DoubleCentralizer.citation();
    let hyp = hypotheses(res, rep, true)?;
    let st = setup(res, rep)?;
    let cap = intersection(res, rep, &st)?;
    let gens = bde_generators(res, &st.datum.e)?;
    let bde = timed(rep, "closure B_d[e]", || st.ctx.span_closure(&gens))?;
    record(rep, "B_d[e]", &bde);
    let c1 = timed(rep, "commutant of intersection", || st.ctx.commutant_of_algebra(&cap))?;
    let c2 = timed(rep, "commutant of B_d[e]", || st.ctx.commutant(&gens))?;
    record(rep, "End of intersection", &c1);
    record(rep, "End_B_d[e]", &c2);
    let eq1 = c1.space.equals(&bde.space)?;
    let eq2 = c2.space.equals(&cap.space)?;
    if hyp {
        rep.check("End(phi(U(gl_e)) ∩ phi(U(g))) = B_d[e]", "yes (exact over Q)", verdict(eq1), certified(res, eq1), cit);
        rep.check("phi(U(gl_e)) ∩ phi(U(g)) = End_B_d[e]", "yes (exact over Q)", verdict(eq2), certified(res, eq2), cit);
    } else {
        rep.observe("End(phi(U(gl_e)) ∩ phi(U(g))) = B_d[e]", verdict(eq1), cit);
        rep.observe("phi(U(gl_e)) ∩ phi(U(g)) = End_B_d[e]", verdict(eq2), cit);
    }
    Ok(())
}

fn intersection_remark(res: &Resolved, rep: &mut ExperimentReport) -> R<()> {
    require_formed(res)?;
    let cit = Scenario::IntersectionRemark.citation();
    let hyp = hypotheses(res, rep, false)?;
    let st = setup(res, rep)?;
    let (n, d) = (res.space.dim(), res.d);
    let cap = intersection(res, rep, &st)?;
    let ge = homogeneous_basis(&st.torus, n, &st.datum.centralizer);
    let e_alg = timed(rep, "closure phi(U(g_e))", || st.ctx.span_closure(&phi_ops(n, d, &ge, "g_e")?))?;
    record(rep, "phi(U(g_e))", &e_alg);
    let cont = e_alg.space.is_subspace_of(&cap.space)?;
    rep.check("phi(U(g_e)) ⊆ intersection", "yes", verdict(cont), cont.holds, cit);
    let eq = cap.space.equals(&e_alg.space)?;
    if d == 2 && res.space.rank() <= 3 && hyp {
        rep.check("phi(U(gl_e)) ∩ phi(U(g)) = phi(U(g_e))", "yes (exact over Q)", verdict(eq), certified(res, eq), cit);
    } else {
        rep.observe("phi(U(gl_e)) ∩ phi(U(g)) = phi(U(g_e))", verdict(eq), cit);
        rep.notes.push("verdict only for d = 2, rank ≤ 3, a normal orbit closure and the multiplicity condition".into());
    }
    Ok(())
}

/// Killing form = `c·Tr(XY)` with `c = n - 2` on `so_n` and `n + 2` on `sp_n`.
fn killing_offset(fam: Family) -> i64 {
    if fam == Family::Sp {
        2
    } else {
        -2
    }
}

fn casimir_identity(res: &Resolved, rep: &mut ExperimentReport) -> R<()> {
    require_formed(res)?;
    let cit = Scenario::CasimirIdentity.citation();
    let s = &res.space;
    let (n, d, fam) = (s.dim(), res.d, s.family());
    if d < 2 {
        return Err(RunError::Config("casimir-identity needs d ≥ 2".into()));
    }
    let basis = s.lie_basis();
    rep.measure("normalization", res.form.name());
    let cas = match casimir_matrix(s, &basis, res.form) {
        Ok(m) => m,
        Err(e) => {
            rep.observe("invariant form nondegenerate", format!("no: {e}"), cit);
            rep.notes.push(format!("{} form is degenerate on {}; no dual basis exists", res.form.name(), s.algebra_label()));
            return Ok(());
        }
    };
    let size = n.pow(d as u32);
    let mut measured: Option<Q> = None;
    for i in 1..=d {
        for j in (i + 1)..=d {
            let c = timed(rep, &format!("casimir pair {i}{j}"), || casimir_pair_op(s, &basis, d, i, j, res.form))?;
            let sw = swap_op(s, d, i, j)?.matrix.flatten();
            let g = contraction_op(s, d, i, j)?.matrix.flatten();
            let coef = express_in_span(&Rationals, size * size, &[sw, g], &c.matrix.flatten());
            let pair = format!("{i}{j}");
            rep.check(format!("C_{pair} ∈ span{{s_{pair}, gamma_{pair}}}"), "yes", if coef.is_some() { "yes" } else { "no" }, coef.is_some(), cit);
            let Some(coef) = coef else { continue };
            let shown = format!("({}, {})", coef[0], coef[1]);
            rep.measure(format!("coefficients on (s_{pair}, gamma_{pair})"), &shown);
            match res.form {
                InvariantForm::Trace => {
                    let ok = coef[0] == q(1) && coef[1] == q(-1);
                    rep.check(format!("C_{pair} = s_{pair} - gamma_{pair}"), "(1, -1)", shown, ok, cit);
                }
                InvariantForm::Killing => {
                    let ok = !is_zero(&coef[0]) && coef[1] == -coef[0].clone();
                    rep.check(format!("C_{pair} ∝ s_{pair} - gamma_{pair}"), "(a, -a)", shown, ok, cit);
                    if ok {
                        measured = Some(q(1) / coef[0].clone());
                    }
                }
            }
        }
    }
    if res.form == InvariantForm::Killing {
        if let Some(lambda) = measured {
            // ratio of the Killing Gram to the trace-form Gram
            let kg = basis.form_gram(s, InvariantForm::Killing)?;
            let tg = basis.form_gram(s, InvariantForm::Trace)?;
            let ratio = gram_ratio(&kg, &tg);
            rep.measure("Killing / trace-form Gram ratio", ratio.as_ref().map_or("not proportional".into(), |r| r.to_string()));
            rep.check("measured scalar = Gram ratio", ratio.as_ref().map_or("-".into(), |r| r.to_string()), lambda.to_string(), ratio.as_ref() == Some(&lambda), cit);
            let family_constant = lambda.clone() / q(2) - q(n as i64);
            rep.measure("family scalar", &lambda);
            rep.measure("family constant (scalar/2 - n)", &family_constant);
            let expected = q(killing_offset(fam));
            rep.check("family constant", &expected, &family_constant, family_constant == expected, cit);
        }
    }
    // centrality of the one-slot Casimir
    let k1 = casimir_op(s, &basis, d, 1, res.form)?;
    let phis = phi_ops(n, d, basis.elements(), "g")?;
    let central = phis.iter().all(|p| p.matrix.mul(&k1.matrix) == k1.matrix.mul(&p.matrix));
    rep.check("Casimir commutes with phi(g)", "yes", if central { "yes" } else { "no" }, central, cit);
    if let Some(scalar) = scalar_of(&cas) {
        rep.measure("Casimir scalar on V", &scalar);
    }
    // independence of the basis
    let m = basis.dim();
    let rows: Vec<Vec<Q>> = (0..m).map(|k| (0..m).map(|t| if t == k { q(1) } else if t == (k + 1) % m && m > 1 { q(2) } else { q(0) }).collect()).collect();
    let other = if m > 2 { basis.recombined(&rows) } else { basis.clone() };
    let again = casimir_pair_op(s, &other, d, 1, 2, res.form)?;
    let first = casimir_pair_op(s, &basis, d, 1, 2, res.form)?;
    let same = again.matrix == first.matrix;
    rep.check("C_12 independent of the basis", "yes", if same { "yes" } else { "no" }, same, cit);
    Ok(())
}

fn is_zero(x: &Q) -> bool {
    *x == q(0)
}

fn gram_ratio(a: &QMatrix, b: &QMatrix) -> Option<Q> {
    let mut ratio: Option<Q> = None;
    for (r, c, v) in b.iter() {
        let x = a.get(r, c) / v.clone();
        match &ratio {
            None => ratio = Some(x),
            Some(y) if *y != x => return None,
            _ => {}
        }
    }
    let ratio = ratio?;
    (a.sub(&b.scale(&ratio)).is_zero()).then_some(ratio)
}

fn scalar_of(m: &QMatrix) -> Option<Q> {
    let x = m.get(0, 0);
    (m.sub(&QMatrix::identity(&Rationals, m.rows()).scale(&x)).is_zero()).then_some(x)
}

fn so_vs_o(res: &Resolved, rep: &mut ExperimentReport) -> R<()> {
    let cit = Scenario::SoVsO.citation();
    let s = &res.space;
    if !s.family().is_orthogonal() {
        return Err(RunError::Config("so-vs-o needs an orthogonal family".into()));
    }
    let (n, d) = (s.dim(), res.d);
    let torus = Torus::for_matrices(s, &[]);
    let phis = phi_ops(n, d, s.lie_basis().elements(), "g")?;
    let refl = tensor_power_op(n, d, &reflection(s)?, "r")?;
    let so = timed(rep, "so-invariants", || invariant_vectors(n, d, &torus, &phis, None, &res.engine))?;
    let o = timed(rep, "O-invariants", || invariant_vectors(n, d, &torus, &phis, Some(&refl.matrix), &res.engine))?;
    rep.dim("so-invariants", so.dim);
    rep.dim("O-invariants", o.dim);
    rep.provenance("so-invariants", &so.provenance);
    rep.provenance("O-invariants", &o.provenance);
    let cont = o.is_subspace_of(&so)?;
    rep.check("O-invariants ⊆ so-invariants", "yes", verdict(cont), cont.holds, cit);
    // a determinant-type invariant needs d ≥ n with d ≡ n mod 2
    let excess = d >= n && (d - n) % 2 == 0;
    if excess {
        rep.check("so-invariants exceed O-invariants", "strict excess", format!("{} vs {}", so.dim, o.dim), so.dim > o.dim, cit);
    } else {
        rep.check("so-invariants = O-invariants", o.dim, so.dim, so.dim == o.dim, cit);
    }
    if d == 2 && !excess {
        rep.check("invariants in V⊗V", 1, so.dim, so.dim == 1, cit);
    }
    if d == 1 {
        rep.check("invariants in V", 0, so.dim, so.dim == 0, cit);
    }
    Ok(())
}

fn all_parts_same_parity(parts: &[usize]) -> bool {
    parts.iter().all(|p| p % 2 == parts[0] % 2)
}

fn grading_audit(res: &Resolved, rep: &mut ExperimentReport) -> R<()> {
    require_formed(res)?;
    let cit = Scenario::GradingAudit.citation();
    let s = &res.space;
    let basis = s.lie_basis();
    let datum = build_nilpotent(s, &res.partition)?;
    let e = &datum.e;
    let (h_diag, f) = if e.is_zero() {
        rep.notes.push("e = 0: the zero grading is used".into());
        (vec![q(0); s.rank()], None)
    } else {
        let t = timed(rep, "sl2", || sl2_complete(s, &basis, e))?;
        let ok = t.h.commutator(e) == e.scale(&q(2)) && t.h.commutator(&t.f) == t.f.scale(&q(-2)) && e.commutator(&t.f) == t.h;
        rep.check("sl2 relations", "yes", if ok { "yes" } else { "no" }, ok, cit);
        let inside = basis.contains(&t.h) && basis.contains(&t.f);
        rep.check("h, f ∈ g", "yes", if inside { "yes" } else { "no" }, inside, cit);
        (t.h_diag.clone(), Some(t.f))
    };
    rep.measure("h coefficients", h_diag.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    let gr = match grading_from_h(s, &basis, &h_diag) {
        Ok(g) => g,
        Err(err) => {
            rep.check("integer grading", "yes", format!("no: {err}"), false, cit);
            return Ok(());
        }
    };
    rep.measure("col", gr.col.iter().map(|(i, c)| format!("{i}:{c}")).collect::<Vec<_>>().join(" "));
    let good = check_even_good(&basis, &gr, e)?;
    let expect_even = e.is_zero() || all_parts_same_parity(res.partition.parts());
    rep.check("grading is even", expect_even, good.even, good.even == expect_even, cit);
    rep.check("grading is good", "yes", if good.good { "yes".into() } else { good.failures.join("; ") }, good.good, cit);
    let prop1 = s.indices().iter().all(|i| gr.col[i] + gr.col[&-i] == 0);
    rep.check("col(i) + col(-i) = 0", "yes", if prop1 { "yes" } else { "no" }, prop1, cit);
    let h = h_matrix(s, &h_diag);
    let mut p_ok = true;
    let mut m_ok = true;
    let mut deg_ok = true;
    for (k, &(i, j)) in basis.labels().iter().enumerate() {
        let in_p = gr.p_basis.contains(&k);
        let in_m = gr.m_basis.contains(&k);
        p_ok &= in_p == (gr.col[&j] <= gr.col[&i]);
        m_ok &= in_m == (gr.col[&j] > gr.col[&i]);
        deg_ok &= h.commutator(&basis.elements()[k]) == basis.elements()[k].scale(&q(gr.col[&i] - gr.col[&j]));
    }
    rep.check("F_ij ∈ p iff col(j) ≤ col(i)", "yes", if p_ok { "yes" } else { "no" }, p_ok, cit);
    rep.check("F_ij ∈ m iff col(j) > col(i)", "yes", if m_ok { "yes" } else { "no" }, m_ok, cit);
    rep.check("gr(F_ij) = col(i) - col(j)", "yes", if deg_ok { "yes" } else { "no" }, deg_ok, cit);
    rep.dim("dim p", gr.p_basis.len());
    rep.dim("dim m", gr.m_basis.len());
    let in_p = datum.centralizer.iter().all(|x| {
        basis.coords(x).map_or(false, |c| c.iter().enumerate().all(|(k, v)| is_zero(&v) || gr.p_basis.contains(&k)))
    });
    if good.good {
        rep.check("g_e ⊆ p", "yes", if in_p { "yes" } else { "no" }, in_p, cit);
    }
    let mut chi_ok = true;
    for (k, g) in basis.elements().iter().enumerate() {
        if gr.degrees[k] != -2 && !is_zero(&chi(&basis, e, g)?) {
            chi_ok = false;
        }
    }
    rep.check("chi(F) = 0 when gr(F) ≠ -2", "yes", if chi_ok { "yes" } else { "no" }, chi_ok, cit);
    let ce = chi(&basis, e, e)?;
    rep.check("chi(e) = 0", "0", &ce, is_zero(&ce), cit);
    if let Some(f) = f {
        let cf = chi(&basis, e, &f)?;
        rep.check("chi(f) ≠ 0", "nonzero", &cf, !is_zero(&cf), cit);
    }
    Ok(())
}

/// `h = Σ a_k H_k` over the Cartan basis.
fn h_matrix(s: &FormedSpace, h_diag: &[Q]) -> QMatrix {
    let cartan = dualitylab::nilpotent::cartan_basis(s);
    let mut h = QMatrix::zeros(&Rationals, s.dim(), s.dim());
    for (a, hk) in h_diag.iter().zip(&cartan) {
        h = h.add_scaled(hk, a);
    }
    h
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| q(rng.gen_range(-3..=3))).collect()
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    QMatrix::from_triplets(&Rationals, n, n, (0..n * n).map(|k| (k / n, k % n, q(rng.gen_range(-3..=3)))))
}

fn random_lie(rng: &mut ChaCha8Rng, basis: &LieBasis) -> QMatrix {
    let c = random_vec(rng, basis.dim());
    basis.combine(&c)
}

fn random_combination(rng: &mut ChaCha8Rng, elems: &[QMatrix]) -> QMatrix {
    let mut acc = QMatrix::zeros(&Rationals, elems[0].rows(), elems[0].cols());
    for m in elems {
        let c = q(rng.gen_range(-3..=3));
        acc = acc.add_scaled(m, &c);
    }
    acc
}

fn kron_all(ms: &[QMatrix]) -> QMatrix {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.kron(m))
}

/// Number of random instances per identity.
pub const TRACE_INSTANCES: usize = 200;

fn trace_identities(res: &Resolved, rep: &mut ExperimentReport) -> R<()> {
    require_formed(res)?;
    let cit = Scenario::TraceIdentities.citation();
    let s = &res.space;
    let (n, d) = (s.dim(), res.d);
    let basis = s.lie_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(res.seed);

    // rank-one trace products
    let t = Instant::now();
    let mut ok = 0;
    for _ in 0..TRACE_INSTANCES {
        let k = rng.gen_range(1..=5);
        let pairs: Vec<(Vec<Q>, Vec<Q>)> = (0..k).map(|_| (random_vec(&mut rng, n), random_vec(&mut rng, n))).collect();
        let formula = s.trace_rank_one_product(&pairs)?;
        let mut prod = QMatrix::identity(&Rationals, n);
        for (u, w) in &pairs {
            prod = prod.mul(&s.theta_op(u, w)?);
        }
        ok += usize::from(prod.trace() == formula);
    }
    rep.phase("rank-one products", t.elapsed().as_millis());
    rep.check("rank-one trace product formula", TRACE_INSTANCES, ok, ok == TRACE_INSTANCES, cit);

    // B_d basis over Q
    let ctx = OperatorContext::new(n, d, Torus::for_matrices(s, &[]), res.engine.clone());
    let bd = timed(rep, "closure B_d", || ctx.span_closure(&brauer_generators(s, d)?))?;
    record(rep, "B_d", &bd);
    let elems = bd.exact_elements().ok_or_else(|| RunError::Config("trace-identities needs the rational backend".into()))?;

    // X(l) transport
    let t = Instant::now();
    let mut ok = 0;
    for _ in 0..TRACE_INSTANCES {
        let b = random_combination(&mut rng, &elems);
        let x = random_lie(&mut rng, &basis);
        let l: Vec<u32> = (0..d).map(|_| rng.gen_range(0..=2)).collect();
        let uw: Vec<(Vec<Q>, Vec<Q>)> = (0..d).map(|_| (random_vec(&mut rng, n), random_vec(&mut rng, n))).collect();
        let y = kron_all(&uw.iter().map(|(u, w)| s.theta_op(u, w)).collect::<Result<Vec<_>, _>>()?);
        let y2 = kron_all(
            &uw.iter().zip(&l).map(|((u, w), &lk)| s.theta_op(u, &x.pow(lk).apply(w))).collect::<Result<Vec<_>, _>>()?,
        );
        let xl = power_tensor_op(n, &x, &l, "X")?.matrix;
        let lhs = xl.mul(&b).mul(&y).trace();
        let sign = if l.iter().sum::<u32>() % 2 == 0 { q(1) } else { q(-1) };
        let rhs = sign * b.mul(&y2).trace();
        ok += usize::from(lhs == rhs);
    }
    rep.phase("X(l) transport", t.elapsed().as_millis());
    rep.check("X(l) transport identity", TRACE_INSTANCES, ok, ok == TRACE_INSTANCES, cit);

    // J evaluations
    let t = Instant::now();
    let mut ok = 0;
    for _ in 0..TRACE_INSTANCES {
        let b = random_combination(&mut rng, &elems);
        let xs: Vec<QMatrix> = (0..d).map(|_| random_matrix(&mut rng, n)).collect();
        let fast = trace_pairing_j(&b, n, &xs)?;
        let slow = b.mul(&kron_all(&xs)).trace();
        let anti = xs.len() < 2 || trace_monomial(s, &[(1, false), (2, false)], &xs)? == trace_monomial(s, &[(2, true), (1, true)], &xs)?;
        ok += usize::from(fast == slow && anti);
    }
    rep.phase("J evaluations", t.elapsed().as_millis());
    rep.check("J pairing evaluations", TRACE_INSTANCES, ok, ok == TRACE_INSTANCES, cit);

    // injectivity of J on B_d
    let t = Instant::now();
    let samples = 4 * elems.len() + 8;
    let tensors: Vec<Vec<QMatrix>> = (0..samples).map(|_| (0..d).map(|_| random_matrix(&mut rng, n)).collect()).collect();
    let mut entries = Vec::new();
    for (i, b) in elems.iter().enumerate() {
        for (j, xs) in tensors.iter().enumerate() {
            entries.push((i, j, trace_pairing_j(b, n, xs)?));
        }
    }
    let jrank = rank(&QMatrix::from_triplets(&Rationals, elems.len(), samples, entries));
    rep.phase("J injectivity", t.elapsed().as_millis());
    rep.dim("rank J on B_d", jrank);
    rep.check("J injective on B_d", elems.len(), jrank, jrank == elems.len(), cit);
    let equality_expected = !(s.family() == Family::SoEven && 2 * d >= n);
    if equality_expected {
        let phis = phi_ops(n, d, basis.elements(), "g")?;
        let c = timed(rep, "commutant phi(g)", || ctx.commutant(&phis))?;
        rep.check("dim J(B_d) = dim End_g", c.dim(), jrank, c.dim() == jrank, cit);
    }

    // multilinear trace monomials against J(B_2)
    if d == 2 {
        let t = Instant::now();
        let nn = n * n;
        let unit = |a: usize| QMatrix::from_triplets(&Rationals, n, n, [(a / n, a % n, q(1))]);
        let units: Vec<QMatrix> = (0..nn).map(unit).collect();
        let mut mono: Vec<SparseVec<Q>> = vec![Vec::new(); 12];
        let mut jf: Vec<SparseVec<Q>> = vec![Vec::new(); elems.len()];
        for a in 0..nn {
            for b in 0..nn {
                let xs = [units[a].clone(), units[b].clone()];
                let col = a * nn + b;
                let mut k = 0;
                for s1 in [false, true] {
                    for s2 in [false, true] {
                        let vals = [
                            trace_monomial(s, &[(1, s1)], &xs)? * trace_monomial(s, &[(2, s2)], &xs)?,
                            trace_monomial(s, &[(1, s1), (2, s2)], &xs)?,
                            trace_monomial(s, &[(2, s2), (1, s1)], &xs)?,
                        ];
                        for v in vals {
                            if !is_zero(&v) {
                                mono[k].push((col, v));
                            }
                            k += 1;
                        }
                    }
                }
                for (i, bm) in elems.iter().enumerate() {
                    let v = trace_pairing_j(bm, n, &xs)?;
                    if !is_zero(&v) {
                        jf[i].push((col, v));
                    }
                }
            }
        }
        let ms = SubspaceBasis::span(&Rationals, nn * nn, mono.iter());
        let js = SubspaceBasis::span(&Rationals, nn * nn, jf.iter());
        let same = ms.equals(&js).map_err(|e| RunError::Engine(e.to_string()))?;
        rep.phase("trace monomial span", t.elapsed().as_millis());
        rep.dim("trace monomial functionals", ms.dim());
        rep.dim("J(B_2) functionals", js.dim());
        rep.check("trace monomial span = J(B_2) span", "equal", format!("{} vs {}{}", ms.dim(), js.dim(), if same { ", equal" } else { ", different" }), same, cit);
    }
    Ok(())
}
