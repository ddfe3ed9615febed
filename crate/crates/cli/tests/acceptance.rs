//! Acceptance suite: one line per criterion, exit status 1 on any
//! unexpected failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dualitylab_cli::{run_scenario, ExperimentReport, ScenarioConfig};

/// Every comparison is exact over Q; no floating point enters a verdict.
const TOLERANCE: f64 = 0.0;
const LIMIT_SMALL: Duration = Duration::from_secs(30);
const LIMIT_LARGE: Duration = Duration::from_secs(600);
const TRACE_INSTANCES: &str = "200";

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(cfg: ScenarioConfig, touched: &mut Vec<ScenarioConfig>) -> (ExperimentReport, Duration) {
    let t = Instant::now();
    let rep = run_scenario(&cfg).unwrap_or_else(|e| panic!("{} {} failed to run: {e}", cfg.scenario, cfg.family));
    touched.push(cfg);
    (rep, t.elapsed())
}

fn passed(rep: &ExperimentReport, name: &str) -> bool {
    rep.find(name).and_then(|c| c.pass) == Some(true)
}

fn computed<'a>(rep: &'a ExperimentReport, name: &str) -> &'a str {
    rep.find(name).map_or("missing", |c| c.computed.as_str())
}

fn certified(rep: &ExperimentReport) -> bool {
    !rep.provenance.is_empty() && rep.provenance.iter().all(|p| p.rational_certified)
}

fn so(dim: usize) -> ScenarioConfig {
    let mut c = ScenarioConfig::new("brauer-duality", "so", 0);
    c.rank = None;
    c.dim = Some(dim);
    c
}

fn with_scenario(mut c: ScenarioConfig, s: &str) -> ScenarioConfig {
    c.scenario = s.into();
    c
}

fn so_part(scenario: &str, p: &str) -> ScenarioConfig {
    let mut c = ScenarioConfig::new(scenario, "so", 0).with_partition(p);
    c.rank = None;
    c
}

fn c1(t: &mut Vec<ScenarioConfig>) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for cfg in [so(5), ScenarioConfig::new("brauer-duality", "sp", 2)] {
        let (rep, dt) = run(cfg, t);
        let dims = (rep.dimensions["B_d"], rep.dimensions["End_g"]);
        let ok = dims == (3, 3) && passed(&rep, "B_d = End_g") && certified(&rep) && dt < LIMIT_SMALL;
        pass &= ok;
        detail.push(format!("{} dims {:?} certified {} {:?}", rep.algebra, dims, certified(&rep), dt));
    }
    Outcome { pass, detail: detail.join("; ") }
}

fn c2(t: &mut Vec<ScenarioConfig>) -> Outcome {
    let (rep, dt) = run(ScenarioConfig::new("vust-a", "gl", 3).with_partition("2,1"), t);
    let ok = passed(&rep, "S_d[e] = End_gl_e") && passed(&rep, "S_d[e] ⊆ End_gl_e") && certified(&rep) && dt < LIMIT_SMALL;
    Outcome { pass: ok, detail: format!("gl_3 [2,1] dims {} / {} {:?}", rep.dimensions["S_d[e]"], rep.dimensions["End_gl_e"], dt) }
}

/// The so_6 case is a counterexample: r_1 = 3 is odd but at most 2d, and
/// SO_3 has a cubic invariant that O_3 does not.
const C3_DEVIATION: (usize, usize) = (21, 22);

fn c3(t: &mut Vec<ScenarioConfig>) -> (Outcome, bool) {
    let mut pass = true;
    let mut detail = Vec::new();
    let mut deviation_reproduced = true;
    for (cfg, deviating) in [
        (ScenarioConfig::new("vust-bcd", "sp", 3).with_partition("2,1,1,1,1"), false),
        (so_part("vust-bcd", "3,1,1,1"), true),
    ] {
        let mut prescreen = cfg.clone();
        prescreen.field = "prime".into();
        let (pre, _) = run(prescreen, t);
        let (rep, dt) = run(cfg, t);
        let dims = (rep.dimensions["B_d[e]"], rep.dimensions["End_g_e"]);
        let pre_dims = (pre.dimensions["B_d[e]"], pre.dimensions["End_g_e"]);
        let ok = passed(&rep, "B_d[e] = End_g_e") && pre_dims == dims && certified(&rep) && dt < LIMIT_LARGE;
        pass &= ok;
        if !deviating {
            deviation_reproduced &= ok;
        } else {
            deviation_reproduced &= !ok
                && dims == C3_DEVIATION
                && pre_dims == C3_DEVIATION
                && passed(&rep, "B_d[e] ⊆ End_g_e")
                && computed(&rep, "B_d[e] = End_g_e") == "no (exact over Q)"
                && certified(&rep);
        }
        detail.push(format!("{} {} dims B_d[e]/End_g_e {:?} (prime prescreen {:?}) {:?}", rep.algebra, format!("[{}]", rep.config.partition.as_deref().unwrap_or("")), dims, pre_dims, dt));
    }
    (Outcome { pass, detail: detail.join("; ") }, deviation_reproduced)
}

fn c4(touched: &[ScenarioConfig]) -> Outcome {
    // every (family, partition, d) the suite touches, plus condition failures
    let mut keys: BTreeSet<(String, Option<usize>, Option<usize>, String, usize)> = BTreeSet::new();
    for c in touched {
        if c.partition.is_some() && c.family != "gl" {
            keys.insert((c.family.clone(), c.rank, c.dim, c.partition.clone().unwrap(), c.d));
        }
    }
    let extra: [(&str, Option<usize>, &str, usize); 6] = [
        ("so", None, "3,1,1", 1),
        ("so", None, "3,1,1", 2),
        ("sp", Some(2), "2,2", 2),
        ("sp", Some(3), "2,2,1,1", 2),
        ("so", None, "3,1,1,1,1", 2),
        ("so", None, "2,2,1,1", 2),
    ];
    for (f, r, p, d) in extra {
        keys.insert((f.into(), r, None, p.into(), d));
    }
    let mut fails = Vec::new();
    for (family, rank, dim, partition, d) in &keys {
        let mut c = ScenarioConfig::new("condition-explorer", family, 0).with_partition(partition).with_d(*d);
        c.rank = *rank;
        c.dim = *dim;
        let rep = run_scenario(&c).expect("condition explorer runs");
        if !passed(&rep, "B_d[e] ⊆ End_g_e") {
            fails.push(format!("{} [{}] d={}", rep.algebra, partition, d));
        }
    }
    Outcome { pass: fails.is_empty(), detail: format!("{} configurations, failures: {:?}", keys.len(), fails) }
}

fn c5(t: &mut Vec<ScenarioConfig>) -> Outcome {
    let (rep, dt) = run(ScenarioConfig::new("double-centralizer", "sp", 2).with_partition("2,1,1"), t);
    let a = passed(&rep, "End(phi(U(gl_e)) ∩ phi(U(g))) = B_d[e]");
    let b = passed(&rep, "phi(U(gl_e)) ∩ phi(U(g)) = End_B_d[e]");
    Outcome { pass: a && b && certified(&rep), detail: format!("eq1 {a}, eq2 {b}, {:?}", dt) }
}

fn c6(t: &mut Vec<ScenarioConfig>) -> Outcome {
    let cases = [
        ScenarioConfig::new("intersection-remark", "sp", 2).with_partition("2,1,1"),
        ScenarioConfig::new("intersection-remark", "sp", 2).with_partition("4"),
        so_part("intersection-remark", "2,2,1"),
        so_part("intersection-remark", "5"),
        ScenarioConfig::new("intersection-remark", "sp", 3).with_partition("2,1,1,1,1"),
        ScenarioConfig::new("intersection-remark", "sp", 3).with_partition("2,2,2"),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for cfg in cases {
        let (rep, dt) = run(cfg, t);
        let ok = passed(&rep, "phi(U(gl_e)) ∩ phi(U(g)) = phi(U(g_e))") && certified(&rep) && dt < LIMIT_LARGE;
        pass &= ok;
        detail.push(format!("{} [{}] {}", rep.algebra, rep.config.partition.as_deref().unwrap_or(""), if ok { "ok" } else { "FAIL" }));
    }
    Outcome { pass, detail: detail.join(", ") }
}

/// Killing form over the trace form: `n - 2` on `so_n`, `n + 2` on `sp_n`,
/// relative to `Tr(XY)`; the half-trace form doubles the ratio.
fn killing_scalar_oracle(family: &str, n: i64) -> i64 {
    if family == "sp" {
        2 * (n + 2)
    } else {
        2 * (n - 2)
    }
}

fn c7(t: &mut Vec<ScenarioConfig>) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for family in ["so-odd", "so-even", "sp"] {
        let mut constants = BTreeSet::new();
        for r in 1..=3usize {
            let n = if family == "so-odd" { 2 * r + 1 } else { 2 * r } as i64;
            let (tr, _) = run(ScenarioConfig::new("casimir-identity", family, r), t);
            pass &= passed(&tr, "C_12 ∈ span{s_12, gamma_12}") && passed(&tr, "C_12 = s_12 - gamma_12") && tr.passed;
            let (k, _) = run(ScenarioConfig::new("casimir-identity", family, r).with_normalization("killing"), t);
            if family == "so-even" && r == 1 {
                // so_2 is abelian: its Killing form vanishes
                pass &= k.find("invariant form nondegenerate").is_some();
                continue;
            }
            let scalar = k.measurements.get("family scalar").cloned().unwrap_or_default();
            pass &= k.passed && scalar == killing_scalar_oracle(family, n).to_string();
            constants.insert(k.measurements.get("family constant (scalar/2 - n)").cloned().unwrap_or_default());
        }
        pass &= constants.len() == 1;
        detail.push(format!("{family} constant {:?}", constants));
    }
    Outcome { pass, detail: detail.join(", ") }
}

fn c8(t: &mut Vec<ScenarioConfig>) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (dim, d, excess) in [(4, 2, false), (4, 4, true), (5, 2, false), (5, 4, false)] {
        let (rep, _) = run(with_scenario(so(dim), "so-vs-o").with_d(d), t);
        let (s, o) = (rep.dimensions["so-invariants"], rep.dimensions["O-invariants"]);
        let ok = rep.passed && if excess { s > o } else { s == o };
        pass &= ok;
        detail.push(format!("so_{dim} d={d}: {s} vs {o}"));
    }
    Outcome { pass, detail: detail.join(", ") }
}

fn c9(t: &mut Vec<ScenarioConfig>) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (r, p) in [(2, "4"), (1, "2")] {
        let (rep, _) = run(ScenarioConfig::new("grading-audit", "sp", r).with_partition(p), t);
        let names = [
            "grading is even",
            "grading is good",
            "col(i) + col(-i) = 0",
            "F_ij ∈ p iff col(j) ≤ col(i)",
            "F_ij ∈ m iff col(j) > col(i)",
            "gr(F_ij) = col(i) - col(j)",
            "chi(F) = 0 when gr(F) ≠ -2",
        ];
        let ok = rep.passed && names.iter().all(|n| passed(&rep, n));
        pass &= ok;
        detail.push(format!("{} [{p}] {}", rep.algebra, if ok { "ok" } else { "FAIL" }));
    }
    Outcome { pass, detail: detail.join(", ") }
}

fn c10(t: &mut Vec<ScenarioConfig>) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for cfg in [ScenarioConfig::new("trace-identities", "so-even", 2), ScenarioConfig::new("trace-identities", "sp", 2), so(5)] {
        let cfg = with_scenario(cfg, "trace-identities");
        let (rep, _) = run(cfg, t);
        let counts = ["rank-one trace product formula", "X(l) transport identity", "J pairing evaluations"]
            .iter()
            .all(|n| passed(&rep, n) && computed(&rep, n) == TRACE_INSTANCES);
        let ok = rep.passed && counts && rep.dimensions["rank J on B_d"] == 3 && passed(&rep, "trace monomial span = J(B_2) span");
        pass &= ok;
        detail.push(format!("{} rank J {}", rep.algebra, rep.dimensions["rank J on B_d"]));
    }
    Outcome { pass, detail: detail.join(", ") }
}

type Row = (usize, &'static str, Outcome, Option<bool>);

fn record(results: &mut Vec<Row>, id: usize, title: &'static str, o: Outcome, deviation: Option<bool>) {
    println!("criterion {id:>2} {title:<22} {}  {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    results.push((id, title, o, deviation));
}

fn main() -> ExitCode {
    assert_eq!(TOLERANCE, 0.0);
    let mut touched = Vec::new();
    let mut results: Vec<Row> = Vec::new();
    record(&mut results, 1, "brauer duality", c1(&mut touched), None);
    record(&mut results, 2, "type A Vust", c2(&mut touched), None);
    let (o3, dev3) = c3(&mut touched);
    record(&mut results, 3, "Vust B/C/D", o3, Some(dev3));
    record(&mut results, 5, "double centralizer", c5(&mut touched), None);
    record(&mut results, 6, "intersection remark", c6(&mut touched), None);
    record(&mut results, 7, "Casimir pair identity", c7(&mut touched), None);
    record(&mut results, 8, "SO vs O invariants", c8(&mut touched), None);
    record(&mut results, 9, "grading audit", c9(&mut touched), None);
    record(&mut results, 10, "trace identities", c10(&mut touched), None);
    record(&mut results, 4, "containment always", c4(&touched), None);

    let passed = results.iter().filter(|r| r.2.pass).count();
    let mut unexpected = Vec::new();
    for (id, _, o, dev) in &results {
        if o.pass {
            continue;
        }
        match dev {
            Some(true) => println!(
                "criterion {id:>2} deviation: so_6 [3,1,1,1] d=2 gives dim B_2[e] = {} < dim End_g_e = {}, certified over Q; \
                 the theorem's hypotheses hold, so this is a counterexample, not an engine failure",
                C3_DEVIATION.0, C3_DEVIATION.1
            ),
            _ => unexpected.push(*id),
        }
    }
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures in criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
