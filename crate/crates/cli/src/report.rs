//! Experiment reports: JSON for machines, aligned text for people.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use dualitylab::engine::Provenance;

use crate::config::ScenarioConfig;

/// One checked statement. `pass` is `None` for observations without a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: Option<bool>,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Phase {
    pub name: String,
    pub millis: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProvenanceRecord {
    pub object: String,
    pub primes: Vec<u64>,
    pub rational_certified: bool,
    pub method: String,
    pub collisions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentReport {
    pub config: ScenarioConfig,
    pub scenario: String,
    pub algebra: String,
    pub basis_order: String,
    pub normality_entry: Option<String>,
    pub checks: Vec<Check>,
    pub dimensions: BTreeMap<String, usize>,
    pub measurements: BTreeMap<String, String>,
    pub phases: Vec<Phase>,
    pub provenance: Vec<ProvenanceRecord>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn new(config: ScenarioConfig, scenario: &str, algebra: String) -> Self {
        ExperimentReport {
            config,
            scenario: scenario.into(),
            algebra,
            basis_order: "tensor basis v_{i_1}⊗…⊗v_{i_d} in lexicographic order of ascending labels, first slot most significant".into(),
            normality_entry: None,
            checks: Vec::new(),
            dimensions: BTreeMap::new(),
            measurements: BTreeMap::new(),
            phases: Vec::new(),
            provenance: Vec::new(),
            notes: Vec::new(),
            passed: true,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, expected: impl ToString, computed: impl ToString, pass: bool, citation: &str) {
        self.checks.push(Check { name: name.into(), expected: expected.to_string(), computed: computed.to_string(), pass: Some(pass), citation: citation.into() });
        self.passed &= pass;
    }

    pub fn observe(&mut self, name: impl Into<String>, computed: impl ToString, citation: &str) {
        self.checks.push(Check { name: name.into(), expected: "-".into(), computed: computed.to_string(), pass: None, citation: citation.into() });
    }

    pub fn dim(&mut self, name: impl Into<String>, value: usize) {
        self.dimensions.insert(name.into(), value);
    }

    pub fn measure(&mut self, name: impl Into<String>, value: impl ToString) {
        self.measurements.insert(name.into(), value.to_string());
    }

    pub fn provenance(&mut self, object: impl Into<String>, p: &Provenance) {
        self.provenance.push(ProvenanceRecord {
            object: object.into(),
            primes: p.primes.clone(),
            rational_certified: p.rational_certified,
            method: p.method.clone(),
            collisions: p.collisions.clone(),
        });
    }

    pub fn phase(&mut self, name: impl Into<String>, millis: u128) {
        self.phases.push(Phase { name: name.into(), millis });
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Exit status: 0 when every verdict passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario   {}", self.scenario);
        let _ = writeln!(s, "algebra    {}", self.algebra);
        let _ = writeln!(s, "d          {}", self.config.d);
        if let Some(p) = &self.config.partition {
            let _ = writeln!(s, "partition  [{p}]");
        }
        if let Some(e) = &self.normality_entry {
            let _ = writeln!(s, "normality  {e}");
        }
        let _ = writeln!(s, "verdict    {}", if self.passed { "PASS" } else { "FAIL" });
        let _ = writeln!(s, "\nchecks");
        let w = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
        for c in &self.checks {
            let tag = match c.pass {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "note",
            };
            let pad = w - c.name.chars().count();
            let _ = writeln!(s, "  {tag}  {}{}  expected {}  computed {}", c.name, " ".repeat(pad), c.expected, c.computed);
        }
        if !self.dimensions.is_empty() {
            let _ = writeln!(s, "\ndimensions");
            let w = self.dimensions.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, v) in &self.dimensions {
                let _ = writeln!(s, "  {k}{}  {v:>6}", " ".repeat(w - k.chars().count()));
            }
        }
        if !self.measurements.is_empty() {
            let _ = writeln!(s, "\nmeasurements");
            for (k, v) in &self.measurements {
                let _ = writeln!(s, "  {k}: {v}");
            }
        }
        if !self.provenance.is_empty() {
            let _ = writeln!(s, "\nprovenance");
            for p in &self.provenance {
                let _ = writeln!(s, "  {}: {} over {} prime(s), certified {}", p.object, p.method, p.primes.len(), p.rational_certified);
                for c in &p.collisions {
                    let _ = writeln!(s, "    collision: {c}");
                }
            }
        }
        let _ = writeln!(s, "\nphases (ms)");
        for p in &self.phases {
            let _ = writeln!(s, "  {:<28} {:>8}", p.name, p.millis);
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    /// Writes `<path>` as JSON and `<path>.txt` as text.
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_json())?;
        let mut txt = path.as_os_str().to_owned();
        txt.push(".txt");
        std::fs::write(txt, self.to_text())
    }
}
