//! Scenario registry and run configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use dualitylab::engine::{Backend, EngineConfig};
use dualitylab::forms::{build_space, Family, FormedSpace, InvariantForm};
use dualitylab::nilpotent::Partition;
use dualitylab::normality::NormalityTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    BrauerDuality,
    VustA,
    VustBcd,
    DoubleCentralizer,
    IntersectionRemark,
    CasimirIdentity,
    SoVsO,
    GradingAudit,
    TraceIdentities,
    ConditionExplorer,
}

impl Scenario {
    pub const ALL: [Scenario; 10] = [
        Scenario::BrauerDuality,
        Scenario::VustA,
        Scenario::VustBcd,
        Scenario::DoubleCentralizer,
        Scenario::IntersectionRemark,
        Scenario::CasimirIdentity,
        Scenario::SoVsO,
        Scenario::GradingAudit,
        Scenario::TraceIdentities,
        Scenario::ConditionExplorer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::BrauerDuality => "brauer-duality",
            Scenario::VustA => "vust-a",
            Scenario::VustBcd => "vust-bcd",
            Scenario::DoubleCentralizer => "double-centralizer",
            Scenario::IntersectionRemark => "intersection-remark",
            Scenario::CasimirIdentity => "casimir-identity",
            Scenario::SoVsO => "so-vs-o",
            Scenario::GradingAudit => "grading-audit",
            Scenario::TraceIdentities => "trace-identities",
            Scenario::ConditionExplorer => "condition-explorer",
        }
    }

    /// One-line anchor naming the statement the scenario checks.
    pub fn citation(self) -> &'static str {
        match self {
            Scenario::BrauerDuality => "Brauer duality: End_g(V^d) is the image B_d of the Brauer algebra",
            Scenario::VustA => "Vust, type A: End over U(gl_e) is generated by S_d and the e^(i)",
            Scenario::VustBcd => "Vust, types B/C/D: End over U(g_e) equals B_d[e] (normal closure, multiplicity condition)",
            Scenario::DoubleCentralizer => "double centralizer between B_d[e] and phi(U(gl_e)) ∩ phi(U(g))",
            Scenario::IntersectionRemark => "remark: phi(U(gl_e)) ∩ phi(U(g)) = phi(U(g_e)) for d = 2, rank ≤ 3",
            Scenario::CasimirIdentity => "Casimir pair identity: sum g^(i) g*^(j) = s_ij - gamma_ij",
            Scenario::SoVsO => "tensor invariants of SO(V) and O(V) agree below degree dim V",
            Scenario::GradingAudit => "even good gradings, col map, parabolic split and the character chi",
            Scenario::TraceIdentities => "rank-one trace products, X(l) transport, J pairing and trace monomials",
            Scenario::ConditionExplorer => "B_d[e] against End over U(g_e) when the multiplicity condition fails (no verdict)",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Scenario::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| ConfigError(format!("unknown scenario '{s}' (see `dualitylab list`)")))
    }
}

/// Registry lines: `name<TAB>citation`, in a fixed order.
pub fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    Scenario::ALL.iter().map(|s| (s.name(), s.citation())).collect()
}

/// Invalid configuration or input; maps to exit status 2.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl From<dualitylab::Error> for ConfigError {
    fn from(e: dualitylab::Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// A run configuration as given on the command line or in a batch file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub family: String,
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub partition: Option<String>,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default = "default_normalization")]
    pub normalization: String,
    #[serde(default)]
    pub normality_table: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub report: Option<PathBuf>,
}

fn default_d() -> usize {
    2
}
fn default_field() -> String {
    "rational".into()
}
fn default_normalization() -> String {
    "trace".into()
}

impl ScenarioConfig {
    pub fn new(scenario: &str, family: &str, rank: usize) -> Self {
        ScenarioConfig {
            scenario: scenario.into(),
            family: family.into(),
            rank: Some(rank),
            dim: None,
            partition: None,
            d: 2,
            field: default_field(),
            normalization: default_normalization(),
            normality_table: None,
            seed: 0,
            report: None,
        }
    }

    pub fn with_partition(mut self, p: &str) -> Self {
        self.partition = Some(p.into());
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_normalization(mut self, n: &str) -> Self {
        self.normalization = n.into();
        self
    }

    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let scenario: Scenario = self.scenario.parse()?;
        if self.d == 0 {
            return Err(ConfigError("d must be at least 1".into()));
        }
        let partition: Option<Partition> = match &self.partition {
            Some(p) => Some(p.parse().map_err(|e: dualitylab::Error| ConfigError(format!("bad partition '{p}': {e}")))?),
            None => None,
        };
        let family = resolve_family(&self.family, self.rank, self.dim.or(partition.as_ref().map(|p| p.size())))?;
        let rank = match (self.rank, self.dim) {
            (Some(r), _) => r,
            (None, Some(n)) => rank_for_dim(family, n)?,
            (None, None) => match &partition {
                Some(p) => rank_for_dim(family, p.size())?,
                None => return Err(ConfigError("give --rank, --dim or --partition".into())),
            },
        };
        let space = build_space(family, rank)?;
        if let Some(n) = self.dim {
            if n != space.dim() {
                return Err(ConfigError(format!("--dim {n} does not match {} of rank {rank} (dim {})", family.name(), space.dim())));
            }
        }
        let partition = partition.unwrap_or_else(|| Partition::trivial(space.dim()));
        if partition.size() != space.dim() {
            return Err(ConfigError(format!("partition {partition} sums to {}, but dim V = {}", partition.size(), space.dim())));
        }
        partition.validate(family, space.dim())?;
        let backend = parse_field(&self.field)?;
        let form: InvariantForm = self.normalization.parse().map_err(|_| ConfigError(format!("unknown normalization '{}'", self.normalization)))?;
        let table = match &self.normality_table {
            Some(p) => NormalityTable::load(p)?,
            None => NormalityTable::shipped(),
        };
        let engine = EngineConfig { backend, seed: self.seed, ..EngineConfig::default() };
        Ok(Resolved { scenario, space, partition, d: self.d, form, table, engine, seed: self.seed })
    }
}

fn resolve_family(name: &str, rank: Option<usize>, dim: Option<usize>) -> Result<Family, ConfigError> {
    match name {
        "so" => match dim {
            Some(n) if n % 2 == 1 => Ok(Family::SoOdd),
            Some(_) => Ok(Family::SoEven),
            None if rank.is_some() => Err(ConfigError("family 'so' with --rank is ambiguous; use so-odd/so-even or give --dim".into())),
            None => Err(ConfigError("family 'so' needs --dim or --partition".into())),
        },
        other => other.parse::<Family>().map_err(|_| ConfigError(format!("unknown family '{other}' (so, so-odd, so-even, sp, gl)"))),
    }
}

fn rank_for_dim(family: Family, n: usize) -> Result<usize, ConfigError> {
    let r = match family {
        Family::SoOdd if n % 2 == 1 => (n - 1) / 2,
        Family::SoEven | Family::Sp if n % 2 == 0 => n / 2,
        Family::Gl => n,
        _ => return Err(ConfigError(format!("dimension {n} is impossible for {}", family.name()))),
    };
    if r == 0 {
        return Err(ConfigError(format!("dimension {n} gives rank 0")));
    }
    Ok(r)
}

/// `rational`, `prime` or `prime:<p>`.
pub fn parse_field(s: &str) -> Result<Backend, ConfigError> {
    match s {
        "rational" => Ok(Backend::Rational),
        "prime" => Ok(Backend::Prime(None)),
        _ => match s.strip_prefix("prime:") {
            Some(p) => {
                let p: u64 = p.parse().map_err(|_| ConfigError(format!("bad prime in '{s}'")))?;
                dualitylab::linalg::PrimeField::new(p).map_err(|e| ConfigError(e.to_string()))?;
                Ok(Backend::Prime(Some(p)))
            }
            None => Err(ConfigError(format!("unknown field '{s}' (rational, prime, prime:<p>)"))),
        },
    }
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub scenario: Scenario,
    pub space: FormedSpace,
    pub partition: Partition,
    pub d: usize,
    pub form: InvariantForm,
    pub table: NormalityTable,
    pub engine: EngineConfig,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_stable() {
        let a = list_scenarios();
        assert_eq!(a.len(), 10);
        assert_eq!(a, list_scenarios());
        assert!(a.iter().all(|(_, c)| !c.is_empty()));
        for (name, _) in a {
            assert_eq!(name.parse::<Scenario>().unwrap().name(), name);
        }
    }

    #[test]
    fn family_resolution() {
        let mut c = ScenarioConfig::new("so-vs-o", "so", 2);
        assert!(c.resolve().is_err());
        c.rank = None;
        c.dim = Some(5);
        assert_eq!(c.resolve().unwrap().space.family(), Family::SoOdd);
        let c = ScenarioConfig::new("vust-bcd", "sp", 3).with_partition("2,1,1,1,1");
        let r = c.resolve().unwrap();
        assert_eq!(r.space.dim(), 6);
        let bad = ScenarioConfig::new("vust-bcd", "sp", 2).with_partition("3,1");
        assert!(bad.resolve().unwrap_err().0.contains('3'));
        let sum = ScenarioConfig::new("vust-bcd", "sp", 2).with_partition("2,1,1,1,1");
        assert!(sum.resolve().is_err());
    }

    #[test]
    fn fields() {
        assert_eq!(parse_field("rational").unwrap(), Backend::Rational);
        assert_eq!(parse_field("prime:1000000007").unwrap(), Backend::Prime(Some(1_000_000_007)));
        assert!(parse_field("prime:1000000008").is_err());
        assert!(parse_field("real").is_err());
    }
}
