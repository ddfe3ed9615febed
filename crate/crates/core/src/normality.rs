//! Lookup table for normality of nilpotent orbit closures.
//!
//! One record per line: `family partition normal citation…`, whitespace
//! separated, with `#` starting a comment. The family is `so`, `sp` or `gl`
//! (`so-odd` and `so-even` are accepted as `so`).

use std::path::Path;

use crate::error::{Error, Result};
use crate::forms::Family;
use crate::nilpotent::Partition;

/// The table shipped with the crate.
pub const DEFAULT_TABLE: &str = include_str!("../data/normality.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableFamily {
    So,
    Sp,
    Gl,
}

impl From<Family> for TableFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::SoOdd | Family::SoEven => TableFamily::So,
            Family::Sp => TableFamily::Sp,
            Family::Gl => TableFamily::Gl,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityEntry {
    pub family: TableFamily,
    pub partition: Partition,
    pub normal: bool,
    pub citation: String,
    pub line: usize,
}

impl NormalityEntry {
    /// Compact form for reports, e.g. `sp [2,1,1] normal (Vinberg-Popov 1972, minimal orbit)`.
    pub fn describe(&self) -> String {
        let fam = match self.family {
            TableFamily::So => "so",
            TableFamily::Sp => "sp",
            TableFamily::Gl => "gl",
        };
        let verdict = if self.normal { "normal" } else { "not normal" };
        format!("{fam} {} {verdict} ({})", self.partition, self.citation)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalityTable {
    entries: Vec<NormalityEntry>,
}

impl NormalityTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<NormalityEntry> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let bad = |what: &str| Error::Parse(format!("normality table line {}: {what}", no + 1));
            let family = match fields.next() {
                Some("so") | Some("so-odd") | Some("so-even") => TableFamily::So,
                Some("sp") => TableFamily::Sp,
                Some("gl") => TableFamily::Gl,
                Some(other) => return Err(bad(&format!("unknown family '{other}'"))),
                None => unreachable!("line is not empty"),
            };
            let partition: Partition = fields.next().ok_or_else(|| bad("missing partition"))?.parse().map_err(|_| bad("bad partition"))?;
            let normal = match fields.next() {
                Some("true") | Some("yes") => true,
                Some("false") | Some("no") => false,
                _ => return Err(bad("normal flag must be true or false")),
            };
            let citation = fields.collect::<Vec<_>>().join(" ");
            if citation.is_empty() {
                return Err(bad("missing citation"));
            }
            if entries.iter().any(|e| e.family == family && e.partition == partition) {
                return Err(bad(&format!("duplicate entry for {partition}")));
            }
            entries.push(NormalityEntry { family, partition, normal, citation, line: no + 1 });
        }
        Ok(NormalityTable { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn shipped() -> Self {
        Self::parse(DEFAULT_TABLE).expect("shipped table parses")
    }

    pub fn entries(&self) -> &[NormalityEntry] {
        &self.entries
    }

    pub fn lookup(&self, family: Family, partition: &Partition) -> Option<&NormalityEntry> {
        let fam = TableFamily::from(family);
        self.entries.iter().find(|e| e.family == fam && &e.partition == partition)
    }
}
