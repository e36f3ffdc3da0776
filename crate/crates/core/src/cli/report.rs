use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::exactlin::{ComparisonTable, HomologyReport};
use crate::grading::{Bidegree, Window};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRow {
    pub h: i64,
    pub a: i64,
    pub dim: usize,
    pub truncated: bool,
}

/// One theory's dimension table, rows sorted by (a, h).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub theory: String,
    pub rows: Vec<DimRow>,
}

impl DimTable {
    /// Nonzero and truncated entries of a homology report.
    pub fn from_homology(theory: &str, h: &HomologyReport) -> Self {
        let mut keys: Vec<Bidegree> = h
            .dims
            .iter()
            .filter(|(_, n)| **n > 0)
            .map(|(d, _)| *d)
            .chain(h.truncated.iter().copied())
            .collect();
        keys.sort_by_key(|d| (d.a, d.h));
        keys.dedup();
        DimTable {
            theory: theory.to_string(),
            rows: keys
                .into_iter()
                .map(|d| DimRow {
                    h: d.h,
                    a: d.a,
                    dim: h.dim(d),
                    truncated: h.is_truncated(d),
                })
                .collect(),
        }
    }

    pub fn from_dims(theory: &str, dims: &std::collections::BTreeMap<Bidegree, usize>) -> Self {
        let mut rows: Vec<DimRow> = dims
            .iter()
            .filter(|(_, n)| **n > 0)
            .map(|(d, n)| DimRow {
                h: d.h,
                a: d.a,
                dim: *n,
                truncated: false,
            })
            .collect();
        rows.sort_by_key(|r| (r.a, r.h));
        DimTable {
            theory: theory.to_string(),
            rows,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            status: if pass {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail: detail.into(),
        }
    }

    pub fn skipped(name: &str, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            status: CheckStatus::Skipped,
            detail: detail.into(),
        }
    }

    pub fn from_comparison(name: &str, t: &ComparisonTable) -> Self {
        let failures: Vec<String> = t
            .failures()
            .map(|f| {
                format!(
                    "{} {}≠{} {}",
                    f.left_degree, f.left, f.right, f.right_degree
                )
            })
            .collect();
        let detail = if failures.is_empty() {
            format!("{} untruncated entries agree", t.compared())
        } else {
            failures.join("; ")
        };
        Check::new(name, t.passes(), detail)
    }
}

/// A named exact quantity; scalars are written as `numerator/denominator`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: String,
}

/// Everything one task produced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub task: String,
    pub tables: Vec<DimTable>,
    pub checks: Vec<Check>,
    pub quantities: Vec<Quantity>,
}

impl Section {
    pub fn new(task: &str) -> Self {
        Section {
            task: task.to_string(),
            ..Default::default()
        }
    }

    pub fn quantity(&mut self, name: &str, value: impl Into<String>) {
        self.quantities.push(Quantity {
            name: name.to_string(),
            value: value.into(),
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub schema_version: u32,
    pub algebra: String,
    pub window: Option<Window>,
    pub sections: Vec<Section>,
}

impl ReportBundle {
    pub fn empty() -> Self {
        ReportBundle {
            schema_version: SCHEMA_VERSION,
            algebra: String::new(),
            window: None,
            sections: Vec::new(),
        }
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> + '_ {
        self.sections.iter().flat_map(|s| s.checks.iter())
    }

    /// True when no check failed.
    pub fn all_pass(&self) -> bool {
        self.checks().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn section(&self, task: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.task == task)
    }

    pub fn table(&self, theory: &str) -> Option<&DimTable> {
        self.sections
            .iter()
            .flat_map(|s| s.tables.iter())
            .find(|t| t.theory == theory)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (tsv or json)")),
        }
    }
}

fn tsv_field(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

pub fn emit_report(r: &ReportBundle, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Tsv => {
            let mut out = String::new();
            let _ = writeln!(out, "# schema_version {}", r.schema_version);
            out.push_str("theory\th\ta\tdim\ttruncated\n");
            for s in &r.sections {
                for t in &s.tables {
                    for row in &t.rows {
                        let _ = writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}",
                            tsv_field(&t.theory),
                            row.h,
                            row.a,
                            row.dim,
                            row.truncated
                        );
                    }
                }
            }
            out.push_str("\ntask\tcheck\tstatus\tdetail\n");
            for s in &r.sections {
                for c in &s.checks {
                    let status = serde_json::to_value(c.status).unwrap();
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}\t{}",
                        s.task,
                        tsv_field(&c.name),
                        status.as_str().unwrap(),
                        tsv_field(&c.detail)
                    );
                }
            }
            out.push_str("\ntask\tquantity\tvalue\n");
            for s in &r.sections {
                for q in &s.quantities {
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}",
                        s.task,
                        tsv_field(&q.name),
                        tsv_field(&q.value)
                    );
                }
            }
            out.into_bytes()
        }
    }
}
