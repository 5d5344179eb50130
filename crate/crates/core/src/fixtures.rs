//! The two case tables, stored as text fixtures, and the check that
//! every checkmark row is an anchored sequence with an ill-defined pair at `u`.
//!
//! Record format, one row per line: `label|N|out row then in row|Y or N|M+|M-`,
//! with vertices `u,v,w,x,y` numbered `1..5`. Lines starting with `#` are comments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anchored::anchor_indices;
use crate::hh_ops::{parallel_step, MaximalIndexPair};
use crate::oracle::{all_maximal_pairs, ill_defined_indices_oracle, EnumerationBudget};
use crate::seq_core::{is_digraphic, IndexSet, IntPairSeq};

const TABLE_R1: &str = include_str!("../fixtures/table_r1.txt");
const TABLE_R2: &str = include_str!("../fixtures/table_r2.txt");

/// The index whose parallel step the tables exhibit as ill-defined (vertex `u`).
const STEPPED_INDEX: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Table {
    /// One extra vertex `x` beside the cycle: 16 rows.
    R1,
    /// Two extra vertices `x, y`: 84 rows.
    R2,
}

impl Table {
    pub fn text(self) -> &'static str {
        match self {
            Table::R1 => TABLE_R1,
            Table::R2 => TABLE_R2,
        }
    }
}

impl FromStr for Table {
    type Err = FixtureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "R1" => Ok(Table::R1),
            "R2" => Ok(Table::R2),
            _ => Err(FixtureError::UnknownTable(s.to_string())),
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Table::R1 => "R1",
            Table::R2 => "R2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("fixture line {line}: {message}")]
    FixtureParse { line: usize, message: String },
    #[error("unknown table {0:?}; expected R1 or R2")]
    UnknownTable(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub label: String,
    pub sequence: IntPairSeq,
    pub checkmark: bool,
    pub m_plus: IndexSet,
    pub m_minus: IndexSet,
}

fn parse_indices(field: &str, n: usize, line: usize) -> Result<IndexSet, FixtureError> {
    field
        .split_whitespace()
        .map(|tok| match tok.parse::<usize>() {
            Ok(v) if (1..=n).contains(&v) => Ok(v),
            _ => Err(FixtureError::FixtureParse { line, message: format!("bad vertex {tok:?}") }),
        })
        .collect()
}

pub fn parse_fixture(text: &str) -> Result<Vec<FixtureRow>, FixtureError> {
    let mut rows = Vec::new();
    for (pos, raw) in text.lines().enumerate() {
        let line = pos + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| FixtureError::FixtureParse { line, message };
        let fields: Vec<&str> = trimmed.split('|').collect();
        if fields.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", fields.len())));
        }
        let n: usize = fields[1].trim().parse().map_err(|_| err(format!("bad N {:?}", fields[1])))?;
        let degrees: Vec<u32> = fields[2]
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(format!("bad degree {t:?}"))))
            .collect::<Result<_, _>>()?;
        if degrees.len() != 2 * n {
            return Err(err(format!("expected {} degrees, found {}", 2 * n, degrees.len())));
        }
        let sequence = IntPairSeq::from_columns(&degrees[..n], &degrees[n..]).expect("equal halves");
        let checkmark = match fields[3].trim() {
            "Y" => true,
            "N" => false,
            other => return Err(err(format!("bad flag {other:?}"))),
        };
        let m_plus = parse_indices(fields[4], n, line)?;
        let m_minus = parse_indices(fields[5], n, line)?;
        if checkmark && (m_plus.is_empty() || m_minus.is_empty()) {
            return Err(err("checkmark row without vertex sets".into()));
        }
        rows.push(FixtureRow { label: fields[0].trim().to_string(), sequence, checkmark, m_plus, m_minus });
    }
    Ok(rows)
}

pub fn load_table(table: Table) -> Result<Vec<FixtureRow>, FixtureError> {
    parse_fixture(table.text())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowVerdict {
    Pass,
    Fail,
    /// Dot rows: nothing is asserted.
    Reported,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowOutcome {
    pub label: String,
    pub checkmark: bool,
    pub verdict: RowVerdict,
    pub anchors: IndexSet,
    pub ill_defined: IndexSet,
    /// The full maximal sets at `u` whose residual is not digraphic, when found.
    pub witness: Option<MaximalIndexPair>,
    /// True when the listed vertex sets are already full maximal sets.
    pub listed_complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub table: Table,
    pub rows: Vec<RowOutcome>,
}

impl FixtureReport {
    pub fn consistent(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict != RowVerdict::Fail).count()
    }

    pub fn checkmark_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.checkmark).count()
    }

    pub fn checkmark_passes(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict == RowVerdict::Pass).count()
    }

    pub fn summary(&self) -> String {
        format!("{}/{} rows consistent", self.consistent(), self.rows.len())
    }
}

/// Checks one row. A checkmark row passes when the sequence is anchored, the oracle
/// finds an ill-defined index, and some maximal pair at `u` containing the listed
/// vertex sets leaves a non-digraphic parallel residual.
pub fn check_row(row: &FixtureRow, budget: &EnumerationBudget) -> RowOutcome {
    let d = &row.sequence;
    let anchors = anchor_indices(d).unwrap_or_default();
    let ill_defined = ill_defined_indices_oracle(d, budget).unwrap_or_default();
    let mut witness = None;
    let mut listed_complete = false;
    for (kplus, kminus) in all_maximal_pairs(d, STEPPED_INDEX) {
        if !(row.m_plus.is_subset(&kplus) && row.m_minus.is_subset(&kminus)) {
            continue;
        }
        let pair = MaximalIndexPair { i: STEPPED_INDEX, kplus, kminus };
        let trapped = match parallel_step(d, &pair) {
            Ok(residual) => !is_digraphic(&residual),
            Err(_) => true,
        };
        if trapped && witness.is_none() {
            listed_complete = pair.kplus == row.m_plus && pair.kminus == row.m_minus;
            witness = Some(pair);
        }
    }
    let verdict = if !row.checkmark {
        RowVerdict::Reported
    } else if !anchors.is_empty() && !ill_defined.is_empty() && witness.is_some() {
        RowVerdict::Pass
    } else {
        RowVerdict::Fail
    };
    RowOutcome {
        label: row.label.clone(),
        checkmark: row.checkmark,
        verdict,
        anchors,
        ill_defined,
        witness,
        listed_complete,
    }
}

pub fn check_rows(table: Table, rows: &[FixtureRow], budget: &EnumerationBudget) -> FixtureReport {
    FixtureReport { table, rows: rows.iter().map(|r| check_row(r, budget)).collect() }
}

pub fn appendix_fixture_check(table: Table) -> Result<FixtureReport, FixtureError> {
    let rows = load_table(table)?;
    Ok(check_rows(table, &rows, &EnumerationBudget::default()))
}
