//! On-disk records: mutant records, the results stream and target lists.
//!
//! The results stream is line-delimited JSON with keys in this order:
//! `mutant_id`, `operator`, `status`, `timestamp`, `killing_tests`,
//! `covering_tests`, `disregarded_failures`. Test lists are arrays of
//! `{"test": ..., "visits": ...}` objects.

use anyhow::{anyhow, Context, Result};
use serde::{Deserialize, Serialize};

use mutlearn_core::harness::{MutantVerdict, Status};
use mutlearn_core::mutagen::{MutantRecord, MutationTarget, Validity};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TestVisits {
    pub test: String,
    pub visits: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ResultLine {
    pub mutant_id: u64,
    pub operator: String,
    pub status: String,
    pub timestamp: u32,
    pub killing_tests: Vec<TestVisits>,
    pub covering_tests: Vec<TestVisits>,
    pub disregarded_failures: Vec<String>,
}

fn visits(v: &[(String, u64)]) -> Vec<TestVisits> {
    v.iter()
        .map(|(t, n)| TestVisits {
            test: t.clone(),
            visits: *n,
        })
        .collect()
}

impl From<&MutantVerdict> for ResultLine {
    fn from(v: &MutantVerdict) -> Self {
        ResultLine {
            mutant_id: v.mutant_id,
            operator: v.operator.clone(),
            status: v.status.name().into(),
            timestamp: v.timestamp,
            killing_tests: visits(&v.killing_tests),
            covering_tests: visits(&v.covering_tests),
            disregarded_failures: v.disregarded_failures.clone(),
        }
    }
}

impl TryFrom<ResultLine> for MutantVerdict {
    type Error = anyhow::Error;

    fn try_from(r: ResultLine) -> Result<Self> {
        let status = Status::from_name(&r.status).ok_or_else(|| anyhow!("unknown status `{}`", r.status))?;
        let pairs = |v: Vec<TestVisits>| v.into_iter().map(|t| (t.test, t.visits)).collect();
        Ok(MutantVerdict {
            mutant_id: r.mutant_id,
            operator: r.operator,
            timestamp: r.timestamp,
            status,
            killing_tests: pairs(r.killing_tests),
            covering_tests: pairs(r.covering_tests),
            disregarded_failures: r.disregarded_failures,
        })
    }
}

/// Encode verdicts as a results stream.
pub fn write_results(verdicts: &[MutantVerdict]) -> String {
    let mut out = String::new();
    for v in verdicts {
        out.push_str(&serde_json::to_string(&ResultLine::from(v)).expect("serializable"));
        out.push('\n');
    }
    out
}

/// Decode a results stream. Errors name the offending 1-based line.
pub fn read_results(text: &str) -> Result<Vec<MutantVerdict>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: ResultLine = serde_json::from_str(line).with_context(|| format!("results line {}", i + 1))?;
        out.push(MutantVerdict::try_from(parsed).with_context(|| format!("results line {}", i + 1))?);
    }
    Ok(out)
}

/// `record.json` of a mutant bundle.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RecordJson {
    pub id: u64,
    pub operator: String,
    pub file: String,
    pub span: [usize; 2],
    pub original_snippet: String,
    pub mutated_snippet: String,
    pub timestamp: u32,
    pub validity: String,
}

impl From<&MutantRecord> for RecordJson {
    fn from(m: &MutantRecord) -> Self {
        RecordJson {
            id: m.mutant_id,
            operator: m.operator.clone(),
            file: m.file.clone(),
            span: [m.site_span.0, m.site_span.1],
            original_snippet: m.original_snippet.clone(),
            mutated_snippet: m.mutated_snippet.clone(),
            timestamp: m.timestamp,
            validity: m.validity.name().into(),
        }
    }
}

impl RecordJson {
    pub fn into_record(self, mutated_source: String, diff_text: String) -> Result<MutantRecord> {
        let validity =
            Validity::from_name(&self.validity).ok_or_else(|| anyhow!("unknown validity `{}`", self.validity))?;
        Ok(MutantRecord {
            mutant_id: self.id,
            operator: self.operator,
            file: self.file,
            site_span: (self.span[0], self.span[1]),
            original_snippet: self.original_snippet,
            mutated_snippet: self.mutated_snippet,
            mutated_source,
            diff_text,
            timestamp: self.timestamp,
            validity,
        })
    }
}

/// One entry of a targets file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TargetJson {
    pub path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranges: Option<Vec<[usize; 2]>>,
    #[serde(default)]
    pub timestamp: u32,
}

pub fn read_targets(text: &str) -> Result<Vec<MutationTarget>> {
    let raw: Vec<TargetJson> = serde_json::from_str(text).context("targets file")?;
    raw.into_iter()
        .map(|t| {
            if let Some(r) = t.ranges.iter().flatten().find(|r| r[0] == 0 || r[0] > r[1]) {
                return Err(anyhow!("{}: bad line range [{}, {}]", t.path, r[0], r[1]));
            }
            Ok(MutationTarget {
                file: t.path,
                line_ranges: t.ranges.map(|rs| rs.into_iter().map(|r| (r[0], r[1])).collect()),
                timestamp: t.timestamp,
            })
        })
        .collect()
}

pub fn write_targets(targets: &[MutationTarget]) -> String {
    let raw: Vec<TargetJson> = targets
        .iter()
        .map(|t| TargetJson {
            path: t.file.clone(),
            ranges: t.line_ranges.as_ref().map(|rs| rs.iter().map(|&(a, b)| [a, b]).collect()),
            timestamp: t.timestamp,
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&raw).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn result_line_key_order() {
        let v = MutantVerdict {
            mutant_id: 3,
            operator: "OP".into(),
            timestamp: 2,
            status: Status::Killed,
            killing_tests: vec![("A.t".into(), 4)],
            covering_tests: vec![("A.t".into(), 4)],
            disregarded_failures: vec!["B.t".into()],
        };
        let text = write_results(std::slice::from_ref(&v));
        assert_eq!(
            text,
            "{\"mutant_id\":3,\"operator\":\"OP\",\"status\":\"KILLED\",\"timestamp\":2,\
             \"killing_tests\":[{\"test\":\"A.t\",\"visits\":4}],\
             \"covering_tests\":[{\"test\":\"A.t\",\"visits\":4}],\
             \"disregarded_failures\":[\"B.t\"]}\n"
        );
        assert_eq!(read_results(&text).unwrap(), vec![v]);
    }

    #[test]
    fn malformed_line_is_located() {
        let e = read_results("\n{\"mutant_id\": 1}\n").unwrap_err();
        assert!(format!("{e:#}").contains("results line 2"));
    }

    #[test]
    fn targets_round_trip() {
        let text = r#"[{"path": "a.mj", "ranges": [[1, 3]]}, {"path": "b.mj", "timestamp": 4}]"#;
        let ts = read_targets(text).unwrap();
        assert_eq!(ts[0].line_ranges, Some(vec![(1, 3)]));
        assert_eq!(ts[1].line_ranges, None);
        assert_eq!(read_targets(&write_targets(&ts)).unwrap(), ts);
        assert!(read_targets(r#"[{"path": "a.mj", "ranges": [[3, 1]]}]"#).is_err());
    }
}
