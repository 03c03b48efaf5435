//! Report serialization. Both formats are byte-deterministic for a given
//! report: JSON uses fixed struct field order, CSV renders every number
//! with 12 fixed decimal places.

use super::run::RunReport;
use crate::error::{Error, Result};
use std::fmt::Write;

fn num(x: f64) -> String {
    format!("{x:.12}")
}

/// CSV: outcome distribution (with a count column iff shots > 0) for
/// distribution kinds, the numeric table for sweep kinds.
pub fn emit_csv(report: &RunReport) -> Result<String> {
    let mut out = String::new();
    if let Some(dist) = &report.exact_distribution {
        let with_counts = report.sampled_counts.is_some();
        if with_counts {
            out.push_str("outcome,probability,count\n");
        } else {
            out.push_str("outcome,probability\n");
        }
        for (i, o) in dist.iter().enumerate() {
            if with_counts {
                let counts = report.sampled_counts.as_ref().expect("checked above");
                writeln!(out, "{},{},{}", o.outcome, num(o.probability), counts[i].count)
                    .expect("string write");
            } else {
                writeln!(out, "{},{}", o.outcome, num(o.probability)).expect("string write");
            }
        }
        return Ok(out);
    }
    if let Some(table) = &report.table {
        out.push_str(&table.columns.join(","));
        out.push('\n');
        for row in &table.rows {
            let cells: Vec<String> = row.iter().map(|&x| num(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        return Ok(out);
    }
    Err(Error::UndefinedInput(
        "report carries neither a distribution nor a table".into(),
    ))
}

/// Pretty-printed JSON of the whole report, trailing newline included.
pub fn emit_json(report: &RunReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)
        .map_err(|e| Error::UndefinedInput(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_scenario, run_scenario};
    use super::*;

    const EQ8: &str = r#"
kind = "monitor"
seed = 3
[initial]
named = "z+"
[gate]
named = "identity"
[basis1]
named = "x"
[basis2]
named = "z"
[measurement]
type = "product"
later = { named = "z" }
earlier = { named = "x" }
"#;

    #[test]
    fn csv_formats_quarter_as_twelve_decimals() {
        let report = run_scenario(&parse_scenario(EQ8).unwrap()).unwrap();
        let csv = emit_csv(&report).unwrap();
        assert!(csv.starts_with("outcome,probability\n"), "{csv}");
        assert!(csv.contains(",0.250000000000\n"), "{csv}");
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn csv_includes_counts_when_sampling() {
        let text = format!("shots = 100\n{}", &EQ8[1..]);
        let report = run_scenario(&parse_scenario(&text).unwrap()).unwrap();
        let csv = emit_csv(&report).unwrap();
        assert!(csv.starts_with("outcome,probability,count\n"), "{csv}");
        let total: u64 = csv
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
            .sum();
        assert_eq!(total, 100);
    }

    #[test]
    fn outputs_are_reproducible() {
        let text = format!("shots = 500\n{}", &EQ8[1..]);
        let s1 = parse_scenario(&text).unwrap();
        let s2 = parse_scenario(&text).unwrap();
        let r1 = run_scenario(&s1).unwrap();
        let r2 = run_scenario(&s2).unwrap();
        assert_eq!(emit_csv(&r1).unwrap(), emit_csv(&r2).unwrap());
        assert_eq!(emit_json(&r1).unwrap(), emit_json(&r2).unwrap());
    }

    #[test]
    fn json_shape() {
        let report = run_scenario(&parse_scenario(EQ8).unwrap()).unwrap();
        let json = emit_json(&report).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["metadata"]["kind"], "monitor");
        assert_eq!(v["metadata"]["seed"], 3);
        assert!(v["exact_distribution"].as_array().unwrap().len() == 4);
        assert!(v.get("sampled_counts").is_none());
    }
}
