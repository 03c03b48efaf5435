//! Execute a validated scenario deterministically.
//!
//! Exact distributions and tables are computed first; shot sampling (when
//! requested) draws from ChaCha8 seeded with the scenario seed, so a given
//! (scenario, seed) pair always yields the same report.

use super::{Scenario, ScenarioKind};
use crate::dist::OutcomeDistribution;
use crate::error::Result;
use crate::history::history_inner;
use crate::monitor::{measure_monitors, project_and_extract, run_protocol};
use crate::multicopy::{decompose_history, probability_vpp_closed_form, BlochAngles};
use crate::temporal::{op_a, op_b, simultaneous_eigenhistories};
use crate::two_slit::pattern_given_total_spin;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub kind: String,
    pub seed: u64,
    pub shots: u64,
    pub version: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutcomeProbability {
    pub outcome: String,
    pub probability: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutcomeCount {
    pub outcome: String,
    pub count: u64,
}

/// Plot-ready numeric table: column names plus rows of equal width.
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub metadata: Metadata,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_distribution: Option<Vec<OutcomeProbability>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled_counts: Option<Vec<OutcomeCount>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

fn sample_counts(
    dist: &OutcomeDistribution,
    seed: u64,
    shots: u64,
) -> Option<Vec<OutcomeCount>> {
    if shots == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = dist.sample(&mut rng, shots);
    Some(
        dist.outcomes()
            .iter()
            .zip(counts)
            .map(|((label, _), count)| OutcomeCount {
                outcome: label.clone(),
                count,
            })
            .collect(),
    )
}

fn distribution_report(
    meta: Metadata,
    dist: &OutcomeDistribution,
    success: Option<f64>,
) -> RunReport {
    let sampled = sample_counts(dist, meta.seed, meta.shots);
    RunReport {
        metadata: meta,
        success_probability: success,
        exact_distribution: Some(
            dist.outcomes()
                .iter()
                .map(|(outcome, p)| OutcomeProbability {
                    outcome: outcome.clone(),
                    probability: *p,
                })
                .collect(),
        ),
        sampled_counts: sampled,
        table: None,
    }
}

pub fn run_scenario(s: &Scenario) -> Result<RunReport> {
    let meta = Metadata {
        kind: s.kind.name().to_string(),
        seed: s.seed,
        shots: s.shots,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    match &s.kind {
        ScenarioKind::Eigenhistories { initial } => {
            let basis = simultaneous_eigenhistories(&op_a(), &op_b())?;
            let h = crate::multicopy::diagonal_embed(initial)?;
            let mut outcomes = Vec::with_capacity(4);
            for k in 0..4 {
                let p = history_inner(&basis.vectors()[k], &h).norm_sqr();
                outcomes.push((basis.label_string(k), p));
            }
            let dist = OutcomeDistribution::new(outcomes)?;
            Ok(distribution_report(meta, &dist, None))
        }
        ScenarioKind::Monitor {
            initial,
            gate,
            basis1,
            basis2,
            measurement,
        } => {
            let joint = run_protocol(initial, gate, basis1, basis2)?;
            let result = project_and_extract(&joint, basis2)?;
            let dist = measure_monitors(&result, measurement)?;
            Ok(distribution_report(
                meta,
                &dist,
                Some(result.success_probability()),
            ))
        }
        ScenarioKind::TwoSlit { screen } => {
            let mut rows = Vec::with_capacity(screen.len());
            for i in 0..screen.len() {
                let amps = screen.amplitudes(i);
                let spin1 = pattern_given_total_spin(&amps, 1)?;
                let spin0 = pattern_given_total_spin(&amps, 0)?;
                rows.push(vec![screen.point(i), spin1, spin0, spin1 + spin0]);
            }
            Ok(RunReport {
                metadata: meta,
                success_probability: None,
                exact_distribution: None,
                sampled_counts: None,
                table: Some(Table {
                    columns: ["delta", "spin1", "spin0", "total"]
                        .map(String::from)
                        .to_vec(),
                    rows,
                }),
            })
        }
        ScenarioKind::MulticopySweep {
            theta_steps,
            phi_steps,
        } => {
            let (nt, np) = (*theta_steps, *phi_steps);
            let mut rows = Vec::with_capacity(nt * np);
            for i in 0..nt {
                let theta = if nt == 1 {
                    std::f64::consts::FRAC_PI_2
                } else {
                    std::f64::consts::PI * i as f64 / (nt - 1) as f64
                };
                for j in 0..np {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / np as f64;
                    let angles = BlochAngles::new(theta, phi)?;
                    let c = decompose_history(&angles)?;
                    let ps: Vec<f64> = c.iter().map(|x| x.norm_sqr()).collect();
                    let sum: f64 = ps.iter().sum();
                    rows.push(vec![
                        theta,
                        phi,
                        ps[0],
                        ps[1],
                        ps[2],
                        ps[3],
                        sum,
                        probability_vpp_closed_form(&angles),
                    ]);
                }
            }
            Ok(RunReport {
                metadata: meta,
                success_probability: None,
                exact_distribution: None,
                sampled_counts: None,
                table: Some(Table {
                    columns: [
                        "theta",
                        "phi",
                        "p_pp",
                        "p_pm",
                        "p_mp",
                        "p_mm",
                        "sum",
                        "closed_form",
                    ]
                    .map(String::from)
                    .to_vec(),
                    rows,
                }),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_scenario;
    use super::*;

    const EQ8: &str = r#"
kind = "monitor"
seed = 7
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
    fn eq8_product_probabilities() {
        let report = run_scenario(&parse_scenario(EQ8).unwrap()).unwrap();
        let dist = report.exact_distribution.unwrap();
        assert_eq!(dist.len(), 4);
        for o in &dist {
            assert!((o.probability - 0.25).abs() <= 1e-12, "{}: {}", o.outcome, o.probability);
        }
        assert!((report.success_probability.unwrap() - 0.5).abs() <= 1e-12);
        assert!(report.sampled_counts.is_none());
        assert!(dist.iter().any(|o| o.outcome.contains("z+") && o.outcome.contains("x-")));
    }

    #[test]
    fn sampling_counts_sum_to_shots() {
        let text = format!("shots = 5000\n{}", &EQ8[1..]);
        let report = run_scenario(&parse_scenario(&text).unwrap()).unwrap();
        let counts = report.sampled_counts.unwrap();
        let total: u64 = counts.iter().map(|c| c.count).sum();
        assert_eq!(total, 5000);
    }

    #[test]
    fn eigenhistories_distribution_sums_to_one() {
        let report =
            run_scenario(&parse_scenario("kind = \"eigenhistories\"\n[initial]\ntheta = 1.1\nphi = 0.4").unwrap())
                .unwrap();
        let dist = report.exact_distribution.unwrap();
        let sum: f64 = dist.iter().map(|o| o.probability).sum();
        assert!((sum - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn two_slit_table_shape() {
        let report = run_scenario(
            &parse_scenario("kind = \"two_slit\"\n[screen]\npoints = 16").unwrap(),
        )
        .unwrap();
        let table = report.table.unwrap();
        assert_eq!(table.columns.len(), 4);
        assert_eq!(table.rows.len(), 16);
        for row in &table.rows {
            assert!((row[3] - 1.0).abs() <= 1e-12);
            assert!((row[1] - (row[0] / 2.0).cos().powi(2)).abs() <= 1e-12);
        }
    }

    #[test]
    fn multicopy_sweep_rows() {
        let report = run_scenario(
            &parse_scenario("kind = \"multicopy_sweep\"\n[grid]\ntheta_steps = 5\nphi_steps = 4")
                .unwrap(),
        )
        .unwrap();
        let table = report.table.unwrap();
        assert_eq!(table.rows.len(), 20);
        for row in &table.rows {
            assert!((row[6] - 1.0).abs() <= 1e-10);
        }
    }
}
