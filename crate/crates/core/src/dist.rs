//! Labeled outcome distributions with optional seeded sampling.

use crate::error::{Error, Result};
use rand::Rng;

/// (outcome label, probability) pairs summing to 1 within tolerance.
#[derive(Clone, Debug)]
pub struct OutcomeDistribution {
    outcomes: Vec<(String, f64)>,
}

impl OutcomeDistribution {
    pub fn new(outcomes: Vec<(String, f64)>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::UndefinedInput("empty distribution".into()));
        }
        let mut sum = 0.0;
        for (label, p) in &outcomes {
            if !p.is_finite() || *p < -1e-10 || *p > 1.0 + 1e-10 {
                return Err(Error::ContractViolation(format!(
                    "probability {p} for outcome {label} out of range"
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::ContractViolation(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(OutcomeDistribution { outcomes })
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[(String, f64)] {
        &self.outcomes
    }

    pub fn probability(&self, label: &str) -> Option<f64> {
        self.outcomes
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, p)| *p)
    }

    /// Draw `shots` outcomes by inverse-CDF over uniform f64 draws, returning
    /// per-outcome counts in outcome order.
    pub fn sample<R: Rng>(&self, rng: &mut R, shots: u64) -> Vec<u64> {
        let mut counts = vec![0u64; self.outcomes.len()];
        for _ in 0..shots {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut chosen = self.outcomes.len() - 1;
            for (k, (_, p)) in self.outcomes.iter().enumerate() {
                acc += p;
                if u < acc {
                    chosen = k;
                    break;
                }
            }
            counts[chosen] += 1;
        }
        counts
    }
}
