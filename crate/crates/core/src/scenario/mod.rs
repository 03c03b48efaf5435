//! Declarative scenario files: a TOML document selects one of four
//! experiment kinds and its parameters; running one produces a
//! deterministic report.
//!
//! ```toml
//! kind = "monitor"
//! seed = 7
//! shots = 100000
//!
//! [initial]
//! named = "z+"
//!
//! [gate]
//! named = "identity"
//!
//! [basis1]
//! named = "x"
//!
//! [basis2]
//! named = "z"
//!
//! [measurement]
//! type = "product"
//! later = { named = "z" }
//! earlier = { named = "x" }
//! ```

mod report;
mod run;

pub use report::{emit_csv, emit_json};
pub use run::{run_scenario, Metadata, RunReport, Table};

use crate::error::{Error, Result};
use crate::history::Basis;
use crate::linalg::{
    hadamard, ket_xm, ket_xp, ket_ym, ket_yp, ket_zm, ket_zp, pauli_x, pauli_y, pauli_z,
    DenseOperator, StateVector,
};
use crate::monitor::MeasurementSpec;
use crate::two_slit::ScreenModel;
use num_complex::Complex64 as C64;
use serde::Deserialize;

/// Tolerance for user-supplied matrices and bases.
pub const TOL_INPUT: f64 = 1e-8;

/// A validated scenario: experiment kind plus sampling controls.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub seed: u64,
    pub shots: u64,
}

#[derive(Clone, Debug)]
pub enum ScenarioKind {
    /// Decompose |s> odot |s> over the simultaneous eigenhistories of
    /// A = sigma_2 odot sigma_1, B = sigma_1 odot sigma_3.
    Eigenhistories { initial: StateVector },
    /// Monitor protocol: couple, evolve, couple, post-select, measure.
    Monitor {
        initial: StateVector,
        gate: DenseOperator,
        basis1: Basis,
        basis2: Basis,
        measurement: MeasurementSpec,
    },
    /// Conditional interference patterns over a phase grid.
    TwoSlit { screen: ScreenModel },
    /// P(++) and friends over a (theta, phi) grid.
    MulticopySweep { theta_steps: usize, phi_steps: usize },
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Eigenhistories { .. } => "eigenhistories",
            ScenarioKind::Monitor { .. } => "monitor",
            ScenarioKind::TwoSlit { .. } => "two_slit",
            ScenarioKind::MulticopySweep { .. } => "multicopy_sweep",
        }
    }

    /// Kinds that yield a single outcome distribution support shot sampling.
    pub fn supports_sampling(&self) -> bool {
        matches!(
            self,
            ScenarioKind::Eigenhistories { .. } | ScenarioKind::Monitor { .. }
        )
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    kind: String,
    seed: Option<u64>,
    shots: Option<u64>,
    initial: Option<RawState>,
    gate: Option<RawGate>,
    basis1: Option<RawBasis>,
    basis2: Option<RawBasis>,
    measurement: Option<RawMeasurement>,
    screen: Option<RawScreen>,
    grid: Option<RawGrid>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    named: Option<String>,
    theta: Option<f64>,
    phi: Option<f64>,
    amps: Option<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGate {
    named: Option<String>,
    lambda: Option<f64>,
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasis {
    named: Option<String>,
    theta: Option<f64>,
    phi: Option<f64>,
    first: Option<Vec<[f64; 2]>>,
    second: Option<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasurement {
    #[serde(rename = "type")]
    kind: String,
    later: Option<RawBasis>,
    earlier: Option<RawBasis>,
    vectors: Option<Vec<Vec<[f64; 2]>>>,
    labels: Option<Vec<String>>,
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScreen {
    points: Option<usize>,
    phase_min: Option<f64>,
    phase_max: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    theta_steps: Option<usize>,
    phi_steps: Option<usize>,
}

fn complex(pair: [f64; 2]) -> C64 {
    C64::new(pair[0], pair[1])
}

fn state_from_raw(raw: &RawState, field: &str) -> Result<StateVector> {
    match (&raw.named, raw.theta, &raw.amps) {
        (Some(name), None, None) => match name.as_str() {
            "z+" => Ok(ket_zp()),
            "z-" => Ok(ket_zm()),
            "x+" => Ok(ket_xp()),
            "x-" => Ok(ket_xm()),
            "y+" => Ok(ket_yp()),
            "y-" => Ok(ket_ym()),
            other => Err(Error::validation(
                field,
                format!("unknown named state {other:?} (expect z+/z-/x+/x-/y+/y-)"),
            )),
        },
        (None, Some(theta), None) => {
            let phi = raw.phi.unwrap_or(0.0);
            if !theta.is_finite() || !phi.is_finite() {
                return Err(Error::validation(field, "Bloch angles must be finite"));
            }
            Ok(crate::linalg::bloch(theta, phi))
        }
        (None, None, Some(amps)) => {
            if amps.len() != 2 {
                return Err(Error::validation(field, "amps must list exactly 2 complex pairs"));
            }
            let v = StateVector::new(amps.iter().copied().map(complex).collect())
                .map_err(|e| Error::validation(field, e.to_string()))?;
            if !v.is_unit(TOL_INPUT) {
                return Err(Error::validation(field, "amplitudes must be unit-norm"));
            }
            Ok(v)
        }
        _ => Err(Error::validation(
            field,
            "give exactly one of: named, theta (+optional phi), amps",
        )),
    }
}

fn matrix_from_raw(rows: &[Vec<[f64; 2]>], dim: usize, field: &str) -> Result<DenseOperator> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::validation(field, format!("matrix must be {dim}x{dim}")));
    }
    let mut op = DenseOperator::zeros(dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, &pair) in row.iter().enumerate() {
            if !pair[0].is_finite() || !pair[1].is_finite() {
                return Err(Error::validation(field, "matrix entries must be finite"));
            }
            op.set(i, j, complex(pair));
        }
    }
    Ok(op)
}

fn gate_from_raw(raw: &RawGate, field: &str) -> Result<DenseOperator> {
    match (&raw.named, &raw.matrix) {
        (Some(name), None) => {
            let gate = match name.as_str() {
                "identity" => DenseOperator::identity(2),
                "pauli_x" => pauli_x(),
                "pauli_y" => pauli_y(),
                "pauli_z" => pauli_z(),
                "hadamard" => hadamard(),
                "phase" => {
                    let lambda = raw.lambda.ok_or_else(|| {
                        Error::validation(field, "phase gate needs a lambda angle")
                    })?;
                    if !lambda.is_finite() {
                        return Err(Error::validation(field, "lambda must be finite"));
                    }
                    crate::linalg::phase_gate(lambda)
                }
                other => {
                    return Err(Error::validation(
                        field,
                        format!(
                            "unknown gate {other:?} (expect identity/pauli_x/pauli_y/pauli_z/hadamard/phase)"
                        ),
                    ))
                }
            };
            Ok(gate)
        }
        (None, Some(rows)) => {
            let op = matrix_from_raw(rows, 2, field)?;
            if !op.is_unitary(TOL_INPUT) {
                return Err(Error::validation(field, "matrix is not unitary"));
            }
            Ok(op)
        }
        _ => Err(Error::validation(field, "give exactly one of: named, matrix")),
    }
}

fn basis_from_raw(raw: &RawBasis, field: &str) -> Result<Basis> {
    match (&raw.named, raw.theta, &raw.first) {
        (Some(name), None, None) => match name.as_str() {
            "z" => Ok(Basis::z()),
            "x" => Ok(Basis::x()),
            "y" => Ok(Basis::y()),
            other => Err(Error::validation(
                field,
                format!("unknown named basis {other:?} (expect z/x/y)"),
            )),
        },
        (None, Some(theta), None) => {
            let phi = raw.phi.unwrap_or(0.0);
            if !theta.is_finite() || !phi.is_finite() {
                return Err(Error::validation(field, "Bloch angles must be finite"));
            }
            Ok(Basis::from_bloch(theta, phi))
        }
        (None, None, Some(first)) => {
            let second = raw.second.as_ref().ok_or_else(|| {
                Error::validation(field, "explicit basis needs both first and second")
            })?;
            if first.len() != 2 || second.len() != 2 {
                return Err(Error::validation(field, "basis vectors must have 2 entries"));
            }
            let f = StateVector::new(first.iter().copied().map(complex).collect())
                .map_err(|e| Error::validation(field, e.to_string()))?;
            let s = StateVector::new(second.iter().copied().map(complex).collect())
                .map_err(|e| Error::validation(field, e.to_string()))?;
            Basis::new_with_tol(f, s, field, TOL_INPUT)
                .map_err(|e| Error::validation(field, e.to_string()))
        }
        _ => Err(Error::validation(
            field,
            "give exactly one of: named, theta (+optional phi), first/second",
        )),
    }
}

fn measurement_from_raw(raw: &RawMeasurement, field: &str) -> Result<MeasurementSpec> {
    match raw.kind.as_str() {
        "product" => {
            let later = raw.later.as_ref().ok_or_else(|| {
                Error::validation(field, "product measurement needs a later basis")
            })?;
            let earlier = raw.earlier.as_ref().ok_or_else(|| {
                Error::validation(field, "product measurement needs an earlier basis")
            })?;
            Ok(MeasurementSpec::ProductBasis {
                later: basis_from_raw(later, &format!("{field}.later"))?,
                earlier: basis_from_raw(earlier, &format!("{field}.earlier"))?,
            })
        }
        "set" => {
            let vectors = raw
                .vectors
                .as_ref()
                .ok_or_else(|| Error::validation(field, "set measurement needs vectors"))?;
            let labels = raw
                .labels
                .as_ref()
                .ok_or_else(|| Error::validation(field, "set measurement needs labels"))?;
            if vectors.len() != 4 || labels.len() != 4 {
                return Err(Error::validation(field, "set needs exactly 4 vectors and 4 labels"));
            }
            let mut parsed = Vec::with_capacity(4);
            for (i, v) in vectors.iter().enumerate() {
                if v.len() != 4 {
                    return Err(Error::validation(
                        field,
                        format!("vector {i} must have 4 complex entries"),
                    ));
                }
                parsed.push(
                    StateVector::new(v.iter().copied().map(complex).collect())
                        .map_err(|e| Error::validation(field, e.to_string()))?,
                );
            }
            MeasurementSpec::orthonormal_set_with_tol(parsed, labels.clone(), TOL_INPUT)
                .map_err(|e| Error::validation(field, e.to_string()))
        }
        "observable" => {
            let rows = raw
                .matrix
                .as_ref()
                .ok_or_else(|| Error::validation(field, "observable needs a 4x4 matrix"))?;
            let op = matrix_from_raw(rows, 4, field)?;
            if !op.is_hermitian(TOL_INPUT) {
                return Err(Error::validation(field, "observable matrix is not hermitian"));
            }
            Ok(MeasurementSpec::HermitianObservable(op))
        }
        other => Err(Error::validation(
            field,
            format!("unknown measurement type {other:?} (expect product/set/observable)"),
        )),
    }
}

fn require<'a, T>(opt: &'a Option<T>, field: &str, kind: &str) -> Result<&'a T> {
    opt.as_ref()
        .ok_or_else(|| Error::validation(field, format!("required for kind = {kind:?}")))
}

/// Parse and validate a TOML scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw: RawScenario = toml::from_str(text)
        .map_err(|e| Error::validation("document", e.to_string()))?;
    let kind = match raw.kind.as_str() {
        "eigenhistories" => {
            let initial = match &raw.initial {
                Some(s) => state_from_raw(s, "initial")?,
                None => ket_zp(),
            };
            ScenarioKind::Eigenhistories { initial }
        }
        "monitor" => ScenarioKind::Monitor {
            initial: state_from_raw(require(&raw.initial, "initial", "monitor")?, "initial")?,
            gate: gate_from_raw(require(&raw.gate, "gate", "monitor")?, "gate")?,
            basis1: basis_from_raw(require(&raw.basis1, "basis1", "monitor")?, "basis1")?,
            basis2: basis_from_raw(require(&raw.basis2, "basis2", "monitor")?, "basis2")?,
            measurement: measurement_from_raw(
                require(&raw.measurement, "measurement", "monitor")?,
                "measurement",
            )?,
        },
        "two_slit" => {
            let screen = raw.screen.as_ref();
            let points = screen.and_then(|s| s.points).unwrap_or(256);
            let min = screen.and_then(|s| s.phase_min).unwrap_or(0.0);
            let max = screen
                .and_then(|s| s.phase_max)
                .unwrap_or(2.0 * std::f64::consts::PI);
            if !min.is_finite() || !max.is_finite() {
                return Err(Error::validation("screen", "phase bounds must be finite"));
            }
            ScenarioKind::TwoSlit {
                screen: ScreenModel::uniform_phase_grid(points, min, max)
                    .map_err(|e| Error::validation("screen", e.to_string()))?,
            }
        }
        "multicopy_sweep" => {
            let grid = raw.grid.as_ref();
            let theta_steps = grid.and_then(|g| g.theta_steps).unwrap_or(20);
            let phi_steps = grid.and_then(|g| g.phi_steps).unwrap_or(20);
            if theta_steps == 0 || phi_steps == 0 {
                return Err(Error::validation("grid", "grid steps must be positive"));
            }
            ScenarioKind::MulticopySweep {
                theta_steps,
                phi_steps,
            }
        }
        other => {
            return Err(Error::validation(
                "kind",
                format!(
                    "unknown kind {other:?} (expect eigenhistories/monitor/two_slit/multicopy_sweep)"
                ),
            ))
        }
    };
    let shots = raw.shots.unwrap_or(0);
    if shots > 0 && !kind.supports_sampling() {
        return Err(Error::validation(
            "shots",
            format!("kind = {:?} produces tables, not samples; set shots = 0", kind.name()),
        ));
    }
    Ok(Scenario {
        kind,
        seed: raw.seed.unwrap_or(0),
        shots,
    })
}
