//! Python bindings for the entangled-histories library.
//!
//! Build with `cargo build -p enthist-python --release`, then copy
//! `libenthist_py.so` next to your script as `enthist_py.so`.

use enthist::history::{build_history, history_inner, schmidt_rank, Basis, HistoryState};
use enthist::linalg::{DenseOperator, StateVector};
use enthist::monitor::{
    measure_monitors, monitor_matches_history, project_and_extract, run_protocol, MeasurementSpec,
};
use enthist::multicopy::{decompose_history, probability_vpp_closed_form, BlochAngles};
use enthist::scenario::{emit_csv, emit_json, parse_scenario, run_scenario};
use enthist::temporal::{commutator_norm, op_a, op_b, simultaneous_eigenhistories};
use enthist::two_slit::{epr_from_screen, pattern_given_total_spin, SlitAmplitudes};
use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: enthist::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn state_from_vec(amps: Vec<C64>) -> PyResult<StateVector> {
    StateVector::new(amps).map_err(err)
}

fn basis_from_name(name: &str) -> PyResult<Basis> {
    match name {
        "z" => Ok(Basis::z()),
        "x" => Ok(Basis::x()),
        "y" => Ok(Basis::y()),
        other => Err(PyValueError::new_err(format!(
            "unknown basis {other:?} (expect z/x/y)"
        ))),
    }
}

fn matrix_from_rows(rows: Vec<Vec<C64>>) -> PyResult<DenseOperator> {
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let mut op = DenseOperator::zeros(dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            op.set(i, j, v);
        }
    }
    Ok(op)
}

/// The four simultaneous eigenhistories of A = s2 (.) s1, B = s1 (.) s3,
/// as (label, amplitudes) pairs in computational order.
#[pyfunction]
fn eigenhistories() -> PyResult<Vec<(String, Vec<C64>)>> {
    let basis = simultaneous_eigenhistories(&op_a(), &op_b()).map_err(err)?;
    Ok((0..4)
        .map(|k| {
            (
                basis.label_string(k),
                basis.vectors()[k].as_state_vector().amps().to_vec(),
            )
        })
        .collect())
}

/// Max-entry norm of [A, B] for the two fixed temporal operators.
#[pyfunction]
fn temporal_commutator_norm() -> f64 {
    commutator_norm(&op_a(), &op_b())
}

/// History-state amplitudes for (initial, U, B1, B2) with named bases.
#[pyfunction]
fn history_amplitudes(
    initial: Vec<C64>,
    unitary: Vec<Vec<C64>>,
    basis1: &str,
    basis2: &str,
) -> PyResult<Vec<C64>> {
    let h = build_history(
        &state_from_vec(initial)?,
        &matrix_from_rows(unitary)?,
        &basis_from_name(basis1)?,
        &basis_from_name(basis2)?,
    )
    .map_err(err)?;
    Ok(h.as_state_vector().amps().to_vec())
}

/// Schmidt rank (1 or 2) of a dim-4 history vector.
#[pyfunction]
fn history_schmidt_rank(amps: Vec<C64>) -> PyResult<u8> {
    let h = HistoryState::from_state_vector(&state_from_vec(amps)?).map_err(err)?;
    schmidt_rank(&h).map_err(err)
}

/// Run the monitor protocol and post-select; returns (monitor amplitudes,
/// success probability, fidelity against the matching history state).
#[pyfunction]
fn monitor_protocol(
    initial: Vec<C64>,
    unitary: Vec<Vec<C64>>,
    basis1: &str,
    basis2: &str,
) -> PyResult<(Vec<C64>, f64, f64)> {
    let initial = state_from_vec(initial)?;
    let u = matrix_from_rows(unitary)?;
    let b1 = basis_from_name(basis1)?;
    let b2 = basis_from_name(basis2)?;
    let joint = run_protocol(&initial, &u, &b1, &b2).map_err(err)?;
    let result = project_and_extract(&joint, &b2).map_err(err)?;
    let h = build_history(&initial, &u, &b1, &b2).map_err(err)?;
    let fidelity = monitor_matches_history(&result, &h).map_err(err)?;
    Ok((
        result.monitor_state().amps().to_vec(),
        result.success_probability(),
        fidelity,
    ))
}

/// Product-basis monitor readout as (label, probability) pairs.
#[pyfunction]
fn monitor_product_distribution(
    initial: Vec<C64>,
    unitary: Vec<Vec<C64>>,
    basis1: &str,
    basis2: &str,
    later: &str,
    earlier: &str,
) -> PyResult<Vec<(String, f64)>> {
    let joint = run_protocol(
        &state_from_vec(initial)?,
        &matrix_from_rows(unitary)?,
        &basis_from_name(basis1)?,
        &basis_from_name(basis2)?,
    )
    .map_err(err)?;
    let b2 = basis_from_name(basis2)?;
    let result = project_and_extract(&joint, &b2).map_err(err)?;
    let spec = MeasurementSpec::ProductBasis {
        later: basis_from_name(later)?,
        earlier: basis_from_name(earlier)?,
    };
    let dist = measure_monitors(&result, &spec).map_err(err)?;
    Ok(dist.outcomes().to_vec())
}

/// Conditional two-slit intensity for a screen phase delta:
/// (spin-1 pattern, spin-0 pattern).
#[pyfunction]
fn two_slit_patterns(delta: f64) -> PyResult<(f64, f64)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let s = SlitAmplitudes::new(
        C64::from_polar(h, delta / 2.0),
        C64::from_polar(h, -delta / 2.0),
    );
    Ok((
        pattern_given_total_spin(&s, 1).map_err(err)?,
        pattern_given_total_spin(&s, 0).map_err(err)?,
    ))
}

/// Monitor pair left by a screen detection with amplitudes (a, b).
#[pyfunction]
fn epr_pair(a: C64, b: C64) -> PyResult<Vec<C64>> {
    let pair = epr_from_screen(&SlitAmplitudes::new(a, b)).map_err(err)?;
    Ok(pair.state().amps().to_vec())
}

/// Probabilities (P++, P+-, P-+, P--) of |s> (.) |s> over the eigenhistory
/// basis, plus the closed-form P(++) value for comparison.
#[pyfunction]
fn multicopy_probabilities(theta: f64, phi: f64) -> PyResult<(Vec<f64>, f64)> {
    let angles = BlochAngles::new(theta, phi).map_err(err)?;
    let comps = decompose_history(&angles).map_err(err)?;
    Ok((
        comps.iter().map(|x| x.norm_sqr()).collect(),
        probability_vpp_closed_form(&angles),
    ))
}

/// Parse and run a TOML scenario document; returns the report rendered in
/// the requested format ("csv" or "json").
#[pyfunction]
#[pyo3(signature = (text, format = "csv"))]
fn run_scenario_text(text: &str, format: &str) -> PyResult<String> {
    let scenario = parse_scenario(text).map_err(err)?;
    let report = run_scenario(&scenario).map_err(err)?;
    match format {
        "csv" => emit_csv(&report).map_err(err),
        "json" => emit_json(&report).map_err(err),
        other => Err(PyValueError::new_err(format!(
            "unknown format {other:?} (expect csv/json)"
        ))),
    }
}

/// Inner product <h1|h2> of two dim-4 history vectors.
#[pyfunction]
fn history_overlap(h1: Vec<C64>, h2: Vec<C64>) -> PyResult<C64> {
    let a = HistoryState::from_state_vector(&state_from_vec(h1)?).map_err(err)?;
    let b = HistoryState::from_state_vector(&state_from_vec(h2)?).map_err(err)?;
    Ok(history_inner(&a, &b))
}

#[pymodule]
fn enthist_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(eigenhistories, m)?)?;
    m.add_function(wrap_pyfunction!(temporal_commutator_norm, m)?)?;
    m.add_function(wrap_pyfunction!(history_amplitudes, m)?)?;
    m.add_function(wrap_pyfunction!(history_schmidt_rank, m)?)?;
    m.add_function(wrap_pyfunction!(monitor_protocol, m)?)?;
    m.add_function(wrap_pyfunction!(monitor_product_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(two_slit_patterns, m)?)?;
    m.add_function(wrap_pyfunction!(epr_pair, m)?)?;
    m.add_function(wrap_pyfunction!(multicopy_probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario_text, m)?)?;
    m.add_function(wrap_pyfunction!(history_overlap, m)?)?;
    Ok(())
}
