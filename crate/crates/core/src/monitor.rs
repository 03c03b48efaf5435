//! Single-system monitor-qubit protocol: couple two monitor qubits at t1 and
//! t2 with controlled-copy gates, evolve, post-select the main system, and
//! measure the monitor register in product or entangled bases.
//!
//! Joint register ordering: (main, later monitor, earlier monitor), main
//! slowest. The extracted monitor register is ordered (later, earlier).

use crate::dist::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::history::{Basis, HistoryState};
use crate::linalg::{DenseOperator, StateVector, TOL_CHAIN, TOL_EXACT};
use num_complex::Complex64 as C64;

/// Which monitor a coupling gate targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonitorSlot {
    /// Monitor coupled at t2; qubit 1 of the joint register.
    Later,
    /// Monitor coupled at t1; qubit 2 of the joint register.
    Earlier,
}

impl MonitorSlot {
    fn qubit(self) -> usize {
        match self {
            MonitorSlot::Later => 1,
            MonitorSlot::Earlier => 2,
        }
    }
}

/// Pure state of main (x) monitor2 (x) monitor1.
#[derive(Clone, Debug)]
pub struct JointState {
    state: StateVector,
}

impl JointState {
    pub fn new(state: StateVector) -> Result<Self> {
        if state.dim() != 8 {
            return Err(Error::DimensionMismatch(format!(
                "joint state needs dim 8, got {}",
                state.dim()
            )));
        }
        Ok(JointState { state })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }
}

/// Post-selected monitor register plus the probability of the post-selection.
#[derive(Clone, Debug)]
pub struct ProtocolResult {
    monitor_state: StateVector,
    success_probability: f64,
}

impl ProtocolResult {
    pub fn monitor_state(&self) -> &StateVector {
        &self.monitor_state
    }

    pub fn success_probability(&self) -> f64 {
        self.success_probability
    }
}

/// How to read out the dim-4 monitor register.
#[derive(Clone, Debug)]
pub enum MeasurementSpec {
    /// Product basis later (x) earlier.
    ProductBasis { later: Basis, earlier: Basis },
    /// Four mutually orthonormal dim-4 vectors with labels.
    OrthonormalSet {
        vectors: Vec<StateVector>,
        labels: Vec<String>,
    },
    /// Outcomes are distinct eigenvalues with eigenspace-projection probabilities.
    HermitianObservable(DenseOperator),
}

impl MeasurementSpec {
    pub fn orthonormal_set(vectors: Vec<StateVector>, labels: Vec<String>) -> Result<Self> {
        Self::orthonormal_set_with_tol(vectors, labels, TOL_CHAIN)
    }

    pub fn orthonormal_set_with_tol(
        vectors: Vec<StateVector>,
        labels: Vec<String>,
        tol: f64,
    ) -> Result<Self> {
        if vectors.len() != 4 || labels.len() != 4 {
            return Err(Error::DimensionMismatch(
                "orthonormal set needs exactly four labeled vectors".into(),
            ));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.dim() != 4 {
                return Err(Error::DimensionMismatch("set vectors must be dim 4".into()));
            }
            for (j, w) in vectors.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (v.inner(w)?.norm() - expect).abs() > tol {
                    return Err(Error::ContractViolation(
                        "measurement set is not orthonormal".into(),
                    ));
                }
            }
        }
        Ok(MeasurementSpec::OrthonormalSet { vectors, labels })
    }

    pub fn hermitian_observable(op: DenseOperator) -> Result<Self> {
        if op.dim() != 4 {
            return Err(Error::DimensionMismatch("observable must be 4x4".into()));
        }
        if !op.is_hermitian(TOL_CHAIN) {
            return Err(Error::ContractViolation("observable must be hermitian".into()));
        }
        Ok(MeasurementSpec::HermitianObservable(op))
    }
}

/// Apply a two-qubit gate to qubits (qa, qb) of an n-qubit register
/// (qubit 0 slowest; qa indexes the gate's higher bit).
fn apply_two_qubit(
    state: &StateVector,
    n_qubits: usize,
    gate: &DenseOperator,
    qa: usize,
    qb: usize,
) -> StateVector {
    let dim = 1usize << n_qubits;
    debug_assert_eq!(state.dim(), dim);
    debug_assert_eq!(gate.dim(), 4);
    let sa = 1usize << (n_qubits - 1 - qa);
    let sb = 1usize << (n_qubits - 1 - qb);
    let mut out = vec![C64::ZERO; dim];
    for idx in 0..dim {
        if idx & sa != 0 || idx & sb != 0 {
            continue;
        }
        // idx has zeros at qa, qb; gather the 4 amplitudes on that fiber.
        let fiber = [idx, idx | sb, idx | sa, idx | sa | sb];
        for r in 0..4 {
            let mut acc = C64::ZERO;
            for c in 0..4 {
                acc += gate.get(r, c) * state.amp(fiber[c]);
            }
            out[fiber[r]] = acc;
        }
    }
    StateVector::new(out).expect("finite")
}

fn apply_single_qubit(
    state: &StateVector,
    n_qubits: usize,
    gate: &DenseOperator,
    q: usize,
) -> StateVector {
    let dim = 1usize << n_qubits;
    let s = 1usize << (n_qubits - 1 - q);
    let mut out = vec![C64::ZERO; dim];
    for idx in 0..dim {
        if idx & s != 0 {
            continue;
        }
        let lo = state.amp(idx);
        let hi = state.amp(idx | s);
        out[idx] = gate.get(0, 0) * lo + gate.get(0, 1) * hi;
        out[idx | s] = gate.get(1, 0) * lo + gate.get(1, 1) * hi;
    }
    StateVector::new(out).expect("finite")
}

/// Controlled-copy gate in `basis` on (control, target): |x_i>|x_j> ->
/// |x_i>|x_{j xor i}>, the CNOT-style unitary extension of the copy rule
/// |x>|fiducial> -> |x>|x> with fiducial = first basis vector.
fn controlled_copy_gate(basis: &Basis) -> DenseOperator {
    let mut gate = DenseOperator::zeros(4);
    for i in 0..2 {
        let ctrl = basis.vector(i).outer(basis.vector(i));
        let mut tgt = DenseOperator::zeros(2);
        for j in 0..2 {
            tgt = tgt
                .add(&basis.vector(j ^ i).outer(basis.vector(j)))
                .expect("2x2");
        }
        gate = gate.add(&ctrl.kron(&tgt)).expect("4x4");
    }
    gate
}

/// Couple a monitor to the main system with a controlled copy in `basis`.
///
/// The monitor must still be in its fiducial state (the first basis vector).
pub fn couple_monitor(joint: &JointState, basis: &Basis, slot: MonitorSlot) -> Result<JointState> {
    let q = slot.qubit();
    // Reduced state of the monitor must be the fiducial projector.
    let rho = joint.state.outer(&joint.state);
    let red = rho.partial_trace(&[2, 2, 2], &[q])?;
    let fid = basis.first();
    let overlap = fid.inner(&red.matvec(fid)?)?.re;
    if (overlap - red.trace().re).abs() > TOL_CHAIN {
        return Err(Error::ContractViolation(
            "monitor is not in its fiducial state before coupling".into(),
        ));
    }
    let gate = controlled_copy_gate(basis);
    let out = apply_two_qubit(&joint.state, 3, &gate, 0, q);
    JointState::new(out)
}

/// Full protocol: couple at t1 in `b1`, evolve the main system with `u`,
/// couple at t2 in `b2`.
pub fn run_protocol(
    initial: &StateVector,
    u: &DenseOperator,
    b1: &Basis,
    b2: &Basis,
) -> Result<JointState> {
    if initial.dim() != 2 || u.dim() != 2 {
        return Err(Error::DimensionMismatch("protocol works on a single qubit".into()));
    }
    if !u.is_unitary(TOL_CHAIN) {
        return Err(Error::ContractViolation("evolution operator must be unitary".into()));
    }
    if !initial.is_unit(TOL_CHAIN) {
        return Err(Error::ContractViolation("initial state must be unit-norm".into()));
    }
    let joint = JointState::new(initial.kron(b2.first()).kron(b1.first()))?;
    let joint = couple_monitor(&joint, b1, MonitorSlot::Earlier)?;
    let evolved = apply_single_qubit(joint.state(), 3, u, 0);
    let joint = couple_monitor(&JointState::new(evolved)?, b2, MonitorSlot::Later)?;
    Ok(joint)
}

/// Project the main system onto (|b> + |b_bar>)/sqrt2, renormalize, and trace
/// the main system out, leaving the pure monitor register.
pub fn project_and_extract(joint: &JointState, b2: &Basis) -> Result<ProtocolResult> {
    let probe = b2
        .first()
        .add(b2.second())?
        .scaled(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    let mut amps = vec![C64::ZERO; 4];
    for k in 0..4 {
        let mut acc = C64::ZERO;
        for i in 0..2 {
            acc += probe.amp(i).conj() * joint.state.amp(i * 4 + k);
        }
        amps[k] = acc;
    }
    let branch = StateVector::new(amps)?;
    let success_probability = branch.norm_sqr();
    if success_probability <= TOL_EXACT {
        return Err(Error::PostSelectionImpossible);
    }
    Ok(ProtocolResult {
        monitor_state: branch.normalized()?,
        success_probability,
    })
}

/// Squared overlap between the monitor register and a (normalized) history
/// state: 1 certifies the product-state/history-state isomorphism.
pub fn monitor_matches_history(result: &ProtocolResult, h: &HistoryState) -> Result<f64> {
    let hn = h.normalized()?.as_state_vector();
    Ok(result.monitor_state.inner(&hn)?.norm_sqr())
}

/// Group eigenvalues within `tol`, returning (representative value, member indices).
pub(crate) fn group_eigenvalues(vals: &[f64], tol: f64) -> Vec<(f64, Vec<usize>)> {
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match groups.last_mut() {
            Some((rep, members)) if (v - *rep).abs() <= tol => members.push(i),
            _ => groups.push((v, vec![i])),
        }
    }
    groups
}

/// Born probabilities of the monitor register under a measurement spec.
pub fn measure_monitors(
    result: &ProtocolResult,
    spec: &MeasurementSpec,
) -> Result<OutcomeDistribution> {
    let m = &result.monitor_state;
    let mut outcomes = Vec::new();
    match spec {
        MeasurementSpec::ProductBasis { later, earlier } => {
            for i in 0..2 {
                for j in 0..2 {
                    let v = later.vector(i).kron(earlier.vector(j));
                    let p = v.inner(m)?.norm_sqr();
                    let label = format!("{}(x){}", later.vector_label(i), earlier.vector_label(j));
                    outcomes.push((label, p));
                }
            }
        }
        MeasurementSpec::OrthonormalSet { vectors, labels } => {
            for (v, label) in vectors.iter().zip(labels) {
                outcomes.push((label.clone(), v.inner(m)?.norm_sqr()));
            }
        }
        MeasurementSpec::HermitianObservable(op) => {
            let (vals, vecs) = op.eig_hermitian()?;
            for (rep, members) in group_eigenvalues(&vals, 1e-8) {
                let p: f64 = members
                    .iter()
                    .map(|&k| vecs[k].inner(m).map(|c| c.norm_sqr()))
                    .sum::<Result<f64>>()?;
                outcomes.push((format!("lambda={rep:+.6}"), p));
            }
        }
    }
    // Clamp tiny negative rounding before the distribution invariant check.
    for (_, p) in &mut outcomes {
        if *p < 0.0 && *p > -1e-12 {
            *p = 0.0;
        }
    }
    OutcomeDistribution::new(outcomes)
}

/// Reinterpret an outcome of a measurement spec as the history state that now
/// best describes the system's past.
pub fn collapse_past(spec: &MeasurementSpec, outcome: usize) -> Result<HistoryState> {
    match spec {
        MeasurementSpec::ProductBasis { later, earlier } => {
            if outcome >= 4 {
                return Err(Error::DimensionMismatch("product outcome index out of range".into()));
            }
            let (i, j) = (outcome / 2, outcome % 2);
            crate::history::odot(later.vector(i), earlier.vector(j))
        }
        MeasurementSpec::OrthonormalSet { vectors, .. } => {
            let v = vectors
                .get(outcome)
                .ok_or_else(|| Error::DimensionMismatch("set outcome index out of range".into()))?;
            HistoryState::from_state_vector(v)
        }
        MeasurementSpec::HermitianObservable(op) => {
            let (vals, vecs) = op.eig_hermitian()?;
            let groups = group_eigenvalues(&vals, 1e-8);
            let (_, members) = groups
                .get(outcome)
                .ok_or_else(|| Error::DimensionMismatch("eigenvalue index out of range".into()))?;
            if members.len() != 1 {
                return Err(Error::UnsupportedInput(
                    "degenerate eigenvalue sector has no single past description".into(),
                ));
            }
            HistoryState::from_state_vector(&vecs[members[0]])
        }
    }
}
