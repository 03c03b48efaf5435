//! Two-copy protocol for measuring temporal operators on product histories.
//!
//! A system prepared in |s> at t1 evolves trivially to t2; a second copy
//! stands in for the earlier time slot. Joint ordering (slowest first):
//! copy_b (later slot), copy_a (earlier slot), monitor m2, monitor m1.
//! m2 couples to sigma_2 on copy_b, m1 to sigma_1 on copy_a; a monitor ends
//! in |0> for the +1 branch of its operator and |1> for the -1 branch.

use crate::error::{Error, Result};
use crate::history::{history_inner, HistoryState};
use crate::linalg::{pauli_x, pauli_y, DenseOperator, StateVector, TOL_EXACT};
use crate::temporal::{op_a, op_b, simultaneous_eigenhistories, Sign, SIGN_PAIRS};
use num_complex::Complex64 as C64;

/// Bloch angles theta in [0, pi], phi in [0, 2 pi).
#[derive(Clone, Copy, Debug)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::UndefinedInput("Bloch angles must be finite".into()));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::UnsupportedInput(format!(
                "theta must lie in [0, pi], got {theta}"
            )));
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) && phi != 0.0 {
            return Err(Error::UnsupportedInput(format!(
                "phi must lie in [0, 2 pi), got {phi}"
            )));
        }
        Ok(BlochAngles { theta, phi })
    }

    /// (cos(theta/2) e^{i phi/2}, sin(theta/2) e^{-i phi/2}).
    pub fn state(&self) -> StateVector {
        let half = self.theta / 2.0;
        StateVector::new(vec![
            C64::from_polar(half.cos(), self.phi / 2.0),
            C64::from_polar(half.sin(), -self.phi / 2.0),
        ])
        .expect("finite amplitudes")
    }
}

/// Product history |s> (later slot) odot |s> (earlier slot) as a dim-4
/// state, both copies in the same single-qubit state.
pub fn diagonal_embed(s: &StateVector) -> Result<HistoryState> {
    if s.dim() != 2 {
        return Err(Error::DimensionMismatch("expected a qubit state".into()));
    }
    HistoryState::from_state_vector(&s.kron(s))
}

/// Full 16-dim state after both monitor couplings, monitors starting |0 0>.
/// Branch structure: sum over signs (p, q) of
/// [(1 + p sigma_2)/2 |s_b>] (x) [(1 + q sigma_1)/2 |s_a>] (x) |m2 m1>,
/// with m2 = 0 iff p = +, m1 = 0 iff q = +.
pub fn evolve_with_monitors(s_b: &StateVector, s_a: &StateVector) -> Result<StateVector> {
    if s_b.dim() != 2 || s_a.dim() != 2 {
        return Err(Error::DimensionMismatch("expected qubit states".into()));
    }
    let id = DenseOperator::identity(2);
    let half = C64::new(0.5, 0.0);
    let branch = |op: &DenseOperator, sign: Sign, s: &StateVector| -> Result<StateVector> {
        op.scaled(C64::new(sign.value(), 0.0))
            .add(&id)?
            .scaled(half)
            .matvec(s)
    };
    let mut out = StateVector::new(vec![C64::ZERO; 16])?;
    for &(p, q) in SIGN_PAIRS.iter() {
        let b_part = branch(&pauli_y(), p, s_b)?;
        let a_part = branch(&pauli_x(), q, s_a)?;
        let m2 = if p == Sign::Plus { 0 } else { 1 };
        let m1 = if q == Sign::Plus { 0 } else { 1 };
        let monitor = StateVector::basis(4, m2 * 2 + m1);
        out = out.add(&b_part.kron(&a_part).kron(&monitor))?;
    }
    Ok(out)
}

/// Project the monitors onto the even-parity (sign = +1: m in {00, 11}) or
/// odd-parity (sign = -1: m in {01, 10}) sector and return the
/// unnormalized copy-pair vector summed over that sector, plus the sector
/// probability.
pub fn project_monitor_pair(joint: &StateVector, sign: Sign) -> Result<(StateVector, f64)> {
    if joint.dim() != 16 {
        return Err(Error::DimensionMismatch("expected the 16-dim joint state".into()));
    }
    let sector: [usize; 2] = match sign {
        Sign::Plus => [0, 3],
        Sign::Minus => [1, 2],
    };
    // Probability is the sum over the sector of the per-branch norms; the
    // summed vector encodes the operator identity, not the probability.
    let mut prob = 0.0;
    let mut summed = vec![C64::ZERO; 4];
    for &m in sector.iter() {
        let mut branch_norm = 0.0;
        for k in 0..4 {
            let amp = joint.amp(k * 4 + m);
            branch_norm += amp.norm_sqr();
            summed[k] += amp;
        }
        prob += branch_norm;
    }
    Ok((StateVector::new(summed)?, prob))
}

/// (1 + sign * sigma_2 (x) sigma_1) / 2 acting on the copy pair.
pub fn temporal_projector(sign: Sign) -> DenseOperator {
    let half = C64::new(0.5, 0.0);
    DenseOperator::identity(4)
        .add(&pauli_y().kron(&pauli_x()).scaled(C64::new(sign.value(), 0.0)))
        .expect("4x4")
        .scaled(half)
}

/// Components of |s> odot |s> in the simultaneous eigenhistory basis of
/// A = sigma_2 odot sigma_1, B = sigma_1 odot sigma_3. Order matches
/// `SIGN_PAIRS`: (++, +-, -+, --).
pub fn decompose_history(angles: &BlochAngles) -> Result<[C64; 4]> {
    let basis = simultaneous_eigenhistories(&op_a(), &op_b())?;
    let h = diagonal_embed(&angles.state())?;
    let mut out = [C64::ZERO; 4];
    for (k, &(p, q)) in SIGN_PAIRS.iter().enumerate() {
        out[k] = history_inner(basis.vector(p, q), &h);
    }
    Ok(out)
}

/// Probability of the (++) outcome from the eigenhistory decomposition.
pub fn probability_vpp(angles: &BlochAngles) -> Result<f64> {
    Ok(decompose_history(angles)?[0].norm_sqr())
}

/// Closed-form expression for the (++) probability,
/// 1/4 + (sin theta / 8) (cos theta (cos phi + sin phi)
///                        + (sin theta / 2) sin 2 phi).
/// Retained for comparison; it disagrees with `probability_vpp` away from
/// special angles (see `vpp_closed_form_disagreement` test), so the
/// decomposition route is authoritative.
pub fn probability_vpp_closed_form(angles: &BlochAngles) -> f64 {
    let (t, p) = (angles.theta, angles.phi);
    0.25 + (t.sin() / 8.0) * (t.cos() * (p.cos() + p.sin()) + 0.5 * t.sin() * (2.0 * p).sin())
}

/// Reduced density matrix of the monitor pair (m2, m1) after projecting the
/// copy pair onto a given history (unnormalized projection, then trace out
/// copies and normalize).
pub fn monitor_density_after_system_projection(
    joint: &StateVector,
    history: &HistoryState,
) -> Result<DenseOperator> {
    if joint.dim() != 16 {
        return Err(Error::DimensionMismatch("expected the 16-dim joint state".into()));
    }
    let hv = history.as_state_vector();
    let mut monitor_branches = vec![C64::ZERO; 4];
    for m in 0..4 {
        let mut acc = C64::ZERO;
        for k in 0..4 {
            acc += hv.amp(k).conj() * joint.amp(k * 4 + m);
        }
        monitor_branches[m] = acc;
    }
    let v = StateVector::new(monitor_branches)?;
    if v.norm_sqr() <= TOL_EXACT * TOL_EXACT {
        return Err(Error::PostSelectionImpossible);
    }
    let v = v.normalized()?;
    Ok(v.outer(&v))
}
