//! Temporal operators built from per-time-slot factors and their simultaneous
//! eigenhistory bases.

use crate::error::{Error, Result};
use crate::history::{schmidt_rank, HistoryState};
use crate::linalg::{pauli_x, pauli_y, pauli_z, DenseOperator, StateVector, TOL_CHAIN};
use num_complex::Complex64 as C64;

/// Eigenvalue sign label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

pub const SIGN_PAIRS: [(Sign, Sign); 4] = [
    (Sign::Plus, Sign::Plus),
    (Sign::Plus, Sign::Minus),
    (Sign::Minus, Sign::Plus),
    (Sign::Minus, Sign::Minus),
];

/// Operator on history space with one 2x2 factor per time slot
/// (later factor acts at t2, the leftmost slot).
#[derive(Clone, Debug)]
pub struct TemporalOperator {
    later: DenseOperator,
    earlier: DenseOperator,
    dense: DenseOperator,
    hermitian: bool,
}

impl TemporalOperator {
    pub fn later(&self) -> &DenseOperator {
        &self.later
    }

    pub fn earlier(&self) -> &DenseOperator {
        &self.earlier
    }

    pub fn dense(&self) -> &DenseOperator {
        &self.dense
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }
}

pub fn make_temporal(later: DenseOperator, earlier: DenseOperator) -> Result<TemporalOperator> {
    if later.dim() != 2 || earlier.dim() != 2 {
        return Err(Error::DimensionMismatch(
            "temporal operator factors must be 2x2".into(),
        ));
    }
    let dense = later.kron(&earlier);
    let hermitian = dense.is_hermitian(crate::linalg::TOL_EXACT);
    Ok(TemporalOperator {
        later,
        earlier,
        dense,
        hermitian,
    })
}

/// A = sigma_2 (.) sigma_1.
pub fn op_a() -> TemporalOperator {
    make_temporal(pauli_y(), pauli_x()).expect("2x2")
}

/// B = sigma_1 (.) sigma_3.
pub fn op_b() -> TemporalOperator {
    make_temporal(pauli_x(), pauli_z()).expect("2x2")
}

/// Max-entry magnitude of PQ - QP.
pub fn commutator_norm(p: &TemporalOperator, q: &TemporalOperator) -> f64 {
    let pq = p.dense.matmul(&q.dense).expect("4x4");
    let qp = q.dense.matmul(&p.dense).expect("4x4");
    pq.sub(&qp).expect("4x4").max_abs()
}

/// Apply the dense operator to a history state.
pub fn apply_temporal(p: &TemporalOperator, h: &HistoryState) -> Result<HistoryState> {
    let v = p.dense.matvec(&h.as_state_vector())?;
    HistoryState::from_state_vector(&v)
}

/// Four orthonormal simultaneous eigenhistories of a commuting pair, labeled
/// by eigenvalue signs (lambda_P, lambda_Q).
#[derive(Clone, Debug)]
pub struct EigenhistoryBasis {
    vectors: [HistoryState; 4],
    labels: [(Sign, Sign); 4],
}

impl EigenhistoryBasis {
    pub fn vectors(&self) -> &[HistoryState; 4] {
        &self.vectors
    }

    pub fn labels(&self) -> &[(Sign, Sign); 4] {
        &self.labels
    }

    /// Vector with the given label pair.
    pub fn vector(&self, p: Sign, q: Sign) -> &HistoryState {
        let idx = self
            .labels
            .iter()
            .position(|&l| l == (p, q))
            .expect("all four label pairs present");
        &self.vectors[idx]
    }

    pub fn label_string(&self, k: usize) -> String {
        let (p, q) = self.labels[k];
        format!("v({}{})", p.symbol(), q.symbol())
    }
}

fn check_pm_doubly_degenerate(op: &DenseOperator) -> Result<()> {
    let (vals, _) = op.eig_hermitian()?;
    let expected = [-1.0, -1.0, 1.0, 1.0];
    if vals.len() != 4 || vals.iter().zip(expected).any(|(v, e)| (v - e).abs() > 1e-8) {
        return Err(Error::UnsupportedInput(
            "operator spectrum must be {+1, -1}, each doubly degenerate".into(),
        ));
    }
    Ok(())
}

/// First amplitude above threshold made real positive.
fn canonical_phase(v: &StateVector) -> StateVector {
    for i in 0..v.dim() {
        let a = v.amp(i);
        if a.norm() > 1e-10 {
            let phase = a / a.norm();
            return v.scaled(phase.conj());
        }
    }
    v.clone()
}

fn expectation_sign(op: &DenseOperator, v: &StateVector) -> Result<Sign> {
    let ev = v.inner(&op.matvec(v)?)?.re;
    if (ev - 1.0).abs() <= 1e-6 {
        Ok(Sign::Plus)
    } else if (ev + 1.0).abs() <= 1e-6 {
        Ok(Sign::Minus)
    } else {
        Err(Error::UnsupportedInput(format!(
            "joint eigenvector has expectation {ev}, not +-1"
        )))
    }
}

/// Simultaneous eigenhistories of two commuting hermitian temporal operators
/// with {+1, -1} doubly degenerate spectra.
///
/// Diagonalizes P + 3Q (joint sectors take the four distinct values
/// +-4, +-2 in the generic case); falls back to sector projectors
/// (1 +- P)/2 (1 +- Q)/2 if that combination is degenerate. Each vector's
/// phase is fixed by making its first nonzero amplitude real positive.
pub fn simultaneous_eigenhistories(
    p: &TemporalOperator,
    q: &TemporalOperator,
) -> Result<EigenhistoryBasis> {
    if !p.hermitian || !q.hermitian {
        return Err(Error::ContractViolation(
            "simultaneous eigenhistories require hermitian operators".into(),
        ));
    }
    if commutator_norm(p, q) >= TOL_CHAIN {
        return Err(Error::ContractViolation(
            "operators do not commute".into(),
        ));
    }
    check_pm_doubly_degenerate(&p.dense)?;
    check_pm_doubly_degenerate(&q.dense)?;

    let combo = p.dense.add(&q.dense.scaled(C64::new(3.0, 0.0)))?;
    let (vals, vecs) = combo.eig_hermitian()?;
    let distinct = vals.windows(2).all(|w| (w[1] - w[0]).abs() > 1e-6);

    let candidates: Vec<StateVector> = if distinct {
        vecs
    } else {
        // Sector projectors; each must be rank 1 in the supported case.
        let id = DenseOperator::identity(4);
        let mut out = Vec::with_capacity(4);
        for (sp, sq) in SIGN_PAIRS {
            let pp = id
                .add(&p.dense.scaled(C64::new(sp.value(), 0.0)))?
                .scaled(C64::new(0.5, 0.0));
            let pq = id
                .add(&q.dense.scaled(C64::new(sq.value(), 0.0)))?
                .scaled(C64::new(0.5, 0.0));
            let proj = pp.matmul(&pq)?;
            if (proj.trace().re - 1.0).abs() > 1e-8 {
                return Err(Error::UnsupportedInput(
                    "joint eigenvalue sectors are not all one-dimensional".into(),
                ));
            }
            // Column of largest norm spans the rank-1 sector.
            let mut best = StateVector::basis(4, 0);
            let mut best_norm = -1.0;
            for j in 0..4 {
                let col = StateVector::new((0..4).map(|i| proj.get(i, j)).collect())?;
                if col.norm() > best_norm {
                    best_norm = col.norm();
                    best = col;
                }
            }
            out.push(best.normalized()?);
        }
        out
    };

    // Label every candidate and slot it into canonical (P, Q) sign order.
    let mut slots: [Option<HistoryState>; 4] = [None, None, None, None];
    for v in candidates {
        let sp = expectation_sign(&p.dense, &v)?;
        let sq = expectation_sign(&q.dense, &v)?;
        // Verify the eigen-equations, not just expectations.
        for (op, s) in [(&p.dense, sp), (&q.dense, sq)] {
            let resid = op
                .matvec(&v)?
                .add(&v.scaled(C64::new(-s.value(), 0.0)))?;
            if resid.norm() > TOL_CHAIN {
                return Err(Error::UnsupportedInput(
                    "candidate vector is not a simultaneous eigenvector".into(),
                ));
            }
        }
        let idx = SIGN_PAIRS.iter().position(|&l| l == (sp, sq)).unwrap();
        if slots[idx].is_some() {
            return Err(Error::UnsupportedInput(
                "duplicate joint eigenvalue sector".into(),
            ));
        }
        slots[idx] = Some(HistoryState::from_state_vector(&canonical_phase(&v))?);
    }
    let vectors: Vec<HistoryState> = slots.into_iter().map(|s| s.unwrap()).collect();
    Ok(EigenhistoryBasis {
        vectors: vectors.try_into().unwrap(),
        labels: SIGN_PAIRS,
    })
}

/// Every eigenhistory of the (A, B) pair is temporally entangled.
pub fn all_entangled(basis: &EigenhistoryBasis) -> Result<bool> {
    for v in basis.vectors() {
        if schmidt_rank(v)? != 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::history::{history_inner, odot};
    use crate::linalg::{identity_op, ket_zm, ket_zp, TOL_EXACT};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// The four coefficient vectors, frozen from the eigenvalue-equation
    /// oracle (direct 4x4 matrix-vector multiplication fixed the
    /// subscript-to-eigenvalue mapping as (lambda_A, lambda_B)).
    pub(crate) fn reference_vectors() -> [[C64; 4]; 4] {
        [
            [c(0.5, 0.0), c(0.0, -0.5), c(0.5, 0.0), c(0.0, 0.5)], // (+,+)
            [c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, 0.5)], // (+,-)
            [c(0.5, 0.0), c(0.0, 0.5), c(0.5, 0.0), c(0.0, -0.5)], // (-,+)
            [c(0.5, 0.0), c(0.0, -0.5), c(-0.5, 0.0), c(0.0, -0.5)], // (-,-)
        ]
    }

    #[test]
    fn reference_vectors_satisfy_eigen_equations() {
        // Oracle: A v = lambda_A v and B v = lambda_B v by direct matvec.
        let a = op_a();
        let b = op_b();
        for (k, amps) in reference_vectors().iter().enumerate() {
            let v = HistoryState::from_amplitudes(*amps).unwrap();
            let (sa, sb) = SIGN_PAIRS[k];
            let av = apply_temporal(&a, &v).unwrap();
            let bv = apply_temporal(&b, &v).unwrap();
            for i in 0..4 {
                assert!((av.amps()[i] - v.amps()[i] * sa.value()).norm() <= TOL_EXACT);
                assert!((bv.amps()[i] - v.amps()[i] * sb.value()).norm() <= TOL_EXACT);
            }
        }
    }

    #[test]
    fn make_temporal_cases() {
        let a = op_a();
        assert!(a.is_hermitian());
        assert_eq!(a.dense(), &pauli_y().kron(&pauli_x()));
        let b = op_b();
        assert_eq!(b.dense(), &pauli_x().kron(&pauli_z()));
        let id = make_temporal(identity_op(2), identity_op(2)).unwrap();
        assert_eq!(id.dense(), &identity_op(4));
    }

    #[test]
    fn commutators() {
        assert!(commutator_norm(&op_a(), &op_b()) <= TOL_EXACT);
        assert!(commutator_norm(&op_a(), &op_a()) <= TOL_EXACT);
        // sigma_1 sigma_3 - sigma_3 sigma_1 = -2i sigma_2: max entry 2.
        let p = make_temporal(pauli_x(), identity_op(2)).unwrap();
        let q = make_temporal(pauli_z(), identity_op(2)).unwrap();
        assert!((commutator_norm(&p, &q) - 2.0).abs() <= TOL_EXACT);
    }

    #[test]
    fn factor_anticommutation_with_operator_commutation() {
        for (f, g) in [(pauli_y(), pauli_x()), (pauli_x(), pauli_z())] {
            let anti = f.matmul(&g).unwrap().add(&g.matmul(&f).unwrap()).unwrap();
            assert!(anti.max_abs() <= TOL_EXACT);
        }
        assert!(commutator_norm(&op_a(), &op_b()) < TOL_EXACT);
    }

    #[test]
    fn eigenhistories_match_reference() {
        let basis = simultaneous_eigenhistories(&op_a(), &op_b()).unwrap();
        for (k, expect) in reference_vectors().iter().enumerate() {
            let got = basis.vectors()[k].amps();
            for i in 0..4 {
                assert!(
                    (got[i] - expect[i]).norm() <= TOL_CHAIN,
                    "vector {k} slot {i}: {:?} vs {:?}",
                    got[i],
                    expect[i]
                );
            }
        }
    }

    #[test]
    fn eigenhistories_diagonal_pair_fallback_free() {
        // (sigma_3 (.) 1, 1 (.) sigma_3) is already diagonal; joint basis is
        // the computational product basis.
        let p = make_temporal(pauli_z(), identity_op(2)).unwrap();
        let q = make_temporal(identity_op(2), pauli_z()).unwrap();
        let basis = simultaneous_eigenhistories(&p, &q).unwrap();
        let expect = [
            odot(&ket_zp(), &ket_zp()).unwrap(),
            odot(&ket_zp(), &ket_zm()).unwrap(),
            odot(&ket_zm(), &ket_zp()).unwrap(),
            odot(&ket_zm(), &ket_zm()).unwrap(),
        ];
        for (v, e) in basis.vectors().iter().zip(&expect) {
            assert!((history_inner(v, e).norm() - 1.0).abs() <= TOL_CHAIN);
        }
    }

    #[test]
    fn eigenhistories_reject_non_commuting() {
        let p = make_temporal(pauli_x(), identity_op(2)).unwrap();
        let q = make_temporal(pauli_z(), identity_op(2)).unwrap();
        assert!(matches!(
            simultaneous_eigenhistories(&p, &q),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn eigenhistories_reject_wrong_spectrum() {
        let p = make_temporal(identity_op(2), identity_op(2)).unwrap();
        assert!(matches!(
            simultaneous_eigenhistories(&p, &op_a()),
            Err(Error::UnsupportedInput(_)) | Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn apply_temporal_cases() {
        // A (|up> (.) |up>) = i |down> (.) |down>: sigma_2|up> = i|down>, sigma_1|up> = |down>.
        let h = odot(&ket_zp(), &ket_zp()).unwrap();
        let ah = apply_temporal(&op_a(), &h).unwrap();
        let expect = odot(&ket_zm(), &ket_zm()).unwrap().scaled(c(0.0, 1.0));
        for i in 0..4 {
            assert!((ah.amps()[i] - expect.amps()[i]).norm() <= TOL_EXACT);
        }
        let id = make_temporal(identity_op(2), identity_op(2)).unwrap();
        let ih = apply_temporal(&id, &h).unwrap();
        assert_eq!(ih.amps(), h.amps());
    }

    #[test]
    fn projector_completeness() {
        let id = identity_op(4);
        let mut total = DenseOperator::zeros(4);
        for (sa, sb) in SIGN_PAIRS {
            let pa = id
                .add(&op_a().dense().scaled(c(sa.value(), 0.0)))
                .unwrap()
                .scaled(c(0.5, 0.0));
            let pb = id
                .add(&op_b().dense().scaled(c(sb.value(), 0.0)))
                .unwrap()
                .scaled(c(0.5, 0.0));
            total = total.add(&pa.matmul(&pb).unwrap()).unwrap();
        }
        assert!(total.sub(&id).unwrap().max_abs() <= TOL_EXACT);
    }

    #[test]
    fn eigenbasis_resolution_and_entanglement() {
        let basis = simultaneous_eigenhistories(&op_a(), &op_b()).unwrap();
        let mut total = DenseOperator::zeros(4);
        for v in basis.vectors() {
            let sv = v.as_state_vector();
            total = total.add(&sv.outer(&sv)).unwrap();
        }
        assert!(total.sub(&identity_op(4)).unwrap().max_abs() <= TOL_CHAIN);
        assert!(all_entangled(&basis).unwrap());
    }
}
