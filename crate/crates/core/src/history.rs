//! History states on the two-slot temporal product space.
//!
//! The leftmost slot is the latest time: amplitude index `2*i2 + i1` carries
//! the component |i2> (at t2) combined with |i1> (at t1). Numerically the
//! temporal product coincides with the ordinary Kronecker product; the type
//! carries the temporal role.

use crate::error::{Error, Result};
use crate::linalg::{orthogonal_complement, DenseOperator, StateVector, TOL_CHAIN, TOL_EXACT};
use crate::linalg::{bloch, ket_xm, ket_xp, ket_ym, ket_yp, ket_zm, ket_zp};
use num_complex::Complex64 as C64;

/// An ordered orthonormal pair of single-qubit states.
#[derive(Clone, Debug)]
pub struct Basis {
    first: StateVector,
    second: StateVector,
    label: String,
}

impl Basis {
    pub fn new(first: StateVector, second: StateVector, label: &str) -> Result<Self> {
        if first.dim() != 2 || second.dim() != 2 {
            return Err(Error::DimensionMismatch("basis vectors must be 2-dim".into()));
        }
        if !first.is_unit(TOL_EXACT) || !second.is_unit(TOL_EXACT) {
            return Err(Error::ContractViolation("basis vectors must be unit-norm".into()));
        }
        if first.inner(&second)?.norm() > TOL_EXACT {
            return Err(Error::ContractViolation("basis vectors must be orthogonal".into()));
        }
        Ok(Basis {
            first,
            second,
            label: label.to_string(),
        })
    }

    /// Like [`Basis::new`] but with a caller-supplied tolerance (scenario files
    /// are validated at 1e-8).
    pub fn new_with_tol(first: StateVector, second: StateVector, label: &str, tol: f64) -> Result<Self> {
        if first.dim() != 2 || second.dim() != 2 {
            return Err(Error::DimensionMismatch("basis vectors must be 2-dim".into()));
        }
        if !first.is_unit(tol) || !second.is_unit(tol) {
            return Err(Error::ContractViolation("basis vectors must be unit-norm".into()));
        }
        if first.inner(&second)?.norm() > tol {
            return Err(Error::ContractViolation("basis vectors must be orthogonal".into()));
        }
        Ok(Basis {
            first: first.normalized()?,
            second: second.normalized()?,
            label: label.to_string(),
        })
    }

    pub fn z() -> Basis {
        Basis::new(ket_zp(), ket_zm(), "z").expect("orthonormal")
    }

    pub fn x() -> Basis {
        Basis::new(ket_xp(), ket_xm(), "x").expect("orthonormal")
    }

    pub fn y() -> Basis {
        Basis::new(ket_yp(), ket_ym(), "y").expect("orthonormal")
    }

    /// Basis whose first vector is the Bloch state (theta, phi).
    pub fn from_bloch(theta: f64, phi: f64) -> Basis {
        let first = bloch(theta, phi);
        let second = orthogonal_complement(&first).expect("2-dim");
        Basis::new(first, second, &format!("bloch({theta:.3},{phi:.3})")).expect("orthonormal")
    }

    pub fn first(&self) -> &StateVector {
        &self.first
    }

    pub fn second(&self) -> &StateVector {
        &self.second
    }

    pub fn vector(&self, i: usize) -> &StateVector {
        if i == 0 {
            &self.first
        } else {
            &self.second
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// "z+" / "z-" style label for vector `i`.
    pub fn vector_label(&self, i: usize) -> String {
        format!("{}{}", self.label, if i == 0 { "+" } else { "-" })
    }
}

/// Vector in the two-slot history space; may be unnormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct HistoryState {
    amps: [C64; 4],
}

impl HistoryState {
    pub fn from_amplitudes(amps: [C64; 4]) -> Result<Self> {
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::UndefinedInput("history amplitudes contain NaN/Inf".into()));
        }
        Ok(HistoryState { amps })
    }

    pub fn from_state_vector(v: &StateVector) -> Result<Self> {
        if v.dim() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "history state needs dim 4, got {}",
                v.dim()
            )));
        }
        Self::from_amplitudes([v.amp(0), v.amp(1), v.amp(2), v.amp(3)])
    }

    pub fn amps(&self) -> &[C64; 4] {
        &self.amps
    }

    pub fn as_state_vector(&self) -> StateVector {
        StateVector::new(self.amps.to_vec()).expect("finite")
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<HistoryState> {
        let n = self.norm();
        if n <= TOL_EXACT {
            return Err(Error::UndefinedInput("cannot normalize zero history".into()));
        }
        let inv = C64::new(1.0 / n, 0.0);
        Ok(HistoryState {
            amps: [
                self.amps[0] * inv,
                self.amps[1] * inv,
                self.amps[2] * inv,
                self.amps[3] * inv,
            ],
        })
    }

    pub fn scaled(&self, c: C64) -> HistoryState {
        HistoryState {
            amps: [
                self.amps[0] * c,
                self.amps[1] * c,
                self.amps[2] * c,
                self.amps[3] * c,
            ],
        }
    }

    pub fn add(&self, other: &HistoryState) -> HistoryState {
        HistoryState {
            amps: [
                self.amps[0] + other.amps[0],
                self.amps[1] + other.amps[1],
                self.amps[2] + other.amps[2],
                self.amps[3] + other.amps[3],
            ],
        }
    }
}

/// Temporal product |later> (.) |earlier>.
pub fn odot(later: &StateVector, earlier: &StateVector) -> Result<HistoryState> {
    if later.dim() != 2 || earlier.dim() != 2 {
        return Err(Error::DimensionMismatch("odot expects 2-dim slot states".into()));
    }
    HistoryState::from_state_vector(&later.kron(earlier))
}

/// History of `initial` evolving under `u`, resolved on bases `b1` (at t1)
/// and `b2` (at t2): sum over x in b1, y in b2 of <y|U|x><x|initial> |y>(.)&|x>.
pub fn build_history(
    initial: &StateVector,
    u: &DenseOperator,
    b1: &Basis,
    b2: &Basis,
) -> Result<HistoryState> {
    if initial.dim() != 2 || u.dim() != 2 {
        return Err(Error::DimensionMismatch("build_history works on a single qubit".into()));
    }
    if !u.is_unitary(TOL_CHAIN) {
        return Err(Error::ContractViolation("evolution operator must be unitary".into()));
    }
    if !initial.is_unit(TOL_CHAIN) {
        return Err(Error::ContractViolation("initial state must be unit-norm".into()));
    }
    let mut out = HistoryState::from_amplitudes([C64::ZERO; 4])?;
    for x in 0..2 {
        let weight = b1.vector(x).inner(initial)?;
        let ux = u.matvec(b1.vector(x))?;
        for y in 0..2 {
            let transition = b2.vector(y).inner(&ux)?;
            let term = odot(b2.vector(y), b1.vector(x))?.scaled(transition * weight);
            out = out.add(&term);
        }
    }
    Ok(out)
}

/// Number of singular values of the 2x2 amplitude matrix (rows = t2 index,
/// cols = t1 index) exceeding 1e-10 of the largest: 1 for product histories,
/// 2 for temporally entangled ones.
pub fn schmidt_rank(h: &HistoryState) -> Result<u8> {
    let m = h.amps;
    // Gram matrix of M = [[m0, m1], [m2, m3]]: singular values from
    // s^2 = (T +- sqrt(T^2 - 4 D)) / 2 with T = tr(M^dag M), D = |det M|^2.
    let t = m.iter().map(|a| a.norm_sqr()).sum::<f64>();
    if t <= TOL_EXACT * TOL_EXACT {
        return Err(Error::UndefinedInput("schmidt_rank of zero history".into()));
    }
    let det = m[0] * m[3] - m[1] * m[2];
    let d = det.norm_sqr();
    let disc = (t * t - 4.0 * d).max(0.0).sqrt();
    let s_max = ((t + disc) / 2.0).sqrt();
    let s_min = ((t - disc) / 2.0).max(0.0).sqrt();
    Ok(if s_min > 1e-10 * s_max { 2 } else { 1 })
}

/// Canonical inner product on history space, conjugate-linear in `g`.
pub fn history_inner(g: &HistoryState, h: &HistoryState) -> C64 {
    g.amps
        .iter()
        .zip(&h.amps)
        .map(|(a, b)| a.conj() * b)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity_op, pauli_x};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn odot_basis_cases() {
        let h = odot(&ket_zp(), &ket_zp()).unwrap();
        assert_eq!(h.amps(), &[C64::ONE, C64::ZERO, C64::ZERO, C64::ZERO]);

        let h = odot(&ket_zm(), &ket_xp()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for (a, e) in h.amps().iter().zip([0.0, 0.0, r, r]) {
            assert!((a - c(e, 0.0)).norm() <= TOL_EXACT);
        }

        // odot(U|s>, |s>) for U = sigma_x, s = |up> -> (0,0,1,0).
        let us = pauli_x().matvec(&ket_zp()).unwrap();
        let h = odot(&us, &ket_zp()).unwrap();
        assert_eq!(h.amps(), &[C64::ZERO, C64::ZERO, C64::ONE, C64::ZERO]);
    }

    #[test]
    fn build_history_tracking_bases() {
        // B1 = {|s1>, .}, B2 = {U|s1>, .} collapses to a single product history.
        let u = crate::linalg::hadamard();
        let s1 = bloch(0.9, 0.4);
        let b1 = Basis::new(s1.clone(), orthogonal_complement(&s1).unwrap(), "b1").unwrap();
        let us1 = u.matvec(&s1).unwrap();
        let b2 = Basis::new(us1.clone(), orthogonal_complement(&us1).unwrap(), "b2").unwrap();
        let h = build_history(&s1, &u, &b1, &b2).unwrap();
        let expect = odot(&us1, &s1).unwrap();
        for (a, e) in h.amps().iter().zip(expect.amps()) {
            assert!((a - e).norm() <= TOL_CHAIN);
        }
    }

    #[test]
    fn build_history_monitor_example() {
        // initial |z+>, U = 1, B1 = {x+-}, B2 = {z+-}: coefficients of
        // z+ (.) x+, z- (.) x+, z+ (.) x-, z- (.) x- are 1/2, 1/2, 1/2, -1/2.
        let h = build_history(&ket_zp(), &identity_op(2), &Basis::x(), &Basis::z()).unwrap();
        let checks = [
            (&Basis::z().first().clone(), &Basis::x().first().clone(), 0.5),
            (&Basis::z().second().clone(), &Basis::x().first().clone(), 0.5),
            (&Basis::z().first().clone(), &Basis::x().second().clone(), 0.5),
            (&Basis::z().second().clone(), &Basis::x().second().clone(), -0.5),
        ];
        for (later, earlier, coeff) in checks {
            let basis_hist = odot(later, earlier).unwrap();
            let overlap = history_inner(&basis_hist, &h);
            assert!((overlap - c(coeff, 0.0)).norm() <= TOL_EXACT);
        }
    }

    #[test]
    fn build_history_same_basis_identity() {
        let h = build_history(&ket_zp(), &identity_op(2), &Basis::z(), &Basis::z()).unwrap();
        let expect = odot(&ket_zp(), &ket_zp()).unwrap();
        for (a, e) in h.amps().iter().zip(expect.amps()) {
            assert!((a - e).norm() <= TOL_EXACT);
        }
    }

    #[test]
    fn build_history_rejects_non_unitary() {
        let bad = DenseOperator::new(2, vec![C64::ONE, C64::ONE, C64::ZERO, C64::ONE]).unwrap();
        assert!(matches!(
            build_history(&ket_zp(), &bad, &Basis::x(), &Basis::z()),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn schmidt_ranks() {
        assert_eq!(schmidt_rank(&odot(&ket_zp(), &ket_zm()).unwrap()).unwrap(), 1);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ghz = HistoryState::from_amplitudes([c(r, 0.0), C64::ZERO, C64::ZERO, c(r, 0.0)]).unwrap();
        assert_eq!(schmidt_rank(&ghz).unwrap(), 2);
        // v_{++} from the simultaneous eigenbasis is entangled; frozen from the
        // brute-force singular values of [[1/2, -i/2], [1/2, i/2]] (both 1/sqrt2).
        let vpp =
            HistoryState::from_amplitudes([c(0.5, 0.0), c(0.0, -0.5), c(0.5, 0.0), c(0.0, 0.5)])
                .unwrap();
        assert_eq!(schmidt_rank(&vpp).unwrap(), 2);
        let zero = HistoryState::from_amplitudes([C64::ZERO; 4]).unwrap();
        assert!(schmidt_rank(&zero).is_err());
    }

    #[test]
    fn history_inner_eigenvectors() {
        // Frozen from the v_{++}, v_{+-} coefficient lists.
        let vpp =
            HistoryState::from_amplitudes([c(0.5, 0.0), c(0.0, -0.5), c(0.5, 0.0), c(0.0, 0.5)])
                .unwrap();
        let vpm =
            HistoryState::from_amplitudes([c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, 0.5)])
                .unwrap();
        assert!((history_inner(&vpp, &vpp) - C64::ONE).norm() <= TOL_EXACT);
        assert!(history_inner(&vpp, &vpm).norm() <= TOL_EXACT);
        let h = odot(&ket_zp(), &ket_zp()).unwrap();
        assert!((history_inner(&h, &h) - C64::ONE).norm() <= TOL_EXACT);
    }

    #[test]
    fn basis_rejects_non_orthogonal() {
        assert!(Basis::new(ket_zp(), ket_xp(), "bad").is_err());
    }
}
