//! Monitored two-slit experiment: CNOT monitor coupling at the slits,
//! conditional interference patterns, the monitor-pair density matrix, and
//! EPR-pair production from screen conditioning.
//!
//! Monitor pair ordering is (M1, M2), M1 slowest; both monitors start down.
//! A photon through slit 1 flips M1 (monitors end |up down>); through slit 2
//! flips M2 (|down up>).

use crate::error::{Error, Result};
use crate::linalg::{
    ket_zm, ket_zp, pauli_x, pauli_y, pauli_z, DenseOperator, StateVector, TOL_CHAIN, TOL_EXACT,
};
use num_complex::Complex64 as C64;

/// Propagation amplitudes from slits 1 and 2 to a screen point.
#[derive(Clone, Copy, Debug)]
pub struct SlitAmplitudes {
    pub a: C64,
    pub b: C64,
}

impl SlitAmplitudes {
    pub fn new(a: C64, b: C64) -> Self {
        SlitAmplitudes { a, b }
    }

    pub fn total_intensity(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }
}

/// Whether the photon passed the monitored slit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlitBranch {
    Yes,
    No,
}

/// Which monitor is read out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonitorChoice {
    M1,
    M2,
}

/// z readout of a single monitor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZOutcome {
    Up,
    Down,
}

/// Monitor-flip rule: the monitor flips iff its slit branch is Yes.
pub fn slit_cnot(branch: SlitBranch, monitor: &StateVector) -> Result<StateVector> {
    if monitor.dim() != 2 {
        return Err(Error::DimensionMismatch("monitor must be a qubit".into()));
    }
    match branch {
        SlitBranch::Yes => pauli_x().matvec(monitor),
        SlitBranch::No => Ok(monitor.clone()),
    }
}

/// Two monitor qubits, ordering (M1, M2).
#[derive(Clone, Debug)]
pub struct MonitorPairState {
    state: StateVector,
}

impl MonitorPairState {
    pub fn state(&self) -> &StateVector {
        &self.state
    }
}

/// Unnormalized monitor vector a |up down> + b |down up> on (M1, M2).
fn monitor_vector(s: &SlitAmplitudes) -> StateVector {
    ket_zp()
        .kron(&ket_zm())
        .scaled(s.a)
        .add(&ket_zm().kron(&ket_zp()).scaled(s.b))
        .expect("dim 4")
}

/// Joint photon-path (x) monitor state in flight, before the paths
/// reconverge: a |path1>|up down> + b |path2>|down up>, path index slowest.
/// The orthogonal path kets carry the which-path record, so tracing them
/// out decoheres the monitors.
pub fn joint_state_after_slits(s: &SlitAmplitudes) -> Result<StateVector> {
    let path1 = StateVector::basis(2, 0);
    let path2 = StateVector::basis(2, 1);
    path1
        .kron(&ket_zp().kron(&ket_zm()))
        .scaled(s.a)
        .add(&path2.kron(&ket_zm().kron(&ket_zp())).scaled(s.b))
}

/// Joint state when the photon arrives at the screen point: both slit
/// contributions occupy the same position ket, so the path no longer
/// records which slit. Unnormalized; squared norm is the arrival intensity
/// |a|^2 + |b|^2. Tracing out the position factor leaves the coherent
/// monitor matrix pi = [[|a|^2, a b*], [b a*, |b|^2]] on
/// span{|up down>, |down up>}.
pub fn joint_state_at_screen(s: &SlitAmplitudes) -> Result<StateVector> {
    let pos = StateVector::basis(2, 0);
    Ok(pos.kron(&monitor_vector(s)))
}

/// Intensity after a z readout of one monitor: |a|^2 for (M1, up) or
/// (M2, down); |b|^2 otherwise.
pub fn pattern_given_z_readout(
    s: &SlitAmplitudes,
    which: MonitorChoice,
    outcome: ZOutcome,
) -> Result<f64> {
    let intensity = match (which, outcome) {
        (MonitorChoice::M1, ZOutcome::Up) | (MonitorChoice::M2, ZOutcome::Down) => s.a.norm_sqr(),
        _ => s.b.norm_sqr(),
    };
    if intensity <= TOL_EXACT * TOL_EXACT {
        return Err(Error::PostSelectionImpossible);
    }
    Ok(intensity)
}

/// Intensity after conditioning on the total monitor spin:
/// |a + b|^2 / 2 for spin 1, |a - b|^2 / 2 for spin 0.
pub fn pattern_given_total_spin(s: &SlitAmplitudes, total_spin: u8) -> Result<f64> {
    match total_spin {
        1 => Ok((s.a + s.b).norm_sqr() / 2.0),
        0 => Ok((s.a - s.b).norm_sqr() / 2.0),
        _ => Err(Error::UnsupportedInput(format!(
            "total spin must be 0 or 1, got {total_spin}"
        ))),
    }
}

/// Monitor pair left behind by a screen detection with amplitudes (a, b):
/// normalized a |up down> + b |down up>. At a spin-1 pattern zero (a = -b)
/// this is the singlet.
pub fn epr_from_screen(s: &SlitAmplitudes) -> Result<MonitorPairState> {
    if s.total_intensity() <= TOL_EXACT * TOL_EXACT {
        return Err(Error::UndefinedInput("both slit amplitudes are zero".into()));
    }
    Ok(MonitorPairState {
        state: monitor_vector(s).normalized()?,
    })
}

/// Intensity from projecting the (unnormalized) monitor vector onto one
/// eigenspace of a hermitian observable; sectors indexed by ascending
/// distinct eigenvalue.
pub fn pattern_given_observable(
    s: &SlitAmplitudes,
    obs: &DenseOperator,
    sector: usize,
) -> Result<f64> {
    if obs.dim() != 4 {
        return Err(Error::DimensionMismatch("observable must be 4x4".into()));
    }
    if !obs.is_hermitian(TOL_CHAIN) {
        return Err(Error::ContractViolation("observable must be hermitian".into()));
    }
    let (vals, vecs) = obs.eig_hermitian()?;
    let groups = crate::monitor::group_eigenvalues(&vals, 1e-8);
    let (_, members) = groups
        .get(sector)
        .ok_or_else(|| Error::DimensionMismatch("eigenvalue sector out of range".into()))?;
    let m = monitor_vector(s);
    members
        .iter()
        .map(|&k| vecs[k].inner(&m).map(|c| c.norm_sqr()))
        .sum::<Result<f64>>()
}

/// Total-spin-squared operator (s1 + s2)^2 with s = sigma/2;
/// eigenvalues 0 (singlet) and 2 (triplet).
pub fn total_spin_operator() -> DenseOperator {
    let mut op = DenseOperator::identity(4).scaled(C64::new(1.5, 0.0));
    for p in [pauli_x(), pauli_y(), pauli_z()] {
        op = op
            .add(&p.kron(&p).scaled(C64::new(0.5, 0.0)))
            .expect("4x4");
    }
    op
}

/// How a screen point maps to slit amplitudes.
#[derive(Clone, Debug)]
pub enum AmplitudeRule {
    /// a = e^{i delta/2}/sqrt2, b = e^{-i delta/2}/sqrt2, delta the phase
    /// difference at the point.
    PhaseDifference,
    /// Explicit per-point (a, b) table.
    Table(Vec<SlitAmplitudes>),
}

/// Screen points (dimensionless phase parametrization) plus amplitude rule.
#[derive(Clone, Debug)]
pub struct ScreenModel {
    points: Vec<f64>,
    rule: AmplitudeRule,
}

impl ScreenModel {
    /// Uniform phase grid over [min, max], inclusive.
    pub fn uniform_phase_grid(points: usize, min: f64, max: f64) -> Result<Self> {
        if points == 0 {
            return Err(Error::UndefinedInput("screen needs at least one point".into()));
        }
        let grid = (0..points)
            .map(|i| {
                if points == 1 {
                    min
                } else {
                    min + (max - min) * i as f64 / (points - 1) as f64
                }
            })
            .collect();
        Ok(ScreenModel {
            points: grid,
            rule: AmplitudeRule::PhaseDifference,
        })
    }

    pub fn from_table(points: Vec<f64>, table: Vec<SlitAmplitudes>) -> Result<Self> {
        if points.len() != table.len() {
            return Err(Error::DimensionMismatch(
                "amplitude table length must match point count".into(),
            ));
        }
        if table.iter().any(|s| {
            !s.a.re.is_finite() || !s.a.im.is_finite() || !s.b.re.is_finite() || !s.b.im.is_finite()
        }) {
            return Err(Error::UndefinedInput("amplitude table contains NaN/Inf".into()));
        }
        Ok(ScreenModel {
            points,
            rule: AmplitudeRule::Table(table),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> f64 {
        self.points[i]
    }

    pub fn amplitudes(&self, i: usize) -> SlitAmplitudes {
        match &self.rule {
            AmplitudeRule::PhaseDifference => {
                let delta = self.points[i];
                let h = std::f64::consts::FRAC_1_SQRT_2;
                SlitAmplitudes::new(
                    C64::from_polar(h, delta / 2.0),
                    C64::from_polar(h, -delta / 2.0),
                )
            }
            AmplitudeRule::Table(t) => t[i],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cnot_flip_rules() {
        let up = ket_zp();
        let down = ket_zm();
        assert_eq!(slit_cnot(SlitBranch::Yes, &down).unwrap().amps(), up.amps());
        assert_eq!(slit_cnot(SlitBranch::No, &down).unwrap().amps(), down.amps());
        assert_eq!(slit_cnot(SlitBranch::Yes, &up).unwrap().amps(), down.amps());
        assert_eq!(slit_cnot(SlitBranch::No, &up).unwrap().amps(), up.amps());
    }

    #[test]
    fn joint_state_single_slit() {
        let s = SlitAmplitudes::new(C64::ONE, C64::ZERO);
        for j in [
            joint_state_after_slits(&s).unwrap(),
            joint_state_at_screen(&s).unwrap(),
        ] {
            // path/position index 0, monitors |up down> -> index 0*4 + 1.
            assert!((j.amp(1) - C64::ONE).norm() <= TOL_EXACT);
            assert!((j.norm() - 1.0).abs() <= TOL_EXACT);
        }
    }

    #[test]
    fn monitor_density_in_flight_decoheres() {
        // With the which-path record still in the path factor, tracing it
        // out leaves a diagonal monitor state: |a|^2 on |up down>, |b|^2 on
        // |down up>, no coherence.
        let s = SlitAmplitudes::new(c(0.6, 0.0), c(0.0, 0.8));
        let j = joint_state_after_slits(&s).unwrap();
        let red = j.outer(&j).partial_trace(&[2, 2, 2], &[1, 2]).unwrap();
        assert!((red.get(1, 1) - c(0.36, 0.0)).norm() <= TOL_EXACT);
        assert!((red.get(2, 2) - c(0.64, 0.0)).norm() <= TOL_EXACT);
        assert!(red.get(1, 2).norm() <= TOL_EXACT);
        assert!(red.get(2, 1).norm() <= TOL_EXACT);
    }

    #[test]
    fn monitor_density_at_screen_is_coherent() {
        // After arrival the position factor carries no slit record, so the
        // partial trace keeps the off-diagonal a b* terms; trace is the
        // arrival intensity.
        let s = SlitAmplitudes::new(c(0.6, 0.1), c(-0.2, 0.8));
        let j = joint_state_at_screen(&s).unwrap();
        let red = j.outer(&j).partial_trace(&[2, 2, 2], &[1, 2]).unwrap();
        assert!((red.get(1, 1) - C64::new(s.a.norm_sqr(), 0.0)).norm() <= TOL_EXACT);
        assert!((red.get(2, 2) - C64::new(s.b.norm_sqr(), 0.0)).norm() <= TOL_EXACT);
        assert!((red.get(1, 2) - s.a * s.b.conj()).norm() <= TOL_EXACT);
        assert!((red.get(2, 1) - s.b * s.a.conj()).norm() <= TOL_EXACT);
        assert!((red.get(0, 0)).norm() <= TOL_EXACT);
        assert!((red.get(3, 3)).norm() <= TOL_EXACT);
        assert!((red.trace() - C64::new(s.total_intensity(), 0.0)).norm() <= TOL_EXACT);
    }

    #[test]
    fn z_readout_patterns() {
        let s = SlitAmplitudes::new(c(0.6, 0.0), c(0.0, 0.8));
        assert!(
            (pattern_given_z_readout(&s, MonitorChoice::M1, ZOutcome::Up).unwrap() - 0.36).abs()
                <= TOL_EXACT
        );
        assert!(
            (pattern_given_z_readout(&s, MonitorChoice::M2, ZOutcome::Up).unwrap() - 0.64).abs()
                <= TOL_EXACT
        );
        let s0 = SlitAmplitudes::new(C64::ZERO, C64::ONE);
        assert!(pattern_given_z_readout(&s0, MonitorChoice::M1, ZOutcome::Up).is_err());
    }

    #[test]
    fn total_spin_patterns() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sym = SlitAmplitudes::new(c(h, 0.0), c(h, 0.0));
        assert!((pattern_given_total_spin(&sym, 1).unwrap() - 1.0).abs() <= TOL_EXACT);
        assert!(pattern_given_total_spin(&sym, 0).unwrap() <= TOL_EXACT);
        let anti = SlitAmplitudes::new(c(h, 0.0), c(-h, 0.0));
        assert!(pattern_given_total_spin(&anti, 1).unwrap() <= TOL_EXACT);
        assert!((pattern_given_total_spin(&anti, 0).unwrap() - 1.0).abs() <= TOL_EXACT);
        // Complex arithmetic by hand: a = 0.6, b = 0.8i gives |a+-b|^2 = 1.
        let s = SlitAmplitudes::new(c(0.6, 0.0), c(0.0, 0.8));
        assert!((pattern_given_total_spin(&s, 1).unwrap() - 0.5).abs() <= TOL_EXACT);
        assert!((pattern_given_total_spin(&s, 0).unwrap() - 0.5).abs() <= TOL_EXACT);
    }

    #[test]
    fn epr_pairs() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let anti = SlitAmplitudes::new(c(0.3, 0.0), c(-0.3, 0.0));
        let pair = epr_from_screen(&anti).unwrap();
        let singlet = StateVector::new(vec![C64::ZERO, c(h, 0.0), c(-h, 0.0), C64::ZERO]).unwrap();
        assert!((pair.state().inner(&singlet).unwrap().norm() - 1.0).abs() <= TOL_EXACT);
        // Spin of the singlet is 0.
        let s2 = total_spin_operator();
        let ev = pair.state().inner(&s2.matvec(pair.state()).unwrap()).unwrap();
        assert!(ev.norm() <= TOL_CHAIN);

        let sym = SlitAmplitudes::new(c(0.5, 0.0), c(0.5, 0.0));
        let pair = epr_from_screen(&sym).unwrap();
        let triplet = StateVector::new(vec![C64::ZERO, c(h, 0.0), c(h, 0.0), C64::ZERO]).unwrap();
        assert!((pair.state().inner(&triplet).unwrap().norm() - 1.0).abs() <= TOL_EXACT);

        let single = SlitAmplitudes::new(C64::ONE, C64::ZERO);
        let pair = epr_from_screen(&single).unwrap();
        assert!((pair.state().amp(1) - C64::ONE).norm() <= TOL_EXACT);

        assert!(epr_from_screen(&SlitAmplitudes::new(C64::ZERO, C64::ZERO)).is_err());
    }

    #[test]
    fn observable_sectors_match_named_patterns() {
        let s = SlitAmplitudes::new(c(0.4, 0.3), c(-0.2, 0.7));
        // Total spin: sector 0 (eigenvalue 0) is the singlet pattern,
        // sector 1 (eigenvalue 2) the triplet pattern.
        let s2 = total_spin_operator();
        let p0 = pattern_given_observable(&s, &s2, 0).unwrap();
        let p1 = pattern_given_observable(&s, &s2, 1).unwrap();
        assert!((p0 - pattern_given_total_spin(&s, 0).unwrap()).abs() <= TOL_CHAIN);
        assert!((p1 - pattern_given_total_spin(&s, 1).unwrap()).abs() <= TOL_CHAIN);

        // sigma_3 on M1: up sector (eigenvalue +1, index 1) reproduces |a|^2.
        let z1 = pauli_z().kron(&DenseOperator::identity(2));
        let up = pattern_given_observable(&s, &z1, 1).unwrap();
        assert!((up - s.a.norm_sqr()).abs() <= TOL_CHAIN);

        // Identity: single sector carries everything.
        let id = DenseOperator::identity(4);
        let all = pattern_given_observable(&s, &id, 0).unwrap();
        assert!((all - s.total_intensity()).abs() <= TOL_CHAIN);
    }

    #[test]
    fn phase_shift_swaps_spin_patterns() {
        // A pi phase on M1 swaps the spin-1 and spin-0 patterns.
        let s = SlitAmplitudes::new(c(0.31, 0.4), c(0.1, -0.77));
        let shifted = SlitAmplitudes::new(s.a * c(-1.0, 0.0), s.b);
        assert!(
            (pattern_given_total_spin(&shifted, 1).unwrap()
                - pattern_given_total_spin(&s, 0).unwrap())
            .abs()
                <= TOL_EXACT
        );
        assert!(
            (pattern_given_total_spin(&shifted, 0).unwrap()
                - pattern_given_total_spin(&s, 1).unwrap())
            .abs()
                <= TOL_EXACT
        );
    }

    #[test]
    fn screen_model_rules() {
        let screen = ScreenModel::uniform_phase_grid(5, 0.0, std::f64::consts::PI).unwrap();
        assert_eq!(screen.len(), 5);
        let s = screen.amplitudes(0);
        // delta = 0: a = b = 1/sqrt2, spin-1 intensity 1 = cos^2(0).
        assert!((pattern_given_total_spin(&s, 1).unwrap() - 1.0).abs() <= TOL_EXACT);
        let s = screen.amplitudes(4);
        // delta = pi: spin-1 intensity cos^2(pi/2) = 0.
        assert!(pattern_given_total_spin(&s, 1).unwrap() <= TOL_EXACT);
    }
}
