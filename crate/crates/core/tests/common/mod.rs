//! Shared random generators for the integration suites.

use enthist::history::Basis;
use enthist::linalg::{orthogonal_complement, DenseOperator, StateVector};
use num_complex::Complex64 as C64;
use rand::Rng;

/// Standard-normal pair via Box-Muller over the generator's uniform draws.
fn gaussian<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let a = 2.0 * std::f64::consts::PI * u2;
    (r * a.cos(), r * a.sin())
}

/// Haar-ish random qubit state: normalized complex-gaussian amplitudes.
pub fn random_state<R: Rng>(rng: &mut R) -> StateVector {
    loop {
        let (a, b) = gaussian(rng);
        let (c, d) = gaussian(rng);
        let v = StateVector::new(vec![C64::new(a, b), C64::new(c, d)]).unwrap();
        if v.norm() > 1e-6 {
            return v.normalized().unwrap();
        }
    }
}

/// Random 2x2 unitary: SU(2) column from a random state, times a phase.
pub fn random_unitary<R: Rng>(rng: &mut R) -> DenseOperator {
    let col = random_state(rng);
    let phase = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.random::<f64>());
    let mut u = DenseOperator::zeros(2);
    u.set(0, 0, col.amp(0));
    u.set(1, 0, col.amp(1));
    u.set(0, 1, -col.amp(1).conj() * phase);
    u.set(1, 1, col.amp(0).conj() * phase);
    u
}

/// Random orthonormal qubit basis.
pub fn random_basis<R: Rng>(rng: &mut R, label: &str) -> Basis {
    let first = random_state(rng);
    let second = orthogonal_complement(&first).unwrap();
    Basis::new(first, second, label).unwrap()
}
