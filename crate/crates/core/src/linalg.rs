//! Minimal dense complex linear algebra: state vectors, square operators,
//! Kronecker products, partial traces, and hermitian eigendecomposition.
//!
//! Everything here works at desk scale (dims <= 16); storage is plain
//! row-major `Vec<Complex64>`.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// Absolute tolerance for exact algebraic identities.
pub const TOL_EXACT: f64 = 1e-12;
/// Absolute tolerance for chained / eigensolver results.
pub const TOL_CHAIN: f64 = 1e-10;

fn check_finite(amps: &[C64], what: &str) -> Result<()> {
    if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::UndefinedInput(format!("{what} contains NaN/Inf")));
    }
    Ok(())
}

/// Finite-dimensional complex vector of quantum amplitudes.
///
/// Qubit basis ordering is fixed: index 0 = |up> = |z+>, index 1 = |down> = |z->.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::DimensionMismatch("state vector must be non-empty".into()));
        }
        check_finite(&amps, "state vector")?;
        Ok(StateVector { amps })
    }

    pub fn from_reals(re: &[f64]) -> Result<Self> {
        Self::new(re.iter().map(|&r| C64::new(r, 0.0)).collect())
    }

    /// Computational basis vector e_i.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut amps = vec![C64::ZERO; dim];
        amps[i] = C64::ONE;
        StateVector { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, i: usize) -> C64 {
        self.amps[i]
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<StateVector> {
        let n = self.norm();
        if n <= TOL_EXACT {
            return Err(Error::UndefinedInput("cannot normalize a zero vector".into()));
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, c: C64) -> StateVector {
        StateVector {
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add vectors of dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(StateVector {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Kronecker product; `self` indexes the slower-varying (left-major) index.
    pub fn kron(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { amps }
    }

    /// <self|other>, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "inner product of dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |self><other|.
    pub fn outer(&self, other: &StateVector) -> DenseOperator {
        let n = self.dim();
        let m = other.dim();
        debug_assert_eq!(n, m);
        let mut data = Vec::with_capacity(n * m);
        for a in &self.amps {
            for b in &other.amps {
                data.push(a * b.conj());
            }
        }
        DenseOperator { dim: n, data }
    }
}

/// Square complex matrix acting on a [`StateVector`] space (row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<C64>,
}

impl DenseOperator {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "operator data length {} does not match dim {}",
                data.len(),
                dim
            )));
        }
        check_finite(&data, "operator")?;
        Ok(DenseOperator { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            dim,
            data: vec![C64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.data[i * dim + i] = C64::ONE;
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch("operator add".into()));
        }
        Ok(DenseOperator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch("operator sub".into()));
        }
        Ok(DenseOperator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scaled(&self, c: C64) -> DenseOperator {
        DenseOperator {
            dim: self.dim,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn matmul(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch("operator matmul".into()));
        }
        let n = self.dim;
        let mut out = DenseOperator::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &StateVector) -> Result<StateVector> {
        if self.dim != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator dim {} applied to vector dim {}",
                self.dim,
                v.dim()
            )));
        }
        let n = self.dim;
        let mut amps = vec![C64::ZERO; n];
        for i in 0..n {
            let mut acc = C64::ZERO;
            for j in 0..n {
                acc += self.get(i, j) * v.amp(j);
            }
            amps[i] = acc;
        }
        Ok(StateVector { amps })
    }

    pub fn dagger(&self) -> DenseOperator {
        let n = self.dim;
        let mut out = DenseOperator::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in i..self.dim {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.dagger().matmul(self).expect("same dim");
        prod.sub(&DenseOperator::identity(self.dim))
            .expect("same dim")
            .max_abs()
            <= tol
    }

    /// Kronecker product; `self` indexes the slower-varying index.
    pub fn kron(&self, other: &DenseOperator) -> DenseOperator {
        let n = self.dim;
        let m = other.dim;
        let dim = n * m;
        let mut out = DenseOperator::zeros(dim);
        for i1 in 0..n {
            for j1 in 0..n {
                let a = self.get(i1, j1);
                if a == C64::ZERO {
                    continue;
                }
                for i2 in 0..m {
                    for j2 in 0..m {
                        out.set(i1 * m + i2, j1 * m + j2, a * other.get(i2, j2));
                    }
                }
            }
        }
        out
    }

    /// Partial trace over the subsystems *not* listed in `keep`.
    ///
    /// `dims` factors the total space (first entry slowest index); the result
    /// acts on the kept subsystems in their original order.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<DenseOperator> {
        let total: usize = dims.iter().product();
        if total != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} do not factor operator dim {}",
                dims, self.dim
            )));
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.iter().any(|&k| k >= dims.len()) {
            return Err(Error::DimensionMismatch(format!(
                "keep set {:?} out of range for {} subsystems",
                keep,
                dims.len()
            )));
        }
        let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
        let kdim: usize = kept.iter().map(|&i| dims[i]).product();
        let tdim: usize = traced.iter().map(|&i| dims[i]).product();

        // Strides of each subsystem in the flat index.
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let flat = |subsys: &[usize], multi: &[usize]| -> usize {
            subsys.iter().zip(multi).map(|(&s, &m)| strides[s] * m).sum()
        };
        let unravel = |subsys: &[usize], mut idx: usize| -> Vec<usize> {
            let mut multi = vec![0usize; subsys.len()];
            for pos in (0..subsys.len()).rev() {
                let d = dims[subsys[pos]];
                multi[pos] = idx % d;
                idx /= d;
            }
            multi
        };

        let mut out = DenseOperator::zeros(kdim);
        for kr in 0..kdim {
            let kr_multi = unravel(&kept, kr);
            let kr_base = flat(&kept, &kr_multi);
            for kc in 0..kdim {
                let kc_multi = unravel(&kept, kc);
                let kc_base = flat(&kept, &kc_multi);
                let mut acc = C64::ZERO;
                for t in 0..tdim {
                    let t_multi = unravel(&traced, t);
                    let t_off = flat(&traced, &t_multi);
                    acc += self.get(kr_base + t_off, kc_base + t_off);
                }
                out.set(kr, kc, acc);
            }
        }
        Ok(out)
    }

    /// Eigendecomposition of a hermitian operator.
    ///
    /// Eigenvalues ascending; eigenvectors orthonormal. Degenerate eigenspaces
    /// return an arbitrary orthonormal basis.
    pub fn eig_hermitian(&self) -> Result<(Vec<f64>, Vec<StateVector>)> {
        if !self.is_hermitian(TOL_CHAIN) {
            return Err(Error::ContractViolation(
                "eig_hermitian requires a hermitian operator".into(),
            ));
        }
        let n = self.dim;
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| self.get(i, j));
        let eig = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut values = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n);
        for &k in &order {
            values.push(eig.eigenvalues[k]);
            let col = eig.eigenvectors.column(k);
            vectors.push(StateVector {
                amps: col.iter().copied().collect(),
            });
        }
        Ok((values, vectors))
    }
}

pub fn identity_op(dim: usize) -> DenseOperator {
    DenseOperator::identity(dim)
}

/// sigma_1 (sigma_x).
pub fn pauli_x() -> DenseOperator {
    DenseOperator {
        dim: 2,
        data: vec![C64::ZERO, C64::ONE, C64::ONE, C64::ZERO],
    }
}

/// sigma_2 (sigma_y); sigma_2 |up> = i |down>.
pub fn pauli_y() -> DenseOperator {
    DenseOperator {
        dim: 2,
        data: vec![
            C64::ZERO,
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::ZERO,
        ],
    }
}

/// sigma_3 (sigma_z).
pub fn pauli_z() -> DenseOperator {
    DenseOperator {
        dim: 2,
        data: vec![C64::ONE, C64::ZERO, C64::ZERO, C64::new(-1.0, 0.0)],
    }
}

pub fn hadamard() -> DenseOperator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DenseOperator {
        dim: 2,
        data: vec![
            C64::new(h, 0.0),
            C64::new(h, 0.0),
            C64::new(h, 0.0),
            C64::new(-h, 0.0),
        ],
    }
}

/// diag(1, e^{i lambda}).
pub fn phase_gate(lambda: f64) -> DenseOperator {
    DenseOperator {
        dim: 2,
        data: vec![C64::ONE, C64::ZERO, C64::ZERO, C64::from_polar(1.0, lambda)],
    }
}

pub fn ket_zp() -> StateVector {
    StateVector::basis(2, 0)
}

pub fn ket_zm() -> StateVector {
    StateVector::basis(2, 1)
}

pub fn ket_xp() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_reals(&[h, h]).expect("finite")
}

pub fn ket_xm() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_reals(&[h, -h]).expect("finite")
}

pub fn ket_yp() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(vec![C64::new(h, 0.0), C64::new(0.0, h)]).expect("finite")
}

pub fn ket_ym() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(vec![C64::new(h, 0.0), C64::new(0.0, -h)]).expect("finite")
}

/// Qubit state (cos(theta/2) e^{i phi/2}, sin(theta/2) e^{-i phi/2}).
pub fn bloch(theta: f64, phi: f64) -> StateVector {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    StateVector {
        amps: vec![
            C64::from_polar(c, phi / 2.0),
            C64::from_polar(s, -phi / 2.0),
        ],
    }
}

/// Orthogonal complement of a unit 2-dim state: (a0, a1) -> (-conj(a1), conj(a0)).
pub fn orthogonal_complement(v: &StateVector) -> Result<StateVector> {
    if v.dim() != 2 {
        return Err(Error::DimensionMismatch(
            "orthogonal complement defined for 2-dim states".into(),
        ));
    }
    StateVector::new(vec![-v.amp(1).conj(), v.amp(0).conj()])
}
