use crate::error::{Error, Result};
use crate::qsim::matrix::CMatrix;
use crate::qsim::state::{check_cap, StateVector};
use crate::scalar::Real;

/// Density operators are only ever built for audits, so they are capped well
/// below the statevector limit.
pub const DENSITY_QUBIT_CAP: usize = 10;

/// Mixed state over `num_qubits` qubits, wire 1 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real = f64> {
    num_qubits: usize,
    matrix: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn from_pure(state: &StateVector<T>) -> Self {
        Self { num_qubits: state.num_qubits(), matrix: CMatrix::outer(state.amplitudes()) }
    }

    /// Validates Hermiticity, unit trace and positivity (each within `T::DEFAULT_TOLERANCE`).
    pub fn from_matrix(matrix: CMatrix<T>) -> Result<Self> {
        let dim = matrix.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: dim.next_power_of_two().max(2), found: dim });
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_cap(num_qubits, DENSITY_QUBIT_CAP)?;
        let tol = T::default_tolerance();
        if !matrix.is_hermitian(tol) {
            return Err(Error::InvalidDensity("not Hermitian".into()));
        }
        let trace = matrix.trace();
        if (trace.re - T::one()).abs() > tol || trace.im.abs() > tol {
            return Err(Error::InvalidDensity(format!("trace is {trace}")));
        }
        let min_eig = matrix.hermitian_eigenvalues()[0];
        if min_eig < -T::DEFAULT_TOLERANCE {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { num_qubits, matrix })
    }

    /// `I / 2^n`
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_cap(num_qubits, DENSITY_QUBIT_CAP)?;
        let dim = 1usize << num_qubits;
        let matrix = CMatrix::identity(dim).scale_real(T::one() / T::from_usize(dim).expect("dim fits"));
        Ok(Self { num_qubits, matrix })
    }

    /// Convex combination `Σ w_k ρ_k`; weights are used as given.
    pub fn mixture(parts: &[(T, DensityMatrix<T>)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptyRegister)?;
        let mut acc = CMatrix::zeros(first.1.matrix.dim());
        for (w, rho) in parts {
            if rho.num_qubits != first.1.num_qubits {
                return Err(Error::DimensionMismatch { expected: first.1.num_qubits, found: rho.num_qubits });
            }
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Ok(Self { num_qubits: first.1.num_qubits, matrix: acc })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// `U ρ U†` for a full-register operator `U`.
    pub fn conjugate(&self, op: &CMatrix<T>) -> Result<Self> {
        if op.dim() != self.matrix.dim() {
            return Err(Error::DimensionMismatch { expected: self.matrix.dim(), found: op.dim() });
        }
        Ok(Self { num_qubits: self.num_qubits, matrix: &(op * &self.matrix) * &op.adjoint() })
    }

    /// `self ⊗ other`
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let num_qubits = self.num_qubits + other.num_qubits;
        check_cap(num_qubits, DENSITY_QUBIT_CAP)?;
        Ok(Self { num_qubits, matrix: self.matrix.kron(&other.matrix) })
    }

    /// Traces out every wire not listed in `keep` (1-based wire indices).
    /// Kept wires retain their relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let n = self.num_qubits;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        for pair in kept.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateWire(pair[0]));
            }
        }
        if let Some(&w) = kept.iter().find(|&&w| w == 0 || w > n) {
            return Err(Error::WireOutOfRange { wire: w, num_qubits: n });
        }
        let traced: Vec<usize> = (1..=n).filter(|w| !kept.contains(w)).collect();
        let mask = |w: usize| 1usize << (n - w);
        // Spread the bits of a compact index over the masks of `wires`.
        let spread = |compact: usize, wires: &[usize]| {
            wires.iter().enumerate().fold(0usize, |acc, (k, &w)| {
                if compact & (1 << (wires.len() - 1 - k)) != 0 {
                    acc | mask(w)
                } else {
                    acc
                }
            })
        };
        let out_dim = 1usize << kept.len();
        let mut out = CMatrix::zeros(out_dim);
        for i in 0..out_dim {
            let fi = spread(i, &kept);
            for j in 0..out_dim {
                let fj = spread(j, &kept);
                let mut sum = out[(i, j)];
                for t in 0..1usize << traced.len() {
                    let ft = spread(t, &traced);
                    sum = sum + self.matrix[(fi | ft, fj | ft)];
                }
                out[(i, j)] = sum;
            }
        }
        Ok(Self { num_qubits: kept.len(), matrix: out })
    }

    /// `Tr|ρ − σ|`, without the conventional factor ½: orthogonal pure states
    /// are at distance 2.
    pub fn trace_distance(&self, other: &Self) -> Result<T> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, found: other.num_qubits });
        }
        let diff = &self.matrix - &other.matrix;
        let total: f64 = diff.hermitian_eigenvalues().iter().map(|e| e.abs()).sum();
        Ok(T::lit(total))
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }
}

pub fn partial_trace<T: Real>(dm: &DensityMatrix<T>, keep: &[usize]) -> Result<DensityMatrix<T>> {
    dm.partial_trace(keep)
}

pub fn trace_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    rho.trace_distance(sigma)
}
