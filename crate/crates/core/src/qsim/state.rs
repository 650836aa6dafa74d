use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::qsim::density::DensityMatrix;
use crate::qsim::gate::Gate;
use crate::qsim::matrix::CMatrix;
use crate::scalar::{cone, czero, Real};

/// Largest register the simulator will allocate unless told otherwise.
/// 2^22 double-precision amplitudes is 64 MiB.
pub const DEFAULT_QUBIT_CAP: usize = 22;

/// Dense pure state of `num_qubits` qubits.
///
/// Wire 1 is the most significant bit of the amplitude index, so the basis
/// state `|b_1 b_2 … b_n⟩` sits at index `b_1·2^(n-1) + … + b_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real = f64> {
    num_qubits: usize,
    amps: Vec<Complex<T>>,
}

pub(crate) fn check_cap(num_qubits: usize, cap: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::EmptyRegister);
    }
    if num_qubits > cap {
        return Err(Error::CapExceeded { requested: num_qubits, cap });
    }
    Ok(())
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩` on `num_qubits` qubits, bounded by [`DEFAULT_QUBIT_CAP`].
    pub fn new(num_qubits: usize) -> Result<Self> {
        Self::with_cap(num_qubits, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(num_qubits: usize, cap: usize) -> Result<Self> {
        Self::basis_with_cap(num_qubits, 0, cap)
    }

    /// Computational basis state with the given index.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        Self::basis_with_cap(num_qubits, index, DEFAULT_QUBIT_CAP)
    }

    fn basis_with_cap(num_qubits: usize, index: usize, cap: usize) -> Result<Self> {
        check_cap(num_qubits, cap)?;
        let len = 1usize << num_qubits;
        if index >= len {
            return Err(Error::DimensionMismatch { expected: len, found: index });
        }
        let mut amps = vec![czero(); len];
        amps[index] = cone();
        Ok(Self { num_qubits, amps })
    }

    /// Basis state from bits listed wire 1 first.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Self::basis(bits.len(), index)
    }

    /// Wraps amplitudes that are already normalized to within `T::DEFAULT_TOLERANCE`.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let num_qubits = qubits_for_len(amps.len())?;
        let state = Self { num_qubits, amps };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - T::one()).abs() > T::default_tolerance() {
            return Err(Error::NotNormalized { norm_sqr: norm_sqr.as_f64() });
        }
        Ok(state)
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex<T>>) -> Result<Self> {
        let num_qubits = qubits_for_len(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).fold(T::zero(), |x, y| x + y).sqrt();
        if norm <= T::epsilon() {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { num_qubits, amps })
    }

    /// Haar-random pure state (normalized complex Gaussian vector).
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_cap(num_qubits, DEFAULT_QUBIT_CAP)?;
        let amps = (0..1usize << num_qubits)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(T::lit(re), T::lit(im))
            })
            .collect();
        Self::normalized(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).fold(T::zero(), |x, y| x + y)
    }

    /// Bit mask of `wire` within an amplitude index.
    pub(crate) fn mask(&self, wire: usize) -> usize {
        1usize << (self.num_qubits - wire)
    }

    pub(crate) fn check_wire(&self, wire: usize) -> Result<()> {
        if wire == 0 || wire > self.num_qubits {
            return Err(Error::WireOutOfRange { wire, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_wire(a)?;
        self.check_wire(b)?;
        if a == b {
            return Err(Error::DuplicateWire(a));
        }
        Ok(())
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::X(w) | Gate::Z(w) | Gate::H(w) | Gate::P(w) | Gate::T(w) | Gate::TDagger(w) => {
                self.apply_single(w, &gate.kind().matrix())
            }
            Gate::Cnot { control, target } => {
                self.check_pair(control, target)?;
                let (cm, tm) = (self.mask(control), self.mask(target));
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
                Ok(())
            }
            Gate::Swap(a, b) => {
                self.check_pair(a, b)?;
                let (am, bm) = (self.mask(a), self.mask(b));
                for i in 0..self.amps.len() {
                    if i & am != 0 && i & bm == 0 {
                        self.amps.swap(i, i ^ am ^ bm);
                    }
                }
                Ok(())
            }
        }
    }

    /// Consuming form of [`StateVector::apply`].
    pub fn apply_gate(mut self, gate: &Gate) -> Result<Self> {
        self.apply(gate)?;
        Ok(self)
    }

    /// Applies an arbitrary 2×2 operator to one wire.
    pub fn apply_single(&mut self, wire: usize, op: &CMatrix<T>) -> Result<()> {
        self.check_wire(wire)?;
        if op.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: op.dim() });
        }
        let mask = self.mask(wire);
        let (m00, m01, m10, m11) = (op[(0, 0)], op[(0, 1)], op[(1, 0)], op[(1, 1)]);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m00 * a0 + m01 * a1;
                self.amps[j] = m10 * a0 + m11 * a1;
            }
        }
        Ok(())
    }

    /// `self ⊗ other`; `other`'s wires follow this state's wires.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let num_qubits = self.num_qubits + other.num_qubits;
        check_cap(num_qubits, DEFAULT_QUBIT_CAP)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| *a * *b))
            .collect();
        Ok(Self { num_qubits, amps })
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, found: other.num_qubits });
        }
        Ok(self.amps.iter().zip(&other.amps).fold(czero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn fidelity_up_to_phase(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm().min(T::one()))
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_pure(self)
    }

    pub(crate) fn from_raw(num_qubits: usize, amps: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << num_qubits);
        Self { num_qubits, amps }
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: len.next_power_of_two().max(2), found: len });
    }
    let num_qubits = len.trailing_zeros() as usize;
    check_cap(num_qubits, DEFAULT_QUBIT_CAP)?;
    Ok(num_qubits)
}

/// `|0…0⟩` on `num_qubits` qubits.
pub fn new_state<T: Real>(num_qubits: usize) -> Result<StateVector<T>> {
    StateVector::new(num_qubits)
}

/// Applies `gate`, returning the transformed state.
pub fn apply_gate<T: Real>(state: StateVector<T>, gate: &Gate) -> Result<StateVector<T>> {
    state.apply_gate(gate)
}

/// `|⟨a|b⟩|`
pub fn fidelity_up_to_phase<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    a.fidelity_up_to_phase(b)
}
