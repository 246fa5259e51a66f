//! Dense real-amplitude register and the elementary operators composed by
//! the search algorithms.
//!
//! Every operator in scope (Hadamards and selective phase inversions) is
//! real orthogonal, so amplitudes are stored as `f64`. Index `x` is the
//! basis state whose qubit `q` is bit `q` of `x` (qubit 0 least significant).

use crate::error::{invalid, Result};
use crate::kernels;
use rand::Rng;
use std::fmt;
use std::ops::Range;

/// Largest register the simulator will allocate (2^28 doubles, about 2.1 GB).
pub const MAX_QUBITS: usize = 28;

/// A non-empty, sorted set of distinct qubit indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QubitSet {
    members: Vec<usize>,
    mask: usize,
}

impl QubitSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if members.is_empty() {
            return invalid("qubit set must be non-empty");
        }
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return invalid(format!("qubit set {members:?} contains duplicates"));
        }
        if let Some(&q) = members.iter().find(|&&q| q >= MAX_QUBITS) {
            return invalid(format!("qubit {q} exceeds the {MAX_QUBITS}-qubit cap"));
        }
        let mask = members.iter().fold(0usize, |m, &q| m | (1 << q));
        Ok(Self { members, mask })
    }

    /// The qubits `range.start..range.end`.
    pub fn range(range: Range<usize>) -> Result<Self> {
        Self::new(range)
    }

    /// Every qubit of an `n_qubits` register.
    pub fn full(n_qubits: usize) -> Result<Self> {
        Self::new(0..n_qubits)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Bit mask with bit `q` set for every member `q`.
    pub fn mask(&self) -> usize {
        self.mask
    }

    pub fn contains(&self, qubit: usize) -> bool {
        qubit < usize::BITS as usize && self.mask & (1 << qubit) != 0
    }

    /// `Some(lo..hi)` when the members are exactly `lo, lo + 1, ..., hi - 1`.
    pub fn as_range(&self) -> Option<Range<usize>> {
        let lo = self.members[0];
        let hi = self.members[self.members.len() - 1] + 1;
        (hi - lo == self.members.len()).then_some(lo..hi)
    }

    /// Number of basis states in one block of this set (`2^|S|`).
    pub fn block_size(&self) -> usize {
        1 << self.members.len()
    }

    pub(crate) fn check_against(&self, n_qubits: usize) -> Result<()> {
        match self.members.last() {
            Some(&q) if q >= n_qubits => invalid(format!(
                "qubit {q} in set {self} is out of range for a {n_qubits}-qubit register"
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for QubitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_range() {
            Some(r) if r.len() > 2 => write!(f, "{{{}..{}}}", r.start, r.end - 1),
            _ => {
                write!(f, "{{")?;
                for (i, q) in self.members.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{q}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// The `2^n` real amplitudes of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<f64>,
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return invalid(format!(
            "register size {n_qubits} outside 1..={MAX_QUBITS} qubits"
        ));
    }
    Ok(())
}

impl StateVector {
    /// The computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let len = 1usize << n_qubits;
        if index >= len {
            return invalid(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            ));
        }
        let mut amps = vec![0.0; len];
        amps[index] = 1.0;
        Ok(Self { n_qubits, amps })
    }

    /// The all-zero state `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Equal superposition over all basis states.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let len = 1usize << n_qubits;
        let amp = 1.0 / (len as f64).sqrt();
        Ok(Self {
            n_qubits,
            amps: vec![amp; len],
        })
    }

    /// Wraps explicit amplitudes. The length must be a power of two and the
    /// vector must already be normalized to within 1e-10.
    pub fn from_amplitudes(amps: Vec<f64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return invalid(format!("amplitude count {len} is not a power of two >= 2"));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        let state = Self { n_qubits, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return invalid(format!("amplitudes have norm {norm}, expected 1"));
        }
        Ok(state)
    }

    /// A random normalized state with i.i.d. uniform(-1, 1) amplitudes.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self> {
        check_qubits(n_qubits)?;
        let mut amps: Vec<f64> = (0..1usize << n_qubits)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `N = 2^n`.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [f64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amps
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.amps.len() {
            return invalid(format!(
                "index {index} out of range for {} qubits",
                self.n_qubits
            ));
        }
        Ok(())
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return invalid(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            ));
        }
        Ok(())
    }

    pub fn amplitude_at(&self, index: usize) -> Result<f64> {
        self.check_index(index)?;
        Ok(self.amps[index])
    }

    /// Probability of observing basis state `target`.
    pub fn success_probability(&self, target: usize) -> Result<f64> {
        self.amplitude_at(target).map(|a| a * a)
    }

    /// L2 norm, summed sequentially in index order.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Single-qubit Hadamard: `(a, b) -> ((a + b)/sqrt2, (a - b)/sqrt2)` on
    /// every index pair differing only in `qubit`.
    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        kernels::hadamard(&mut self.amps, qubit);
        Ok(())
    }

    /// Hadamard on every qubit of `set`, in ascending qubit order.
    pub fn apply_walsh_hadamard(&mut self, set: &QubitSet) -> Result<()> {
        set.check_against(self.n_qubits)?;
        match set.as_range() {
            Some(r) => kernels::walsh_hadamard_range(&mut self.amps, r.start, r.end),
            None => {
                for &q in set.members() {
                    kernels::hadamard(&mut self.amps, q);
                }
            }
        }
        Ok(())
    }

    /// Selective inversion of the single basis state `target`.
    pub fn phase_flip_index(&mut self, target: usize) -> Result<()> {
        self.check_index(target)?;
        self.amps[target] = -self.amps[target];
        Ok(())
    }

    /// Selective inversion of every basis state whose qubits in `set` are all 0.
    pub fn phase_flip_zero_of_set(&mut self, set: &QubitSet) -> Result<()> {
        set.check_against(self.n_qubits)?;
        kernels::flip_zero(&mut self.amps, set.mask());
        Ok(())
    }
}
