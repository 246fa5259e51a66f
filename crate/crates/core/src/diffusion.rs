//! Inversion about average (full and partial) and the composite operators
//! built from it.
//!
//! Operators here are applied in time order: for a product written
//! `A B C`, `C` is applied first. Each function records its cost on the
//! supplied [`CostLedger`] following the convention in [`crate::costs`].

use crate::costs::CostLedger;
use crate::error::{invalid, Result};
use crate::kernels;
use crate::statevec::{QubitSet, StateVector};
use serde::Serialize;

/// How to divide the register into sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionSpec {
    /// `eta` contiguous sets of `n / eta` qubits each.
    ExplicitEta(usize),
    /// Sets of `round(alpha * log2(n))` qubits; the last set absorbs any remainder.
    Alpha(f64),
}

/// Ordered, disjoint qubit sets covering the whole register. `sets[0]` is
/// the first set whose inversion about average is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    n_qubits: usize,
    sets: Vec<QubitSet>,
    effective_alpha: f64,
}

impl Partition {
    /// Validates explicit sets: non-empty list, pairwise disjoint, covering
    /// `0..n_qubits`. The effective alpha is taken from the first set's size.
    pub fn from_sets(n_qubits: usize, sets: Vec<QubitSet>) -> Result<Self> {
        if n_qubits < 2 {
            return invalid(format!("a partition needs n >= 2 qubits, got {n_qubits}"));
        }
        if sets.is_empty() {
            return invalid("a partition needs at least one set");
        }
        let mut seen = 0usize;
        for set in &sets {
            set.check_against(n_qubits)?;
            if seen & set.mask() != 0 {
                return invalid(format!("set {set} overlaps an earlier set"));
            }
            seen |= set.mask();
        }
        if seen != (1usize << n_qubits) - 1 {
            return invalid(format!("sets do not cover all {n_qubits} qubits"));
        }
        let effective_alpha = sets[0].len() as f64 / (n_qubits as f64).log2();
        Ok(Self {
            n_qubits,
            sets,
            effective_alpha,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn sets(&self) -> &[QubitSet] {
        &self.sets
    }

    /// Number of sets.
    pub fn eta(&self) -> usize {
        self.sets.len()
    }

    /// `m / log2(n)` where `m` is the size of the regular (first) set.
    pub fn effective_alpha(&self) -> f64 {
        self.effective_alpha
    }

    pub fn is_equal_size(&self) -> bool {
        self.sets.iter().all(|s| s.len() == self.sets[0].len())
    }

    /// `2^|S_i|` for each set, in application order.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.sets.iter().map(QubitSet::block_size).collect()
    }
}

/// Divides `n_qubits` into contiguous sets, lowest qubits first.
pub fn build_partition(n_qubits: usize, spec: PartitionSpec) -> Result<Partition> {
    if n_qubits < 2 {
        return invalid(format!("a partition needs n >= 2 qubits, got {n_qubits}"));
    }
    let (set_size, eta) = match spec {
        PartitionSpec::ExplicitEta(eta) => {
            if eta == 0 || !n_qubits.is_multiple_of(eta) {
                return invalid(format!("eta = {eta} does not divide n = {n_qubits}"));
            }
            (n_qubits / eta, eta)
        }
        PartitionSpec::Alpha(alpha) => {
            if !(alpha.is_finite() && alpha > 1.0) {
                return invalid(format!("alpha must be a finite real > 1, got {alpha}"));
            }
            let m = (alpha * (n_qubits as f64).log2()).round();
            if m < 1.0 {
                return invalid(format!(
                    "alpha = {alpha} gives an empty set for n = {n_qubits}"
                ));
            }
            let m = (m as usize).min(n_qubits);
            (m, n_qubits / m)
        }
    };
    let sets = (0..eta)
        .map(|i| {
            let lo = i * set_size;
            let hi = if i + 1 == eta {
                n_qubits
            } else {
                lo + set_size
            };
            QubitSet::range(lo..hi)
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::from_sets(n_qubits, sets)
}

/// `W^(S)`: Hadamard on every qubit in `set`. Costs `|S|`.
pub fn transform(state: &mut StateVector, set: &QubitSet, ledger: &mut CostLedger) -> Result<()> {
    state.apply_walsh_hadamard(set)?;
    ledger.record_ops(set.len());
    Ok(())
}

/// `I_t`: the oracle call. Costs one query.
pub fn query(state: &mut StateVector, target: usize, ledger: &mut CostLedger) -> Result<()> {
    state.phase_flip_index(target)?;
    ledger.record_query();
    Ok(())
}

/// `I_0^(S)`: inverts every state whose qubits in `set` are all zero. Costs `|S|`.
pub fn reflect_zero(
    state: &mut StateVector,
    set: &QubitSet,
    ledger: &mut CostLedger,
) -> Result<()> {
    state.phase_flip_zero_of_set(set)?;
    ledger.record_ops(set.len());
    Ok(())
}

/// `-W I_0 W`: every amplitude `a_i` becomes `2 * mean - a_i`. Costs `3n`.
pub fn inversion_about_average(state: &mut StateVector, ledger: &mut CostLedger) -> Result<()> {
    let n = state.n_qubits();
    kernels::reflect_blocks_contiguous(state.amplitudes_mut(), 0, n);
    ledger.record_ops(3 * n);
    Ok(())
}

/// `-W^(S) I_0^(S) W^(S)`: an inversion about average inside every block of
/// states that agree on all qubits outside `set`. Costs `3|S|`.
///
/// Executed as one mean pass and one update pass per block rather than as
/// three transform passes; the two are the same linear map.
pub fn partial_inversion_about_average(
    state: &mut StateVector,
    set: &QubitSet,
    ledger: &mut CostLedger,
) -> Result<()> {
    set.check_against(state.n_qubits())?;
    match set.as_range() {
        Some(r) => kernels::reflect_blocks_contiguous(state.amplitudes_mut(), r.start, r.end),
        None => kernels::reflect_blocks_masked(state.amplitudes_mut(), set.mask()),
    }
    ledger.record_ops(3 * set.len());
    Ok(())
}

/// One standard search step: `I_t` followed by inversion about average.
pub fn grover_iteration(
    state: &mut StateVector,
    target: usize,
    ledger: &mut CostLedger,
) -> Result<()> {
    query(state, target, ledger)?;
    inversion_about_average(state, ledger)
}

/// Composite `U`: full `W`, then for each set `S_i` in order, `I_t` followed
/// by the partial inversion on `S_i`. Costs `eta` queries and `4n` other
/// operations for a covering partition.
pub fn apply_composite_u(
    state: &mut StateVector,
    partition: &Partition,
    target: usize,
    ledger: &mut CostLedger,
) -> Result<()> {
    apply_composite_u_observed(state, partition, target, ledger, |_, _| {})
}

/// [`apply_composite_u`] with a hook called as `observer(i, state)` right
/// before the partial inversion on set `i` (zero-based).
pub fn apply_composite_u_observed<F>(
    state: &mut StateVector,
    partition: &Partition,
    target: usize,
    ledger: &mut CostLedger,
    mut observer: F,
) -> Result<()>
where
    F: FnMut(usize, &StateVector),
{
    check_partition(state, partition)?;
    transform(state, &QubitSet::full(state.n_qubits())?, ledger)?;
    composite_body(state, partition, target, ledger, &mut observer)
}

// `U` without its leading `W`.
pub(crate) fn composite_body<F>(
    state: &mut StateVector,
    partition: &Partition,
    target: usize,
    ledger: &mut CostLedger,
    mut observer: F,
) -> Result<()>
where
    F: FnMut(usize, &StateVector),
{
    for (i, set) in partition.sets().iter().enumerate() {
        query(state, target, ledger)?;
        observer(i, state);
        partial_inversion_about_average(state, set, ledger)?;
    }
    Ok(())
}

// `U†` without its trailing `W`.
pub(crate) fn composite_body_dagger(
    state: &mut StateVector,
    partition: &Partition,
    target: usize,
    ledger: &mut CostLedger,
) -> Result<()> {
    for set in partition.sets().iter().rev() {
        partial_inversion_about_average(state, set, ledger)?;
        query(state, target, ledger)?;
    }
    Ok(())
}

/// `U†`: the factors of [`apply_composite_u`] in reverse order.
pub fn apply_composite_u_dagger(
    state: &mut StateVector,
    partition: &Partition,
    target: usize,
    ledger: &mut CostLedger,
) -> Result<()> {
    check_partition(state, partition)?;
    composite_body_dagger(state, partition, target, ledger)?;
    transform(state, &QubitSet::full(state.n_qubits())?, ledger)
}

/// Standard `U`: full `W` followed by `inner_iterations` standard steps.
pub fn apply_standard_u(
    state: &mut StateVector,
    inner_iterations: usize,
    target: usize,
    ledger: &mut CostLedger,
) -> Result<()> {
    transform(state, &QubitSet::full(state.n_qubits())?, ledger)?;
    standard_body(state, inner_iterations, target, ledger)
}

pub(crate) fn standard_body(
    state: &mut StateVector,
    inner_iterations: usize,
    target: usize,
    ledger: &mut CostLedger,
) -> Result<()> {
    for _ in 0..inner_iterations {
        grover_iteration(state, target, ledger)?;
    }
    Ok(())
}

pub(crate) fn standard_body_dagger(
    state: &mut StateVector,
    inner_iterations: usize,
    target: usize,
    ledger: &mut CostLedger,
) -> Result<()> {
    for _ in 0..inner_iterations {
        inversion_about_average(state, ledger)?;
        query(state, target, ledger)?;
    }
    Ok(())
}

/// `W I_0 W` on the whole register, which equals `x -> x - 2 mean(x)`.
/// Recorded as the three operations it replaces (`3n`).
pub(crate) fn transform_reflect_zero_transform(
    state: &mut StateVector,
    ledger: &mut CostLedger,
) -> Result<()> {
    let n = state.n_qubits();
    kernels::reflect_about_uniform(state.amplitudes_mut());
    ledger.record_ops(n);
    ledger.record_ops(n);
    ledger.record_ops(n);
    Ok(())
}

/// Adjoint of [`apply_standard_u`].
pub fn apply_standard_u_dagger(
    state: &mut StateVector,
    inner_iterations: usize,
    target: usize,
    ledger: &mut CostLedger,
) -> Result<()> {
    standard_body_dagger(state, inner_iterations, target, ledger)?;
    transform(state, &QubitSet::full(state.n_qubits())?, ledger)
}

fn check_partition(state: &StateVector, partition: &Partition) -> Result<()> {
    if partition.n_qubits() != state.n_qubits() {
        return invalid(format!(
            "partition is for {} qubits, state has {}",
            partition.n_qubits(),
            state.n_qubits()
        ));
    }
    Ok(())
}
