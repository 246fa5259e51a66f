//! Brute-force dense matrices for every operator, used to check the fast
//! kernels. Nothing here calls the fast path except [`FastKernels`], which
//! is the thing under test.

use crate::costs::CostLedger;
use crate::diffusion::{self, build_partition, Partition, PartitionSpec};
use crate::error::{invalid, Error, Result};
use crate::statevec::{QubitSet, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

/// Largest register for a single dense operator (8 MB of entries).
pub const MAX_DENSE_QUBITS: usize = 10;

/// Largest register for dense operator products.
pub const MAX_PRODUCT_QUBITS: usize = 8;

/// A `2^n x 2^n` real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n_qubits: usize,
    dim: usize,
    entries: Vec<f64>,
}

fn check_dense(n_qubits: usize, cap: usize) -> Result<()> {
    if n_qubits == 0 {
        return invalid("dense operators need n >= 1");
    }
    if n_qubits > cap {
        return Err(Error::ResourceLimit(format!(
            "dense operator on {n_qubits} qubits exceeds the {cap}-qubit cap"
        )));
    }
    Ok(())
}

fn check_set(n_qubits: usize, set: &QubitSet) -> Result<()> {
    match set.members().last() {
        Some(&q) if q >= n_qubits => {
            invalid(format!("set {set} out of range for {n_qubits} qubits"))
        }
        _ => Ok(()),
    }
}

impl DenseOperator {
    fn from_fn(n_qubits: usize, cap: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        check_dense(n_qubits, cap)?;
        let dim = 1usize << n_qubits;
        let mut entries = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            for col in 0..dim {
                entries.push(f(row, col));
            }
        }
        Ok(Self {
            n_qubits,
            dim,
            entries,
        })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_fn(
            n_qubits,
            MAX_DENSE_QUBITS,
            |r, c| if r == c { 1.0 } else { 0.0 },
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    /// `self * rhs`: applying the result means applying `rhs` first.
    pub fn matmul(&self, rhs: &DenseOperator) -> Result<DenseOperator> {
        if self.dim != rhs.dim {
            return invalid("dimension mismatch in matmul");
        }
        check_dense(self.n_qubits, MAX_PRODUCT_QUBITS)?;
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == 0.0 {
                    continue;
                }
                let row = &rhs.entries[k * d..(k + 1) * d];
                for (o, b) in out[i * d..(i + 1) * d].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(DenseOperator {
            n_qubits: self.n_qubits,
            dim: d,
            entries: out,
        })
    }

    pub fn transpose(&self) -> DenseOperator {
        let d = self.dim;
        let mut entries = vec![0.0; d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c];
            }
        }
        DenseOperator {
            n_qubits: self.n_qubits,
            dim: d,
            entries,
        }
    }

    pub fn scaled(mut self, factor: f64) -> DenseOperator {
        self.entries.iter_mut().for_each(|e| *e *= factor);
        self
    }

    pub fn apply(&self, input: &[f64]) -> Vec<f64> {
        assert_eq!(
            input.len(),
            self.dim,
            "vector length must match the operator"
        );
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(input).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// Largest entry of `|M^T M - I|`.
    pub fn orthogonality_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let dot: f64 = (0..d)
                    .map(|k| self.entries[k * d + i] * self.entries[k * d + j])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Largest `|self - other|` entry.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn parity_sign(bits: usize) -> f64 {
    if bits.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `W_xy = (-1)^(x . y) / sqrt(N)`.
pub fn dense_walsh_hadamard(n_qubits: usize) -> Result<DenseOperator> {
    let scale = 1.0 / ((1usize << n_qubits.min(63)) as f64).sqrt();
    DenseOperator::from_fn(n_qubits, MAX_DENSE_QUBITS, |x, y| {
        parity_sign(x & y) * scale
    })
}

/// `W^(S)`: zero unless `x` and `y` agree outside `S`, otherwise
/// `(-1)^(x . y restricted to S) / sqrt(2^|S|)`.
pub fn dense_walsh_hadamard_set(n_qubits: usize, set: &QubitSet) -> Result<DenseOperator> {
    check_set(n_qubits, set)?;
    let mask = set.mask();
    let scale = 1.0 / (set.block_size() as f64).sqrt();
    DenseOperator::from_fn(n_qubits, MAX_DENSE_QUBITS, |x, y| {
        if (x ^ y) & !mask != 0 {
            0.0
        } else {
            parity_sign(x & y & mask) * scale
        }
    })
}

pub fn dense_hadamard(n_qubits: usize, qubit: usize) -> Result<DenseOperator> {
    dense_walsh_hadamard_set(n_qubits, &QubitSet::new([qubit])?)
}

/// `I_t`: identity with `-1` at `(t, t)`.
pub fn dense_phase_flip_index(n_qubits: usize, target: usize) -> Result<DenseOperator> {
    if target >= 1usize << n_qubits.min(63) {
        return invalid(format!(
            "target {target} out of range for {n_qubits} qubits"
        ));
    }
    DenseOperator::from_fn(n_qubits, MAX_DENSE_QUBITS, |r, c| {
        match (r == c, r == target) {
            (false, _) => 0.0,
            (true, true) => -1.0,
            (true, false) => 1.0,
        }
    })
}

/// `I_0^(S)`: diagonal, `-1` where every qubit of `S` is zero.
pub fn dense_phase_flip_zero(n_qubits: usize, set: &QubitSet) -> Result<DenseOperator> {
    check_set(n_qubits, set)?;
    let mask = set.mask();
    DenseOperator::from_fn(n_qubits, MAX_DENSE_QUBITS, |r, c| {
        if r != c {
            0.0
        } else if r & mask == 0 {
            -1.0
        } else {
            1.0
        }
    })
}

/// `2P - I` with `P` the all-`1/N` matrix.
pub fn dense_inversion_about_average(n_qubits: usize) -> Result<DenseOperator> {
    let two_over_n = 2.0 / (1usize << n_qubits.min(63)) as f64;
    DenseOperator::from_fn(n_qubits, MAX_DENSE_QUBITS, |r, c| {
        if r == c {
            two_over_n - 1.0
        } else {
            two_over_n
        }
    })
}

/// `-W^(S) I_0^(S) W^(S)` as an explicit product.
pub fn dense_partial_inversion(n_qubits: usize, set: &QubitSet) -> Result<DenseOperator> {
    check_dense(n_qubits, MAX_PRODUCT_QUBITS)?;
    let w = dense_walsh_hadamard_set(n_qubits, set)?;
    let i0 = dense_phase_flip_zero(n_qubits, set)?;
    Ok(w.matmul(&i0)?.matmul(&w)?.scaled(-1.0))
}

/// `U = P_eta I_t ... P_1 I_t W`, multiplied out factor by factor.
pub fn dense_composite_u(
    n_qubits: usize,
    partition: &Partition,
    target: usize,
) -> Result<DenseOperator> {
    check_dense(n_qubits, MAX_PRODUCT_QUBITS)?;
    let flip = dense_phase_flip_index(n_qubits, target)?;
    let mut u = dense_walsh_hadamard(n_qubits)?;
    for set in partition.sets() {
        u = flip.matmul(&u)?;
        u = dense_partial_inversion(n_qubits, set)?.matmul(&u)?;
    }
    Ok(u)
}

/// `U† = W I_t P_1 ... I_t P_eta`, multiplied out factor by factor.
pub fn dense_composite_u_dagger(
    n_qubits: usize,
    partition: &Partition,
    target: usize,
) -> Result<DenseOperator> {
    check_dense(n_qubits, MAX_PRODUCT_QUBITS)?;
    let flip = dense_phase_flip_index(n_qubits, target)?;
    let mut u = DenseOperator::identity(n_qubits)?;
    for set in partition.sets().iter().rev() {
        u = dense_partial_inversion(n_qubits, set)?.matmul(&u)?;
        u = flip.matmul(&u)?;
    }
    dense_walsh_hadamard(n_qubits)?.matmul(&u)
}

/// Target amplitude of the composite `U` applied to `|0>`, from the block
/// recurrence `a_0 = 1`, `a_i = a_(i-1) (1 - 2/B_i) + 2 (B_i - 1) / B_i`,
/// returning `a_eta / sqrt(N)`.
pub fn recurrence_uts(n_qubits: usize, block_sizes: &[usize]) -> f64 {
    let a = block_sizes.iter().fold(1.0f64, |a, &b| {
        let b = b as f64;
        a * (1.0 - 2.0 / b) + 2.0 * (b - 1.0) / b
    });
    a / (n_qubits as f64 / 2.0).exp2()
}

/// Operators covered by the equivalence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Hadamard,
    WalshHadamard,
    WalshHadamardSet,
    PhaseFlipIndex,
    PhaseFlipZeroSet,
    InversionAboutAverage,
    PartialInversion,
    CompositeU,
    CompositeUDagger,
}

impl Operator {
    pub const ALL: [Operator; 9] = [
        Operator::Hadamard,
        Operator::WalshHadamard,
        Operator::WalshHadamardSet,
        Operator::PhaseFlipIndex,
        Operator::PhaseFlipZeroSet,
        Operator::InversionAboutAverage,
        Operator::PartialInversion,
        Operator::CompositeU,
        Operator::CompositeUDagger,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Operator::Hadamard => "hadamard",
            Operator::WalshHadamard => "walsh_hadamard",
            Operator::WalshHadamardSet => "walsh_hadamard_set",
            Operator::PhaseFlipIndex => "phase_flip_index",
            Operator::PhaseFlipZeroSet => "phase_flip_zero_set",
            Operator::InversionAboutAverage => "inversion_about_average",
            Operator::PartialInversion => "partial_inversion",
            Operator::CompositeU => "composite_u",
            Operator::CompositeUDagger => "composite_u_dagger",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The fast operators under test. Every method defaults to the production
/// kernel; a test double overrides the one it wants to break.
pub trait KernelSet: Sync {
    fn hadamard(&self, s: &mut StateVector, qubit: usize) -> Result<()> {
        s.apply_hadamard(qubit)
    }
    fn walsh_hadamard(&self, s: &mut StateVector, set: &QubitSet) -> Result<()> {
        s.apply_walsh_hadamard(set)
    }
    fn phase_flip_index(&self, s: &mut StateVector, target: usize) -> Result<()> {
        s.phase_flip_index(target)
    }
    fn phase_flip_zero(&self, s: &mut StateVector, set: &QubitSet) -> Result<()> {
        s.phase_flip_zero_of_set(set)
    }
    fn inversion_about_average(&self, s: &mut StateVector) -> Result<()> {
        diffusion::inversion_about_average(s, &mut CostLedger::default())
    }
    fn partial_inversion(&self, s: &mut StateVector, set: &QubitSet) -> Result<()> {
        diffusion::partial_inversion_about_average(s, set, &mut CostLedger::default())
    }
    fn composite_u(&self, s: &mut StateVector, p: &Partition, target: usize) -> Result<()> {
        diffusion::apply_composite_u(s, p, target, &mut CostLedger::default())
    }
    fn composite_u_dagger(&self, s: &mut StateVector, p: &Partition, target: usize) -> Result<()> {
        diffusion::apply_composite_u_dagger(s, p, target, &mut CostLedger::default())
    }
}

/// The production kernels.
#[derive(Debug, Clone, Copy, Default)]
pub struct FastKernels;

impl KernelSet for FastKernels {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub n_min: usize,
    pub n_max: usize,
    pub trials: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n_min: 2,
            n_max: MAX_PRODUCT_QUBITS,
            trials: 50,
            tolerance: 1e-10,
            seed: 0,
        }
    }
}

/// One operator instance checked against its dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorCheck {
    pub operator: Operator,
    pub n_qubits: usize,
    pub parameter: String,
    pub inputs: usize,
    pub max_deviation: f64,
    pub orthogonality_deviation: f64,
}

/// Fast `U` on `|0>`, the block recurrence and the dense `U` compared at the target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceCheck {
    pub n_qubits: usize,
    pub eta: usize,
    pub target: usize,
    pub fast: f64,
    pub recurrence: f64,
    pub dense: f64,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct EquivalenceReport {
    pub operators: Vec<OperatorCheck>,
    pub recurrence: Vec<RecurrenceCheck>,
}

impl EquivalenceReport {
    /// Worst deviation per operator, in [`Operator::ALL`] order.
    pub fn max_deviation_by_operator(&self) -> Vec<(Operator, f64)> {
        Operator::ALL
            .iter()
            .filter_map(|&op| {
                self.operators
                    .iter()
                    .filter(|c| c.operator == op)
                    .map(|c| c.max_deviation)
                    .reduce(f64::max)
                    .map(|d| (op, d))
            })
            .collect()
    }

    pub fn max_recurrence_deviation(&self) -> f64 {
        self.recurrence
            .iter()
            .map(|c| c.max_deviation)
            .fold(0.0, f64::max)
    }
}

fn probe_sets(n: usize) -> Result<Vec<QubitSet>> {
    let mut sets = vec![
        QubitSet::full(n)?,
        QubitSet::new([0])?,
        QubitSet::new([n - 1])?,
        QubitSet::new((0..n).step_by(2))?,
        QubitSet::range(0..n / 2)?,
        QubitSet::range(n / 2..n)?,
    ];
    if n >= 2 {
        sets.push(QubitSet::new((1..n).step_by(2))?);
    }
    sets.sort_by_key(|s| s.mask());
    sets.dedup();
    Ok(sets)
}

fn probe_targets(n: usize) -> Vec<usize> {
    let dim = 1usize << n;
    let mut t = vec![0, dim - 1, dim / 3];
    t.sort_unstable();
    t.dedup();
    t
}

struct Probe<'a> {
    inputs: &'a [(String, StateVector)],
    tolerance: f64,
    report: &'a mut EquivalenceReport,
}

impl Probe<'_> {
    fn check(
        &mut self,
        operator: Operator,
        parameter: String,
        dense: &DenseOperator,
        mut fast: impl FnMut(&mut StateVector) -> Result<()>,
    ) -> Result<()> {
        let n_qubits = dense.n_qubits();
        let mut worst = 0.0f64;
        for (label, input) in self.inputs {
            let expected = dense.apply(input.amplitudes());
            let mut state = input.clone();
            fast(&mut state)?;
            let dev = state
                .amplitudes()
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if dev.is_nan() || dev > self.tolerance {
                return Err(Error::Equivalence {
                    operator: operator.name().to_string(),
                    n_qubits,
                    input: format!("{parameter}, input {label}"),
                    deviation: dev,
                    tolerance: self.tolerance,
                });
            }
            worst = worst.max(dev);
        }
        let ortho = dense.orthogonality_deviation();
        if ortho.is_nan() || ortho > self.tolerance {
            return Err(Error::Equivalence {
                operator: operator.name().to_string(),
                n_qubits,
                input: format!("{parameter}, dense matrix not orthogonal"),
                deviation: ortho,
                tolerance: self.tolerance,
            });
        }
        self.report.operators.push(OperatorCheck {
            operator,
            n_qubits,
            parameter,
            inputs: self.inputs.len(),
            max_deviation: worst,
            orthogonality_deviation: ortho,
        });
        Ok(())
    }
}

/// Applies every fast operator and its dense matrix to all basis states and
/// `trials` random states for each `n` in `n_min..=n_max`, and checks the
/// composite `U` on `|0>` against the block recurrence. Fails on the first
/// deviation above the tolerance.
pub fn verify_equivalence(
    options: &VerifyOptions,
    kernels: &dyn KernelSet,
) -> Result<EquivalenceReport> {
    if options.n_min < 2 || options.n_min > options.n_max {
        return invalid(format!(
            "bad register range {}..={}",
            options.n_min, options.n_max
        ));
    }
    check_dense(options.n_max, MAX_PRODUCT_QUBITS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut report = EquivalenceReport::default();

    for n in options.n_min..=options.n_max {
        let dim = 1usize << n;
        let mut inputs: Vec<(String, StateVector)> = (0..dim)
            .map(|i| Ok((format!("basis |{i}>"), StateVector::basis(n, i)?)))
            .collect::<Result<_>>()?;
        for k in 0..options.trials {
            inputs.push((format!("random #{k}"), StateVector::random(n, &mut rng)?));
        }
        let mut probe = Probe {
            inputs: &inputs,
            tolerance: options.tolerance,
            report: &mut report,
        };

        for q in 0..n {
            let dense = dense_hadamard(n, q)?;
            probe.check(Operator::Hadamard, format!("qubit {q}"), &dense, |s| {
                kernels.hadamard(s, q)
            })?;
        }
        let full = QubitSet::full(n)?;
        let dense = dense_walsh_hadamard(n)?;
        probe.check(Operator::WalshHadamard, "full".into(), &dense, |s| {
            kernels.walsh_hadamard(s, &full)
        })?;
        let dense = dense_inversion_about_average(n)?;
        probe.check(
            Operator::InversionAboutAverage,
            "full".into(),
            &dense,
            |s| kernels.inversion_about_average(s),
        )?;
        for t in probe_targets(n) {
            let dense = dense_phase_flip_index(n, t)?;
            probe.check(Operator::PhaseFlipIndex, format!("t = {t}"), &dense, |s| {
                kernels.phase_flip_index(s, t)
            })?;
        }
        for set in probe_sets(n)? {
            let param = format!("S = {set}");
            let dense = dense_walsh_hadamard_set(n, &set)?;
            probe.check(Operator::WalshHadamardSet, param.clone(), &dense, |s| {
                kernels.walsh_hadamard(s, &set)
            })?;
            let dense = dense_phase_flip_zero(n, &set)?;
            probe.check(Operator::PhaseFlipZeroSet, param.clone(), &dense, |s| {
                kernels.phase_flip_zero(s, &set)
            })?;
            let dense = dense_partial_inversion(n, &set)?;
            probe.check(Operator::PartialInversion, param, &dense, |s| {
                kernels.partial_inversion(s, &set)
            })?;
        }
        for eta in (1..=n).filter(|e| n % e == 0) {
            let partition = build_partition(n, PartitionSpec::ExplicitEta(eta))?;
            let t = rand::Rng::random_range(&mut rng, 0..dim);
            let param = format!("eta = {eta}, t = {t}");
            let u = dense_composite_u(n, &partition, t)?;
            probe.check(Operator::CompositeU, param.clone(), &u, |s| {
                kernels.composite_u(s, &partition, t)
            })?;
            let u_dagger = dense_composite_u_dagger(n, &partition, t)?;
            probe.check(Operator::CompositeUDagger, param.clone(), &u_dagger, |s| {
                kernels.composite_u_dagger(s, &partition, t)
            })?;

            let mut s = StateVector::zero(n)?;
            kernels.composite_u(&mut s, &partition, t)?;
            let fast = s.amplitude_at(t)?;
            let recurrence = recurrence_uts(n, &partition.block_sizes());
            let dense = u.entry(t, 0);
            let dev = (fast - recurrence).abs().max((dense - recurrence).abs());
            if dev.is_nan() || dev > options.tolerance {
                return Err(Error::Equivalence {
                    operator: "recurrence".into(),
                    n_qubits: n,
                    input: param,
                    deviation: dev,
                    tolerance: options.tolerance,
                });
            }
            probe.report.recurrence.push(RecurrenceCheck {
                n_qubits: n,
                eta,
                target: t,
                fast,
                recurrence,
                dense,
                max_deviation: dev,
            });
        }
    }
    Ok(report)
}
