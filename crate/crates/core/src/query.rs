//! The quantum query model: the standard oracle `O_x|i⟩|b⟩ = |i⟩|b + x_i⟩`,
//! its phase form under Fourier conjugation, cyclic shifts, POVM measurement
//! in the Fourier basis, and the per-run query ledger.
//!
//! Operators between queries are either diagonal or act on a single register,
//! so diagonal operators are stored as phase tables and applied in O(n²); the
//! dense `n²×n²` composite forms exist only for small-n cross-validation.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{phi_state, unit_phase, StateVector, UnitaryMatrix, NORM_TOL};

/// An n-bit input string `x = x_0 ⋯ x_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    /// Wrap a bit vector; every element must be 0 or 1.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidDimension("bit string must be non-empty".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Malformed("bit string entries must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0; n])
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    /// Decode `index` into n bits with `x_i = (index >> i) & 1`.
    pub fn from_index(index: u64, n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidDimension(format!("index encoding supports 1..=64 bits, got {n}")));
        }
        Self::new((0..n).map(|i| ((index >> i) & 1) as u8).collect())
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Number of 1-bits, `|x|`.
    pub fn hamming_weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// The substring `x_offset ⋯ x_{offset+len-1}` as an owned value.
    pub fn window(&self, offset: usize, len: usize) -> Result<Self> {
        if offset + len > self.n() {
            return Err(Error::OutOfRange(format!(
                "window [{offset}, {}) exceeds length {}",
                offset + len,
                self.n()
            )));
        }
        Self::new(self.bits[offset..offset + len].to_vec())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Malformed(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::new(bits)
    }
}

/// Joint state of the index and phase registers (`Z_n × Z_n`).
///
/// The algorithms keep the phase register in a computational basis state, so
/// the factorized form is the default execution path. The full n²-dimensional
/// form exists for cross-validation at small n; composite basis `|j⟩|b⟩` maps
/// to flat index `j·n + b`.
#[derive(Clone, Debug)]
pub enum CompositeState {
    /// Index-register state with the phase register pinned to `|phase⟩`.
    Factorized { index: StateVector, phase: usize },
    /// Dense state over the composite space.
    Full { n: usize, state: StateVector },
}

impl CompositeState {
    /// `|ψ_0⟩ = (1/√n) Σ_j |j⟩|0⟩` in factorized form.
    pub fn initial_factorized(n: usize) -> Result<Self> {
        Ok(Self::Factorized { index: phi_state(n, 0)?, phase: 0 })
    }

    /// The same initial state materialized over the full composite space.
    pub fn initial_full(n: usize) -> Result<Self> {
        let index = phi_state(n, 0)?;
        let phase = StateVector::basis(n, 0)?;
        Ok(Self::Full { n, state: index.tensor(&phase) })
    }

    /// Register dimension n.
    pub fn n(&self) -> usize {
        match self {
            Self::Factorized { index, .. } => index.dim(),
            Self::Full { n, .. } => *n,
        }
    }

    /// Materialize the full n²-dimensional vector.
    pub fn to_full(&self) -> Result<StateVector> {
        match self {
            Self::Factorized { index, phase } => {
                let basis = StateVector::basis(index.dim(), *phase)?;
                Ok(index.tensor(&basis))
            }
            Self::Full { state, .. } => Ok(state.clone()),
        }
    }

    /// Apply `I ⊗ U_1`: add one to the phase register modulo n.
    pub fn increment_phase_register(&mut self) {
        match self {
            Self::Factorized { index, phase } => {
                *phase = (*phase + 1) % index.dim();
            }
            Self::Full { n, state } => {
                let n = *n;
                let old = state.amplitudes().to_vec();
                let amps = state.amps_mut();
                for j in 0..n {
                    for b in 0..n {
                        amps[j * n + (b + 1) % n] = old[j * n + b];
                    }
                }
            }
        }
    }

    /// Probability mass of each phase-register value b.
    pub fn phase_register_distribution(&self) -> Vec<f64> {
        match self {
            Self::Factorized { index, phase } => {
                let mut dist = vec![0.0; index.dim()];
                dist[*phase] = 1.0;
                dist
            }
            Self::Full { n, state } => {
                let mut dist = vec![0.0; *n];
                for (flat, a) in state.amplitudes().iter().enumerate() {
                    dist[flat % n] += a.norm_sqr();
                }
                dist
            }
        }
    }

    /// The most likely phase-register value and the mass outside it.
    pub fn dominant_phase(&self) -> (usize, f64) {
        let dist = self.phase_register_distribution();
        let (b, _) = dist
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc });
        let off: f64 = dist.iter().enumerate().filter(|&(i, _)| i != b).map(|(_, &p)| p).sum();
        (b, off)
    }

    /// Index-register state, available on the factorized path.
    pub fn index_register(&self) -> Option<&StateVector> {
        match self {
            Self::Factorized { index, .. } => Some(index),
            Self::Full { .. } => None,
        }
    }
}

/// A diagonal operator on the composite space, stored as a phase table:
/// the entry at `(j, b)` is `e^{i·angle(j,b)}`.
#[derive(Clone, Debug)]
pub struct DiagonalPhases {
    n: usize,
    angles: Vec<f64>,
}

impl DiagonalPhases {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn angle(&self, j: usize, b: usize) -> f64 {
        self.angles[j * self.n + b]
    }

    pub fn entry(&self, j: usize, b: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.angle(j, b))
    }

    /// Multiply the state by the diagonal, on either representation.
    pub fn apply(&self, state: &mut CompositeState) {
        assert_eq!(self.n, state.n(), "diagonal/state dimension mismatch");
        match state {
            CompositeState::Factorized { index, phase } => {
                let b = *phase;
                for (j, amp) in index.amps_mut().iter_mut().enumerate() {
                    let a = self.angle(j, b);
                    if a != 0.0 {
                        *amp *= Complex64::from_polar(1.0, a);
                    }
                }
            }
            CompositeState::Full { state, .. } => {
                for (flat, amp) in state.amps_mut().iter_mut().enumerate() {
                    let a = self.angles[flat];
                    if a != 0.0 {
                        *amp *= Complex64::from_polar(1.0, a);
                    }
                }
            }
        }
    }

    /// Dense form for cross-validation at small n.
    pub fn to_dense(&self) -> Result<UnitaryMatrix> {
        let dim = self.n * self.n;
        UnitaryMatrix::from_fn(dim, |r, c| {
            if r == c {
                Complex64::from_polar(1.0, self.angles[r])
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// The standard oracle `O_x|i⟩|b⟩ = |i⟩|(b + x_i) mod n⟩` in dense form.
pub fn standard_oracle(x: &BitString) -> Result<UnitaryMatrix> {
    let n = x.n();
    UnitaryMatrix::permutation(n * n, |flat| {
        let (i, b) = (flat / n, flat % n);
        i * n + (b + x.bit(i) as usize) % n
    })
}

/// The phase oracle `Ô_x|j,b⟩ = e^{ibθx_j}|j,b⟩` as a phase table, θ = 2π/n.
pub fn phase_oracle(x: &BitString) -> DiagonalPhases {
    shifted_phase_oracle(x, 0)
}

/// The cyclic shift `U_a|i⟩ = |(i + a) mod n⟩` in dense form.
pub fn shift_operator(n: usize, a: usize) -> Result<UnitaryMatrix> {
    UnitaryMatrix::permutation(n, |i| (i + a) % n)
}

/// The shifted phase oracle `O_{x,a}|j,b⟩ = e^{ibθx_{j-a}}|j,b⟩`, subtraction
/// modulo n.
pub fn shifted_phase_oracle(x: &BitString, a: usize) -> DiagonalPhases {
    let n = x.n();
    let theta = TAU / n as f64;
    let mut angles = vec![0.0; n * n];
    for j in 0..n {
        if x.bit((j + n - a % n) % n) == 1 {
            for b in 1..n {
                angles[j * n + b] = b as f64 * theta;
            }
        }
    }
    DiagonalPhases { n, angles }
}

/// Outcome of a Fourier-basis POVM measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome {
    /// The sampled outcome j.
    pub outcome: usize,
    /// `p(j) = |⟨φ_j|s⟩|²` for every j.
    pub distribution: Vec<f64>,
}

/// The distribution `p(j) = |⟨φ_j|s⟩|²` over Fourier-basis outcomes.
pub fn povm_distribution(s: &StateVector) -> Vec<f64> {
    let n = s.dim();
    let scale = 1.0 / (n as f64).sqrt();
    // roots[t] = e^{-i·t·2π/n}
    let roots: Vec<Complex64> = (0..n).map(|t| unit_phase(n, t).conj()).collect();
    (0..n)
        .map(|j| {
            let ip: Complex64 = s
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(l, a)| roots[(l * j) % n] * a)
                .sum();
            (ip * scale).norm_sqr()
        })
        .collect()
}

/// Measure in the Fourier basis `{P_j = |φ_j⟩⟨φ_j|}` with a caller-supplied RNG.
pub fn povm_measure_with_rng(s: &StateVector, rng: &mut impl Rng) -> Result<MeasurementOutcome> {
    if !s.is_normalized(NORM_TOL) {
        let dev = (s.norm().powi(2) - 1.0).abs();
        return Err(Error::NotNormalized(dev));
    }
    let distribution = povm_distribution(s);
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut outcome = distribution.len() - 1;
    for (j, &p) in distribution.iter().enumerate() {
        acc += p;
        if u < acc {
            outcome = j;
            break;
        }
    }
    Ok(MeasurementOutcome { outcome, distribution })
}

/// Measure in the Fourier basis; the outcome is sampled deterministically from
/// the seed. For exact algorithms the distribution is a point mass, so the
/// seed only matters on malformed states.
pub fn povm_measure(s: &StateVector, rng_seed: u64) -> Result<MeasurementOutcome> {
    povm_measure_with_rng(s, &mut ChaCha8Rng::seed_from_u64(rng_seed))
}

/// The sub-instance a simulated block runs on: a contiguous window of the
/// input, or a single index pair (for parity checks).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Window { offset: usize, len: usize },
    Pair { i: usize, j: usize },
}

impl Block {
    /// Register dimension of the sub-instance.
    pub fn len(&self) -> usize {
        match self {
            Self::Window { len, .. } => *len,
            Self::Pair { .. } => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Global input index of the sub-instance position `pos`.
    pub fn index(&self, pos: usize) -> usize {
        match self {
            Self::Window { offset, len } => {
                debug_assert!(pos < *len);
                offset + pos
            }
            Self::Pair { i, j } => match pos {
                0 => *i,
                1 => *j,
                _ => panic!("pair block has positions 0 and 1, got {pos}"),
            },
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Window { offset, len } => write!(f, "[{}, {})", offset, offset + len),
            Self::Pair { i, j } => write!(f, "({i}, {j})"),
        }
    }
}

/// One entry in a run's trace.
#[derive(Clone, Debug)]
pub enum TraceStep {
    /// One shifted-oracle application inside a weight-mod block; counts as
    /// one simulated query. `state` holds the block's index register after the
    /// step when the ledger records states.
    Oracle { shift: usize, block: Block, state: Option<StateVector> },
    /// Classical readout of input bit `x_index` via a dimension-2 oracle call;
    /// counts as one simulated query.
    ClassicalBit { index: usize, value: u8 },
    /// Charged call to a cited external subroutine, executed classically.
    CostModeled { queries: u64, note: String },
    /// Bulk simulated-query charge (generic accounting entry).
    Simulated { queries: u64, note: String },
    /// Fourier-basis POVM measurement of a block's index register.
    Measurement { block: Block, distribution: Vec<f64>, outcome: usize },
    /// Free-form annotation; charges nothing.
    Note { text: String },
}

impl TraceStep {
    pub fn simulated_queries(&self) -> u64 {
        match self {
            Self::Oracle { .. } | Self::ClassicalBit { .. } => 1,
            Self::Simulated { queries, .. } => *queries,
            _ => 0,
        }
    }

    pub fn cost_modeled_queries(&self) -> u64 {
        match self {
            Self::CostModeled { queries, .. } => *queries,
            _ => 0,
        }
    }
}

/// Which counter a generic ledger charge lands on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChargeKind {
    Simulated,
    CostModeled,
}

/// Per-run accounting of simulated oracle applications and cost-modeled
/// subroutine charges, with an ordered trace.
#[derive(Clone, Debug, Default)]
pub struct QueryLedger {
    simulated: u64,
    cost_modeled: u64,
    trace: Vec<TraceStep>,
    record_states: bool,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// A ledger whose oracle steps snapshot the block's index register, for
    /// trace emission.
    pub fn recording() -> Self {
        Self { record_states: true, ..Self::default() }
    }

    pub fn records_states(&self) -> bool {
        self.record_states
    }

    /// Append a step and charge its queries to the matching counter.
    pub fn push(&mut self, step: TraceStep) {
        self.simulated += step.simulated_queries();
        self.cost_modeled += step.cost_modeled_queries();
        self.trace.push(step);
    }

    /// Generic charge of `count >= 1` queries with a free-form note.
    pub fn charge(&mut self, kind: ChargeKind, count: u64, note: impl Into<String>) {
        debug_assert!(count >= 1, "charges must be positive");
        let note = note.into();
        match kind {
            ChargeKind::Simulated => self.push(TraceStep::Simulated { queries: count, note }),
            ChargeKind::CostModeled => self.push(TraceStep::CostModeled { queries: count, note }),
        }
    }

    pub fn simulated(&self) -> u64 {
        self.simulated
    }

    pub fn cost_modeled(&self) -> u64 {
        self.cost_modeled
    }

    /// Simulated plus cost-modeled queries.
    pub fn total(&self) -> u64 {
        self.simulated + self.cost_modeled
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    /// True when no cost-modeled subroutine was charged.
    pub fn fully_simulated(&self) -> bool {
        self.cost_modeled == 0
    }

    /// Recompute both counters from the trace and compare.
    pub fn is_consistent(&self) -> bool {
        let sim: u64 = self.trace.iter().map(TraceStep::simulated_queries).sum();
        let cost: u64 = self.trace.iter().map(TraceStep::cost_modeled_queries).sum();
        sim == self.simulated && cost == self.cost_modeled
    }
}
