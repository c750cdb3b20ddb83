//! The exact quantum algorithms, executed on the simulator with full query
//! accounting.
//!
//! The core primitive runs the Hamming-weight-mod-n routine on a register of
//! size n: starting from the uniform superposition with the phase register at
//! `|0⟩`, it alternates a phase-register increment with one shifted-oracle
//! application for shifts `a = 1, …, n-1`, which leaves the index register in
//! `e^{iη_x}|φ_{|x| mod n}⟩`; a Fourier-basis measurement then reads off the
//! residue with certainty using n-1 queries. Everything else is built from
//! that block: modulo-m via partitioning, pair parities at block size 2,
//! non-evasive symmetric functions, and the two EXACT algorithms. Two cited
//! subroutines are cost-modeled: they run classically and charge their
//! published query counts to the ledger, flagging the run as not fully
//! simulated.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::functions::{validate_nonevasive_promise, Label, SymmetricFunction};
use crate::linalg::{phi_state, unit_phase, StateVector};
use crate::query::{
    povm_measure_with_rng, shifted_phase_oracle, BitString, Block, CompositeState, QueryLedger,
    TraceStep,
};

/// Execution knobs shared by all runs.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Seed for measurement sampling. Exact algorithms produce point-mass
    /// distributions, so this is only observable on malformed states.
    pub seed: u64,
    /// Snapshot per-step index-register states into the trace.
    pub record_states: bool,
}

/// Outcome of one algorithm run.
#[derive(Clone, Debug)]
pub struct AlgorithmResult {
    /// The computed label or residue.
    pub output: Label,
    /// Query accounting and trace for the run.
    pub ledger: QueryLedger,
    /// Largest probability mass observed outside a reported measurement
    /// outcome anywhere in the run; an exact run keeps this at rounding level.
    pub exactness_evidence: f64,
    /// False when any cost-modeled subroutine fired.
    pub fully_simulated: bool,
}

/// Promise membership and majority-index evidence from an EXACT_{1,n-1} run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact1Result {
    /// Whether `|x| ∈ {1, n-1}`.
    pub in_promise: bool,
    /// Indices carrying the majority bit value; non-empty iff `in_promise`.
    pub majority_indices: Vec<usize>,
}

impl Exact1Result {
    fn in_promise(majority_indices: Vec<usize>) -> Self {
        debug_assert!(!majority_indices.is_empty());
        Self { in_promise: true, majority_indices }
    }

    fn out_of_promise() -> Self {
        Self { in_promise: false, majority_indices: Vec::new() }
    }
}

/// Shared run state: the ledger, the worst off-peak measurement mass, and the
/// measurement RNG. Each run owns exactly one context.
struct RunContext {
    ledger: QueryLedger,
    worst_off_peak: f64,
    rng: ChaCha8Rng,
}

impl RunContext {
    fn new(opts: RunOptions) -> Self {
        Self {
            ledger: if opts.record_states { QueryLedger::recording() } else { QueryLedger::new() },
            worst_off_peak: 0.0,
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
        }
    }

    /// Fourier-basis measurement of a block's index register.
    fn measure(&mut self, s: &StateVector, block: Block) -> Result<usize> {
        let m = povm_measure_with_rng(s, &mut self.rng)?;
        self.worst_off_peak = self.worst_off_peak.max(1.0 - m.distribution[m.outcome]);
        self.ledger.push(TraceStep::Measurement {
            block,
            distribution: m.distribution,
            outcome: m.outcome,
        });
        Ok(m.outcome)
    }

    fn finish(self, output: Label) -> AlgorithmResult {
        let fully_simulated = self.ledger.fully_simulated();
        AlgorithmResult {
            output,
            exactness_evidence: self.worst_off_peak,
            fully_simulated,
            ledger: self.ledger,
        }
    }
}

/// Run the weight-mod-m block on the given sub-instance: m-1 queries, output
/// `|x_block| mod m`. Returns the outcome and the pre-measurement index state.
fn mod_block(x: &BitString, block: Block, ctx: &mut RunContext) -> Result<(usize, StateVector)> {
    let m = block.len();
    debug_assert!(m >= 2, "mod block needs register size >= 2");
    // phases[b] = e^{ib·2π/m}
    let phases: Vec<Complex64> = (0..m).map(|b| unit_phase(m, b)).collect();
    let mut state = phi_state(m, 0)?;
    for (a, &factor) in phases.iter().enumerate().skip(1) {
        // After the phase-register increment the register sits at |a⟩, so the
        // shifted oracle phases amplitude j by e^{iaθ} exactly when the input
        // bit at sub-instance position (j - a) mod m is 1.
        let amps = state.amps_mut();
        for (j, amp) in amps.iter_mut().enumerate() {
            if x.bit(block.index((j + m - a) % m)) == 1 {
                *amp *= factor;
            }
        }
        let snapshot = ctx.ledger.records_states().then(|| state.clone());
        ctx.ledger.push(TraceStep::Oracle { shift: a, block, state: snapshot });
    }
    let outcome = ctx.measure(&state, block)?;
    Ok((outcome, state))
}

/// Weight-mod-m of a contiguous window; a window of length 1 is the constant
/// modulus-1 instance and costs nothing.
fn mod_window(x: &BitString, offset: usize, len: usize, ctx: &mut RunContext) -> Result<usize> {
    if len == 1 {
        ctx.ledger.push(TraceStep::Note {
            text: format!("window [{offset}, {}) has modulus 1: constant 0, no queries", offset + 1),
        });
        Ok(0)
    } else {
        Ok(mod_block(x, Block::Window { offset, len }, ctx)?.0)
    }
}

/// Classical readout of input bit `x_i` at the cost of one query: the
/// dimension-2 sub-instance whose two positions both map to index i leaves
/// the phase register of `|0⟩|0⟩` in the basis state `|x_i⟩` after a single
/// standard-oracle application.
fn classical_query(x: &BitString, i: usize, ctx: &mut RunContext) -> u8 {
    let value = x.bit(i);
    ctx.ledger.push(TraceStep::ClassicalBit { index: i, value });
    value
}

/// A weight-mod-n run on the whole input, with its pre-measurement state.
#[derive(Clone, Debug)]
pub struct ModFullRun {
    pub result: AlgorithmResult,
    /// Index-register state just before the measurement.
    pub pre_measurement: StateVector,
    /// Basis value of the phase register at the end of the run (n-1).
    pub final_phase: usize,
}

/// `|x| mod n` on the full register using exactly n-1 queries.
pub fn mod_full_with(x: &BitString, opts: RunOptions) -> Result<ModFullRun> {
    let n = x.n();
    if n < 2 {
        return Err(Error::InvalidParameter("weight mod n on the full register needs n >= 2".into()));
    }
    let mut ctx = RunContext::new(opts);
    let (outcome, pre_measurement) = mod_block(x, Block::Window { offset: 0, len: n }, &mut ctx)?;
    Ok(ModFullRun { result: ctx.finish(outcome as Label), pre_measurement, final_phase: n - 1 })
}

/// `|x| mod n` on the full register; see [`mod_full_with`] for the state.
pub fn mod_full(x: &BitString) -> Result<AlgorithmResult> {
    Ok(mod_full_with(x, RunOptions::default())?.result)
}

/// `|x| mod m` by partitioning into ⌊n/m⌋ blocks of size m plus a classically
/// queried tail, using exactly ⌈n(1-1/m)⌉ queries for m >= 2; m = 1 is the
/// constant 0 with no queries.
pub fn mod_general_with(x: &BitString, m: usize, opts: RunOptions) -> Result<AlgorithmResult> {
    let n = x.n();
    if m < 1 || m > n {
        return Err(Error::InvalidParameter(format!("modulus must satisfy 1 <= m <= n, got m={m}, n={n}")));
    }
    let mut ctx = RunContext::new(opts);
    if m == 1 {
        ctx.ledger.push(TraceStep::Note { text: "modulus 1: constant 0, no queries".into() });
        return Ok(ctx.finish(0));
    }
    let blocks = n / m;
    let mut sum = 0usize;
    for i in 0..blocks {
        let (b_i, _) = mod_block(x, Block::Window { offset: i * m, len: m }, &mut ctx)?;
        sum += b_i;
    }
    for i in blocks * m..n {
        sum += classical_query(x, i, &mut ctx) as usize;
    }
    Ok(ctx.finish((sum % m) as Label))
}

pub fn mod_general(x: &BitString, m: usize) -> Result<AlgorithmResult> {
    mod_general_with(x, m, RunOptions::default())
}

fn parity_ctx(x: &BitString, i: usize, j: usize, ctx: &mut RunContext) -> Result<u8> {
    Ok(mod_block(x, Block::Pair { i, j }, ctx)?.0 as u8)
}

/// `x_i ⊕ x_j` with one query: the size-2 block over the pair.
pub fn parity_pair_with(x: &BitString, i: usize, j: usize, opts: RunOptions) -> Result<AlgorithmResult> {
    let n = x.n();
    if i >= n || j >= n {
        return Err(Error::OutOfRange(format!("pair ({i}, {j}) outside 0..{n}")));
    }
    if i == j {
        return Err(Error::InvalidParameter("parity pair needs two distinct indices".into()));
    }
    let mut ctx = RunContext::new(opts);
    let bit = parity_ctx(x, i, j, &mut ctx)?;
    Ok(ctx.finish(bit as Label))
}

pub fn parity_pair(x: &BitString, i: usize, j: usize) -> Result<AlgorithmResult> {
    parity_pair_with(x, i, j, RunOptions::default())
}

/// Evaluate a symmetric function whose table admits the non-evasiveness
/// witness k (`F(0) = F(k)`, `F(n-k) = F(n)`) with at most n-1 queries.
pub fn nonevasive_eval_with(
    f: &SymmetricFunction,
    k: usize,
    x: &BitString,
    opts: RunOptions,
) -> Result<AlgorithmResult> {
    let n = f.n();
    if x.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.n() });
    }
    // The promise is checked before any query is spent.
    if !validate_nonevasive_promise(f, k)? {
        return Err(Error::PromiseViolated(format!(
            "table does not satisfy F(0)=F({k}) and F({})=F({n})",
            n - k
        )));
    }
    let mut ctx = RunContext::new(opts);
    if k == n {
        // One weight-mod-n run determines F: weights 0 and n share a label.
        let a = mod_window(x, 0, n, &mut ctx)?;
        return Ok(ctx.finish(f.univariate(a)));
    }
    // Split into x' = x_0 … x_{n-k-1} and x'' = x_{n-k} … x_{n-1}.
    let a = mod_window(x, 0, n - k, &mut ctx)?;
    let b = mod_window(x, n - k, k, &mut ctx)?;
    let weight = match (a != 0, b != 0) {
        // Nonzero residues pin both block weights exactly.
        (true, true) => a + b,
        (true, false) => {
            // |x''| is 0 or k; its first bit disambiguates.
            if classical_query(x, n - k, &mut ctx) == 0 {
                a
            } else {
                a + k
            }
        }
        (false, true) => {
            if classical_query(x, 0, &mut ctx) == 0 {
                b
            } else {
                n - k + b
            }
        }
        (false, false) => {
            // |x| ∈ {0, k} or {n-k, n}; either pair shares a label under the
            // promise, so one bit suffices.
            if classical_query(x, 0, &mut ctx) == 0 {
                0
            } else {
                n - k
            }
        }
    };
    Ok(ctx.finish(f.univariate(weight)))
}

pub fn nonevasive_eval(f: &SymmetricFunction, k: usize, x: &BitString) -> Result<AlgorithmResult> {
    nonevasive_eval_with(f, k, x, RunOptions::default())
}

/// 1 iff `|x_sub| = k`, computed classically while charging the published
/// query count max{k, len-k} of the cited circuit to the ledger.
pub fn subroutine_exact_k(x_sub: &BitString, k: usize, ledger: &mut QueryLedger) -> Result<u8> {
    let len = x_sub.n();
    if k > len {
        return Err(Error::InvalidParameter(format!("EXACT_k needs k <= len, got k={k}, len={len}")));
    }
    ledger.push(TraceStep::CostModeled {
        queries: k.max(len - k) as u64,
        note: format!("EXACT_{k}^{len} subroutine (AIS13)"),
    });
    Ok((x_sub.hamming_weight() == k) as u8)
}

/// 1 iff `|x_sub| ∈ {1, 4}` on a 5-bit sub-instance, computed classically
/// while charging the cited circuit's 3 queries. On a positive answer also
/// returns the lexicographically smallest pair (i, j) with `x_i ≠ x_j`; every
/// index outside the pair then carries the majority bit.
pub fn subroutine_exact_14_5(
    x_sub: &BitString,
    ledger: &mut QueryLedger,
) -> Result<(u8, Option<(usize, usize)>)> {
    if x_sub.n() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, got: x_sub.n() });
    }
    ledger.push(TraceStep::CostModeled {
        queries: 3,
        note: "EXACT_{1,4}^5 subroutine (AIN17)".into(),
    });
    let w = x_sub.hamming_weight();
    if w != 1 && w != 4 {
        return Ok((0, None));
    }
    for i in 0..5 {
        for j in (i + 1)..5 {
            if x_sub.bit(i) != x_sub.bit(j) {
                return Ok((1, Some((i, j))));
            }
        }
    }
    unreachable!("weight 1 or 4 guarantees an unequal pair");
}

/// 1 iff `|x| ∈ {0, l}` with at most n-1 total queries (simulated plus
/// cost-modeled).
pub fn exact_zero_l_with(x: &BitString, l: usize, opts: RunOptions) -> Result<AlgorithmResult> {
    let n = x.n();
    if l < 2 || l > n {
        return Err(Error::InvalidParameter(format!("EXACT(0,l) needs 2 <= l <= n, got l={l}, n={n}")));
    }
    let mut ctx = RunContext::new(opts);
    if l == n {
        let r = mod_window(x, 0, n, &mut ctx)?;
        return Ok(ctx.finish((r == 0) as Label));
    }
    // Scan x_0 … x_{n-l-1}; a 1 at position i reduces the question to
    // whether the suffix after it has weight exactly l-1.
    for i in 0..n - l {
        if classical_query(x, i, &mut ctx) == 1 {
            let suffix = x.window(i + 1, n - i - 1)?;
            let bit = subroutine_exact_k(&suffix, l - 1, &mut ctx.ledger)?;
            return Ok(ctx.finish(bit as Label));
        }
    }
    // All scanned bits are 0, so |x| = |suffix| ∈ {0..l}; mod l separates
    // {0, l} from the rest.
    let r = mod_window(x, n - l, l, &mut ctx)?;
    Ok(ctx.finish((r == 0) as Label))
}

pub fn exact_zero_l(x: &BitString, l: usize) -> Result<AlgorithmResult> {
    exact_zero_l_with(x, l, RunOptions::default())
}

/// Recursive EXACT_{1,w-1} on the suffix window `x_lo … x_{n-1}`; returned
/// majority indices are global.
fn exact1_window(x: &BitString, lo: usize, ctx: &mut RunContext) -> Result<Exact1Result> {
    let w = x.n() - lo;
    if w == 4 {
        let p01 = parity_ctx(x, lo, lo + 1, ctx)?;
        let p23 = parity_ctx(x, lo + 2, lo + 3, ctx)?;
        return Ok(match (p01, p23) {
            // One constant pair and one mixed pair force weight 1 or 3; the
            // constant pair carries the majority bit.
            (0, 1) => Exact1Result::in_promise(vec![lo, lo + 1]),
            (1, 0) => Exact1Result::in_promise(vec![lo + 2, lo + 3]),
            _ => Exact1Result::out_of_promise(),
        });
    }
    if w == 5 {
        let sub = x.window(lo, 5)?;
        let (bit, pair) = subroutine_exact_14_5(&sub, &mut ctx.ledger)?;
        return Ok(if bit == 1 {
            let (i, j) = pair.expect("positive answer carries a pair");
            Exact1Result::in_promise(
                (0..5).filter(|&t| t != i && t != j).map(|t| lo + t).collect(),
            )
        } else {
            Exact1Result::out_of_promise()
        });
    }
    // w > 5.
    let p01 = parity_ctx(x, lo, lo + 1, ctx)?;
    if p01 == 1 {
        // x_lo ≠ x_{lo+1}: membership holds iff the remaining w-2 bits have
        // weight 0 or w-2, i.e. weight ≡ 0 mod (w-2).
        let r = mod_block(x, Block::Window { offset: lo + 2, len: w - 2 }, ctx)?.0;
        return Ok(if r == 0 {
            Exact1Result::in_promise(((lo + 2)..x.n()).collect())
        } else {
            Exact1Result::out_of_promise()
        });
    }
    // x_lo = x_{lo+1}: recurse on the suffix, then one parity against a
    // returned majority index settles membership.
    let inner = exact1_window(x, lo + 2, ctx)?;
    if !inner.in_promise {
        return Ok(Exact1Result::out_of_promise());
    }
    let witness = inner.majority_indices[0];
    let p = parity_ctx(x, lo, witness, ctx)?;
    Ok(if p == 0 {
        Exact1Result::in_promise(vec![lo, lo + 1, witness])
    } else {
        Exact1Result::out_of_promise()
    })
}

/// 1 iff `|x| ∈ {1, n-1}` with at most n-2 total queries; on a positive
/// answer also reports verified majority indices.
pub fn exact_one_top_with(x: &BitString, opts: RunOptions) -> Result<(AlgorithmResult, Exact1Result)> {
    if x.n() < 4 {
        return Err(Error::InvalidParameter(format!("EXACT(1,n-1) needs n >= 4, got n={}", x.n())));
    }
    let mut ctx = RunContext::new(opts);
    let evidence = exact1_window(x, 0, &mut ctx)?;
    let result = ctx.finish(evidence.in_promise as Label);
    Ok((result, evidence))
}

pub fn exact_one_top(x: &BitString) -> Result<(AlgorithmResult, Exact1Result)> {
    exact_one_top_with(x, RunOptions::default())
}

/// Agreement metrics between the factorized and full-space executions of the
/// weight-mod-n run.
#[derive(Clone, Debug)]
pub struct CrossValidation {
    /// Measured residue (from the factorized path).
    pub outcome: usize,
    /// Largest probability mass found outside the expected phase-register
    /// basis value at any step of the full-space run.
    pub max_phase_leak: f64,
    /// Largest entrywise deviation between the lifted factorized state and
    /// the full-space state, over all steps.
    pub max_state_deviation: f64,
}

/// Run the weight-mod-n routine on both the factorized and the full
/// n²-dimensional representation, checking after every step that the phase
/// register stays a basis state and that the two states agree.
pub fn mod_full_cross_validate(x: &BitString) -> Result<CrossValidation> {
    let n = x.n();
    if n < 2 {
        return Err(Error::InvalidParameter("cross-validation needs n >= 2".into()));
    }
    let mut fact = CompositeState::initial_factorized(n)?;
    let mut full = CompositeState::initial_full(n)?;
    let mut max_phase_leak: f64 = 0.0;
    let mut max_state_deviation = fact.to_full()?.max_deviation(&full.to_full()?);
    for a in 1..n {
        fact.increment_phase_register();
        full.increment_phase_register();
        let oracle = shifted_phase_oracle(x, a);
        oracle.apply(&mut fact);
        oracle.apply(&mut full);
        let (b, off) = full.dominant_phase();
        max_phase_leak = if b == a { max_phase_leak.max(off) } else { 1.0 };
        max_state_deviation =
            max_state_deviation.max(fact.to_full()?.max_deviation(&full.to_full()?));
    }
    let index = fact.index_register().expect("factorized run").clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let outcome = povm_measure_with_rng(&index, &mut rng)?.outcome;
    Ok(CrossValidation { outcome, max_phase_leak, max_state_deviation })
}
