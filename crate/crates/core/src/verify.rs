//! Verification sweeps, single-input traces, and report emission.
//!
//! A sweep runs one algorithm family over every input (or a seeded sample),
//! compares each output against the brute-force table evaluation, and folds
//! the per-input evidence into a [`SweepReport`]: failures, the worst
//! off-peak measurement mass, the largest query count, and the bound it must
//! meet. Aggregation is associative and commutative, so parallel and serial
//! execution produce the same report.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use crate::algorithms::{
    exact_one_top_with, exact_zero_l_with, mod_general_with, nonevasive_eval_with, AlgorithmResult,
    RunOptions,
};
use crate::bounds::{known_exact_value, lb_exact_kl};
use crate::error::{Error, Result};
use crate::functions::{
    builtin_table, validate_nonevasive_promise, FunctionFamily, Label, SymmetricFunction,
};
use crate::query::{BitString, TraceStep};

/// Off-peak measurement mass above which a run is not exact.
pub const EXACTNESS_TOL: f64 = 1e-9;
/// Default cap on exhaustive enumeration (2^24 inputs).
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 24;
/// Failure records kept per report; the total count is always preserved.
pub const MAX_FAILURES_KEPT: usize = 100;

/// The algorithm families a sweep can drive.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepFamily {
    /// Hamming weight modulo m.
    Mod { m: usize },
    /// 1 iff `|x| ∈ {0, l}`.
    Exact0L { l: usize },
    /// 1 iff `|x| ∈ {1, n-1}`.
    Exact1Top,
    /// A symmetric function table with non-evasiveness witness k.
    Nonevasive { k: usize, table: SymmetricFunction },
}

impl SweepFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Mod { .. } => "mod",
            Self::Exact0L { .. } => "exact0l",
            Self::Exact1Top => "exact1",
            Self::Nonevasive { .. } => "nonevasive",
        }
    }

    /// Parameter string used in reports, e.g. `n=8,m=3`.
    pub fn params_string(&self, n: usize) -> String {
        match self {
            Self::Mod { m } => format!("n={n},m={m}"),
            Self::Exact0L { l } => format!("n={n},l={l}"),
            Self::Exact1Top => format!("n={n}"),
            Self::Nonevasive { k, .. } => format!("n={n},k={k}"),
        }
    }

    /// Validate the family parameters for input length n, before any run.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Self::Mod { m } => {
                if *m < 1 || *m > n {
                    return Err(Error::InvalidParameter(format!("need 1 <= m <= n, got m={m}, n={n}")));
                }
            }
            Self::Exact0L { l } => {
                if *l < 2 || *l > n {
                    return Err(Error::InvalidParameter(format!("need 2 <= l <= n, got l={l}, n={n}")));
                }
            }
            Self::Exact1Top => {
                if n < 4 {
                    return Err(Error::InvalidParameter(format!("need n >= 4, got n={n}")));
                }
            }
            Self::Nonevasive { k, table } => {
                if table.n() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: table.n() });
                }
                if !validate_nonevasive_promise(table, *k)? {
                    return Err(Error::PromiseViolated(format!(
                        "table does not satisfy F(0)=F({k}) and F({})=F({n})",
                        n - k
                    )));
                }
            }
        }
        Ok(())
    }

    /// The ground-truth table the algorithm is compared against.
    pub fn truth_table(&self, n: usize) -> Result<SymmetricFunction> {
        match self {
            Self::Mod { m } => builtin_table(FunctionFamily::Mod { m: *m }, n),
            Self::Exact0L { l } => builtin_table(FunctionFamily::ExactKl { k: 0, l: *l }, n),
            Self::Exact1Top => builtin_table(FunctionFamily::ExactKl { k: 1, l: n - 1 }, n),
            Self::Nonevasive { table, .. } => Ok(table.clone()),
        }
    }

    /// The query bound the family must meet: an equality for the modulo
    /// family, an upper bound for the adaptive ones.
    pub fn bound(&self, n: usize) -> Result<u64> {
        match self {
            Self::Mod { m } => {
                Ok(known_exact_value(FunctionFamily::Mod { m: *m }, n)?.expect("always known"))
            }
            Self::Exact0L { l } => lb_exact_kl(n, 0, *l),
            Self::Exact1Top => lb_exact_kl(n, 1, n - 1),
            Self::Nonevasive { .. } => Ok((n - 1) as u64),
        }
    }

    /// Whether the query contract is an exact equality with the bound.
    pub fn bound_is_equality(&self) -> bool {
        matches!(self, Self::Mod { .. })
    }

    fn run(&self, x: &BitString, opts: RunOptions) -> Result<(AlgorithmResult, bool)> {
        match self {
            Self::Mod { m } => Ok((mod_general_with(x, *m, opts)?, true)),
            Self::Exact0L { l } => Ok((exact_zero_l_with(x, *l, opts)?, true)),
            Self::Exact1Top => {
                let (result, evidence) = exact_one_top_with(x, opts)?;
                let n = x.n();
                let w = x.hamming_weight();
                let evidence_ok = if evidence.in_promise {
                    let majority_bit = (w > n / 2) as u8;
                    !evidence.majority_indices.is_empty()
                        && evidence
                            .majority_indices
                            .iter()
                            .all(|&i| i < n && x.bit(i) == majority_bit)
                        && result.output == 1
                } else {
                    evidence.majority_indices.is_empty() && result.output == 0
                };
                Ok((result, evidence_ok))
            }
            Self::Nonevasive { k, table } => Ok((nonevasive_eval_with(table, *k, x, opts)?, true)),
        }
    }
}

/// How a sweep enumerates inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// Every x in {0,1}^n, capped by [`SweepOptions::exhaustive_cap`].
    Exhaustive,
    /// `count` uniform inputs drawn deterministically from the seed.
    Sampled { count: u64, seed: u64 },
}

/// Sweep execution knobs.
#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    /// Largest n exhaustive mode will enumerate.
    pub exhaustive_cap: usize,
    /// Fan inputs out across worker threads.
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP, parallel: true }
    }
}

/// One mismatch found by a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub input: String,
    pub expected: String,
    pub got: String,
}

/// Aggregated result of one verification sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    /// Family tag: mod, exact0l, exact1, or nonevasive.
    pub family: String,
    /// Family parameters, e.g. `n=8,m=3`.
    pub params: String,
    pub inputs_checked: u64,
    /// Total number of failing inputs; `failures` keeps at most
    /// [`MAX_FAILURES_KEPT`] of them.
    pub failures_total: u64,
    pub failures: Vec<FailureRecord>,
    pub max_queries_observed: u64,
    /// The query bound from the bounds module the observed maximum is held
    /// against.
    pub bound: u64,
    /// Worst off-peak measurement mass seen in any run.
    pub exactness_worst: f64,
    /// Fraction of runs that fired no cost-modeled subroutine.
    pub fully_simulated_fraction: f64,
    /// Wall-clock duration of the sweep. The only field that varies between
    /// identical invocations; see [`SweepReport::normalized`].
    pub wall_time_s: f64,
}

impl SweepReport {
    /// A sweep passed iff it recorded no failures.
    pub fn passed(&self) -> bool {
        self.failures_total == 0
    }

    /// Copy with `wall_time_s` zeroed, for byte-stable emission and
    /// comparisons.
    pub fn normalized(&self) -> Self {
        Self { wall_time_s: 0.0, ..self.clone() }
    }

    /// Equality of everything except wall time.
    pub fn same_results(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

/// SplitMix64-style mix of a sweep seed and an input index into a per-input
/// seed, giving random access into the sample stream.
fn mix_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sampled_input(n: usize, seed: u64, i: u64) -> BitString {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(mix_seed(seed, i));
    BitString::new((0..n).map(|_| rng.random::<bool>() as u8).collect()).expect("bits are 0/1")
}

/// Per-input verdict folded into the aggregate.
struct InputVerdict {
    key: u64,
    failures: Vec<FailureRecord>,
    queries: u64,
    exactness: f64,
    fully_simulated: bool,
}

fn check_input(
    family: &SweepFamily,
    truth: &SymmetricFunction,
    bound: u64,
    x: &BitString,
    key: u64,
    seed: u64,
) -> InputVerdict {
    let expected: Label = truth.eval(x).expect("truth table matches input length");
    let mut failures = Vec::new();
    let opts = RunOptions { seed, record_states: false };
    match family.run(x, opts) {
        Err(e) => {
            failures.push(FailureRecord {
                input: x.to_string(),
                expected: expected.to_string(),
                got: format!("run error: {e}"),
            });
            InputVerdict { key, failures, queries: 0, exactness: 0.0, fully_simulated: true }
        }
        Ok((result, evidence_ok)) => {
            let mut fail = |expected: String, got: String| {
                failures.push(FailureRecord { input: x.to_string(), expected, got });
            };
            if result.output != expected {
                fail(expected.to_string(), result.output.to_string());
            }
            let queries = result.ledger.total();
            if family.bound_is_equality() {
                if queries != bound {
                    fail(format!("queries == {bound}"), queries.to_string());
                }
            } else if queries > bound {
                fail(format!("queries <= {bound}"), queries.to_string());
            }
            if result.exactness_evidence > EXACTNESS_TOL {
                fail(format!("off-peak mass <= {EXACTNESS_TOL:e}"), format!("{:e}", result.exactness_evidence));
            }
            if !result.ledger.is_consistent() {
                fail("ledger consistent with trace".into(), "counter/trace mismatch".into());
            }
            if !evidence_ok {
                fail("valid majority-index evidence".into(), "invalid evidence".into());
            }
            InputVerdict {
                key,
                failures,
                queries,
                exactness: result.exactness_evidence,
                fully_simulated: result.fully_simulated,
            }
        }
    }
}

/// Associative, commutative sweep aggregate.
#[derive(Default)]
struct Agg {
    checked: u64,
    failures_total: u64,
    /// (input key, record); pruned to the smallest keys.
    failures: Vec<(u64, FailureRecord)>,
    max_queries: u64,
    exactness_worst: f64,
    fully_simulated: u64,
}

impl Agg {
    fn prune(&mut self) {
        if self.failures.len() > 2 * MAX_FAILURES_KEPT {
            self.failures.sort_by_key(|(k, _)| *k);
            self.failures.truncate(MAX_FAILURES_KEPT);
        }
    }

    fn add(&mut self, v: InputVerdict) {
        self.checked += 1;
        self.failures_total += v.failures.len() as u64;
        self.failures.extend(v.failures.into_iter().map(|f| (v.key, f)));
        self.prune();
        self.max_queries = self.max_queries.max(v.queries);
        self.exactness_worst = self.exactness_worst.max(v.exactness);
        self.fully_simulated += v.fully_simulated as u64;
    }

    fn absorb(mut self, other: Self) -> Self {
        self.checked += other.checked;
        self.failures_total += other.failures_total;
        self.failures.extend(other.failures);
        self.prune();
        self.max_queries = self.max_queries.max(other.max_queries);
        self.exactness_worst = self.exactness_worst.max(other.exactness_worst);
        self.fully_simulated += other.fully_simulated;
        self
    }

    fn into_report(mut self, family: &SweepFamily, n: usize, bound: u64, wall_time_s: f64) -> SweepReport {
        self.failures.sort_by_key(|(k, _)| *k);
        self.failures.truncate(MAX_FAILURES_KEPT);
        SweepReport {
            family: family.tag().to_string(),
            params: family.params_string(n),
            inputs_checked: self.checked,
            failures_total: self.failures_total,
            failures: self.failures.into_iter().map(|(_, f)| f).collect(),
            max_queries_observed: self.max_queries,
            bound,
            exactness_worst: self.exactness_worst,
            fully_simulated_fraction: if self.checked == 0 {
                1.0
            } else {
                self.fully_simulated as f64 / self.checked as f64
            },
            wall_time_s,
        }
    }
}

/// Run one family over all inputs of length n (or a seeded sample) and
/// aggregate the evidence.
pub fn sweep(
    family: &SweepFamily,
    n: usize,
    mode: SweepMode,
    opts: &SweepOptions,
) -> Result<SweepReport> {
    let start = Instant::now();
    family.validate(n)?;
    let truth = family.truth_table(n)?;
    let bound = family.bound(n)?;

    let (count, base_seed) = match mode {
        SweepMode::Exhaustive => {
            if n > opts.exhaustive_cap {
                return Err(Error::CapExceeded { n, cap: opts.exhaustive_cap });
            }
            if n > 63 {
                return Err(Error::InvalidDimension(format!("exhaustive enumeration needs n <= 63, got {n}")));
            }
            (1u64 << n, 0u64)
        }
        SweepMode::Sampled { count, seed } => {
            if count == 0 {
                return Err(Error::InvalidParameter("sampled mode needs count >= 1".into()));
            }
            (count, seed)
        }
    };

    let eval = |i: u64| {
        let x = match mode {
            SweepMode::Exhaustive => BitString::from_index(i, n).expect("n <= 63 checked"),
            SweepMode::Sampled { seed, .. } => sampled_input(n, seed, i),
        };
        check_input(family, &truth, bound, &x, i, mix_seed(base_seed, i))
    };

    let agg = if opts.parallel {
        (0..count)
            .into_par_iter()
            .fold(Agg::default, |mut a, i| {
                a.add(eval(i));
                a
            })
            .reduce(Agg::default, Agg::absorb)
    } else {
        (0..count).fold(Agg::default(), |mut a, i| {
            a.add(eval(i));
            a
        })
    };

    Ok(agg.into_report(family, n, bound, start.elapsed().as_secs_f64()))
}

/// The full verification battery up to `max_n`: every modulus, every
/// `EXACT(0,l)` parameter, and `EXACT(1,n-1)` where defined.
pub fn sweep_all_specs(max_n: usize) -> Vec<(usize, SweepFamily)> {
    let mut specs = Vec::new();
    for n in 2..=max_n {
        for m in 2..=n {
            specs.push((n, SweepFamily::Mod { m }));
        }
        for l in 2..=n {
            specs.push((n, SweepFamily::Exact0L { l }));
        }
        if n >= 4 {
            specs.push((n, SweepFamily::Exact1Top));
        }
    }
    specs
}

fn format_amplitudes(s: &crate::linalg::StateVector) -> String {
    let parts: Vec<String> =
        s.amplitudes().iter().map(|a| format!("{:+.6}{:+.6}i", a.re, a.im)).collect();
    format!("[{}]", parts.join(", "))
}

fn format_distribution(dist: &[f64]) -> String {
    let parts: Vec<String> = dist.iter().map(|p| format!("{p:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Run one input with state recording and render the step-by-step trace:
/// every ledger entry, per-step index-register amplitudes for simulated
/// steps, the pre-measurement Fourier decomposition, and the outcome.
pub fn trace(family: &SweepFamily, x: &BitString) -> Result<String> {
    let n = x.n();
    family.validate(n)?;
    let opts = RunOptions { seed: 0, record_states: true };
    let (result, evidence) = match family {
        SweepFamily::Exact1Top => {
            let (r, e) = exact_one_top_with(x, opts)?;
            (r, Some(e))
        }
        _ => (family.run(x, opts)?.0, None),
    };

    let mut out = String::new();
    let _ = writeln!(out, "trace family={} {} x={}", family.tag(), family.params_string(n), x);
    for (i, step) in result.ledger.trace().iter().enumerate() {
        let line = i + 1;
        match step {
            TraceStep::Oracle { shift, block, state } => {
                let _ = writeln!(out, "{line:3}. oracle shift={shift} block={block}");
                if let Some(s) = state {
                    let _ = writeln!(out, "     index register: {}", format_amplitudes(s));
                }
            }
            TraceStep::ClassicalBit { index, value } => {
                let _ = writeln!(out, "{line:3}. classical-bit x_{index} = {value}");
            }
            TraceStep::CostModeled { queries, note } => {
                let _ = writeln!(out, "{line:3}. cost-modeled charge {queries}: {note}");
            }
            TraceStep::Simulated { queries, note } => {
                let _ = writeln!(out, "{line:3}. simulated charge {queries}: {note}");
            }
            TraceStep::Measurement { block, distribution, outcome } => {
                let _ = writeln!(
                    out,
                    "{line:3}. measurement block={block}: p = {} -> outcome {outcome}",
                    format_distribution(distribution)
                );
            }
            TraceStep::Note { text } => {
                let _ = writeln!(out, "{line:3}. note: {text}");
            }
        }
    }
    let _ = writeln!(out, "output: {}", result.output);
    if let Some(e) = evidence {
        if e.in_promise {
            let _ = writeln!(out, "majority indices: {:?}", e.majority_indices);
        }
    }
    let _ = writeln!(
        out,
        "queries: simulated={} cost-modeled={} total={}",
        result.ledger.simulated(),
        result.ledger.cost_modeled(),
        result.ledger.total()
    );
    let _ = writeln!(out, "worst off-peak mass: {:.3e}", result.exactness_evidence);
    let _ = writeln!(out, "fully simulated: {}", if result.fully_simulated { "yes" } else { "no" });
    Ok(out)
}

/// Report serialization format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Versioned JSON envelope for emitted reports.
#[derive(Serialize, Deserialize)]
struct ReportDocument {
    schema_version: u32,
    reports: Vec<SweepReport>,
}

const REPORT_SCHEMA_VERSION: u32 = 1;

/// CSV header used by [`report_emit`]; one row per sweep, failures joined as
/// `input:expected:got` with `;`.
pub const CSV_HEADER: [&str; 10] = [
    "family",
    "params",
    "inputs_checked",
    "failures_total",
    "failures",
    "max_queries_observed",
    "bound",
    "exactness_worst",
    "fully_simulated_fraction",
    "wall_time_s",
];

/// Serialize reports to a string in the given format.
pub fn reports_to_string(reports: &[SweepReport], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let doc = ReportDocument { schema_version: REPORT_SCHEMA_VERSION, reports: reports.to_vec() };
            let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Serialize(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).map_err(|e| Error::Serialize(e.to_string()))?;
            for r in reports {
                let failures = r
                    .failures
                    .iter()
                    .map(|f| format!("{}:{}:{}", f.input, f.expected, f.got))
                    .collect::<Vec<_>>()
                    .join(";");
                w.write_record([
                    r.family.as_str(),
                    r.params.as_str(),
                    &r.inputs_checked.to_string(),
                    &r.failures_total.to_string(),
                    &failures,
                    &r.max_queries_observed.to_string(),
                    &r.bound.to_string(),
                    &format!("{:e}", r.exactness_worst),
                    &r.fully_simulated_fraction.to_string(),
                    &r.wall_time_s.to_string(),
                ])
                .map_err(|e| Error::Serialize(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
        }
    }
}

/// Write one row/object per sweep to `path`.
pub fn report_emit(reports: &[SweepReport], format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let text = reports_to_string(reports, format)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Parse reports back from the JSON envelope.
pub fn reports_from_json(text: &str) -> Result<Vec<SweepReport>> {
    let doc: ReportDocument =
        serde_json::from_str(text).map_err(|e| Error::Serialize(e.to_string()))?;
    if doc.schema_version != REPORT_SCHEMA_VERSION {
        return Err(Error::Serialize(format!(
            "unsupported report schema version {} (expected {REPORT_SCHEMA_VERSION})",
            doc.schema_version
        )));
    }
    Ok(doc.reports)
}
