//! State-vector simulation and verification of exact quantum query algorithms
//! for symmetric Boolean functions.
//!
//! The library simulates the quantum query model (oracle access `O_x|i⟩|b⟩ =
//! |i⟩|b + x_i⟩` over a pair of `Z_n` registers) and runs exact algorithms for
//! * `MOD_m^n` - Hamming weight of an n-bit string modulo m,
//! * `EXACT_{0,l}^n` and `EXACT_{1,n-1}^n` - membership of the Hamming weight
//!   in a two-element set,
//! * arbitrary symmetric functions whose univariate table satisfies the
//!   non-evasiveness promise `F(0) = F(k)`, `F(n-k) = F(n)`,
//!
//! on every input, certifying three things per run: the output matches the
//! brute-force evaluation, every measurement is a point mass (exactness), and
//! the query count meets the known optimal value.
//!
//! Organization:
//! * [`linalg`] - dense complex vectors/matrices, Fourier operator and basis.
//! * [`query`] - oracles, the composite register state, POVM measurement, and
//!   the per-run [`QueryLedger`].
//! * [`functions`] - symmetric function tables and classical evaluation.
//! * [`algorithms`] - the exact algorithms with full query accounting.
//! * [`bounds`] - closed-form lower bounds and known exact query complexities.
//! * [`verify`] - exhaustive/sampled sweeps, traces, and CSV/JSON reports.

pub mod algorithms;
pub mod bounds;
pub mod error;
pub mod functions;
pub mod linalg;
pub mod query;
pub mod verify;

pub use algorithms::{AlgorithmResult, Exact1Result};
pub use bounds::BoundRecord;
pub use error::{Error, Result};
pub use functions::{FunctionFamily, SymmetricFunction};
pub use linalg::{StateVector, UnitaryMatrix};
pub use query::{BitString, CompositeState, MeasurementOutcome, QueryLedger};
pub use verify::{SweepFamily, SweepMode, SweepReport};
