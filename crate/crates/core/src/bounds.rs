//! Closed-form lower bounds and known exact quantum query complexities for
//! the symmetric function families, used as the optimality yardstick in
//! reports. All arithmetic is exact integer arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::FunctionFamily;

/// A bound entry for one function family instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    /// Family display tag, e.g. `MOD(3)`.
    pub family: String,
    /// Input length.
    pub n: usize,
    /// Best known lower bound on the exact quantum query complexity.
    pub lower: u64,
    /// Exact value when fully characterized.
    pub upper: Option<u64>,
    /// Citation tag for the bound.
    pub source: &'static str,
}

impl BoundRecord {
    fn new(family: FunctionFamily, n: usize, lower: u64, upper: Option<u64>, source: &'static str) -> Self {
        if let Some(u) = upper {
            debug_assert!(lower <= u);
        }
        Self { family: family.to_string(), n, lower, upper, source }
    }
}

/// `⌈n(1 - 1/m)⌉`, the lower bound for computing `|x| mod m`, evaluated as
/// `n - ⌊n/m⌋`.
pub fn lb_mod(n: usize, m: usize) -> Result<u64> {
    if m <= 1 || m > n {
        return Err(Error::InvalidParameter(format!("lb_mod needs 1 < m <= n, got m={m}, n={n}")));
    }
    Ok((n - n / m) as u64)
}

/// `max{n-k, l} - 1`, the lower bound for deciding `|x| ∈ {k, l}`.
pub fn lb_exact_kl(n: usize, k: usize, l: usize) -> Result<u64> {
    if k >= l || l > n || l - k < 2 {
        return Err(Error::InvalidParameter(format!(
            "lb_exact_kl needs 0 <= k < l <= n with l-k >= 2, got k={k}, l={l}, n={n}"
        )));
    }
    Ok(((n - k).max(l) - 1) as u64)
}

/// The exact quantum query complexity of a family instance, when it is fully
/// characterized; `None` for the `EXACT(k,l)` cases that are still open.
pub fn known_exact_value(family: FunctionFamily, n: usize) -> Result<Option<u64>> {
    if n == 0 {
        return Err(Error::InvalidDimension("input length must be >= 1".into()));
    }
    let value = match family {
        FunctionFamily::Parity => Some(n.div_ceil(2) as u64),
        FunctionFamily::Exact { k } => {
            if k > n {
                return Err(Error::InvalidParameter(format!("EXACT needs k <= n, got k={k}")));
            }
            Some(k.max(n - k) as u64)
        }
        FunctionFamily::Threshold { k } => {
            if k < 1 || k > n {
                return Err(Error::InvalidParameter(format!("TH needs 1 <= k <= n, got k={k}")));
            }
            Some(k.max(n - k + 1) as u64)
        }
        FunctionFamily::Mod { m } => {
            if m < 1 || m > n {
                return Err(Error::InvalidParameter(format!("MOD needs 1 <= m <= n, got m={m}")));
            }
            // m = 1 is the constant function; the formula evaluates to 0.
            Some((n - n / m) as u64)
        }
        FunctionFamily::ExactKl { k, l } => {
            if k >= l || l > n {
                return Err(Error::InvalidParameter(format!(
                    "EXACT(k,l) needs k < l <= n, got k={k}, l={l}"
                )));
            }
            if l - k >= 2 && (k == 0 || (k == 1 && l == n - 1)) {
                Some(((n - k).max(l) - 1) as u64)
            } else {
                None
            }
        }
    };
    Ok(value)
}

/// The reference record for a family instance: lower bound, exact value when
/// known, and the citation tag the bound comes from.
pub fn bound_record(family: FunctionFamily, n: usize) -> Result<BoundRecord> {
    let upper = known_exact_value(family, n)?;
    let record = match family {
        FunctionFamily::Parity => {
            BoundRecord::new(family, n, upper.expect("always known"), upper, "CEMM98")
        }
        FunctionFamily::Exact { .. } | FunctionFamily::Threshold { .. } => {
            BoundRecord::new(family, n, upper.expect("always known"), upper, "AIS13")
        }
        FunctionFamily::Mod { m } => {
            let lower = if m == 1 { 0 } else { lb_mod(n, m)? };
            BoundRecord::new(family, n, lower, upper, "CMO+21")
        }
        FunctionFamily::ExactKl { k, l } => {
            let lower = if l - k >= 2 { lb_exact_kl(n, k, l)? } else { upper.unwrap_or(0) };
            BoundRecord::new(family, n, lower, upper, "AIN17")
        }
    };
    Ok(record)
}
