//! Symmetric function tables, brute-force classical evaluation (the ground
//! truth every algorithm is checked against), and promise validation.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::query::BitString;

/// Output label code. Labels are small integers; residues and bits are used
/// directly as their own codes.
pub type Label = u32;

/// A symmetric function given by its univariate table `F(0), …, F(n)`, so
/// that `f(x) = F(|x|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricFunction {
    labels: Vec<Label>,
}

impl SymmetricFunction {
    /// Build from the table `F(0..=n)`; `labels` must have `n + 1` entries.
    pub fn new(n: usize, labels: Vec<Label>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("input length must be >= 1".into()));
        }
        if labels.len() != n + 1 {
            return Err(Error::Malformed(format!(
                "table needs n+1 = {} labels, got {}",
                n + 1,
                labels.len()
            )));
        }
        Ok(Self { labels })
    }

    /// Input length n.
    pub fn n(&self) -> usize {
        self.labels.len() - 1
    }

    /// The table `F(0), …, F(n)`.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// `F(w)` for a Hamming weight `w <= n`.
    pub fn univariate(&self, w: usize) -> Label {
        self.labels[w]
    }

    /// Brute-force evaluation `f(x) = F(|x|)`.
    pub fn eval(&self, x: &BitString) -> Result<Label> {
        if x.n() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: x.n() });
        }
        Ok(self.labels[x.hamming_weight()])
    }

    /// Parse the two-line function-spec format:
    ///
    /// ```text
    /// n=<int>
    /// F=<comma-separated n+1 integers>
    /// ```
    pub fn parse_spec(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n_line = lines.next().ok_or_else(|| Error::Malformed("empty function spec".into()))?;
        let f_line = lines
            .next()
            .ok_or_else(|| Error::Malformed("function spec missing F= line".into()))?;
        let n: usize = n_line
            .strip_prefix("n=")
            .ok_or_else(|| Error::Malformed(format!("expected n=<int>, got {n_line:?}")))?
            .trim()
            .parse()
            .map_err(|e| Error::Malformed(format!("bad n value: {e}")))?;
        let labels: Vec<Label> = f_line
            .strip_prefix("F=")
            .ok_or_else(|| Error::Malformed(format!("expected F=<labels>, got {f_line:?}")))?
            .split(',')
            .map(|t| t.trim().parse().map_err(|e| Error::Malformed(format!("bad label: {e}"))))
            .collect::<Result<_>>()?;
        Self::new(n, labels)
    }

    /// Read the function-spec format from a file.
    pub fn from_spec_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_spec(&std::fs::read_to_string(path)?)
    }

    /// Serialize back to the two-line function-spec format.
    pub fn to_spec_string(&self) -> String {
        let labels: Vec<String> = self.labels.iter().map(Label::to_string).collect();
        format!("n={}\nF={}\n", self.n(), labels.join(","))
    }
}

impl FromStr for SymmetricFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_spec(s)
    }
}

/// Whether the table admits the non-evasiveness witness k:
/// `F(0) = F(k)` and `F(n-k) = F(n)`.
pub fn validate_nonevasive_promise(f: &SymmetricFunction, k: usize) -> Result<bool> {
    let n = f.n();
    if k < 1 || k > n {
        return Err(Error::OutOfRange(format!("k={k} outside 1..={n}")));
    }
    Ok(f.univariate(0) == f.univariate(k) && f.univariate(n - k) == f.univariate(n))
}

/// The built-in symmetric function families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionFamily {
    /// `|x| mod m`.
    Mod { m: usize },
    /// 1 iff `|x| = k`.
    Exact { k: usize },
    /// 1 iff `|x| ∈ {k, l}`, k < l.
    ExactKl { k: usize, l: usize },
    /// 1 iff `|x| >= k`.
    Threshold { k: usize },
    /// `|x| mod 2`.
    Parity,
}

impl fmt::Display for FunctionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mod { m } => write!(f, "MOD({m})"),
            Self::Exact { k } => write!(f, "EXACT({k})"),
            Self::ExactKl { k, l } => write!(f, "EXACT({k},{l})"),
            Self::Threshold { k } => write!(f, "TH({k})"),
            Self::Parity => write!(f, "PARITY"),
        }
    }
}

/// The univariate table of a built-in family at input length n.
pub fn builtin_table(family: FunctionFamily, n: usize) -> Result<SymmetricFunction> {
    if n == 0 {
        return Err(Error::InvalidDimension("input length must be >= 1".into()));
    }
    let table = |f: &dyn Fn(usize) -> Label| (0..=n).map(f).collect::<Vec<_>>();
    let labels = match family {
        FunctionFamily::Parity => table(&|w| (w % 2) as Label),
        FunctionFamily::Mod { m } => {
            if m < 1 || m > n {
                return Err(Error::InvalidParameter(format!("MOD needs 1 <= m <= n, got m={m}, n={n}")));
            }
            table(&|w| (w % m) as Label)
        }
        FunctionFamily::Exact { k } => {
            if k > n {
                return Err(Error::InvalidParameter(format!("EXACT needs k <= n, got k={k}, n={n}")));
            }
            table(&|w| (w == k) as Label)
        }
        FunctionFamily::ExactKl { k, l } => {
            if k >= l || l > n {
                return Err(Error::InvalidParameter(format!(
                    "EXACT(k,l) needs k < l <= n, got k={k}, l={l}, n={n}"
                )));
            }
            table(&|w| (w == k || w == l) as Label)
        }
        FunctionFamily::Threshold { k } => {
            if k < 1 || k > n {
                return Err(Error::InvalidParameter(format!("TH needs 1 <= k <= n, got k={k}, n={n}")));
            }
            table(&|w| (w >= k) as Label)
        }
    };
    SymmetricFunction::new(n, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_weights() {
        assert_eq!(BitString::zeros(6).unwrap().hamming_weight(), 0);
        assert_eq!(BitString::ones(5).unwrap().hamming_weight(), 5);
        assert_eq!("10110".parse::<BitString>().unwrap().hamming_weight(), 3);
    }

    #[test]
    fn eval_examples() {
        let parity = builtin_table(FunctionFamily::Parity, 3).unwrap();
        assert_eq!(parity.labels(), &[0, 1, 0, 1]);
        assert_eq!(parity.eval(&"110".parse().unwrap()).unwrap(), 0);

        let exact2 = builtin_table(FunctionFamily::Exact { k: 2 }, 4).unwrap();
        assert_eq!(exact2.labels(), &[0, 0, 1, 0, 0]);
        assert_eq!(exact2.eval(&"0110".parse().unwrap()).unwrap(), 1);

        let mod3 = builtin_table(FunctionFamily::Mod { m: 3 }, 5).unwrap();
        assert_eq!(mod3.labels(), &[0, 1, 2, 0, 1, 2]);
        assert_eq!(mod3.eval(&"11100".parse().unwrap()).unwrap(), 0);
    }

    #[test]
    fn eval_rejects_length_mismatch() {
        let parity = builtin_table(FunctionFamily::Parity, 3).unwrap();
        assert!(matches!(
            parity.eval(&"1100".parse().unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn builtin_examples() {
        let ekl = builtin_table(FunctionFamily::ExactKl { k: 1, l: 3 }, 4).unwrap();
        assert_eq!(ekl.labels(), &[0, 1, 0, 1, 0]);

        let mod3 = builtin_table(FunctionFamily::Mod { m: 3 }, 4).unwrap();
        assert_eq!(mod3.labels(), &[0, 1, 2, 0, 1]);

        assert!(builtin_table(FunctionFamily::Mod { m: 5 }, 4).is_err());
        assert!(builtin_table(FunctionFamily::ExactKl { k: 2, l: 2 }, 4).is_err());
    }

    #[test]
    fn promise_examples() {
        // MOD_n^n: k = n works since F(0) = F(n) = 0.
        let n = 5;
        let modn = builtin_table(FunctionFamily::Mod { m: n }, n).unwrap();
        assert!(validate_nonevasive_promise(&modn, n).unwrap());

        let ekl = SymmetricFunction::new(4, vec![0, 1, 0, 1, 0]).unwrap();
        assert!(validate_nonevasive_promise(&ekl, 2).unwrap());

        // AND_4 admits no witness.
        let and4 = SymmetricFunction::new(4, vec![0, 0, 0, 0, 1]).unwrap();
        for k in 1..=4 {
            assert!(!validate_nonevasive_promise(&and4, k).unwrap(), "k={k}");
        }
        assert!(validate_nonevasive_promise(&and4, 5).is_err());
        assert!(validate_nonevasive_promise(&and4, 0).is_err());
    }

    #[test]
    fn exact_kl_is_pointwise_or_of_exacts() {
        for n in 2..=8usize {
            for k in 0..n {
                for l in (k + 1)..=n {
                    let kl = builtin_table(FunctionFamily::ExactKl { k, l }, n).unwrap();
                    let ek = builtin_table(FunctionFamily::Exact { k }, n).unwrap();
                    let el = builtin_table(FunctionFamily::Exact { k: l }, n).unwrap();
                    for w in 0..=n {
                        assert_eq!(
                            kl.univariate(w),
                            ek.univariate(w) | el.univariate(w),
                            "n={n} k={k} l={l} w={w}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn spec_format_round_trip() {
        let f = SymmetricFunction::new(4, vec![0, 1, 0, 1, 0]).unwrap();
        let text = f.to_spec_string();
        assert_eq!(text, "n=4\nF=0,1,0,1,0\n");
        let back = SymmetricFunction::parse_spec(&text).unwrap();
        assert_eq!(back, f);

        assert!(SymmetricFunction::parse_spec("n=2\nF=0,1").is_err());
        assert!(SymmetricFunction::parse_spec("m=2\nF=0,1,0").is_err());
        assert!(SymmetricFunction::parse_spec("").is_err());
    }
}
