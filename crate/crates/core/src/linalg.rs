//! Dense complex linear algebra: state vectors, unitary matrices, the Fourier
//! operator `F_n` and its basis states `|φ_k⟩`, and comparison helpers.
//!
//! Dense matrices are capped at dimension [`MAX_DENSE_DIM`] (register size 64
//! for composite-space operators); anything larger must go through the
//! structured application paths in [`crate::query`].

pub use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Tolerance on norms, unitarity defects, and probability sums.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance on entrywise and orthogonality comparisons.
pub const ENTRY_TOL: f64 = 1e-12;
/// Largest dimension a dense matrix may have (64² composite space).
pub const MAX_DENSE_DIM: usize = 64 * 64;

/// Unit phase `e^{i·(k mod n)·2π/n}`.
///
/// The exponent is reduced modulo n before entering floating point, so large
/// raw exponents (up to n²) do not accumulate argument error.
pub fn unit_phase(n: usize, k: usize) -> Complex64 {
    let r = k % n;
    if r == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, r as f64 * TAU / n as f64)
    }
}

fn check_dense_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidDimension("dimension must be positive".into()));
    }
    if dim > MAX_DENSE_DIM {
        return Err(Error::InvalidDimension(format!(
            "dense representation capped at dim {MAX_DENSE_DIM}, got {dim}"
        )));
    }
    Ok(())
}

/// A complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wrap raw amplitudes. Rejects empty vectors and non-finite entries.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension("state must have dim >= 1".into()));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Malformed("non-finite amplitude".into()));
        }
        Ok(Self { amps })
    }

    /// Computational basis state `|index⟩` of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("state must have dim >= 1".into()));
        }
        if index >= dim {
            return Err(Error::OutOfRange(format!("basis index {index} >= dim {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, j: usize) -> Complex64 {
        self.amps[j]
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// True when the squared norm is within `tol` of 1.
    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() <= tol
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `|self⟩ ⊗ |other⟩`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { amps }
    }

    /// Largest entrywise modulus of the difference to `other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_deviation: dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A dense square complex matrix, row-major.
///
/// The name records intent: everything this crate constructs here is unitary
/// (Fourier operators, permutations, and their products), and the test suite
/// checks `U†U = I` rather than the constructors.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    /// Build from an entry function `f(row, col)`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        check_dense_dim(dim)?;
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |r, c| {
            if r == c { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        })
    }

    /// Permutation matrix sending `|i⟩` to `|map(i)⟩`.
    pub fn permutation(dim: usize, map: impl Fn(usize) -> usize) -> Result<Self> {
        check_dense_dim(dim)?;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            let t = map(i);
            assert!(t < dim, "permutation target {t} out of range for dim {dim}");
            entries[t * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let dim = self.dim;
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(self.entries[c * dim + r].conj());
            }
        }
        Self { dim, entries }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: rhs.dim });
        }
        let dim = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.entries[r * dim + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..dim {
                    entries[r * dim + c] += a * rhs.entries[k * dim + c];
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        let dim = self.dim * rhs.dim;
        check_dense_dim(dim)?;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for ra in 0..self.dim {
            for ca in 0..self.dim {
                let a = self.entries[ra * self.dim + ca];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for rb in 0..rhs.dim {
                    for cb in 0..rhs.dim {
                        entries[(ra * rhs.dim + rb) * dim + (ca * rhs.dim + cb)] =
                            a * rhs.entries[rb * rhs.dim + cb];
                    }
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// Largest entrywise modulus of the difference to `other`.
    pub fn max_entry_deviation(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_entry_deviation: dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.dagger().mul(self).expect("same dim");
        let id = Self::identity(self.dim).expect("dim already checked");
        prod.max_entry_deviation(&id)
    }
}

/// The Fourier operator `F_n` with entries `e^{ijk·2π/n}/√n`.
pub fn fourier_matrix(n: usize) -> Result<UnitaryMatrix> {
    check_dense_dim(n)?;
    let scale = 1.0 / (n as f64).sqrt();
    UnitaryMatrix::from_fn(n, |j, k| unit_phase(n, j * k) * scale)
}

/// The Fourier basis state `|φ_k⟩` with amplitudes `e^{ijk·2π/n}/√n`.
pub fn phi_state(n: usize, k: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidDimension("dimension must be positive".into()));
    }
    if k >= n {
        return Err(Error::OutOfRange(format!("residue {k} >= n {n}")));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let amps = (0..n).map(|j| unit_phase(n, j * k) * scale).collect();
    Ok(StateVector { amps })
}

/// Matrix–vector product `U|s⟩`.
pub fn apply_operator(u: &UnitaryMatrix, s: &StateVector) -> Result<StateVector> {
    if u.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: s.dim() });
    }
    let dim = u.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (r, out) in amps.iter_mut().enumerate() {
        let row = &u.entries[r * dim..(r + 1) * dim];
        *out = row.iter().zip(&s.amps).map(|(m, a)| m * a).sum();
    }
    Ok(StateVector { amps })
}

/// `|⟨a|b⟩|` - equals 1 exactly when `a` and `b` agree up to a global phase.
pub fn global_phase_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm())
}
