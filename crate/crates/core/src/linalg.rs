//! Dense complex linear algebra for two- and four-dimensional Hilbert spaces.
//!
//! Everything the engine needs fits in fixed-size 2×2 and 4×4 complex
//! matrices over the two-qubit basis (|00⟩, |01⟩, |10⟩, |11⟩), with the first
//! slot holding Alice's qubit. Fixed dimensions keep the code exhaustively
//! testable; there is deliberately no general-N machinery here.
//!
//! All operations are pure functions on `Copy` value types and are safe to
//! call from any number of threads.

use std::ops::Index;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Default tolerance for invariant checks (normalization, unitarity, trace
/// reality). All arithmetic here is short chains of double-precision
/// products, so 1e-9 leaves a wide margin over accumulated rounding.
pub const DEFAULT_TOL: f64 = 1e-9;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// A two-qubit state vector over (|00⟩, |01⟩, |10⟩, |11⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector4 {
    amps: [Complex; 4],
}

impl Vector4 {
    pub const fn new(amps: [Complex; 4]) -> Self {
        Self { amps }
    }

    /// Computational basis vector |index⟩, index in 0..4.
    pub fn basis(index: usize) -> Self {
        assert!(index < 4, "basis index out of range");
        let mut amps = [ZERO; 4];
        amps[index] = ONE;
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex; 4] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

impl Index<usize> for Vector4 {
    type Output = Complex;

    fn index(&self, index: usize) -> &Complex {
        &self.amps[index]
    }
}

/// A single-qubit operator over (|0⟩, |1⟩), stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    rows: [[Complex; 2]; 2],
}

impl Matrix2 {
    pub const fn from_rows(rows: [[Complex; 2]; 2]) -> Self {
        Self { rows }
    }

    pub fn identity() -> Self {
        Self::from_rows([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.rows[row][col]
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> Self {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out[j][i] = v.conj();
            }
        }
        Self { rows: out }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[ZERO; 2]; 2];
        for (i, orow) in out.iter_mut().enumerate() {
            for (j, o) in orow.iter_mut().enumerate() {
                *o = (0..2).map(|k| self.rows[i][k] * rhs.rows[k][j]).sum();
            }
        }
        Self { rows: out }
    }

    /// Max-norm deviation of M·M† from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.mul(&self.adjoint());
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((p.rows[i][j] - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        // NaN-safe: a NaN defect must not pass.
        self.unitarity_defect() <= tol
    }
}

/// A two-qubit operator over (|00⟩, |01⟩, |10⟩, |11⟩), stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4 {
    rows: [[Complex; 4]; 4],
}

impl Matrix4 {
    pub const fn from_rows(rows: [[Complex; 4]; 4]) -> Self {
        Self { rows }
    }

    pub fn zeros() -> Self {
        Self::from_rows([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut rows = [[ZERO; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Self { rows }
    }

    /// Diagonal matrix with real entries.
    pub fn diag(entries: [f64; 4]) -> Self {
        let mut rows = [[ZERO; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Complex::new(entries[i], 0.0);
        }
        Self { rows }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.rows[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out[j][i] = v.conj();
            }
        }
        Self { rows: out }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[ZERO; 4]; 4];
        for (i, orow) in out.iter_mut().enumerate() {
            for (j, o) in orow.iter_mut().enumerate() {
                *o = (0..4).map(|k| self.rows[i][k] * rhs.rows[k][j]).sum();
            }
        }
        Self { rows: out }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.rows;
        for (orow, rrow) in out.iter_mut().zip(&rhs.rows) {
            for (o, r) in orow.iter_mut().zip(rrow) {
                *o += r;
            }
        }
        Self { rows: out }
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = self.rows;
        for row in out.iter_mut() {
            for v in row.iter_mut() {
                *v *= k;
            }
        }
        Self { rows: out }
    }

    pub fn trace(&self) -> Complex {
        (0..4).map(|i| self.rows[i][i]).sum()
    }

    /// Apply the operator to a state vector.
    pub fn apply(&self, v: &Vector4) -> Vector4 {
        let mut amps = [ZERO; 4];
        for (i, row) in self.rows.iter().enumerate() {
            amps[i] = row.iter().zip(v.amplitudes()).map(|(m, a)| m * a).sum();
        }
        Vector4::new(amps)
    }

    /// Largest entry-wise absolute difference between two matrices.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (arow, brow) in self.rows.iter().zip(&other.rows) {
            for (a, b) in arow.iter().zip(brow) {
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.mul(&self.adjoint()).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Max-norm deviation of M from M†.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }
}

/// Kronecker product with Alice's operator in the first slot, so the output
/// acts on the basis (|00⟩, |01⟩, |10⟩, |11⟩).
pub fn tensor(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut rows = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    rows[2 * i + k][2 * j + l] = a.get(i, j) * b.get(k, l);
                }
            }
        }
    }
    Matrix4::from_rows(rows)
}

/// Rank-1 projector |v⟩⟨v| of a normalized state.
///
/// Errors if the input is not normalized within `tol`.
pub fn projector(v: &Vector4, tol: f64) -> Result<Matrix4> {
    let defect = (v.norm_sqr() - 1.0).abs();
    if defect > tol || defect.is_nan() {
        return Err(Error::NotNormalized(defect));
    }
    let mut rows = [[ZERO; 4]; 4];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, out) in row.iter_mut().enumerate() {
            *out = v[i] * v[j].conj();
        }
    }
    Ok(Matrix4::from_rows(rows))
}

/// Conjugation UρU† by a unitary.
///
/// Errors if `u` fails the unitarity check within `tol`.
pub fn conjugate_evolve(u: &Matrix4, rho: &Matrix4, tol: f64) -> Result<Matrix4> {
    let defect = u.unitarity_defect();
    if defect > tol || defect.is_nan() {
        return Err(Error::NotUnitary(defect));
    }
    Ok(u.mul(rho).mul(&u.adjoint()))
}

/// Re(Tr(Pρ)) for a Hermitian observable against a density matrix.
///
/// Both inputs being Hermitian forces the trace to be real, so an imaginary
/// part above `tol` is reported as an error rather than silently dropped.
pub fn real_trace_product(p: &Matrix4, rho: &Matrix4, tol: f64) -> Result<f64> {
    // Tr(Pρ) = Σ_ij P_ij ρ_ji; no need to materialize the product.
    let mut tr = ZERO;
    for i in 0..4 {
        for j in 0..4 {
            tr += p.get(i, j) * rho.get(j, i);
        }
    }
    let im = tr.im.abs();
    if im > tol || im.is_nan() {
        return Err(Error::ComplexTrace(im));
    }
    Ok(tr.re)
}
