//! Dense complex linear algebra and entropy primitives.
//!
//! Everything here is sized for Hilbert spaces of dimension up to a few
//! dozen: the largest operator the rest of the crate touches is the
//! complementary output of two glued-erasure channels in parallel (16×16).
//! Matrices are [`nalgebra::DMatrix`] over [`Complex64`]; bipartite indices
//! are ordered left-factor-major, so entry `(i, k)` of `H_left ⊗ H_right`
//! lives at `i * d_right + k`.
//!
//! All entropies are in bits.

use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row/column indices as described in the module docs.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Numerical tolerances shared by the whole crate.
pub mod tol {
    /// Maximum `|m - m^dag|` entry for a matrix to count as Hermitian.
    pub const HERM: f64 = 1e-10;
    /// Allowed deviation of a trace or probability sum from 1.
    pub const SUM: f64 = 1e-9;
    /// Eigenvalues below this are clamped to zero before taking logs.
    pub const EIG_CLIP: f64 = 1e-12;
    /// Most negative eigenvalue accepted for a density operator.
    pub const EIG: f64 = 1e-10;
    /// Isometry / projector identities.
    pub const ISO: f64 = 1e-10;
}

/// Split of an ambient dimension into `d_left × d_right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimSplit {
    pub d_left: usize,
    pub d_right: usize,
}

impl DimSplit {
    pub fn new(d_left: usize, d_right: usize) -> Self {
        Self { d_left, d_right }
    }

    pub fn total(&self) -> usize {
        self.d_left * self.d_right
    }
}

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Real eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(pub Vec<f64>);

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Shannon entropy (bits) of the spectrum, after clamping values below
    /// [`tol::EIG_CLIP`] to zero.
    pub fn entropy(&self) -> f64 {
        spectrum_entropy(&self.0)
    }
}

#[inline]
fn xlog2x(x: f64) -> f64 {
    if x <= tol::EIG_CLIP {
        0.0
    } else {
        x * x.log2()
    }
}

pub(crate) fn spectrum_entropy(values: &[f64]) -> f64 {
    -values.iter().map(|&e| xlog2x(e)).sum::<f64>()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// Column vector `|i⟩` in dimension `d`.
pub fn ket(d: usize, i: usize) -> ComplexMatrix {
    let mut v = zeros(d, 1);
    v[(i, 0)] = c(1.0, 0.0);
    v
}

/// `|v⟩⟨v|` for a column vector `v` (not normalized here).
pub fn projector(v: &ComplexMatrix) -> ComplexMatrix {
    v * v.adjoint()
}

/// Diagonal matrix with real entries.
pub fn real_diag(entries: &[f64]) -> ComplexMatrix {
    let mut m = zeros(entries.len(), entries.len());
    for (i, &e) in entries.iter().enumerate() {
        m[(i, i)] = c(e, 0.0);
    }
    m
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Largest entry magnitude of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Spectral (operator) norm.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Kronecker product: `(A⊗B)[i·q+k, j·s+l] = A[i,j]·B[k,l]` for `B` of shape `q×s`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (q, s) = b.shape();
    let mut out = zeros(a.nrows() * q, a.ncols() * s);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let aij = a[(i, j)];
            if aij == Complex64::default() {
                continue;
            }
            for k in 0..q {
                for l in 0..s {
                    out[(i * q + k, j * s + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Trace out one factor of a bipartite operator.
pub fn partial_trace(m: &ComplexMatrix, split: DimSplit, side: Side) -> Result<ComplexMatrix> {
    let n = split.total();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial_trace: {}x{} matrix vs split {}x{}",
            m.nrows(),
            m.ncols(),
            split.d_left,
            split.d_right
        )));
    }
    Ok(partial_trace_unchecked(m, split, side))
}

pub(crate) fn partial_trace_unchecked(m: &ComplexMatrix, split: DimSplit, side: Side) -> ComplexMatrix {
    let (dl, dr) = (split.d_left, split.d_right);
    match side {
        Side::Right => {
            let mut out = zeros(dl, dl);
            for i in 0..dl {
                for j in 0..dl {
                    let mut acc = Complex64::default();
                    for k in 0..dr {
                        acc += m[(i * dr + k, j * dr + k)];
                    }
                    out[(i, j)] = acc;
                }
            }
            out
        }
        Side::Left => {
            let mut out = zeros(dr, dr);
            for k in 0..dr {
                for l in 0..dr {
                    let mut acc = Complex64::default();
                    for i in 0..dl {
                        acc += m[(i * dr + k, i * dr + l)];
                    }
                    out[(k, l)] = acc;
                }
            }
            out
        }
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let deviation = hermitian_deviation(m);
    if deviation > tol::HERM {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_spectrum(m: &ComplexMatrix) -> Result<Spectrum> {
    check_hermitian(m)?;
    Ok(Spectrum(eigenvalues_desc(&hermitize(m))))
}

pub(crate) fn eigenvalues_desc(m: &ComplexMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().cloned().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Eigenvalues (descending) with the matching orthonormal eigenvectors as
/// the columns of the returned matrix.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(m)?;
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = zeros(m.nrows(), m.ncols());
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// Checks that `m` is a density operator within the crate tolerances.
pub fn validate_density(m: &ComplexMatrix) -> Result<()> {
    check_hermitian(m)?;
    let tr = trace(m);
    if (tr.re - 1.0).abs() > tol::SUM || tr.im.abs() > tol::SUM {
        return Err(Error::NotNormalized { trace: tr.re });
    }
    let min = eigenvalues_desc(&hermitize(m)).last().copied().unwrap_or(0.0);
    if min < -tol::EIG {
        return Err(Error::OutOfDomain {
            name: "smallest eigenvalue",
            value: min,
            domain: ">= -1e-10",
        });
    }
    Ok(())
}

/// von Neumann entropy `-Tr(ρ log₂ ρ)` in bits.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64> {
    check_hermitian(m)?;
    let tr = trace(m);
    if (tr.re - 1.0).abs() > tol::SUM {
        return Err(Error::NotNormalized { trace: tr.re });
    }
    Ok(spectrum_entropy(&eigenvalues_desc(&hermitize(m))))
}

/// Entropy of an operator already known to be a (sub-)normalized density
/// operator; used on channel outputs inside optimization loops.
pub(crate) fn entropy_unchecked(m: &ComplexMatrix) -> f64 {
    spectrum_entropy(&eigenvalues_desc(&hermitize(m)))
}

/// Base-2 Shannon entropy of a probability list.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(&neg) = p.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::NegativeProbability(neg));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol::SUM {
        return Err(Error::NotNormalized { trace: total });
    }
    Ok(-p.iter().map(|&x| if x > 0.0 { x * x.log2() } else { 0.0 }).sum::<f64>())
}

/// Block-diagonal embedding `⊕ blocks`; off-block entries are exactly zero.
pub fn direct_sum_embed(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        out.view_mut((r0, c0), b.shape()).copy_from(b);
        r0 += b.nrows();
        c0 += b.ncols();
    }
    out
}

/// Swap the two factors of a bipartite operator: `S (A⊗B) S† = B⊗A`.
pub fn swap_factors(m: &ComplexMatrix, split: DimSplit) -> ComplexMatrix {
    let (dl, dr) = (split.d_left, split.d_right);
    let idx = |i: usize, k: usize| i * dr + k;
    let swapped = |i: usize, k: usize| k * dl + i;
    let mut out = zeros(m.nrows(), m.ncols());
    for i in 0..dl {
        for k in 0..dr {
            for j in 0..dl {
                for l in 0..dr {
                    out[(swapped(i, k), swapped(j, l))] = m[(idx(i, k), idx(j, l))];
                }
            }
        }
    }
    out
}
