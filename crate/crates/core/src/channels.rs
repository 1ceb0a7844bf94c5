//! Isometries and the complementary channel pairs they generate.
//!
//! An isometry `J: H_a → H_b ⊗ H_c` induces the pair
//! `B(A) = Tr_c(J A J†)`, `C(A) = Tr_b(J A J†)`. Both are stored eagerly as
//! [`Superoperator`]s so that applying, composing and comparing channels is
//! plain matrix arithmetic.

use crate::error::{Error, Result};
use crate::numkernel::{
    self, c, entropy_unchecked, max_abs_diff, operator_norm, tol, validate_density, Complex64,
    ComplexMatrix,
};

/// Linear map between operator spaces, stored as a `d_out² × d_in²` matrix
/// acting on row-major vectorizations: `vec(A)[i·d + j] = A[i, j]`.
///
/// Complete positivity is not assumed; degrading maps built from the
/// concatenation identities are only ever checked through compositions.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim_in: usize,
    dim_out: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim_in: usize, dim_out: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.shape() != (dim_out * dim_out, dim_in * dim_in) {
            return Err(Error::DimensionMismatch(format!(
                "superoperator {}→{} needs a {}x{} matrix, got {:?}",
                dim_in,
                dim_out,
                dim_out * dim_out,
                dim_in * dim_in,
                matrix.shape()
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            matrix,
        })
    }

    /// Builds the map from its action on the matrix units `E_ij`.
    pub fn from_fn<F>(dim_in: usize, dim_out: usize, f: F) -> Self
    where
        F: Fn(&ComplexMatrix) -> ComplexMatrix,
    {
        let mut matrix = numkernel::zeros(dim_out * dim_out, dim_in * dim_in);
        let mut unit = numkernel::zeros(dim_in, dim_in);
        for i in 0..dim_in {
            for j in 0..dim_in {
                unit[(i, j)] = c(1.0, 0.0);
                let image = f(&unit);
                assert_eq!(image.shape(), (dim_out, dim_out), "from_fn: wrong output shape");
                for k in 0..dim_out {
                    for l in 0..dim_out {
                        matrix[(k * dim_out + l, i * dim_in + j)] = image[(k, l)];
                    }
                }
                unit[(i, j)] = Complex64::default();
            }
        }
        Self {
            dim_in,
            dim_out,
            matrix,
        }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim_in: d,
            dim_out: d,
            matrix: numkernel::identity(d * d),
        }
    }

    /// `A ↦ Tr(A)` onto a one-dimensional output.
    pub fn trace_map(dim_in: usize) -> Self {
        Self::from_fn(dim_in, 1, |a| {
            ComplexMatrix::from_element(1, 1, numkernel::trace(a))
        })
    }

    /// `A ↦ U A U†`.
    pub fn conjugation(u: &ComplexMatrix) -> Self {
        let u = u.clone();
        Self::from_fn(u.ncols(), u.nrows(), move |a| &u * a * u.adjoint())
    }

    /// Tensor product of maps, `(S⊗T)(A⊗B) = S(A)⊗T(B)`.
    pub fn tensor(&self, other: &Superoperator) -> Self {
        let (a_in, b_in) = (self.dim_in, other.dim_in);
        let (a_out, b_out) = (self.dim_out, other.dim_out);
        let mut matrix = numkernel::zeros((a_out * b_out).pow(2), (a_in * b_in).pow(2));
        let out_idx = |k1: usize, k2: usize, l1: usize, l2: usize| {
            (k1 * b_out + k2) * (a_out * b_out) + (l1 * b_out + l2)
        };
        let in_idx = |i1: usize, i2: usize, j1: usize, j2: usize| {
            (i1 * b_in + i2) * (a_in * b_in) + (j1 * b_in + j2)
        };
        for i1 in 0..a_in {
            for j1 in 0..a_in {
                for k1 in 0..a_out {
                    for l1 in 0..a_out {
                        let s = self.matrix[(k1 * a_out + l1, i1 * a_in + j1)];
                        if s == Complex64::default() {
                            continue;
                        }
                        for i2 in 0..b_in {
                            for j2 in 0..b_in {
                                for k2 in 0..b_out {
                                    for l2 in 0..b_out {
                                        let t = other.matrix[(k2 * b_out + l2, i2 * b_in + j2)];
                                        matrix[(out_idx(k1, k2, l1, l2), in_idx(i1, i2, j1, j2))] =
                                            s * t;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Self {
            dim_in: a_in * b_in,
            dim_out: a_out * b_out,
            matrix,
        }
    }

    /// Direct sum: the input is cut into diagonal blocks of the part input
    /// dimensions, part `j` acts on block `j`, outputs are placed
    /// block-diagonally, and off-diagonal input blocks are annihilated.
    pub fn direct_sum(parts: &[Superoperator]) -> Self {
        let dim_in: usize = parts.iter().map(|p| p.dim_in).sum();
        let dim_out: usize = parts.iter().map(|p| p.dim_out).sum();
        Self::from_fn(dim_in, dim_out, |a| {
            let (mut i0, mut o0) = (0, 0);
            let mut out = numkernel::zeros(dim_out, dim_out);
            for p in parts {
                let block = a.view((i0, i0), (p.dim_in, p.dim_in)).into_owned();
                let image = p.apply_unchecked(&block);
                out.view_mut((o0, o0), (p.dim_out, p.dim_out)).copy_from(&image);
                i0 += p.dim_in;
                o0 += p.dim_out;
            }
            out
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.shape() != (self.dim_in, self.dim_in) {
            return Err(Error::DimensionMismatch(format!(
                "superoperator expects {}x{} input, got {:?}",
                self.dim_in,
                self.dim_in,
                a.shape()
            )));
        }
        Ok(self.apply_unchecked(a))
    }

    pub(crate) fn apply_unchecked(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let (di, dout) = (self.dim_in, self.dim_out);
        let mut out = numkernel::zeros(dout, dout);
        for k in 0..dout {
            for l in 0..dout {
                let row = k * dout + l;
                let mut acc = Complex64::default();
                for i in 0..di {
                    for j in 0..di {
                        acc += self.matrix[(row, i * di + j)] * a[(i, j)];
                    }
                }
                out[(k, l)] = acc;
            }
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Superoperator) -> Result<Self> {
        if inner.dim_out != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}→{} after {}→{}",
                self.dim_in, self.dim_out, inner.dim_in, inner.dim_out
            )));
        }
        Ok(Self {
            dim_in: inner.dim_in,
            dim_out: self.dim_out,
            matrix: &self.matrix * &inner.matrix,
        })
    }

    /// Largest entry difference of the two action matrices.
    pub fn max_diff(&self, other: &Superoperator) -> Result<f64> {
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out) {
            return Err(Error::DimensionMismatch("superoperator shapes differ".into()));
        }
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }
}

/// `J: H_a → H_b ⊗ H_c` with `J†J = I_a`; rows are indexed `b·d_c + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    matrix: ComplexMatrix,
    d_a: usize,
    d_b: usize,
    d_c: usize,
}

impl Isometry {
    pub fn new(matrix: ComplexMatrix, d_b: usize, d_c: usize) -> Result<Self> {
        let d_a = matrix.ncols();
        if matrix.nrows() != d_b * d_c {
            return Err(Error::DimensionMismatch(format!(
                "isometry has {} rows, expected d_b·d_c = {}",
                matrix.nrows(),
                d_b * d_c
            )));
        }
        if d_a == 0 || d_a > d_b * d_c {
            return Err(Error::DimensionMismatch(format!(
                "need 0 < d_a ≤ d_b·d_c, got d_a = {d_a}, d_b·d_c = {}",
                d_b * d_c
            )));
        }
        let residual = isometry_residual(&matrix);
        if residual > tol::ISO {
            return Err(Error::NotIsometry { residual });
        }
        Ok(Self {
            matrix,
            d_a,
            d_b,
            d_c,
        })
    }

    /// Builds `J` from the images `J|i⟩`, given as `(amplitude, b, c)` terms.
    pub fn from_images(d_b: usize, d_c: usize, images: &[Vec<(Complex64, usize, usize)>]) -> Result<Self> {
        let mut m = numkernel::zeros(d_b * d_c, images.len());
        for (col, terms) in images.iter().enumerate() {
            for &(amp, b, cc) in terms {
                if b >= d_b || cc >= d_c {
                    return Err(Error::DimensionMismatch(format!(
                        "basis ket |{b}⟩|{cc}⟩ outside {d_b}x{d_c}"
                    )));
                }
                m[(b * d_c + cc, col)] += amp;
            }
        }
        Self::new(m, d_b, d_c)
    }

    /// `|ψ⟩ ↦ |ψ⟩_b |e⟩_c`: generates the perfect pair (identity, trace).
    pub fn perfect(d: usize) -> Self {
        Self {
            matrix: numkernel::identity(d),
            d_a: d,
            d_b: d,
            d_c: 1,
        }
    }

    /// `|ψ⟩ ↦ |f⟩_b |ψ⟩_c`: the pair (trace, identity).
    pub fn perfect_complement(d: usize) -> Self {
        Self::perfect(d).swapped()
    }

    /// Same isometry with the roles of the `b` and `c` factors exchanged.
    pub fn swapped(&self) -> Self {
        let mut m = numkernel::zeros(self.d_b * self.d_c, self.d_a);
        for b in 0..self.d_b {
            for cc in 0..self.d_c {
                m.set_row(cc * self.d_b + b, &self.matrix.row(b * self.d_c + cc));
            }
        }
        Self {
            matrix: m,
            d_a: self.d_a,
            d_b: self.d_c,
            d_c: self.d_b,
        }
    }

    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, d_b: usize, d_c: usize) -> Self {
        let d_a = matrix.ncols();
        Self {
            matrix,
            d_a,
            d_b,
            d_c,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn d_c(&self) -> usize {
        self.d_c
    }

    pub fn residual(&self) -> f64 {
        isometry_residual(&self.matrix)
    }
}

/// `max |J†J − I|`.
pub fn isometry_residual(j: &ComplexMatrix) -> f64 {
    max_abs_diff(&(j.adjoint() * j), &numkernel::identity(j.ncols()))
}

/// Complementary pair `(B, C)` generated by an isometry.
#[derive(Debug, Clone)]
pub struct ChannelPair {
    iso: Isometry,
    b: Superoperator,
    c: Superoperator,
}

/// `B(A) = Tr_c(J A J†)`, `C(A) = Tr_b(J A J†)`.
pub fn make_pair(iso: Isometry) -> Result<ChannelPair> {
    let residual = iso.residual();
    if residual > tol::ISO {
        return Err(Error::NotIsometry { residual });
    }
    Ok(ChannelPair::from_isometry(iso))
}

impl ChannelPair {
    pub(crate) fn from_isometry(iso: Isometry) -> Self {
        let (da, db, dc) = (iso.d_a, iso.d_b, iso.d_c);
        let j = &iso.matrix;
        let mut b = numkernel::zeros(db * db, da * da);
        let mut cm = numkernel::zeros(dc * dc, da * da);
        for i in 0..da {
            for jj in 0..da {
                let col = i * da + jj;
                for k in 0..db {
                    for l in 0..db {
                        let mut acc = Complex64::default();
                        for x in 0..dc {
                            acc += j[(k * dc + x, i)] * j[(l * dc + x, jj)].conj();
                        }
                        b[(k * db + l, col)] = acc;
                    }
                }
                for m in 0..dc {
                    for n in 0..dc {
                        let mut acc = Complex64::default();
                        for y in 0..db {
                            acc += j[(y * dc + m, i)] * j[(y * dc + n, jj)].conj();
                        }
                        cm[(m * dc + n, col)] = acc;
                    }
                }
            }
        }
        Self {
            b: Superoperator {
                dim_in: da,
                dim_out: db,
                matrix: b,
            },
            c: Superoperator {
                dim_in: da,
                dim_out: dc,
                matrix: cm,
            },
            iso,
        }
    }

    pub fn iso(&self) -> &Isometry {
        &self.iso
    }

    pub fn b(&self) -> &Superoperator {
        &self.b
    }

    pub fn c(&self) -> &Superoperator {
        &self.c
    }

    pub fn d_a(&self) -> usize {
        self.iso.d_a
    }

    /// The pair `(C, B)`.
    pub fn swapped(&self) -> ChannelPair {
        ChannelPair {
            iso: self.iso.swapped(),
            b: self.c.clone(),
            c: self.b.clone(),
        }
    }

    /// Entropy bias without validating `rho`; callers guarantee a density
    /// operator of the right size.
    pub(crate) fn bias_unchecked(&self, rho: &ComplexMatrix) -> f64 {
        entropy_unchecked(&self.b.apply_unchecked(rho)) - entropy_unchecked(&self.c.apply_unchecked(rho))
    }
}

/// `Δ(B, ρ) = S(B(ρ)) − S(C(ρ))` in bits.
pub fn entropy_bias(pair: &ChannelPair, rho: &ComplexMatrix) -> Result<f64> {
    if rho.shape() != (pair.d_a(), pair.d_a()) {
        return Err(Error::DimensionMismatch(format!(
            "input state is {:?}, channel input dimension is {}",
            rho.shape(),
            pair.d_a()
        )));
    }
    validate_density(rho)?;
    let sb = numkernel::von_neumann_entropy(&pair.b.apply_unchecked(rho))?;
    let sc = numkernel::von_neumann_entropy(&pair.c.apply_unchecked(rho))?;
    Ok(sb - sc)
}

/// Series composition `B = B₂ ∘ B₁`, generated by `J = (J₂ ⊗ I_{c1}) J₁`.
///
/// The complementary output is ordered `H_{c1} ⊗ H_{c2}`.
pub fn concatenate(first: &ChannelPair, second: &ChannelPair) -> Result<ChannelPair> {
    let (j1, j2) = (&first.iso, &second.iso);
    if j1.d_b != j2.d_a {
        return Err(Error::DimensionMismatch(format!(
            "first channel outputs dimension {}, second expects {}",
            j1.d_b, j2.d_a
        )));
    }
    let (db2, dc1, dc2) = (j2.d_b, j1.d_c, j2.d_c);
    let dc = dc1 * dc2;
    let mut m = numkernel::zeros(db2 * dc, j1.d_a);
    for a in 0..j1.d_a {
        for b2 in 0..db2 {
            for c1 in 0..dc1 {
                for c2 in 0..dc2 {
                    let mut acc = Complex64::default();
                    for b1 in 0..j1.d_b {
                        acc += j2.matrix[(b2 * dc2 + c2, b1)] * j1.matrix[(b1 * dc1 + c1, a)];
                    }
                    m[(b2 * dc + c1 * dc2 + c2, a)] = acc;
                }
            }
        }
    }
    make_pair(Isometry::from_parts_unchecked(m, db2, dc))
}

/// Which output a candidate degrading map produces from which.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `C = D ∘ B`.
    BToC,
    /// `B = D ∘ C`.
    CToB,
}

/// `max_{E_ij} ‖target(E_ij) − D(source(E_ij))‖_op` over the matrix units.
pub fn composition_residual(
    target: &Superoperator,
    d: &Superoperator,
    source: &Superoperator,
) -> Result<f64> {
    if d.dim_in != source.dim_out || d.dim_out != target.dim_out || source.dim_in != target.dim_in {
        return Err(Error::DimensionMismatch(format!(
            "degrading map {}→{} does not connect {}→{} to {}→{}",
            d.dim_in, d.dim_out, source.dim_in, source.dim_out, target.dim_in, target.dim_out
        )));
    }
    let composed = d.compose(source)?;
    let n = target.dim_in;
    let mut unit = numkernel::zeros(n, n);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            unit[(i, j)] = c(1.0, 0.0);
            let diff = target.apply_unchecked(&unit) - composed.apply_unchecked(&unit);
            worst = worst.max(operator_norm(&diff));
            unit[(i, j)] = Complex64::default();
        }
    }
    Ok(worst)
}

/// Residual of the degrading relation between the two outputs of `pair`.
/// A residual below [`tol::ISO`] counts as a verified degrading map.
pub fn verify_degrading(pair: &ChannelPair, d: &Superoperator, direction: Direction) -> Result<f64> {
    match direction {
        Direction::BToC => composition_residual(&pair.c, d, &pair.b),
        Direction::CToB => composition_residual(&pair.b, d, &pair.c),
    }
}

/// Which stage of a concatenation `B₂ ∘ B₁` is antidegradable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Antidegradable {
    /// `B₁` antidegradable, `inner = D₁` with `D₁ ∘ C₁ = B₁`.
    First,
    /// `B₂` antidegradable, `inner = D₂` with `D₂ ∘ C₂ = B₂`.
    Second,
}

/// Degrading map `D: Ĥ_{c1} ⊗ Ĥ_{c2} → Ĥ_{b2}` with `D ∘ C = B` for the
/// concatenated pair of `(first, second)`:
///
/// * [`Antidegradable::First`]: `D(F₁⊗F₂) = Tr(F₂) · B₂∘D₁(F₁)`;
/// * [`Antidegradable::Second`]: `D(F₁⊗F₂) = Tr(F₁) · D₂(F₂)`.
pub fn build_concatenation_degrader(
    inner: &Superoperator,
    which: Antidegradable,
    pairs: (&ChannelPair, &ChannelPair),
) -> Result<Superoperator> {
    let (first, second) = pairs;
    let (dc1, dc2) = (first.iso.d_c, second.iso.d_c);
    match which {
        Antidegradable::First => {
            if inner.dim_in != dc1 || inner.dim_out != first.iso.d_b {
                return Err(Error::DimensionMismatch(format!(
                    "D₁ must map Ĥ_c1 (dim {dc1}) to Ĥ_b1 (dim {})",
                    first.iso.d_b
                )));
            }
            let head = second.b.compose(inner)?;
            Ok(head.tensor(&Superoperator::trace_map(dc2)))
        }
        Antidegradable::Second => {
            if inner.dim_in != dc2 || inner.dim_out != second.iso.d_b {
                return Err(Error::DimensionMismatch(format!(
                    "D₂ must map Ĥ_c2 (dim {dc2}) to Ĥ_b2 (dim {})",
                    second.iso.d_b
                )));
            }
            Ok(Superoperator::trace_map(dc1).tensor(inner))
        }
    }
}

/// Projective decomposition of the identity: mutually orthogonal projectors
/// summing to `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pdi {
    projectors: Vec<ComplexMatrix>,
    dim: usize,
}

impl Pdi {
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = projectors
            .first()
            .map(|p| p.nrows())
            .ok_or_else(|| Error::InvalidPdi("no projectors".into()))?;
        let residual = pdi_residual(&projectors, dim)?;
        if residual > tol::ISO {
            return Err(Error::InvalidPdi(format!("axiom residual {residual:e}")));
        }
        Ok(Self { projectors, dim })
    }

    /// `{I}`.
    pub fn trivial(d: usize) -> Self {
        Self {
            projectors: vec![numkernel::identity(d)],
            dim: d,
        }
    }

    /// Coordinate blocks of the given sizes, in order.
    pub fn blocks(sizes: &[usize]) -> Self {
        let dim = sizes.iter().sum();
        let mut projectors = Vec::with_capacity(sizes.len());
        let mut offset = 0;
        for &s in sizes {
            let mut p = numkernel::zeros(dim, dim);
            for i in offset..offset + s {
                p[(i, i)] = c(1.0, 0.0);
            }
            projectors.push(p);
            offset += s;
        }
        Self { projectors, dim }
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, j: usize) -> Result<&ComplexMatrix> {
        self.projectors.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: self.projectors.len(),
        })
    }

    /// Injection matrix for block `j`: its columns are an orthonormal basis
    /// of the projector's range, found by Gram-Schmidt over the projector's
    /// columns in index order.
    pub fn injection(&self, j: usize) -> Result<ComplexMatrix> {
        let p = self.get(j)?;
        let mut basis: Vec<nalgebra::DVector<Complex64>> = Vec::new();
        for col in 0..p.ncols() {
            let mut v = p.column(col).into_owned();
            for u in &basis {
                let overlap = u.dotc(&v);
                v -= u * overlap;
            }
            let n = v.norm();
            if n > 1e-8 {
                basis.push(v.unscale(n));
            }
        }
        let mut out = numkernel::zeros(self.dim, basis.len());
        for (k, v) in basis.iter().enumerate() {
            out.set_column(k, v);
        }
        Ok(out)
    }
}

/// Largest violation of `P = P† = P²`, `P_i P_j = 0`, `Σ P = I`.
pub fn pdi_residual(projectors: &[ComplexMatrix], dim: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let mut sum = numkernel::zeros(dim, dim);
    for (i, p) in projectors.iter().enumerate() {
        if p.shape() != (dim, dim) {
            return Err(Error::InvalidPdi("projectors act on different spaces".into()));
        }
        worst = worst.max(max_abs_diff(p, &p.adjoint()));
        worst = worst.max(max_abs_diff(p, &(p * p)));
        for q in &projectors[i + 1..] {
            worst = worst.max(numkernel::max_abs(&(p * q)));
        }
        sum += p;
    }
    Ok(worst.max(max_abs_diff(&sum, &numkernel::identity(dim))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{kron, real_diag, DimSplit, Side};
    use crate::random;
    use crate::{erasure, qubit_models};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ad_pair(p: f64) -> ChannelPair {
        make_pair(qubit_models::amplitude_damping_iso(p).unwrap()).unwrap()
    }

    /// Closed-form degrading map for amplitude damping with `p ≥ 1/2`:
    /// `D(F) = AD_q(X F X)`, `q = (2p − 1)/p`, so that `D ∘ C = B`.
    fn ad_degrader(p: f64) -> Superoperator {
        let q = (2.0 * p - 1.0) / p;
        let flip = Superoperator::conjugation(&numkernel::pauli_x());
        ad_pair(q).b().compose(&flip).unwrap()
    }

    #[test]
    fn perfect_pair_is_identity_and_trace() {
        let pair = make_pair(Isometry::perfect(3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let rho = random::density(3, &mut rng);
        assert!(max_abs_diff(&pair.b().apply(&rho).unwrap(), &rho) < 1e-14);
        let c_out = pair.c().apply(&rho).unwrap();
        assert_eq!(c_out.shape(), (1, 1));
        assert!((c_out[(0, 0)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn amplitude_damping_fixed_point() {
        let pair = ad_pair(0.3);
        let zero = real_diag(&[1.0, 0.0]);
        assert!(max_abs_diff(&pair.b().apply(&zero).unwrap(), &zero) < 1e-15);
        assert!(max_abs_diff(&pair.c().apply(&zero).unwrap(), &real_diag(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn make_pair_rejects_non_isometry() {
        let m = numkernel::identity(2).scale(1.1);
        assert!(matches!(Isometry::new(m, 2, 1), Err(Error::NotIsometry { .. })));
    }

    #[test]
    fn pairs_preserve_trace_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pairs = [
            ad_pair(0.3),
            make_pair(erasure::generalized_erasure(qubit_models::dephasing_iso(0.2).unwrap(), 0.4).unwrap().iso().clone()).unwrap(),
        ];
        for pair in &pairs {
            for _ in 0..50 {
                let rho = random::density(2, &mut rng);
                for out in [pair.b().apply(&rho).unwrap(), pair.c().apply(&rho).unwrap()] {
                    assert!((numkernel::trace(&out).re - 1.0).abs() < 1e-10);
                    let s = numkernel::hermitian_spectrum(&out).unwrap();
                    assert!(*s.values().last().unwrap() >= -tol::EIG_CLIP);
                }
            }
        }
    }

    #[test]
    fn bias_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let identity = make_pair(Isometry::perfect(2)).unwrap();
        let rho = random::density(2, &mut rng);
        let s = numkernel::von_neumann_entropy(&rho).unwrap();
        assert!((entropy_bias(&identity, &rho).unwrap() - s).abs() < 1e-12);

        let er = erasure::erasure_pair(erasure::ErasureParams::new(0.3, 2).unwrap());
        let mixed = numkernel::identity(2).scale(0.5);
        assert!((entropy_bias(&er, &mixed).unwrap() - 0.4).abs() < 1e-12);

        let pair = ad_pair(0.37);
        let d1 = entropy_bias(&pair, &rho).unwrap();
        let d2 = entropy_bias(&pair.swapped(), &rho).unwrap();
        assert!((d1 + d2).abs() < 1e-12);
        let rebuilt = make_pair(pair.iso().swapped()).unwrap();
        assert!(rebuilt.b().max_diff(pair.c()).unwrap() < 1e-15);
    }

    #[test]
    fn bias_vanishes_on_pure_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let inner = qubit_models::amplitude_damping_iso(0.21).unwrap();
        let pair = erasure::generalized_erasure(inner, 0.17).unwrap().pair().clone();
        for _ in 0..50 {
            let psi = random::pure(2, &mut rng);
            let sb = numkernel::von_neumann_entropy(&pair.b().apply(&psi).unwrap()).unwrap();
            let sc = numkernel::von_neumann_entropy(&pair.c().apply(&psi).unwrap()).unwrap();
            assert!((sb - sc).abs() < 1e-10);
        }
    }

    #[test]
    fn bias_rejects_bad_state() {
        let pair = ad_pair(0.2);
        assert!(entropy_bias(&pair, &real_diag(&[0.5, 0.6])).is_err());
        assert!(entropy_bias(&pair, &numkernel::identity(3).scale(1.0 / 3.0)).is_err());
    }

    #[test]
    fn erasure_concatenation_multiplies_transmission() {
        let (l, m) = (0.3, 0.45);
        let first = erasure::erasure_pair(erasure::ErasureParams::new(l, 2).unwrap());
        // the second erasure acts on the 3-dim output, its flag merged with the first
        let second = erasure::erasure_pair(erasure::ErasureParams::new(m, 3).unwrap());
        let both = concatenate(&first, &second).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let rho = random::density(2, &mut rng);
        let out = both.b().apply(&rho).unwrap();
        let t = (1.0 - l) * (1.0 - m);
        assert!(max_abs_diff(&out.view((0, 0), (2, 2)).into_owned(), &rho.scale(t)) < 1e-12);
        let erased: f64 = (2..4).map(|i| out[(i, i)].re).sum();
        assert!((erased - (1.0 - t)).abs() < 1e-12);
    }

    #[test]
    fn concatenate_with_identity_keeps_b() {
        let pair = ad_pair(0.4);
        let id = make_pair(Isometry::perfect(2)).unwrap();
        let after = concatenate(&pair, &id).unwrap();
        assert!(after.b().max_diff(pair.b()).unwrap() < 1e-10);
        let before = concatenate(&id, &pair).unwrap();
        assert!(before.b().max_diff(pair.b()).unwrap() < 1e-10);
    }

    #[test]
    fn concatenation_partial_trace_identities() {
        let first = ad_pair(0.35);
        let second = erasure::erasure_pair(erasure::ErasureParams::new(0.25, 2).unwrap());
        let both = concatenate(&first, &second).unwrap();
        let (dc1, dc2) = (first.iso().d_c(), second.iso().d_c());
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..20 {
            let rho = random::density(2, &mut rng);
            let c_out = both.c().apply(&rho).unwrap();
            let split = DimSplit::new(dc1, dc2);
            let over_c1 = numkernel::partial_trace(&c_out, split, Side::Left).unwrap();
            let expect = second.c().apply(&first.b().apply(&rho).unwrap()).unwrap();
            assert!(max_abs_diff(&over_c1, &expect) < 1e-10);
            let over_c2 = numkernel::partial_trace(&c_out, split, Side::Right).unwrap();
            assert!(max_abs_diff(&over_c2, &first.c().apply(&rho).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn concatenate_rejects_mismatch() {
        let a = ad_pair(0.1);
        let b = make_pair(Isometry::perfect(3)).unwrap();
        assert!(matches!(concatenate(&a, &b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn erasure_degrading_map() {
        let lambda = 0.3;
        let pair = erasure::erasure_pair(erasure::ErasureParams::new(lambda, 2).unwrap());
        let d = erasure::erasure_degrader(lambda, 2).unwrap();
        assert!(verify_degrading(&pair, &d, Direction::BToC).unwrap() < 1e-10);
        assert!(((1.0 - 2.0 * lambda) / (1.0 - lambda) - 0.571_428_571_428_571_4).abs() < 1e-15);
        // identity on B → B
        let id = Superoperator::identity(pair.b().dim_out());
        assert_eq!(composition_residual(pair.b(), &id, pair.b()).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_ad_degrader() {
        for p in [0.5, 0.7, 0.9] {
            let pair = ad_pair(p);
            assert!(verify_degrading(&pair, &ad_degrader(p), Direction::CToB).unwrap() < 1e-12);
        }
    }

    #[test]
    fn concatenation_degrader_second_antidegradable_trivial() {
        // B₂ = C₂: the completely dephasing pair |i⟩ ↦ |i⟩|i⟩
        let j = Isometry::from_images(
            2,
            2,
            &[vec![(c(1., 0.), 0, 0)], vec![(c(1., 0.), 1, 1)]],
        )
        .unwrap();
        let second = make_pair(j).unwrap();
        assert!(second.b().max_diff(second.c()).unwrap() == 0.0);
        let first = ad_pair(0.2);
        let both = concatenate(&first, &second).unwrap();
        let d = build_concatenation_degrader(&Superoperator::identity(2), Antidegradable::Second, (&first, &second)).unwrap();
        assert!(verify_degrading(&both, &d, Direction::CToB).unwrap() < 1e-14);
    }

    #[test]
    fn concatenation_degrader_second_antidegradable_amplitude() {
        let first = make_pair(Isometry::perfect(2)).unwrap();
        let second = ad_pair(0.7);
        let both = concatenate(&first, &second).unwrap();
        let d = build_concatenation_degrader(&ad_degrader(0.7), Antidegradable::Second, (&first, &second)).unwrap();
        assert!(verify_degrading(&both, &d, Direction::CToB).unwrap() < 1e-9);
    }

    #[test]
    fn concatenation_degrader_first_antidegradable() {
        let first = ad_pair(0.7);
        let second = erasure::erasure_pair(erasure::ErasureParams::new(0.2, 2).unwrap());
        let both = concatenate(&first, &second).unwrap();
        let d = build_concatenation_degrader(&ad_degrader(0.7), Antidegradable::First, (&first, &second)).unwrap();
        assert!(verify_degrading(&both, &d, Direction::CToB).unwrap() < 1e-9);
    }

    #[test]
    fn concatenation_degrader_trace_factor() {
        let first = ad_pair(0.7);
        let second = ad_pair(0.3);
        let d = build_concatenation_degrader(&ad_degrader(0.7), Antidegradable::First, (&first, &second)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let f1 = random::density(2, &mut rng);
        let f2 = numkernel::pauli_z();
        let out = d.apply(&kron(&f1, &f2)).unwrap();
        assert!(numkernel::max_abs(&out) < 1e-15);
    }

    #[test]
    fn degrader_dimension_checks() {
        let first = ad_pair(0.7);
        let second = ad_pair(0.3);
        let bad = Superoperator::identity(3);
        assert!(build_concatenation_degrader(&bad, Antidegradable::First, (&first, &second)).is_err());
        assert!(verify_degrading(&first, &bad, Direction::BToC).is_err());
    }

    #[test]
    fn pdi_axioms() {
        let pdi = Pdi::blocks(&[2, 1, 3]);
        assert_eq!(pdi.len(), 3);
        assert!(pdi_residual(pdi.projectors(), 6).unwrap() == 0.0);
        assert!(Pdi::new(vec![real_diag(&[1.0, 0.0]), real_diag(&[1.0, 1.0])]).is_err());
        let inj = pdi.injection(2).unwrap();
        assert_eq!(inj.shape(), (6, 3));
        assert!(max_abs_diff(&(&inj * inj.adjoint()), &pdi.projectors()[2]) < 1e-15);
        assert!(matches!(pdi.get(3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn superoperator_tensor_matches_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let s = ad_pair(0.3).c().clone();
        let t = erasure::erasure_pair(erasure::ErasureParams::new(0.2, 2).unwrap()).b().clone();
        let st = s.tensor(&t);
        let a = random::density(2, &mut rng);
        let b = random::density(2, &mut rng);
        let lhs = st.apply(&kron(&a, &b)).unwrap();
        let rhs = kron(&s.apply(&a).unwrap(), &t.apply(&b).unwrap());
        assert!(max_abs_diff(&lhs, &rhs) < 1e-14);
    }
}
