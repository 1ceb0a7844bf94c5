//! Seeded random matrices and states for property checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::Isometry;
use crate::numkernel::{c, projector, trace, ComplexMatrix};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn complex_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = complex_matrix(d, d, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Full-rank density operator `G G† / Tr(G G†)` (Ginibre ensemble).
pub fn density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = complex_matrix(d, d, rng);
    let m = &g * g.adjoint();
    let t = trace(&m).re;
    m.unscale(t)
}

pub fn pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let v = complex_matrix(d, 1, rng);
    let n = v.norm();
    projector(&v.unscale(n))
}

/// Haar-ish unitary from the QR factor of a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    complex_matrix(d, d, rng).qr().q()
}

/// Random isometry `H_a → H_b ⊗ H_c` (needs `d_b·d_c ≥ d_a`).
pub fn isometry<R: Rng + ?Sized>(d_a: usize, d_b: usize, d_c: usize, rng: &mut R) -> Isometry {
    assert!(d_b * d_c >= d_a, "isometry needs d_b·d_c ≥ d_a");
    let q = complex_matrix(d_b * d_c, d_a, rng).qr().q();
    Isometry::from_parts_unchecked(q, d_b, d_c)
}
