//! Erasure channels and the generalized erasure pair.
//!
//! Block layout: `B` outputs `(inner ⊕ [f])`, `C` outputs `(inner ⊕ passthrough)`.
//! For the plain erasure pair the inner channel is perfect, so
//! `H_b = H_a ⊕ [f]` and `H_c = [e] ⊕ H_a`.

use crate::channels::{concatenate, make_pair, ChannelPair, Isometry, Superoperator};
use crate::error::{check_domain, Error, Result};
use crate::gluing::{self, block_diagonal_unchecked_weights, Glued};
use crate::numkernel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErasureParams {
    lambda: f64,
    d_a: usize,
}

impl ErasureParams {
    pub fn new(lambda: f64, d_a: usize) -> Result<Self> {
        check_domain("lambda", lambda, (0.0..=1.0).contains(&lambda), "[0, 1]")?;
        if d_a < 2 {
            return Err(Error::DimensionMismatch(format!("erasure input dimension {d_a} < 2")));
        }
        Ok(Self { lambda, d_a })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }
}

/// `(E^λ, E^{1−λ})`: block-diagonal gluing of the two perfect pairs with
/// weights `(1−λ, λ)`.
pub fn erasure_pair(params: ErasureParams) -> ChannelPair {
    let d = params.d_a;
    erasure_glued(params.lambda, d).expect("perfect pairs always glue").pair
}

fn erasure_glued(lambda: f64, d: usize) -> Result<Glued> {
    block_diagonal_unchecked_weights(
        &[Isometry::perfect(d), Isometry::perfect_complement(d)],
        &[1.0 - lambda, lambda],
    )
}

/// `(Q¹(E^λ), Q¹(E^{1−λ}))` in bits.
pub fn erasure_q1(params: ErasureParams) -> (f64, f64) {
    let bits = (params.d_a as f64).log2();
    let l = params.lambda;
    ((1.0 - 2.0 * l).max(0.0) * bits, (2.0 * l - 1.0).max(0.0) * bits)
}

/// Degrading map `D` with `E^{1−λ} = D ∘ E^λ` for `λ < 1/2`: a further
/// erasure with probability `μ = (1−2λ)/(1−λ)` that shares the flag.
/// It maps `H_a ⊕ [f]` (the `B` layout) onto `[e] ⊕ H_a` (the `C` layout).
pub fn erasure_degrader(lambda: f64, d: usize) -> Result<Superoperator> {
    check_domain("lambda", lambda, (0.0..=0.5).contains(&lambda), "[0, 1/2]")?;
    let mu = (1.0 - 2.0 * lambda) / (1.0 - lambda);
    Ok(Superoperator::from_fn(d + 1, d + 1, |x| {
        let a = x.view((0, 0), (d, d)).into_owned();
        let mut out = numkernel::zeros(d + 1, d + 1);
        out[(0, 0)] = numkernel::trace(&a) * mu + x[(d, d)];
        out.view_mut((1, 1), (d, d)).copy_from(&a.scale(1.0 - mu));
        out
    }))
}

/// `B_g(A) = (1−λ)B₁(A) ⊕ λTr(A)[f]`, `C_g(A) = (1−λ)C₁(A) ⊕ λA`.
#[derive(Debug, Clone)]
pub struct GeneralizedErasure {
    inner: Isometry,
    lambda: f64,
    assembled: ChannelPair,
}

pub fn generalized_erasure(inner: Isometry, lambda: f64) -> Result<GeneralizedErasure> {
    check_domain("lambda", lambda, (0.0..=1.0).contains(&lambda), "[0, 1]")?;
    let d = inner.d_a();
    let glued = block_diagonal_unchecked_weights(
        &[inner.clone(), Isometry::perfect_complement(d)],
        &[1.0 - lambda, lambda],
    )?;
    Ok(GeneralizedErasure {
        inner,
        lambda,
        assembled: glued.pair,
    })
}

impl GeneralizedErasure {
    pub fn pair(&self) -> &ChannelPair {
        &self.assembled
    }

    pub fn iso(&self) -> &Isometry {
        self.assembled.iso()
    }

    pub fn inner(&self) -> &Isometry {
        &self.inner
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Largest deviation of `B_g` from `(1−λ)B₁(E_ij) ⊕ λδ_ij[f]` over the
    /// matrix units.
    pub fn structure_residual(&self) -> f64 {
        let inner = make_pair(self.inner.clone()).expect("validated isometry");
        let l = self.lambda;
        let expect = Superoperator::from_fn(self.inner.d_a(), self.inner.d_b() + 1, |a| {
            numkernel::direct_sum_embed(&[
                inner.b().apply_unchecked(a).scale(1.0 - l),
                numkernel::ComplexMatrix::from_element(1, 1, numkernel::trace(a) * l),
            ])
        });
        expect.max_diff(self.assembled.b()).expect("same shape")
    }

    /// Residuals of the two series forms of `B_g`:
    /// erasure after `B₁`, and `B₁ ⊕ id₁` after erasure.
    pub fn reversal_residuals(&self) -> Result<(f64, f64)> {
        let inner = make_pair(self.inner.clone())?;
        let (d_a, d_b1) = (self.inner.d_a(), self.inner.d_b());
        let after = concatenate(&inner, &erasure_pair(ErasureParams::new(self.lambda, d_b1)?))?;
        let widened = gluing::glue_direct_sum(&[self.inner.clone(), Isometry::perfect(1)])?;
        let before = concatenate(&erasure_pair(ErasureParams::new(self.lambda, d_a)?), &widened.pair)?;
        Ok((
            after.b().max_diff(self.assembled.b())?,
            before.b().max_diff(self.assembled.b())?,
        ))
    }
}

/// Erasure probability of `C_g` when `C₁` erases with probability `μ`:
/// `ε = (1−λ)μ`.
pub fn incomplete_erasure_composition(mu: f64, lambda: f64) -> Result<f64> {
    check_domain("mu", mu, (0.0..=1.0).contains(&mu), "[0, 1]")?;
    check_domain("lambda", lambda, (0.0..=1.0).contains(&lambda), "[0, 1]")?;
    Ok((1.0 - lambda) * mu)
}

/// Whether `Q¹(C_g) = 0`, i.e. `λ ≤ 1 − 1/(2μ)` (equivalently `ε ≥ 1/2`).
pub fn zero_capacity_interval(mu: f64, lambda: f64) -> Result<bool> {
    Ok(incomplete_erasure_composition(mu, lambda)? >= 0.5)
}

/// Inner isometry whose complement `C₁` is an erasure with probability `μ`.
pub fn inner_erasure(mu: f64, d: usize) -> Result<Isometry> {
    Ok(erasure_pair(ErasureParams::new(1.0 - mu, d)?).iso().clone())
}
