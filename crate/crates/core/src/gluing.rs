//! Gluing: building one isometry out of several weighted parts whose
//! inputs and outputs sit in orthogonal blocks of common ambient spaces.
//!
//! Each part `J_j: H_{a_j} → H_{b_j} ⊗ H_{c_j}` is placed into the ambient
//! spaces through injection matrices `V_a, V_b, V_c`, giving
//! `J̃_j = (V_b ⊗ V_c) J_j V_a†`, and the glued isometry is `J = Σ ν_j J̃_j`.

use crate::channels::{make_pair, ChannelPair, Isometry, Pdi, Superoperator};
use crate::error::{Error, Result};
use crate::numkernel::{self, kron, max_abs, max_abs_diff, tol, ComplexMatrix};

/// Where a part lives inside the ambient spaces. Each matrix has
/// orthonormal columns spanning the block.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub input: ComplexMatrix,
    pub out_b: ComplexMatrix,
    pub out_c: ComplexMatrix,
}

impl Embedding {
    /// Part occupies the whole of every ambient space.
    pub fn full(d_a: usize, d_b: usize, d_c: usize) -> Self {
        Self {
            input: numkernel::identity(d_a),
            out_b: numkernel::identity(d_b),
            out_c: numkernel::identity(d_c),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GluedPart {
    pub iso: Isometry,
    /// `ν_j ≥ 0`.
    pub weight: f64,
    pub embedding: Embedding,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GluedSpec {
    pub d_a: usize,
    pub d_b: usize,
    pub d_c: usize,
    pub parts: Vec<GluedPart>,
}

/// Strictly positive probabilities summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockWeights(Vec<f64>);

impl BlockWeights {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Gluing("no weights".into()));
        }
        if let Some(&bad) = p.iter().find(|x| !x.is_finite()) {
            return Err(Error::OutOfDomain {
                name: "p_j",
                value: bad,
                domain: "finite",
            });
        }
        if let Some(&bad) = p.iter().find(|&&x| x <= 0.0) {
            return Err(Error::OutOfDomain {
                name: "p_j",
                value: bad,
                domain: "(0, 1]",
            });
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > tol::SUM {
            return Err(Error::NotNormalized { trace: s });
        }
        Ok(Self(p))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A glued isometry together with the block decompositions it was built on.
#[derive(Debug, Clone)]
pub struct Glued {
    pub pair: ChannelPair,
    pub input: Pdi,
    pub out_b: Pdi,
    pub out_c: Pdi,
}

impl Glued {
    pub fn iso(&self) -> &Isometry {
        self.pair.iso()
    }
}

fn embedded(part: &GluedPart) -> ComplexMatrix {
    let e = &part.embedding;
    kron(&e.out_b, &e.out_c) * part.iso.matrix() * e.input.adjoint()
}

fn check_embedding(spec: &GluedSpec, idx: usize, part: &GluedPart) -> Result<()> {
    let e = &part.embedding;
    let want = [
        ("input", e.input.shape(), (spec.d_a, part.iso.d_a())),
        ("b output", e.out_b.shape(), (spec.d_b, part.iso.d_b())),
        ("c output", e.out_c.shape(), (spec.d_c, part.iso.d_c())),
    ];
    for (what, got, expect) in want {
        if got != expect {
            return Err(Error::DimensionMismatch(format!(
                "part {idx}: {what} embedding is {got:?}, expected {expect:?}"
            )));
        }
    }
    for m in [&e.input, &e.out_b, &e.out_c] {
        if max_abs_diff(&(m.adjoint() * m), &numkernel::identity(m.ncols())) > tol::ISO {
            return Err(Error::Gluing(format!("part {idx}: embedding columns not orthonormal")));
        }
    }
    if !(part.weight >= 0.0 && part.weight.is_finite()) {
        return Err(Error::OutOfDomain {
            name: "nu_j",
            value: part.weight,
            domain: "[0, inf)",
        });
    }
    Ok(())
}

/// `J = Σ ν_j J̃_j`, rejecting specs whose parts overlap (`J̃_i†J̃_j ≠ 0`)
/// or whose weights do not close to an isometry (`Σ ν_j² J̃_j†J̃_j ≠ I`).
pub fn glue(spec: &GluedSpec) -> Result<Isometry> {
    if spec.parts.is_empty() {
        return Err(Error::Gluing("no parts".into()));
    }
    for (i, p) in spec.parts.iter().enumerate() {
        check_embedding(spec, i, p)?;
    }
    let placed: Vec<ComplexMatrix> = spec.parts.iter().map(embedded).collect();
    for i in 0..placed.len() {
        for j in i + 1..placed.len() {
            let overlap = max_abs(&(placed[i].adjoint() * &placed[j]));
            if overlap > tol::ISO {
                return Err(Error::Gluing(format!(
                    "parts {i} and {j} are not orthogonal (max |J_i^dag J_j| = {overlap:e})"
                )));
            }
        }
    }
    let mut j = numkernel::zeros(spec.d_b * spec.d_c, spec.d_a);
    let mut closure = numkernel::zeros(spec.d_a, spec.d_a);
    for (part, m) in spec.parts.iter().zip(&placed) {
        closure += (m.adjoint() * m).scale(part.weight * part.weight);
        j += m.scale(part.weight);
    }
    let residual = max_abs_diff(&closure, &numkernel::identity(spec.d_a));
    if residual > tol::ISO {
        return Err(Error::Gluing(format!(
            "weights do not close to an isometry (residual {residual:e})"
        )));
    }
    Isometry::new(j, spec.d_b, spec.d_c)
}

/// `(B_j, C_j) = (B∘𝒫_j, C∘𝒫_j)` with `𝒫_j(A) = P_j A P_j`.
pub fn subchannel(pair: &ChannelPair, pdi: &Pdi, j: usize) -> Result<(Superoperator, Superoperator)> {
    if pdi.dim() != pair.d_a() {
        return Err(Error::DimensionMismatch(format!(
            "PDI acts on dimension {}, channel input is {}",
            pdi.dim(),
            pair.d_a()
        )));
    }
    let restrict = Superoperator::conjugation(pdi.get(j)?);
    Ok((pair.b().compose(&restrict)?, pair.c().compose(&restrict)?))
}

fn block_injections(sizes: &[usize]) -> (Pdi, Vec<ComplexMatrix>) {
    let pdi = Pdi::blocks(sizes);
    let inj = (0..sizes.len())
        .map(|j| pdi.injection(j).expect("block index in range"))
        .collect();
    (pdi, inj)
}

fn require_nonempty(parts: &[Isometry]) -> Result<()> {
    if parts.is_empty() {
        Err(Error::Gluing("no parts".into()))
    } else {
        Ok(())
    }
}

fn require_common(parts: &[Isometry], what: &str, dim: impl Fn(&Isometry) -> usize) -> Result<usize> {
    let d = dim(&parts[0]);
    if parts.iter().any(|p| dim(p) != d) {
        return Err(Error::DimensionMismatch(format!("parts must share the {what} space")));
    }
    Ok(d)
}

fn require_weights(parts: &[Isometry], w: &BlockWeights) -> Result<()> {
    if w.len() != parts.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} parts",
            w.len(),
            parts.len()
        )));
    }
    Ok(())
}

/// Which ambient spaces are split into per-part blocks.
#[derive(Clone, Copy)]
struct Layout {
    split_a: bool,
    split_b: bool,
    split_c: bool,
}

fn glue_layout(parts: &[Isometry], weights: &[f64], layout: Layout) -> Result<Glued> {
    let sizes = |f: fn(&Isometry) -> usize| parts.iter().map(f).collect::<Vec<_>>();
    let space = |split: bool, what: &str, f: fn(&Isometry) -> usize| -> Result<(Pdi, Vec<ComplexMatrix>)> {
        if split {
            Ok(block_injections(&sizes(f)))
        } else {
            let d = require_common(parts, what, f)?;
            Ok((Pdi::trivial(d), vec![numkernel::identity(d); parts.len()]))
        }
    };
    let (pa, va) = space(layout.split_a, "input", Isometry::d_a)?;
    let (pb, vb) = space(layout.split_b, "b output", Isometry::d_b)?;
    let (pc, vc) = space(layout.split_c, "c output", Isometry::d_c)?;
    let spec = GluedSpec {
        d_a: pa.dim(),
        d_b: pb.dim(),
        d_c: pc.dim(),
        parts: parts
            .iter()
            .enumerate()
            .map(|(j, iso)| GluedPart {
                iso: iso.clone(),
                weight: weights[j],
                embedding: Embedding {
                    input: va[j].clone(),
                    out_b: vb[j].clone(),
                    out_c: vc[j].clone(),
                },
            })
            .collect(),
    };
    Ok(Glued {
        pair: make_pair(glue(&spec)?)?,
        input: pa,
        out_b: pb,
        out_c: pc,
    })
}

/// Parts share `H_a` and `H_b`; complementary outputs go to orthogonal
/// blocks of `H_c`. The direct channel is `B = Σ p_j B_j`.
pub fn glue_convex(parts: &[Isometry], w: &BlockWeights) -> Result<Glued> {
    require_nonempty(parts)?;
    require_weights(parts, w)?;
    let nu: Vec<f64> = w.values().iter().map(|p| p.sqrt()).collect();
    glue_layout(
        parts,
        &nu,
        Layout {
            split_a: false,
            split_b: false,
            split_c: true,
        },
    )
}

/// Parts on orthogonal input blocks share `H_b`, with complementary outputs
/// in orthogonal blocks of `H_c`; `B(A) = Σ_j B_j(P_j A P_j)`.
pub fn glue_input_and_complement(parts: &[Isometry]) -> Result<Glued> {
    require_nonempty(parts)?;
    glue_layout(
        parts,
        &vec![1.0; parts.len()],
        Layout {
            split_a: true,
            split_b: false,
            split_c: true,
        },
    )
}

/// Parts share `H_a`; both outputs go to correlated orthogonal blocks,
/// `B(A) = ⊕ p_j B_j(A)`, `C(A) = ⊕ p_j C_j(A)`.
pub fn glue_block_diagonal(parts: &[Isometry], w: &BlockWeights) -> Result<Glued> {
    require_nonempty(parts)?;
    require_weights(parts, w)?;
    block_diagonal_unchecked_weights(parts, w.values())
}

/// Block-diagonal gluing with probabilities allowed to vanish, used by the
/// erasure constructions at their endpoints.
pub(crate) fn block_diagonal_unchecked_weights(parts: &[Isometry], p: &[f64]) -> Result<Glued> {
    let nu: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
    glue_layout(
        parts,
        &nu,
        Layout {
            split_a: false,
            split_b: true,
            split_c: true,
        },
    )
}

/// Every space split into blocks: `B(A) = ⊕ B_j(P_j A P_j)`.
pub fn glue_direct_sum(parts: &[Isometry]) -> Result<Glued> {
    require_nonempty(parts)?;
    glue_layout(
        parts,
        &vec![1.0; parts.len()],
        Layout {
            split_a: true,
            split_b: true,
            split_c: true,
        },
    )
}

/// `K_{jkl} = (Q_k ⊗ R_l) J P_j`.
pub fn slice(j_matrix: &ComplexMatrix, pdis: (&Pdi, &Pdi, &Pdi), indices: (usize, usize, usize)) -> Result<ComplexMatrix> {
    let (pa, pb, pc) = pdis;
    if j_matrix.shape() != (pb.dim() * pc.dim(), pa.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "J is {:?}, PDIs imply {}x{}",
            j_matrix.shape(),
            pb.dim() * pc.dim(),
            pa.dim()
        )));
    }
    let (j, k, l) = indices;
    Ok(kron(pb.get(k)?, pc.get(l)?) * j_matrix * pa.get(j)?)
}

/// `‖K†K − (Tr(K†K)/Tr P)·P‖_max`: zero iff `K` is proportional to an
/// isometry on the range of `P`.
pub fn proportionality_residual(k: &ComplexMatrix, p: &ComplexMatrix) -> Result<f64> {
    if k.ncols() != p.nrows() || !p.is_square() {
        return Err(Error::DimensionMismatch("slice and projector do not match".into()));
    }
    let kk = k.adjoint() * k;
    let scale = numkernel::trace(&kk).re / numkernel::trace(p).re;
    Ok(max_abs_diff(&kk, &p.scale(scale)))
}
