//! Two-copy nonadditivity `δ₂ = Q¹(B^⊗2)/2 − Q¹(B)` from low-parameter
//! input families.
//!
//! Every value here is an ansatz estimate: `max_θ Δ(B^⊗2, ρ(θ))` is a lower
//! bound on `Q¹(B^⊗2)`, so a positive δ is a proof of nonadditivity, while a
//! non-positive one proves nothing.

use crate::channels::{ChannelPair, Isometry};
use crate::coherent_info::{self, OptimizerConfig, POS_THRESHOLD};
use crate::error::{check_domain, Error, Result};
use crate::numkernel::{self, c, ComplexMatrix};
use crate::optimize;
use crate::qubit_models::{self, DampingKind};

/// Largest `d_b` or `d_c` of the single-copy pair accepted by
/// [`two_copy_pair`] (its two-copy factors are the squares).
pub const TWO_COPY_MAX_FACTOR: usize = 6;

/// `J ⊗ J` with outputs regrouped as `(b₁b₂) ⊗ (c₁c₂)`.
pub fn two_copy_pair(single: &ChannelPair) -> Result<ChannelPair> {
    let iso = single.iso();
    let (da, db, dc) = (iso.d_a(), iso.d_b(), iso.d_c());
    if db > TWO_COPY_MAX_FACTOR || dc > TWO_COPY_MAX_FACTOR {
        return Err(Error::TooLarge(format!(
            "two-copy output factors {}x{} exceed {}",
            db * db,
            dc * dc,
            TWO_COPY_MAX_FACTOR * TWO_COPY_MAX_FACTOR
        )));
    }
    let jj = numkernel::kron(iso.matrix(), iso.matrix());
    let mut m = numkernel::zeros(db * db * dc * dc, da * da);
    for b1 in 0..db {
        for c1 in 0..dc {
            for b2 in 0..db {
                for c2 in 0..dc {
                    let from = (b1 * dc + c1) * (db * dc) + b2 * dc + c2;
                    let to = (b1 * db + b2) * (dc * dc) + c1 * dc + c2;
                    m.set_row(to, &jj.row(from));
                }
            }
        }
    }
    Ok(ChannelPair::from_isometry(Isometry::from_parts_unchecked(
        m,
        db * db,
        dc * dc,
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnsatzFamily {
    /// `(1−ε)[00] + ε[φ]`, `|φ⟩ = (|01⟩+|10⟩)/√2`, `ε ∈ [0,1]`.
    SigmaEps,
    /// `ρ_m ⊗ ρ_m`, `ρ_m = (1−z)[0] + z[1]`, `z ∈ [0,1]`.
    TauProduct,
    /// `η[00] + (1−η)[11]`, `η ∈ [0,1]`.
    RepetitionEta,
    /// `{(1+ζ)([00]+[11]) + (1−ζ)([01]+[10])}/4`, `ζ ∈ [−1,1]`.
    ZetaMix,
}

impl AnsatzFamily {
    pub fn domain(self) -> (f64, f64) {
        match self {
            AnsatzFamily::ZetaMix => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AnsatzFamily::SigmaEps => "sigma_eps",
            AnsatzFamily::TauProduct => "tau_product",
            AnsatzFamily::RepetitionEta => "repetition_eta",
            AnsatzFamily::ZetaMix => "zeta_mix",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzParam {
    pub family: AnsatzFamily,
    pub value: f64,
}

impl AnsatzParam {
    pub fn new(family: AnsatzFamily, value: f64) -> Result<Self> {
        let (lo, hi) = family.domain();
        check_domain("ansatz parameter", value, (lo..=hi).contains(&value), family.name())?;
        Ok(Self { family, value })
    }
}

/// The two-qubit input state of an ansatz.
pub fn ansatz_state(a: AnsatzParam) -> Result<ComplexMatrix> {
    let a = AnsatzParam::new(a.family, a.value)?;
    Ok(ansatz_unchecked(a.family, a.value))
}

fn ansatz_unchecked(family: AnsatzFamily, t: f64) -> ComplexMatrix {
    match family {
        AnsatzFamily::SigmaEps => {
            let mut m = numkernel::real_diag(&[1.0 - t, t / 2.0, t / 2.0, 0.0]);
            m[(1, 2)] = c(t / 2.0, 0.0);
            m[(2, 1)] = c(t / 2.0, 0.0);
            m
        }
        AnsatzFamily::TauProduct => {
            let r = numkernel::real_diag(&[1.0 - t, t]);
            numkernel::kron(&r, &r)
        }
        AnsatzFamily::RepetitionEta => numkernel::real_diag(&[t, 0.0, 0.0, 1.0 - t]),
        AnsatzFamily::ZetaMix => {
            let (s, d) = ((1.0 + t) / 4.0, (1.0 - t) / 4.0);
            numkernel::real_diag(&[s, d, d, s])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonAddResult {
    /// `Δ*/2 − Q¹(B)` with `Δ*` the best ansatz value; may be negative.
    pub delta: f64,
    pub best_ansatz: AnsatzParam,
    /// `Δ* = max_θ Δ(B^⊗2, ρ(θ))`.
    pub ansatz_value: f64,
    pub q1_single: f64,
    /// `max(Δ*, 2Q¹(B))`, a valid lower bound on `Q¹(B^⊗2)`.
    pub q1_two_copy_lower_bound: f64,
    /// Whether the ansatz beats product inputs, i.e. `Δ* > 2Q¹(B)`.
    pub improving: bool,
    pub evaluations: usize,
}

/// Maximizes `Δ(B^⊗2, ρ(θ))` over the family's parameter.
pub fn optimize_ansatz(
    two_copy: &ChannelPair,
    family: AnsatzFamily,
    cfg: &OptimizerConfig,
) -> Result<(AnsatzParam, f64, usize)> {
    if two_copy.d_a() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "ansatz states are two-qubit, pair input is {}",
            two_copy.d_a()
        )));
    }
    let (lo, hi) = family.domain();
    let r = optimize::maximize_1d(
        |t| two_copy.bias_unchecked(&ansatz_unchecked(family, t)),
        lo,
        hi,
        cfg.coarse_grid_points,
        cfg.refine_tol,
    );
    Ok((AnsatzParam { family, value: r.arg }, r.value, r.evaluations))
}

fn nonadd(kind: DampingKind, p: f64, lambda: f64, family: AnsatzFamily, cfg: &OptimizerConfig) -> Result<NonAddResult> {
    let single = coherent_info::q1_glued(kind, p, lambda, cfg)?;
    let g = qubit_models::glued_pair(kind, p, lambda)?;
    let two = two_copy_pair(g.pair())?;
    let (best, value, evals) = optimize_ansatz(&two, family, cfg)?;
    let q1 = single.q1_b;
    Ok(NonAddResult {
        delta: value / 2.0 - q1,
        best_ansatz: best,
        ansatz_value: value,
        q1_single: q1,
        q1_two_copy_lower_bound: value.max(2.0 * q1),
        improving: value > 2.0 * q1,
        evaluations: single.evaluations + evals,
    })
}

/// `δ₂` of the amplitude-damping `B_g` under the `σ(ε)` ansatz.
pub fn delta2_amplitude(p: f64, lambda: f64, cfg: &OptimizerConfig) -> Result<NonAddResult> {
    nonadd(DampingKind::Amplitude, p, lambda, AnsatzFamily::SigmaEps, cfg)
}

/// `δ₂*` of the dephrasure `B_g` under the `ρ(ζ)` ansatz.
pub fn delta2_star_dephrasure(p: f64, lambda: f64, cfg: &OptimizerConfig) -> Result<NonAddResult> {
    check_domain("p", p, p > 0.0 && p < 0.5, "(0, 1/2)")?;
    nonadd(DampingKind::Dephasing, p, lambda, AnsatzFamily::ZetaMix, cfg)
}

/// Same point as [`delta2_star_dephrasure`] under the repetition ansatz.
pub fn delta2_repetition_dephrasure(p: f64, lambda: f64, cfg: &OptimizerConfig) -> Result<NonAddResult> {
    check_domain("p", p, p > 0.0 && p < 0.5, "(0, 1/2)")?;
    nonadd(DampingKind::Dephasing, p, lambda, AnsatzFamily::RepetitionEta, cfg)
}

/// Any family on either model.
pub fn delta2_with(
    kind: DampingKind,
    family: AnsatzFamily,
    p: f64,
    lambda: f64,
    cfg: &OptimizerConfig,
) -> Result<NonAddResult> {
    nonadd(kind, p, lambda, family, cfg)
}

/// Unrestricted two-copy search (generic multistart on the 4-dim input)
/// as a cross-check of the ansatz families. Slow; meant for spot points.
pub fn delta2_exhaustive(kind: DampingKind, p: f64, lambda: f64, cfg: &OptimizerConfig) -> Result<f64> {
    let single = coherent_info::q1_glued(kind, p, lambda, cfg)?;
    let g = qubit_models::glued_pair(kind, p, lambda)?;
    let two = two_copy_pair(g.pair())?;
    let best = coherent_info::q1_generic(&two, cfg)?;
    Ok(best.q1_b / 2.0 - single.q1_b)
}

/// Number of `δλ` samples used to locate the window before bisecting.
const LAMBDA1_SCAN: usize = 48;

/// `λ₁(p)`: lower edge of the `λ` window below `λ₀(p)` where the `σ`
/// ansatz gives `δ₂ > POS_THRESHOLD`. Scans `δλ = λ₀ − λ` to find the peak,
/// then bisects on the far side to `1e−6`. Returns `λ₀` when no positive
/// `δ₂` is found.
pub fn boundary_scan_lambda1(p: f64, cfg: &OptimizerConfig) -> Result<f64> {
    check_domain("p", p, p > 0.0 && p < 0.5, "(0, 1/2)")?;
    let l0 = qubit_models::lambda0(p)?;
    let delta = |dl: f64| -> Result<f64> { Ok(delta2_amplitude(p, (l0 - dl).max(0.0), cfg)?.delta) };
    let grid: Vec<f64> = (1..=LAMBDA1_SCAN).map(|k| l0 * k as f64 / LAMBDA1_SCAN as f64).collect();
    let mut vals = Vec::with_capacity(grid.len());
    for &dl in &grid {
        vals.push(delta(dl)?);
    }
    let peak = (0..grid.len())
        .max_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .expect("nonempty grid");
    if vals[peak] <= POS_THRESHOLD {
        return Ok(l0);
    }
    let Some(edge) = (peak + 1..grid.len()).find(|&k| vals[k] <= POS_THRESHOLD) else {
        return Ok(0.0);
    };
    let (mut inside, mut outside) = (grid[edge - 1], grid[edge]);
    while outside - inside > 1e-6 {
        let mid = 0.5 * (inside + outside);
        if delta(mid)? > POS_THRESHOLD {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(l0 - 0.5 * (inside + outside))
}

/// Per-letter lower bound on `Q¹(B_g^⊗n)/n` for the amplitude model from
/// the pair ansatz: `σ` on each of `⌊n/2⌋` pairs and, for odd `n`, the
/// single-copy optimum on the last channel.
pub fn pair_ansatz_bound(n: usize, p: f64, lambda: f64, cfg: &OptimizerConfig) -> Result<f64> {
    if n < 2 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: n as f64,
            domain: "n ≥ 2",
        });
    }
    let r = delta2_amplitude(p, lambda, cfg)?;
    let pair = r.q1_two_copy_lower_bound;
    let pairs = (n / 2) as f64;
    let rest = if n % 2 == 1 { r.q1_single } else { 0.0 };
    Ok((pairs * pair + rest) / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{entropy_bias, make_pair};
    use crate::erasure::{erasure_pair, ErasureParams};
    use crate::numkernel::max_abs_diff;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default()
    }

    #[test]
    fn two_copy_additive_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = qubit_models::glued_pair(DampingKind::Amplitude, 0.2, 0.15).unwrap();
        let two = two_copy_pair(g.pair()).unwrap();
        for _ in 0..10 {
            let rho = random::density(2, &mut rng);
            let prod = numkernel::kron(&rho, &rho);
            let lhs = entropy_bias(&two, &prod).unwrap();
            let rhs = 2.0 * entropy_bias(g.pair(), &rho).unwrap();
            assert!((lhs - rhs).abs() < 1e-10);
            let out = two.b().apply(&random::density(4, &mut rng)).unwrap();
            assert!((numkernel::trace(&out).re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn two_copy_erasure() {
        let er = erasure_pair(ErasureParams::new(0.3, 2).unwrap());
        let two = two_copy_pair(&er).unwrap();
        let mixed = numkernel::identity(4).scale(0.25);
        assert!((entropy_bias(&two, &mixed).unwrap() - 0.8).abs() < 1e-12);
        let big = make_pair(Isometry::perfect(7)).unwrap();
        assert!(matches!(two_copy_pair(&big), Err(Error::TooLarge(_))));
    }

    #[test]
    fn ansatz_examples() {
        let s = ansatz_state(AnsatzParam::new(AnsatzFamily::SigmaEps, 0.0).unwrap()).unwrap();
        assert!(max_abs_diff(&s, &numkernel::real_diag(&[1.0, 0.0, 0.0, 0.0])) == 0.0);
        let r = ansatz_state(AnsatzParam::new(AnsatzFamily::RepetitionEta, 1.0).unwrap()).unwrap();
        assert!(max_abs_diff(&r, &numkernel::real_diag(&[1.0, 0.0, 0.0, 0.0])) == 0.0);
        let z = ansatz_state(AnsatzParam::new(AnsatzFamily::ZetaMix, 1.0).unwrap()).unwrap();
        assert!(max_abs_diff(&z, &numkernel::real_diag(&[0.5, 0.0, 0.0, 0.5])) == 0.0);
        assert!(AnsatzParam::new(AnsatzFamily::SigmaEps, -0.1).is_err());
        for fam in [AnsatzFamily::SigmaEps, AnsatzFamily::TauProduct, AnsatzFamily::RepetitionEta, AnsatzFamily::ZetaMix] {
            let (lo, hi) = fam.domain();
            let rho = ansatz_state(AnsatzParam::new(fam, 0.3 * lo + 0.7 * hi).unwrap()).unwrap();
            numkernel::validate_density(&rho).unwrap();
        }
    }

    #[test]
    fn tau_matches_single_copy() {
        let g = qubit_models::glued_pair(DampingKind::Amplitude, 0.25, 0.25).unwrap();
        let two = two_copy_pair(g.pair()).unwrap();
        let z = 0.37;
        let tau = ansatz_state(AnsatzParam::new(AnsatzFamily::TauProduct, z).unwrap()).unwrap();
        let rho_m = numkernel::real_diag(&[1.0 - z, z]);
        let lhs = entropy_bias(&two, &tau).unwrap();
        assert!((lhs - 2.0 * entropy_bias(g.pair(), &rho_m).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn degradable_has_no_gain() {
        let r = delta2_amplitude(0.25, 0.0, &cfg()).unwrap();
        assert!(r.delta <= 1e-9, "{}", r.delta);
        assert!(r.q1_two_copy_lower_bound >= 2.0 * r.q1_single);
    }

    #[test]
    fn amplitude_window_point() {
        let l0 = qubit_models::lambda0(0.25).unwrap();
        let r = delta2_amplitude(0.25, l0 - 0.02, &cfg()).unwrap();
        assert!(r.delta > 4e-3 && r.improving);
        let outside = delta2_amplitude(0.25, l0 - 0.06, &cfg()).unwrap();
        assert!(outside.delta <= 0.0 && !outside.improving);
    }

    #[test]
    fn pair_bound_ordering() {
        let (p, l) = (0.25, qubit_models::lambda0(0.25).unwrap() - 0.02);
        let two = pair_ansatz_bound(2, p, l, &cfg()).unwrap();
        let four = pair_ansatz_bound(4, p, l, &cfg()).unwrap();
        let three = pair_ansatz_bound(3, p, l, &cfg()).unwrap();
        let single = delta2_amplitude(p, l, &cfg()).unwrap();
        assert_eq!(two, single.q1_two_copy_lower_bound / 2.0);
        assert!((two - four).abs() < 1e-15);
        assert!(single.q1_single < three && three < two);
        assert!(pair_ansatz_bound(1, p, l, &cfg()).is_err());
    }
}
