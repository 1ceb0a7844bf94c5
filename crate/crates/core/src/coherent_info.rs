//! Channel coherent information `Q¹(B) = max_ρ Δ(B, ρ)` and
//! `Q¹(C) = −min_ρ Δ(B, ρ)`.
//!
//! The two qubit applications reduce to 1-D scans along a Bloch axis; any
//! other pair goes through a seeded multistart Nelder-Mead over
//! `ρ = MM†/Tr(MM†)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::ChannelPair;
use crate::error::{check_domain, Error, Result};
use crate::numkernel::{self, c, ComplexMatrix};
use crate::optimize::{self, LineOpt};
use crate::qubit_models::{self, bloch_rho_unchecked, AxisEnd, DampingKind};
use crate::random;

/// Smallest Q¹ (bits) reported as positive.
pub const POS_THRESHOLD: f64 = 1e-10;

/// Width to which [`boundary_scan_lambda0`] bisects.
const BISECT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub coarse_grid_points: usize,
    pub refine_tol: f64,
    pub multistart_count: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            coarse_grid_points: 2001,
            refine_tol: 1e-12,
            multistart_count: 32,
            seed: 0x5eed,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_grid_points < 3 || self.multistart_count == 0 {
            return Err(Error::OutOfDomain {
                name: "optimizer counts",
                value: self.coarse_grid_points.min(self.multistart_count) as f64,
                domain: "grid ≥ 3, starts ≥ 1",
            });
        }
        check_domain("refine_tol", self.refine_tol, self.refine_tol > 0.0, "(0, inf)")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    AxisScan1d,
    PlaneScan2d,
    MultistartGeneric,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::AxisScan1d => "axis_scan_1d",
            Method::PlaneScan2d => "plane_scan_2d",
            Method::MultistartGeneric => "multistart_generic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoherentInfoResult {
    pub q1_b: f64,
    pub q1_c: f64,
    pub argmax_state: ComplexMatrix,
    pub argmin_state: ComplexMatrix,
    /// Axis coordinate of the maximizer for the axis scans.
    pub argmax_param: Option<f64>,
    pub argmin_param: Option<f64>,
    pub evaluations: usize,
    pub method: Method,
    pub seed: u64,
}

fn axis_result(
    max: LineOpt,
    min: LineOpt,
    rho_max: ComplexMatrix,
    rho_min: ComplexMatrix,
    cfg: &OptimizerConfig,
) -> CoherentInfoResult {
    CoherentInfoResult {
        // the pure endpoints give Δ = 0 exactly, so both are ≥ 0 up to roundoff
        q1_b: max.value.max(0.0),
        q1_c: (-min.value).max(0.0),
        argmax_state: rho_max,
        argmin_state: rho_min,
        argmax_param: Some(max.arg),
        argmin_param: Some(min.arg),
        evaluations: max.evaluations + min.evaluations,
        method: Method::AxisScan1d,
        seed: cfg.seed,
    }
}

fn unit(name: &'static str, v: f64) -> Result<()> {
    check_domain(name, v, (0.0..=1.0).contains(&v), "[0, 1]")
}

/// Smallest population probed by the end-of-axis scans.
const END_SCAN_FLOOR: f64 = 1e-300;

/// Candidate extremum on the z-axis, carried with its exact state.
struct AxisPoint {
    value: f64,
    z: f64,
    state: ComplexMatrix,
}

/// Log-scale scan of one end of the z-axis using the closed-form bias.
/// Near a pure input the extrema of the amplitude model sit at populations
/// `~exp(−b/δλ)`, far below what `z` itself can resolve.
fn end_scan(p: f64, lambda: f64, end: AxisEnd, sign: f64, cfg: &OptimizerConfig) -> (AxisPoint, usize) {
    let f = |t: f64| sign * qubit_models::amplitude_axis_bias(p, lambda, end, t.exp()).unwrap_or(f64::NAN);
    let r = optimize::maximize_1d(f, END_SCAN_FLOOR.ln(), 0.5f64.ln(), cfg.coarse_grid_points, cfg.refine_tol);
    let s = r.arg.exp();
    let (z, state) = match end {
        AxisEnd::Ground => (2.0 * s - 1.0, numkernel::real_diag(&[s, 1.0 - s])),
        AxisEnd::Excited => (1.0 - 2.0 * s, numkernel::real_diag(&[1.0 - s, s])),
    };
    (
        AxisPoint {
            value: sign * r.value,
            z,
            state,
        },
        r.evaluations,
    )
}

/// `Q¹(B_g)` and `Q¹(C_g)` for the amplitude-damping inner channel.
/// `Δ(B_g, ρ(x,y,z))` depends only on `x²+y²` and `z`, and is monotone in
/// `z` at fixed `x²+z²`, so both extrema lie on the z-axis. The bulk of the
/// axis is scanned in `z`; both ends are rescanned in log-population.
pub fn q1_amplitude_glued(p: f64, lambda: f64, cfg: &OptimizerConfig) -> Result<CoherentInfoResult> {
    unit("p", p)?;
    unit("lambda", lambda)?;
    cfg.validate()?;
    let g = qubit_models::glued_pair(DampingKind::Amplitude, p, lambda)?;
    let pair = g.pair();
    let f = |z: f64| pair.bias_unchecked(&qubit_models::diag_state(z));
    let mut evaluations = 0;
    let mut best = |sign: f64| {
        let bulk = optimize::maximize_1d(|z| sign * f(z), -1.0, 1.0, cfg.coarse_grid_points, cfg.refine_tol);
        evaluations += bulk.evaluations;
        let mut best = AxisPoint {
            value: sign * bulk.value,
            z: bulk.arg,
            state: qubit_models::diag_state(bulk.arg),
        };
        for end in [AxisEnd::Ground, AxisEnd::Excited] {
            let (cand, n) = end_scan(p, lambda, end, sign, cfg);
            evaluations += n;
            if sign * cand.value > sign * best.value {
                best = cand;
            }
        }
        best
    };
    let (max, min) = (best(1.0), best(-1.0));
    Ok(CoherentInfoResult {
        q1_b: max.value.max(0.0),
        q1_c: (-min.value).max(0.0),
        argmax_state: max.state,
        argmin_state: min.state,
        argmax_param: Some(max.z),
        argmin_param: Some(min.z),
        evaluations,
        method: Method::AxisScan1d,
        seed: cfg.seed,
    })
}

/// Dephrasure: the maximum of `Δ` lies on the z-axis and the minimum on
/// the x-axis. `Δ` is even in `z`, so the maximizer is reported with
/// `z ≥ 0`.
pub fn q1_dephrasure(p: f64, lambda: f64, cfg: &OptimizerConfig) -> Result<CoherentInfoResult> {
    check_domain("p", p, (0.0..=0.5).contains(&p), "[0, 1/2]")?;
    unit("lambda", lambda)?;
    cfg.validate()?;
    let g = qubit_models::glued_pair(DampingKind::Dephasing, p, lambda)?;
    let pair = g.pair();
    let fz = |z: f64| pair.bias_unchecked(&qubit_models::diag_state(z));
    let fx = |x: f64| pair.bias_unchecked(&bloch_rho_unchecked(x, 0.0, 0.0));
    let mut max = optimize::maximize_1d(fz, -1.0, 1.0, cfg.coarse_grid_points, cfg.refine_tol);
    max.arg = max.arg.abs();
    let min = optimize::minimize_1d(fx, -1.0, 1.0, cfg.coarse_grid_points, cfg.refine_tol);
    Ok(axis_result(
        max,
        min,
        qubit_models::diag_state(max.arg),
        bloch_rho_unchecked(min.arg, 0.0, 0.0),
        cfg,
    ))
}

/// Dispatches to the axis scan of the given qubit model.
pub fn q1_glued(kind: DampingKind, p: f64, lambda: f64, cfg: &OptimizerConfig) -> Result<CoherentInfoResult> {
    match kind {
        DampingKind::Amplitude => q1_amplitude_glued(p, lambda, cfg),
        DampingKind::Dephasing => q1_dephasing_any_p(p, lambda, cfg),
    }
}

/// Dephasing with `p > 1/2` is unitarily equivalent to `1 − p`.
fn q1_dephasing_any_p(p: f64, lambda: f64, cfg: &OptimizerConfig) -> Result<CoherentInfoResult> {
    unit("p", p)?;
    q1_dephrasure(p.min(1.0 - p), lambda, cfg)
}

/// Points per axis of the plane scan's coarse grid.
const PLANE_GRID: usize = 201;

/// `Q¹` of a qubit-input pair from a scan of the `(x, z)` Bloch disk,
/// polished by Nelder-Mead from the best grid point. Exact for pairs whose
/// bias is invariant under rotations about the z-axis (both qubit models).
pub fn q1_plane_scan(pair: &ChannelPair, cfg: &OptimizerConfig) -> Result<CoherentInfoResult> {
    cfg.validate()?;
    if pair.d_a() != 2 {
        return Err(Error::DimensionMismatch(format!("plane scan needs a qubit input, got {}", pair.d_a())));
    }
    // points outside the disk are pulled back radially onto it
    let at = |v: &[f64]| {
        let r = v[0].hypot(v[1]).max(1.0);
        (v[0] / r, v[1] / r)
    };
    let f = |v: &[f64]| {
        let (x, z) = at(v);
        pair.bias_unchecked(&bloch_rho_unchecked(x, 0.0, z))
    };
    let n = PLANE_GRID;
    let mut grid = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            let (x, z) = (-1.0 + 2.0 * i as f64 / (n - 1) as f64, -1.0 + 2.0 * k as f64 / (n - 1) as f64);
            if x * x + z * z <= 1.0 {
                grid.push(([x, z], f(&[x, z])));
            }
        }
    }
    let mut evaluations = grid.len();
    let mut polish = |sign: f64| {
        let start = grid
            .iter()
            .max_by(|a, b| (sign * a.1).total_cmp(&(sign * b.1)))
            .expect("nonempty grid");
        let r = optimize::nelder_mead(|v| -sign * f(v), &start.0, 2.0 / n as f64, 1e-16, 4000);
        evaluations += r.evaluations;
        let (value, arg) = if -r.value >= sign * start.1 {
            (-sign * r.value, at(&r.arg))
        } else {
            (start.1, (start.0[0], start.0[1]))
        };
        (value, bloch_rho_unchecked(arg.0, 0.0, arg.1))
    };
    let (max, rho_max) = polish(1.0);
    let (min, rho_min) = polish(-1.0);
    Ok(CoherentInfoResult {
        q1_b: max.max(0.0),
        q1_c: (-min).max(0.0),
        argmax_state: rho_max,
        argmin_state: rho_min,
        argmax_param: None,
        argmin_param: None,
        evaluations,
        method: Method::PlaneScan2d,
        seed: cfg.seed,
    })
}

/// Largest input dimension accepted by [`q1_generic`].
pub const GENERIC_MAX_DIM: usize = 8;

fn factor_to_density(v: &[f64], d: usize) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(d, d, |i, j| c(v[2 * (i * d + j)], v[2 * (i * d + j) + 1]));
    let rho = &m * m.adjoint();
    let t = numkernel::trace(&rho).re;
    if t > 0.0 && t.is_finite() {
        rho.unscale(t)
    } else {
        numkernel::identity(d).unscale(d as f64)
    }
}

fn density_to_factor(rho: &ComplexMatrix) -> Vec<f64> {
    // any square root works; the Hermitian one is convenient
    let (vals, vecs) = numkernel::hermitian_eigen(rho).expect("density operator");
    let root = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| c(v.max(0.0).sqrt(), 0.0)),
    ));
    let m = &vecs * root * vecs.adjoint();
    let d = rho.nrows();
    (0..d * d)
        .flat_map(|k| {
            let z = m[(k / d, k % d)];
            [z.re, z.im]
        })
        .collect()
}

struct Extremum {
    value: f64,
    state: ComplexMatrix,
    evaluations: usize,
}

/// Best of: fixed candidates (`I/d`, basis projectors) and one Nelder-Mead
/// run per seeded random start, each polished by a restart.
fn multistart(pair: &ChannelPair, sign: f64, cfg: &OptimizerConfig, stream: u64) -> Extremum {
    let d = pair.d_a();
    let objective = |v: &[f64]| sign * -pair.bias_unchecked(&factor_to_density(v, d));
    let mut best = Extremum {
        value: f64::NEG_INFINITY,
        state: numkernel::identity(d).unscale(d as f64),
        evaluations: 0,
    };
    let mut candidates = vec![numkernel::identity(d).unscale(d as f64)];
    candidates.extend((0..d).map(|i| numkernel::projector(&numkernel::ket(d, i))));
    for rho in candidates {
        let v = sign * pair.bias_unchecked(&rho);
        best.evaluations += 1;
        if v > best.value {
            best.value = v;
            best.state = rho;
        }
    }
    let max_evals = 400 * 2 * d * d;
    let runs: Vec<(f64, Vec<f64>, usize)> = (0..cfg.multistart_count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(stream * 1_000_003 + k as u64);
            let start = density_to_factor(&random::density(d, &mut rng));
            let first = optimize::nelder_mead(objective, &start, 0.25, 1e-15, max_evals);
            let second = optimize::nelder_mead(objective, &first.arg, 0.05, 1e-15, max_evals);
            (-second.value, second.arg, first.evaluations + second.evaluations)
        })
        .collect();
    for (v, arg, n) in runs {
        best.evaluations += n;
        if v > best.value {
            best.value = v;
            best.state = factor_to_density(&arg, d);
        }
    }
    best
}

/// Generic `Q¹` for any pair with input dimension ≤ [`GENERIC_MAX_DIM`].
/// Deterministic given `cfg.seed`; starts run in parallel but are reduced
/// in index order.
pub fn q1_generic(pair: &ChannelPair, cfg: &OptimizerConfig) -> Result<CoherentInfoResult> {
    cfg.validate()?;
    if pair.d_a() > GENERIC_MAX_DIM {
        return Err(Error::TooLarge(format!(
            "generic optimization limited to input dimension {GENERIC_MAX_DIM}, got {}",
            pair.d_a()
        )));
    }
    let max = multistart(pair, 1.0, cfg, 1);
    let min = multistart(pair, -1.0, cfg, 2);
    Ok(CoherentInfoResult {
        q1_b: max.value.max(0.0),
        q1_c: min.value.max(0.0),
        argmax_state: max.state,
        argmin_state: min.state,
        argmax_param: None,
        argmin_param: None,
        evaluations: max.evaluations + min.evaluations,
        method: Method::MultistartGeneric,
        seed: cfg.seed,
    })
}

/// Numerical edge of the region `Q¹(B_g) > POS_THRESHOLD` for the amplitude
/// model, found by bisection on `λ ∈ [0, 1/2]`. Close to `λ₀(p)` the true
/// value is exponentially small, so the detected edge sits slightly below
/// the closed-form boundary.
pub fn boundary_scan_lambda0(p: f64, cfg: &OptimizerConfig) -> Result<f64> {
    check_domain("p", p, (0.0..0.5).contains(&p), "[0, 1/2)")?;
    let positive = |l: f64| -> Result<bool> { Ok(q1_amplitude_glued(p, l, cfg)?.q1_b > POS_THRESHOLD) };
    let (mut lo, mut hi) = (0.0, 0.5);
    if !positive(lo)? {
        return Ok(0.0);
    }
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if positive(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
