//! Seeded invariant suites. Each check reports the worst residual over its
//! random instances next to the tolerance it must stay under.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::{self, CoefficientSetKind};
use crate::channels::{
    build_concatenation_degrader, concatenate, entropy_bias, make_pair, pdi_residual, verify_degrading, Antidegradable,
    ChannelPair, Direction, Isometry,
};
use crate::coherent_info::{self, OptimizerConfig};
use crate::erasure::{self, ErasureParams};
use crate::error::Result;
use crate::gluing::{self, BlockWeights, Glued};
use crate::nonadditivity::{self, two_copy_pair};
use crate::numkernel::{self, kron, max_abs, max_abs_diff, partial_trace, DimSplit, Side};
use crate::optimize;
use crate::qubit_models::{self, BlochVector, DampingKind};
use crate::random;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Numkernel,
    Channels,
    Gluing,
    Erasure,
    QubitModels,
    CoherentInfo,
    Nonadditivity,
    Asymptotics,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Numkernel,
        Suite::Channels,
        Suite::Gluing,
        Suite::Erasure,
        Suite::QubitModels,
        Suite::CoherentInfo,
        Suite::Nonadditivity,
        Suite::Asymptotics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Numkernel => "numkernel",
            Suite::Channels => "channels",
            Suite::Gluing => "gluing",
            Suite::Erasure => "erasure",
            Suite::QubitModels => "qubit_models",
            Suite::CoherentInfo => "coherent_info",
            Suite::Nonadditivity => "nonadditivity",
            Suite::Asymptotics => "asymptotics",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

/// Runs one suite with `instances` random draws per check.
pub fn run(suite: Suite, instances: usize, seed: u64) -> Result<Vec<Check>> {
    let mut r = Runner {
        suite,
        rng: ChaCha8Rng::seed_from_u64(seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)),
        n: instances.max(1),
        checks: Vec::new(),
    };
    match suite {
        Suite::Numkernel => numkernel_suite(&mut r),
        Suite::Channels => channels_suite(&mut r)?,
        Suite::Gluing => gluing_suite(&mut r)?,
        Suite::Erasure => erasure_suite(&mut r)?,
        Suite::QubitModels => qubit_suite(&mut r)?,
        Suite::CoherentInfo => coherent_info_suite(&mut r, seed)?,
        Suite::Nonadditivity => nonadditivity_suite(&mut r, seed)?,
        Suite::Asymptotics => asymptotics_suite(&mut r)?,
    }
    Ok(r.checks)
}

pub fn run_all(instances: usize, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for suite in Suite::ALL {
        out.extend(run(suite, instances, seed)?);
    }
    Ok(out)
}

struct Runner {
    suite: Suite,
    rng: ChaCha8Rng,
    n: usize,
    checks: Vec<Check>,
}

impl Runner {
    fn push(&mut self, name: &'static str, residual: f64, tolerance: f64) {
        self.checks.push(Check {
            suite: self.suite,
            name,
            residual,
            tolerance,
        });
    }

    /// Worst of `f` over the instances; any error or NaN poisons the check.
    fn worst<F>(&mut self, name: &'static str, tolerance: f64, mut f: F)
    where
        F: FnMut(&mut ChaCha8Rng) -> Result<f64>,
    {
        let mut worst: f64 = 0.0;
        for _ in 0..self.n {
            match f(&mut self.rng) {
                Ok(v) if !v.is_nan() => worst = worst.max(v),
                _ => {
                    worst = f64::INFINITY;
                    break;
                }
            }
        }
        self.push(name, worst, tolerance);
    }
}

fn numkernel_suite(r: &mut Runner) {
    r.worst("kron mixed product", 1e-12, |g| {
        let (a, c) = (random::complex_matrix(2, 2, g), random::complex_matrix(2, 2, g));
        let (b, d) = (random::complex_matrix(3, 3, g), random::complex_matrix(3, 3, g));
        let lhs = kron(&a, &b) * kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        Ok(max_abs_diff(&lhs, &rhs) / max_abs(&rhs).max(1.0))
    });
    r.worst("kron associativity", 1e-12, |g| {
        let (a, b, c) = (
            random::complex_matrix(2, 2, g),
            random::complex_matrix(3, 3, g),
            random::complex_matrix(2, 2, g),
        );
        let lhs = kron(&kron(&a, &b), &c);
        Ok(max_abs_diff(&lhs, &kron(&a, &kron(&b, &c))) / max_abs(&lhs).max(1.0))
    });
    r.worst("partial trace under swap", 1e-12, |g| {
        let split = DimSplit::new(2, 3);
        let m = random::complex_matrix(6, 6, g);
        let swapped = numkernel::swap_factors(&m, split);
        let lhs = partial_trace(&swapped, DimSplit::new(3, 2), Side::Left)?;
        Ok(max_abs_diff(&lhs, &partial_trace(&m, split, Side::Right)?))
    });
    r.worst("entropy concavity", 1e-12, |g| {
        let (a, b) = (random::density(2, g), random::density(2, g));
        let mix = (&a + &b).scale(0.5);
        let (sa, sb, sm) = (
            numkernel::von_neumann_entropy(&a)?,
            numkernel::von_neumann_entropy(&b)?,
            numkernel::von_neumann_entropy(&mix)?,
        );
        Ok((0.5 * (sa + sb) - sm).max(0.0))
    });
    r.worst("spectrum unitary invariance", 1e-10, |g| {
        let m = random::hermitian(4, g);
        let u = random::unitary(4, g);
        let s0 = numkernel::hermitian_spectrum(&m)?;
        let s1 = numkernel::hermitian_spectrum(&(&u * &m * u.adjoint()))?;
        Ok(s0.values().iter().zip(s1.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    });
}

fn random_dims(g: &mut ChaCha8Rng) -> (usize, usize, usize) {
    let d_a: usize = g.random_range(1..=3);
    let d_b: usize = g.random_range(1..=3);
    let d_c = g.random_range(d_a.div_ceil(d_b)..=3);
    (d_a, d_b, d_c)
}

fn random_pair(g: &mut ChaCha8Rng) -> Result<ChannelPair> {
    let (a, b, c) = random_dims(g);
    make_pair(random::isometry(a, b, c, g))
}

fn channels_suite(r: &mut Runner) -> Result<()> {
    r.worst("isometry closure", 1e-10, |g| {
        let (a, b, c) = random_dims(g);
        Ok(random::isometry(a, b, c, g).residual())
    });
    r.worst("pure input has zero bias", 1e-10, |g| {
        let pair = random_pair(g)?;
        let rho = random::pure(pair.d_a(), g);
        Ok(entropy_bias(&pair, &rho)?.abs())
    });
    r.worst("complement swap negates bias", 1e-10, |g| {
        let pair = random_pair(g)?;
        let rho = random::density(pair.d_a(), g);
        Ok((entropy_bias(&pair, &rho)? + entropy_bias(&pair.swapped(), &rho)?).abs())
    });
    r.worst("pdi axioms", 1e-10, |g| {
        let d = g.random_range(2..=5);
        let u = random::unitary(d, g);
        let cut = g.random_range(1..d);
        let proj = |cols: std::ops::Range<usize>| {
            let v = u.columns(cols.start, cols.len()).into_owned();
            &v * v.adjoint()
        };
        pdi_residual(&[proj(0..cut), proj(cut..d)], d)
    });
    r.worst("concatenation partial traces", 1e-10, |g| {
        let first = random_pair(g)?;
        let (b, c) = (g.random_range(1..=3), g.random_range(1..=2));
        let c = c.max(first.iso().d_b().div_ceil(b));
        let second = make_pair(random::isometry(first.iso().d_b(), b, c, g))?;
        let both = concatenate(&first, &second)?;
        let rho = random::density(first.d_a(), g);
        let out = both.c().apply(&rho)?;
        let split = DimSplit::new(first.iso().d_c(), second.iso().d_c());
        let via_second = second.c().apply(&first.b().apply(&rho)?)?;
        Ok(max_abs_diff(&partial_trace(&out, split, Side::Left)?, &via_second)
            .max(max_abs_diff(&partial_trace(&out, split, Side::Right)?, &first.c().apply(&rho)?)))
    });
    r.worst("antidegradable first stage degrader", 1e-9, |g| {
        let p = g.random_range(0.5..0.95);
        let first = make_pair(qubit_models::amplitude_damping_iso(p)?)?;
        let (b, c) = (g.random_range(1..=3), g.random_range(1..=2));
        let second = make_pair(random::isometry(2, b, c.max(2usize.div_ceil(b)), g))?;
        let d = build_concatenation_degrader(
            &qubit_models::amplitude_antidegrader(p)?,
            Antidegradable::First,
            (&first, &second),
        )?;
        verify_degrading(&concatenate(&first, &second)?, &d, Direction::CToB)
    });
    r.worst("antidegradable second stage degrader", 1e-9, |g| {
        let p = g.random_range(0.5..0.95);
        let (a, c) = (g.random_range(1..=3), g.random_range(1..=3));
        let first = make_pair(random::isometry(a, 2, c.max(a.div_ceil(2)), g))?;
        let second = make_pair(qubit_models::amplitude_damping_iso(p)?)?;
        let d = build_concatenation_degrader(
            &qubit_models::amplitude_antidegrader(p)?,
            Antidegradable::Second,
            (&first, &second),
        )?;
        verify_degrading(&concatenate(&first, &second)?, &d, Direction::CToB)
    });
    Ok(())
}

fn random_weights(g: &mut ChaCha8Rng, n: usize) -> Result<BlockWeights> {
    let raw: Vec<f64> = (0..n).map(|_| g.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    BlockWeights::new(raw.iter().map(|x| x / total).collect())
}

fn random_parts(g: &mut ChaCha8Rng, n: usize, d_a: usize) -> Vec<Isometry> {
    (0..n)
        .map(|_| {
            let b = g.random_range(1..=3);
            let c = g.random_range(d_a.div_ceil(b)..=3);
            random::isometry(d_a, b, c, g)
        })
        .collect()
}

fn block_diagonal(g: &mut ChaCha8Rng) -> Result<(Glued, Vec<ChannelPair>, BlockWeights)> {
    let n = g.random_range(2..=3);
    let d_a = g.random_range(1..=3);
    let parts = random_parts(g, n, d_a);
    let w = random_weights(g, n)?;
    let glued = gluing::glue_block_diagonal(&parts, &w)?;
    let pairs = parts.into_iter().map(make_pair).collect::<Result<_>>()?;
    Ok((glued, pairs, w))
}

fn gluing_suite(r: &mut Runner) -> Result<()> {
    r.worst("glued isometry closure", 1e-10, |g| {
        let d_a = g.random_range(1..=3);
        let n = g.random_range(2..=3);
        let w = random_weights(g, n)?;
        let common_b = g.random_range(1..=2);
        let same_b: Vec<_> = (0..n).map(|_| random::isometry(d_a, common_b, 3, g)).collect();
        let residuals = [
            gluing::glue_convex(&same_b, &w)?.iso().residual(),
            gluing::glue_input_and_complement(&same_b)?.iso().residual(),
            gluing::glue_block_diagonal(&random_parts(g, n, d_a), &w)?.iso().residual(),
            gluing::glue_direct_sum(&random_parts(g, n, d_a))?.iso().residual(),
        ];
        Ok(residuals.into_iter().fold(0.0, f64::max))
    });
    r.worst("convex combination", 1e-10, |g| {
        let (d_a, d_b, n) = (g.random_range(1..=3), g.random_range(1..=3), g.random_range(2..=3));
        let parts: Vec<_> = (0..n).map(|_| random::isometry(d_a, d_b, d_a.div_ceil(d_b).max(2), g)).collect();
        let w = random_weights(g, n)?;
        let glued = gluing::glue_convex(&parts, &w)?;
        let rho = random::density(d_a, g);
        let mut expect = numkernel::zeros(d_b, d_b);
        for (iso, &p) in parts.iter().zip(w.values()) {
            expect += make_pair(iso.clone())?.b().apply(&rho)?.scale(p);
        }
        Ok(max_abs_diff(&glued.pair.b().apply(&rho)?, &expect))
    });
    r.worst("block diagonal direct sum", 1e-10, |g| {
        let (glued, pairs, w) = block_diagonal(g)?;
        let rho = random::density(glued.pair.d_a(), g);
        let (b, c) = (glued.pair.b().apply(&rho)?, glued.pair.c().apply(&rho)?);
        let (mut eb, mut ec) = (numkernel::zeros(b.nrows(), b.nrows()), numkernel::zeros(c.nrows(), c.nrows()));
        for (j, (pair, &p)) in pairs.iter().zip(w.values()).enumerate() {
            let (vb, vc) = (glued.out_b.injection(j)?, glued.out_c.injection(j)?);
            eb += &vb * pair.b().apply(&rho)?.scale(p) * vb.adjoint();
            ec += &vc * pair.c().apply(&rho)?.scale(p) * vc.adjoint();
        }
        Ok(max_abs_diff(&b, &eb).max(max_abs_diff(&c, &ec)))
    });
    r.worst("block correlation", 1e-12, |g| {
        let (glued, _, _) = block_diagonal(g)?;
        let rho = random::density(glued.pair.d_a(), g);
        let (b, c) = (glued.pair.b().apply(&rho)?, glued.pair.c().apply(&rho)?);
        let mut worst: f64 = 0.0;
        for j in 0..glued.out_b.len() {
            for k in (0..glued.out_b.len()).filter(|&k| k != j) {
                worst = worst.max(max_abs(&(glued.out_b.get(j)? * &b * glued.out_b.get(k)?)));
                worst = worst.max(max_abs(&(glued.out_c.get(j)? * &c * glued.out_c.get(k)?)));
            }
        }
        Ok(worst)
    });
    r.worst("block diagonal entropy decomposition", 1e-10, |g| {
        let (glued, pairs, w) = block_diagonal(g)?;
        let rho = random::density(glued.pair.d_a(), g);
        let whole = numkernel::von_neumann_entropy(&glued.pair.b().apply(&rho)?)?;
        let mut parts = numkernel::shannon_entropy(w.values())?;
        for (pair, &p) in pairs.iter().zip(w.values()) {
            parts += p * numkernel::von_neumann_entropy(&pair.b().apply(&rho)?)?;
        }
        Ok((whole - parts).abs())
    });
    r.worst("block diagonal bias decomposition", 1e-10, |g| {
        let (glued, pairs, w) = block_diagonal(g)?;
        let rho = random::density(glued.pair.d_a(), g);
        let mut parts = 0.0;
        for (pair, &p) in pairs.iter().zip(w.values()) {
            parts += p * entropy_bias(pair, &rho)?;
        }
        Ok((entropy_bias(&glued.pair, &rho)? - parts).abs())
    });
    r.worst("slices reconstruct isometry", 1e-14, |g| {
        let (glued, _, _) = block_diagonal(g)?;
        let j = glued.iso().matrix();
        let pdis = (&glued.input, &glued.out_b, &glued.out_c);
        let mut total = numkernel::zeros(j.nrows(), j.ncols());
        for k in 0..glued.out_b.len() {
            for l in 0..glued.out_c.len() {
                total += gluing::slice(j, pdis, (0, k, l))?;
            }
        }
        Ok(max_abs_diff(&total, j))
    });
    Ok(())
}

fn erasure_suite(r: &mut Runner) -> Result<()> {
    r.worst("erasure degrading map", 1e-10, |g| {
        let (l, d) = (g.random_range(0.0..0.5), g.random_range(2..=4));
        let pair = erasure::erasure_pair(ErasureParams::new(l, d)?);
        verify_degrading(&pair, &erasure::erasure_degrader(l, d)?, Direction::BToC)
    });
    r.worst("generalized erasure structure", 1e-10, |g| {
        let d_a = g.random_range(1..=3);
        let inner = random_parts(g, 1, d_a).remove(0);
        Ok(erasure::generalized_erasure(inner, g.random_range(0.0..=1.0))?.structure_residual())
    });
    r.worst("erasure commutes with inner channel", 1e-10, |g| {
        let (d_a, d_b) = (g.random_range(2..=3), g.random_range(2..=3));
        let inner = random::isometry(d_a, d_b, 2, g);
        let (after, before) = erasure::generalized_erasure(inner, g.random_range(0.0..=1.0))?.reversal_residuals()?;
        Ok(after.max(before))
    });
    r.worst("incomplete erasure composition", 1e-10, |g| {
        let (mu, l, d) = (g.random_range(0.0..=1.0), g.random_range(0.0..=1.0), g.random_range(2..=3));
        let ge = erasure::generalized_erasure(erasure::inner_erasure(mu, d)?, l)?;
        let eps = erasure::incomplete_erasure_composition(mu, l)?;
        let rho = random::density(d, g);
        let expect = (1.0 - 2.0 * eps) * numkernel::von_neumann_entropy(&rho)?;
        Ok((entropy_bias(&ge.pair().swapped(), &rho)? - expect).abs())
    });
    Ok(())
}

fn qubit_suite(r: &mut Runner) -> Result<()> {
    let rand_bloch = |g: &mut ChaCha8Rng| loop {
        let (x, y, z) = (g.random_range(-1.0..1.0), g.random_range(-1.0..1.0), g.random_range(-1.0..1.0));
        if let Ok(b) = BlochVector::new(x, y, z) {
            return b;
        }
    };
    r.worst("amplitude rotational symmetry", 1e-10, |g| {
        let (p, l) = (g.random_range(0.0..=1.0), g.random_range(0.0..=1.0));
        let pair = qubit_models::glued_pair(DampingKind::Amplitude, p, l)?;
        let b = rand_bloch(g);
        let flat = BlochVector::new(b.x.hypot(b.y), 0.0, b.z)?;
        Ok((entropy_bias(pair.pair(), &b.rho())? - entropy_bias(pair.pair(), &flat.rho())?).abs())
    });
    r.worst("dephrasure reflection symmetry", 1e-10, |g| {
        let (p, l) = (g.random_range(0.0..=1.0), g.random_range(0.0..=1.0));
        let pair = qubit_models::glued_pair(DampingKind::Dephasing, p, l)?;
        let b = rand_bloch(g);
        let mirror = BlochVector::new(b.x, b.y, -b.z)?;
        Ok((entropy_bias(pair.pair(), &b.rho())? - entropy_bias(pair.pair(), &mirror.rho())?).abs())
    });
    r.worst("amplitude antidegrading map", 1e-10, |g| {
        let p = g.random_range(0.5..=1.0);
        let pair = make_pair(qubit_models::amplitude_damping_iso(p)?)?;
        verify_degrading(&pair, &qubit_models::amplitude_antidegrader(p)?, Direction::CToB)
    });
    let mut violations = 0usize;
    for i in 0..200 {
        let (p0, p1) = (i as f64 / 400.0, (i + 1) as f64 / 400.0);
        let pairs = [
            (qubit_models::lambda0(p0)?, qubit_models::lambda0(p1)?),
            (qubit_models::g_curve(p0)?, qubit_models::g_curve(p1)?),
        ];
        violations += pairs.iter().filter(|(a, b)| b >= a).count();
        if i > 0 && i < 199 && qubit_models::j_curve(p1)? >= qubit_models::j_curve(p0)? {
            violations += 1;
        }
    }
    r.push("boundary curves strictly decreasing", violations as f64, 0.0);
    Ok(())
}

fn coherent_info_suite(r: &mut Runner, seed: u64) -> Result<()> {
    let cfg = OptimizerConfig {
        seed,
        ..OptimizerConfig::default()
    };
    let points = [(DampingKind::Amplitude, 0.2, 0.1), (DampingKind::Dephasing, 0.25, 0.1), (DampingKind::Amplitude, 0.1, 0.3)];
    let results: Vec<_> = points
        .iter()
        .map(|&(k, p, l)| Ok((qubit_models::glued_pair(k, p, l)?, coherent_info::q1_glued(k, p, l, &cfg)?)))
        .collect::<Result<_>>()?;
    let n = r.n * 10;
    let mut worst: f64 = 0.0;
    for (pair, res) in &results {
        for _ in 0..n {
            let rho = random::density(2, &mut r.rng);
            let d = entropy_bias(pair.pair(), &rho)?;
            worst = worst.max(d - res.q1_b).max(-d - res.q1_c);
        }
    }
    r.push("no random state beats the optimum", worst, 1e-9);

    let mut worst: f64 = 0.0;
    for d in [2, 3] {
        for i in 0..=10 {
            let l = i as f64 / 10.0;
            let params = ErasureParams::new(l, d)?;
            let got = coherent_info::q1_generic(&erasure::erasure_pair(params), &cfg)?;
            let (qb, qc) = erasure::erasure_q1(params);
            worst = worst.max((got.q1_b - qb).abs()).max((got.q1_c - qc).abs());
        }
    }
    r.push("erasure closed form", worst, 1e-6);

    let mut worst: f64 = 0.0;
    for &(k, p, l) in &points {
        let glued = coherent_info::q1_glued(k, p, l, &cfg)?.q1_b;
        let inner = coherent_info::q1_generic(&make_pair(qubit_models::DampingParams::new(k, p)?.iso())?, &cfg)?.q1_b;
        let erase = erasure::erasure_q1(ErasureParams::new(l, 2)?).0;
        worst = worst.max(glued - inner.min(erase));
    }
    r.push("data processing", worst.max(0.0), 1e-6);

    let mut worst: f64 = 0.0;
    for kind in [DampingKind::Amplitude, DampingKind::Dephasing] {
        for p in [0.1, 0.3] {
            for l in [0.5, 0.7] {
                worst = worst.max(coherent_info::q1_glued(kind, p, l, &cfg)?.q1_b);
            }
        }
    }
    r.push("antidegradable region has zero Q1", worst, 1e-8);

    // the end-of-axis scan resolves values far below POS_THRESHOLD, so strict
    // positivity is the meaningful test here
    let mut nonpositive = 0;
    for p in [0.05, 0.2, 0.45] {
        for l in [0.05, 0.5, 1.0] {
            if coherent_info::q1_amplitude_glued(p, l, &cfg)?.q1_c <= 0.0 {
                nonpositive += 1;
            }
        }
    }
    let worst = nonpositive as f64;
    r.push("Q1 of the incomplete erasure is positive", worst, 0.0);
    Ok(())
}

fn nonadditivity_suite(r: &mut Runner, seed: u64) -> Result<()> {
    let cfg = OptimizerConfig {
        seed,
        ..OptimizerConfig::default()
    };
    r.worst("product input doubles the bias", 1e-10, |g| {
        let kind = if g.random_bool(0.5) { DampingKind::Amplitude } else { DampingKind::Dephasing };
        let single = qubit_models::glued_pair(kind, g.random_range(0.0..=1.0), g.random_range(0.0..=1.0))?;
        let two = two_copy_pair(single.pair())?;
        let rho = random::density(2, g);
        Ok((entropy_bias(&two, &kron(&rho, &rho))? - 2.0 * entropy_bias(single.pair(), &rho)?).abs())
    });
    let mut worst: f64 = 0.0;
    for (p, l) in [(0.25, 0.3), (0.25, 0.32), (0.1, 0.4)] {
        let res = nonadditivity::delta2_amplitude(p, l, &cfg)?;
        worst = worst.max(2.0 * res.q1_single - res.q1_two_copy_lower_bound);
        if res.improving != (res.delta > 0.0) {
            worst = f64::INFINITY;
        }
    }
    r.push("two-copy bound never below product value", worst.max(0.0), 1e-9);
    Ok(())
}

fn asymptotics_suite(r: &mut Runner) -> Result<()> {
    let points = [
        (CoefficientSetKind::AdQ1B, 0.25, 0.01),
        (CoefficientSetKind::DephQ1B, 0.25, 0.01),
        (CoefficientSetKind::AdDelta2, 0.25, 0.01),
        (CoefficientSetKind::AdQ1C, 0.05, 0.3),
        (CoefficientSetKind::DephQ1C, 0.05, 0.3),
    ];
    let mut worst: f64 = 0.0;
    for &(which, p, x) in &points {
        let model = asymptotics::coefficient_set(which, p, x)?.model;
        let (eps_m, f_m) = model.extremum()?;
        let sign = if model.alpha < 0.0 { 1.0 } else { -1.0 };
        let c = eps_m.ln();
        let best = optimize::maximize_1d(|t| sign * model.value(t.exp()), c - 10.0, (c + 10.0).min(0.0), 2001, 1e-12);
        worst = worst.max((sign * best.value - f_m).abs());
    }
    r.push("template extremum", worst, 1e-10);

    let fit_points = [
        (CoefficientSetKind::AdQ1B, 0.25, 0.05),
        (CoefficientSetKind::DephQ1B, 0.25, 0.05),
        (CoefficientSetKind::AdDelta2, 0.25, 0.05),
        (CoefficientSetKind::AdQ1C, 0.05, 0.3),
        (CoefficientSetKind::DephQ1C, 0.05, 0.3),
    ];
    let mut worst: f64 = 0.0;
    for &(which, p, x) in &fit_points {
        let set = asymptotics::coefficient_set(which, p, x)?;
        let pair = set.pair()?;
        let samples = [1e-6, 1e-5, 1e-4]
            .iter()
            .map(|&e| Ok((e, set.bias_at(&pair, e)?)))
            .collect::<Result<Vec<_>>>()?;
        let fit = asymptotics::fit_template(&samples)?;
        worst = worst.max((fit.alpha / set.model.alpha - 1.0).abs());
    }
    r.push("fitted alpha matches closed form", worst, 0.01);

    let mut failures = 0;
    for i in 1..100 {
        if !asymptotics::two_copy_condition(i as f64 / 200.0)? {
            failures += 1;
        }
    }
    r.push("two-copy gain condition on p grid", failures as f64, 0.0);

    let mut worst: f64 = 0.0;
    for kind in [DampingKind::Amplitude, DampingKind::Dephasing] {
        for (p, l) in [(0.01, 0.3), (0.05, 0.5), (0.002, 0.2)] {
            let (_, f) = asymptotics::q1c_model(kind, p, l)?.extremum()?;
            let closed = asymptotics::q1c_asymptote(kind, p, l)?;
            worst = worst.max((-f / closed - 1.0).abs());
        }
    }
    r.push("incomplete erasure template matches closed form", worst, 1e-12);
    Ok(())
}
