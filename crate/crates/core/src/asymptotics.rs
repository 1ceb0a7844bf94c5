//! Small-ε asymptotics: `f(ε) = αε ln ε + βε` and the coefficient sets
//! that make the entropy bias of the two qubit applications take this form
//! near a pure input.
//!
//! All coefficients already carry their `1/ln 2`, so every value is in bits.

use std::f64::consts::LN_2;

use crate::channels::{entropy_bias, ChannelPair};
use crate::error::{check_domain, Error, Result};
use crate::nonadditivity::{ansatz_state, two_copy_pair, AnsatzFamily, AnsatzParam};
use crate::numkernel::ComplexMatrix;
use crate::qubit_models::{self, bloch_rho_unchecked, DampingKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticModel {
    pub alpha: f64,
    pub beta: f64,
}

impl AsymptoticModel {
    pub fn value(&self, eps: f64) -> f64 {
        self.alpha * eps * eps.ln() + self.beta * eps
    }

    /// `(ε_m, f(ε_m))` with `ε_m = exp[−(1+β/α)]` and `f(ε_m) = −αε_m`: a
    /// minimum when `α, β > 0`, a maximum when both are negative.
    pub fn extremum(&self) -> Result<(f64, f64)> {
        extremum(*self)
    }
}

pub fn extremum(model: AsymptoticModel) -> Result<(f64, f64)> {
    let AsymptoticModel { alpha, beta } = model;
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::NonFinite);
    }
    if alpha == 0.0 || beta == 0.0 || alpha.signum() != beta.signum() {
        return Err(Error::NoInteriorExtremum);
    }
    let eps = (-(1.0 + beta / alpha)).exp();
    Ok((eps, -alpha * eps))
}

/// Least-squares fit of `f(ε)/ε = α ln ε + β` to samples `(ε, f(ε))`.
pub fn fit_template(samples: &[(f64, f64)]) -> Result<AsymptoticModel> {
    if samples.len() < 2 {
        return Err(Error::DimensionMismatch("need at least two samples".into()));
    }
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(e, f) in samples {
        if !(e > 0.0) {
            return Err(Error::OutOfDomain {
                name: "eps",
                value: e,
                domain: "(0, inf)",
            });
        }
        let (x, y) = (e.ln(), f / e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let den = n * sxx - sx * sx;
    if den.abs() < 1e-300 {
        return Err(Error::DimensionMismatch("samples share one ε".into()));
    }
    let alpha = (n * sxy - sx * sy) / den;
    Ok(AsymptoticModel {
        alpha,
        beta: (sy - alpha * sx) / n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientSetKind {
    /// Amplitude `Q¹(B_g)` near `λ₀(p)`, `δλ = λ₀ − λ`.
    AdQ1B,
    /// Amplitude `Q¹(C_g)` for small `p`.
    AdQ1C,
    /// Amplitude two-copy `σ(ε)` bias near `λ₀(p)`.
    AdDelta2,
    /// Dephrasure `Q¹(B_g)` near `g(p)`, `δλ = g − λ`.
    DephQ1B,
    /// Dephrasure `Q¹(C_g)` for small `p`.
    DephQ1C,
}

impl CoefficientSetKind {
    pub const ALL: [CoefficientSetKind; 5] = [
        CoefficientSetKind::AdQ1B,
        CoefficientSetKind::AdQ1C,
        CoefficientSetKind::AdDelta2,
        CoefficientSetKind::DephQ1B,
        CoefficientSetKind::DephQ1C,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoefficientSetKind::AdQ1B => "ad_q1B",
            CoefficientSetKind::AdQ1C => "ad_q1C",
            CoefficientSetKind::AdDelta2 => "ad_delta2",
            CoefficientSetKind::DephQ1B => "deph_q1B",
            CoefficientSetKind::DephQ1C => "deph_q1C",
        }
    }

    fn kind(self) -> DampingKind {
        match self {
            CoefficientSetKind::AdQ1B | CoefficientSetKind::AdQ1C | CoefficientSetKind::AdDelta2 => {
                DampingKind::Amplitude
            }
            _ => DampingKind::Dephasing,
        }
    }
}

/// How the small parameter `ε` selects an input state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parametrization {
    /// `ρ(0, 0, 1−ε)`.
    OneMinusZ,
    /// `ρ(0, 0, 2ε−1) = diag(ε, 1−ε)`: `ε` is the `|0⟩` population.
    PopulationZ,
    /// `ρ(2ε−1, 0, 0)`: `ε` is the minority population in the x basis.
    PopulationX,
    /// The two-copy `σ(ε)`.
    Sigma,
}

impl Parametrization {
    pub fn state(self, eps: f64) -> Result<ComplexMatrix> {
        check_domain("eps", eps, (0.0..=1.0).contains(&eps), "[0, 1]")?;
        Ok(match self {
            Parametrization::OneMinusZ => qubit_models::diag_state(1.0 - eps),
            Parametrization::PopulationZ => qubit_models::diag_state(2.0 * eps - 1.0),
            Parametrization::PopulationX => bloch_rho_unchecked(2.0 * eps - 1.0, 0.0, 0.0),
            Parametrization::Sigma => ansatz_state(AnsatzParam::new(AnsatzFamily::SigmaEps, eps)?)?,
        })
    }
}

/// `(α, β)` of one application at one parameter point, with the
/// parametrization under which `Δ ≈ αε ln ε + βε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub which: CoefficientSetKind,
    pub p: f64,
    /// `δλ` for the `Q¹(B_g)`/δ₂ sets, `λ` for the `Q¹(C_g)` sets.
    pub param: f64,
    pub model: AsymptoticModel,
    pub parametrization: Parametrization,
}

impl CoefficientSet {
    /// The `λ` of the generalized erasure pair this set describes.
    pub fn lambda(&self) -> Result<f64> {
        match self.which {
            CoefficientSetKind::AdQ1B | CoefficientSetKind::AdDelta2 => {
                Ok(qubit_models::lambda0(self.p)? - self.param)
            }
            CoefficientSetKind::DephQ1B => Ok(qubit_models::g_curve(self.p)? - self.param),
            CoefficientSetKind::AdQ1C | CoefficientSetKind::DephQ1C => Ok(self.param),
        }
    }

    /// The pair whose bias the template approximates (two-copy for δ₂).
    pub fn pair(&self) -> Result<ChannelPair> {
        let g = qubit_models::glued_pair(self.which.kind(), self.p, self.lambda()?)?;
        match self.which {
            CoefficientSetKind::AdDelta2 => two_copy_pair(g.pair()),
            _ => Ok(g.pair().clone()),
        }
    }

    /// `Δ` at the state selected by `ε`.
    pub fn bias_at(&self, pair: &ChannelPair, eps: f64) -> Result<f64> {
        entropy_bias(pair, &self.parametrization.state(eps)?)
    }
}

fn open_half(name: &'static str, v: f64) -> Result<()> {
    check_domain(name, v, v > 0.0 && v < 0.5, "(0, 1/2)")
}

/// `α = [p(1−λ) + λ − 1/2]/ln 2`, zero on `λ = λ₀(p)`.
pub fn ad_alpha(p: f64, lambda: f64) -> Result<f64> {
    open_half("p", p)?;
    open_half("lambda", lambda)?;
    Ok((p * (1.0 - lambda) + lambda - 0.5) / LN_2)
}

/// Expansion coefficients `(α₁, β₀, β₁)` with `α = α₁δλ`, `β = β₀ + β₁δλ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearCoefficients {
    pub alpha1: f64,
    pub beta0: f64,
    pub beta1: f64,
}

impl LinearCoefficients {
    pub fn at(&self, dl: f64) -> AsymptoticModel {
        AsymptoticModel {
            alpha: self.alpha1 * dl,
            beta: self.beta0 + self.beta1 * dl,
        }
    }

    /// `a = −α₁K`, `K = exp(−1 − β₁/α₁)`.
    pub fn a(&self) -> f64 {
        -self.alpha1 * (-1.0 - self.beta1 / self.alpha1).exp()
    }

    /// `b = β₀/α₁`.
    pub fn b(&self) -> f64 {
        self.beta0 / self.alpha1
    }
}

/// Single-copy `Q¹(B_g)` coefficients of either application.
pub fn q1b_coefficients(kind: DampingKind, p: f64) -> Result<LinearCoefficients> {
    open_half("p", p)?;
    let q = 1.0 - p;
    Ok(match kind {
        DampingKind::Amplitude => {
            let beta0 = (p * p.ln() / q - q.ln()) / (4.0 * LN_2);
            LinearCoefficients {
                alpha1: -q / LN_2,
                beta0,
                beta1: q * (2.0 * beta0 + 1.0 + 1.0 / LN_2),
            }
        }
        DampingKind::Dephasing => {
            let s = 1.0 + (1.0 - 2.0 * p).powi(2);
            let pq = p * q;
            LinearCoefficients {
                alpha1: -s / (2.0 * LN_2),
                beta0: 2.0 * pq * (4.0 * pq).ln() / (s * LN_2),
                beta1: (1.0 + LN_2 - 2.0 * pq * (1.0 - (2.0 * pq).ln())) / LN_2,
            }
        }
    })
}

/// Two-copy `σ(ε)` coefficients `(β̄₀, β̄₁, β̄₂)` of the amplitude model;
/// `ᾱ = 2α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCopyCoefficients {
    pub alpha1: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl TwoCopyCoefficients {
    pub fn at(&self, dl: f64) -> AsymptoticModel {
        AsymptoticModel {
            alpha: 2.0 * self.alpha1 * dl,
            beta: self.beta0 + self.beta1 * dl + self.beta2 * dl * dl,
        }
    }

    /// `ā = −2α₁ exp(−1 − β̄₁/2α₁)`.
    pub fn a(&self) -> f64 {
        -2.0 * self.alpha1 * (-1.0 - self.beta1 / (2.0 * self.alpha1)).exp()
    }

    /// `b̄ = β̄₀/2α₁`.
    pub fn b(&self) -> f64 {
        self.beta0 / (2.0 * self.alpha1)
    }
}

pub fn two_copy_coefficients(p: f64) -> Result<TwoCopyCoefficients> {
    open_half("p", p)?;
    let q = 1.0 - p;
    let (lp, lq, l1p) = (p.ln(), q.ln(), (1.0 + p).ln());
    let beta0 = (-2.0 * LN_2 * p + 4.0 * LN_2 * p * p + p * lp + (1.0 - p * (1.0 + 2.0 * p)) * l1p
        - 2.0 * q * q * lq)
        / (4.0 * LN_2 * q * q);
    let beta1 = (2.0 * (1.0 - 2.0 * p) + 2.0 * p * p * (1.0 + LN_2) + p * lp - q * q * lq - p * (1.0 + p) * l1p)
        / (q * LN_2);
    let beta2 = (p * (4.0 * p).ln() - (1.0 + p) * l1p) / LN_2;
    Ok(TwoCopyCoefficients {
        alpha1: -q / LN_2,
        beta0,
        beta1,
        beta2,
    })
}

/// `Q¹(C_g)` coefficients `α = λ/ln 2`, `β = β₀ + β₁ ln p + β₂ p ln p + β₃ p`.
///
/// `ε` is the minority population (`(1+z)/2` or `(1+x)/2`), for which
/// `β₀ = −α`; the extremum then reproduces the closed forms of
/// [`q1c_asymptote`] exactly.
pub fn q1c_model(kind: DampingKind, p: f64, lambda: f64) -> Result<AsymptoticModel> {
    check_domain("p", p, p > 0.0 && p < 0.5, "(0, 1/2)")?;
    check_domain("lambda", lambda, lambda > 0.0 && lambda <= 0.5, "(0, 1/2]")?;
    let alpha = lambda / LN_2;
    let beta1 = -alpha * (1.0 - lambda) / lambda;
    let beta2 = match kind {
        DampingKind::Amplitude => 0.0,
        DampingKind::Dephasing => -2.0 * beta1,
    };
    let beta3 = beta1;
    let lp = p.ln();
    Ok(AsymptoticModel {
        alpha,
        beta: -alpha + beta1 * lp + beta2 * p * lp + beta3 * p,
    })
}

/// Builds the coefficient set `which` at `(p, param)`; `param` is `δλ` for
/// the `Q¹(B_g)`/δ₂ sets and `λ` for the `Q¹(C_g)` sets.
pub fn coefficient_set(which: CoefficientSetKind, p: f64, param: f64) -> Result<CoefficientSet> {
    let (model, parametrization) = match which {
        CoefficientSetKind::AdQ1B => (
            q1b_coefficients(DampingKind::Amplitude, p)?.at(param),
            Parametrization::OneMinusZ,
        ),
        CoefficientSetKind::DephQ1B => (
            q1b_coefficients(DampingKind::Dephasing, p)?.at(param),
            Parametrization::OneMinusZ,
        ),
        CoefficientSetKind::AdDelta2 => (two_copy_coefficients(p)?.at(param), Parametrization::Sigma),
        CoefficientSetKind::AdQ1C => (
            q1c_model(DampingKind::Amplitude, p, param)?,
            Parametrization::PopulationZ,
        ),
        CoefficientSetKind::DephQ1C => (
            q1c_model(DampingKind::Dephasing, p, param)?,
            Parametrization::PopulationX,
        ),
    };
    Ok(CoefficientSet {
        which,
        p,
        param,
        model,
        parametrization,
    })
}

/// `Q¹(B_g) ≃ a(p) δλ exp[−b(p)/δλ]`.
pub fn q1b_asymptote(kind: DampingKind, p: f64, delta_lambda: f64) -> Result<f64> {
    check_domain("delta_lambda", delta_lambda, delta_lambda > 0.0, "(0, inf)")?;
    let c = q1b_coefficients(kind, p)?;
    Ok(c.a() * delta_lambda * (-c.b() / delta_lambda).exp())
}

/// Small-`p` estimate of `Q¹(C_g)`:
/// amplitude `(λ/ln 2) exp[(p + ln p)(1−λ)/λ]`,
/// dephasing `(λ/ln 2) exp{[p + (1−2p) ln p](1−λ)/λ}`. Zero at `p = 0`.
pub fn q1c_asymptote(kind: DampingKind, p: f64, lambda: f64) -> Result<f64> {
    check_domain("p", p, (0.0..0.5).contains(&p), "[0, 1/2)")?;
    check_domain("lambda", lambda, lambda > 0.0 && lambda <= 0.5, "(0, 1/2]")?;
    if p == 0.0 {
        return Ok(0.0);
    }
    let lp = p.ln();
    let exponent = match kind {
        DampingKind::Amplitude => p + lp,
        DampingKind::Dephasing => p + (1.0 - 2.0 * p) * lp,
    };
    Ok(lambda / LN_2 * (exponent * (1.0 - lambda) / lambda).exp())
}

/// `δ₂ ≃ Q¹(B_g^⊗2)/2 ≃ (ā/2) δλ exp[−b̄/δλ]`.
pub fn delta2_asymptote(p: f64, delta_lambda: f64) -> Result<f64> {
    Ok(two_copy_q1_asymptote(p, delta_lambda)? / 2.0)
}

/// `Q¹(B_g^⊗2) ≃ ā δλ exp[−b̄/δλ]` under the `σ` ansatz.
pub fn two_copy_q1_asymptote(p: f64, delta_lambda: f64) -> Result<f64> {
    check_domain("delta_lambda", delta_lambda, delta_lambda > 0.0, "(0, inf)")?;
    let c = two_copy_coefficients(p)?;
    Ok(c.a() * delta_lambda * (-c.b() / delta_lambda).exp())
}

/// `R = exp[(β/α)(1 − β̄/2β)]`, the two-copy to twice-single-copy ratio.
pub fn two_copy_ratio(p: f64, delta_lambda: f64) -> Result<f64> {
    check_domain("delta_lambda", delta_lambda, delta_lambda > 0.0, "(0, inf)")?;
    let single = q1b_coefficients(DampingKind::Amplitude, p)?.at(delta_lambda);
    let two = two_copy_coefficients(p)?.at(delta_lambda);
    let (a, b) = (single.alpha, single.beta);
    Ok(((b / a) * (1.0 - two.beta / (2.0 * b))).exp())
}

/// `β̄₀/(2β₀)`; the δ₂ asymptote requires it to be below one.
pub fn two_copy_beta_ratio(p: f64) -> Result<f64> {
    let single = q1b_coefficients(DampingKind::Amplitude, p)?;
    Ok(two_copy_coefficients(p)?.beta0 / (2.0 * single.beta0))
}

pub fn two_copy_condition(p: f64) -> Result<bool> {
    Ok(two_copy_beta_ratio(p)? < 1.0)
}
