//! Qubit inner channels (amplitude damping, dephasing), Bloch vectors and
//! the closed-form boundary curves of the generalized erasure pairs built
//! on them.

use crate::channels::{make_pair, Isometry, Superoperator};
use crate::erasure::{generalized_erasure, GeneralizedErasure};
use crate::error::{check_domain, Error, Result};
use crate::numkernel::{self, c, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = Self { x, y, z };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite);
        }
        if r.norm_sq() > 1.0 + 1e-12 {
            return Err(Error::InvalidBloch(r.norm_sq().sqrt()));
        }
        Ok(r)
    }

    pub fn on_z(z: f64) -> Result<Self> {
        Self::new(0.0, 0.0, z)
    }

    pub fn on_x(x: f64) -> Result<Self> {
        Self::new(x, 0.0, 0.0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn rho(&self) -> ComplexMatrix {
        bloch_rho_unchecked(self.x, self.y, self.z)
    }
}

/// `ρ = (I + xσ_x + yσ_y + zσ_z)/2`.
pub fn bloch_to_rho(r: BlochVector) -> Result<ComplexMatrix> {
    BlochVector::new(r.x, r.y, r.z).map(|r| r.rho())
}

pub(crate) fn bloch_rho_unchecked(x: f64, y: f64, z: f64) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            c((1.0 + z) / 2.0, 0.0),
            c(x / 2.0, -y / 2.0),
            c(x / 2.0, y / 2.0),
            c((1.0 - z) / 2.0, 0.0),
        ],
    )
}

/// Pauli expectations `(Tr ρσ_x, Tr ρσ_y, Tr ρσ_z)` of a qubit operator.
pub fn rho_to_bloch(rho: &ComplexMatrix) -> Result<BlochVector> {
    if rho.shape() != (2, 2) {
        return Err(Error::DimensionMismatch(format!("not a qubit operator: {:?}", rho.shape())));
    }
    BlochVector::new(
        2.0 * rho[(1, 0)].re,
        2.0 * rho[(1, 0)].im,
        (rho[(0, 0)] - rho[(1, 1)]).re,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DampingKind {
    Amplitude,
    Dephasing,
}

impl DampingKind {
    pub fn name(self) -> &'static str {
        match self {
            DampingKind::Amplitude => "amplitude",
            DampingKind::Dephasing => "dephasing",
        }
    }
}

impl std::str::FromStr for DampingKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "amplitude" | "ad" => Ok(DampingKind::Amplitude),
            "dephasing" | "deph" | "dephrasure" => Ok(DampingKind::Dephasing),
            other => Err(format!("unknown channel kind {other:?} (amplitude | dephasing)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingParams {
    p: f64,
    kind: DampingKind,
}

impl DampingParams {
    pub fn new(kind: DampingKind, p: f64) -> Result<Self> {
        check_domain("p", p, (0.0..=1.0).contains(&p), "[0, 1]")?;
        Ok(Self { p, kind })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn kind(&self) -> DampingKind {
        self.kind
    }

    pub fn iso(&self) -> Isometry {
        match self.kind {
            DampingKind::Amplitude => amplitude_damping_iso(self.p),
            DampingKind::Dephasing => dephasing_iso(self.p),
        }
        .expect("validated p")
    }
}

fn unit_p(p: f64) -> Result<()> {
    check_domain("p", p, (0.0..=1.0).contains(&p), "[0, 1]")
}

/// `|0⟩ ↦ |0⟩|1⟩`, `|1⟩ ↦ √(1−p)|1⟩|1⟩ + √p|0⟩|0⟩`.
pub fn amplitude_damping_iso(p: f64) -> Result<Isometry> {
    unit_p(p)?;
    Isometry::from_images(
        2,
        2,
        &[
            vec![(c(1.0, 0.0), 0, 1)],
            vec![(c((1.0 - p).sqrt(), 0.0), 1, 1), (c(p.sqrt(), 0.0), 0, 0)],
        ],
    )
}

/// `|i⟩ ↦ |i⟩|φ_i⟩` with `|φ_{0,1}⟩ = √(1−p)|+⟩ ± √p|−⟩`; the direct channel
/// is `A ↦ pZAZ + (1−p)A`.
pub fn dephasing_iso(p: f64) -> Result<Isometry> {
    unit_p(p)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (s, t) = ((1.0 - p).sqrt(), p.sqrt());
    let plus = (s + t) * h;
    let minus = (s - t) * h;
    Isometry::from_images(
        2,
        2,
        &[
            vec![(c(plus, 0.0), 0, 0), (c(minus, 0.0), 0, 1)],
            vec![(c(minus, 0.0), 1, 0), (c(plus, 0.0), 1, 1)],
        ],
    )
}

/// `(B_g, C_g)` with the given qubit inner channel.
pub fn glued_pair(kind: DampingKind, p: f64, lambda: f64) -> Result<GeneralizedErasure> {
    generalized_erasure(DampingParams::new(kind, p)?.iso(), lambda)
}

/// `λ₀(p) = (1−2p)/(2−2p)`: Q¹(B_g) of the amplitude case is positive
/// exactly for `λ < λ₀(p)`.
pub fn lambda0(p: f64) -> Result<f64> {
    check_domain("p", p, (0.0..1.0).contains(&p), "[0, 1)")?;
    Ok((1.0 - 2.0 * p) / (2.0 - 2.0 * p))
}

/// `j(p)`: above this λ the dephrasure maximizer leaves `z = 0`.
pub fn j_curve(p: f64) -> Result<f64> {
    check_domain("p", p, p > 0.0 && p < 0.5, "(0, 1/2)")?;
    let t = 2.0 * p * (1.0 - p) * ((1.0 - p) / p).ln();
    Ok((1.0 - 2.0 * p - t) / (2.0 - 4.0 * p - t))
}

/// `g(p) = (1−2p)²/(1+(1−2p)²)`: the dephrasure Q¹(B_g) vanishes above it.
pub fn g_curve(p: f64) -> Result<f64> {
    check_domain("p", p, (0.0..=0.5).contains(&p), "[0, 1/2]")?;
    let s = (1.0 - 2.0 * p).powi(2);
    Ok(s / (1.0 + s))
}

/// Whether `B_g` is known to be antidegradable. For amplitude damping
/// either stage may be antidegradable (`p ≥ 1/2` or `λ ≥ 1/2`); for
/// dephasing only the erasure stage is claimed.
pub fn antidegradable_region(kind: DampingKind, p: f64, lambda: f64) -> Result<bool> {
    unit_p(p)?;
    check_domain("lambda", lambda, (0.0..=1.0).contains(&lambda), "[0, 1]")?;
    Ok(match kind {
        DampingKind::Amplitude => p >= 0.5 || lambda >= 0.5,
        DampingKind::Dephasing => lambda >= 0.5,
    })
}

/// End of the z-axis from which a small population is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisEnd {
    /// `s` is the `|0⟩` population, `ρ = diag(s, 1−s)`.
    Ground,
    /// `s` is the `|1⟩` population, `ρ = diag(1−s, s)`.
    Excited,
}

/// `η(x+δ) − η(x)` with `η(x) = −x ln x`, without cancellation.
fn d_eta(x: f64, delta: f64) -> f64 {
    if x == 0.0 {
        return eta(delta);
    }
    if x + delta <= 0.0 {
        return -eta(x);
    }
    -x * (delta / x).ln_1p() - delta * (x + delta).ln()
}

fn eta(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// `η(1−s)`.
fn eta_one_minus(s: f64) -> f64 {
    if s < 1.0 {
        -(1.0 - s) * (-s).ln_1p()
    } else {
        0.0
    }
}

/// `Δ(B_g, ρ)` on the z-axis of the amplitude model, in closed form:
/// `(1−λ)[h((1−p)v) − h(pv)] − λh(v)` with `v` the `|1⟩` population.
///
/// Every term is assembled from differences that are `O(s)`, so the result
/// keeps its relative accuracy for populations far below machine epsilon,
/// where the generic eigenvalue route returns noise.
pub fn amplitude_axis_bias(p: f64, lambda: f64, end: AxisEnd, s: f64) -> Result<f64> {
    unit_p(p)?;
    check_domain("lambda", lambda, (0.0..=1.0).contains(&lambda), "[0, 1]")?;
    check_domain("s", s, (0.0..=1.0).contains(&s), "[0, 1]")?;
    let q = 1.0 - p;
    let (inner, mixed) = match end {
        AxisEnd::Ground => (
            d_eta(q, -q * s) - d_eta(q, p * s) + d_eta(p, q * s) - d_eta(p, -p * s),
            eta(s) + eta_one_minus(s),
        ),
        AxisEnd::Excited => (
            eta(q * s) - eta(p * s) + eta_one_minus(q * s) - eta_one_minus(p * s),
            eta(s) + eta_one_minus(s),
        ),
    };
    Ok(((1.0 - lambda) * inner - lambda * mixed) / std::f64::consts::LN_2)
}

/// `D` with `D ∘ C = B` for amplitude damping with `p ≥ 1/2`:
/// `D(F) = AD_q(XFX)`, `q = (2p−1)/p`.
pub fn amplitude_antidegrader(p: f64) -> Result<Superoperator> {
    check_domain("p", p, (0.5..=1.0).contains(&p), "[1/2, 1]")?;
    let q = (2.0 * p - 1.0) / p;
    let flip = Superoperator::conjugation(&numkernel::pauli_x());
    make_pair(amplitude_damping_iso(q)?)?.b().compose(&flip)
}

/// `diag((1+z)/2, (1−z)/2)`, the Bloch state on the z-axis.
pub fn diag_state(z: f64) -> ComplexMatrix {
    numkernel::real_diag(&[(1.0 + z) / 2.0, (1.0 - z) / 2.0])
}
