//! Exact propagation of Gaussian translational packets.
//!
//! A packet is stored as the exponent of its wave function,
//! `ψ(x) = exp(c2·x² + c1·x + log_norm)`, with the global phase living in the
//! imaginary part of `log_norm`. Every Hamiltonian in the model is quadratic
//! in `(x, p)`, so the Gaussian form is preserved exactly.
//!
//! Internally the evolution is solved in oscillator units: with
//! `ℓ² = ħ/(mω₀)`, `s = ω₀t` and `c2 = i·z/(2ℓ²)`, the Schrödinger equation
//! reduces to the Riccati equation `z' = −(z² + κ)` where `κ` is `+1`, `0`,
//! `−1` for the harmonic, free and inverted potentials. Writing `z = u'/u`
//! linearises it to `u'' = −κu`, and
//!
//! ```text
//! u(s)     = C(s) + z0·S(s)
//! c1(s)    = c1(0) / u(s)
//! L(s)     = L(0) − ½·log u(s) + (i/2)·g0²·S(s)/u(s),     g0 = c1(0)·ℓ
//! ```
//!
//! with `(C, S)` = `(cos, sin)`, `(1, s)` or `(cosh, sinh)`. The logarithm is
//! taken on the branch continuous in `s`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{ComplexAmplitude, DerivedParams, ModelParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pure Gaussian wave function `exp(c2·x² + c1·x + log_norm)`, SI units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianPacket {
    pub c2: Complex64,
    pub c1: Complex64,
    pub log_norm: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvolutionKind {
    /// `p²/2m`.
    Free,
    /// `p²/2m + ħεk²x²/2`, the branch paired with `e^{+iεt}`.
    Harmonic,
    /// `p²/2m − ħεk²x²/2`, the squeezing branch paired with `e^{−iεt}`.
    Inverted,
}

impl EvolutionKind {
    fn curvature(self) -> f64 {
        match self {
            Self::Free => 0.0,
            Self::Harmonic => 1.0,
            Self::Inverted => -1.0,
        }
    }
}

impl GaussianPacket {
    pub fn position_variance(&self) -> f64 {
        -1.0 / (4.0 * self.c2.re)
    }

    pub fn mean_position(&self) -> f64 {
        // |ψ|² ∝ exp(2Re(c2) x² + 2Re(c1) x)
        -self.c1.re / (2.0 * self.c2.re)
    }

    pub fn mean_momentum(&self, hbar: f64) -> f64 {
        // ⟨p⟩ = ħ·Im(2c2⟨x⟩ + c1)
        hbar * (2.0 * self.c2.im * self.mean_position() + self.c1.im)
    }

    pub fn norm(&self) -> f64 {
        overlap(self, self).re
    }

    /// Evaluates the wave function at `x`.
    pub fn value(&self, x: f64) -> Complex64 {
        (self.c2 * x * x + self.c1 * x + self.log_norm).exp()
    }
}

/// Coherent state `|α⟩ = exp[(i/ħ)(p0·x − x0·p)]|0⟩` of the `ω₀` oscillator.
pub fn from_coherent(
    alpha: ComplexAmplitude,
    derived: &DerivedParams,
    _params: &ModelParams,
) -> GaussianPacket {
    let dx = derived.delta_x0;
    let (a, b) = (alpha.a, alpha.b);
    GaussianPacket {
        c2: Complex64::new(-1.0 / (4.0 * dx * dx), 0.0),
        c1: Complex64::new(a, b) / dx,
        log_norm: Complex64::new(-0.25 * (2.0 * PI * dx * dx).ln() - a * a, -a * b),
    }
}

/// Applies `exp(−iHt/ħ)` for the chosen quadratic Hamiltonian.
pub fn evolve(
    packet: &GaussianPacket,
    kind: EvolutionKind,
    t: f64,
    params: &ModelParams,
    derived: &DerivedParams,
) -> Result<GaussianPacket> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::ParameterDomain {
            field: "t",
            value: t,
            reason: "evolution time must be finite and non-negative",
        });
    }
    if packet.c2.re.is_nan() || packet.c2.re >= 0.0 {
        return Err(Error::NumericalDomain(format!(
            "packet not normalizable before evolution (Re c2 = {:e})",
            packet.c2.re
        )));
    }
    if t == 0.0 {
        return Ok(*packet);
    }

    let ell2 = params.hbar / (params.mass * derived.omega0);
    let ell = ell2.sqrt();
    let s = derived.omega0 * t;
    let kappa = kind.curvature();

    let z0 = -2.0 * I * packet.c2 * ell2;
    let g0 = packet.c1 * ell;

    let (c, sn) = match kind {
        EvolutionKind::Free => (1.0, s),
        EvolutionKind::Harmonic => (s.cos(), s.sin()),
        EvolutionKind::Inverted => (s.cosh(), s.sinh()),
    };
    let u = c + z0 * sn;
    let du = -kappa * sn + z0 * c;
    let z = du / u;
    let log_u = continuous_log(kind, z0, s, u);

    let evolved = GaussianPacket {
        c2: I * z / (2.0 * ell2),
        c1: packet.c1 / u,
        log_norm: packet.log_norm - 0.5 * log_u + 0.5 * I * g0 * g0 * sn / u,
    };
    if evolved.c2.re.is_nan() || evolved.c2.re >= 0.0 || !evolved.log_norm.is_finite() {
        return Err(Error::NumericalDomain(format!(
            "evolution lost normalizability (Re c2 = {:e})",
            evolved.c2.re
        )));
    }
    Ok(evolved)
}

/// `log u(s)` on the branch continuous from `u(0) = 1`.
///
/// `Im u(s) = Im z0 · S(s)` with `Im z0 > 0`. For the free and inverted
/// kinds `S > 0`, so `u` stays in the upper half plane and the principal
/// branch is continuous. For the harmonic kind `u` crosses the real axis at
/// `s = nπ`, where `u = (−1)ⁿ`, and `u(nπ + r) = (−1)ⁿ u(r)`.
fn continuous_log(kind: EvolutionKind, z0: Complex64, s: f64, u: Complex64) -> Complex64 {
    match kind {
        EvolutionKind::Free | EvolutionKind::Inverted => u.ln(),
        EvolutionKind::Harmonic => {
            let turns = (s / PI).floor();
            let r = s - turns * PI;
            let base = r.cos() + z0 * r.sin();
            let arg = base.arg() + turns * PI;
            Complex64::new(u.norm().ln(), arg)
        }
    }
}

/// `⟨bra|ket⟩` as an exact Gaussian integral.
pub fn overlap(bra: &GaussianPacket, ket: &GaussianPacket) -> Complex64 {
    let a = -(bra.c2.conj() + ket.c2);
    let b = bra.c1.conj() + ket.c1;
    // Re a > 0, so the principal square root is the analytic continuation
    // from real positive `a`.
    let log_value = bra.log_norm.conj()
        + ket.log_norm
        + b * b / (4.0 * a)
        + 0.5 * (Complex64::new(PI, 0.0) / a).ln();
    log_value.exp()
}

/// Closed form of `⟨φ⁺(t)|φ⁻(t)⟩`: the harmonic-branch copy of `|α⟩` as bra,
/// the inverted-branch copy as ket.
///
/// The phase `e^{+i|α|² sin(ω₀t)/cosh(ω₀t)}` enters with a positive sign;
/// the Fock-space computation of the same overlap fixes that sign.
pub fn overlap_pm_closed(alpha: ComplexAmplitude, omega0: f64, t: f64) -> Complex64 {
    let s = omega0 * t;
    let (a, b) = (alpha.a, alpha.b);
    let a2 = alpha.norm_sqr();
    let d = a * a - b * b;
    let ch = s.cosh();
    let th = s.tanh();
    let (s2, c2) = (2.0 * s).sin_cos();

    let phase = s / 2.0 + a2 * s.sin() / ch + 0.5 * th * (d * (1.0 + c2) + 2.0 * a * b * s2);
    let log_mod =
        -0.5 * ch.ln() - a2 * (1.0 - s.cos() / ch) - th * (a * b * (1.0 - c2) + 0.5 * d * s2);
    Complex64::from_polar(log_mod.exp(), phase)
}

/// Small-time form `(1 − (ω₀t)²/2)·exp(−2a²(ω₀t)²)` of `|⟨φ⁺|φ⁻⟩|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DampingEstimate {
    pub value: f64,
    pub warning: Option<crate::params::ValidityWarning>,
}

pub fn damping_approx(alpha: ComplexAmplitude, omega0: f64, t: f64) -> DampingEstimate {
    let s = omega0 * t;
    let value = (1.0 - s * s / 2.0) * (-2.0 * alpha.a * alpha.a * s * s).exp();
    let warning =
        (s >= 1.0).then_some(crate::params::ValidityWarning::SmallTimeApprox { omega0_t: s });
    DampingEstimate { value, warning }
}
