//! Physical parameters, packet placement and run specifications.
//!
//! All quantities are SI. The derived oscillator frequency `omega0` is the
//! frequency of the quadratic potential seen by the dressed branches near an
//! antinode, `omega0² = ħ k² ε / m`, and `delta_x0` is the position spread of
//! its ground state. Translational packets are coherent states of that
//! oscillator, so their width is fixed once `(m, ε, λ)` are chosen.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Mass, coupling and mode wavelength shared by both atoms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub mass: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub hbar: f64,
    /// Optical mode frequency. Only ever contributes a global phase inside the
    /// single-excitation sector; kept so the oracle can demonstrate that.
    pub omega: Option<f64>,
}

impl ModelParams {
    pub fn new(mass: f64, epsilon: f64, lambda: f64) -> Result<Self> {
        let p = Self {
            mass,
            epsilon,
            lambda,
            hbar: HBAR,
            omega: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// `m = 1e-26 kg`, `ε = 1e8 s⁻¹`, `λ = 1e-5 m`.
    pub fn reference() -> Self {
        Self {
            mass: 1e-26,
            epsilon: 1e8,
            lambda: 1e-5,
            hbar: HBAR,
            omega: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("mass", self.mass)?;
        positive("epsilon", self.epsilon)?;
        positive("lambda", self.lambda)?;
        positive("hbar", self.hbar)?;
        if let Some(w) = self.omega {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::ParameterDomain {
                    field: "omega",
                    value: w,
                    reason: "must be finite and non-negative",
                });
            }
        }
        Ok(())
    }

    pub fn derive(&self) -> Result<DerivedParams> {
        derive_params(self)
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::ParameterDomain {
            field,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedParams {
    /// Mode wavenumber `2π/λ`.
    pub k: f64,
    pub omega0: f64,
    pub delta_x0: f64,
}

pub fn derive_params(params: &ModelParams) -> Result<DerivedParams> {
    params.validate()?;
    let k = 2.0 * PI / params.lambda;
    let omega0 = (params.hbar * k * k * params.epsilon / params.mass).sqrt();
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(Error::ParameterDomain {
            field: "epsilon",
            value: params.epsilon,
            reason: "derived omega0 is not a positive finite number",
        });
    }
    let delta_x0 = (params.hbar / (2.0 * params.mass * omega0)).sqrt();
    Ok(DerivedParams {
        k,
        omega0,
        delta_x0,
    })
}

/// Center and mean momentum of a translational packet along the cavity axis.
/// `x0` is measured from the antinodal point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PacketSpec {
    pub x0: f64,
    pub p0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ValidityWarning {
    /// The packet reaches far enough from the antinode that `1 − k²x²/2`
    /// no longer tracks `cos kx`.
    QuadraticModeApprox { edge: f64, relative_error: f64 },
    /// `ω₀t ≥ 1`, outside the range of the small-time damping law.
    SmallTimeApprox { omega0_t: f64 },
}

impl PacketSpec {
    pub fn new(x0: f64, p0: f64) -> Self {
        Self { x0, p0 }
    }

    /// Flags packets whose 3σ edge sees a mode function more than 5% away
    /// from its quadratic expansion.
    pub fn validity_warning(&self, derived: &DerivedParams) -> Option<ValidityWarning> {
        let edge = self.x0.abs() + 3.0 * derived.delta_x0;
        let kx = derived.k * edge;
        let exact = kx.cos();
        let quadratic = 1.0 - kx * kx / 2.0;
        let relative_error = if exact.abs() > 0.0 {
            ((quadratic - exact) / exact).abs()
        } else {
            f64::INFINITY
        };
        if kx >= PI / 2.0 || relative_error > 0.05 {
            Some(ValidityWarning::QuadraticModeApprox {
                edge,
                relative_error,
            })
        } else {
            None
        }
    }
}

/// Coherent-state label `α = a + i b` of a packet.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexAmplitude {
    pub a: f64,
    pub b: f64,
}

impl ComplexAmplitude {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.a, self.b)
    }
}

pub fn packet_to_alpha(
    packet: &PacketSpec,
    derived: &DerivedParams,
    params: &ModelParams,
) -> ComplexAmplitude {
    let m = params.mass;
    let hbar = params.hbar;
    let w = derived.omega0;
    ComplexAmplitude {
        a: packet.x0 * (m * w / (2.0 * hbar)).sqrt(),
        b: packet.p0 / (2.0 * m * hbar * w).sqrt(),
    }
}

pub fn alpha_to_packet(
    alpha: &ComplexAmplitude,
    derived: &DerivedParams,
    params: &ModelParams,
) -> PacketSpec {
    let m = params.mass;
    let hbar = params.hbar;
    let w = derived.omega0;
    PacketSpec {
        x0: alpha.a / (m * w / (2.0 * hbar)).sqrt(),
        p0: alpha.b * (2.0 * m * hbar * w).sqrt(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Both atoms in the ground state, one photon in the cavity.
    #[default]
    PhotonInCavity,
    /// First atom excited, cavity empty.
    ExcitedAtom,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Method {
    Closed,
    Oracle,
    #[default]
    Both,
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "photon" | "photon-in-cavity" => Ok(Self::PhotonInCavity),
            "excited-atom" => Ok(Self::ExcitedAtom),
            other => Err(format!(
                "unknown scenario `{other}` (expected photon|excited-atom)"
            )),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PhotonInCavity => "photon",
            Self::ExcitedAtom => "excited-atom",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "closed" => Ok(Self::Closed),
            "oracle" => Ok(Self::Oracle),
            "both" => Ok(Self::Both),
            other => Err(format!(
                "unknown method `{other}` (expected closed|oracle|both)"
            )),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Closed => "closed",
            Self::Oracle => "oracle",
            Self::Both => "both",
        })
    }
}

/// Everything needed to evaluate one point of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunSpec {
    pub params: ModelParams,
    pub packet1: PacketSpec,
    pub packet2: PacketSpec,
    /// Interaction time of the first atom.
    pub t1: f64,
    /// Interaction time of the second atom.
    pub t2: f64,
    /// Free flight between the first atom leaving and the second entering.
    /// The reduced internal state does not depend on it.
    pub gap: f64,
    pub scenario: Scenario,
    pub method: Method,
    pub jc_limit: bool,
}

impl RunSpec {
    pub fn new(params: ModelParams) -> Self {
        Self {
            params,
            packet1: PacketSpec::default(),
            packet2: PacketSpec::default(),
            t1: 0.0,
            t2: 0.0,
            gap: 0.0,
            scenario: Scenario::default(),
            method: Method::default(),
            jc_limit: false,
        }
    }

    /// Reference parameters with both packets at `x0 = λ/10`, `p0 = 0`, and
    /// equal interaction times `ε T = eps_t`.
    pub fn reference(eps_t: f64) -> Self {
        let params = ModelParams::reference();
        let packet = PacketSpec::new(params.lambda / 10.0, 0.0);
        let t = eps_t / params.epsilon;
        Self {
            packet1: packet,
            packet2: packet,
            t1: t,
            t2: t,
            ..Self::new(params)
        }
    }

    pub fn with_times(mut self, t1: f64, t2: f64) -> Self {
        self.t1 = t1;
        self.t2 = t2;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        for (field, value) in [("T1", self.t1), ("T2", self.t2), ("gap", self.gap)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::ParameterDomain {
                    field,
                    value,
                    reason: "must be finite and non-negative",
                });
            }
        }
        for (field, value) in [
            ("x0_1", self.packet1.x0),
            ("p0_1", self.packet1.p0),
            ("x0_2", self.packet2.x0),
            ("p0_2", self.packet2.p0),
        ] {
            if !value.is_finite() {
                return Err(Error::ParameterDomain {
                    field,
                    value,
                    reason: "must be finite",
                });
            }
        }
        Ok(())
    }

    /// Serializes to the `key = value` configuration format.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put("mass", format!("{:e}", self.params.mass));
        put("epsilon", format!("{:e}", self.params.epsilon));
        put("lambda", format!("{:e}", self.params.lambda));
        put("hbar", format!("{:e}", self.params.hbar));
        if let Some(w) = self.params.omega {
            put("omega", format!("{w:e}"));
        }
        put("x0_1", format!("{:e}", self.packet1.x0));
        put("p0_1", format!("{:e}", self.packet1.p0));
        put("x0_2", format!("{:e}", self.packet2.x0));
        put("p0_2", format!("{:e}", self.packet2.p0));
        put("T1", format!("{:e}", self.t1));
        put("T2", format!("{:e}", self.t2));
        put("gap", format!("{:e}", self.gap));
        put("scenario", self.scenario.to_string());
        put("method", self.method.to_string());
        put("jc_limit", self.jc_limit.to_string());
        out
    }

    /// Applies a single `key=value` override on top of an existing spec.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
        let key = key.trim();
        let value = value.trim();
        let key = KEYS
            .iter()
            .copied()
            .find(|k| *k == key)
            .ok_or_else(|| Error::Config(format!("unknown key `{key}`")))?;
        set_key(self, key, value).map_err(Error::Config)?;
        self.validate()
    }
}

const KEYS: &[&str] = &[
    "mass", "epsilon", "lambda", "hbar", "omega", "x0_1", "p0_1", "x0_2", "p0_2", "T1", "T2",
    "gap", "scenario", "method", "jc_limit",
];

const MANDATORY: &[&str] = &["mass", "epsilon", "lambda"];

fn parse_f64(value: &str) -> std::result::Result<f64, String> {
    value
        .parse::<f64>()
        .map_err(|e| format!("`{value}` is not a number: {e}"))
}

fn set_key(spec: &mut RunSpec, key: &str, value: &str) -> std::result::Result<(), String> {
    match key {
        "mass" => spec.params.mass = parse_f64(value)?,
        "epsilon" => spec.params.epsilon = parse_f64(value)?,
        "lambda" => spec.params.lambda = parse_f64(value)?,
        "hbar" => spec.params.hbar = parse_f64(value)?,
        "omega" => spec.params.omega = Some(parse_f64(value)?),
        "x0_1" => spec.packet1.x0 = parse_f64(value)?,
        "p0_1" => spec.packet1.p0 = parse_f64(value)?,
        "x0_2" => spec.packet2.x0 = parse_f64(value)?,
        "p0_2" => spec.packet2.p0 = parse_f64(value)?,
        "T1" => spec.t1 = parse_f64(value)?,
        "T2" => spec.t2 = parse_f64(value)?,
        "gap" => spec.gap = parse_f64(value)?,
        "scenario" => spec.scenario = value.parse()?,
        "method" => spec.method = value.parse()?,
        "jc_limit" => {
            spec.jc_limit = match value {
                "true" => true,
                "false" => false,
                other => return Err(format!("`{other}` is not true|false")),
            }
        }
        _ => unreachable!("key list and setter out of sync"),
    }
    Ok(())
}

/// Parses a `key = value` configuration document.
///
/// `#` starts a comment. Keys may appear at most once. `mass`, `epsilon` and
/// `lambda` are mandatory; everything else has a default.
pub fn parse_config(text: &str) -> Result<RunSpec> {
    let mut seen: HashMap<&'static str, usize> = HashMap::new();
    let mut spec = RunSpec::new(ModelParams {
        mass: f64::NAN,
        epsilon: f64::NAN,
        lambda: f64::NAN,
        hbar: HBAR,
        omega: None,
    });

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `key = value`, found `{content}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let key = KEYS
            .iter()
            .copied()
            .find(|k| *k == key)
            .ok_or_else(|| Error::Parse {
                line,
                message: format!("unknown key `{key}`"),
            })?;
        if let Some(first) = seen.insert(key, line) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key `{key}` (first set on line {first})"),
            });
        }
        set_key(&mut spec, key, value).map_err(|message| Error::Parse { line, message })?;
    }

    for key in MANDATORY {
        if !seen.contains_key(key) {
            return Err(Error::MissingKey(key));
        }
    }
    spec.validate()?;
    Ok(spec)
}
