//! Brute-force reference: the full two-atom, one-cavity-mode evolution in a
//! truncated Fock basis, reduced to the internal density matrix.

mod fock;

pub use fock::{
    build_operators, required_cutoff, squeeze_factored, FockOperators, Propagator, MIN_CUTOFF,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::density::{OverlapCoefficients, TwoQubitDensity, EE, EG, GE, GG};
use crate::error::{Error, Result};
use crate::params::{packet_to_alpha, RunSpec, Scenario};

/// Internal-plus-photon labels reachable in the single-excitation sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    /// Both atoms ground, one photon.
    Gg1 = 0,
    /// Atom 1 excited, no photon.
    Eg0 = 1,
    /// Atom 2 excited, no photon.
    Ge0 = 2,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Gg1, Label::Eg0, Label::Ge0];

    fn internal_index(self) -> usize {
        match self {
            Label::Gg1 => GG,
            Label::Eg0 => EG,
            Label::Ge0 => GE,
        }
    }

    /// `ħω`-units energy of the uncoupled part before and after atom 2 enters.
    fn optical_energy(self, after_second_entry: bool) -> f64 {
        match (self, after_second_entry) {
            (_, true) => 0.5,
            (Label::Ge0, false) => 0.0,
            _ => 1.0,
        }
    }
}

/// Joint state: for each label an `N×N` amplitude matrix, rows indexing the
/// Fock state of motion 1 and columns that of motion 2.
#[derive(Clone, Debug)]
pub struct JointState {
    pub n: usize,
    pub amps: [DMatrix<Complex64>; 3],
}

impl JointState {
    pub fn product(label: Label, m1: &DVector<Complex64>, m2: &DVector<Complex64>) -> Self {
        let n = m1.len();
        let zero = DMatrix::<Complex64>::zeros(n, n);
        let mut amps = [zero.clone(), zero.clone(), zero];
        amps[label as usize] = m1 * m2.transpose();
        Self { n, amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_squared()).sum()
    }

    /// Largest population, over labels and both motions, in the top eighth of
    /// the Fock ladder.
    pub fn tail_weight(&self) -> f64 {
        let start = self.n - self.n / 8;
        let mut rows = 0.0;
        let mut cols = 0.0;
        for a in &self.amps {
            for r in 0..self.n {
                for c in 0..self.n {
                    let w = a[(r, c)].norm_sqr();
                    if r >= start {
                        rows += w;
                    }
                    if c >= start {
                        cols += w;
                    }
                }
            }
        }
        f64::max(rows, cols)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// Atom 1 crosses the cavity; atom 2 has not entered yet.
    Atom1,
    /// Free flight of atom 1 between the two passages.
    FreeFlight,
    /// Atom 2 crosses the cavity; atom 1 moves freely.
    Atom2,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub cutoff: usize,
    pub tolerance: f64,
    pub max_cutoff: usize,
    /// Permitted drift of the total norm and weight in the ladder tail.
    pub leak_tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            cutoff: 128,
            tolerance: 1e-6,
            max_cutoff: 512,
            leak_tolerance: 1e-8,
        }
    }
}

/// Stage propagators for one cutoff and one parameter set.
#[derive(Clone, Debug)]
pub struct Engine {
    pub ops: FockOperators,
    coupled: Propagator,
    free: Propagator,
    omega: Option<f64>,
    leak_tolerance: f64,
}

impl Engine {
    /// Builds the propagators. `curvature` false drops the `x̂²` correction
    /// from the coupling, reproducing the plain Jaynes–Cummings model.
    pub fn new(spec: &RunSpec, n: usize, curvature: bool) -> Result<Self> {
        let derived = spec.params.derive()?;
        let ops = build_operators(n, &derived, &spec.params)?;
        let kin = ops.kinetic();
        let eps = spec.params.epsilon;
        // û couples the two labels; its coefficient is ε(k²x²/2 − 1)
        let mut coupling = DMatrix::<f64>::identity(n, n) * -eps;
        if curvature {
            coupling += ops.curvature();
        }
        let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
        h.view_mut((0, 0), (n, n)).copy_from(&kin);
        h.view_mut((n, n), (n, n)).copy_from(&kin);
        h.view_mut((0, n), (n, n)).copy_from(&coupling);
        h.view_mut((n, 0), (n, n)).copy_from(&coupling);
        Ok(Self {
            coupled: Propagator::new(h),
            free: Propagator::new(kin),
            ops,
            omega: spec.params.omega,
            leak_tolerance: 1e-8,
        })
    }

    pub fn with_leak_tolerance(mut self, tol: f64) -> Self {
        self.leak_tolerance = tol;
        self
    }

    pub fn n(&self) -> usize {
        self.ops.n
    }

    pub fn propagate_stage(
        &self,
        state: &JointState,
        stage: Stage,
        duration: f64,
    ) -> Result<JointState> {
        if duration.is_nan() || duration < 0.0 {
            return Err(Error::ParameterDomain {
                field: "duration",
                value: duration,
                reason: "stage durations must be non-negative",
            });
        }
        let n = self.n();
        let [gg1, eg0, ge0] = &state.amps;
        let mut out = match stage {
            Stage::Atom1 => {
                let mut stacked = DMatrix::<Complex64>::zeros(2 * n, n);
                stacked.view_mut((0, 0), (n, n)).copy_from(eg0);
                stacked.view_mut((n, 0), (n, n)).copy_from(gg1);
                let evolved = self.coupled.apply(&stacked, duration);
                JointState {
                    n,
                    amps: [
                        evolved.view((n, 0), (n, n)).into_owned(),
                        evolved.view((0, 0), (n, n)).into_owned(),
                        self.free.apply(ge0, duration),
                    ],
                }
            }
            Stage::FreeFlight => JointState {
                n,
                amps: [
                    self.free.apply(gg1, duration),
                    self.free.apply(eg0, duration),
                    self.free.apply(ge0, duration),
                ],
            },
            Stage::Atom2 => {
                // motion 2 acts on columns: ψ ↦ (U ψᵀ)ᵀ
                let gg1 = self.free.apply(gg1, duration);
                let eg0 = self.free.apply(eg0, duration);
                let ge0 = self.free.apply(ge0, duration);
                let mut stacked = DMatrix::<Complex64>::zeros(2 * n, n);
                stacked.view_mut((0, 0), (n, n)).copy_from(&ge0.transpose());
                stacked.view_mut((n, 0), (n, n)).copy_from(&gg1.transpose());
                let evolved = self.coupled.apply(&stacked, duration);
                JointState {
                    n,
                    amps: [
                        evolved.view((n, 0), (n, n)).transpose(),
                        self.free.apply(&eg0.transpose(), duration).transpose(),
                        evolved.view((0, 0), (n, n)).transpose(),
                    ],
                }
            }
        };
        if let Some(w) = self.omega {
            let after = stage == Stage::Atom2;
            for label in Label::ALL {
                let phase = Complex64::from_polar(1.0, -w * label.optical_energy(after) * duration);
                out.amps[label as usize] *= phase;
            }
        }
        self.check_leakage(state, &out)?;
        Ok(out)
    }

    fn check_leakage(&self, before: &JointState, after: &JointState) -> Result<()> {
        let drift = (after.norm_sqr() - before.norm_sqr()).abs();
        if drift > self.leak_tolerance {
            return Err(Error::NumericalConsistency(format!(
                "norm drift {drift:.3e} at cutoff {}",
                self.n()
            )));
        }
        let tail = after.tail_weight();
        if tail > self.leak_tolerance {
            return Err(Error::CutoffInsufficient {
                cutoff: self.n(),
                detail: format!("ladder tail weight {tail:.3e}"),
            });
        }
        Ok(())
    }
}

/// Traces out both motions.
pub fn reduce_to_internal(state: &JointState) -> Result<TwoQubitDensity> {
    let mut rho = nalgebra::Matrix4::<Complex64>::zeros();
    for a in Label::ALL {
        for b in Label::ALL {
            // the photon number differs between Gg1 and the others
            if (a == Label::Gg1) != (b == Label::Gg1) {
                continue;
            }
            let va = &state.amps[a as usize];
            let vb = &state.amps[b as usize];
            let mut s = Complex64::new(0.0, 0.0);
            for (x, y) in va.iter().zip(vb.iter()) {
                s += x * y.conj();
            }
            rho[(a.internal_index(), b.internal_index())] = s;
        }
    }
    debug_assert!(rho[(EE, EE)].norm() == 0.0);
    TwoQubitDensity::from_matrix(rho)
}

fn check_cutoff(spec: &RunSpec, n: usize) -> Result<()> {
    let d = spec.params.derive()?;
    for packet in [&spec.packet1, &spec.packet2] {
        let alpha = packet_to_alpha(packet, &d, &spec.params);
        let need = required_cutoff(alpha);
        if n < need {
            return Err(Error::CutoffInsufficient {
                cutoff: n,
                detail: format!(
                    "|α| = {:.3} needs at least {need} Fock states",
                    alpha.norm_sqr().sqrt()
                ),
            });
        }
    }
    Ok(())
}

/// Smallest cutoff of the form `start·2^k` meeting the coherent-state bound.
pub fn starting_cutoff(spec: &RunSpec, config: &OracleConfig) -> Result<usize> {
    let d = spec.params.derive()?;
    let mut need = MIN_CUTOFF;
    for packet in [&spec.packet1, &spec.packet2] {
        need = need.max(required_cutoff(packet_to_alpha(packet, &d, &spec.params)));
    }
    let mut n = config.cutoff.max(MIN_CUTOFF);
    while n < need {
        n *= 2;
    }
    if n > config.max_cutoff {
        return Err(Error::CutoffInsufficient {
            cutoff: config.max_cutoff,
            detail: format!("coherent amplitudes need at least {need} Fock states"),
        });
    }
    Ok(n)
}

/// Internal density matrix at the exit of atom 2, computed at cutoff `n`.
pub fn oracle_rho(spec: &RunSpec, n: usize) -> Result<TwoQubitDensity> {
    spec.validate()?;
    check_cutoff(spec, n)?;
    let engine = Engine::new(spec, n, !spec.jc_limit)?;
    let d = engine.ops.derived;
    let m1 = engine
        .ops
        .coherent(packet_to_alpha(&spec.packet1, &d, &spec.params));
    let m2 = engine
        .ops
        .coherent(packet_to_alpha(&spec.packet2, &d, &spec.params));
    let initial = match spec.scenario {
        Scenario::PhotonInCavity => Label::Gg1,
        Scenario::ExcitedAtom => Label::Eg0,
    };
    let mut state = JointState::product(initial, &m1, &m2);
    state = engine.propagate_stage(&state, Stage::Atom1, spec.t1)?;
    state = engine.propagate_stage(&state, Stage::FreeFlight, spec.gap)?;
    state = engine.propagate_stage(&state, Stage::Atom2, spec.t2)?;
    reduce_to_internal(&state)
}

/// The four motional overlaps from single-mode Fock propagation.
///
/// The phases follow [`crate::density::compute_coefficients`].
pub fn oracle_overlaps(spec: &RunSpec, n: usize) -> Result<OverlapCoefficients> {
    spec.validate()?;
    check_cutoff(spec, n)?;
    if spec.jc_limit {
        return Ok(OverlapCoefficients::unity());
    }
    let d = spec.params.derive()?;
    let ops = build_operators(n, &d, &spec.params)?;
    let kin = ops.kinetic();
    let curv = ops.curvature();
    let harmonic = Propagator::new(&kin + &curv);
    let inverted = Propagator::new(&kin - &curv);
    let free = Propagator::new(kin);
    let eps = spec.params.epsilon;

    let c1 = {
        let v = ops.coherent(packet_to_alpha(&spec.packet1, &d, &spec.params));
        let bra = harmonic.apply_vector(&v, spec.t1);
        let ket = inverted.apply_vector(&v, spec.t1);
        Complex64::from_polar(1.0, -2.0 * eps * spec.t1) * bra.dotc(&ket)
    };
    let v = ops.coherent(packet_to_alpha(&spec.packet2, &d, &spec.params));
    let reference = free.apply_vector(&v, spec.t2);
    let plus = harmonic.apply_vector(&v, spec.t2);
    let minus = inverted.apply_vector(&v, spec.t2);
    let c2 = Complex64::from_polar(1.0, -2.0 * eps * spec.t2) * plus.dotc(&minus);
    let c_plus = Complex64::from_polar(1.0, -eps * spec.t2) * plus.dotc(&reference);
    let c_minus = Complex64::from_polar(1.0, eps * spec.t2) * minus.dotc(&reference);
    Ok(OverlapCoefficients {
        c1,
        c2,
        c_plus,
        c_minus,
    })
}

/// Distance between two results computed at different cutoffs.
pub trait CutoffDistance {
    fn distance(&self, other: &Self) -> f64;
}

impl CutoffDistance for TwoQubitDensity {
    fn distance(&self, other: &Self) -> f64 {
        self.max_abs_diff(other)
    }
}

impl CutoffDistance for OverlapCoefficients {
    fn distance(&self, other: &Self) -> f64 {
        self.max_abs_diff(other)
    }
}

impl CutoffDistance for f64 {
    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
}

#[derive(Clone, Debug)]
pub struct Converged<T> {
    pub value: T,
    /// Cutoff whose result is reported; its double agreed within tolerance.
    pub cutoff: usize,
    pub deviation: f64,
}

/// Doubles the cutoff from `start` until two successive results agree.
pub fn converge<T, F>(start: usize, config: &OracleConfig, mut compute: F) -> Result<Converged<T>>
where
    T: CutoffDistance,
    F: FnMut(usize) -> Result<T>,
{
    let mut n = start;
    let mut current = compute(n)?;
    loop {
        let next_n = 2 * n;
        if next_n > config.max_cutoff {
            return Err(Error::CutoffInsufficient {
                cutoff: n,
                detail: format!(
                    "no agreement within {:e} below the {} limit",
                    config.tolerance, config.max_cutoff
                ),
            });
        }
        let next = compute(next_n)?;
        let deviation = current.distance(&next);
        if deviation <= config.tolerance {
            return Ok(Converged {
                value: current,
                cutoff: n,
                deviation,
            });
        }
        n = next_n;
        current = next;
    }
}

/// Converged internal density matrix for a run.
pub fn converged_rho(spec: &RunSpec, config: &OracleConfig) -> Result<Converged<TwoQubitDensity>> {
    let start = starting_cutoff(spec, config)?;
    converge(start, config, |n| oracle_rho(spec, n))
}
