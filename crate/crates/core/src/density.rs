//! Overlap coefficients and the two-atom reduced density matrix.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{evolve, from_coherent, overlap, EvolutionKind};
use crate::params::{packet_to_alpha, RunSpec, Scenario};

/// Basis index of `|g₁g₂⟩`.
pub const GG: usize = 0;
/// Basis index of `|g₁e₂⟩`.
pub const GE: usize = 1;
/// Basis index of `|e₁g₂⟩`.
pub const EG: usize = 2;
/// Basis index of `|e₁e₂⟩`.
pub const EE: usize = 3;

/// `c1 = c_R⁽¹⁾ + i c_I⁽¹⁾`, `c2 = c_R⁽²⁾ + i c_I⁽²⁾`, and `c±`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapCoefficients {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
}

impl OverlapCoefficients {
    pub fn unity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            c1: one,
            c2: one,
            c_plus: one,
            c_minus: one,
        }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.c1, self.c2, self.c_plus, self.c_minus]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn validate(&self) -> Result<()> {
        for (name, c) in ["c1", "c2", "c_plus", "c_minus"]
            .iter()
            .zip(self.as_array())
        {
            if !c.is_finite() || c.norm() > 1.0 + 1e-12 {
                return Err(Error::NumericalConsistency(format!(
                    "|{name}| = {} exceeds 1",
                    c.norm()
                )));
            }
        }
        Ok(())
    }

    /// Pulls moduli that rounding pushed past one back onto the unit circle.
    fn clamped(self) -> Self {
        let clamp = |c: Complex64| {
            let r = c.norm();
            if r > 1.0 {
                c / r
            } else {
                c
            }
        };
        Self {
            c1: clamp(self.c1),
            c2: clamp(self.c2),
            c_plus: clamp(self.c_plus),
            c_minus: clamp(self.c_minus),
        }
    }
}

/// Which interaction time sets the phase of `c±`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PhaseConvention {
    /// `c± = e^{∓iεT₂}⟨φ₂±|φ₂⟩`, the second atom's own interaction time.
    #[default]
    SecondAtom,
    /// `c± = e^{∓iεT₁}⟨φ₂±|φ₂⟩`, as literally printed. Kept only so the
    /// arbitration run can show it disagrees with the oracle.
    LiteralFirstAtom,
}

pub fn compute_coefficients(spec: &RunSpec) -> Result<OverlapCoefficients> {
    compute_coefficients_with(spec, PhaseConvention::default())
}

pub fn compute_coefficients_with(
    spec: &RunSpec,
    convention: PhaseConvention,
) -> Result<OverlapCoefficients> {
    if spec.scenario != Scenario::PhotonInCavity {
        return Err(Error::UnsupportedScenario("excited-atom"));
    }
    spec.validate()?;
    let params = &spec.params;
    let eps = params.epsilon;
    let phase_t = match convention {
        PhaseConvention::SecondAtom => spec.t2,
        PhaseConvention::LiteralFirstAtom => spec.t1,
    };

    let (o1, o2, o_plus, o_minus) = if spec.jc_limit {
        let one = Complex64::new(1.0, 0.0);
        (one, one, one, one)
    } else {
        let derived = params.derive()?;
        let alpha1 = packet_to_alpha(&spec.packet1, &derived, params);
        let alpha2 = packet_to_alpha(&spec.packet2, &derived, params);

        let start1 = from_coherent(alpha1, &derived, params);
        let plus1 = evolve(&start1, EvolutionKind::Harmonic, spec.t1, params, &derived)?;
        let minus1 = evolve(&start1, EvolutionKind::Inverted, spec.t1, params, &derived)?;

        let start2 = from_coherent(alpha2, &derived, params);
        let plus2 = evolve(&start2, EvolutionKind::Harmonic, spec.t2, params, &derived)?;
        let minus2 = evolve(&start2, EvolutionKind::Inverted, spec.t2, params, &derived)?;
        let free2 = evolve(&start2, EvolutionKind::Free, spec.t2, params, &derived)?;

        (
            overlap(&plus1, &minus1),
            overlap(&plus2, &minus2),
            overlap(&plus2, &free2),
            overlap(&minus2, &free2),
        )
    };

    let c = OverlapCoefficients {
        c1: Complex64::from_polar(1.0, -2.0 * eps * spec.t1) * o1,
        c2: Complex64::from_polar(1.0, -2.0 * eps * spec.t2) * o2,
        c_plus: Complex64::from_polar(1.0, -eps * phase_t) * o_plus,
        c_minus: Complex64::from_polar(1.0, eps * phase_t) * o_minus,
    };
    c.validate()?;
    Ok(c.clamped())
}

/// 4×4 density matrix over the internal states, basis `gg, ge, eg, ee`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitDensity {
    rho: Matrix4<Complex64>,
}

impl TwoQubitDensity {
    /// Wraps a matrix after checking Hermiticity, unit trace and positivity
    /// to `1e-10`.
    pub fn from_matrix(rho: Matrix4<Complex64>) -> Result<Self> {
        let d = Self { rho };
        let herm = d.hermiticity_residual();
        if herm > 1e-10 {
            return Err(Error::InvalidState(format!(
                "not Hermitian (residual {herm:e})"
            )));
        }
        let tr = d.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace {tr} ≠ 1")));
        }
        let min = d.min_eigenvalue();
        if min < -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(d)
    }

    /// Skips validation; used where the caller checks invariants itself.
    pub fn from_matrix_unchecked(rho: Matrix4<Complex64>) -> Self {
        Self { rho }
    }

    pub fn pure(state: &Vector4<Complex64>) -> Result<Self> {
        let n = state.norm();
        let psi = state / Complex64::new(n, 0.0);
        Self::from_matrix(psi * psi.adjoint())
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.rho
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.rho[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (self.rho - self.rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.rho - other.rho)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// True when `|e₁e₂⟩` carries no population or coherence.
    pub fn is_single_excitation(&self, tol: f64) -> bool {
        (0..4).all(|k| self.rho[(EE, k)].norm() <= tol && self.rho[(k, EE)].norm() <= tol)
    }

    /// The `⟨e₁g₂|ρ|g₁e₂⟩` coherence.
    pub fn coherence(&self) -> Complex64 {
        self.rho[(EG, GE)]
    }

    /// Applies `(u1 ⊗ u2) ρ (u1 ⊗ u2)†` with 2×2 unitaries in `(g, e)` order.
    pub fn local_rotation(
        &self,
        u1: &nalgebra::Matrix2<Complex64>,
        u2: &nalgebra::Matrix2<Complex64>,
    ) -> Self {
        let u = u1.kronecker(u2);
        Self {
            rho: u * self.rho * u.adjoint(),
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn assemble_rho(c: &OverlapCoefficients) -> Result<TwoQubitDensity> {
    c.validate()?;
    let (cr1, ci1, cr2) = (c.c1.re, c.c1.im, c.c2.re);
    let mut rho = Matrix4::<Complex64>::zeros();
    rho[(GG, GG)] = real(0.25 * (1.0 + cr1) * (1.0 + cr2));
    rho[(EG, EG)] = real(0.5 * (1.0 - cr1));
    rho[(GE, GE)] = real(0.25 * (1.0 + cr1) * (1.0 - cr2));
    let coherence = Complex64::new(0.0, 0.25) * ci1 * (c.c_minus - c.c_plus);
    rho[(EG, GE)] = coherence;
    rho[(GE, EG)] = coherence.conj();

    let d = TwoQubitDensity::from_matrix_unchecked(rho);
    let min = d.min_eigenvalue();
    if min < -1e-10 {
        return Err(Error::NumericalConsistency(format!(
            "assembled density has eigenvalue {min:e}"
        )));
    }
    Ok(d)
}

/// Jaynes-Cummings limit: every translational overlap replaced by one.
pub fn jc_limit_rho(t1: f64, t2: f64, epsilon: f64) -> TwoQubitDensity {
    let c = OverlapCoefficients {
        c1: Complex64::from_polar(1.0, -2.0 * epsilon * t1),
        c2: Complex64::from_polar(1.0, -2.0 * epsilon * t2),
        c_plus: Complex64::from_polar(1.0, -epsilon * t2),
        c_minus: Complex64::from_polar(1.0, epsilon * t2),
    };
    assemble_rho(&c).expect("unit-modulus coefficients always give a valid state")
}

/// Closed-form density for a run in the photon-in-cavity scenario.
pub fn closed_form_rho(spec: &RunSpec) -> Result<TwoQubitDensity> {
    if spec.jc_limit && spec.scenario == Scenario::PhotonInCavity {
        spec.validate()?;
        return Ok(jc_limit_rho(spec.t1, spec.t2, spec.params.epsilon));
    }
    assemble_rho(&compute_coefficients(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{ModelParams, RunSpec};
    use nalgebra::Vector4;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Pure-state JC amplitudes: `cosθ₁cosθ₂ |gg,1⟩ + i sinθ₁ |eg,0⟩ + i cosθ₁ sinθ₂ |ge,0⟩`.
    fn jc_brute_force(th1: f64, th2: f64) -> Matrix4<Complex64> {
        let mut gg1 = Vector4::<Complex64>::zeros();
        gg1[GG] = real(th1.cos() * th2.cos());
        let mut zero_photon = Vector4::<Complex64>::zeros();
        zero_photon[EG] = Complex64::new(0.0, th1.sin());
        zero_photon[GE] = Complex64::new(0.0, th1.cos() * th2.sin());
        // trace over the photon number: no coherence between the two sectors
        gg1 * gg1.adjoint() + zero_photon * zero_photon.adjoint()
    }

    #[test]
    fn no_interaction_gives_unit_coefficients() {
        let spec = RunSpec::reference(0.0);
        let c = compute_coefficients(&spec).unwrap();
        assert!(c.max_abs_diff(&OverlapCoefficients::unity()) < 1e-13);
        let rho = assemble_rho(&c).unwrap();
        assert!((rho.get(GG, GG).re - 1.0).abs() < 1e-13);
        assert!(rho.max_abs_diff(&assemble_rho(&OverlapCoefficients::unity()).unwrap()) < 1e-13);
    }

    #[test]
    fn jc_limit_coefficients_are_pure_phases() {
        let mut spec = RunSpec::reference(1.3);
        spec.jc_limit = true;
        let c = compute_coefficients(&spec).unwrap();
        assert!((c.c1 - Complex64::from_polar(1.0, -2.6)).norm() < 1e-15);

        // small ω₀ with εT fixed approaches the same limit
        let mut soft = RunSpec::reference(1.3);
        soft.packet1 = Default::default();
        soft.packet2 = Default::default();
        soft.params.mass *= 1e8;
        let c_soft = compute_coefficients(&soft).unwrap();
        assert!((c_soft.c1 - c.c1).norm() < 1e-3);
    }

    #[test]
    fn reference_c1_modulus() {
        let spec = RunSpec::reference(2.0 * PI);
        let c = compute_coefficients(&spec).unwrap();
        let w0t = spec.params.derive().unwrap().omega0 * spec.t1;
        assert!((w0t - 0.04054).abs() < 1e-4);
        let ratio = c.c1.norm() * w0t.cosh().sqrt();
        assert!((ratio - 0.904).abs() < 2e-3, "ratio {ratio}");
    }

    #[test]
    fn excited_atom_has_no_closed_form() {
        let mut spec = RunSpec::reference(1.0);
        spec.scenario = Scenario::ExcitedAtom;
        assert!(matches!(
            compute_coefficients(&spec),
            Err(Error::UnsupportedScenario(_))
        ));
    }

    #[test]
    fn unit_coefficients_give_ground_state() {
        let rho = assemble_rho(&OverlapCoefficients::unity()).unwrap();
        let mut expected = Matrix4::<Complex64>::zeros();
        expected[(GG, GG)] = real(1.0);
        assert_eq!(*rho.matrix(), expected);
    }

    #[test]
    fn jc_quarter_pi_matches_brute_force() {
        let th = PI / 4.0;
        let rho = jc_limit_rho(th, th, 1.0);
        let brute = jc_brute_force(th, th);
        assert!((rho.matrix() - brute).iter().all(|z| z.norm() < 1e-15));
        assert!((rho.get(GG, GG).re - 0.25).abs() < 1e-15);
        assert!((rho.get(EG, EG).re - 0.5).abs() < 1e-15);
        assert!((rho.get(GE, GE).re - 0.25).abs() < 1e-15);
        assert!((rho.coherence().norm() - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn jc_limit_general_angles_match_brute_force() {
        for &(a, b) in &[(0.3, 1.9), (0.7, 1.3), (2.2, 0.4), (PI / 2.0, 0.8)] {
            let rho = jc_limit_rho(a, b, 1.0);
            let brute = jc_brute_force(a, b);
            assert!(
                (rho.matrix() - brute).iter().all(|z| z.norm() < 1e-14),
                "{a} {b}"
            );
        }
    }

    #[test]
    fn half_rabi_cycle_excites_first_atom() {
        let rho = jc_limit_rho(PI / 2.0 / 1e8, 0.37 / 1e8, 1e8);
        assert!((rho.get(EG, EG).re - 1.0).abs() < 1e-15);
        assert!(rho.coherence().norm() < 1e-15);
    }

    #[test]
    fn zero_imaginary_c1_is_diagonal() {
        let c = OverlapCoefficients {
            c1: real(0.3),
            c2: Complex64::new(0.1, 0.5),
            c_plus: Complex64::new(0.2, -0.3),
            c_minus: Complex64::new(-0.6, 0.1),
        };
        let rho = assemble_rho(&c).unwrap();
        assert_eq!(rho.coherence(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_oversized_coefficients() {
        let mut c = OverlapCoefficients::unity();
        c.c_plus = real(1.5);
        assert!(assemble_rho(&c).is_err());
    }

    #[test]
    fn jc_coherence_saturates_damped_does_not() {
        let rho = jc_limit_rho(0.7, 1.3, 1.0);
        let lhs = rho.coherence().norm_sqr();
        let rhs = rho.get(EG, EG).re * rho.get(GE, GE).re;
        assert!((lhs - rhs).abs() < 1e-12);

        let spec = RunSpec::reference(3.0).with_times(0.7e-8, 1.3e-8);
        let rho = assemble_rho(&compute_coefficients(&spec).unwrap()).unwrap();
        let lhs = rho.coherence().norm_sqr();
        let rhs = rho.get(EG, EG).re * rho.get(GE, GE).re;
        assert!(lhs < rhs);
    }

    #[test]
    fn gap_does_not_enter() {
        let spec = RunSpec::reference(1.1);
        let mut gapped = spec;
        gapped.gap = 10.0 * spec.t1;
        assert_eq!(
            compute_coefficients(&spec).unwrap(),
            compute_coefficients(&gapped).unwrap()
        );
    }

    fn unit_disk() -> impl Strategy<Value = Complex64> {
        (0.0..1.0f64, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn trace_identity(c1 in unit_disk(), c2 in unit_disk()) {
            let c = OverlapCoefficients { c1, c2, c_plus: real(0.0), c_minus: real(0.0) };
            let rho = assemble_rho(&c).unwrap();
            prop_assert!((rho.trace() - 1.0).abs() <= 1e-15);
        }

        #[test]
        fn pipeline_states_are_physical(eps_t1 in 0.0..20.0f64, eps_t2 in 0.0..20.0f64,
                                        x1 in -1.5e-6..1.5e-6f64, x2 in -1.5e-6..1.5e-6f64,
                                        p1 in -3e-28..3e-28f64) {
            let mut spec = RunSpec::new(ModelParams::reference())
                .with_times(eps_t1 / 1e8, eps_t2 / 1e8);
            spec.packet1.x0 = x1;
            spec.packet1.p0 = p1;
            spec.packet2.x0 = x2;
            let rho = assemble_rho(&compute_coefficients(&spec).unwrap()).unwrap();
            prop_assert!((rho.trace() - 1.0).abs() <= 1e-12);
            prop_assert!(rho.hermiticity_residual() <= 1e-12);
            prop_assert!(rho.min_eigenvalue() >= -1e-10);
            prop_assert!(rho.is_single_excitation(0.0));
        }
    }
}
