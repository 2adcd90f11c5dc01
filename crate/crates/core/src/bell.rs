//! Horodecki test for CHSH violation by a two-qubit state.
//!
//! Some CHSH inequality is violated iff `M(ρ) > 1`, where `M` is the sum of
//! the two largest eigenvalues of `TᵀT` and `T[n][m] = tr(ρ σₙ⊗σₘ)`.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};
use num_complex::Complex64;

use crate::density::{closed_form_rho, OverlapCoefficients, TwoQubitDensity};
use crate::error::{Error, Result};
use crate::params::{RunSpec, Scenario};

/// Pauli matrices in `(g, e)` order with `σ_z|e⟩ = +|e⟩`.
pub fn pauli() -> [Matrix2<Complex64>; 3] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(o, one, one, o),
        Matrix2::new(o, i, -i, o),
        Matrix2::new(-one, o, o, one),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationMatrix {
    pub t: Matrix3<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDiagnostics {
    /// Eigenvalues of `TᵀT`, descending, tiny negatives clamped to zero.
    pub lambdas: [f64; 3],
    pub m: f64,
    /// Largest attainable CHSH value, `2√M`.
    pub chsh_max: f64,
    pub violates: bool,
}

impl BellDiagnostics {
    /// `2λ₂`, the degenerate-pair branch.
    pub fn twice_lambda2(&self) -> f64 {
        2.0 * self.lambdas[1]
    }
}

pub fn pauli_correlation_matrix(rho: &TwoQubitDensity) -> Result<CorrelationMatrix> {
    let herm = rho.hermiticity_residual();
    if herm > 1e-10 {
        return Err(Error::InvalidState(format!(
            "density matrix not Hermitian (residual {herm:e})"
        )));
    }
    let s = pauli();
    let r: &Matrix4<Complex64> = rho.matrix();
    let mut t = Matrix3::zeros();
    for n in 0..3 {
        for m in 0..3 {
            let op = s[n].kronecker(&s[m]);
            t[(n, m)] = (r * op).trace().re;
        }
    }
    Ok(CorrelationMatrix { t })
}

/// Eigen decomposition of a symmetric 3×3 matrix by cyclic Jacobi rotations.
/// Returns unsorted eigenvalues and eigenvectors as matrix columns.
pub fn symmetric_eigen3(a: &Matrix3<f64>) -> (Vector3<f64>, Matrix3<f64>) {
    const MAX_SWEEPS: usize = 64;
    let mut a = (a + a.transpose()) * 0.5;
    let mut v = Matrix3::identity();
    let scale = a.norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off = (a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2)).sqrt();
        if off <= 1e-14 * scale {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq.abs() <= f64::MIN_POSITIVE {
                continue;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;

            let mut rot = Matrix3::identity();
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = s;
            rot[(q, p)] = -s;
            a = rot.transpose() * a * rot;
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;
            v *= rot;
        }
    }
    (Vector3::new(a[(0, 0)], a[(1, 1)], a[(2, 2)]), v)
}

pub fn horodecki_m(t: &CorrelationMatrix) -> BellDiagnostics {
    let u = t.t.transpose() * t.t;
    let (vals, _) = symmetric_eigen3(&u);
    let mut lambdas = [vals[0], vals[1], vals[2]];
    for l in &mut lambdas {
        if *l < 0.0 && *l >= -1e-12 {
            *l = 0.0;
        }
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let m = lambdas[0] + lambdas[1];
    BellDiagnostics {
        lambdas,
        m,
        chsh_max: 2.0 * m.max(0.0).sqrt(),
        violates: m > 1.0,
    }
}

pub fn bell_diagnostics(rho: &TwoQubitDensity) -> Result<BellDiagnostics> {
    Ok(horodecki_m(&pauli_correlation_matrix(rho)?))
}

/// Excited-atom M via the photon-in-cavity `2λ₂` at the same parameters.
///
/// This is a surrogate, not an evaluation of the excited-atom state: it
/// equals that state's M only where `2λ₂` is the larger branch. Compare
/// against the oracle before relying on it.
pub fn scenario2_m_closed(spec: &RunSpec) -> Result<f64> {
    if spec.scenario != Scenario::ExcitedAtom {
        return Err(Error::Config(
            "scenario2_m_closed expects the excited-atom scenario".into(),
        ));
    }
    let photon = RunSpec {
        scenario: Scenario::PhotonInCavity,
        ..*spec
    };
    let diag = bell_diagnostics(&closed_form_rho(&photon)?)?;
    Ok(diag.twice_lambda2())
}

/// Spectrum of `TᵀT` split into the eigenvalue along the quantization axis
/// and the transverse pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxialSpectrum {
    pub axial: f64,
    pub transverse: [f64; 2],
}

/// Fails unless `T` is block diagonal in `(x, y) ⊕ z`, which holds for
/// every state in the single-excitation sector.
pub fn axial_spectrum(t: &CorrelationMatrix) -> Result<AxialSpectrum> {
    let u = t.t.transpose() * t.t;
    let off = u[(0, 2)].abs().max(u[(1, 2)].abs());
    if off > 1e-12 {
        return Err(Error::InvalidState(format!(
            "correlation matrix couples the z axis to the transverse plane ({off:e})"
        )));
    }
    let (a, b, d) = (u[(0, 0)], u[(0, 1)], u[(1, 1)]);
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d).powi(2) + b * b).sqrt();
    Ok(AxialSpectrum {
        axial: u[(2, 2)],
        transverse: [mean + r, mean - r],
    })
}

/// M for the excited-atom initial state, from the photon-in-cavity overlaps.
///
/// The coherence keeps its modulus `¼|Im c₁||c₋ − c₊|`; only the axial
/// correlation changes, to `½(1 − Re c₁)Re c₂ − ½(1 + Re c₁)`.
pub fn excited_atom_m(c: &OverlapCoefficients) -> f64 {
    let z = 0.25 * c.c1.im.abs() * (c.c_minus - c.c_plus).norm();
    let tzz = 0.5 * (1.0 - c.c1.re) * c.c2.re - 0.5 * (1.0 + c.c1.re);
    let transverse = 4.0 * z * z;
    f64::max(tzz * tzz + transverse, 2.0 * transverse)
}
