//! Truncated Fock-space operators for the translational oscillators.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{ComplexAmplitude, DerivedParams, ModelParams};

pub const MIN_CUTOFF: usize = 16;

/// Position, momentum and ladder operators of the `ω₀` oscillator in SI
/// units, truncated to `n` Fock states.
///
/// `x2` and `p2` are the truncations of `x̂²` and `p̂²` themselves, not
/// squares of truncated matrices, so they carry no corner artefacts.
#[derive(Clone, Debug)]
pub struct FockOperators {
    pub n: usize,
    pub b: DMatrix<f64>,
    pub x: DMatrix<f64>,
    pub p: DMatrix<Complex64>,
    pub x2: DMatrix<f64>,
    pub p2: DMatrix<f64>,
    /// `(b†² + b²)/2`.
    pub squeeze_gen: DMatrix<f64>,
    pub params: ModelParams,
    pub derived: DerivedParams,
}

pub fn build_operators(
    n: usize,
    derived: &DerivedParams,
    params: &ModelParams,
) -> Result<FockOperators> {
    if n < MIN_CUTOFF {
        return Err(Error::Config(format!(
            "Fock cutoff {n} below minimum {MIN_CUTOFF}"
        )));
    }
    let mut b = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        b[(k - 1, k)] = (k as f64).sqrt();
    }
    let bd = b.transpose();
    let dx = derived.delta_x0;
    let hbar = params.hbar;

    let x = (&b + &bd) * dx;
    let p = (&bd - &b).map(|v| Complex64::new(0.0, v * hbar / (2.0 * dx)));

    // b² + b†² exactly, and 2n+1 on the diagonal
    let mut b2_sum = DMatrix::<f64>::zeros(n, n);
    for k in 2..n {
        let v = ((k * (k - 1)) as f64).sqrt();
        b2_sum[(k - 2, k)] = v;
        b2_sum[(k, k - 2)] = v;
    }
    let number2 = DMatrix::<f64>::from_diagonal(&DVector::from_fn(n, |k, _| 2.0 * k as f64 + 1.0));

    let x2 = (&b2_sum + &number2) * (dx * dx);
    let p2 = (&number2 - &b2_sum) * (hbar / (2.0 * dx)).powi(2);
    let squeeze_gen = &b2_sum * 0.5;

    Ok(FockOperators {
        n,
        b,
        x,
        p,
        x2,
        p2,
        squeeze_gen,
        params: *params,
        derived: *derived,
    })
}

impl FockOperators {
    /// `p̂²/2mħ`, s⁻¹.
    pub fn kinetic(&self) -> DMatrix<f64> {
        &self.p2 / (2.0 * self.params.mass * self.params.hbar)
    }

    /// `εk²x̂²/2`, s⁻¹.
    pub fn curvature(&self) -> DMatrix<f64> {
        let eps = self.params.epsilon;
        let k = self.derived.k;
        &self.x2 * (eps * k * k / 2.0)
    }

    /// `‖[x, p] − iħ‖` over the leading `n − 2` block.
    pub fn commutator_residual(&self) -> f64 {
        let xc = self.x.map(|v| Complex64::new(v, 0.0));
        let comm = &xc * &self.p - &self.p * &xc;
        let m = self.n - 2;
        let mut worst = 0.0f64;
        for r in 0..m {
            for c in 0..m {
                let target = if r == c {
                    Complex64::new(0.0, self.params.hbar)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                worst = worst.max((comm[(r, c)] - target).norm());
            }
        }
        worst
    }

    /// Coherent vector `e^{−|α|²/2} Σ αⁿ/√n! |n⟩` truncated at the cutoff.
    pub fn coherent(&self, alpha: ComplexAmplitude) -> DVector<Complex64> {
        let a = alpha.to_complex();
        let mut v = DVector::<Complex64>::zeros(self.n);
        v[0] = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        for k in 1..self.n {
            v[k] = v[k - 1] * a / (k as f64).sqrt();
        }
        v
    }
}

/// Minimum cutoff for a coherent amplitude: `|α|² + 10|α| + 20`, or the
/// floor [`MIN_CUTOFF`] for the vacuum itself.
pub fn required_cutoff(alpha: ComplexAmplitude) -> usize {
    let r = alpha.norm_sqr().sqrt();
    if r == 0.0 {
        return MIN_CUTOFF;
    }
    (r * r + 10.0 * r + 20.0).ceil() as usize
}

/// `exp(−iHt)` for a real symmetric `H` (s⁻¹), kept as its eigenbasis.
#[derive(Clone, Debug)]
pub struct Propagator {
    vecs: DMatrix<f64>,
    vals: DVector<f64>,
}

impl Propagator {
    pub fn new(h: DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(h);
        Self {
            vecs: eig.eigenvectors,
            vals: eig.eigenvalues,
        }
    }

    pub fn dim(&self) -> usize {
        self.vals.len()
    }

    /// `U(t)·ψ` for every column of `psi`.
    pub fn apply(&self, psi: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
        let re = psi.map(|z| z.re);
        let im = psi.map(|z| z.im);
        let vt = self.vecs.transpose();
        let mut yr = &vt * re;
        let mut yi = &vt * im;
        for (row, &lam) in self.vals.iter().enumerate() {
            let (s, c) = (lam * t).sin_cos();
            for col in 0..yr.ncols() {
                let (a, b) = (yr[(row, col)], yi[(row, col)]);
                // (a + ib)(c − is)
                yr[(row, col)] = a * c + b * s;
                yi[(row, col)] = b * c - a * s;
            }
        }
        let out_re = &self.vecs * yr;
        let out_im = &self.vecs * yi;
        out_re.zip_map(&out_im, Complex64::new)
    }

    pub fn apply_vector(&self, v: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        let m = DMatrix::from_column_slice(v.len(), 1, v.as_slice());
        let out = self.apply(&m, t);
        DVector::from_column_slice(out.as_slice())
    }
}

/// Applies `exp(iα/2·(b†² + b²))` through its disentangled form
/// `e^{−ln cosh α (b†b + ½)} · e^{(i/2) tanh α cosh²α b†²} · e^{(i/2) tanh α b²}`.
pub fn squeeze_factored(
    ops: &FockOperators,
    alpha: f64,
    v: &DVector<Complex64>,
) -> DVector<Complex64> {
    let n = ops.n;
    let th = alpha.tanh();
    let ch = alpha.cosh();
    let lower = |x: &DVector<Complex64>| {
        DVector::from_fn(n, |k, _| {
            if k + 2 < n {
                x[k + 2] * (((k + 1) * (k + 2)) as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let raise = |x: &DVector<Complex64>| {
        DVector::from_fn(n, |k, _| {
            if k >= 2 {
                x[k - 2] * ((k * (k - 1)) as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let exp_series =
        |coef: Complex64,
         x: &DVector<Complex64>,
         step: &dyn Fn(&DVector<Complex64>) -> DVector<Complex64>| {
            let mut sum = x.clone();
            let mut term = x.clone();
            for j in 1..=n {
                term = step(&term) * (coef / j as f64);
                sum += &term;
                if term.norm() <= 1e-18 * sum.norm() {
                    break;
                }
            }
            sum
        };

    let half_i = Complex64::new(0.0, 0.5);
    let w = exp_series(half_i * th, v, &lower);
    let w = exp_series(half_i * th * ch * ch, &w, &raise);
    let damp = -ch.ln();
    DVector::from_fn(n, |k, _| w[k] * (damp * (k as f64 + 0.5)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(n: usize) -> FockOperators {
        let p = ModelParams::reference();
        let d = p.derive().unwrap();
        build_operators(n, &d, &p).unwrap()
    }

    #[test]
    fn cutoff_too_small() {
        let p = ModelParams::reference();
        let d = p.derive().unwrap();
        assert!(matches!(build_operators(8, &d, &p), Err(Error::Config(_))));
    }

    #[test]
    fn commutator_interior_is_exact() {
        let o = ops(16);
        assert!(o.commutator_residual() <= 1e-12 * o.params.hbar);
    }

    #[test]
    fn ladder_lowers_by_one() {
        let o = ops(16);
        for r in 0..16 {
            for c in 0..16 {
                if o.b[(r, c)] != 0.0 {
                    assert_eq!(c, r + 1);
                }
            }
        }
    }

    #[test]
    fn ground_state_variance() {
        let o = ops(16);
        let dx2 = o.derived.delta_x0.powi(2);
        assert!((o.x2[(0, 0)] - dx2).abs() / dx2 < 1e-15);
        // x2 agrees with x·x away from the truncation corner
        let xx = &o.x * &o.x;
        for r in 0..14 {
            for c in 0..14 {
                assert!((xx[(r, c)] - o.x2[(r, c)]).abs() <= 1e-12 * dx2);
            }
        }
    }

    #[test]
    fn coherent_vector_is_eigenvector_of_b() {
        let o = ops(128);
        for alpha in [
            ComplexAmplitude::new(6.0, 0.0),
            ComplexAmplitude::new(-2.5, 3.1),
            ComplexAmplitude::new(0.0, -4.0),
        ] {
            let v = o.coherent(alpha);
            let bv = o.b.map(|x| Complex64::new(x, 0.0)) * &v;
            let mean = v.dotc(&bv);
            assert!((mean - alpha.to_complex()).norm() < 1e-8);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn propagator_is_unitary() {
        let o = ops(64);
        let prop = Propagator::new(o.kinetic());
        let v = o.coherent(ComplexAmplitude::new(1.0, 0.5));
        let out = prop.apply_vector(&v, 3.0 / o.derived.omega0);
        assert!((out.norm() - 1.0).abs() < 1e-12);
        let back = prop.apply_vector(&v, 0.0);
        assert!((back - v).norm() < 1e-13);
    }

    #[test]
    fn factored_squeeze_matches_exponential() {
        let o = ops(96);
        let w0 = o.derived.omega0;
        // exp(iα/2(b†²+b²)) = exp(−i H_inv t) with α = ω₀t
        let inverted = Propagator::new(o.kinetic() - o.curvature());
        for (al, s) in [
            (ComplexAmplitude::new(0.0, 0.0), 0.3),
            (ComplexAmplitude::new(1.5, -0.5), 0.2),
        ] {
            let v = o.coherent(al);
            let direct = inverted.apply_vector(&v, s / w0);
            let factored = squeeze_factored(&o, s, &v);
            assert!((direct - factored).norm() < 1e-10);
        }
    }
}
