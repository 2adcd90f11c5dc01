//! Which interaction time belongs in the phase of c±: the Fock oracle decides.

use osg_bell::density::{assemble_rho, compute_coefficients_with, PhaseConvention};
use osg_bell::oracle::{converged_rho, OracleConfig};
use osg_bell::params::RunSpec;

fn main() {
    let base = RunSpec::reference(0.0);
    let eps = base.params.epsilon;
    let spec = base.with_times(0.7 / eps, 1.3 / eps);
    let oracle = converged_rho(&spec, &OracleConfig::default())
        .unwrap()
        .value;
    for convention in [
        PhaseConvention::SecondAtom,
        PhaseConvention::LiteralFirstAtom,
    ] {
        let c = compute_coefficients_with(&spec, convention).unwrap();
        let rho = assemble_rho(&c).unwrap();
        println!(
            "{convention:?}: c+ = {:.6}, c- = {:.6}, max |ρ − ρ_oracle| = {:.2e}",
            c.c_plus,
            c.c_minus,
            rho.max_abs_diff(&oracle)
        );
    }
}
