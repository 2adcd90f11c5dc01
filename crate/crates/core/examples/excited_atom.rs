//! Atom 1 enters excited into an empty cavity: oracle M against the
//! photon-in-cavity 2λ₂ and against the excited-atom closed form.

use std::f64::consts::PI;

use osg_bell::bell::{bell_diagnostics, excited_atom_m};
use osg_bell::density::{assemble_rho, compute_coefficients};
use osg_bell::oracle::{converged_rho, OracleConfig};
use osg_bell::params::{RunSpec, Scenario};

fn main() {
    println!(
        "{:>8} {:>12} {:>12} {:>12}",
        "εT", "oracle M", "2λ₂ (photon)", "closed M"
    );
    for eps_t in [PI / 4.0, PI / 2.0, 1.3, PI, 2.0 * PI, 4.0 * PI] {
        let spec = RunSpec::reference(eps_t);
        let c = compute_coefficients(&spec).unwrap();
        let photon = bell_diagnostics(&assemble_rho(&c).unwrap()).unwrap();
        let excited = RunSpec {
            scenario: Scenario::ExcitedAtom,
            ..spec
        };
        let oracle = converged_rho(&excited, &OracleConfig::default()).unwrap();
        let m = bell_diagnostics(&oracle.value).unwrap().m;
        println!(
            "{eps_t:>8.4} {m:>12.8} {:>12.8} {:>12.8}",
            photon.twice_lambda2(),
            excited_atom_m(&c)
        );
    }
}
