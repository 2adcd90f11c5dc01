//! Closed form against the brute-force Fock evolution, with the cutoff
//! doubled until the oracle is stable.

use std::f64::consts::PI;
use std::time::Instant;

use osg_bell::density::closed_form_rho;
use osg_bell::oracle::{converged_rho, OracleConfig};
use osg_bell::params::RunSpec;

fn main() {
    let cfg = OracleConfig::default();
    for eps_t in [PI / 4.0, PI / 2.0, PI, 2.0 * PI, 4.0 * PI] {
        let spec = RunSpec::reference(eps_t);
        let clock = Instant::now();
        let oracle = converged_rho(&spec, &cfg).unwrap();
        let closed = closed_form_rho(&spec).unwrap();
        println!(
            "εT = {eps_t:7.4}  N = {}  doubling change {:.1e}  max |Δρ| {:.1e}  ({:.2} s)",
            oracle.cutoff,
            oracle.deviation,
            closed.max_abs_diff(&oracle.value),
            clock.elapsed().as_secs_f64()
        );
    }
}
