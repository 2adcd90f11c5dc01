//! M and 2λ₂ against εT ∈ [0, 6π] with and without the atomic motion, as CSV
//! on stdout, followed by the last εT at which the moving atoms still
//! violate.
//!
//!     cargo run --release --example motion_scan > motion.csv

use std::f64::consts::PI;

use osg_bell::oracle::OracleConfig;
use osg_bell::params::{Method, RunSpec};
use osg_bell::scan::{run_scan, ScanSpec, ScanVariable};

fn main() {
    let base = RunSpec {
        method: Method::Closed,
        ..RunSpec::reference(0.0)
    };
    let eps = base.params.epsilon;
    let scan = |jc_limit: bool| {
        let spec = ScanSpec {
            variable: ScanVariable::T,
            start: 0.0,
            stop: 6.0 * PI / eps,
            steps: 1201,
            base: RunSpec { jc_limit, ..base },
        };
        run_scan(&spec, &OracleConfig::default()).unwrap()
    };
    let moving = scan(false);
    let jc = scan(true);

    println!("eps_T,M_jc,twice_lambda2_jc,M,twice_lambda2");
    let mut last = None;
    for (a, b) in moving.iter().zip(&jc) {
        println!(
            "{:.6},{:.10},{:.10},{:.10},{:.10}",
            a.eps_t,
            b.diagnostics.m,
            b.diagnostics.twice_lambda2(),
            a.diagnostics.m,
            a.diagnostics.twice_lambda2()
        );
        if a.diagnostics.violates {
            last = Some(a.eps_t);
        }
    }
    eprintln!("last violation with motion: εT = {last:?}");
}
