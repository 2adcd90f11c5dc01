//! Load a configuration file, apply overrides, evaluate one point.
//!
//!     cargo run --example config_run -- configs/reference.conf T1=1.3e-8 T2=1.3e-8

use osg_bell::oracle::OracleConfig;
use osg_bell::params::parse_config;
use osg_bell::scan::run_point;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/reference.conf").to_string());
    let mut spec = parse_config(&std::fs::read_to_string(&path)?)?;
    for o in args {
        spec.apply_override(&o)?;
    }
    print!("{}", spec.to_config_string());

    let point = run_point(&spec, &OracleConfig::default())?;
    for row in point.rows(spec.t1, spec.params.epsilon * spec.t1) {
        println!(
            "{:<16} M = {:.8}  CHSH max = {:.6}  violates = {}",
            row.method.tag(),
            row.diagnostics.m,
            row.diagnostics.chsh_max,
            row.diagnostics.violates
        );
    }
    if let Some(d) = point.max_delta_rho() {
        println!("max |Δρ| = {d:.2e}");
    }
    Ok(())
}
