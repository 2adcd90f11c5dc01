use std::f64::consts::PI;

use osg_bell::bell::bell_diagnostics;
use osg_bell::density::closed_form_rho;
use osg_bell::oracle::OracleConfig;
use osg_bell::params::{Method, PacketSpec, RunSpec, Scenario};
use osg_bell::scan::{emit_csv, run_point, run_scan, RowMethod, ScanSpec, ScanVariable};

fn eps_scan(base: RunSpec, to: f64, steps: usize) -> ScanSpec {
    let eps = base.params.epsilon;
    ScanSpec {
        variable: ScanVariable::T,
        start: 0.0,
        stop: to / eps,
        steps,
        base,
    }
}

#[test]
fn parallel_scan_matches_sequential_points() {
    let base = RunSpec {
        method: Method::Closed,
        ..RunSpec::reference(0.0)
    };
    let scan = eps_scan(base, 4.0 * PI, 64);
    let rows = run_scan(&scan, &OracleConfig::default()).unwrap();
    let mut values = scan.values();
    values.reverse();
    let mut sequential: Vec<_> = values
        .iter()
        .flat_map(|&v| {
            run_point(&scan.point(v), &OracleConfig::default())
                .unwrap()
                .rows(v, scan.eps_t(v))
        })
        .collect();
    sequential.reverse();
    assert_eq!(emit_csv(&rows), emit_csv(&sequential));
}

#[test]
fn centred_packets_track_the_jc_curve() {
    let centred = RunSpec {
        packet1: PacketSpec::default(),
        packet2: PacketSpec::default(),
        method: Method::Closed,
        ..RunSpec::reference(0.0)
    };
    let jc = RunSpec {
        jc_limit: true,
        ..centred
    };
    let cfg = OracleConfig::default();
    let a = run_scan(&eps_scan(centred, 4.0 * PI, 401), &cfg).unwrap();
    let b = run_scan(&eps_scan(jc, 4.0 * PI, 401), &cfg).unwrap();
    let dev = |upto: f64| {
        a.iter()
            .zip(&b)
            .filter(|(x, _)| x.eps_t <= upto)
            .map(|(x, y)| (x.diagnostics.m - y.diagnostics.m).abs())
            .fold(0.0, f64::max)
    };
    // the zero-point phase ω₀T/2 in c1 is what separates the curves
    println!(
        "max |ΔM|: {:.3e} up to π, {:.3e} up to 4π",
        dev(PI),
        dev(4.0 * PI)
    );
    assert!(dev(PI) < 2e-2);
    assert!(dev(4.0 * PI) < 6e-2);
}

#[test]
fn long_interaction_separates() {
    let spec = RunSpec::reference(100.0);
    let rho = closed_form_rho(&spec).unwrap();
    assert!(rho.coherence().norm() < 1e-6);
    assert!(bell_diagnostics(&rho).unwrap().m < 1.0);
}

#[test]
fn excited_atom_oracle_scan() {
    let base = RunSpec {
        scenario: Scenario::ExcitedAtom,
        method: Method::Both,
        ..RunSpec::reference(0.0)
    };
    let rows = run_scan(&eps_scan(base, PI, 3), &OracleConfig::default()).unwrap();
    let tags: Vec<_> = rows.iter().map(|r| r.method).collect();
    assert_eq!(
        tags,
        [RowMethod::ClosedSurrogate, RowMethod::Oracle].repeat(3)
    );
    // λ's of the surrogate row come from the oracle density
    for pair in rows.chunks(2) {
        assert_eq!(pair[0].diagnostics.lambdas, pair[1].diagnostics.lambdas);
    }
}
