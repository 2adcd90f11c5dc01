//! Horodecki M in the Jaynes–Cummings limit over one period of εT.

use std::f64::consts::PI;

use osg_bell::bell::bell_diagnostics;
use osg_bell::density::jc_limit_rho;

fn main() {
    let eps = 1e8;
    let mut inside = false;
    let (mut best, mut best_at) = (0.0, 0.0);
    for i in 0..=3000 {
        let x = PI * i as f64 / 3000.0;
        let t = x / eps;
        let d = bell_diagnostics(&jc_limit_rho(t, t, eps)).unwrap();
        if d.violates != inside {
            inside = d.violates;
            println!(
                "{} violation at εT = {x:.4}",
                if inside { "enter" } else { "leave" }
            );
        }
        if d.m > best {
            best = d.m;
            best_at = x;
        }
    }
    let t = 0.9553 / eps;
    let d = bell_diagnostics(&jc_limit_rho(t, t, eps)).unwrap();
    println!("M(0.9553) = {:.5}, λ = {:?}", d.m, d.lambdas);
    println!(
        "maximum M = {best:.5} at εT = {best_at:.4}, CHSH {:.4}",
        2.0 * best.sqrt()
    );
}
