//! Overlap of the two dressed-branch copies of a coherent packet, from the
//! Gaussian engine and the closed form, with the small-time damping law.

use osg_bell::gaussian::{
    damping_approx, evolve, from_coherent, overlap, overlap_pm_closed, EvolutionKind,
};
use osg_bell::params::{packet_to_alpha, ModelParams, PacketSpec};

fn main() {
    let params = ModelParams::reference();
    let d = params.derive().unwrap();
    let packet = PacketSpec::new(params.lambda / 10.0, 0.0);
    let alpha = packet_to_alpha(&packet, &d, &params);
    println!(
        "ω₀ = {:.4e} s⁻¹, Δx₀ = {:.4e} m, α = {:.4} + {:.4}i",
        d.omega0, d.delta_x0, alpha.a, alpha.b
    );

    let start = from_coherent(alpha, &d, &params);
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>10}",
        "ω₀t", "|engine|", "|closed|", "small-time", "rel diff"
    );
    for i in 0..=10 {
        let s = 0.01 * i as f64;
        let t = s / d.omega0;
        let plus = evolve(&start, EvolutionKind::Harmonic, t, &params, &d).unwrap();
        let minus = evolve(&start, EvolutionKind::Inverted, t, &params, &d).unwrap();
        let engine = overlap(&plus, &minus);
        let closed = overlap_pm_closed(alpha, d.omega0, t);
        let approx = damping_approx(alpha, d.omega0, t);
        println!(
            "{s:>6.2} {:>12.6e} {:>12.6e} {:>12.6e} {:>10.2e}",
            engine.norm(),
            closed.norm(),
            approx.value,
            (engine - closed).norm() / closed.norm()
        );
    }
}
