//! Parametric controlled-phase gate between two transmons from adjacent
//! logical units: 9-dim simulation against diag(1, 1, e^{i gamma'}, 1).

use deltasim::transmon::{two_qubit_physical, LatticeConfig};
use std::f64::consts::PI;

fn main() -> deltasim::Result<()> {
    let cfg = LatticeConfig::default_two_qubit_pair();
    for gamma_over_pi in [1.0, 0.5, 1.5] {
        let result = two_qubit_physical(&cfg, gamma_over_pi * PI, 0.0, None, None)?;
        println!(
            "gamma' = {:.2} pi: fidelity {:.5}, tau' = {:>5.1} ns, |11>_L phase {:+.4}, \
             residual |f> population {:.1e}",
            gamma_over_pi,
            result.fidelity,
            result.solution.tau,
            result.phase_11,
            result.residual_f_population
        );
    }
    println!("\nThe |10>_L state completes a full |11> -> |20> -> |11> cycle picking up");
    println!("the controlled phase; the other logical states only dress weakly.");
    Ok(())
}
