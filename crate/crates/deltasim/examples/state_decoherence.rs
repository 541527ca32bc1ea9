//! Open-system population and fidelity dynamics of the two reference
//! gates under decay and dephasing at kappa = 4e-4 Omega.

use deltasim::robustness::{decoherence_state_run, DecoherenceGate};

fn main() -> deltasim::Result<()> {
    for (label, gate) in [
        ("Rx(pi/2) from |0>", DecoherenceGate::RxHalfPi),
        ("Rz(pi/2) from |+>", DecoherenceGate::RzHalfPi),
    ] {
        let run = decoherence_state_run(gate, -0.5, 4e-4, 10)?;
        println!("{label}:");
        println!("{:>8} {:>8} {:>8} {:>8} {:>10}", "t/tau", "pop0", "pop1", "pop2", "fidelity");
        let tau = run.samples.last().unwrap().t;
        for s in &run.samples {
            println!(
                "{:>8.3} {:>8.4} {:>8.4} {:>8.4} {:>10.6}",
                s.t / tau,
                s.pop0,
                s.pop1,
                s.pop2,
                s.fidelity
            );
        }
        println!("final state fidelity: {:.4}\n", run.final_fidelity);
    }
    Ok(())
}
