//! Direct use of the Lindblad integrator: pure decay of the auxiliary
//! level and the closed-system consistency limit.

use deltasim::lindblad::{decay_operator, dephasing_operator, lindblad_evolve_sampled};
use deltasim::operator::Operator;
use deltasim::schedule::Schedule;
use deltasim::state::StateVector;

fn main() -> deltasim::Result<()> {
    // no Hamiltonian, pure decay of |2> at Gamma_- = 0.3
    let sched = Schedule::new(5.0, 0.01, 3, |_| Operator::zeros(3))?;
    let rho0 = StateVector::basis(3, 2).density();
    let samples = lindblad_evolve_sampled(&sched, &[decay_operator()], &[0.3], &rho0, 10)?;
    println!("pure decay of |2><2| (Gamma_- = 0.3):");
    println!("{:>6} {:>10} {:>10}", "t", "pop2", "exp(-2Gt)");
    for (t, rho) in &samples {
        println!("{:>6.2} {:>10.6} {:>10.6}", t, rho.population(2), (-2.0f64 * 0.3 * t).exp());
    }

    // dephasing leaves the qubit coherence untouched (the DFS logic)
    let sched = Schedule::new(5.0, 0.01, 3, |_| Operator::zeros(3))?;
    let plus = StateVector::normalized(ndarray::array![
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(0.0, 0.0)
    ])?;
    let out = lindblad_evolve_sampled(&sched, &[dephasing_operator()], &[0.5], &plus.density(), 1)?;
    let coh = out.last().unwrap().1.operator().get(0, 1);
    println!("\nqubit coherence after strong S_z dephasing: {:.6} (unchanged)", coh.re);
    Ok(())
}
