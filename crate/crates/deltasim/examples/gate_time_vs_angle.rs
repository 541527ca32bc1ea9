//! Gate time against rotation angle for a family of detunings (the
//! acceleration landscape).

use deltasim::synthesis::solve_toc_parameters;
use std::f64::consts::PI;

fn main() -> deltasim::Result<()> {
    let detunings = [0.0, -0.25, -0.5, -1.0, 0.25, 0.5, 1.0];
    println!("tau/tau_c by gamma and Delta_2/Omega:");
    print!("{:>10}", "gamma/pi");
    for d2 in detunings {
        print!(" {:>8.2}", d2);
    }
    println!();
    for k in (5..200).step_by(10) {
        let gamma = 0.01 * PI * k as f64;
        print!("{:>10.2}", gamma / PI);
        for d2 in detunings {
            let sol = solve_toc_parameters(gamma, d2, 1.0)?;
            print!(" {:>8.4}", sol.tau_over_tau_c());
        }
        println!();
    }
    println!("\nNegative detuning accelerates gamma < pi, positive gamma > pi;");
    println!("the resonant TOC scheme (column 0.00) is always at or below 1.");
    Ok(())
}
