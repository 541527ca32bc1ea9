//! Bloch-sphere evolution paths of the same pi/2 rotation under the three
//! schemes: the detuned pulse travels the shortest path.

use deltasim::delta::{bloch_trajectory, path_length};
use deltasim::state::StateVector;
use deltasim::synthesis::{single_loop_schedule, solve_toc_parameters, GateSpec};
use std::f64::consts::PI;

fn main() -> deltasim::Result<()> {
    let spec = GateSpec::rx(PI / 2.0)?;
    let init = StateVector::basis(3, 0);

    let mut rows = Vec::new();
    for (label, d2) in [("ours |d2| = 1/2", Some(-0.5)), ("toc (d2 = 0)", Some(0.0)), ("single-loop", None)] {
        let sched = match d2 {
            Some(d2) => solve_toc_parameters(spec.gamma, d2, 1.0)?.rotating_schedule(&spec)?,
            None => single_loop_schedule(&spec, 1.0)?,
        };
        let traj = bloch_trajectory(&sched, &init, 600)?;
        let end = traj.last().unwrap();
        println!(
            "{label:>16}: path length {:>7.4}, endpoint ({:+.4}, {:+.4}, {:+.4}), max leakage {:.3}",
            path_length(&traj),
            end.x,
            end.y,
            end.z,
            traj.iter().map(|s| s.leakage).fold(0.0, f64::max)
        );
        rows.push((label, traj));
    }

    if let Ok(dir) = std::env::var("DELTASIM_OUT") {
        std::fs::create_dir_all(&dir)?;
        for (label, traj) in rows {
            let name = label.split_whitespace().next().unwrap();
            let mut text = String::from("t,x,y,z,leakage\n");
            for s in traj {
                text.push_str(&format!("{},{},{},{},{}\n", s.t, s.x, s.y, s.z, s.leakage));
            }
            std::fs::write(format!("{dir}/bloch_{name}.csv"), text)?;
        }
        println!("trajectories written to $DELTASIM_OUT");
    }
    Ok(())
}
