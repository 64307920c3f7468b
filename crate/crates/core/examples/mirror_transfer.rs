//! A displaced end mass reappears, mirrored, at the far end after pi/omega.
//! The uniform chain with the same length smears the pulse out instead.

use std::f64::consts::PI;

use perfectchain::chain::{design_chain, figure_parameters, ChainDesign};
use perfectchain::dynamics::{mirror_fidelity, propagate_modes, snapshot_series, ChainState};

fn main() -> perfectchain::Result<()> {
    let n = 51;
    let (omega, m1) = figure_parameters(n);
    let d = design_chain(n, m1, omega)?;
    let s0 = ChainState::unit_displacement(n, 0);
    let half = PI / omega;

    let traj = snapshot_series(&d, &s0, half, half / 10.0)?;
    for s in &traj.snapshots {
        let (peak, _) = s.q.iter().enumerate().fold((0, 0.0f64), |best, (i, q)| {
            if q.abs() > best.1.abs() {
                (i, *q)
            } else {
                best
            }
        });
        println!("t = {:>6.2}  peak at site {:>2}", s.t, peak + 1);
    }
    let r = mirror_fidelity(&s0, traj.last())?;
    println!(
        "perfect chain: fidelity {:.12}, max deviation {:.2e}",
        r.fidelity, r.max_deviation
    );

    let uniform = ChainDesign::uniform(n, 1.0, 1.0)?;
    let u = propagate_modes(&uniform, &s0, 50.0)?;
    println!(
        "uniform chain at t = 50: fidelity {:.3}",
        mirror_fidelity(&s0, &u)?.fidelity
    );
    Ok(())
}
