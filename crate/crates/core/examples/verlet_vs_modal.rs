//! Cross-check the closed-form modal propagator against velocity Verlet.

use std::f64::consts::PI;

use perfectchain::chain::{design_chain, figure_parameters};
use perfectchain::dynamics::{integrate_verlet, snapshot_series, verlet_step_bound, ChainState};

fn main() -> perfectchain::Result<()> {
    let n = 51;
    let (omega, m1) = figure_parameters(n);
    let d = design_chain(n, m1, omega)?;
    let s0 = ChainState::unit_displacement(n, 0);
    let period = 2.0 * PI / omega;
    println!("step bound {:.4}", verlet_step_bound(&d)?);

    let modal = snapshot_series(&d, &s0, period, period / 4.0)?;
    for dt in [4e-3, 2e-3, 1e-3] {
        let verlet = integrate_verlet(&d, &s0, period, dt, period / 4.0)?;
        let gap = verlet
            .snapshots
            .iter()
            .zip(&modal.snapshots)
            .flat_map(|(a, b)| a.q.iter().zip(&b.q).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        println!(
            "dt = {dt:.0e}: max gap {gap:.3e}, energy drift {:.3e}",
            verlet.max_relative_energy_drift()
        );
    }
    println!(
        "modal energy drift {:.3e}",
        modal.max_relative_energy_drift()
    );
    Ok(())
}
