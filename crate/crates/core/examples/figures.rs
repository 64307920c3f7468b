//! Write the profile and snapshot plots (SVG plus CSV) into a directory.
//!
//!     cargo run --example figures -- /tmp/perfectchain

use std::path::PathBuf;

use perfectchain::cli::{self, Format, Integrator, SimulateParams};

fn main() -> perfectchain::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir).map_err(|e| perfectchain::Error::Domain(e.to_string()))?;
    let write = |name: &str, text: String| {
        std::fs::write(dir.join(name), text).map_err(|e| perfectchain::Error::Domain(e.to_string()))
    };

    for n in [10, 30, 100] {
        write(
            &format!("profile_{n}.svg"),
            cli::cmd_profile(n, None, None, Format::Svg)?,
        )?;
    }
    for n in [51, 201] {
        let p = SimulateParams {
            n,
            omega: None,
            m1: None,
            t_end: None,
            interval: None,
            dt: 1e-3,
            integrator: Integrator::Modal,
        };
        let traj = cli::simulate(&p)?;
        write(&format!("snapshots_{n}.csv"), traj.to_csv())?;
        let rows: Vec<(f64, Vec<f64>)> =
            traj.snapshots.iter().map(|s| (s.t, s.q.clone())).collect();
        write(
            &format!("snapshots_{n}.svg"),
            perfectchain::plot::stacked_rows(&format!("n = {n}"), &rows),
        )?;
    }
    println!("wrote figures to {}", dir.display());
    Ok(())
}
