//! Masses and springs for a chain whose normal-mode frequencies are k omega,
//! and the check that its dynamical matrix is the scaled closed-form matrix.

use perfectchain::chain::{design_chain, dynamical_matrix, figure_parameters};
use perfectchain::dynamics::ModalPropagator;

fn main() -> perfectchain::Result<()> {
    let n = 11;
    let (omega, m1) = figure_parameters(n);
    let d = design_chain(n, m1, omega)?;
    for i in 0..n {
        let k = d
            .springs()
            .get(i)
            .map(|k| format!("{k:.6}"))
            .unwrap_or_default();
        println!("{:>3}  M = {:<10.6} K = {k}", i + 1, d.masses()[i]);
    }

    let dm = dynamical_matrix(&d)?;
    println!("\ndynamical matrix diagonal: {:?}", dm.diag());
    let prop = ModalPropagator::new(&d)?;
    let ratios: Vec<String> = prop
        .frequencies()
        .iter()
        .map(|w| format!("{:.9}", w / omega))
        .collect();
    println!("omega_k / omega: {}", ratios.join(" "));
    Ok(())
}
