//! Rebuild a Jacobi matrix from its spectrum.
//!
//! The nodes 2k^2 with binomial weights give back the closed form exactly;
//! an arbitrary spectrum with the persymmetric weights gives a mirror-symmetric
//! matrix with that spectrum.

use perfectchain::eigen;
use perfectchain::exact::format_rational;
use perfectchain::inverse::*;

fn main() -> perfectchain::Result<()> {
    let n = 7;
    let rec = deboor_golub_exact(
        &square_integer_spectrum_exact(n),
        &square_integer_weights(n)?,
    )?;
    let show = |v: &[perfectchain::exact::BigRational]| {
        v.iter().map(format_rational).collect::<Vec<_>>().join(" ")
    };
    println!("a_i   = {}", show(&rec.matrix.diag));
    println!("b_i^2 = {}", show(&rec.matrix.offdiag_sq));

    let spectrum = [-1.5, 0.25, 1.0, 3.5, 4.0, 9.0];
    let m = deboor_golub(&spectrum, &persymmetric_weights(&spectrum)?)?;
    println!("\nspectrum  {spectrum:?}");
    println!("diag      {:?}", m.diag());
    println!("offdiag   {:?}", m.offdiag());
    println!("recovered {:?}", eigen::eigenvalues(&m, 1e-14)?);
    Ok(())
}
