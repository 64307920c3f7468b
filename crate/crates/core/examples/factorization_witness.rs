//! The bidiagonal factor H: C = H H^T is the shifted complement of A(n+1),
//! and 2n^2 - H^T H borders A(n). Every identity is checked in integers.

use perfectchain::jacobi::{
    build_bidiagonal_factor, build_shifted_complement, verify_factorization,
};

fn main() -> perfectchain::Result<()> {
    let n = 6;
    let h = build_bidiagonal_factor(n)?;
    println!(
        "h_i^2 = {:?}",
        h.hdiag_sq()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );
    println!(
        "r_i^2 = {:?}",
        h.subdiag_sq()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );
    println!("C diag = {:?}", build_shifted_complement(n)?.diag());

    for n in [1, 2, 5, 20, 60] {
        let report = verify_factorization(n)?;
        println!(
            "n = {n:>2}: {}",
            if report.passed() {
                "all identities hold"
            } else {
                "FAILED"
            }
        );
    }
    Ok(())
}
