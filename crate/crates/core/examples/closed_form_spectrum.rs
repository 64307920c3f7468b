//! Build the order-n matrix and compare its eigenvalues with 2k^2.
//!
//!     cargo run --example closed_form_spectrum -- 12

use perfectchain::eigen::{self, Method};
use perfectchain::jacobi::build_theorem1;

fn main() -> perfectchain::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(8);
    let m = build_theorem1(n)?;
    println!("a = {:?}", m.diag());
    println!("b = {:?}", m.offdiag());

    let ql = eigen::eigenvalues_with(&m, 1e-14, Method::Ql)?;
    let bis = eigen::eigenvalues_with(&m, 1e-14, Method::Bisection)?;
    println!("{:>4} {:>10} {:>24} {:>24}", "k", "2k^2", "QL", "bisection");
    for k in 0..n {
        println!(
            "{k:>4} {:>10} {:>24.15} {:>24.15}",
            2 * k * k,
            ql[k],
            bis[k]
        );
    }
    Ok(())
}
