//! Coprime integer masses and springs of the perfect chain for n = 3..10.

use perfectchain::chain::magic_design;
use perfectchain::exact::format_rational;

fn main() -> perfectchain::Result<()> {
    for n in 3..=10 {
        let d = magic_design(n)?;
        let join = |v: &[num_bigint::BigInt]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        println!(
            "n = {n:>2}  omega^2 = {}",
            format_rational(&d.omega_squared)
        );
        println!("  M: {}", join(&d.masses));
        println!("  K: {}", join(&d.springs));
    }
    Ok(())
}
