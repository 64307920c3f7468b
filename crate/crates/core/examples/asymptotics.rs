//! Large-n behaviour: centre-to-end ratios against their Stirling estimates
//! and the scaled matrix entries against the limit parabolas.

use perfectchain::chain::asymptotic_report;

fn main() -> perfectchain::Result<()> {
    println!(
        "{:>5} {:>12} {:>12} {:>12} {:>12} {:>10} {:>10}",
        "n", "M_mid/M_1", "2/sqrt(pi n)", "K_mid/K_1", "sqrt(n/pi)", "dev a", "dev b"
    );
    for n in [10, 25, 50, 100, 200, 400] {
        let r = asymptotic_report(n)?;
        println!(
            "{n:>5} {:>12.6} {:>12.6} {:>12.4} {:>12.4} {:>10.2e} {:>10.2e}",
            r.mass_ratio,
            r.mass_ratio_predicted,
            r.spring_ratio,
            r.spring_ratio_predicted,
            r.diag_parabola_rel_dev(),
            r.offdiag_parabola_rel_dev()
        );
    }
    Ok(())
}
