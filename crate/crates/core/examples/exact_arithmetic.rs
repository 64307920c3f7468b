//! The exact helpers behind the integer tables.

use perfectchain::exact::{
    binomial, exact_isqrt, format_rational, normalize_to_coprime_integers, parse_rational, rational,
};

fn main() -> perfectchain::Result<()> {
    println!("C(18, 9) = {}", binomial(18, 9));
    println!(
        "C(400, 200) has {} digits",
        binomial(400, 200).to_string().len()
    );

    let square = binomial(60, 30) * binomial(60, 30);
    println!(
        "isqrt(C(60,30)^2) = {:?}",
        exact_isqrt(&square)?.map(|r| r.to_string())
    );
    println!("isqrt(C(60,30)^2 + 1) = {:?}", exact_isqrt(&(square + 1))?);

    let (ints, scale) =
        normalize_to_coprime_integers(&[rational(1, 1), rational(3, 5), rational(9, 35)])?;
    println!(
        "1, 3/5, 9/35 -> {:?} (scale {})",
        ints.iter().map(ToString::to_string).collect::<Vec<_>>(),
        format_rational(&scale)
    );
    println!(
        "parse 1.25e-2 = {}",
        format_rational(&parse_rational("1.25e-2")?)
    );
    Ok(())
}
