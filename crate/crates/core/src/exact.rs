//! Exact integer and rational helpers.
//!
//! Big integers and rationals come from `num-bigint`/`num-rational`; this
//! module adds the handful of number-theoretic operations the rest of the
//! crate needs on top of them.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use crate::error::{domain, Error, Result};

/// Binomial coefficient `C(n, k)`; zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for j in 0..k {
        // acc * (n - j) is always divisible by (j + 1)
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Integer square root when `v` is a perfect square, `None` otherwise.
pub fn exact_isqrt(v: &BigInt) -> Result<Option<BigInt>> {
    if v.is_negative() {
        return domain(format!("square root of negative integer {v}"));
    }
    if v.is_zero() {
        return Ok(Some(BigInt::zero()));
    }
    // Newton from above: x0 >= sqrt(v), iterates decrease monotonically to floor(sqrt(v)).
    let mut x = BigInt::one() << v.bits().div_ceil(2);
    loop {
        let y = (&x + v / &x) >> 1u32;
        if y >= x {
            break;
        }
        x = y;
    }
    Ok(if &x * &x == *v { Some(x) } else { None })
}

/// Rescale a positive rational sequence to coprime positive integers.
///
/// Returns the integers together with the factor `scale` such that
/// `ints[i] = scale * seq[i]`.
pub fn normalize_to_coprime_integers(seq: &[BigRational]) -> Result<(Vec<BigInt>, BigRational)> {
    if seq.is_empty() {
        return domain("cannot normalize an empty sequence");
    }
    if let Some(bad) = seq.iter().find(|x| !x.is_positive()) {
        return domain(format!("sequence entries must be positive, found {bad}"));
    }
    let lcm = seq.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = seq.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let ints = scaled.into_iter().map(|x| x / &gcd).collect();
    Ok((ints, BigRational::new(lcm, gcd)))
}

pub fn gcd_all(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Nearest `f64`; falls back to a digit-level quotient when numerator and
/// denominator individually overflow.
pub fn to_f64(x: &BigRational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let num = x.numer().to_f64().unwrap_or(f64::NAN);
    let den = x.denom().to_f64().unwrap_or(f64::NAN);
    if num.is_finite() && den.is_finite() {
        return num / den;
    }
    let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(900);
    let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift).to_f64().unwrap_or(0.0);
    n / d
}

/// Render `p/q`, or just `p` for integers.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `p`, `p/q`, or a plain decimal such as `-12.375` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(all);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pascal_row(n: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for k in 1..row.len() {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
        row
    }

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(5, 6), BigInt::zero());
    }

    #[test]
    fn binomial_18_9_matches_pascal_triangle() {
        let row = pascal_row(18);
        assert_eq!(row[9], BigInt::from(48620));
        assert_eq!(binomial(18, 9), row[9]);
    }

    #[test]
    fn binomial_beyond_u64() {
        // C(2n-2, n-1) for n = 40 overflows 64 bits
        let row = pascal_row(78);
        assert_eq!(binomial(78, 39), row[39]);
        assert!(binomial(78, 39).to_u64().is_none());
    }

    #[test]
    fn pascal_identity_up_to_60() {
        for n in 1..=60u64 {
            for k in -1..=(n as i64 + 1) {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(
            exact_isqrt(&BigInt::from(36)).unwrap(),
            Some(BigInt::from(6))
        );
        assert_eq!(exact_isqrt(&BigInt::from(6)).unwrap(), None);
        assert_eq!(exact_isqrt(&BigInt::from(0)).unwrap(), Some(BigInt::zero()));
        assert_eq!(exact_isqrt(&BigInt::from(1)).unwrap(), Some(BigInt::one()));
        assert!(exact_isqrt(&BigInt::from(-4)).is_err());
    }

    #[test]
    fn normalize_examples() {
        let (ints, scale) =
            normalize_to_coprime_integers(&[int(1), rational(2, 3), int(1)]).unwrap();
        assert_eq!(
            ints,
            vec![BigInt::from(3), BigInt::from(2), BigInt::from(3)]
        );
        assert_eq!(scale, int(3));

        let (ints, scale) = normalize_to_coprime_integers(&[int(5)]).unwrap();
        assert_eq!(ints, vec![BigInt::one()]);
        assert_eq!(scale, rational(1, 5));

        let seq = [int(4), rational(36, 7), rational(36, 7), int(4)];
        let (ints, scale) = normalize_to_coprime_integers(&seq).unwrap();
        assert_eq!(ints, [7, 9, 9, 7].map(BigInt::from).to_vec());
        assert_eq!(scale, rational(7, 4));

        assert!(normalize_to_coprime_integers(&[]).is_err());
        assert!(normalize_to_coprime_integers(&[int(0)]).is_err());
    }

    #[test]
    fn parse_decimals() {
        assert_eq!(parse_rational("8").unwrap(), int(8));
        assert_eq!(parse_rational(" -12.375 ").unwrap(), rational(-99, 8));
        assert_eq!(parse_rational("2.5e1").unwrap(), int(25));
        assert_eq!(parse_rational("3/6").unwrap(), rational(1, 2));
        assert_eq!(parse_rational(".5").unwrap(), rational(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = BigRational::new(binomial(2000, 1000), binomial(2000, 999));
        assert!((to_f64(&big) - 1001.0 / 1000.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn isqrt_of_square(bytes in proptest::collection::vec(any::<u8>(), 1..64)) {
            let r = BigInt::from_bytes_le(num_bigint::Sign::Plus, &bytes);
            let sq = &r * &r;
            prop_assert_eq!(exact_isqrt(&sq).unwrap(), Some(r.clone()));
            if !r.is_zero() {
                prop_assert_eq!(exact_isqrt(&(sq + 1)).unwrap(), None);
            }
        }

        #[test]
        fn normalize_idempotent_on_coprime(values in proptest::collection::vec(1i64..10_000, 1..12)) {
            let seq: Vec<BigRational> = values.iter().map(|&v| int(v)).collect();
            let (ints, _) = normalize_to_coprime_integers(&seq).unwrap();
            let again: Vec<BigRational> = ints.iter().cloned().map(BigRational::from_integer).collect();
            let (ints2, scale2) = normalize_to_coprime_integers(&again).unwrap();
            prop_assert_eq!(gcd_all(&ints), BigInt::one());
            prop_assert_eq!(ints2, ints);
            prop_assert_eq!(scale2, int(1));
        }
    }
}
