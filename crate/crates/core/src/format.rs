//! Deterministic number formatting for text outputs.

/// Shortest representation that round-trips (at most 17 significant digits).
/// Plain notation for `1e-5 <= |x| < 1e16`, scientific otherwise.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [
            0.1,
            1.0 / 3.0,
            2.0,
            1e-7,
            6.02e23,
            -123.456,
            std::f64::consts::PI,
            5e-324,
        ] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_f64(2.0), "2");
        assert_eq!(fmt_f64(1e-7), "1e-7");
        assert_eq!(fmt_f64(0.0), "0");
    }
}
