//! Small shared helpers for exact rationals in text formats.

use num_rational::Rational64;

use crate::error::{Error, Result};

/// Parse `"p"` or `"p/q"` (optionally signed) into an exact rational.
pub fn parse_rational64(s: &str) -> Result<Rational64> {
    let bad = |msg: &str| Error::Schema(format!("invalid rational {s:?}: {msg}"));
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: i64 = num_str.parse().map_err(|_| bad("numerator is not an integer"))?;
    let den: i64 = den_str.parse().map_err(|_| bad("denominator is not an integer"))?;
    if den == 0 {
        return Err(bad("zero denominator"));
    }
    Ok(Rational64::new(num, den))
}

/// Canonical text form: `"p"` when integral, else reduced `"p/q"` with `q > 0`.
pub fn rational64_to_string(q: Rational64) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational64("3/2").unwrap(), Rational64::new(3, 2));
        assert_eq!(parse_rational64("-4/6").unwrap(), Rational64::new(-2, 3));
        assert_eq!(parse_rational64("5").unwrap(), Rational64::new(5, 1));
        assert_eq!(rational64_to_string(Rational64::new(4, 2)), "2");
        assert_eq!(rational64_to_string(Rational64::new(-5, 6)), "-5/6");
        assert!(parse_rational64("1/0").is_err());
        assert!(parse_rational64("x").is_err());
    }
}
