//! Parsing of exact rational literals: `n`, `n/d`, or a finite decimal.

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RationalError {
    /// Not a literal of any accepted form.
    Syntax,
    ZeroDenominator,
    /// Too many digits to represent exactly.
    Overflow,
}

pub fn parse_rational(text: &str) -> Result<Rational, RationalError> {
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_digits(num)?;
        let den = parse_digits(den)?;
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if int.is_empty() && frac.is_empty() {
            return Err(RationalError::Syntax);
        }
        let int = if int.is_empty() {
            0
        } else {
            parse_digits(int)?
        };
        if frac.is_empty() {
            return Ok(Rational::from_integer(int));
        }
        let frac_value = parse_digits(frac)?;
        let scale = u32::try_from(frac.len())
            .ok()
            .and_then(|e| 10i64.checked_pow(e))
            .ok_or(RationalError::Overflow)?;
        let num = int
            .checked_mul(scale)
            .and_then(|n| n.checked_add(frac_value))
            .ok_or(RationalError::Overflow)?;
        return Ok(Rational::new(num, scale));
    }
    Ok(Rational::from_integer(parse_digits(text)?))
}

fn parse_digits(s: &str) -> Result<i64, RationalError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(RationalError::Syntax);
    }
    s.parse::<i64>().map_err(|_| RationalError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_rational("1"), Ok(Rational::new(1, 1)));
        assert_eq!(parse_rational("0"), Ok(Rational::new(0, 1)));
        assert_eq!(parse_rational("2/4"), Ok(Rational::new(1, 2)));
        assert_eq!(parse_rational("0.5"), Ok(Rational::new(1, 2)));
        assert_eq!(parse_rational(".25"), Ok(Rational::new(1, 4)));
        assert_eq!(parse_rational("1."), Ok(Rational::new(1, 1)));
        assert_eq!(parse_rational("0.125"), Ok(Rational::new(1, 8)));
    }

    #[test]
    fn rejected_forms() {
        assert_eq!(parse_rational(""), Err(RationalError::Syntax));
        assert_eq!(parse_rational("-1"), Err(RationalError::Syntax));
        assert_eq!(parse_rational("1/0"), Err(RationalError::ZeroDenominator));
        assert_eq!(parse_rational("a/2"), Err(RationalError::Syntax));
        assert_eq!(parse_rational("1e3"), Err(RationalError::Syntax));
        assert_eq!(parse_rational("."), Err(RationalError::Syntax));
        assert_eq!(
            parse_rational("0.00000000000000000000001"),
            Err(RationalError::Overflow)
        );
    }
}
