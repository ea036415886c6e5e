use std::fmt;

use rug::{Complex, Float};

use crate::error::{Error, Result};

/// z = x + iy with y > 0.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperHalfPoint(Complex);

impl UpperHalfPoint {
    pub fn new(z: Complex) -> Result<Self> {
        if !(*z.imag() > 0) {
            return Err(Error::Domain(format!("{} is not in the upper half-plane", z.to_string_radix(10, Some(20)))));
        }
        Ok(Self(z))
    }

    pub fn from_parts(x: Float, y: Float) -> Result<Self> {
        let bits = x.prec().max(y.prec());
        Self::new(Complex::with_val(bits, (x, y)))
    }

    pub fn parse(s: &str, bits: u32) -> Result<Self> {
        Self::new(parse_complex(s, bits)?)
    }

    pub fn z(&self) -> &Complex {
        &self.0
    }

    pub fn x(&self) -> &Float {
        self.0.real()
    }

    pub fn y(&self) -> &Float {
        self.0.imag()
    }
}

impl fmt::Display for UpperHalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_complex(&self.0, 20))
    }
}

/// Reads "0.3+0.5i", "i/2", "(1+3i)/5", "-0.1-0.25i", "2".
pub fn parse_complex(s: &str, bits: u32) -> Result<Complex> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot read complex number '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some(pos) = t.rfind('/') {
        let (num, den) = (&t[..pos], &t[pos + 1..]);
        let num = num.strip_prefix('(').and_then(|n| n.strip_suffix(')')).unwrap_or(num);
        let den = Float::parse(den).map_err(|_| bad())?;
        let den = Float::with_val(bits, den);
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(parse_complex(num, bits)? / den);
    }
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let mut split = 0;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = k;
                break;
            }
        }
        let (re, im) = body.split_at(split);
        let im = match im {
            "" | "+" => "1".to_string(),
            "-" => "-1".to_string(),
            x => x.trim_start_matches('+').to_string(),
        };
        let re = if re.is_empty() { Float::new(bits) } else { Float::with_val(bits, Float::parse(re).map_err(|_| bad())?) };
        let im = Float::with_val(bits, Float::parse(&im).map_err(|_| bad())?);
        return Ok(Complex::with_val(bits, (re, im)));
    }
    let re = Float::with_val(bits, Float::parse(&t).map_err(|_| bad())?);
    Ok(Complex::with_val(bits, re))
}

/// "re+imi" with `digits` significant digits per part.
pub fn format_complex(z: &Complex, digits: usize) -> String {
    let re = z.real().to_string_radix(10, Some(digits));
    let im = z.imag().to_string_radix(10, Some(digits));
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(s: &str) -> (f64, f64) {
        let z = parse_complex(s, 100).unwrap();
        (z.real().to_f64(), z.imag().to_f64())
    }

    #[test]
    fn parsing() {
        assert_eq!(parts("0.3+0.5i"), (0.3, 0.5));
        assert_eq!(parts("i/2"), (0.0, 0.5));
        assert_eq!(parts("(1+3i)/5"), (0.2, 0.6));
        assert_eq!(parts("-0.1-0.25i"), (-0.1, -0.25));
        assert_eq!(parts("i"), (0.0, 1.0));
        assert_eq!(parts("-i"), (0.0, -1.0));
        assert_eq!(parts("1e-3+2e-1i"), (0.001, 0.2));
        assert_eq!(parts("2"), (2.0, 0.0));
        assert!(parse_complex("abc", 100).is_err());
        assert!(UpperHalfPoint::parse("1-i", 100).is_err());
    }
}
