use std::fmt;
use std::ops::{Add, Neg, Sub};

use rug::{Complex, Float, Rational};

/// An exact complex number with rational components.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        Self { re: re.into(), im: Rational::new() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn half(&self) -> Self {
        Self { re: Rational::from(&self.re / 2u32), im: Rational::from(&self.im / 2u32) }
    }

    pub fn to_complex(&self, bits: u32) -> Complex {
        Complex::with_val(bits, (Float::with_val(bits, &self.re), Float::with_val(bits, &self.im)))
    }
}

impl From<i64> for GaussRat {
    fn from(v: i64) -> Self {
        Self::real(v)
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: Rational::from(&self.re + &o.re), im: Rational::from(&self.im + &o.im) }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: Rational::from(&self.re - &o.re), im: Rational::from(&self.im - &o.im) }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            let sign = if self.im < 0 { "-" } else { "+" };
            write!(f, "{}{sign}{}i", self.re, Rational::from(self.im.abs_ref()))
        }
    }
}
