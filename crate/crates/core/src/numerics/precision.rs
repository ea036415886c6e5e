use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Smallest accepted working precision in decimal digits.
pub const MIN_DIGITS: u32 = 15;
pub const DEFAULT_DIGITS: u32 = 50;
pub const DEFAULT_TRUNC_MARGIN: u32 = 10;
/// Hidden digits carried on top of `digits` by every evaluator.
pub const GUARD_DIGITS: u32 = 20;

/// Working precision handed to every numerical routine.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionContext {
    digits: u32,
    /// Absolute error goal for quadrature.
    quad_target: f64,
    /// Extra decimal digits of headroom used when truncating series.
    trunc_margin: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::with_digits(DEFAULT_DIGITS).expect("default precision is valid")
    }
}

impl PrecisionContext {
    pub fn new(digits: u32, quad_target: f64, trunc_margin: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Precision(digits, MIN_DIGITS));
        }
        if !(quad_target > 0.0) || !quad_target.is_finite() {
            return Err(Error::Domain(format!("quad_target must be positive, got {quad_target}")));
        }
        Ok(Self { digits, quad_target, trunc_margin })
    }

    /// `digits` with the default margin and a quadrature goal of 10^-(digits-10).
    pub fn with_digits(digits: u32) -> Result<Self> {
        let goal = 10f64.powi(-(digits.saturating_sub(10) as i32));
        Self::new(digits, goal.max(f64::MIN_POSITIVE), DEFAULT_TRUNC_MARGIN)
    }

    pub fn with_quad_target(&self, quad_target: f64) -> Result<Self> {
        Self::new(self.digits, quad_target, self.trunc_margin)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn quad_target(&self) -> f64 {
        self.quad_target
    }

    pub fn trunc_margin(&self) -> u32 {
        self.trunc_margin
    }

    /// Binary precision of intermediate values, guard digits included.
    pub fn bits(&self) -> u32 {
        ((self.digits + GUARD_DIGITS) as f64 * std::f64::consts::LOG2_10).ceil() as u32
    }

    /// (digits + trunc_margin) · ln 10, the exponent that series tails must clear.
    pub fn target_ln(&self) -> f64 {
        (self.digits + self.trunc_margin) as f64 * std::f64::consts::LN_10
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), v)
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.bits(), v)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }
}

/// Principal argument in (−π, π]; a negative real number gets +π whatever the sign of its zero imaginary part.
pub fn principal_arg(w: &Complex) -> Float {
    let prec = w.prec().0;
    if w.imag().is_zero() {
        if *w.real() < 0 {
            return Float::with_val(prec, Constant::Pi);
        }
        return Float::new(prec);
    }
    Float::with_val(prec, w.imag().atan2_ref(w.real()))
}

/// `|w|^k e^{i k arg}` for an explicitly supplied argument.
pub fn pow_with_arg(w: &Complex, arg: &Float, k: f64) -> Complex {
    let prec = w.prec().0;
    let r = Float::with_val(prec, w.abs_ref());
    if r.is_zero() {
        return Complex::new(prec);
    }
    let lnr = r.ln() * k;
    let phase = Float::with_val(prec, arg * k);
    Complex::with_val(prec, (lnr, phase)).exp()
}

/// `w^k = exp(k (ln|w| + i arg w))` with the principal argument.
pub fn principal_pow(w: &Complex, k: f64) -> Complex {
    pow_with_arg(w, &principal_arg(w), k)
}

/// Power of a nonzero real number reached from the lower half-plane: a negative base uses arg −π.
pub fn real_pow_from_below(w: &Float, k: f64) -> Complex {
    let prec = w.prec();
    let arg = if *w < 0 { -Float::with_val(prec, Constant::Pi) } else { Float::new(prec) };
    pow_with_arg(&Complex::with_val(prec, w), &arg, k)
}

/// `e^{2πi r}` for an exact rational r, reducing r mod 1 first.
pub fn exp_two_pi_i(r: &rug::Rational, bits: u32) -> Complex {
    let frac = {
        let floor = r.clone().floor();
        rug::Rational::from(r - floor)
    };
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let angle = two_pi * Float::with_val(bits, &frac);
    let (s, c) = angle.sin_cos(Float::new(bits));
    Complex::with_val(bits, (c, s))
}

/// Magnitude of a complex number as f64, for diagnostics and tolerance tests.
pub fn abs_f64(z: &Complex) -> f64 {
    Float::with_val(z.prec().0, z.abs_ref()).to_f64()
}
