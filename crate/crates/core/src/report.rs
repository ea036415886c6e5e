//! Machine-readable verification records.

use rug::Complex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::numerics::abs_f64;
use crate::theta::format_complex;

/// One verified identity: both sides, their distance and the tolerance applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub suite: String,
    pub inputs: Value,
    pub lhs: String,
    pub rhs: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl VerificationRecord {
    /// Builds a record with `pass = residual ≤ tolerance`; sides are rendered with `digits` significant digits.
    ///
    /// The residual is floored at 10^{−digits}·max(|lhs|, |rhs|): differences below the
    /// declared precision are not resolved, even though guard digits may make them smaller.
    pub fn new(suite: &str, inputs: Value, lhs: &Complex, rhs: &Complex, residual: f64, tolerance: f64, digits: u32) -> Self {
        let scale = abs_f64(lhs).max(abs_f64(rhs));
        let residual = residual.max(scale * 10f64.powi(-(digits as i32)));
        Self::from_strings(
            suite,
            inputs,
            format_complex(lhs, digits as usize),
            format_complex(rhs, digits as usize),
            residual,
            tolerance,
        )
    }

    pub fn from_strings(suite: &str, inputs: Value, lhs: String, rhs: String, residual: f64, tolerance: f64) -> Self {
        Self {
            suite: suite.to_string(),
            inputs,
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual <= tolerance,
            runtime_ms: 0,
        }
    }

    /// A failed record carrying an error message in place of the two sides.
    pub fn failure(suite: &str, inputs: Value, message: String, tolerance: f64) -> Self {
        Self {
            suite: suite.to_string(),
            inputs,
            lhs: format!("error: {message}"),
            rhs: String::new(),
            residual: f64::INFINITY,
            tolerance,
            pass: false,
            runtime_ms: 0,
        }
    }

    pub fn with_runtime(mut self, ms: u64) -> Self {
        self.runtime_ms = ms;
        self
    }

    /// Resets the pass flag for a new tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.residual <= tolerance;
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_json_line(line: &str) -> crate::Result<Self> {
        serde_json::from_str(line).map_err(|e| crate::Error::Parse(e.to_string()))
    }

    pub fn csv_header() -> &'static str {
        "suite,inputs,lhs_re,lhs_im,rhs_re,rhs_im,residual,tolerance,pass,runtime_ms"
    }

    /// One CSV row; complex sides are split into real and imaginary columns.
    pub fn to_csv_row(&self) -> String {
        let (lr, li) = split_complex(&self.lhs);
        let (rr, ri) = split_complex(&self.rhs);
        let inputs = serde_json::to_string(&self.inputs).unwrap_or_default();
        let cells = [
            self.suite.clone(),
            inputs,
            lr,
            li,
            rr,
            ri,
            format_residual(self.residual),
            format!("{:e}", self.tolerance),
            self.pass.to_string(),
            self.runtime_ms.to_string(),
        ];
        cells.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(",")
    }
}

fn format_residual(r: f64) -> String {
    if r.is_finite() {
        format!("{r:e}")
    } else {
        "inf".into()
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Splits "a+bi" / "a-bi" into its two decimal parts; other strings go to the real column.
fn split_complex(s: &str) -> (String, String) {
    let Some(body) = s.strip_suffix('i') else {
        return (s.to_string(), String::new());
    };
    let bytes = body.as_bytes();
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            return (body[..k].to_string(), body[k..].trim_start_matches('+').to_string());
        }
    }
    (s.to_string(), String::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::parse_complex;
    use serde_json::json;

    #[test]
    fn pass_flag_follows_tolerance() {
        let a = Complex::with_val(200, (1.5, -2));
        let r = VerificationRecord::new("t", json!({"x": 1}), &a, &a, 1e-12, 1e-10, 50);
        assert!(r.pass);
        let r = r.with_tolerance(1e-13);
        assert!(!r.pass);
    }

    #[test]
    fn residual_is_floored_at_declared_precision() {
        let a = Complex::with_val(200, (3, 4));
        let r = VerificationRecord::new("t", json!({}), &a, &a, 0.0, 1e-60, 50);
        assert_eq!(r.residual, 5e-50);
        assert!(!r.pass);
        let z = Complex::new(200);
        assert_eq!(VerificationRecord::new("t", json!({}), &z, &z, 0.0, 0.0, 50).residual, 0.0);
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let bits = 200;
        let a = parse_complex("0.1234567890123456789012345678901234567890123456789+3.25e-7i", bits).unwrap();
        let b = Complex::with_val(bits, (-7, 0));
        let r = VerificationRecord::new("strange", json!({"alpha": "1/3"}), &a, &b, 3.0e-41, 1e-10, 50);
        let back = VerificationRecord::from_json_line(&r.to_json_line()).unwrap();
        assert_eq!(back, r);
        let a2 = parse_complex(&back.lhs, bits).unwrap();
        let d = Complex::with_val(bits, &a2 - &a);
        assert!(crate::numerics::abs_f64(&d) < 1e-48);
    }

    #[test]
    fn csv_splits_complex() {
        assert_eq!(split_complex("1.5e-3-2e+4i"), ("1.5e-3".into(), "-2e+4".into()));
        assert_eq!(split_complex("-1+2i"), ("-1".into(), "2".into()));
        let a = Complex::with_val(100, (1, 2));
        let r = VerificationRecord::new("s", json!({"f": "chi12", "g": "1 0 24 1"}), &a, &a, 0.0, 1.0, 10);
        assert_eq!(r.to_csv_row().matches(',').count() >= 9, true);
    }
}
