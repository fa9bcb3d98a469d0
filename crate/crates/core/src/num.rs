//! Float formatting for output files.

use std::fmt;

/// Displays an `f64` in its shortest round-trip form, switching to exponent
/// notation for very small or very large magnitudes so that values such as
/// `3.9e-25` do not print as a long run of zeros. Parsing the output with
/// `str::parse::<f64>` returns the original value exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}
