//! Number formatting shared by the CSV writers.

/// `x` rounded to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Shortest decimal form of `x` rounded to 12 significant digits; very small
/// and very large magnitudes use exponent notation.
pub fn csv_number(x: f64) -> String {
    let r = round_sig(x, 12);
    if r == 0.0 {
        "0".to_string()
    } else if r.abs() < 1e-4 || r.abs() >= 1e15 {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}
