//! Deterministic, locale-independent number formatting for CSV output.

/// Formats a real with the shortest representation that round-trips its
/// value rounded to 9 significant digits. Output is byte-deterministic and
/// never depends on locale.
pub fn fmt_real(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    // Round to 9 significant digits, then let the shortest round-trip
    // formatter print that value (its shortest form has ≤ 9 digits).
    let rounded: f64 = format!("{v:.8e}").parse().expect("round-trip parse");
    let s = format!("{rounded}");
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}
