//! Deterministic number formatting shared by every text output.

/// Rounds to 9 significant digits and prints the shortest decimal that
/// reads back as the rounded value.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("scientific notation parses");
    if rounded == 0.0 {
        return "0".into();
    }
    format!("{rounded}")
}

/// `key=value` line.
pub fn kv(key: &str, value: f64) -> String {
    format!("{key}={}", fmt_float(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_float(0.5), "0.5");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_float(2.0 / 3f64.powf(1.5)), "0.384900179");
        assert_eq!(fmt_float(252.0), "252");
        assert_eq!(fmt_float(0.01 + 66.0 * 0.00995), "0.6667");
        assert_eq!(fmt_float(-0.0), "0");
        assert_eq!(fmt_float(1.23456789e-7), "0.000000123456789");
        assert_eq!(fmt_float(f64::NAN), "nan");
        assert_eq!(kv("a", 2.625), "a=2.625");
    }

    #[test]
    fn rounding_reads_back() {
        for &x in &[std::f64::consts::PI, 1e-300, 6.02214076e23, -0.1 - 0.2] {
            let s = fmt_float(x);
            let back: f64 = s.parse().unwrap();
            assert!((back - x).abs() <= 5e-9 * x.abs());
        }
    }
}
