/// Fixed-notation rendering with 12 significant digits.
pub fn float12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::float12;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(float12(0.53125), "0.531250000000");
        assert_eq!(float12(2.0), "2.00000000000");
        assert_eq!(float12(1234.5), "1234.50000000");
        assert_eq!(float12(0.0), "0");
        assert_eq!(float12(f64::INFINITY), "inf");
    }
}
