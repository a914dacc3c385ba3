/// Significant digits in every number written by the CLI.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with 12 significant digits, trailing zeros trimmed.
/// Magnitudes below `1e-4` use lowercase scientific notation.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    if x.abs() < 1e-4 {
        let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
        let (mantissa, exp) = s.split_once('e').expect("LowerExp always has an exponent");
        return format!("{}e{}", trim_fraction(mantissa), exp);
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (SIGNIFICANT_DIGITS as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let trimmed = trim_fraction(&s);
    if trimmed == "-0" {
        "0".into()
    } else {
        trimmed.to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
