/// Formats like C's `%.12g`: twelve significant digits, trailing zeros
/// removed, scientific notation outside `1e-4 <= |x| < 1e12`.
pub fn g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim(mantissa), exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to the value [`g12`] prints.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        g12(x).parse().unwrap_or(x)
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(g12(0.0), "0");
        assert_eq!(g12(1.0), "1");
        assert_eq!(g12(-0.5), "-0.5");
        assert_eq!(g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(g12(2.0 / 3.0 * 100.0), "66.6666666667");
        assert_eq!(g12(1e-5), "1e-05");
        assert_eq!(g12(1.5e-10), "1.5e-10");
        assert_eq!(g12(123456789012.0), "123456789012");
        assert_eq!(g12(1234567890123.0), "1.23456789012e+12");
        assert_eq!(g12(9.9999999999999), "10");
        assert_eq!(g12(0.0001), "0.0001");
        assert_eq!(g12(f64::NAN), "nan");
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [0.1 + 0.2, 1.0 / 7.0, -3.0e-9 / 7.0, 12345.678901234567] {
            assert_eq!(g12(round12(x)), g12(x));
        }
    }
}
