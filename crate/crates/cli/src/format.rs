/// `%.17g`: shortest of fixed or scientific notation with 17 significant
/// digits, trailing zeros trimmed. Round-trips every finite `f64`.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        trim(&format!("{:.*}", (16 - exp) as usize, x)).to_string()
    } else {
        format!("{}e{}{:02}", trim(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(g17).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf() {
        assert_eq!(g17(1.0), "1");
        assert_eq!(g17(0.8), "0.80000000000000004");
        assert_eq!(g17(0.1 + 0.2), "0.30000000000000004");
        assert_eq!(g17(5.27e-3), "0.0052700000000000004");
        assert_eq!(g17(3.5e-26), "3.4999999999999998e-26");
        assert_eq!(g17(-1.5e20), "-1.5e+20");
        assert_eq!(g17(0.0), "0");
    }

    #[test]
    fn round_trips() {
        for x in [std::f64::consts::PI, 1e-300, 123456.789, -2.0 / 3.0, f64::MAX, f64::MIN_POSITIVE] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
