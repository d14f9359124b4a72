use egyb_core::Complex64;

const SIG_DIGITS: i32 = 10;

/// `%.10g`-style rendering: fixed notation for moderate magnitudes, otherwise
/// scientific, with trailing zeros removed.
pub fn real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    // rounding can bump the exponent, e.g. 9.9999999999 -> 10
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, e) = sci.split_once('e').expect("scientific notation");
    let exp = e.parse::<i32>().unwrap_or(exp);
    if (-5..SIG_DIGITS).contains(&exp) {
        let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return real(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{} {sign} {}i", real(z.re), real(z.im.abs()))
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
