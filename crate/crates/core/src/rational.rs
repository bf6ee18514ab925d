//! Exact rational numbers used for action values.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn rat(numer: i128, denom: i128) -> Rational {
    Ratio::new(numer, denom)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p/q`, an integer, or a finite decimal like `-0.125` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Input(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    if frac_part.len() > 30 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = 10i128.pow(frac_part.len() as u32);
    let r = Ratio::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// Rounds `x` to the nearest multiple of `tolerance` (a power of ten such as
/// `1e-9`) and returns it as an exact rational.
pub fn quantize(x: f64, tolerance: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Input(format!("cannot quantize {x}")));
    }
    let denom = (1.0 / tolerance).round() as i128;
    let numer = (x * denom as f64).round() as i128;
    Ok(Ratio::new(numer, denom))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_negative(r: &Rational) -> bool {
    r < &Rational::zero()
}
